"""Degenerating loci of mixed quantum states.

Ensembles are plain dicts: {"dims": [...], "weights": [...], "vectors": [...]}.
Exact entries are strings such as "1/2-3i"; float entries are numbers or
[re, im] pairs. Reports come back as dicts."""

import json

from . import _dloci
from ._dloci import (
    __version__,
    det_exact,
    eigvalsh,
    g_value,
    hesse_cubic,
    moduli_k,
    partial_transpose,
    rank_exact,
    singular_values,
)


def _ens(ensemble):
    return ensemble if isinstance(ensemble, str) else json.dumps(ensemble)


def density(ensemble):
    return _dloci.density(_ens(ensemble))


def is_ppt(ensemble, cut=""):
    return _dloci.is_ppt(_ens(ensemble), cut)


def spectra(ensemble):
    return json.loads(_dloci.spectra(_ens(ensemble)))


def pencil_blocks(ensemble, cut=""):
    return _dloci.pencil_blocks(_ens(ensemble), cut)


def pencil_det(ensemble, cut=""):
    return _dloci.pencil_det(_ens(ensemble), cut)


def membership(ensemble, point, k, cut="", tol=1e-8):
    return _dloci.membership(_ens(ensemble), point, k, cut, tol)


def linearity_probe(ensemble, k, cut="", samples=40, seed=20260101, **tolerances):
    return json.loads(_dloci.linearity_probe(_ens(ensemble), k, cut, samples, seed, **tolerances))


def example1_verify(cubes=("2", "3", "5"), seed=20260101):
    return json.loads(_dloci.example1_verify(list(cubes), seed))


def example1_isospectral_verify(theta, seed=20260101):
    return json.loads(_dloci.example1_isospectral_verify(list(theta), seed))


def example2_verify(e=("0", "0", "1"), seed=20260101):
    return json.loads(_dloci.example2_verify([str(x) for x in e], seed))


def example3_verify(a=None, seed=20260101):
    return json.loads(_dloci.example3_verify(None if a is None else [str(x) for x in a], seed))


def tripartite_verify(theta, other=None, seed=20260101):
    return json.loads(_dloci.tripartite_verify(list(theta), None if other is None else list(other), seed))
