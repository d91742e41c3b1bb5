import math

import numpy as np
import pytest

import dloci

BELL = {"dims": [2, 2], "vectors": [["1", "0", "0", "1"]]}
PRODUCT_MIX = {
    "dims": [2, 2],
    "weights": ["1", "2"],
    "vectors": [["1", "0", "0", "0"], ["1", "1", "1", "1"]],
}


def test_exact_rank_and_det():
    assert dloci.rank_exact([["1", "2"], ["2", "4"]]) == 1
    assert dloci.det_exact([["1", "i"], ["-i", "3"]]) == "2"


def test_hesse_cubic_matches_pencil_det():
    ens = {
        "dims": [3, 3],
        "vectors": [
            ["2", "0", "0", "0", "1", "0", "0", "0", "1"],
            ["0", "3", "0", "0", "0", "1", "1", "0", "0"],
            ["0", "0", "5", "1", "0", "0", "0", "1", "0"],
        ],
    }
    assert dloci.pencil_det(ens) == dloci.hesse_cubic("2", "3", "5")


def test_bell_is_npt_and_entropy_violated():
    ok, lo = dloci.is_ppt(BELL)
    assert not ok
    assert lo == pytest.approx(-0.5)
    s = dloci.spectra(BELL)
    assert s["entropy_criterion_fulfilled"] == [False, False]


def test_partial_transpose_twice_is_identity():
    rho = dloci.density(BELL)
    pt = dloci.partial_transpose(rho, [2, 2])
    assert np.allclose(dloci.partial_transpose(pt, [2, 2]), rho)
    assert np.allclose(np.sort(dloci.eigvalsh(pt)), [-0.5, 0.5, 0.5, 0.5])


def test_separable_mixture_probe_linear():
    r = dloci.linearity_probe(PRODUCT_MIX, 1, samples=30)
    assert r["verdict"] == "linear"


def test_membership_on_product_line():
    # For PRODUCT_MIX the rank-1 locus contains the zero set of both product forms.
    assert dloci.membership(PRODUCT_MIX, np.array([1, -1], dtype=complex), 1)
    assert not dloci.membership(PRODUCT_MIX, np.array([1, 0.3], dtype=complex), 1)


def test_moduli_pole_raises():
    with pytest.raises(ValueError):
        dloci.moduli_k(3.0)


def test_example1_report_passes():
    rep = dloci.example1_verify()
    assert not rep["failed"]
    statuses = {c["name"]: c["status"] for c in rep["checks"]}
    assert statuses["hesse-determinant"] == "PASS"


def test_isospectral_slice():
    rep = dloci.example1_isospectral_verify([0.3, 0.1, -0.4])
    assert not rep["failed"]
    assert rep["probe"]["verdict"] == "nonlinear"


def test_reports_deterministic():
    assert dloci.example3_verify(seed=7) == dloci.example3_verify(seed=7)


def test_g_value_unit():
    assert abs(dloci.g_value(0.0, 0.0, 0.0) - 3) < 1e-15
    assert math.isfinite(abs(dloci.moduli_k(complex(1, 1))))