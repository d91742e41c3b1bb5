#pragma once

// JSON forms of the core types. Gaussian rationals are strings ("1/2-3i"),
// floats are [re, im] pairs, matrices carry explicit rows/cols with row-major
// entries.

#include <json.hpp>

#include "dloci/exact.hpp"
#include "dloci/families.hpp"
#include "dloci/numeric.hpp"
#include "dloci/poly.hpp"
#include "dloci/states.hpp"
#include "dloci/varieties.hpp"

namespace dloci {

using Json = nlohmann::json;

Json to_json(const GR& z);
Json to_json(Complex z);
Json to_json(const ExactVector& v);
Json to_json(const FloatVector& v);
Json to_json(const ExactMatrix& m);
Json to_json(const FloatMatrix& m);
Json to_json(const HomogPoly& p, const std::vector<std::string>& names = {});
Json to_json(const Ensemble& e);
Json to_json(const DensityMatrix& rho);
Json to_json(const EigenDecomposition& eig);
Json to_json(const SpectraReport& s);
Json to_json(const ProbeReport& r);
Json to_json(const VerifyReport& r);

GR gr_from_json(const Json& j);
Complex complex_from_json(const Json& j);
/// A matrix whose entries are all strings parses exactly.
ExactMatrix exact_matrix_from_json(const Json& j);
FloatMatrix float_matrix_from_json(const Json& j);
/// {"dims": [...], "weights": [...], "vectors": [[...], ...]}. Vectors whose
/// entries are all strings make an exact ensemble; [re, im] pairs or plain
/// numbers make a float one. Weights are rational strings or numbers and
/// default to 1.
Ensemble ensemble_from_json(const Json& j);
/// A point: strings are parsed as Gaussian rationals, [re, im] or numbers as floats.
FloatVector point_from_json(const Json& j);

}  // namespace dloci
