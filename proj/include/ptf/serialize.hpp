#pragma once
#include "json.hpp"
#include "ptf/checks.hpp"
#include "ptf/ensemble.hpp"
#include "ptf/low_weight.hpp"
#include "ptf/tree.hpp"

// JSON builders for the report records. ordered_json keeps field order
// fixed, which the byte-level determinism contract of the CLI relies on.

namespace ptf {

using json = nlohmann::ordered_json;

json poly_json(const MultilinearPolynomial& p);
json poly_json(const IntegerPolynomial& q);
json restriction_json(const Restriction& rho);
json constants_json(const TheoryConstants& c);
json params_json(const TreeParams& p);
json leaf_json(const LeafInfo& leaf);
json tree_json(const DecompositionTree& tree);
json mass_json(const PathMassReport& r);
json certificate_json(const ApproximationCertificate& cert);
json check_json(const CheckReport& rep);
json ensemble_json(const EnsembleResult& res);

}  // namespace ptf
