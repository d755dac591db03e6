#pragma once
#include <iosfwd>
#include <string>

#include "ptf/polynomial.hpp"

namespace ptf {

// Plain-text polynomial format. Field lines `n`, `degree`, and `terms`
// followed by one line per term:
//
//   n 4
//   degree 2
//   terms 3
//   : -0.5
//   1 : 0.5
//   1 2 : 0.5
//
// Variable indices are 1-based and sorted; an empty index list is the
// constant term. Coefficients are written with 17 significant digits, which
// round-trips a double exactly. Lines starting with '#' are ignored.

void write_polynomial(std::ostream& os, const MultilinearPolynomial& p);
MultilinearPolynomial read_polynomial(std::istream& is);

void save_polynomial(const std::string& path, const MultilinearPolynomial& p);
MultilinearPolynomial load_polynomial(const std::string& path);

std::string format_coeff(double c);  // %.17g

}  // namespace ptf
