#include "ptf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptf {

std::string format_coeff(double c) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", c);
  return buf;
}

void write_polynomial(std::ostream& os, const MultilinearPolynomial& p) {
  os << "n " << p.n() << "\n";
  os << "degree " << p.degree_bound() << "\n";
  os << "terms " << p.terms().size() << "\n";
  for (const Term& t : p.terms()) {
    std::uint32_t s = t.mask;
    bool first = true;
    while (s) {
      if (!first) os << ' ';
      os << (std::countr_zero(s) + 1);
      first = false;
      s &= s - 1;
    }
    if (!first) os << ' ';
    os << ": " << format_coeff(t.coeff) << "\n";
  }
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw InvalidInputError("polynomial parse error at line " +
                          std::to_string(line) + ": " + what);
}

bool next_content_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    return true;
  }
  return false;
}

long expect_field(std::istream& is, const std::string& name, int& lineno) {
  std::string line;
  if (!next_content_line(is, line, lineno)) {
    parse_fail(lineno, "missing field '" + name + "'");
  }
  std::istringstream ls(line);
  std::string key;
  long value = 0;
  if (!(ls >> key >> value) || key != name) {
    parse_fail(lineno, "expected '" + name + " <integer>'");
  }
  return value;
}

}  // namespace

MultilinearPolynomial read_polynomial(std::istream& is) {
  int lineno = 0;
  long n = expect_field(is, "n", lineno);
  long degree = expect_field(is, "degree", lineno);
  long count = expect_field(is, "terms", lineno);
  if (n < 1 || n > kMaxVariables) parse_fail(lineno, "n out of range");
  if (degree < 0 || degree > n) parse_fail(lineno, "degree out of range");
  if (count < 0) parse_fail(lineno, "negative term count");

  std::vector<Term> terms;
  terms.reserve((std::size_t)count);
  std::string line;
  for (long k = 0; k < count; ++k) {
    if (!next_content_line(is, line, lineno)) {
      parse_fail(lineno, "expected " + std::to_string(count) +
                             " term lines, found " + std::to_string(k));
    }
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) parse_fail(lineno, "missing ':'");
    std::istringstream idx(line.substr(0, colon));
    std::uint32_t mask = 0;
    long var;
    while (idx >> var) {
      if (var < 1 || var > n) parse_fail(lineno, "variable index out of range");
      std::uint32_t bit = std::uint32_t{1} << (var - 1);
      if (mask & bit) parse_fail(lineno, "repeated variable index");
      mask |= bit;
    }
    if (!idx.eof()) parse_fail(lineno, "bad variable list");
    std::istringstream val(line.substr(colon + 1));
    double coeff;
    if (!(val >> coeff)) parse_fail(lineno, "bad coefficient");
    std::string tail;
    if (val >> tail) parse_fail(lineno, "trailing tokens after coefficient");
    if (popcount32(mask) > degree) {
      parse_fail(lineno, "term exceeds the declared degree");
    }
    terms.push_back({mask, coeff});
  }
  return {(int)n, (int)degree, std::move(terms)};
}

void save_polynomial(const std::string& path, const MultilinearPolynomial& p) {
  std::ofstream os(path);
  if (!os) throw InvalidInputError("cannot open for writing: " + path);
  write_polynomial(os, p);
  if (!os.good()) throw ResourceError("write failed: " + path);
}

MultilinearPolynomial load_polynomial(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInputError("cannot open: " + path);
  return read_polynomial(is);
}

}  // namespace ptf
