#include "fracdiff/scalar.hpp"

#include <cstdio>

#include "fracdiff/errors.hpp"

namespace fracdiff {

std::string format_scalar(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_scalar(const Rational& x) { return x.str(); }

std::string to_string(Backend b) { return b == Backend::floating ? "floating" : "rational"; }

Backend parse_backend(const std::string& name) {
  if (name == "floating" || name == "float" || name == "double") return Backend::floating;
  if (name == "rational" || name == "exact") return Backend::rational;
  throw DomainError("unknown backend '" + name + "' (expected floating or rational)");
}

}  // namespace fracdiff
