#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace gasket {

using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

/// Formats a rational as "num/den" ("num" when den == 1).
inline std::string rat_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "a/b", an integer, or a plain decimal ("0.25") into an exact
/// rational. Decimal strings are read digit-exactly (0.05 -> 1/20).
std::optional<Rat> parse_rational(const std::string& text);

// Scalar abstraction shared by the recursion, matrix and solver templates.
// S is one of: double, Rat, DyadicInterval.
template <class S>
struct num_traits;

template <>
struct num_traits<double> {
  static constexpr bool exact = false;
  static double from_ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rat(const Rat& q) { return q.get_d(); }
  static double mid(double x) { return x; }
};

template <>
struct num_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_ratio(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
  }
  static Rat from_rat(const Rat& q) { return q; }
  static double mid(const Rat& q) { return q.get_d(); }
};

template <class S>
S scalar_ratio(long num, long den) {
  return num_traits<S>::from_ratio(num, den);
}

}  // namespace gasket
