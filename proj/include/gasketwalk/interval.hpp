#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

#include "gasketwalk/rational.hpp"

namespace gasket {

/// Interval with exact rational endpoints, outward-rounded after every
/// operation to dyadic numbers with a fixed mantissa width. Every true
/// value stays enclosed, so endpoint comparisons are proofs: if
/// a.lo() >= b.hi() then the enclosed values satisfy a >= b.
///
/// The rounding keeps endpoint sizes bounded, which matters because the
/// reduced exact values of the hitting recursion double in digit count
/// per level for most rational parameters.
class DyadicInterval {
 public:
  static constexpr long kPrecisionBits = 512;

  DyadicInterval() : lo_(0), hi_(0) {}
  explicit DyadicInterval(const Rat& v) : lo_(v), hi_(v) { shrink(); }
  DyadicInterval(const Rat& lo, const Rat& hi) : lo_(lo), hi_(hi) {
    assert(lo_ <= hi_);
    shrink();
  }
  explicit DyadicInterval(long v) : lo_(v), hi_(v) {}

  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Rat width() const { return hi_ - lo_; }
  double mid_double() const { return (Rat((lo_ + hi_) / 2)).get_d(); }

  bool contains(const Rat& v) const { return lo_ <= v && v <= hi_; }

  // Certified order relations between enclosed values.
  bool certainly_ge(const DyadicInterval& o) const { return lo_ >= o.hi_; }
  bool certainly_le(const DyadicInterval& o) const { return hi_ <= o.lo_; }
  bool certainly_ge(const Rat& v) const { return lo_ >= v; }
  bool certainly_le(const Rat& v) const { return hi_ <= v; }
  bool certainly_positive() const { return lo_ > 0; }

  friend DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b) {
    return DyadicInterval(Rat(a.lo_ + b.lo_), Rat(a.hi_ + b.hi_));
  }
  friend DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b) {
    return DyadicInterval(Rat(a.lo_ - b.hi_), Rat(a.hi_ - b.lo_));
  }
  friend DyadicInterval operator*(const DyadicInterval& a, const DyadicInterval& b) {
    Rat c1 = a.lo_ * b.lo_, c2 = a.lo_ * b.hi_, c3 = a.hi_ * b.lo_, c4 = a.hi_ * b.hi_;
    Rat lo = std::min(std::min(c1, c2), std::min(c3, c4));
    Rat hi = std::max(std::max(c1, c2), std::max(c3, c4));
    return DyadicInterval(lo, hi);
  }
  friend DyadicInterval operator/(const DyadicInterval& a, const DyadicInterval& b) {
    if (b.lo_ <= 0 && b.hi_ >= 0)
      throw std::domain_error("DyadicInterval: division by interval containing zero");
    Rat c1 = a.lo_ / b.lo_, c2 = a.lo_ / b.hi_, c3 = a.hi_ / b.lo_, c4 = a.hi_ / b.hi_;
    Rat lo = std::min(std::min(c1, c2), std::min(c3, c4));
    Rat hi = std::max(std::max(c1, c2), std::max(c3, c4));
    return DyadicInterval(lo, hi);
  }
  DyadicInterval& operator+=(const DyadicInterval& o) { return *this = *this + o; }
  DyadicInterval& operator-=(const DyadicInterval& o) { return *this = *this - o; }
  DyadicInterval& operator*=(const DyadicInterval& o) { return *this = *this * o; }
  DyadicInterval& operator/=(const DyadicInterval& o) { return *this = *this / o; }

  DyadicInterval abs_gap_to(const Rat& target) const {
    // encloses |v - target| over v in the interval
    Rat lo = lo_ - target, hi = hi_ - target;
    if (lo >= 0) return DyadicInterval(lo, hi);
    if (hi <= 0) return DyadicInterval(Rat(-hi), Rat(-lo));
    return DyadicInterval(Rat(0), std::max(Rat(-lo), hi));
  }

 private:
  // Round lo down / hi up to multiples of 2^-k with k chosen so the
  // mantissa keeps about kPrecisionBits significant bits.
  void shrink() {
    round_endpoint(lo_, /*down=*/true);
    round_endpoint(hi_, /*down=*/false);
  }

  static void round_endpoint(Rat& v, bool down) {
    v.canonicalize();
    const mpz_class& den = v.get_den();
    if (mpz_sizeinbase(den.get_mpz_t(), 2) <= static_cast<size_t>(kPrecisionBits + 8)) return;
    mpz_class num = v.get_num();
    long mag = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
               static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    long k = kPrecisionBits - mag;  // target denominator exponent
    if (k < 0) k = 0;
    // v ~= floor_or_ceil(v * 2^k) / 2^k
    mpz_class scaled_num = num << k;
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), den.get_mpz_t());
    if (!down && r != 0) q += 1;
    mpz_class two_k = mpz_class(1) << k;
    v = Rat(q, two_k);
    v.canonicalize();
  }

  Rat lo_, hi_;
};

template <>
struct num_traits<DyadicInterval> {
  static constexpr bool exact = false;  // certified enclosure, not a point
  static DyadicInterval from_ratio(long num, long den) {
    return DyadicInterval(Rat(num, den));
  }
  static DyadicInterval from_rat(const Rat& q) { return DyadicInterval(q); }
  static double mid(const DyadicInterval& v) { return v.mid_double(); }
};

}  // namespace gasket
