#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gasketwalk/chain.hpp"
#include "gasketwalk/interval.hpp"
#include "gasketwalk/rational.hpp"

namespace gasket {

/// Level-n hitting data: (alpha, beta, gamma) for a walk started next to a
/// corner of the top cell, (a, b, c) for a walk started just after entering
/// a level. Both triples sum to one.
template <class S>
struct HittingState {
  int n = 2;
  S alpha, beta, gamma;
  S a, b, c;
  S denom;          // divisor used to produce this state; meaningful for n > 2
  bool has_denom = false;
};

class RelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when exact state size exceeds the configured cap. Reduced exact
/// values roughly double in digit count per level for most parameters
/// (p = 1/3 is the notable exception), so unbounded exact iteration is not
/// generally possible.
class ExactSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class S>
bool relation_holds(const S& lhs, const S& rhs) {
  const double x = num_traits<S>::mid(lhs), y = num_traits<S>::mid(rhs);
  return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}
template <>
inline bool relation_holds<Rat>(const Rat& lhs, const Rat& rhs) {
  return lhs == rhs;
}
template <>
inline bool relation_holds<DyadicInterval>(const DyadicInterval& lhs, const DyadicInterval& rhs) {
  // an enclosure can only refute equality
  return (lhs - rhs).contains(Rat(0));
}

inline std::size_t rat_bits(const Rat& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

template <class S>
void guard_size(const HittingState<S>&, std::size_t) {}
template <>
inline void guard_size<Rat>(const HittingState<Rat>& s, std::size_t bit_cap) {
  if (bit_cap == 0) return;
  if (rat_bits(s.b) > bit_cap || rat_bits(s.c) > bit_cap)
    throw ExactSizeError(
        "exact state at level " + std::to_string(s.n) + " exceeds " + std::to_string(bit_cap) +
        " bits; use floating mode (or certified-interval verification) beyond this level");
}

}  // namespace detail

/// Default cap on exact numerator/denominator size, chosen so an exact
/// sweep stays interactive. p = 1/3 never comes near it.
inline constexpr std::size_t kExactBitCap = 1u << 18;

/// Closed-form level-2 start values.
template <class S>
HittingState<S> hitting_init(const Chain<S>& chain) {
  const S one = scalar_ratio<S>(1, 1);
  const S d = scalar_ratio<S>(5, 1) - scalar_ratio<S>(7, 1) * chain.p;
  HittingState<S> s;
  s.n = 2;
  s.a = (scalar_ratio<S>(3, 1) - scalar_ratio<S>(4, 1) * chain.p) / d;
  s.b = (one - chain.p) / d;
  s.c = (one - chain.p - chain.p) / d;
  s.alpha = s.a;
  s.beta = s.b;
  s.gamma = s.c;
  s.has_denom = false;
  return s;
}

/// One level of the recursion. Verifies the implicit dependency relations
/// after the update (exactly in exact arithmetic, to 1e-12 in floating).
template <class S>
HittingState<S> hitting_step(const HittingState<S>& s, const Chain<S>& chain,
                             std::size_t exact_bit_cap = kExactBitCap) {
  const S one = scalar_ratio<S>(1, 1);
  const S p = chain.p;
  const S& b = s.b;
  const S& c = s.c;
  const S bb = b * b, cc = c * c, bc = b * c;
  const S one_m_2p = one - p - p;

  const S d = c * (scalar_ratio<S>(2, 1) - p) * p + cc * one_m_2p +
              bb * p * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(3, 1) * p) +
              b * p * (scalar_ratio<S>(3, 1) - scalar_ratio<S>(4, 1) * p) +
              bc * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(6, 1) * p + scalar_ratio<S>(6, 1) * p * p);

  HittingState<S> t;
  t.n = s.n + 1;
  t.denom = d;
  t.has_denom = true;
  t.alpha = ((b + c) * (one - p) * p + cc * one_m_2p +
             bb * p * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(3, 1) * p) +
             bc * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(6, 1) * p * (one - p))) /
            d;
  t.beta = (b + c) * (one - p) * p / d;
  t.gamma = p * (b * one_m_2p + c * p) / d;
  t.a = (c * (scalar_ratio<S>(2, 1) - p) * p + cc * (one - scalar_ratio<S>(3, 1) * p) +
         b * p * (scalar_ratio<S>(3, 1) - scalar_ratio<S>(4, 1) * p) +
         bc * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(9, 1) * p + scalar_ratio<S>(9, 1) * p * p)) /
        d;
  t.b = p * (bc * (scalar_ratio<S>(2, 1) - scalar_ratio<S>(3, 1) * p) + bb * (one - p) + cc * p) / d;
  t.c = p * (bc + cc * (one - p) + bb * one_m_2p) / d;

  // dependency relations tying the new state to the old one
  const auto check = [&](const S& lhs, const S& rhs, const char* what) {
    if (!detail::relation_holds(lhs, rhs))
      throw RelationError(std::string("dependency relation violated at level ") +
                          std::to_string(t.n) + ": " + what);
  };
  check(t.alpha * (one - s.a * one_m_2p - b * (one - scalar_ratio<S>(3, 1) * p) - p),
        p * t.beta + p * b + c * one_m_2p, "alpha");
  check(t.beta * (one - s.a * (one - p)), p * t.alpha + t.gamma * (p * c + b * one_m_2p), "beta");
  check(t.gamma * (one - p) * (one - s.a), t.beta * (p * c + b * one_m_2p), "gamma");
  check(t.a, s.a + b * t.alpha + c * t.alpha, "a");
  check(t.b, b * t.beta + c * t.gamma, "b");
  check(t.c, b * t.gamma + c * t.beta, "c");

  detail::guard_size(t, exact_bit_cap);
  return t;
}

/// States for levels 2..N.
template <class S>
std::vector<HittingState<S>> hitting_sequence(const Chain<S>& chain, int N,
                                              std::size_t exact_bit_cap = kExactBitCap) {
  if (N < 2) throw std::invalid_argument("need N >= 2");
  std::vector<HittingState<S>> out;
  out.push_back(hitting_init(chain));
  while (out.back().n < N) out.push_back(hitting_step(out.back(), chain, exact_bit_cap));
  return out;
}

/// Geometric envelope for b_n + c_n: (4/5)^(n-2) when p <= 1/3,
/// (3/5)^(n-2) when p > 1/3.
inline Rat decay_envelope(const ChainParams& params, int n) {
  const bool fast = params.p > Rat(1, 3);
  Rat base = fast ? Rat(3, 5) : Rat(4, 5);
  Rat out(1);
  for (int k = 2; k < n; ++k) out *= base;
  return out;
}

struct LimitReport {
  bool converged = false;
  int n_converged = -1;
  int n_max = 0;
  double tolerance = 0.0;
  bool envelope_ok = true;
  std::string envelope;
  double final_deviation = 0.0;
  std::string arithmetic;
};

namespace detail {

template <class S>
double deviation_upper(const HittingState<S>& s) {
  const Rat z(0);
  auto gap = [](double x, double t) { return std::fabs(x - t); };
  double dev = gap(num_traits<S>::mid(s.alpha), 0.4);
  dev = std::max(dev, gap(num_traits<S>::mid(s.beta), 0.4));
  dev = std::max(dev, gap(num_traits<S>::mid(s.gamma), 0.2));
  dev = std::max(dev, gap(num_traits<S>::mid(s.a), 1.0));
  dev = std::max(dev, std::fabs(num_traits<S>::mid(s.b)));
  dev = std::max(dev, std::fabs(num_traits<S>::mid(s.c)));
  return dev;
}
template <>
inline double deviation_upper<Rat>(const HittingState<Rat>& s) {
  Rat dev = abs(s.alpha - Rat(2, 5));
  dev = std::max(dev, Rat(abs(s.beta - Rat(2, 5))));
  dev = std::max(dev, Rat(abs(s.gamma - Rat(1, 5))));
  dev = std::max(dev, Rat(abs(s.a - 1)));
  dev = std::max(dev, s.b);
  dev = std::max(dev, s.c);
  return dev.get_d() * (1 + 1e-15) + 1e-300;  // round up
}
template <>
inline double deviation_upper<DyadicInterval>(const HittingState<DyadicInterval>& s) {
  Rat dev = s.alpha.abs_gap_to(Rat(2, 5)).hi();
  dev = std::max(dev, s.beta.abs_gap_to(Rat(2, 5)).hi());
  dev = std::max(dev, s.gamma.abs_gap_to(Rat(1, 5)).hi());
  dev = std::max(dev, s.a.abs_gap_to(Rat(1)).hi());
  dev = std::max(dev, s.b.abs_gap_to(Rat(0)).hi());
  dev = std::max(dev, s.c.abs_gap_to(Rat(0)).hi());
  return dev.get_d() * (1 + 1e-15) + 1e-300;
}

template <class S>
bool sum_bc_within(const HittingState<S>& s, const Rat& envelope) {
  return num_traits<S>::mid(s.b) + num_traits<S>::mid(s.c) <= envelope.get_d() * (1 + 1e-12);
}
template <>
inline bool sum_bc_within<Rat>(const HittingState<Rat>& s, const Rat& envelope) {
  return s.b + s.c <= envelope;
}
template <>
inline bool sum_bc_within<DyadicInterval>(const HittingState<DyadicInterval>& s,
                                          const Rat& envelope) {
  return (s.b + s.c).certainly_le(envelope);
}

template <class S>
const char* arithmetic_name() {
  return "floating";
}
template <>
inline const char* arithmetic_name<Rat>() {
  return "exact";
}
template <>
inline const char* arithmetic_name<DyadicInterval>() {
  return "certified-interval";
}

}  // namespace detail

/// Iterates until every component is within `tol` of its limit
/// ((2/5, 2/5, 1/5) and (1, 0, 0)), checking the proved decay envelope for
/// b_n + c_n along the way.
template <class S>
LimitReport verify_limits(const ChainParams& params, double tol, int n_max,
                          std::size_t exact_bit_cap = kExactBitCap) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const auto chain = make_chain<S>(params);
  LimitReport report;
  report.tolerance = tol;
  report.n_max = n_max;
  report.envelope = params.p > Rat(1, 3) ? "(3/5)^(n-2)" : "(4/5)^(n-2)";
  report.arithmetic = detail::arithmetic_name<S>();
  HittingState<S> s = hitting_init(chain);
  while (true) {
    if (!detail::sum_bc_within(s, decay_envelope(params, s.n))) report.envelope_ok = false;
    report.final_deviation = detail::deviation_upper(s);
    if (report.final_deviation < tol) {
      report.converged = true;
      report.n_converged = s.n;
      return report;
    }
    if (s.n >= n_max) return report;
    s = hitting_step(s, chain, exact_bit_cap);
  }
}

struct LemmaReport {
  bool all_hold = true;
  bool certified = true;  // false if an interval comparison was inconclusive
  int n_reached = 0;
  std::string arithmetic;
  std::vector<std::string> violations;
};

/// Per-level inequality suite: b >= c, b decreasing, beta >= gamma,
/// beta <= 2/5 for p <= 1/3, alpha >= 2/5 for p >= 1/3, and the decay bound
/// |b/c - 1| <= ((b2-c2)/c2)(1-p)^(n-1). Exact mode stops early when the
/// state outgrows the bit cap; certified-interval mode covers any depth.
template <class S>
LemmaReport check_lemma_suite(const ChainParams& params, int n_max,
                              std::size_t exact_bit_cap = kExactBitCap);

std::string states_to_csv(const std::vector<HittingState<Rat>>& states);
std::string states_to_csv(const std::vector<HittingState<double>>& states);

}  // namespace gasket
