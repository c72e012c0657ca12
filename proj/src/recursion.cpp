#include "gasketwalk/recursion.hpp"

#include <cstdio>
#include <sstream>

namespace gasket {

namespace {

// three-valued certified comparison: 1 holds, -1 fails, 0 inconclusive
template <class S>
int cert_ge(const S& x, const S& y) {
  return num_traits<S>::mid(x) >= num_traits<S>::mid(y) - 1e-12 ? 1 : -1;
}
template <>
int cert_ge<Rat>(const Rat& x, const Rat& y) {
  return x >= y ? 1 : -1;
}
template <>
int cert_ge<DyadicInterval>(const DyadicInterval& x, const DyadicInterval& y) {
  if (x.certainly_ge(y)) return 1;
  if (x.hi() < y.lo()) return -1;
  return 0;
}

template <class S>
int cert_eq(const S& x, const S& y) {
  return detail::relation_holds(x, y) ? 1 : -1;
}
template <>
int cert_eq<DyadicInterval>(const DyadicInterval& x, const DyadicInterval& y) {
  return (x - y).contains(Rat(0)) ? 0 : -1;  // enclosures cannot certify equality
}

void note(LemmaReport& report, int verdict, int n, const char* what) {
  if (verdict == 1) return;
  if (verdict == 0) {
    report.certified = false;
    report.violations.push_back("level " + std::to_string(n) + ": " + what +
                                " inconclusive at current precision");
    return;
  }
  report.all_hold = false;
  report.violations.push_back("level " + std::to_string(n) + ": " + what + " violated");
}

// equality checks that an enclosure can only corroborate, never certify
void note_eq(LemmaReport& report, int verdict, int n, const char* what) {
  if (verdict >= 0) return;
  report.all_hold = false;
  report.violations.push_back("level " + std::to_string(n) + ": " + what + " violated");
}

}  // namespace

template <class S>
LemmaReport check_lemma_suite(const ChainParams& params, int n_max, std::size_t exact_bit_cap) {
  const auto chain = make_chain<S>(params);
  LemmaReport report;
  report.arithmetic = detail::arithmetic_name<S>();
  const bool p_le_third = params.p <= Rat(1, 3);
  const bool p_ge_third = params.p >= Rat(1, 3);
  const Rat ratio0 = params.p / (1 - 2 * params.p);  // (b2 - c2)/c2
  const Rat one_m_p = 1 - params.p;

  const S two_fifths = scalar_ratio<S>(2, 5);

  HittingState<S> s = hitting_init(chain);
  Rat decay(1);  // (1-p)^(n-1) running power, started at n = 2
  decay *= one_m_p;

  while (true) {
    report.n_reached = s.n;
    note(report, cert_ge(s.b, s.c), s.n, "b >= c");
    note(report, cert_ge(s.beta, s.gamma), s.n, "beta >= gamma");
    if (p_le_third) note(report, cert_ge(two_fifths, s.beta), s.n, "beta <= 2/5");
    if (p_ge_third) note(report, cert_ge(s.alpha, two_fifths), s.n, "alpha >= 2/5");
    // |b/c - 1| = (b - c)/c <= ratio0 (1-p)^(n-1)
    const S bound = num_traits<S>::from_rat(Rat(ratio0 * decay));
    const S decay_lhs = bound * s.c;
    const S decay_rhs = s.b - s.c;
    note(report, cert_ge(decay_lhs, decay_rhs), s.n, "|b/c - 1| decay bound");

    if (s.n >= n_max) break;
    HittingState<S> next;
    try {
      next = hitting_step(s, chain, exact_bit_cap);
    } catch (const ExactSizeError&) {
      break;  // exact sweep ends here; the report says how far it got
    }
    note(report, cert_ge(s.b, next.b), next.n, "b monotonically decreasing");
    // ratio identity relating consecutive normalized gaps
    {
      const S one = scalar_ratio<S>(1, 1);
      const S one_m_2p = one - chain.p - chain.p;
      const S lhs = (next.b - next.c) / next.c;
      const S rhs = ((s.b - s.c) / s.c) * (s.c * one_m_2p + s.b * chain.p) /
                    (s.b + s.c * (one - chain.p) + (s.b * s.b / s.c) * one_m_2p);
      note_eq(report, cert_eq(lhs, rhs), next.n, "gap ratio identity");
    }
    s = next;
    decay *= one_m_p;
  }
  return report;
}

template LemmaReport check_lemma_suite<double>(const ChainParams&, int, std::size_t);
template LemmaReport check_lemma_suite<Rat>(const ChainParams&, int, std::size_t);
template LemmaReport check_lemma_suite<DyadicInterval>(const ChainParams&, int, std::size_t);

namespace {

std::string field(const Rat& v) { return rat_string(v); }
std::string field(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class S>
std::string csv_impl(const std::vector<HittingState<S>>& states) {
  std::ostringstream os;
  os << "n,alpha,beta,gamma,a,b,c\n";
  for (const auto& s : states)
    os << s.n << ',' << field(s.alpha) << ',' << field(s.beta) << ',' << field(s.gamma) << ','
       << field(s.a) << ',' << field(s.b) << ',' << field(s.c) << '\n';
  return os.str();
}

}  // namespace

std::string states_to_csv(const std::vector<HittingState<Rat>>& states) {
  return csv_impl(states);
}
std::string states_to_csv(const std::vector<HittingState<double>>& states) {
  return csv_impl(states);
}

}  // namespace gasket
