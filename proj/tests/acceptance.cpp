// Acceptance suite: runs every contract criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "gasketwalk/boundary.hpp"
#include "gasketwalk/interval.hpp"
#include "gasketwalk/matrices.hpp"
#include "gasketwalk/potential.hpp"
#include "gasketwalk/recursion.hpp"
#include "gasketwalk/simulate.hpp"
#include "gasketwalk/words.hpp"

using namespace gasket;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++failures;
}

template <class Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    detail = fn();
    pass = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << detail << (detail.empty() ? "" : "; ") << std::fixed;
  os.precision(1);
  os << dt << "s";
  report(id, name, pass, os.str());
}

struct Fail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Fail(msg);
}

const char* kGrid[] = {"1/20", "1/10", "3/20", "1/5", "1/4", "3/10", "7/20", "2/5", "9/20", "1/3"};

// ---------------------------------------------------------------------------
// small exact polynomial arithmetic in (b, c, p) for the identity
// certificates: every dependency relation is an algebraic consequence of the
// update rule, verified here once and for all levels at once
struct Poly {
  using Key = std::array<int, 3>;  // exponents of b, c, p
  std::map<Key, Rat> terms;

  static Poly constant(const Rat& v) {
    Poly out;
    if (v != 0) out.terms[{0, 0, 0}] = v;
    return out;
  }
  static Poly var(int which) {
    Poly out;
    Key k{0, 0, 0};
    k[which] = 1;
    out.terms[k] = 1;
    return out;
  }
  Poly operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [k, v] : o.terms) {
      auto& slot = out.terms[k];
      slot += v;
      if (slot == 0) out.terms.erase(k);
    }
    return out;
  }
  Poly operator-() const {
    Poly out = *this;
    for (auto& [k, v] : out.terms) v = -v;
    return out;
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    Poly out;
    for (const auto& [ka, va] : terms)
      for (const auto& [kb, vb] : o.terms) {
        Key k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
        auto& slot = out.terms[k];
        slot += va * vb;
        if (slot == 0) out.terms.erase(k);
      }
    return out;
  }
  bool zero() const { return terms.empty(); }
};

std::string certify_dependency_identities() {
  const Poly b = Poly::var(0), c = Poly::var(1), p = Poly::var(2);
  auto k = [](long v) { return Poly::constant(Rat(v)); };
  const Poly one = k(1);
  const Poly one_m_2p = one - k(2) * p;

  const Poly Nalpha = (b + c) * (one - p) * p + c * c * one_m_2p +
                      b * b * p * (k(2) - k(3) * p) +
                      b * c * (k(2) - k(6) * p * (one - p));
  const Poly Nbeta = (b + c) * (one - p) * p;
  const Poly Ngamma = p * (b * one_m_2p + c * p);
  const Poly Na = c * (k(2) - p) * p + c * c * (one - k(3) * p) + b * p * (k(3) - k(4) * p) +
                  b * c * (k(2) - k(9) * p + k(9) * p * p);
  const Poly Nb = p * (b * c * (k(2) - k(3) * p) + b * b * (one - p) + c * c * p);
  const Poly Nc = p * (b * c + c * c * (one - p) + b * b * one_m_2p);
  const Poly D = c * (k(2) - p) * p + c * c * one_m_2p + b * b * p * (k(2) - k(3) * p) +
                 b * p * (k(3) - k(4) * p) + b * c * (k(2) - k(6) * p + k(6) * p * p);

  const Poly a_old = one - b - c;  // states are normalized
  require((Nalpha + Nbeta + Ngamma - D).zero(), "alpha+beta+gamma != 1 algebraically");
  require((Na + Nb + Nc - D).zero(), "a+b+c != 1 algebraically");
  require((Nalpha * (one - a_old * one_m_2p - b * (one - k(3) * p) - p) - p * Nbeta -
           (p * b + c * one_m_2p) * D)
              .zero(),
          "alpha dependency fails algebraically");
  require((Nbeta * (one - a_old * (one - p)) - p * Nalpha - Ngamma * (p * c + b * one_m_2p)).zero(),
          "beta dependency fails algebraically");
  require((Ngamma * (one - p) * (b + c) - Nbeta * (p * c + b * one_m_2p)).zero(),
          "gamma dependency fails algebraically");
  require((Na - a_old * D - (b + c) * Nalpha).zero(), "a dependency fails algebraically");
  require((Nb - b * Nbeta - c * Ngamma).zero(), "b dependency fails algebraically");
  require((Nc - b * Ngamma - c * Nbeta).zero(), "c dependency fails algebraically");
  require((Nb - Nc - p * (b - c) * (c * one_m_2p + b * p)).zero(),
          "gap ratio identity fails algebraically");
  return "9 identities certified symbolically";
}

// ---------------------------------------------------------------------------

std::string criterion_start_values() {
  for (const char* ps : {"1/4", "1/3", "2/5"}) {
    const auto params = ChainParams::parse(ps);
    const auto s = hitting_init(make_chain<Rat>(params));
    const Rat den = 5 - 7 * params.p;
    require(s.a == (3 - 4 * params.p) / den, std::string("a start value at p=") + ps);
    require(s.b == (1 - params.p) / den, std::string("b start value at p=") + ps);
    require(s.c == (1 - 2 * params.p) / den, std::string("c start value at p=") + ps);
    require(s.alpha == s.a && s.beta == s.b && s.gamma == s.c, "triples must match at level 2");
  }
  const auto third = hitting_init(make_chain<Rat>(ChainParams::parse("1/3")));
  require(third.a == Rat(5, 8) && third.b == Rat(1, 4) && third.c == Rat(1, 8),
          "pinned triple at p=1/3");
  return "3 parameter values, exact";
}

std::string criterion_limits() {
  int worst_n = 0;
  for (const char* ps : kGrid) {
    const auto params = ChainParams::parse(ps);
    // certified enclosures prove convergence and the decay envelope
    const auto cert = verify_limits<DyadicInterval>(params, 1e-8, 120);
    require(cert.converged, std::string("no certified convergence at p=") + ps);
    require(cert.envelope_ok, std::string("decay envelope violated at p=") + ps);
    // floating run agrees
    const auto fl = verify_limits<double>(
        ChainParams::parse(ps, ArithmeticMode::kFloating), 1e-8, 120);
    require(fl.converged && fl.envelope_ok, std::string("floating run disagrees at p=") + ps);
    worst_n = std::max(worst_n, cert.n_converged);
  }
  return "max level to reach 1e-8: " + std::to_string(worst_n);
}

std::string criterion_lemma_suite() {
  const std::string algebra = certify_dependency_identities();
  int exact_reach_min = 1000;
  for (const char* ps : kGrid) {
    const auto params = ChainParams::parse(ps);
    // plain exact sweep as deep as the state size allows (all of n <= 50
    // for p = 1/3, whose reduced states grow only linearly)
    const auto exact = check_lemma_suite<Rat>(params, 50);
    require(exact.all_hold && exact.certified,
            std::string("exact lemma suite failed at p=") + ps);
    exact_reach_min = std::min(exact_reach_min, exact.n_reached);
    // certified intervals close the remaining range
    const auto cert = check_lemma_suite<DyadicInterval>(params, 50);
    require(cert.n_reached == 50, std::string("certified sweep too short at p=") + ps);
    require(cert.all_hold && cert.certified,
            std::string("certified lemma suite failed at p=") + ps);
  }
  const auto third = check_lemma_suite<Rat>(ChainParams::parse("1/3"), 50);
  require(third.n_reached == 50, "exact sweep at p=1/3 must reach level 50");
  return algebra + "; exact sweeps reach level >= " + std::to_string(exact_reach_min) +
         ", certified sweeps level 50";
}

std::string criterion_oracle_triangle() {
  std::uint64_t seed_counter = 1000;
  double worst_sigma = 0.0;
  for (const char* ps : {"1/4", "1/3"}) {
    const auto params = ChainParams::parse(ps);
    RecursionTable<Rat> table(params);
    PotentialEngine<Rat> engine(params);
    for (int n = 1; n <= 4; ++n) {
      std::size_t count = 1;
      for (int i = 0; i < n; ++i) count *= 3;
      for (std::size_t idx = 0; idx < count; ++idx) {
        const FiniteWord x = FiniteWord::from_index(idx, n);
        const auto product = rho_finite(x, table);
        const auto solved = engine.absorption_row(x);
        require(product == solved,
                "matrix product and linear solve disagree at " + x.str() + ", p=" + ps);
        const auto mc = estimate_hitting(params, x, n, 1000000, seed_counter++);
        require(mc.cap_hits == 0, "step cap hit during Monte Carlo");
        for (int i = 0; i < 3; ++i) {
          const double exact = product[i].get_d();
          const double gap = std::fabs(mc.estimate[i] - exact);
          const double sigma = mc.stderr_[i] > 0 ? mc.stderr_[i] : 1e-9;
          worst_sigma = std::max(worst_sigma, gap / sigma);
          require(gap < 4.0 * sigma + 1e-9,
                  "Monte Carlo off by " + std::to_string(gap / sigma) + " sigma at " + x.str() +
                      ", p=" + ps);
        }
      }
    }
  }
  std::ostringstream os;
  os.precision(2);
  os << "240 words x 2 parameters, 1e6 paths each; worst deviation " << std::fixed << worst_sigma
     << " sigma";
  return os.str();
}

std::string criterion_green_identities() {
  for (const char* ps : {"1/3", "1/4"}) {
    const auto params = ChainParams::parse(ps);
    PotentialEngine<Rat> engine(params);
    require(engine.green(FiniteWord{}, FiniteWord{}) == 1, "G(root, root) != 1");
    const Rat three_p = 3 * params.p;
    for (int n = 1; n <= 5; ++n) {
      std::size_t count = 1;
      for (int i = 0; i < n; ++i) count *= 3;
      for (std::size_t idx = 0; idx < count; ++idx) {
        const FiniteWord x = FiniteWord::from_index(idx, n);
        if (x.is_corner()) continue;
        const auto row = engine.absorption_row(x);
        for (Letter j : kAlphabet) {
          require(engine.green(x, FiniteWord::repeated(j, n)) == row[j - 1],
                  "G(x, corner) != rho_j(x) at " + x.str());
          require(three_p * engine.green(FiniteWord::repeated(j, n - 1), x) == row[j - 1],
                  "3p G(corner, x) identity fails at " + x.str());
        }
      }
    }
  }
  return "levels 1..5, p in {1/3, 1/4}, exact";
}

std::string criterion_green_boundary_limits() {
  const BoundaryWord x = BoundaryWord::parse("2(3)");
  std::ostringstream os;
  os.precision(2);
  for (const char* ps : {"0.1", "1/3", "0.45"}) {
    const auto params = ChainParams::parse(ps);
    BoundaryEvaluator eval(params);
    RecursionTable<double> table(params);
    const double c = 1.0 / (15.0 * params.p_double());
    const double expected[3] = {c, 2.0 * c, 2.0 * c};  // targets 1, 2, 3
    const double g1 = eval.green_limit(1, x, 1e-11).value;
    const double g2 = eval.green_limit(2, x, 1e-11).value;
    const double g3 = eval.green_limit(3, x, 1e-11).value;
    require(std::fabs(g1 - expected[0]) < 1e-9 && std::fabs(g2 - expected[1]) < 1e-9 &&
                std::fabs(g3 - expected[2]) < 1e-9,
            std::string("limit formula mismatch at p=") + ps);

    // finite-level values: G(j^(n-1), x|_n) = rho_j(x|_n)/(3p); cross-checked
    // against the solve route while the solver reaches
    PotentialEngine<double> solver(params, 8);
    double residual[3] = {1e9, 1e9, 1e9};
    for (int n = 4; n <= 12; ++n) {
      const FiniteWord xn = x.prefix_word(n);
      const auto row = rho_finite(xn, table);
      for (Letter j : kAlphabet) {
        const double product_route = row[j - 1] / (3.0 * params.p_double());
        if (n <= 8) {
          const double solve_route = solver.green(FiniteWord::repeated(j, n - 1), xn);
          require(std::fabs(product_route - solve_route) < 1e-9,
                  "solve and product Green routes disagree at level " + std::to_string(n));
        }
        const double gap = std::fabs(product_route - expected[j - 1]);
        require(gap < residual[j - 1] * (1 + 1e-12),
                "Green residual not decreasing at p=" + std::string(ps) + ", level " +
                    std::to_string(n) + ", j=" + std::to_string(j));
        residual[j - 1] = gap;
      }
    }
    const double worst = std::max({residual[0], residual[1], residual[2]});
    require(worst < 1e-3, std::string("residual at level 12 above 1e-3 for p=") + ps);
    os << " p=" << ps << ": residual@12 " << std::scientific << worst;
  }
  return "pattern c*(1,2,2);" + os.str();
}

std::string criterion_harmonicity() {
  double worst_resid = 0.0, worst_rule = 0.0;
  for (const char* ps : {"0.1", "1/3", "0.45"}) {
    const auto params = ChainParams::parse(ps);
    BoundaryEvaluator eval(params);
    const auto chain = make_chain<double>(params);
    // harmonicity on all words up to length 4
    for (Letter i : kAlphabet) {
      for (int level = 0; level <= 4; ++level) {
        std::size_t count = 1;
        for (int k = 0; k < level; ++k) count *= 3;
        for (std::size_t idx = 0; idx < count; ++idx) {
          const FiniteWord w = FiniteWord::from_index(idx, level);
          double Ph = 0.0;
          for (const auto& [target, prob] : transition_row(chain, w).targets)
            Ph += prob * harmonic_h(eval, i, target, 1e-9);
          const double resid = std::fabs(Ph - harmonic_h(eval, i, w, 1e-9));
          worst_resid = std::max(worst_resid, resid);
          require(resid <= 1e-6, "harmonicity residual " + std::to_string(resid) + " at " +
                                     w.str() + ", p=" + ps);
        }
      }
    }
    // subdivision rule for all stems up to length 3
    const double tol = 1e-7;
    for (int slen = 0; slen <= 3; ++slen) {
      std::size_t count = 1;
      for (int k = 0; k < slen; ++k) count *= 3;
      for (std::size_t idx = 0; idx < count; ++idx) {
        const FiniteWord stem = FiniteWord::from_index(idx, slen);
        for (Letter i : kAlphabet)
          for (Letter j : kAlphabet)
            for (Letter kk : kAlphabet) {
              if (j == kk) continue;
              const Letter l = third_letter(j, kk);
              const double mid = harmonic_at_boundary(
                  eval, i, BoundaryWord(stem.appended(j), FiniteWord::repeated(kk, 1)), tol);
              const double hj = harmonic_at_boundary(
                  eval, i, BoundaryWord(stem, FiniteWord::repeated(j, 1)), tol);
              const double hk = harmonic_at_boundary(
                  eval, i, BoundaryWord(stem, FiniteWord::repeated(kk, 1)), tol);
              const double hl = harmonic_at_boundary(
                  eval, i, BoundaryWord(stem, FiniteWord::repeated(l, 1)), tol);
              const double gap = std::fabs(mid - (0.4 * hj + 0.4 * hk + 0.2 * hl));
              worst_rule = std::max(worst_rule, gap);
              require(gap <= 1e-5, "subdivision rule gap " + std::to_string(gap) + " at stem " +
                                       stem.str() + ", p=" + ps);
            }
      }
    }
  }
  std::ostringstream os;
  os << std::scientific;
  os.precision(1);
  os << "worst harmonicity residual " << worst_resid << ", worst rule gap " << worst_rule;
  return os.str();
}

std::string criterion_p_independence() {
  const auto catalog = default_boundary_catalog();
  BoundaryEvaluator e1(ChainParams::parse("0.1"));
  BoundaryEvaluator e2(ChainParams::parse("1/3"));
  BoundaryEvaluator e3(ChainParams::parse("0.45"));
  double worst = 0.0;
  for (const auto& w : catalog)
    for (Letter i : kAlphabet) {
      const double a = harmonic_at_boundary(e1, i, w, 1e-7);
      const double b = harmonic_at_boundary(e2, i, w, 1e-7);
      const double c = harmonic_at_boundary(e3, i, w, 1e-7);
      const double gap = std::max(std::fabs(a - b), std::max(std::fabs(b - c), std::fabs(a - c)));
      worst = std::max(worst, gap);
      require(gap < 1e-4, "boundary value varies with p at " + w.str());
    }
  std::ostringstream os;
  os << std::scientific;
  os.precision(1);
  os << catalog.size() << " catalog words, worst spread " << worst;
  return os.str();
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += ra[i], mb += rb[i];
  ma /= n;
  mb /= n;
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

std::string criterion_metric_separation() {
  const auto catalog = default_boundary_catalog();
  // versioned copy must match the generator
  if (const char* data = std::getenv("GASKETWALK_DATA")) {
    const auto loaded = load_catalog(std::string(data) + "/boundary_catalog.txt");
    require(loaded == catalog, "checked-in catalog out of date");
  }
  MartinMetric metric(ChainParams::parse("1/3"), MetricParams{0.5, 8, 1e-7});
  std::vector<double> rho_values, euclid_values;
  int equivalent_pairs = 0, separated_pairs = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.size(); ++j) {
      const auto& x = catalog[i];
      const auto& y = catalog[j];
      const auto v = metric.distance(MetricPoint{x}, MetricPoint{y});
      const auto px = project(x);
      const auto py = project(y);
      const double euclid = std::hypot(px.x - py.x, px.y - py.y);
      rho_values.push_back(v.value);
      euclid_values.push_back(euclid);
      if (pi_equivalent(x, y)) {
        ++equivalent_pairs;
        require(v.value <= v.error_bound, "equivalent pair separated: " + x.str() + " vs " +
                                              y.str() + " value " + std::to_string(v.value));
      } else {
        ++separated_pairs;
        require(v.value > v.error_bound, "distinct pair not separated: " + x.str() + " vs " +
                                             y.str() + " value " + std::to_string(v.value));
      }
    }
  const double corr = spearman(rho_values, euclid_values);
  require(corr >= 0.9, "rank correlation " + std::to_string(corr) + " below 0.9");
  std::ostringstream os;
  os.precision(3);
  os << equivalent_pairs << " equivalent + " << separated_pairs
     << " distinct pairs, rank correlation " << std::fixed << corr;
  return os.str();
}

std::string criterion_determinism() {
  const char* cli = std::getenv("GASKETWALK_CLI");
  require(cli != nullptr, "GASKETWALK_CLI not set");
  auto run = [&](const std::string& args, const std::string& path) {
    const std::string cmd = std::string(cli) + " " + args + " > " + path + " 2>/dev/null";
    require(std::system(cmd.c_str()) == 0, "command failed: " + args);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return ss.str();
  };
  const std::string commands[] = {
      "--p 1/3 sequences --n 12",
      "--p 1/4 --seed 9 --threads 2 simulate --start 12 --level 3 --paths 60000",
      "--p 1/3 gasket --depth 2 --color-by 1",
      "--p 1/3 metric --x 1(2) --y (21) --depth 5",
      "--p 2/5 kernel --z 12 --target 2(3)",
  };
  for (const auto& cmd : commands) {
    const std::string a = run(cmd, "det_a.txt");
    const std::string b = run(cmd, "det_b.txt");
    require(!a.empty(), "empty output: " + cmd);
    require(a == b, "outputs differ between runs: " + cmd);
  }
  return "5 commands byte-identical across repeated runs";
}

}  // namespace

int main() {
  std::cout << "acceptance suite" << std::endl;
  criterion(1, "closed-form start values", criterion_start_values);
  criterion(2, "limit theorem with decay envelopes", criterion_limits);
  criterion(3, "inequality and dependency suite to level 50", criterion_lemma_suite);
  criterion(4, "matrix product vs linear solve vs Monte Carlo", criterion_oracle_triangle);
  criterion(5, "Green function identities", criterion_green_identities);
  criterion(6, "Green boundary limits with c = 1/(15p)", criterion_green_boundary_limits);
  criterion(7, "harmonicity and the 2/5-2/5-1/5 subdivision rule", criterion_harmonicity);
  criterion(8, "boundary values independent of p", criterion_p_independence);
  criterion(9, "Martin metric separation and topology agreement", criterion_metric_separation);
  criterion(10, "deterministic command-line outputs", criterion_determinism);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << std::endl;
  return failures;
}
