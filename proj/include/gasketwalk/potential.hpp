#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gasketwalk/chain.hpp"
#include "gasketwalk/graph.hpp"
#include "gasketwalk/linsolve.hpp"
#include "gasketwalk/matrices.hpp"
#include "gasketwalk/recursion.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

inline constexpr int kExactSolveCap = 6;
inline constexpr int kFloatSolveCap = 8;

/// Potential theory on the word space backed by per-level linear solves:
/// hitting probabilities between arbitrary words, the Green function, the
/// Martin kernel and its bound. Independent of the transfer-matrix route,
/// which makes it the oracle the matrix product is checked against.
///
/// Solved systems are memoized per (level) and per (level, target);
/// the caches behave as pure memos and are safe for concurrent readers.
template <class S>
class PotentialEngine {
 public:
  explicit PotentialEngine(ChainParams params, int level_cap = 0)
      : params_(std::move(params)),
        chain_(make_chain<S>(params_)),
        cap_(level_cap > 0 ? level_cap
                           : (num_traits<S>::exact ? kExactSolveCap : kFloatSolveCap)) {
    if (cap_ > kMaxGraphLevel) throw std::invalid_argument("level cap too large");
  }

  const ChainParams& params() const { return params_; }
  int level_cap() const { return cap_; }

  /// rho_{x,y}: probability of ever reaching y from x.
  S hitting(const FiniteWord& x, const FiniteWord& y) {
    std::lock_guard<std::mutex> lock(mu_);
    return hitting_locked(x, y);
  }

  /// G(x,y): expected visits to y starting from x.
  S green(const FiniteWord& x, const FiniteWord& y) {
    std::lock_guard<std::mutex> lock(mu_);
    return green_locked(x, y);
  }

  /// K(x,y) = rho_{x,y}/rho_{root,y} = G(x,y)/G(root,y); both quotients are
  /// evaluated and must agree (exactly in exact mode).
  S martin_kernel(const FiniteWord& x, const FiniteWord& y) {
    std::lock_guard<std::mutex> lock(mu_);
    const S via_rho = hitting_locked(x, y) / hitting_locked(FiniteWord{}, y);
    const S via_green = green_locked(x, y) / green_locked(FiniteWord{}, y);
    if (!detail::relation_holds(via_rho, via_green))
      throw RelationError("Martin kernel quotient routes disagree");
    return via_rho;
  }

  /// C_x = 1/rho_{root,x}, the uniform bound for K(x, .).
  S martin_bound(const FiniteWord& x) {
    std::lock_guard<std::mutex> lock(mu_);
    return scalar_ratio<S>(1, 1) / hitting_locked(FiniteWord{}, x);
  }

  /// Absorption distribution over the corner words of level |x| (solve route).
  Row3<S> absorption_row(const FiniteWord& x) {
    std::lock_guard<std::mutex> lock(mu_);
    return absorption_row_locked(x);
  }

  /// First-passage distribution over the corner words of level L >= |x|.
  Row3<S> level_distribution(const FiniteWord& x, int L) {
    std::lock_guard<std::mutex> lock(mu_);
    return level_distribution_locked(x, L);
  }

  /// rho_{root,z} for every z at `level`, indexed by base-3 word index.
  std::vector<S> root_hitting_table(int level) {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<S> out;
    const std::size_t count = pow3(level);
    out.reserve(count);
    if (level == 1) {
      out.assign(3, scalar_ratio<S>(1, 3));
      return out;
    }
    LevelSystem& sys = system(level);
    ensure_groot(sys);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const int compact = sys.interior_of_full[idx];
      if (compact < 0) {
        const Letter corner = FiniteWord::from_index(idx, level).at(0);
        out.push_back(sys.rho_root_corner[corner - 1]);
      } else {
        out.push_back(sys.groot[compact] / green_self_locked(FiniteWord::from_index(idx, level)));
      }
    }
    return out;
  }

 private:
  struct LevelSystem {
    int level = 0;
    std::vector<int> interior_of_full;        // -1 for corners
    std::vector<std::size_t> full_of_interior;
    std::unique_ptr<SparseFactor<S>> factor;  // I - Q on the interior
    std::array<std::vector<S>, 3> absorb;     // full-index absorption rows
    bool has_groot = false;
    std::vector<S> groot;                     // interior: expected visits from the root
    std::array<S, 3> rho_root_corner;
    std::map<std::size_t, std::vector<S>> passage;  // target full idx -> rho_{.,y} interior-solved
    std::map<std::size_t, S> gdiag;                 // target full idx -> G(y,y)
    std::unique_ptr<Mat3<S>> transfer;              // corner-to-corner level transfer
  };

  static std::size_t pow3(int n) {
    std::size_t c = 1;
    for (int i = 0; i < n; ++i) c *= 3;
    return c;
  }

  LevelSystem& system(int level) {
    if (level < 1) throw std::invalid_argument("levels start at 1");
    if (level > cap_)
      throw std::domain_error("level " + std::to_string(level) +
                              " beyond the configured solver cap " + std::to_string(cap_));
    auto it = systems_.find(level);
    if (it != systems_.end()) return *it->second;
    auto sys = std::make_unique<LevelSystem>();
    build_system(*sys, level);
    return *(systems_[level] = std::move(sys));
  }

  void build_system(LevelSystem& sys, int level) {
    sys.level = level;
    const std::size_t count = pow3(level);
    sys.interior_of_full.assign(count, -1);
    std::array<std::size_t, 3> corners{};
    for (Letter i : kAlphabet) corners[i - 1] = LevelGraph::corner_index(i, level);
    for (std::size_t idx = 0, compact = 0; idx < count; ++idx) {
      if (idx == corners[0] || idx == corners[1] || idx == corners[2]) continue;
      sys.interior_of_full[idx] = static_cast<int>(compact++);
      sys.full_of_interior.push_back(idx);
    }
    const int m = static_cast<int>(sys.full_of_interior.size());

    std::vector<std::tuple<int, int, S>> entries;
    std::array<std::vector<S>, 3> corner_rhs;
    for (auto& r : corner_rhs) r.assign(m, scalar_ratio<S>(0, 1));
    entries.reserve(static_cast<std::size_t>(m) * 4);
    for (int row = 0; row < m; ++row) {
      entries.emplace_back(row, row, scalar_ratio<S>(1, 1));
      const FiniteWord w = FiniteWord::from_index(sys.full_of_interior[row], level);
      for (const auto& [target, prob] : transition_row(chain_, w).targets) {
        const std::size_t t = target.index();
        const int tc = sys.interior_of_full[t];
        if (tc >= 0)
          entries.emplace_back(row, tc, -prob);
        else
          corner_rhs[target.at(0) - 1][row] += prob;
      }
    }
    sys.factor = std::make_unique<SparseFactor<S>>(m, entries);
    for (Letter i : kAlphabet) {
      std::vector<S> interior = m > 0 ? sys.factor->solve(corner_rhs[i - 1]) : std::vector<S>{};
      auto& full = sys.absorb[i - 1];
      full.assign(count, scalar_ratio<S>(0, 1));
      for (int row = 0; row < m; ++row) full[sys.full_of_interior[row]] = interior[row];
      full[corners[i - 1]] = scalar_ratio<S>(1, 1);
    }
  }

  // corner-to-corner transfer: start at a corner of level-1 graph l-1, step
  // uniformly into level l, absorb at its corners
  const Mat3<S>& transfer_matrix(int level) {
    LevelSystem& sys = system(level);
    if (!sys.transfer) {
      auto mat = std::make_unique<Mat3<S>>();
      const S third = scalar_ratio<S>(1, 3);
      for (Letter i : kAlphabet) {
        Row3<S> row{scalar_ratio<S>(0, 1), scalar_ratio<S>(0, 1), scalar_ratio<S>(0, 1)};
        for (Letter k : kAlphabet) {
          const FiniteWord w = FiniteWord::repeated(i, static_cast<std::size_t>(level - 1))
                                   .appended(k);
          const Row3<S> abs_row = absorption_row_locked(w);
          for (int j = 0; j < 3; ++j) row[j] += third * abs_row[j];
        }
        mat->rows[i - 1] = row;
      }
      sys.transfer = std::move(mat);
    }
    return *sys.transfer;
  }

  Row3<S> absorption_row_locked(const FiniteWord& x) {
    const int n = static_cast<int>(x.size());
    if (n < 1) throw std::invalid_argument("absorption rows need a nonempty word");
    if (x.is_corner()) return unit_row<S>(x.at(0));
    LevelSystem& sys = system(n);
    Row3<S> row;
    for (int i = 0; i < 3; ++i) row[i] = sys.absorb[i][x.index()];
    return row;
  }

  Row3<S> level_distribution_locked(const FiniteWord& x, int L) {
    const int m = static_cast<int>(x.size());
    if (L < std::max(m, 1)) throw std::invalid_argument("target level above the word");
    Row3<S> u;
    int cur;
    if (m == 0) {
      u = Row3<S>{scalar_ratio<S>(1, 3), scalar_ratio<S>(1, 3), scalar_ratio<S>(1, 3)};
      cur = 1;
    } else {
      u = absorption_row_locked(x);
      cur = m;
    }
    for (; cur < L; ++cur) u = u * transfer_matrix(cur + 1);
    return u;
  }

  const std::vector<S>& passage(int level, std::size_t target_idx) {
    LevelSystem& sys = system(level);
    auto it = sys.passage.find(target_idx);
    if (it != sys.passage.end()) return it->second;
    const int compact = sys.interior_of_full[target_idx];
    if (compact < 0) throw std::logic_error("passage targets must be interior");
    const int m = static_cast<int>(sys.full_of_interior.size());
    std::vector<S> rhs(m, scalar_ratio<S>(0, 1));
    rhs[compact] = scalar_ratio<S>(1, 1);
    std::vector<S> column = sys.factor->solve(rhs);  // G_n(., y) over the interior
    const S gyy = column[compact];
    sys.gdiag.emplace(target_idx, gyy);
    std::vector<S> full(pow3(level), scalar_ratio<S>(0, 1));
    for (int row = 0; row < m; ++row) full[sys.full_of_interior[row]] = column[row] / gyy;
    return sys.passage.emplace(target_idx, std::move(full)).first->second;
  }

  S green_self_locked(const FiniteWord& y) {
    if (y.empty() || y.is_corner()) return scalar_ratio<S>(1, 1);
    const int n = static_cast<int>(y.size());
    LevelSystem& sys = system(n);
    auto it = sys.gdiag.find(y.index());
    if (it != sys.gdiag.end()) return it->second;
    // diagonal only; the full passage vector is cached separately on demand
    const int compact = sys.interior_of_full[y.index()];
    const int m = static_cast<int>(sys.full_of_interior.size());
    std::vector<S> rhs(m, scalar_ratio<S>(0, 1));
    rhs[compact] = scalar_ratio<S>(1, 1);
    const std::vector<S> column = sys.factor->solve(rhs);
    return sys.gdiag.emplace(y.index(), column[compact]).first->second;
  }

  void ensure_groot(LevelSystem& sys) {
    if (sys.has_groot) return;
    const int level = sys.level;
    const int m = static_cast<int>(sys.full_of_interior.size());
    const S third = scalar_ratio<S>(1, 3);
    const Row3<S> u = level_distribution_locked(FiniteWord{}, level - 1 >= 1 ? level - 1 : 1);
    Row3<S> entry = level == 1 ? Row3<S>{third, third, third} : u;
    std::vector<S> rhs(m, scalar_ratio<S>(0, 1));
    for (Letter i : kAlphabet)
      for (Letter k : kAlphabet) {
        if (k == i) continue;
        const FiniteWord w =
            FiniteWord::repeated(i, static_cast<std::size_t>(level - 1)).appended(k);
        const int compact = sys.interior_of_full[w.index()];
        if (compact >= 0) rhs[compact] += entry[i - 1] * third;
      }
    sys.groot = m > 0 ? sys.factor->solve_transpose(rhs) : std::vector<S>{};
    const Row3<S> next = entry * transfer_matrix(level);
    for (int i = 0; i < 3; ++i) sys.rho_root_corner[i] = next[i];
    sys.has_groot = true;
  }

  S hitting_locked(const FiniteWord& x, const FiniteWord& y) {
    if (x == y) return scalar_ratio<S>(1, 1);
    const int m = static_cast<int>(x.size());
    const int n = static_cast<int>(y.size());
    if (n < m) return scalar_ratio<S>(0, 1);
    if (n == m) {
      if (x.is_corner() || x.empty()) return scalar_ratio<S>(0, 1);
      if (y.is_corner()) return absorption_row_locked(x)[y.at(0) - 1];
      return passage(n, y.index())[x.index()];
    }
    // descend level by level; the distribution over the corner words of
    // level n-1 is exact because each deeper level is entered through them
    if (n == 1) return scalar_ratio<S>(1, 3);  // x is the root
    const Row3<S> u = level_distribution_locked(x, n - 1);
    const S third = scalar_ratio<S>(1, 3);
    S total = scalar_ratio<S>(0, 1);
    const bool corner_target = y.is_corner();
    for (Letter i : kAlphabet) {
      S inner = scalar_ratio<S>(0, 1);
      for (Letter k : kAlphabet) {
        const FiniteWord w =
            FiniteWord::repeated(i, static_cast<std::size_t>(n - 1)).appended(k);
        if (w == y) {
          inner += scalar_ratio<S>(1, 1);
          continue;
        }
        if (w.is_corner()) continue;  // wrong corner: the walk has left level n
        inner += corner_target ? absorption_row_locked(w)[y.at(0) - 1]
                               : passage(n, y.index())[w.index()];
      }
      total += u[i - 1] * third * inner;
    }
    return total;
  }

  S green_locked(const FiniteWord& x, const FiniteWord& y) {
    if (x == y) return green_self_locked(y);
    if (y.size() < x.size()) return scalar_ratio<S>(0, 1);
    return hitting_locked(x, y) * green_self_locked(y);
  }

  ChainParams params_;
  Chain<S> chain_;
  int cap_;
  std::mutex mu_;
  std::map<int, std::unique_ptr<LevelSystem>> systems_;
};

/// Limit of G(j^(n-1), x|_n). `extrapolated` marks the corner-word case,
/// where the defining head split degenerates and the formula is reported
/// as its formal evaluation.
struct GreenLimit {
  double value = 0.0;
  bool extrapolated = false;
};

/// Boundary-limit evaluations working through the transfer-matrix route;
/// floating arithmetic with explicit tolerances.
class BoundaryEvaluator {
 public:
  explicit BoundaryEvaluator(const ChainParams& params);

  const ChainParams& params() const { return params_; }

  /// Distribution over corner words of level L for a walk from z (fast route).
  Row3<double> level_distribution(const FiniteWord& z, int L);

  /// Limit distribution over the three corners; the tail is bounded by the
  /// proved geometric decay envelope, so the result is within tol.
  Row3<double> corner_distribution(const FiniteWord& z, double tol);

  GreenLimit green_limit(Letter j, const BoundaryWord& x, double tol);

  /// K(z, x) for a boundary word x: Green limits in the cut-set quotient,
  /// with the passage depth doubled until successive values differ < tol.
  double kernel(const FiniteWord& z, const BoundaryWord& x, double tol);

 private:
  Mat3<double> transfer(int level);

  ChainParams params_;
  RecursionTable<double> table_;
  std::map<int, Mat3<double>> transfer_cache_;
  std::mutex mu_;
};

}  // namespace gasket
