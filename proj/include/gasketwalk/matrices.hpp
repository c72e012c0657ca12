#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "gasketwalk/chain.hpp"
#include "gasketwalk/recursion.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

template <class S>
using Row3 = std::array<S, 3>;

/// Row-stochastic 3x3 matrix, rows and columns indexed by letters 1..3.
template <class S>
struct Mat3 {
  std::array<Row3<S>, 3> rows;

  static Mat3 identity() {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.rows[i][j] = scalar_ratio<S>(i == j ? 1 : 0, 1);
    return m;
  }
};

template <class S>
Row3<S> operator*(const Row3<S>& v, const Mat3<S>& m) {
  Row3<S> out;
  for (int j = 0; j < 3; ++j)
    out[j] = v[0] * m.rows[0][j] + v[1] * m.rows[1][j] + v[2] * m.rows[2][j];
  return out;
}

template <class S>
Mat3<S> operator*(const Mat3<S>& a, const Mat3<S>& b) {
  Mat3<S> out;
  for (int i = 0; i < 3; ++i) out.rows[i] = a.rows[i] * b;
  return out;
}

template <class S>
Row3<S> unit_row(Letter i) {
  Row3<S> r{scalar_ratio<S>(0, 1), scalar_ratio<S>(0, 1), scalar_ratio<S>(0, 1)};
  r[i - 1] = scalar_ratio<S>(1, 1);
  return r;
}

/// Largest column spread max_j (max_i m_ij - min_i m_ij), the seminorm that
/// measures how far the rows are from identical.
template <class S>
double row_spread(const Mat3<S>& m) {
  double spread = 0.0;
  for (int j = 0; j < 3; ++j) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 3; ++i) {
      const double v = num_traits<S>::mid(m.rows[i][j]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

/// Cached recursion states for one parameter set; extended on demand.
template <class S>
class RecursionTable {
 public:
  explicit RecursionTable(const ChainParams& params)
      : chain_(make_chain<S>(params)) {
    states_.push_back(hitting_init(chain_));
  }

  const HittingState<S>& state(int n) {
    if (n < 2) throw std::invalid_argument("recursion states start at level 2");
    while (states_.back().n < n) states_.push_back(hitting_step(states_.back(), chain_));
    return states_[static_cast<std::size_t>(n - 2)];
  }

  const Chain<S>& chain() const { return chain_; }

 private:
  Chain<S> chain_;
  std::vector<HittingState<S>> states_;
};

/// Exit matrix of the i-block at level n: row j holds the absorption
/// distribution of the walk started at the block corner toward j.
template <class S>
Mat3<S> level_matrix(Letter i, int n, RecursionTable<S>& table) {
  if (n < 2) throw std::invalid_argument("level matrices start at n = 2");
  const auto& s = table.state(n);
  Mat3<S> m;
  for (Letter r : kAlphabet) {
    if (r == i) {
      m.rows[r - 1] = unit_row<S>(i);
      continue;
    }
    const Letter other = third_letter(i, r);
    m.rows[r - 1][i - 1] = s.alpha;
    m.rows[r - 1][r - 1] = s.beta;
    m.rows[r - 1][other - 1] = s.gamma;
  }
  return m;
}

/// Limit of the exit matrices: entries in {0, 1/5, 2/5, 1}, independent of p.
template <class S>
Mat3<S> limit_matrix(Letter i) {
  Mat3<S> m;
  for (Letter r : kAlphabet) {
    if (r == i) {
      m.rows[r - 1] = unit_row<S>(i);
      continue;
    }
    const Letter other = third_letter(i, r);
    m.rows[r - 1][i - 1] = scalar_ratio<S>(2, 5);
    m.rows[r - 1][r - 1] = scalar_ratio<S>(2, 5);
    m.rows[r - 1][other - 1] = scalar_ratio<S>(1, 5);
  }
  return m;
}

/// Absorption distribution over the three corner words of level |x|,
/// computed as the transfer-matrix product along x.
template <class S>
Row3<S> rho_finite(const FiniteWord& x, RecursionTable<S>& table) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("needs a nonempty word");
  Row3<S> row = unit_row<S>(x.at(n - 1));
  for (int k = 2; k <= n; ++k) row = row * level_matrix(x.at(n - k), k, table);
  return row;
}

struct TInfinityResult {
  Mat3<double> product;
  int depth = 0;        // letters consumed
  double spread = 0.0;  // row spread at acceptance
};

/// Product of limit matrices along the word, deepened until the row spread
/// falls below tol; the rows then agree with the infinite product to tol.
TInfinityResult t_infinity(const BoundaryWord& x, double tol, int depth_cap = 4096);

/// Absorption row extended to infinite words: the common row of the limit
/// product, accurate to tol. Equivalent words give equal rows.
Row3<double> rho_boundary(const BoundaryWord& x, double tol);

}  // namespace gasket
