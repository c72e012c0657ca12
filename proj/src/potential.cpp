#include "gasketwalk/potential.hpp"

#include <algorithm>

namespace gasket {

BoundaryEvaluator::BoundaryEvaluator(const ChainParams& params)
    : params_(params), table_(params) {}

Mat3<double> BoundaryEvaluator::transfer(int level) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = transfer_cache_.find(level);
  if (it != transfer_cache_.end()) return it->second;
  const auto& s = table_.state(level);
  Mat3<double> m;
  const double stay = (1.0 + 2.0 * s.a) / 3.0;
  const double move = (s.b + s.c) / 3.0;
  for (Letter i : kAlphabet)
    for (Letter j : kAlphabet) m.rows[i - 1][j - 1] = i == j ? stay : move;
  return transfer_cache_.emplace(level, m).first->second;
}

Row3<double> BoundaryEvaluator::level_distribution(const FiniteWord& z, int L) {
  const int m = static_cast<int>(z.size());
  if (L < std::max(m, 1)) throw std::invalid_argument("target level above the word");
  Row3<double> u;
  int cur;
  if (m == 0) {
    u = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    cur = 1;
  } else if (z.is_corner()) {
    u = unit_row<double>(z.at(0));
    cur = m;
  } else {
    std::lock_guard<std::mutex> lock(mu_);
    u = rho_finite(z, table_);
    cur = m;
  }
  for (; cur < L; ++cur) u = u * transfer(cur + 1);
  return u;
}

Row3<double> BoundaryEvaluator::corner_distribution(const FiniteWord& z, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  // per-level drift is at most (2/3)(b_l + c_l), summed along the proved
  // geometric envelope
  const double env = params_.p > Rat(1, 3) ? 3.0 / 5.0 : 4.0 / 5.0;
  int L = std::max<int>(static_cast<int>(z.size()), 2);
  while ((2.0 / 3.0) * std::pow(env, L - 1) / (1.0 - env) >= tol && L < 20000) ++L;
  return level_distribution(z, L);
}

GreenLimit BoundaryEvaluator::green_limit(Letter j, const BoundaryWord& x, double tol) {
  const double c = 1.0 / (15.0 * params_.p_double());
  GreenLimit out;
  Row3<double> rho;
  Letter i;
  if (x.is_corner_word()) {
    i = x.cycle().at(0);
    rho = unit_row<double>(i);
    out.extrapolated = true;
  } else {
    i = x.letter_at(0);
    const double sub_tol = std::max(tol * params_.p_double(), 1e-14);
    rho = rho_boundary(shift(x), sub_tol);
  }
  if (j == i) {
    const Letter a = i == 1 ? 2 : 1;
    const Letter b = third_letter(i, a);
    out.value = c * (5.0 * rho[i - 1] + 2.0 * rho[a - 1] + 2.0 * rho[b - 1]);
  } else {
    const Letter k = third_letter(i, j);
    out.value = c * (2.0 * rho[j - 1] + rho[k - 1]);
  }
  return out;
}

double BoundaryEvaluator::kernel(const FiniteWord& z, const BoundaryWord& x, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  // normalized Green limits: the three limits always sum to 5/(15p), so the
  // common factor cancels in the kernel quotient
  Row3<double> ghat;
  if (x.is_corner_word()) {
    ghat = unit_row<double>(x.cycle().at(0));
  } else {
    const Letter i = x.letter_at(0);
    const double sub_tol = std::max(tol / 30.0, 1e-14);
    const Row3<double> rho = rho_boundary(shift(x), sub_tol);
    for (Letter j : kAlphabet) {
      if (j == i) {
        const Letter a = i == 1 ? 2 : 1;
        const Letter b = third_letter(i, a);
        ghat[j - 1] = (5.0 * rho[i - 1] + 2.0 * rho[a - 1] + 2.0 * rho[b - 1]) / 5.0;
      } else {
        const Letter k = third_letter(i, j);
        ghat[j - 1] = (2.0 * rho[j - 1] + rho[k - 1]) / 5.0;
      }
    }
  }
  auto eval = [&](int L) {
    const Row3<double> u = level_distribution(z, L);
    return 3.0 * (u[0] * ghat[0] + u[1] * ghat[1] + u[2] * ghat[2]);
  };
  int L = std::max<int>(static_cast<int>(z.size()) + 1, 4);
  double prev = eval(L);
  while (L < (1 << 15)) {
    L *= 2;
    const double cur = eval(L);
    if (std::fabs(cur - prev) < tol / 2.0) return cur;
    prev = cur;
  }
  throw std::runtime_error("kernel limit not Cauchy within the depth cap");
}

}  // namespace gasket
