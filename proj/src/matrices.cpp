#include "gasketwalk/matrices.hpp"

namespace gasket {

TInfinityResult t_infinity(const BoundaryWord& x, double tol, int depth_cap) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  static const Mat3<double> limits[3] = {limit_matrix<double>(1), limit_matrix<double>(2),
                                         limit_matrix<double>(3)};
  TInfinityResult res;
  res.product = limits[x.letter_at(0) - 1];
  res.depth = 1;
  res.spread = row_spread(res.product);
  while (res.spread >= tol && res.depth < depth_cap) {
    // new letters enter on the left
    res.product = limits[x.letter_at(static_cast<std::size_t>(res.depth)) - 1] * res.product;
    ++res.depth;
    res.spread = row_spread(res.product);
  }
  if (res.spread >= tol)
    throw std::runtime_error("matrix product did not contract to the requested tolerance");
  return res;
}

Row3<double> rho_boundary(const BoundaryWord& x, double tol) {
  const auto res = t_infinity(x, tol);
  // average of the rows stays within the spread of every row and keeps the
  // result symmetric in the letters
  Row3<double> row;
  for (int j = 0; j < 3; ++j)
    row[j] = (res.product.rows[0][j] + res.product.rows[1][j] + res.product.rows[2][j]) / 3.0;
  const double sum = row[0] + row[1] + row[2];
  for (auto& v : row) v /= sum;
  return row;
}

}  // namespace gasket
