#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gasketwalk/rational.hpp"

namespace gasket {

/// Sparse LU with greedy minimum-degree pivot choice, no numeric pivoting.
/// The systems solved here are diagonally dominant M-matrices, for which
/// unpivoted elimination is stable in floating point and the diagonal never
/// vanishes in exact arithmetic. Factors once, solves many right-hand
/// sides, including transposed ones. Deterministic: tie-breaks and update
/// orders are index-ordered.
template <class S>
class SparseFactor {
 public:
  SparseFactor(int n, const std::vector<std::tuple<int, int, S>>& entries) : n_(n) {
    std::vector<std::map<int, S>> rows(n);
    std::vector<std::set<int>> col_users(n);
    for (const auto& [r, c, v] : entries) {
      auto [it, fresh] = rows[r].try_emplace(c, v);
      if (!fresh) it->second += v;
    }
    for (int r = 0; r < n_; ++r) {
      for (auto& [c, v] : rows[r])
        if (!is_zero(v)) col_users[c].insert(r);
      std::erase_if(rows[r], [&](const auto& kv) { return is_zero(kv.second); });
    }

    // candidate heap keyed by (row fill count, row index)
    std::set<std::pair<int, int>> heap;
    std::vector<int> size_of(n_);
    for (int r = 0; r < n_; ++r) {
      size_of[r] = static_cast<int>(rows[r].size());
      heap.insert({size_of[r], r});
    }
    std::vector<char> eliminated(n_, 0);
    order_.reserve(n_);
    diag_.resize(n_);
    upper_.resize(n_);

    auto resize_in_heap = [&](int r) {
      heap.erase({size_of[r], r});
      size_of[r] = static_cast<int>(rows[r].size());
      heap.insert({size_of[r], r});
    };

    for (int step = 0; step < n_; ++step) {
      const int r = heap.begin()->second;
      heap.erase(heap.begin());
      eliminated[r] = 1;
      order_.push_back(r);

      auto self = rows[r].find(r);
      if (self == rows[r].end() || is_zero(self->second))
        throw std::runtime_error("singular pivot in sparse factorization");
      diag_[r] = self->second;
      rows[r].erase(self);
      upper_[r].assign(rows[r].begin(), rows[r].end());
      col_users[r].erase(r);

      for (int i : col_users[r]) {
        if (eliminated[i]) continue;
        auto hit = rows[i].find(r);
        if (hit == rows[i].end()) continue;
        S mult = hit->second / diag_[r];
        rows[i].erase(hit);
        ops_.push_back({i, r, mult});
        for (const auto& [j, v] : upper_[r]) {
          auto [it, fresh] = rows[i].try_emplace(j, scalar_ratio<S>(0, 1));
          it->second -= mult * v;
          if (is_zero(it->second)) {
            rows[i].erase(it);
            col_users[j].erase(i);
          } else if (fresh) {
            col_users[j].insert(i);
          }
        }
        resize_in_heap(i);
      }
      for (const auto& [j, v] : upper_[r]) col_users[j].erase(r);
      rows[r].clear();
    }
  }

  int size() const { return n_; }
  std::size_t fill() const {
    std::size_t f = ops_.size();
    for (const auto& u : upper_) f += u.size();
    return f;
  }

  std::vector<S> solve(std::vector<S> b) const {
    for (const auto& op : ops_) b[op.row] -= op.mult * b[op.pivot];
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const int r = *it;
      for (const auto& [j, v] : upper_[r]) b[r] -= v * b[j];
      b[r] /= diag_[r];
    }
    return b;
  }

  std::vector<S> solve_transpose(std::vector<S> b) const {
    for (int r : order_) {
      b[r] /= diag_[r];
      for (const auto& [j, v] : upper_[r]) b[j] -= v * b[r];
    }
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) b[it->pivot] -= it->mult * b[it->row];
    return b;
  }

 private:
  static bool is_zero(const S& v) { return v == scalar_ratio<S>(0, 1); }

  struct Op {
    int row;
    int pivot;
    S mult;
  };

  int n_;
  std::vector<int> order_;
  std::vector<Op> ops_;
  std::vector<S> diag_;
  std::vector<std::vector<std::pair<int, S>>> upper_;
};

}  // namespace gasket
