#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gasketwalk/words.hpp"

namespace gasket {

/// Highest level the graph builder accepts. 3^12 vertices is still fine
/// for adjacency storage; exact solves stop much earlier.
inline constexpr int kMaxGraphLevel = 12;

/// The level-n graph on all words of length n: three scaled copies of the
/// previous level joined by one bridge edge per pair of copies. Vertices
/// are addressed by base-3 word index.
class LevelGraph {
 public:
  explicit LevelGraph(int level);

  int level() const { return level_; }
  std::size_t vertex_count() const { return degree_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  int degree(std::size_t v) const { return degree_[v]; }
  const std::array<std::uint32_t, 3>& adjacency(std::size_t v) const { return adj_[v]; }

  std::vector<FiniteWord> neighbors(const FiniteWord& u) const;

  bool is_boundary(std::size_t v) const;  // one of the three corner words
  static std::size_t corner_index(Letter i, int level);

  /// Graphviz dot output, vertices labelled by their words.
  std::string to_dot() const;

 private:
  void add_edge(std::size_t a, std::size_t b);

  int level_;
  std::vector<std::array<std::uint32_t, 3>> adj_;
  std::vector<std::uint8_t> degree_;
  std::size_t edge_count_ = 0;
};

/// Words sharing a fixed stem of length m-1, spanning levels m..n.
struct Cell {
  FiniteWord stem;
  int m = 1;
  int n = 1;

  std::vector<FiniteWord> members() const;
  std::array<FiniteWord, 3> outer_vertices() const;
};

Cell make_cell(const FiniteWord& stem, int m, int n);

}  // namespace gasket
