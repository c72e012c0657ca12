#include "gasketwalk/graph.hpp"

#include <sstream>
#include <stdexcept>

namespace gasket {

LevelGraph::LevelGraph(int level) : level_(level) {
  if (level < 1 || level > kMaxGraphLevel)
    throw std::out_of_range("graph level must be in [1, " + std::to_string(kMaxGraphLevel) + "]");
  std::size_t count = 1;
  for (int i = 0; i < level; ++i) count *= 3;
  adj_.assign(count, {0, 0, 0});
  degree_.assign(count, 0);

  // level 1 triangle, then per level: three shifted copies plus bridges
  add_edge(0, 1);
  add_edge(0, 2);
  add_edge(1, 2);
  std::size_t size = 3;
  for (int n = 2; n <= level; ++n) {
    const std::size_t edges_before = edge_count_;
    // copy edges of the previous level into each of the three blocks;
    // the previous adjacency is read back from the structure itself
    std::vector<std::pair<std::uint32_t, std::uint32_t>> prev;
    prev.reserve(edges_before);
    for (std::size_t v = 0; v < size; ++v)
      for (int d = 0; d < degree_[v]; ++d)
        if (adj_[v][d] > v) prev.emplace_back(v, adj_[v][d]);
    for (std::size_t v = 0; v < size; ++v) degree_[v] = 0;
    edge_count_ = 0;
    for (int block = 0; block < 3; ++block) {
      const std::size_t off = block * size;
      for (auto [a, b] : prev) add_edge(off + a, off + b);
    }
    // bridge k-block and l-block through l k^(n-1) ~ k l^(n-1)
    for (int k = 1; k <= 3; ++k)
      for (int l = k + 1; l <= 3; ++l) {
        const std::size_t lk = (l - 1) * size + (k - 1) * (size - 1) / 2;
        const std::size_t kl = (k - 1) * size + (l - 1) * (size - 1) / 2;
        add_edge(lk, kl);
      }
    size *= 3;
  }
}

void LevelGraph::add_edge(std::size_t a, std::size_t b) {
  adj_[a][degree_[a]++] = static_cast<std::uint32_t>(b);
  adj_[b][degree_[b]++] = static_cast<std::uint32_t>(a);
  ++edge_count_;
}

std::vector<FiniteWord> LevelGraph::neighbors(const FiniteWord& u) const {
  if (static_cast<int>(u.size()) != level_)
    throw std::invalid_argument("word length does not match graph level");
  std::vector<FiniteWord> out;
  const auto& row = adj_[u.index()];
  for (int d = 0; d < degree_[u.index()]; ++d)
    out.push_back(FiniteWord::from_index(row[d], level_));
  return out;
}

bool LevelGraph::is_boundary(std::size_t v) const {
  for (Letter i : kAlphabet)
    if (v == corner_index(i, level_)) return true;
  return false;
}

std::size_t LevelGraph::corner_index(Letter i, int level) {
  // index of i^n: digit (i-1) repeated = (i-1) * (3^n - 1) / 2
  std::size_t count = 1;
  for (int k = 0; k < level; ++k) count *= 3;
  return static_cast<std::size_t>(i - 1) * (count - 1) / 2;
}

std::string LevelGraph::to_dot() const {
  std::ostringstream os;
  os << "graph level" << level_ << " {\n";
  for (std::size_t v = 0; v < vertex_count(); ++v)
    os << "  w" << FiniteWord::from_index(v, level_).str() << ";\n";
  for (std::size_t v = 0; v < vertex_count(); ++v)
    for (int d = 0; d < degree_[v]; ++d)
      if (adj_[v][d] > v)
        os << "  w" << FiniteWord::from_index(v, level_).str() << " -- w"
           << FiniteWord::from_index(adj_[v][d], level_).str() << ";\n";
  os << "}\n";
  return os.str();
}

Cell make_cell(const FiniteWord& stem, int m, int n) {
  if (m < 1 || m > n) throw std::invalid_argument("cell needs 1 <= m <= n");
  if (static_cast<int>(stem.size()) != m - 1)
    throw std::invalid_argument("cell stem must have length m-1");
  return Cell{stem, m, n};
}

std::vector<FiniteWord> Cell::members() const {
  std::vector<FiniteWord> out;
  const int free_letters = n - m + 1;
  std::size_t total = 1;
  for (int i = 0; i < free_letters; ++i) total *= 3;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx)
    out.push_back(stem.concat(FiniteWord::from_index(idx, free_letters)));
  return out;
}

std::array<FiniteWord, 3> Cell::outer_vertices() const {
  const std::size_t reps = static_cast<std::size_t>(n - m + 1);
  return {stem.concat(FiniteWord::repeated(1, reps)), stem.concat(FiniteWord::repeated(2, reps)),
          stem.concat(FiniteWord::repeated(3, reps))};
}

}  // namespace gasket
