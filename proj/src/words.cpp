#include "gasketwalk/words.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gasket {

namespace {

void check_letter(Letter l) {
  if (l < 1 || l > 3) throw std::invalid_argument("letter must be 1, 2 or 3");
}

// Smallest period of the letter sequence (the primitive root length).
std::size_t primitive_period(const std::vector<Letter>& v) {
  const std::size_t n = v.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = v[i] == v[i - p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

FiniteWord::FiniteWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (Letter l : letters_) check_letter(l);
}

FiniteWord FiniteWord::parse(const std::string& text) {
  if (text == "e" || text.empty()) return FiniteWord{};
  std::vector<Letter> ls;
  ls.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '3') throw std::invalid_argument("word letters must be 1, 2 or 3: " + text);
    ls.push_back(static_cast<Letter>(c - '0'));
  }
  return FiniteWord(std::move(ls));
}

FiniteWord FiniteWord::prefix(std::size_t len) const {
  if (len > size()) throw std::out_of_range("prefix longer than word");
  return FiniteWord(std::vector<Letter>(letters_.begin(), letters_.begin() + len));
}

FiniteWord FiniteWord::appended(Letter l) const {
  check_letter(l);
  auto ls = letters_;
  ls.push_back(l);
  return FiniteWord(std::move(ls));
}

FiniteWord FiniteWord::concat(const FiniteWord& tail) const {
  auto ls = letters_;
  ls.insert(ls.end(), tail.letters_.begin(), tail.letters_.end());
  return FiniteWord(std::move(ls));
}

FiniteWord FiniteWord::replaced(std::size_t i, Letter l) const {
  check_letter(l);
  auto ls = letters_;
  ls.at(i) = l;
  return FiniteWord(std::move(ls));
}

FiniteWord FiniteWord::repeated(Letter l, std::size_t n) {
  check_letter(l);
  return FiniteWord(std::vector<Letter>(n, l));
}

std::size_t FiniteWord::index() const {
  std::size_t idx = 0;
  for (Letter l : letters_) idx = idx * 3 + (l - 1);
  return idx;
}

FiniteWord FiniteWord::from_index(std::size_t index, std::size_t level) {
  std::vector<Letter> ls(level);
  for (std::size_t i = level; i-- > 0;) {
    ls[i] = static_cast<Letter>(index % 3 + 1);
    index /= 3;
  }
  return FiniteWord(std::move(ls));
}

bool FiniteWord::is_corner() const {
  if (empty()) return false;
  return std::all_of(letters_.begin(), letters_.end(),
                     [&](Letter l) { return l == letters_.front(); });
}

std::string FiniteWord::str() const {
  if (empty()) return "e";
  std::string s;
  s.reserve(size());
  for (Letter l : letters_) s.push_back(static_cast<char>('0' + l));
  return s;
}

std::optional<RunSplit> run_split(const FiniteWord& w) {
  if (w.size() < 2 || w.is_corner()) return std::nullopt;
  const auto& ls = w.letters();
  const Letter run = ls.back();
  std::size_t k = ls.size() - 1;
  while (k > 0 && ls[k - 1] == run) --k;
  // ls[k-1] is the letter before the run; k >= 1 because w is not a corner
  RunSplit split;
  split.run_letter = run;
  split.run_len = ls.size() - k;
  split.first = ls[k - 1];
  split.stem = w.prefix(k - 1);
  return split;
}

BoundaryWord::BoundaryWord(FiniteWord prefix, FiniteWord cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw std::invalid_argument("boundary word needs a nonempty cycle");
  canonicalize();
}

void BoundaryWord::canonicalize() {
  auto cyc = cycle_.letters();
  cyc.resize(primitive_period(cyc));
  // rotate the cycle into the prefix while the prefix ends with the cycle's
  // last letter; this yields the unique shortest-prefix representation
  auto pre = prefix_.letters();
  while (!pre.empty() && pre.back() == cyc.back()) {
    pre.pop_back();
    std::rotate(cyc.begin(), cyc.end() - 1, cyc.end());
  }
  prefix_ = FiniteWord(std::move(pre));
  cycle_ = FiniteWord(std::move(cyc));
}

BoundaryWord BoundaryWord::parse(const std::string& text) {
  auto open = text.find('(');
  auto close = text.find(')');
  if (open == std::string::npos || close == std::string::npos || close != text.size() - 1 ||
      close <= open + 1)
    throw std::invalid_argument("boundary word must look like PREFIX(CYCLE): " + text);
  FiniteWord prefix = FiniteWord::parse(open == 0 ? std::string{} : text.substr(0, open));
  FiniteWord cycle = FiniteWord::parse(text.substr(open + 1, close - open - 1));
  return BoundaryWord(std::move(prefix), std::move(cycle));
}

Letter BoundaryWord::letter_at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_.at(i);
  return cycle_.at((i - prefix_.size()) % cycle_.size());
}

FiniteWord BoundaryWord::prefix_word(std::size_t len) const {
  std::vector<Letter> ls(len);
  for (std::size_t i = 0; i < len; ++i) ls[i] = letter_at(i);
  return FiniteWord(std::move(ls));
}

bool BoundaryWord::is_corner_word() const { return prefix_.empty() && cycle_.size() == 1; }

std::string BoundaryWord::str() const {
  return (prefix_.empty() ? std::string{} : prefix_.str()) + "(" + cycle_.str() + ")";
}

BoundaryWord shift(const BoundaryWord& w) {
  if (!w.prefix().empty()) {
    auto ls = w.prefix().letters();
    ls.erase(ls.begin());
    return BoundaryWord(FiniteWord(std::move(ls)), w.cycle());
  }
  auto cyc = w.cycle().letters();
  std::rotate(cyc.begin(), cyc.begin() + 1, cyc.end());
  return BoundaryWord(FiniteWord{}, FiniteWord(std::move(cyc)));
}

bool pi_equivalent(const BoundaryWord& x, const BoundaryWord& y) {
  if (x == y) return true;
  // the only nontrivial identification is w l k^inf ~ w k l^inf
  if (x.cycle().size() != 1 || y.cycle().size() != 1) return false;
  if (x.prefix().empty() || y.prefix().empty()) return false;
  if (x.prefix().size() != y.prefix().size()) return false;
  const Letter k = x.cycle().at(0);
  const Letter l = y.cycle().at(0);
  if (k == l) return false;
  if (x.prefix().back() != l || y.prefix().back() != k) return false;
  return x.prefix().prefix(x.prefix().size() - 1) == y.prefix().prefix(y.prefix().size() - 1);
}

double d_metric(const BoundaryWord& x, const BoundaryWord& y) {
  if (x == y) return 0.0;
  std::size_t horizon = x.prefix().size() + y.prefix().size() + x.cycle().size() * y.cycle().size();
  std::size_t common = 0;
  while (common < horizon + 1 && x.letter_at(common) == y.letter_at(common)) ++common;
  return std::ldexp(1.0, -static_cast<int>(common));
}

ExactPoint apply_map(Letter i, const ExactPoint& p) {
  check_letter(i);
  // corners: q1 = (1/2, sqrt(3)/2), q2 = (0,0), q3 = (1,0)
  static const Rat half(1, 2);
  ExactPoint r;
  switch (i) {
    case 1:
      r.x = (p.x + half) / 2;
      r.y_s3 = (p.y_s3 + half) / 2;
      break;
    case 2:
      r.x = p.x / 2;
      r.y_s3 = p.y_s3 / 2;
      break;
    default:
      r.x = (p.x + 1) / 2;
      r.y_s3 = p.y_s3 / 2;
      break;
  }
  r.x.canonicalize();
  r.y_s3.canonicalize();
  return r;
}

ExactPoint project_exact(const BoundaryWord& w) {
  // Fixed point of the cycle map: the composition of m maps is
  // z -> z/2^m + t, so z* = t / (1 - 2^-m).
  const auto& cyc = w.cycle().letters();
  ExactPoint t{Rat(0), Rat(0)};
  for (std::size_t i = cyc.size(); i-- > 0;) t = apply_map(cyc[i], t);  // image of the origin
  Rat scale = 1 - Rat(1, 1) / (mpz_class(1) << cyc.size());
  ExactPoint z{t.x / scale, t.y_s3 / scale};
  for (std::size_t i = w.prefix().size(); i-- > 0;) z = apply_map(w.prefix().at(i), z);
  z.x.canonicalize();
  z.y_s3.canonicalize();
  return z;
}

Point2D project(const BoundaryWord& w, double) { return to_point(project_exact(w)); }

ExactPoint vertex_point_exact(const FiniteWord& stem, Letter i) {
  check_letter(i);
  static const Rat half(1, 2);
  ExactPoint q;
  switch (i) {
    case 1: q = {half, half}; break;
    case 2: q = {Rat(0), Rat(0)}; break;
    default: q = {Rat(1), Rat(0)}; break;
  }
  for (std::size_t k = stem.size(); k-- > 0;) q = apply_map(stem.at(k), q);
  return q;
}

Point2D vertex_point(const FiniteWord& stem, Letter i) {
  return to_point(vertex_point_exact(stem, i));
}

FiniteWord permute(const FiniteWord& w, const Letter image[3]) {
  std::vector<Letter> ls;
  ls.reserve(w.size());
  for (Letter l : w.letters()) ls.push_back(image[l - 1]);
  return FiniteWord(std::move(ls));
}

BoundaryWord permute(const BoundaryWord& w, const Letter image[3]) {
  return BoundaryWord(permute(w.prefix(), image), permute(w.cycle(), image));
}

}  // namespace gasket
