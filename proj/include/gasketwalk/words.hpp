#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gasketwalk/rational.hpp"

namespace gasket {

/// Alphabet symbol, one of 1, 2, 3.
using Letter = std::uint8_t;

inline constexpr Letter kAlphabet[3] = {1, 2, 3};

/// The letter distinct from both arguments.
inline Letter third_letter(Letter a, Letter b) {
  return static_cast<Letter>(6 - a - b);
}

/// A finite word over {1,2,3}; the empty word is allowed.
class FiniteWord {
 public:
  FiniteWord() = default;
  explicit FiniteWord(std::vector<Letter> letters);
  /// From digit text, e.g. "123". "e" denotes the empty word.
  static FiniteWord parse(const std::string& text);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter at(std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }
  const std::vector<Letter>& letters() const { return letters_; }

  FiniteWord prefix(std::size_t len) const;
  FiniteWord appended(Letter l) const;
  FiniteWord concat(const FiniteWord& tail) const;
  /// Word with position i replaced by l.
  FiniteWord replaced(std::size_t i, Letter l) const;
  /// n-fold repetition of a single letter.
  static FiniteWord repeated(Letter l, std::size_t n);

  /// Base-3 rank of the word within its level (letter i -> digit i-1).
  std::size_t index() const;
  static FiniteWord from_index(std::size_t index, std::size_t level);

  bool is_corner() const;  // all letters equal, nonempty
  std::string str() const;

  friend bool operator==(const FiniteWord& a, const FiniteWord& b) = default;
  friend auto operator<=>(const FiniteWord& a, const FiniteWord& b) = default;

 private:
  std::vector<Letter> letters_;
};

/// Interior word split u = stem . first . run_letter^run_len with
/// first != run_letter; valid only for non-corner words of length >= 2
/// plus the length-1 case handled by the caller.
struct RunSplit {
  FiniteWord stem;    // may be empty
  Letter first;       // letter preceding the terminal run
  Letter run_letter;  // repeated terminal letter
  std::size_t run_len;
};

std::optional<RunSplit> run_split(const FiniteWord& w);

/// Eventually periodic infinite word prefix . cycle^inf, kept in canonical
/// form: the cycle is primitive (not a proper power) and the prefix is
/// shortest (its last letter differs from the cycle's last letter).
/// Canonical representations are equal iff the letter sequences are.
class BoundaryWord {
 public:
  BoundaryWord(FiniteWord prefix, FiniteWord cycle);
  /// Grammar: PREFIX(CYCLE), prefix possibly empty: "12(3)", "(12)".
  static BoundaryWord parse(const std::string& text);

  const FiniteWord& prefix() const { return prefix_; }
  const FiniteWord& cycle() const { return cycle_; }

  Letter letter_at(std::size_t i) const;
  FiniteWord prefix_word(std::size_t len) const;

  bool is_corner_word() const;  // i^inf
  std::string str() const;

  friend bool operator==(const BoundaryWord& a, const BoundaryWord& b) = default;
  friend auto operator<=>(const BoundaryWord& a, const BoundaryWord& b) = default;

 private:
  void canonicalize();
  FiniteWord prefix_;
  FiniteWord cycle_;
};

/// Removes the first letter.
BoundaryWord shift(const BoundaryWord& w);

/// True iff the words project to the same gasket point: equal sequences, or
/// w l k^inf vs w k l^inf for distinct k, l after a common prefix.
bool pi_equivalent(const BoundaryWord& x, const BoundaryWord& y);

/// 2^-(length of the longest common prefix); 0 for equal sequences.
double d_metric(const BoundaryWord& x, const BoundaryWord& y);

/// Plane point (x, y*sqrt(3)) with exact rational coefficients. All
/// projections of eventually periodic words have this form.
struct ExactPoint {
  Rat x;
  Rat y_s3;

  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline Point2D to_point(const ExactPoint& p) {
  return {p.x.get_d(), p.y_s3.get_d() * 1.7320508075688772935};
}

/// Contraction toward corner q_i with factor 1/2.
ExactPoint apply_map(Letter i, const ExactPoint& p);

/// Projection onto the gasket. Exact: the periodic tail is the fixed point
/// of the affine cycle map, composed with the prefix maps.
ExactPoint project_exact(const BoundaryWord& w);
Point2D project(const BoundaryWord& w, double tol = 1e-12);

/// Gasket vertex S_stem(q_i), exactly.
ExactPoint vertex_point_exact(const FiniteWord& stem, Letter i);
Point2D vertex_point(const FiniteWord& stem, Letter i);

/// Letter permutation on words (image[0..2] = images of letters 1..3).
FiniteWord permute(const FiniteWord& w, const Letter image[3]);
BoundaryWord permute(const BoundaryWord& w, const Letter image[3]);

}  // namespace gasket
