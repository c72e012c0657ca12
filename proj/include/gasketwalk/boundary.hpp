#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gasketwalk/potential.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

/// Argument of the Martin metric: a finite word or a boundary word.
using MetricPoint = std::variant<FiniteWord, BoundaryWord>;

MetricPoint parse_metric_point(const std::string& text);
std::string metric_point_string(const MetricPoint& p);

struct MetricParams {
  double r = 0.5;            // geometric weight of the level sums
  int depth = 8;             // truncation level of the outer sum
  double kernel_tol = 1e-7;  // tolerance of boundary-kernel evaluations
};

struct MetricValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Martin metric: level-length difference plus the weighted supremum of
/// normalized kernel differences over all words of each level. Exact for
/// pairs of finite words (the sum terminates); truncated with a rigorous
/// tail bound when a boundary word is involved.
class MartinMetric {
 public:
  MartinMetric(const ChainParams& params, MetricParams mp);

  MetricValue distance(const MetricPoint& x, const MetricPoint& y);

  const MetricParams& metric_params() const { return mp_; }

 private:
  const std::vector<double>& kernel_table(const MetricPoint& p, int level);
  const std::vector<double>& inv_bound_table(int level);

  ChainParams params_;
  MetricParams mp_;
  PotentialEngine<double> engine_;
  BoundaryEvaluator beval_;
  std::map<int, std::vector<double>> inv_c_;
  std::map<std::string, std::map<int, std::vector<double>>> kernels_;
  std::mutex mu_;
};

/// A point of the boundary: a pi-equivalence class, stored by its
/// lexicographically smallest member.
struct BoundaryPoint {
  BoundaryWord representative;

  std::vector<BoundaryWord> members() const;
  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
  friend auto operator<=>(const BoundaryPoint&, const BoundaryPoint&) = default;
};

BoundaryPoint boundary_point(const BoundaryWord& w);

/// Sequence shapes the metric completion classifier accepts.
struct SequenceDescriptor {
  enum class Kind { kConstant, kPrefixes };
  Kind kind = Kind::kConstant;
  FiniteWord constant;
  BoundaryWord prefixes_of = BoundaryWord(FiniteWord{}, FiniteWord::parse("1"));

  static SequenceDescriptor constant_word(FiniteWord w) {
    SequenceDescriptor d;
    d.kind = Kind::kConstant;
    d.constant = std::move(w);
    return d;
  }
  static SequenceDescriptor prefix_sequence(BoundaryWord w) {
    SequenceDescriptor d;
    d.kind = Kind::kPrefixes;
    d.prefixes_of = std::move(w);
    return d;
  }
};

struct CauchyClassification {
  bool is_interior = false;
  std::optional<FiniteWord> interior;
  std::optional<BoundaryPoint> point;
};

CauchyClassification cauchy_class(const SequenceDescriptor& seq);

/// The three corner classes; the only points whose kernels are minimal.
std::vector<BoundaryPoint> minimal_boundary();

/// h_i(x) = K(x, i^inf).
double harmonic_h(BoundaryEvaluator& eval, Letter i, const FiniteWord& x, double tol);

/// Limit of h_i along the prefixes of a boundary word, with doubling-based
/// stopping. Independent of the walk parameter.
double harmonic_at_boundary(BoundaryEvaluator& eval, Letter i, const BoundaryWord& x, double tol);

/// Atomic-measure integral over the minimal boundary: sum w_i h_i(x).
double harmonic_from_boundary(BoundaryEvaluator& eval, const std::array<double, 3>& weights,
                              const FiniteWord& x, double tol);

/// Fixed catalog of boundary words used by metric and topology checks:
/// corner words, single-letter tails, two-letter cycles, and all terms
/// omega k^inf with |omega| <= 2, in canonical form without duplicates.
std::vector<BoundaryWord> default_boundary_catalog();

std::vector<BoundaryWord> load_catalog(const std::string& path);
void save_catalog(const std::string& path, const std::vector<BoundaryWord>& words);

}  // namespace gasket
