#include "gasketwalk/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gasket {

MetricPoint parse_metric_point(const std::string& text) {
  if (text.find('(') != std::string::npos) return BoundaryWord::parse(text);
  return FiniteWord::parse(text);
}

std::string metric_point_string(const MetricPoint& p) {
  return std::visit([](const auto& w) { return w.str(); }, p);
}

MartinMetric::MartinMetric(const ChainParams& params, MetricParams mp)
    : params_(params), mp_(mp), engine_(params), beval_(params) {
  if (!(mp_.r > 0 && mp_.r < 1)) throw std::invalid_argument("metric base r must be in (0,1)");
  if (mp_.depth < 1) throw std::invalid_argument("metric depth must be >= 1");
}

const std::vector<double>& MartinMetric::inv_bound_table(int level) {
  auto it = inv_c_.find(level);
  if (it != inv_c_.end()) return it->second;
  return inv_c_.emplace(level, engine_.root_hitting_table(level)).first->second;
}

const std::vector<double>& MartinMetric::kernel_table(const MetricPoint& p, int level) {
  const std::string key = metric_point_string(p);
  auto& per_level = kernels_[key];
  auto it = per_level.find(level);
  if (it != per_level.end()) return it->second;

  std::size_t count = 1;
  for (int i = 0; i < level; ++i) count *= 3;
  std::vector<double> table(count, 0.0);
  if (const auto* fin = std::get_if<FiniteWord>(&p)) {
    const int target_level = static_cast<int>(fin->size());
    const double rho_root = level == 0 ? 1.0 : engine_.hitting(FiniteWord{}, *fin);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const FiniteWord z = FiniteWord::from_index(idx, level);
      if (level > target_level) {
        table[idx] = z == *fin ? 1.0 / rho_root : 0.0;  // unreachable from deeper words
      } else {
        table[idx] = engine_.hitting(z, *fin) / rho_root;
      }
    }
  } else {
    const auto& bw = std::get<BoundaryWord>(p);
    for (std::size_t idx = 0; idx < count; ++idx)
      table[idx] = beval_.kernel(FiniteWord::from_index(idx, level), bw, mp_.kernel_tol);
  }
  return per_level.emplace(level, std::move(table)).first->second;
}

MetricValue MartinMetric::distance(const MetricPoint& x, const MetricPoint& y) {
  std::lock_guard<std::mutex> lock(mu_);
  MetricValue out;
  if (x == y) return out;  // zero by definition, no tolerance involved

  const bool x_finite = std::holds_alternative<FiniteWord>(x);
  const bool y_finite = std::holds_alternative<FiniteWord>(y);
  const double rx = x_finite ? std::pow(mp_.r, std::get<FiniteWord>(x).size()) : 0.0;
  const double ry = y_finite ? std::pow(mp_.r, std::get<FiniteWord>(y).size()) : 0.0;
  out.value = std::fabs(rx - ry);

  int effective_depth = mp_.depth;
  bool truncated = true;
  if (x_finite && y_finite) {
    // terms beyond both word lengths vanish: every kernel there is zero
    const int reach = static_cast<int>(
        std::max(std::get<FiniteWord>(x).size(), std::get<FiniteWord>(y).size()));
    if (reach <= mp_.depth) {
      effective_depth = reach;
      truncated = false;
    }
  }

  double weight = 1.0;
  for (int n = 0; n <= effective_depth; ++n) {
    double sup = 0.0;
    if (n == 0) {
      sup = 0.0;  // K(root, .) = 1 for every target
    } else {
      const auto& kx = kernel_table(x, n);
      const auto& ky = kernel_table(y, n);
      const auto& inv_c = inv_bound_table(n);
      for (std::size_t idx = 0; idx < kx.size(); ++idx)
        sup = std::max(sup, inv_c[idx] * std::fabs(kx[idx] - ky[idx]));
    }
    out.value += weight * sup;
    weight *= mp_.r;
  }

  const double tail = truncated ? std::pow(mp_.r, mp_.depth + 1) / (1.0 - mp_.r) : 0.0;
  const double kernel_err =
      (x_finite && y_finite ? 1e-11 : 2.0 * mp_.kernel_tol) / (1.0 - mp_.r);
  out.error_bound = tail + kernel_err;
  return out;
}

std::vector<BoundaryWord> BoundaryPoint::members() const {
  std::vector<BoundaryWord> out{representative};
  // a class has two members exactly when the tail has the swapped form
  const auto& w = representative;
  if (w.cycle().size() == 1 && !w.prefix().empty()) {
    const Letter k = w.cycle().at(0);
    const Letter l = w.prefix().back();
    if (k != l) {
      FiniteWord prefix = w.prefix().replaced(w.prefix().size() - 1, k);
      out.emplace_back(std::move(prefix), FiniteWord::repeated(l, 1));
    }
  }
  return out;
}

namespace {

bool sequence_less(const BoundaryWord& a, const BoundaryWord& b) {
  const std::size_t horizon =
      a.prefix().size() + b.prefix().size() + a.cycle().size() * b.cycle().size() + 2;
  for (std::size_t i = 0; i < horizon; ++i) {
    if (a.letter_at(i) != b.letter_at(i)) return a.letter_at(i) < b.letter_at(i);
  }
  return false;  // equal sequences
}

}  // namespace

BoundaryPoint boundary_point(const BoundaryWord& w) {
  BoundaryPoint p{w};
  for (const auto& member : p.members())
    if (sequence_less(member, p.representative)) p.representative = member;
  return p;
}

CauchyClassification cauchy_class(const SequenceDescriptor& seq) {
  CauchyClassification out;
  switch (seq.kind) {
    case SequenceDescriptor::Kind::kConstant:
      out.is_interior = true;
      out.interior = seq.constant;
      return out;
    case SequenceDescriptor::Kind::kPrefixes:
      out.point = boundary_point(seq.prefixes_of);
      return out;
  }
  throw std::invalid_argument("unsupported sequence shape");
}

std::vector<BoundaryPoint> minimal_boundary() {
  std::vector<BoundaryPoint> out;
  for (Letter i : kAlphabet)
    out.push_back(boundary_point(BoundaryWord(FiniteWord{}, FiniteWord::repeated(i, 1))));
  return out;
}

double harmonic_h(BoundaryEvaluator& eval, Letter i, const FiniteWord& x, double tol) {
  const BoundaryWord corner(FiniteWord{}, FiniteWord::repeated(i, 1));
  return eval.kernel(x, corner, tol);
}

double harmonic_at_boundary(BoundaryEvaluator& eval, Letter i, const BoundaryWord& x,
                            double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const BoundaryWord corner(FiniteWord{}, FiniteWord::repeated(i, 1));
  int n = 8;
  double prev = eval.kernel(x.prefix_word(n), corner, tol / 4.0);
  while (n < (1 << 14)) {
    n *= 2;
    const double cur = eval.kernel(x.prefix_word(n), corner, tol / 4.0);
    if (std::fabs(cur - prev) < tol / 2.0) return cur;
    prev = cur;
  }
  throw std::runtime_error("harmonic limit not Cauchy within the depth cap");
}

double harmonic_from_boundary(BoundaryEvaluator& eval, const std::array<double, 3>& weights,
                              const FiniteWord& x, double tol) {
  for (double w : weights)
    if (w < 0) throw std::invalid_argument("weights must be non-negative");
  double out = 0.0;
  for (Letter i : kAlphabet)
    if (weights[i - 1] > 0) out += weights[i - 1] * harmonic_h(eval, i, x, tol);
  return out;
}

std::vector<BoundaryWord> default_boundary_catalog() {
  std::set<BoundaryWord> seen;
  std::vector<BoundaryWord> out;
  auto add = [&](BoundaryWord w) {
    if (seen.insert(w).second) out.push_back(std::move(w));
  };
  for (Letter i : kAlphabet) add(BoundaryWord(FiniteWord{}, FiniteWord::repeated(i, 1)));
  for (Letter i : kAlphabet)
    for (Letter j : kAlphabet)
      if (i != j)
        add(BoundaryWord(FiniteWord::repeated(i, 1), FiniteWord::repeated(j, 1)));
  for (Letter i : kAlphabet)
    for (Letter j : kAlphabet)
      if (i != j) add(BoundaryWord(FiniteWord{}, FiniteWord::repeated(i, 1).appended(j)));
  // omega k^inf with |omega| <= 2
  std::vector<FiniteWord> stems{FiniteWord{}};
  for (std::size_t idx = 0; idx < 3; ++idx) stems.push_back(FiniteWord::from_index(idx, 1));
  for (std::size_t idx = 0; idx < 9; ++idx) stems.push_back(FiniteWord::from_index(idx, 2));
  for (const auto& stem : stems)
    for (Letter k : kAlphabet) add(BoundaryWord(stem, FiniteWord::repeated(k, 1)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BoundaryWord> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog: " + path);
  std::vector<BoundaryWord> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    out.push_back(BoundaryWord::parse(line.substr(start, end - start + 1)));
  }
  return out;
}

void save_catalog(const std::string& path, const std::vector<BoundaryWord>& words) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write catalog: " + path);
  outf << "# boundary word catalog v1\n";
  for (const auto& w : words) outf << w.str() << "\n";
}

}  // namespace gasket
