#include "gasketwalk/simulate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gasketwalk/graph.hpp"
#include "gasketwalk/rng.hpp"

namespace gasket {

namespace {

// Per-level sampling table: neighbour indices plus cumulative uint64
// thresholds. Corner rows are left empty and handled by the walker.
struct LevelTable {
  std::vector<std::array<std::uint32_t, 3>> nbr;
  std::vector<std::array<std::uint64_t, 2>> thresh;
  std::vector<std::uint8_t> corner;
};

std::uint64_t to_threshold(double cumulative) {
  long double scaled = static_cast<long double>(cumulative) * 18446744073709551616.0L;
  if (scaled >= 18446744073709551615.0L) return ~0ULL;
  return static_cast<std::uint64_t>(scaled);
}

LevelTable build_table(const ChainParams& params, KernelKind kind, int level) {
  const auto chain = make_chain<double>(params);
  std::size_t count = 1;
  for (int i = 0; i < level; ++i) count *= 3;
  LevelTable t;
  t.nbr.assign(count, {0, 0, 0});
  t.thresh.assign(count, {0, 0});
  t.corner.assign(count, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    FiniteWord w = FiniteWord::from_index(idx, level);
    if (w.is_corner()) {
      t.corner[idx] = 1;
      continue;
    }
    auto row = transition_row(chain, w, kind);
    double cum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      t.nbr[idx][k] = static_cast<std::uint32_t>(row.targets[k].first.index());
      if (k < 2) {
        cum += row.targets[k].second;
        t.thresh[idx][k] = to_threshold(cum);
      }
    }
  }
  return t;
}

}  // namespace

Path simulate_path(const ChainParams& params, KernelKind kind, const FiniteWord& start,
                   const StopRule& stop, std::uint64_t seed, std::uint64_t step_cap,
                   std::size_t max_recorded_states) {
  Path path;
  Xoshiro256PP rng(derive_seed(seed, 0));
  const auto chain = make_chain<double>(params);
  FiniteWord current = start;
  auto record = [&](const FiniteWord& w) {
    if (path.states.size() < max_recorded_states)
      path.states.push_back(w);
    else
      path.record_truncated = true;
  };
  record(current);

  auto done = [&]() {
    switch (stop.kind) {
      case StopRule::Kind::kLevelExceeds:
        return static_cast<int>(current.size()) > stop.level;
      case StopRule::Kind::kWordHit:
        if (current == stop.target) {
          path.target_hit = true;
          return true;
        }
        // deeper levels can never come back
        return current.size() > stop.target.size();
      case StopRule::Kind::kStepCap:
        return false;
    }
    return false;
  };

  while (!done()) {
    if (path.steps >= step_cap) {
      path.step_cap_hit = true;
      break;
    }
    auto row = transition_row(chain, current, kind);
    const double u = rng.uniform();
    double cum = 0.0;
    FiniteWord next = row.targets.back().first;
    for (const auto& [word, prob] : row.targets) {
      cum += prob;
      if (u < cum) {
        next = word;
        break;
      }
    }
    current = next;
    ++path.steps;
    record(current);
  }
  return path;
}

HitEstimate estimate_hitting(const ChainParams& params, const FiniteWord& start, int level,
                             std::uint64_t paths, std::uint64_t seed, KernelKind kind,
                             int threads) {
  if (static_cast<int>(start.size()) > level)
    throw std::invalid_argument("start word is deeper than the absorption level");
  if (level < 1 || level > kMaxGraphLevel) throw std::invalid_argument("bad absorption level");

  const int start_level = static_cast<int>(start.size());
  std::vector<LevelTable> tables;  // tables[l - start_level_or_1] for levels walked
  const int first_table_level = start_level == 0 ? 1 : start_level;
  for (int l = first_table_level; l <= level; ++l) tables.push_back(build_table(params, kind, l));

  // corner index per letter and level
  auto corner_of = [](int l, int letter_minus_1) {
    return static_cast<std::uint32_t>(
        LevelGraph::corner_index(static_cast<Letter>(letter_minus_1 + 1), l));
  };

  const std::uint32_t start_idx = static_cast<std::uint32_t>(start.index());

  constexpr std::uint64_t kBatch = 1u << 14;
  const std::uint64_t batches = (paths + kBatch - 1) / kBatch;

  struct BatchResult {
    std::array<std::uint64_t, 3> counts{};
    std::uint64_t cap_hits = 0;
  };
  std::vector<BatchResult> results(batches);

  auto run_batch = [&](std::uint64_t b) {
    Xoshiro256PP rng(derive_seed(seed, b));
    const std::uint64_t in_batch = std::min<std::uint64_t>(kBatch, paths - b * kBatch);
    BatchResult& res = results[b];
    for (std::uint64_t it = 0; it < in_batch; ++it) {
      std::uint64_t budget = kDefaultStepCap;
      int l = start_level;
      std::uint32_t idx = start_idx;
      if (l == 0) {  // empty word branches uniformly into level 1
        idx = static_cast<std::uint32_t>(rng.next() % 3);
        l = 1;
      }
      int letter = -1;
      bool capped = false;
      while (true) {
        const LevelTable& t = tables[l - first_table_level];
        while (!t.corner[idx]) {
          if (budget == 0) {
            capped = true;
            break;
          }
          --budget;
          const std::uint64_t u = rng.next();
          const auto& th = t.thresh[idx];
          idx = t.nbr[idx][u < th[0] ? 0 : (u < th[1] ? 1 : 2)];
        }
        if (capped) break;
        // which corner: compare against the three corner indices
        for (int c = 0; c < 3; ++c)
          if (idx == corner_of(l, c)) letter = c;
        if (l == level) break;
        // move to the next level: corner i^l -> word i^l k
        const std::uint32_t k = static_cast<std::uint32_t>(rng.next() % 3);
        idx = idx * 3 + k;
        ++l;
      }
      if (capped)
        ++res.cap_hits;
      else
        ++res.counts[letter];
    }
  };

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  if (static_cast<std::uint64_t>(worker_count) > batches)
    worker_count = static_cast<int>(batches);
  std::vector<std::thread> workers;
  std::atomic<std::uint64_t> next_batch{0};
  for (int w = 0; w < worker_count; ++w)
    workers.emplace_back([&] {
      for (std::uint64_t b; (b = next_batch.fetch_add(1)) < batches;) run_batch(b);
    });
  for (auto& w : workers) w.join();

  HitEstimate est;
  est.paths = paths;
  est.seed = seed;
  est.level = level;
  for (const auto& r : results) {
    for (int c = 0; c < 3; ++c) est.counts[c] += r.counts[c];
    est.cap_hits += r.cap_hits;
  }
  const std::uint64_t absorbed = est.counts[0] + est.counts[1] + est.counts[2];
  for (int c = 0; c < 3; ++c) {
    const double n = static_cast<double>(absorbed ? absorbed : 1);
    const double phat = static_cast<double>(est.counts[c]) / n;
    est.estimate[c] = phat;
    est.stderr_[c] = std::sqrt(phat * (1.0 - phat) / n);
  }
  return est;
}

}  // namespace gasket
