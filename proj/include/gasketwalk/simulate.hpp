#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gasketwalk/chain.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

/// When a simulated trajectory ends.
struct StopRule {
  enum class Kind { kLevelExceeds, kWordHit, kStepCap };
  Kind kind = Kind::kLevelExceeds;
  int level = 1;       // kLevelExceeds: stop once the word is longer than this
  FiniteWord target;   // kWordHit

  static StopRule level_exceeds(int level) { return {Kind::kLevelExceeds, level, {}}; }
  static StopRule word_hit(FiniteWord target) {
    return {Kind::kWordHit, 0, std::move(target)};
  }
  static StopRule step_cap() { return {Kind::kStepCap, 0, {}}; }
};

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000;

struct Path {
  std::vector<FiniteWord> states;  // includes the start state
  bool step_cap_hit = false;
  bool target_hit = false;   // meaningful for word-hit runs
  bool record_truncated = false;
  std::uint64_t steps = 0;
};

/// One trajectory; bit-reproducible for a given seed. The step cap guards
/// against pathological stop rules and is reported, never silently applied.
Path simulate_path(const ChainParams& params, KernelKind kind, const FiniteWord& start,
                   const StopRule& stop, std::uint64_t seed,
                   std::uint64_t step_cap = kDefaultStepCap,
                   std::size_t max_recorded_states = 1u << 20);

/// Empirical absorption distribution over the three corner words of the
/// target level, with binomial standard errors.
struct HitEstimate {
  std::array<double, 3> estimate{};
  std::array<double, 3> stderr_{};
  std::array<std::uint64_t, 3> counts{};
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  int level = 0;
  std::uint64_t cap_hits = 0;
};

/// Monte Carlo estimate of the absorption distribution starting at `start`.
/// The path budget is split into fixed batches with derived seeds, so the
/// result does not depend on the number of worker threads.
HitEstimate estimate_hitting(const ChainParams& params, const FiniteWord& start, int level,
                             std::uint64_t paths, std::uint64_t seed,
                             KernelKind kind = KernelKind::kStandard, int threads = 0);

}  // namespace gasket
