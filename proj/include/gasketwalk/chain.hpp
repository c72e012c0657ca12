#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gasketwalk/rational.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

enum class ArithmeticMode { kExact, kFloating };
enum class KernelKind { kStandard, kRotated };

/// Walk parameter p in (0, 1/2) with q = 1 - 2p. Fractions keep exact
/// arithmetic available; plain decimals select floating mode unless a mode
/// is forced (decimal text is still read digit-exactly in exact mode).
struct ChainParams {
  Rat p;
  ArithmeticMode mode = ArithmeticMode::kExact;

  double p_double() const { return p.get_d(); }
  bool exact() const { return mode == ArithmeticMode::kExact; }
  std::string p_string() const { return rat_string(p); }

  static ChainParams parse(const std::string& text);
  static ChainParams parse(const std::string& text, ArithmeticMode mode);
  static ChainParams from_fraction(long num, long den,
                                   ArithmeticMode mode = ArithmeticMode::kExact);
};

/// Typed view of the parameters for numeric code.
template <class S>
struct Chain {
  S p;
  S q;  // 1 - 2p
};

template <class S>
Chain<S> make_chain(const ChainParams& params) {
  Chain<S> c;
  c.p = num_traits<S>::from_rat(params.p);
  c.q = num_traits<S>::from_ratio(1, 1) - c.p - c.p;
  return c;
}

template <class S>
using WordProb = std::pair<FiniteWord, S>;

/// One row of the transition matrix; targets carry positive probability
/// and sum to one.
template <class S>
struct TransitionRow {
  FiniteWord source;
  std::vector<WordProb<S>> targets;
};

/// Row of the walk started anywhere in the word space. Interior words move
/// within their level (p to the aligned partner and the equivalent word, q
/// into the deeper cell); corner words and the empty word branch uniformly
/// into the next level.
template <class S>
TransitionRow<S> transition_row(const Chain<S>& chain, const FiniteWord& u,
                                KernelKind kind = KernelKind::kStandard) {
  TransitionRow<S> row;
  row.source = u;
  const S third = num_traits<S>::from_ratio(1, 3);
  if (u.empty() || u.is_corner()) {
    for (Letter i : kAlphabet) row.targets.emplace_back(u.appended(i), third);
    return row;
  }
  const auto split = run_split(u);
  if (!split) {
    // length-1 interior words do not exist; all of length 1 are corners
    throw std::logic_error("unreachable word shape");
  }
  const Letter i = split->first;
  const Letter j = split->run_letter;
  const Letter l = third_letter(i, j);
  const std::size_t last = u.size() - 1;
  FiniteWord partner = u.replaced(last, i);                 // same cell, toward i
  FiniteWord deeper = u.replaced(last, l);                  // same cell, third letter
  FiniteWord equivalent = split->stem.appended(j);          // swap i and the run
  equivalent = equivalent.concat(FiniteWord::repeated(i, split->run_len));
  if (kind == KernelKind::kStandard) {
    row.targets.emplace_back(std::move(equivalent), chain.p);
    row.targets.emplace_back(std::move(partner), chain.p);
    row.targets.emplace_back(std::move(deeper), chain.q);
  } else {
    row.targets.emplace_back(std::move(partner), chain.p);
    row.targets.emplace_back(std::move(deeper), chain.p);
    row.targets.emplace_back(std::move(equivalent), chain.q);
  }
  return row;
}

}  // namespace gasket
