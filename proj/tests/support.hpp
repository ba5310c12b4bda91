#pragma once

// Test-side oracles and generators. Nothing here calls into the
// evaluator; oracles are written directly against the LTS.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "phfl/formula.hpp"
#include "phfl/lts.hpp"
#include "phfl/types.hpp"

namespace phfl::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Lts make_t1() {
  Lts l(2, {"a"}, {"p"});
  l.add_transition(0, 0, 0);
  l.add_transition(1, 0, 1);
  l.add_label(0, 0);
  l.add_label(1, 0);
  return l;
}

inline Lts make_t2() {
  Lts l(3, {"a", "b"}, {"p"});
  l.add_transition(0, 0, 1);
  l.add_transition(1, 1, 2);
  return l;
}

/// s0 -a-> s1, s1 -b-> s2, s1 -c-> s3 (states 0..3) and
/// t0 -a-> t1, t0 -a-> t1', t1 -b-> t2, t1' -c-> t3 (states 4..8).
inline Lts make_t3() {
  Lts l(9, {"a", "b", "c"}, {});
  l.add_transition(0, 0, 1);
  l.add_transition(1, 1, 2);
  l.add_transition(1, 2, 3);
  l.add_transition(4, 0, 5);
  l.add_transition(4, 0, 6);
  l.add_transition(5, 1, 7);
  l.add_transition(6, 2, 8);
  return l;
}

inline Lts random_lts(Rng& rng, int max_states, int max_actions, int max_props, double density = 0.3) {
  int n = uniform(rng, 1, max_states);
  int na = uniform(rng, 1, max_actions);
  int np = uniform(rng, 0, max_props);
  std::vector<std::string> actions, props;
  for (int i = 0; i < na; ++i) actions.push_back(std::string(1, static_cast<char>('a' + i)));
  for (int i = 0; i < np; ++i) props.push_back(std::string(1, static_cast<char>('p' + i)));
  Lts l(n, actions, props);
  for (int a = 0; a < na; ++a)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (coin(rng, density)) l.add_transition(s, a, t);
  for (int s = 0; s < n; ++s)
    for (int p = 0; p < np; ++p)
      if (coin(rng)) l.add_label(s, p);
  return l;
}

/// Random LTS in which state 0 reaches every state.
inline Lts random_rooted_lts(Rng& rng, int max_states, int max_actions, int max_props) {
  while (true) {
    Lts l = random_lts(rng, max_states, max_actions, max_props, 0.35);
    std::vector<StateId> seed{0};
    auto r = reachable(l, seed);
    if (std::all_of(r.begin(), r.end(), [](bool b) { return b; })) return l;
  }
}

/// Greatest bisimulation by iterating the refinement operator on the full
/// relation S x S.
inline std::vector<std::vector<bool>> brute_bisim(const Lts& l) {
  int n = l.num_states();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, true));
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (!r[s][t]) continue;
        bool ok = l.label(s) == l.label(t);
        for (int a = 0; ok && a < static_cast<int>(l.actions().size()); ++a) {
          for (int s2 : l.successors(a, s)) {
            bool m = false;
            for (int t2 : l.successors(a, t)) m = m || r[s2][t2];
            ok = ok && m;
          }
          for (int t2 : l.successors(a, t)) {
            bool m = false;
            for (int s2 : l.successors(a, s)) m = m || r[s2][t2];
            ok = ok && m;
          }
        }
        if (!ok) {
          r[s][t] = false;
          changed = true;
        }
      }
  }
  return r;
}

/// Finite-trace equivalence by determinization: explore pairs of state
/// sets reachable by the same word; traces differ iff some pair has
/// exactly one empty component.
inline bool trace_equivalent(const Lts& l, StateId s, StateId t) {
  using SetPair = std::pair<std::set<StateId>, std::set<StateId>>;
  std::set<SetPair> seen;
  std::vector<SetPair> todo{{{s}, {t}}};
  while (!todo.empty()) {
    SetPair cur = todo.back();
    todo.pop_back();
    if (!seen.insert(cur).second) continue;
    if (cur.first.empty() != cur.second.empty()) return false;
    if (cur.first.empty()) continue;
    for (int a = 0; a < static_cast<int>(l.actions().size()); ++a) {
      SetPair next;
      for (StateId x : cur.first)
        for (StateId y : l.successors(a, x)) next.first.insert(y);
      for (StateId x : cur.second)
        for (StateId y : l.successors(a, x)) next.second.insert(y);
      todo.push_back(next);
    }
  }
  return true;
}

/// All tuples of S^d in index order (position 1 varies fastest).
inline std::vector<std::vector<StateId>> all_tuples(int n, int d) {
  std::vector<std::vector<StateId>> out;
  std::vector<StateId> t(d, 0);
  while (true) {
    out.push_back(t);
    int i = 0;
    while (i < d && ++t[i] == n) t[i++] = 0;
    if (i == d) break;
  }
  return out;
}

}  // namespace phfl::testing
