#pragma once

// Curated HO(LFP) queries for the end-to-end capture checks, and the
// small quotient LTS they run on.

#include <algorithm>
#include <string>
#include <vector>

#include "phfl/holfp.hpp"
#include "support.hpp"

namespace phfl::testing {

struct HolfpCase {
  const char* name;
  const char* text;
  int order;
};

inline const std::vector<HolfpCase>& capture_suite() {
  static const std::vector<HolfpCase> cases = {
      {"prop", "p(X)", 1},
      {"edge", "a(X,Y)", 1},
      {"self loop", "a(X,X)", 1},
      {"diamond", "exists (Y:ind). a(X,Y) /\\ p(Y)", 1},
      {"box", "forall (Y:ind). a(X,Y) -> p(Y)", 1},
      {"boolean", "~p(X) \\/ exists (Y:ind). b(X,Y) /\\ ~p(Y)", 1},
      {"closed", "exists (Y:ind). p(Y) /\\ forall (Z:ind). ~b(Y,Z)", 1},
      {"reach", "(lfp (R,Y). p(Y) \\/ exists (Z:ind). (a(Y,Z) \\/ b(Y,Z)) /\\ R(Z))(X)", 2},
      {"a-path", "(gfp (R,Y). exists (Z:ind). a(Y,Z) /\\ R(Z))(X)", 2},
      {"until", "(lfp (R,Y). p(Y) \\/ (exists (Z:ind). a(Y,Z)) /\\ forall (W:ind). a(Y,W) -> R(W))(X)", 2},
      {"set member", "exists (S:(ind)). S(X) /\\ forall (U:ind). S(U) -> p(U)", 2},
      {"invariant set",
       "exists (S:(ind)). S(X) /\\ forall (U:ind). S(U) -> (~p(U) /\\ forall (V:ind). a(U,V) -> S(V))", 2},
      {"set reach",
       "exists (S:(ind)). (forall (U:ind). S(U) -> p(U)) /\\ "
       "(lfp (R,Y). S(Y) \\/ exists (Z:ind). b(Y,Z) /\\ R(Z))(X)",
       2},
      {"pair lfp", "(lfp (R,Y1,Y2). a(Y1,Y2) \\/ exists (Z:ind). a(Y1,Z) /\\ R(Z,Y2))(X,X)", 2},
      {"pair set", "exists (T:(ind,ind)). T(X,X) /\\ forall (U:ind). forall (V:ind). T(U,V) -> b(U,V)", 2},
      {"family",
       "exists (F:((ind))). (forall (S:(ind)). F(S) -> forall (U:ind). S(U) -> p(U)) /\\ "
       "exists (S2:(ind)). F(S2) /\\ S2(X)",
       3},
      {"family lfp",
       "exists (Q:(ind)). Q(X) /\\ (forall (V:ind). Q(V) -> ~p(V)) /\\ "
       "(lfp (G,S). (exists (U:ind). exists (V2:ind). S(U) /\\ a(U,V2) /\\ p(V2)) \\/ "
       "exists (T:(ind)). G(T) /\\ forall (V3:ind). T(V3) -> S(V3))(Q)",
       3},
      {"all families",
       "forall (F:((ind))). (exists (S:(ind)). F(S) /\\ S(X)) -> exists (T:(ind)). F(T) /\\ "
       "exists (U:ind). T(U) /\\ (p(U) \\/ ~p(X))",
       3},
  };
  return cases;
}

struct HomogCase {
  const char* name;
  const char* text;
  int max_states;  // mixed-order cases are run on smaller LTS
};

/// Non-homogeneous formulas: padded widths, then lifted orders.
inline const std::vector<HomogCase>& homogenize_suite() {
  static const std::vector<HomogCase> cases = {
      {"pad unary lfp", "(lfp (R,Y). p(Y) \\/ exists (Z:ind). a(Y,Z) /\\ R(Z))(X) /\\ (lfp (T,Y1,Y2). a(Y1,Y2))(X,X)", 3},
      {"pad gfp",
       "(gfp (R,Y). exists (Z:ind). b(Y,Z) /\\ R(Z))(X) \\/ "
       "(lfp (T,Y1,Y2). b(Y1,Y2) \\/ exists (Z2:ind). b(Y1,Z2) /\\ T(Z2,Y2))(X,X)",
       3},
      {"pad chain",
       "exists (Y:ind). (lfp (T,Y1,Y2). a(Y1,Y2) \\/ b(Y1,Y2))(X,Y) /\\ "
       "(lfp (R,U). p(U) \\/ exists (Z:ind). a(U,Z) /\\ R(Z))(Y)",
       3},
      {"pad nested", "(lfp (T,Y1,Y2). (a(Y1,Y2) /\\ (lfp (R,U). p(U))(Y2)) \\/ exists (Z:ind). a(Y1,Z) /\\ T(Z,Y2))(X,X)",
       3},
      {"pad set", "exists (S:(ind)). S(X) /\\ ~p(X) /\\ (lfp (T,Y1,Y2). a(Y1,Y2))(X,X)", 3},
      {"pad forall set", "forall (S:(ind)). S(X) -> (exists (Y:ind). S(Y) /\\ (lfp (T,Y1,Y2). b(Y1,Y2))(X,Y))", 2},
      {"pad under pair set",
       "exists (T:(ind,ind)). T(X,X) /\\ (lfp (R,Y). p(Y) \\/ exists (Z:ind). T(Y,Z) /\\ R(Z))(X)", 3},
      {"pad negated", "(lfp (R,Y). exists (Z:ind). a(Y,Z) /\\ (p(Z) \\/ R(Z)))(X) /\\ ~(lfp (T,Y1,Y2). b(Y1,Y2))(X,X)", 3},
      {"pad to three",
       "(lfp (T,Y1,Y2,Y3). a(Y1,Y2) /\\ b(Y2,Y3))(X,X,X) \\/ (lfp (R,V1,V2). a(V1,V2) /\\ p(V2))(X,X)", 3},
      {"pad unary to three", "(lfp (R,Y). p(Y))(X) \\/ (lfp (T,Y1,Y2,Y3). a(Y1,Y2) /\\ a(Y2,Y3))(X,X,X)", 3},
      {"pad two sets", "exists (S:(ind)). exists (T:(ind,ind)). S(X) /\\ T(X,X) /\\ p(X)", 2},
      {"pad set lfp arg",
       "exists (S:(ind)). (forall (U:ind). S(U) -> p(U)) /\\ "
       "(lfp (T,Y1,Y2). S(Y2) \\/ exists (Z:ind). a(Y1,Z) /\\ T(Z,Y2))(X,X)",
       2},
      {"lift set arg",
       "exists (Q:(ind)). (forall (U:ind). Q(U) -> p(U)) /\\ "
       "(lfp (R,Y,S). S(Y) \\/ exists (Z:ind). a(Y,Z) /\\ R(Z,S))(X,Q)",
       2},
      {"lift forall", "forall (Q:(ind)). Q(X) -> (lfp (R,Y,S). S(Y) /\\ exists (Z:ind). b(Y,Z))(X,Q)", 2},
      {"lift pair arg",
       "exists (Q:(ind,ind)). (forall (U:ind). forall (V:ind). Q(U,V) -> a(U,V)) /\\ "
       "(lfp (R,Y,S). exists (Z:ind). S(Y,Z) /\\ (p(Z) \\/ R(Z,S)))(X,Q)",
       2},
      {"lift first", "exists (Q:(ind)). (lfp (R,S,Y). S(Y) /\\ p(Y))(Q,X)", 2},
      {"lift backward",
       "exists (Q:(ind)). Q(X) /\\ (lfp (R,Y,S). S(Y) \\/ exists (Z:ind). b(Z,Y) /\\ R(Z,S))(X,Q)", 2},
      {"lift closure",
       "forall (Q:(ind)). (forall (U:ind). p(U) -> Q(U)) -> "
       "(lfp (R,Y,S). S(Y) \\/ exists (Z:ind). a(Y,Z) /\\ R(Z,S))(X,Q)",
       2},
      {"lift negated", "exists (Q:(ind)). exists (Y:ind). Q(Y) /\\ a(X,Y) /\\ (lfp (R,S,U). ~S(U) \\/ p(U))(Q,X)", 2},
      {"lift gfp", "exists (Q:(ind)). Q(X) /\\ (gfp (R,Y,S). S(Y) /\\ exists (Z:ind). a(Y,Z) /\\ R(Z,S))(X,Q)", 2},
  };
  return cases;
}

/// Pairwise non-isomorphic-enough quotients with at most `max_states`
/// states over actions a, b and proposition p.
inline std::vector<Lts> small_quotients(std::uint64_t seed, int count, int max_states = 3) {
  Rng rng(seed);
  std::vector<Lts> out;
  for (int tries = 0; tries < 100000 && static_cast<int>(out.size()) < count; ++tries) {
    int n = uniform(rng, 1, max_states);
    Lts l(n, {"a", "b"}, {"p"});
    for (int a = 0; a < 2; ++a)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (coin(rng, 0.35)) l.add_transition(s, a, t);
    for (int s = 0; s < n; ++s)
      if (coin(rng)) l.add_label(s, 0);
    Lts q = quotient(l).lts;
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
  }
  return out;
}

/// Assignments under which every state is reachable from the free states,
/// the setting in which the emulated quantifiers range over all of S.
inline bool anchors_reach_all(const Lts& l, const std::vector<StateId>& states) {
  std::vector<StateId> seeds = states.empty() ? std::vector<StateId>{0} : states;
  auto r = reachable(l, seeds);
  return std::all_of(r.begin(), r.end(), [](bool b) { return b; });
}

}  // namespace phfl::testing
