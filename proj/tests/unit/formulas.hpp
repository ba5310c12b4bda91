#pragma once

#include <string>
#include <vector>

// Surface-syntax versions of the two classic examples, for one action
// `a` and one proposition `p` unless stated otherwise.
namespace phfl::testing {

inline const std::string kPhiSim = "nu (X:Prop). (p@1 <=> p@2) /\\ [a@1]<a@2>X /\\ {1->2,2->1} X";

inline std::string phi_sim_for(const std::vector<std::string>& actions, const std::vector<std::string>& props) {
  std::string s = "nu (X:Prop). tt";
  for (const auto& p : props) s += " /\\ (" + p + "@1 <=> " + p + "@2)";
  for (const auto& a : actions) s += " /\\ [" + a + "@1]<" + a + "@2>X";
  return s + " /\\ {1->2,2->1} X";
}

inline std::string phi_fte_for(const std::vector<std::string>& actions) {
  std::string body = "(x <=> y)";
  for (const auto& a : actions) body += " /\\ F (<" + a + "@1>x) (<" + a + "@2>y)";
  return "(nu (F:(0Prop) -> (0Prop) -> Prop). \\(x:0Prop). \\(y:0Prop). " + body + ") tt tt";
}

}  // namespace phfl::testing
