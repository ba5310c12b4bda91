#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phfl {

using StateId = int;

/// Finite labelled transition system. States are dense 0-based integers;
/// the order of `actions()` and `props()` is the declaration order and is
/// significant for canonical_order.
class Lts {
 public:
  Lts() = default;
  Lts(int num_states, std::vector<std::string> actions, std::vector<std::string> props);

  int num_states() const { return num_states_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& props() const { return props_; }

  /// -1 when absent.
  int action_index(std::string_view name) const;
  int prop_index(std::string_view name) const;

  void add_transition(StateId src, int action, StateId dst);
  void add_label(StateId s, int prop);

  const std::vector<StateId>& successors(int action, StateId s) const { return succ_[action][s]; }
  const std::vector<StateId>& predecessors(int action, StateId s) const { return pred_[action][s]; }
  bool has_transition(StateId src, int action, StateId dst) const;
  bool has_label(StateId s, int prop) const { return labels_[s][prop]; }
  const std::vector<bool>& label(StateId s) const { return labels_[s]; }
  std::vector<std::pair<StateId, StateId>> transitions(int action) const;

  std::size_t num_transitions() const;

  friend bool operator==(const Lts& a, const Lts& b);

 private:
  int num_states_ = 0;
  std::vector<std::string> actions_;
  std::vector<std::string> props_;
  std::vector<std::vector<std::vector<StateId>>> succ_;  // [action][state] sorted
  std::vector<std::vector<std::vector<StateId>>> pred_;
  std::vector<std::vector<bool>> labels_;               // [state][prop]
};

/// Blocks are sorted by their smallest member; members sorted ascending.
struct Partition {
  std::vector<std::vector<StateId>> blocks;
  std::vector<int> class_of;

  std::size_t size() const { return blocks.size(); }
  bool same_block(StateId s, StateId t) const { return class_of[s] == class_of[t]; }
};

Lts parse_lts(std::string_view text);
Lts parse_lts_json(std::string_view text);
/// Dispatches on the first non-blank character ('{' selects JSON).
Lts parse_lts_any(std::string_view text);
Lts load_lts(const std::string& path);
std::string write_lts(const Lts& lts);
std::string write_lts_json(const Lts& lts);

Partition bisim_partition(const Lts& lts);

struct Quotient {
  Lts lts;
  Partition partition;  // partition.class_of is the quotient map
};
Quotient quotient(const Lts& lts);

std::vector<bool> reachable(const Lts& lts, std::span<const StateId> seeds);

/// Same finite action traces from s and t (labels ignored), by subset
/// construction on the pair.
bool same_traces(const Lts& lts, StateId s, StateId t);

/// Ranks of a strict total order on bisimulation classes: s < t iff
/// rank[s] < rank[t]. Bisimilar states share a rank.
class CanonicalOrder {
 public:
  explicit CanonicalOrder(const Lts& lts);
  bool less(StateId s, StateId t) const { return rank_[s] < rank_[t]; }
  int rank(StateId s) const { return rank_[s]; }
  int num_classes() const { return num_classes_; }
  int stages() const { return stages_; }

 private:
  std::vector<int> rank_;
  int num_classes_ = 0;
  int stages_ = 0;
};

CanonicalOrder canonical_order(const Lts& lts);

}  // namespace phfl
