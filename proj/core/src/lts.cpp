#include "phfl/lts.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "phfl/error.hpp"

namespace phfl {

Lts::Lts(int num_states, std::vector<std::string> actions, std::vector<std::string> props)
    : num_states_(num_states), actions_(std::move(actions)), props_(std::move(props)) {
  if (num_states_ < 1) throw ValidationError("an LTS needs at least one state");
  auto check_unique = [](const std::vector<std::string>& names, const char* what) {
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw ValidationError(std::string("duplicate ") + what + " '" + *dup + "'");
  };
  check_unique(actions_, "action");
  check_unique(props_, "proposition");
  succ_.assign(actions_.size(), std::vector<std::vector<StateId>>(num_states_));
  pred_ = succ_;
  labels_.assign(num_states_, std::vector<bool>(props_.size(), false));
}

int Lts::action_index(std::string_view name) const {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  return it == actions_.end() ? -1 : static_cast<int>(it - actions_.begin());
}

int Lts::prop_index(std::string_view name) const {
  auto it = std::find(props_.begin(), props_.end(), name);
  return it == props_.end() ? -1 : static_cast<int>(it - props_.begin());
}

void Lts::add_transition(StateId src, int action, StateId dst) {
  if (src < 0 || src >= num_states_ || dst < 0 || dst >= num_states_)
    throw ValidationError("undeclared state in transition");
  if (action < 0 || action >= static_cast<int>(actions_.size())) throw ValidationError("undeclared action");
  auto& out = succ_[action][src];
  auto pos = std::lower_bound(out.begin(), out.end(), dst);
  if (pos != out.end() && *pos == dst) return;
  out.insert(pos, dst);
  auto& in = pred_[action][dst];
  in.insert(std::lower_bound(in.begin(), in.end(), src), src);
}

void Lts::add_label(StateId s, int prop) {
  if (s < 0 || s >= num_states_) throw ValidationError("undeclared state in label");
  if (prop < 0 || prop >= static_cast<int>(props_.size())) throw ValidationError("undeclared proposition");
  labels_[s][prop] = true;
}

bool Lts::has_transition(StateId src, int action, StateId dst) const {
  const auto& out = succ_[action][src];
  return std::binary_search(out.begin(), out.end(), dst);
}

std::vector<std::pair<StateId, StateId>> Lts::transitions(int action) const {
  std::vector<std::pair<StateId, StateId>> out;
  for (StateId s = 0; s < num_states_; ++s)
    for (StateId t : succ_[action][s]) out.emplace_back(s, t);
  return out;
}

std::size_t Lts::num_transitions() const {
  std::size_t n = 0;
  for (const auto& per_action : succ_)
    for (const auto& out : per_action) n += out.size();
  return n;
}

bool operator==(const Lts& a, const Lts& b) {
  return a.num_states_ == b.num_states_ && a.actions_ == b.actions_ && a.props_ == b.props_ && a.succ_ == b.succ_ &&
         a.labels_ == b.labels_;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::pair<std::string, int>> split_words(const std::string& line) {
  std::vector<std::pair<std::string, int>> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    words.emplace_back(line.substr(start, i - start), static_cast<int>(start) + 1);
  }
  return words;
}

int parse_state(const std::string& word, int num_states, int line, int col) {
  if (word.empty() || !std::all_of(word.begin(), word.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("expected a state number, got '" + word + "'", line, col);
  long v = std::stol(word);
  if (v >= num_states) throw ParseError("undeclared state " + word, line, col);
  return static_cast<int>(v);
}

}  // namespace

Lts parse_lts(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int num_states = -1;
  std::vector<std::string> actions, props;
  bool have_actions = false, have_props = false;
  struct Pending {
    std::vector<std::pair<std::string, int>> words;
    int line;
  };
  std::vector<Pending> body;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto words = split_words(raw);
    if (words.empty()) continue;
    const std::string& head = words[0].first;
    auto rest_names = [&](std::size_t from) {
      std::vector<std::string> names;
      for (std::size_t k = from; k < words.size(); ++k) names.push_back(words[k].first);
      return names;
    };
    if (head == "states:") {
      if (num_states >= 0) throw ParseError("duplicate 'states:' header", line_no, 1);
      if (words.size() != 2) throw ParseError("'states:' expects one number", line_no, 1);
      num_states = parse_state(words[1].first, 1 << 30, line_no, words[1].second);
    } else if (head == "actions:") {
      if (have_actions) throw ParseError("duplicate 'actions:' header", line_no, 1);
      actions = rest_names(1);
      have_actions = true;
    } else if (head == "props:") {
      if (have_props) throw ParseError("duplicate 'props:' header", line_no, 1);
      props = rest_names(1);
      have_props = true;
    } else {
      body.push_back({std::move(words), line_no});
    }
  }
  if (num_states < 0) throw ParseError("missing 'states:' header");

  Lts lts(num_states, actions, props);
  for (const auto& [words, line] : body) {
    const auto& head = words[0].first;
    if (head.back() == ':') {
      StateId s = parse_state(head.substr(0, head.size() - 1), num_states, line, words[0].second);
      for (std::size_t k = 1; k < words.size(); ++k) {
        int p = lts.prop_index(words[k].first);
        if (p < 0) throw ParseError("undeclared proposition '" + words[k].first + "'", line, words[k].second);
        lts.add_label(s, p);
      }
    } else {
      if (words.size() != 3) throw ParseError("expected 'src action dst'", line, words[0].second);
      StateId s = parse_state(words[0].first, num_states, line, words[0].second);
      int a = lts.action_index(words[1].first);
      if (a < 0) throw ParseError("undeclared action '" + words[1].first + "'", line, words[1].second);
      StateId t = parse_state(words[2].first, num_states, line, words[2].second);
      lts.add_transition(s, a, t);
    }
  }
  return lts;
}

std::string write_lts(const Lts& lts) {
  std::ostringstream out;
  out << "states: " << lts.num_states() << "\n";
  out << "actions:";
  for (const auto& a : lts.actions()) out << ' ' << a;
  out << "\nprops:";
  for (const auto& p : lts.props()) out << ' ' << p;
  out << "\n";
  for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a)
    for (auto [s, t] : lts.transitions(a)) out << s << ' ' << lts.actions()[a] << ' ' << t << "\n";
  for (StateId s = 0; s < lts.num_states(); ++s) {
    bool any = false;
    for (int p = 0; p < static_cast<int>(lts.props().size()); ++p) any = any || lts.has_label(s, p);
    if (!any) continue;
    out << s << ':';
    for (int p = 0; p < static_cast<int>(lts.props().size()); ++p)
      if (lts.has_label(s, p)) out << ' ' << lts.props()[p];
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON format: {"states": n, "actions": [...], "props": [...],
//               "transitions": [[src, "a", dst], ...], "labels": {"0": ["p"], ...}}

Lts parse_lts_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    int n = j.at("states").get<int>();
    auto actions = j.value("actions", std::vector<std::string>{});
    auto props = j.value("props", std::vector<std::string>{});
    Lts lts(n, actions, props);
    for (const auto& tr : j.value("transitions", nlohmann::json::array())) {
      if (!tr.is_array() || tr.size() != 3) throw ParseError("transition must be [src, action, dst]");
      int a = lts.action_index(tr[1].get<std::string>());
      if (a < 0) throw ValidationError("undeclared action '" + tr[1].get<std::string>() + "'");
      lts.add_transition(tr[0].get<int>(), a, tr[2].get<int>());
    }
    if (j.contains("labels")) {
      for (const auto& [key, names] : j["labels"].items()) {
        int s = std::stoi(key);
        for (const auto& name : names) {
          int p = lts.prop_index(name.get<std::string>());
          if (p < 0) throw ValidationError("undeclared proposition '" + name.get<std::string>() + "'");
          lts.add_label(s, p);
        }
      }
    }
    return lts;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed LTS JSON: ") + e.what());
  }
}

std::string write_lts_json(const Lts& lts) {
  nlohmann::json j;
  j["states"] = lts.num_states();
  j["actions"] = lts.actions();
  j["props"] = lts.props();
  j["transitions"] = nlohmann::json::array();
  for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a)
    for (auto [s, t] : lts.transitions(a)) j["transitions"].push_back({s, lts.actions()[a], t});
  j["labels"] = nlohmann::json::object();
  for (StateId s = 0; s < lts.num_states(); ++s) {
    std::vector<std::string> names;
    for (int p = 0; p < static_cast<int>(lts.props().size()); ++p)
      if (lts.has_label(s, p)) names.push_back(lts.props()[p]);
    if (!names.empty()) j["labels"][std::to_string(s)] = names;
  }
  return j.dump(2) + "\n";
}

Lts parse_lts_any(std::string_view text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string_view::npos && text[pos] == '{') return parse_lts_json(text);
  return parse_lts(text);
}

Lts load_lts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lts_any(buf.str());
}

// ---------------------------------------------------------------------------
// Bisimulation

namespace {

// One refinement round: new class = (old class, per action the sorted set of
// successor classes). Returns the number of classes.
int refine(const Lts& lts, std::vector<int>& cls, bool sort_by_signature) {
  using Signature = std::pair<int, std::vector<std::vector<int>>>;
  std::vector<Signature> sig(lts.num_states());
  for (StateId s = 0; s < lts.num_states(); ++s) {
    sig[s].first = cls[s];
    for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a) {
      std::vector<int> succ;
      for (StateId t : lts.successors(a, s)) succ.push_back(cls[t]);
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      sig[s].second.push_back(std::move(succ));
    }
  }
  std::map<Signature, int> ids;
  if (sort_by_signature) {
    for (const auto& sg : sig) ids.emplace(sg, 0);
    int next = 0;
    for (auto& [key, id] : ids) id = next++;
  } else {
    for (const auto& sg : sig) ids.emplace(sg, static_cast<int>(ids.size()));
  }
  for (StateId s = 0; s < lts.num_states(); ++s) cls[s] = ids.at(sig[s]);
  return static_cast<int>(ids.size());
}

std::vector<int> label_classes(const Lts& lts, bool ordered) {
  std::map<std::vector<bool>, int> ids;
  for (StateId s = 0; s < lts.num_states(); ++s) ids.emplace(lts.label(s), 0);
  int next = 0;
  if (ordered) {
    for (auto& [key, id] : ids) id = next++;
  } else {
    ids.clear();
    for (StateId s = 0; s < lts.num_states(); ++s) ids.emplace(lts.label(s), static_cast<int>(ids.size()));
  }
  std::vector<int> cls(lts.num_states());
  for (StateId s = 0; s < lts.num_states(); ++s) cls[s] = ids.at(lts.label(s));
  return cls;
}

}  // namespace

Partition bisim_partition(const Lts& lts) {
  std::vector<int> cls = label_classes(lts, false);
  int count = 0;
  for (int c : cls) count = std::max(count, c + 1);
  while (true) {
    int refined = refine(lts, cls, false);
    if (refined == count) break;
    count = refined;
  }
  Partition p;
  std::map<int, int> block_of_class;
  p.class_of.resize(lts.num_states());
  for (StateId s = 0; s < lts.num_states(); ++s) {
    auto [it, fresh] = block_of_class.emplace(cls[s], static_cast<int>(p.blocks.size()));
    if (fresh) p.blocks.emplace_back();
    p.blocks[it->second].push_back(s);
    p.class_of[s] = it->second;
  }
  return p;
}

Quotient quotient(const Lts& lts) {
  Partition part = bisim_partition(lts);
  Lts q(static_cast<int>(part.size()), lts.actions(), lts.props());
  for (int b = 0; b < static_cast<int>(part.size()); ++b) {
    StateId rep = part.blocks[b].front();
    for (int p = 0; p < static_cast<int>(lts.props().size()); ++p)
      if (lts.has_label(rep, p)) q.add_label(b, p);
  }
  for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a)
    for (auto [s, t] : lts.transitions(a)) q.add_transition(part.class_of[s], a, part.class_of[t]);
  return {std::move(q), std::move(part)};
}

std::vector<bool> reachable(const Lts& lts, std::span<const StateId> seeds) {
  std::vector<bool> seen(lts.num_states(), false);
  std::vector<StateId> stack;
  for (StateId s : seeds) {
    if (s < 0 || s >= lts.num_states()) throw ValidationError("seed is not a state");
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a)
      for (StateId t : lts.successors(a, s))
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
  }
  return seen;
}

bool same_traces(const Lts& lts, StateId s, StateId t) {
  using Subset = std::vector<bool>;
  auto step = [&](const Subset& x, int a) {
    Subset out(lts.num_states());
    for (StateId u = 0; u < lts.num_states(); ++u)
      if (x[u])
        for (StateId v : lts.successors(a, u)) out[v] = true;
    return out;
  };
  auto empty = [](const Subset& x) { return std::find(x.begin(), x.end(), true) == x.end(); };
  Subset a0(lts.num_states()), b0(lts.num_states());
  a0[s] = b0[t] = true;
  std::set<std::pair<Subset, Subset>> seen{{a0, b0}};
  std::deque<std::pair<Subset, Subset>> queue{{a0, b0}};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int a = 0; a < static_cast<int>(lts.actions().size()); ++a) {
      Subset x2 = step(x, a), y2 = step(y, a);
      bool ex = empty(x2), ey = empty(y2);
      if (ex != ey) return false;
      if (!ex && seen.insert({x2, y2}).second) queue.emplace_back(std::move(x2), std::move(y2));
    }
  }
  return true;
}

CanonicalOrder::CanonicalOrder(const Lts& lts) {
  // Stage 0 ranks label bit-vectors lexicographically; every later stage
  // ranks (previous rank, per-action sorted successor ranks). Both
  // orderings are total on signatures, hence deterministic.
  rank_ = label_classes(lts, true);
  num_classes_ = 0;
  for (int r : rank_) num_classes_ = std::max(num_classes_, r + 1);
  stages_ = 0;
  while (true) {
    int refined = refine(lts, rank_, true);
    ++stages_;
    if (refined == num_classes_) break;
    num_classes_ = refined;
  }
}

CanonicalOrder canonical_order(const Lts& lts) { return CanonicalOrder(lts); }

}  // namespace phfl
