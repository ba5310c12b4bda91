// phfl: model checking, quotients, products, equivalence checks and the
// HO(LFP) translation from the command line.
//
// Exit status: 0 success / query true, 1 query false, 2 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "phfl/error.hpp"
#include "phfl/eval.hpp"
#include "phfl/holfp.hpp"
#include "phfl/lts.hpp"
#include "phfl/macros.hpp"
#include "phfl/reduction.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"
#include "selftest.hpp"

using json = nlohmann::json;
using namespace phfl;

namespace {

constexpr int kTrue = 0, kFalse = 1, kError = 2;

// A FORMULA argument names a file when one exists, otherwise it is the text.
std::string formula_text(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<StateId> parse_states(const std::string& s, const Lts& l, const char* what) {
  std::vector<StateId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = cli::trim(item);
    std::size_t pos = 0;
    int v = -1;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.empty()) throw ValidationError(std::string(what) + ": '" + item + "' is not a state");
    if (v < 0 || v >= l.num_states())
      throw ValidationError(std::string(what) + ": state " + item + " out of range 0.." +
                            std::to_string(l.num_states() - 1));
    out.push_back(v);
  }
  return out;
}

json tuple_list(const TupleSpace& sp, const TupleSet& s) {
  json out = json::array();
  for (const auto& t : tuples_of(sp, s)) out.push_back(t);
  return out;
}

std::string tuple_str(const std::vector<StateId>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

void emit(const cli::RunConfig& cfg, const json& j, const std::string& text) {
  if (cfg.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// --------------------------------------------------------------- commands

int cmd_check(const cli::RunConfig& cfg, const std::string& lts_path, const std::string& formula, int d,
              const std::string& tuple, bool show_set) {
  Lts l = load_lts(lts_path);
  Formula f = parse_formula(formula_text(formula), d);
  Type t = type_of({}, f);
  if (!t->ground()) throw ValidationError("formula has type " + to_string(t) + ", expected Prop");
  auto st = parse_states(tuple, l, "--tuple");
  if (static_cast<int>(st.size()) != d)
    throw ValidationError("--tuple has " + std::to_string(st.size()) + " states, --d is " + std::to_string(d));
  Evaluator ev(l, d, cfg.eval_options());
  TupleSet v = ev.eval_ground(f);
  bool member = v.test(ev.space().index(st));
  json j{{"tuple", st}, {"member", member}, {"order", order_of_formula(f)}};
  std::string text = tuple_str(st) + ": " + (member ? "true" : "false") + "\n";
  if (show_set) {
    j["set"] = tuple_list(ev.space(), v);
    text += "set (" + std::to_string(v.count()) + " tuples):\n";
    for (const auto& tp : tuples_of(ev.space(), v)) text += "  " + tuple_str(tp) + "\n";
  }
  emit(cfg, j, text);
  return member ? kTrue : kFalse;
}

int cmd_typecheck(const cli::RunConfig& cfg, const std::string& formula, int d) {
  Formula f = parse_formula(formula_text(formula), d);
  Type t = type_of({}, f);
  int order = order_of_formula(f);
  emit(cfg, {{"type", to_string(t)}, {"order", order}, {"formula", print_formula(f)}},
       "type: " + to_string(t) + "\norder: " + std::to_string(order) + "\n");
  return kTrue;
}

int cmd_quotient(const cli::RunConfig& cfg, const std::string& lts_path) {
  Lts l = load_lts(lts_path);
  Quotient q = quotient(l);
  json blocks = json::array();
  std::string text = "# " + std::to_string(q.partition.size()) + " classes:";
  for (const auto& b : q.partition.blocks) {
    blocks.push_back(b);
    text += " {";
    for (std::size_t i = 0; i < b.size(); ++i) text += (i ? "," : "") + std::to_string(b[i]);
    text += "}";
  }
  json j{{"classes", blocks}, {"class_of", q.partition.class_of}, {"lts", json::parse(write_lts_json(q.lts))}};
  emit(cfg, j, text + "\n" + write_lts(q.lts));
  return kTrue;
}

int cmd_product(const cli::RunConfig& cfg, const std::string& lts_path, int d) {
  Lts l = load_lts(lts_path);
  ProductLts p = d_product(l, d, all_sigmas(d));
  json j{{"arity", d}, {"lts", json::parse(write_lts_json(p.lts))}};
  emit(cfg, j, write_lts(p.lts));
  return kTrue;
}

int cmd_equiv(const cli::RunConfig& cfg, const std::string& lts_path, const std::string& kind,
              const std::string& pair) {
  Lts l = load_lts(lts_path);
  auto st = parse_states(pair, l, "--pair");
  if (st.size() != 2) throw ValidationError("--pair needs two states");
  bool bisim = kind == "bisim";
  Formula f = bisim ? phi_bisim(l) : phi_fte(l);
  bool by_formula = check_tuple(l, st, f, {}, cfg.eval_options());
  bool by_oracle = bisim ? bisim_partition(l).same_block(st[0], st[1]) : same_traces(l, st[0], st[1]);
  bool agree = by_formula == by_oracle;
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  emit(cfg, {{"kind", kind}, {"pair", st}, {"formula", by_formula}, {"oracle", by_oracle}, {"agree", agree}},
       "formula: " + b(by_formula) + ", oracle: " + b(by_oracle) + ", " + (agree ? "agree" : "DISAGREE") + "\n");
  if (!agree) return kError;
  return by_formula ? kTrue : kFalse;
}

void collect_signature(const holfp::HFormula& f, std::set<std::string>& acts, std::set<std::string>& props) {
  if (!f) return;
  if (f->kind == holfp::HKind::Edge) acts.insert(f->name);
  if (f->kind == holfp::HKind::Prop) props.insert(f->name);
  collect_signature(f->a, acts, props);
  collect_signature(f->b, acts, props);
}

int cmd_translate(const cli::RunConfig& cfg, const std::string& path, const std::string& lts_path,
                  const std::string& tuple) {
  holfp::HFormula f = holfp::parse_holfp(read_file(path));
  holfp::Signature sig;
  std::optional<Lts> l;
  if (!lts_path.empty()) {
    l = load_lts(lts_path);
    sig = holfp::Signature::of(*l);
  } else {
    std::set<std::string> acts, props;
    collect_signature(f, acts, props);
    sig.actions.assign(acts.begin(), acts.end());
    sig.props.assign(props.begin(), props.end());
  }
  holfp::Capture cap = holfp::capture_pipeline(f, sig);
  json j{{"holfp_order", cap.holfp_order},
         {"phfl_order", cap.phfl_order},
         {"d", cap.config.d},
         {"w", cap.config.w},
         {"r", cap.config.r},
         {"free_individuals", cap.free_individuals},
         {"homogeneous", holfp::to_string(cap.homogeneous)},
         {"psi", print_formula(cap.psi)}};
  std::string text = "# HO(LFP) order " + std::to_string(cap.holfp_order) + ", PHFL order " +
                     std::to_string(cap.phfl_order) + ", d=" + std::to_string(cap.config.d) +
                     ", w=" + std::to_string(cap.config.w) + ", r=" + std::to_string(cap.config.r) + "\n# free:";
  for (const auto& x : cap.free_individuals) text += " " + x;
  text += "\n" + print_formula(cap.psi) + "\n";
  int status = kTrue;
  if (!tuple.empty()) {
    if (!l) throw ValidationError("--tuple needs --lts");
    auto st = parse_states(tuple, *l, "--tuple");
    if (st.size() < cap.free_individuals.size())
      throw ValidationError("--tuple needs one state per free individual");
    holfp::Assignment alpha;
    for (std::size_t i = 0; i < cap.free_individuals.size(); ++i) alpha[cap.free_individuals[i]] = holfp::HValue::ind(st[i]);
    bool direct = holfp::eval_holfp(*l, alpha, f);
    bool via = holfp::capture_query(*l, cap, st, cfg.eval_options());
    j["direct"] = direct;
    j["translated"] = via;
    text += std::string("direct: ") + (direct ? "true" : "false") + ", translated: " + (via ? "true" : "false") + "\n";
    status = direct == via ? (via ? kTrue : kFalse) : kError;
  }
  emit(cfg, j, text);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PHFL model checker and HO(LFP) translator"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, format, strategy;
  std::size_t full_threshold = 0, iteration_cap = 0;
  app.add_option("--config", config_path, std::string("key=value config file (default: $") + cli::kConfigEnv + ")");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--strategy", strategy, "evaluation strategy")->check(CLI::IsMember({"full", "demand"}));
  app.add_option("--full-threshold", full_threshold, "largest |S|^d the full strategy enumerates");
  app.add_option("--iteration-cap", iteration_cap, "fixpoint iteration cap");

  std::string lts, formula, tuple, kind = "bisim", pair;
  int d = 1;
  bool show_set = false;
  std::uint64_t seed = 1;
  int rounds = 40;

  auto* check = app.add_subcommand("check", "evaluate a closed formula at a tuple");
  check->add_option("LTS", lts)->required();
  check->add_option("FORMULA", formula, "formula text or file")->required();
  check->add_option("--d", d, "arity")->required();
  check->add_option("--tuple", tuple, "s1,..,sd")->required();
  check->add_flag("--set", show_set, "also print the full ground set");

  auto* typecheck = app.add_subcommand("typecheck", "type and order of a formula");
  typecheck->add_option("FORMULA", formula)->required();
  typecheck->add_option("--d", d, "arity")->required();

  auto* quot = app.add_subcommand("quotient", "bisimulation quotient");
  quot->add_option("LTS", lts)->required();

  auto* prod = app.add_subcommand("product", "d-fold product LTS");
  prod->add_option("LTS", lts)->required();
  prod->add_option("--d", d, "arity")->required();

  auto* equiv = app.add_subcommand("equiv", "equivalence formula against the native oracle");
  equiv->add_option("LTS", lts)->required();
  equiv->add_option("--kind", kind)->check(CLI::IsMember({"bisim", "trace"}));
  equiv->add_option("--pair", pair, "s,t")->required();

  auto* translate = app.add_subcommand("translate", "compile an HO(LFP) query to PHFL");
  translate->add_option("HOLFP_FILE", formula)->required();
  translate->add_option("--lts", lts, "take the signature from this LTS");
  translate->add_option("--tuple", tuple, "also answer the query at these states (needs --lts)");

  auto* selftest = app.add_subcommand("selftest", "randomized property suites");
  selftest->add_option("--seed", seed);
  selftest->add_option("--rounds", rounds, "instances per suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    cli::RunConfig cfg = cli::default_config(config_path);
    if (!format.empty()) cfg.json = format == "json";
    if (!strategy.empty()) cfg.strategy = cli::parse_strategy(strategy);
    if (full_threshold) cfg.full_threshold = full_threshold;
    if (iteration_cap) cfg.iteration_cap = iteration_cap;

    if (*check) return cmd_check(cfg, lts, formula, d, tuple, show_set);
    if (*typecheck) return cmd_typecheck(cfg, formula, d);
    if (*quot) return cmd_quotient(cfg, lts);
    if (*prod) return cmd_product(cfg, lts, d);
    if (*equiv) return cmd_equiv(cfg, lts, kind, pair);
    if (*translate) return cmd_translate(cfg, formula, lts, tuple);
    if (*selftest) return cli::run_selftest(seed, rounds, cfg.json) ? kTrue : kError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
