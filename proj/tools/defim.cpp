// defim: command-line workbench driver.
//
// Exit codes: 0 pass, 1 fail, 2 input error, 3 inconclusive (under --strict
// an undecided outcome is reported as 3 instead of folding into 1).
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "defim/approx.hpp"
#include "defim/reduce.hpp"
#include "defim/strat.hpp"
#include "defim/suite.hpp"
#include "defim/typing.hpp"
#include "defim/unfold_oracle.hpp"

using namespace defim;
using nlohmann::json;

namespace {

struct Globals {
  bool strict = false;
  bool emit_json = false;
  uint64_t seed = 1;
};

Globals G;

// One record per line: `key=value` pairs, or a JSON object with --json.
void record(std::initializer_list<std::pair<std::string, std::string>> kv) {
  if (G.emit_json) {
    json j;
    for (const auto& [k, v] : kv) j[k] = v;
    std::cout << j.dump() << "\n";
  } else {
    bool first = true;
    for (const auto& [k, v] : kv) {
      if (!first) std::cout << " ";
      first = false;
      std::cout << k << "=" << (v.find(' ') == std::string::npos ? v : "\"" + v + "\"");
    }
    std::cout << "\n";
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* outcome_name(ReductionOutcome::K k) {
  switch (k) {
    case ReductionOutcome::K::Converged: return "converged";
    case ReductionOutcome::K::Refuted: return "refuted";
    default: return "fuel-exhausted";
  }
}

std::vector<std::pair<std::string, TypeExpr>> parse_env(const std::string& text,
                                                        const PartialModel& m) {
  std::vector<std::pair<std::string, TypeExpr>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ModelError("env entry needs x:type: " + item);
    std::string x = item.substr(0, colon);
    x.erase(0, x.find_first_not_of(" \t"));
    x.erase(x.find_last_not_of(" \t") + 1);
    out.push_back({x, parse_type(item.substr(colon + 1), m)});
  }
  return out;
}

Node parse_node(const std::string& text, const PartialModel& m) {
  try {
    return Node(parse_test(text, m));
  } catch (const ParseError&) {
    return Node(parse_term(text, m));
  }
}

int cmd_model(const std::string& path, bool sp, const std::string& witness_path) {
  auto m = load_model_file(path);
  auto viol = check_model(m);
  record({{"model", m.name},
          {"atoms", std::to_string(m.atoms.size())},
          {"valid", viol.empty() ? "yes" : "no"}});
  for (const auto& v : viol) record({{"violation", v}});
  if (!viol.empty()) return 1;
  if (!witness_path.empty()) {
    auto w = parse_witness(slurp(witness_path), m);
    auto bad = sp_verify(m, w);
    record({{"witness", witness_path}, {"sp", bad.empty() ? "yes" : "no"}});
    for (const auto& v : bad) record({{"violation", v}});
    return bad.empty() ? 0 : 1;
  }
  if (sp) {
    try {
      auto w = sp_search(m);
      record({{"sp", w ? "yes" : "no"}});
      if (w)
        for (const auto& [a, r] : w->rank) {
          if (m.is_omega(a)) continue;
          record({{"atom", a},
                  {"rank", std::to_string(r)},
                  {"pol", w->polarity.at(a) ? "+" : "-"}});
        }
      return w ? 0 : 1;
    } catch (const ResourceError& e) {
      record({{"sp", "unknown"}, {"reason", e.what()}});
      return G.strict ? 3 : 1;
    }
  }
  return 0;
}

int cmd_reduce(const std::string& expr, const std::string& model_path,
               const std::string& strategy, size_t fuel, bool trace, bool replay) {
  auto m = load_model_file(model_path);
  Session s(m);
  Node n = parse_node(expr, m);
  ReductionOutcome out;
  if (strategy == "head") {
    out = eval(n, s, fuel);
  } else {  // full: seeded random contextual schedule
    std::mt19937_64 rng(G.seed);
    Node cur = n;
    out.k = ReductionOutcome::K::FuelExhausted;
    for (size_t i = 0; i < fuel; ++i) {
      if (is_mhnf(cur)) {
        out.k = ReductionOutcome::K::Converged;
        break;
      }
      auto steps = enumerate_steps(cur, s);
      if (steps.empty()) {
        bool zero = std::holds_alternative<TestPtr>(cur) &&
                    std::get<TestPtr>(cur)->k == Test::K::Sum &&
                    std::get<TestPtr>(cur)->items.empty();
        out.k = zero ? ReductionOutcome::K::Refuted : ReductionOutcome::K::FuelExhausted;
        break;
      }
      auto& st = steps[std::uniform_int_distribution<size_t>(0, steps.size() - 1)(rng)];
      out.trace.push_back(st);
      cur = st.result;
    }
    out.final_state = cur;
  }
  record({{"outcome", outcome_name(out.k)},
          {"steps", std::to_string(out.trace.size())},
          {"final", print_node(out.final_state)}});
  if (trace) {
    Node cur = n;
    for (const auto& st : out.trace) {
      std::string p;
      for (int i : st.path) p += (p.empty() ? "" : ".") + std::to_string(i);
      record({{"rule", rule_name(st.rule)}, {"path", p}, {"state", print_node(st.result)}});
      cur = st.result;
    }
  }
  if (replay) {
    // re-derive each recorded step from its predecessor
    Node cur = n;
    bool ok = true;
    for (const auto& st : out.trace) {
      auto opts = strategy == "head" ? head_steps(cur, s) : enumerate_steps(cur, s);
      bool found = false;
      for (const auto& c : opts)
        if (c.rule == st.rule && c.path == st.path && alpha_eq(c.result, st.result)) {
          found = true;
          break;
        }
      if (!found) {
        ok = false;
        break;
      }
      cur = st.result;
    }
    record({{"replay", ok ? "ok" : "mismatch"}});
    if (!ok) return 1;
  }
  if (out.k == ReductionOutcome::K::Converged) return 0;
  if (out.k == ReductionOutcome::K::Refuted) return 1;
  return G.strict ? 3 : 1;
}

int cmd_member(const std::string& expr, const std::string& model_path,
               const std::string& env_text, const std::string& target_text, size_t fuel,
               int depth, bool cross) {
  auto m = load_model_file(model_path);
  Session s(m);
  auto t = parse_term(expr, m);
  auto target = parse_type(target_text, m);
  auto env_values = parse_env(env_text, m);
  Environment env;
  for (const auto& [x, a] : env_values) env = env.extended(x, a);
  CheckOptions opt;
  opt.universe_depth = depth;
  bool derivable = false;
  std::string verdict;
  try {
    derivable = check_term(env, t, target, s, opt).derivable;
    verdict = derivable ? "DERIVABLE" : "NOT-FOUND";
  } catch (const ResourceError&) {
    verdict = "BUDGET-EXHAUSTED";
  }
  if (!cross) {
    record({{"member", verdict}});
    if (derivable) return 0;
    return verdict == "NOT-FOUND" ? 1 : (G.strict ? 3 : 1);
  }
  auto out = oracle(t, env_values, target, s, fuel);
  record({{"member", verdict}, {"oracle", outcome_name(out.k)}});
  bool conv = out.k == ReductionOutcome::K::Converged;
  bool refu = out.k == ReductionOutcome::K::Refuted;
  if (derivable && refu) {
    record({{"cross-check", "CONTRADICTION"}});
    return 1;
  }
  record({{"cross-check", (derivable && conv) || (!derivable && refu) ? "agree" : "undecided"}});
  if (derivable || conv) return 0;
  if (refu) return 1;
  return G.strict ? 3 : 1;
}

int cmd_approx(const std::string& expr, const std::string& model_path, size_t fuel) {
  auto m = load_model_file(model_path);
  Session s(m);
  auto chain = approximants(parse_term(expr, m), s, fuel);
  for (const auto& a : chain) record({{"approximant", print_term(a)}});
  return 0;
}

int cmd_approx_member(const std::string& expr, const std::string& model_path,
                      const std::string& target_text, const std::string& env_text,
                      size_t fuel, size_t budget, int depth) {
  auto m = load_model_file(model_path);
  Session s(m);
  auto target = parse_type(target_text, m);
  CheckOptions opt;
  opt.universe_depth = depth;
  auto v = approximability_check(parse_term(expr, m), parse_env(env_text, m), target, s,
                                 fuel, budget, opt);
  if (v.found) {
    record({{"approximable", "yes"}, {"witness", print_term(v.witness)}});
    return 0;
  }
  record({{"approximable", "none-within-fuel"}});
  return G.strict ? 3 : 1;
}

int cmd_suite_run(const std::string& name, size_t fuel, size_t cases,
                  const std::string& model_dir) {
  SuiteSpec spec;
  spec.name = name;
  spec.seed = G.seed;
  spec.fuel = fuel;
  spec.cases = cases;
  spec.model_dir = model_dir;
  auto rep = run_suite(spec);
  if (rep.cases.empty()) {
    std::cerr << "unknown suite: " << name << "\n";
    return 2;
  }
  for (const auto& c : rep.cases)
    record({{"suite", c.suite},
            {"case", c.id},
            {"verdict", c.verdict},
            {"fuel", std::to_string(c.fuel_used)},
            {"detail", c.detail}});
  record({{"summary", rep.summary()}});
  if (rep.fail) return 1;
  if (rep.inconclusive && G.strict) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for distributive extensional filter models and their test calculus"};
  app.require_subcommand(1);
  app.add_flag("--strict", G.strict, "exit 3 on inconclusive outcomes");
  app.add_flag("--json", G.emit_json, "one JSON object per output record");
  app.add_option("--seed", G.seed, "seed for randomized schedules and suites");

  std::string model_path, expr, witness_path, env_text, target_text, strategy = "head";
  std::string suite_name, model_dir;
  size_t fuel = 10000, budget = 1000, cases = 0;
  int depth = 2;
  bool sp = false, trace = false, replay = false, cross = false;

  auto* c_model = app.add_subcommand("model", "validate a model file");
  c_model->add_option("path", model_path)->required();
  c_model->add_flag("--sp", sp, "search for a stratified-positivity witness");
  c_model->add_option("--witness", witness_path, "verify this witness file instead");

  auto* c_reduce = app.add_subcommand("reduce", "evaluate a term or test");
  c_reduce->add_option("expr", expr)->required();
  c_reduce->add_option("--model", model_path)->required();
  c_reduce->add_option("--strategy", strategy)->check(CLI::IsMember({"head", "full"}));
  c_reduce->add_option("--fuel", fuel);
  c_reduce->add_flag("--trace", trace, "print every step");
  c_reduce->add_flag("--replay", replay, "re-derive the recorded trace");

  auto* c_member = app.add_subcommand("member", "membership judgment");
  c_member->add_option("expr", expr)->required();
  c_member->add_option("--model", model_path)->required();
  c_member->add_option("--target", target_text)->required();
  c_member->add_option("--env", env_text, "comma-separated x:type bindings");
  c_member->add_option("--fuel", fuel);
  c_member->add_option("--depth", depth, "universe depth for derivation search");
  c_member->add_flag("--cross-check", cross, "also run the reduction oracle");

  auto* c_approx = app.add_subcommand("approx", "approximant chain of a pure term");
  c_approx->add_option("expr", expr)->required();
  c_approx->add_option("--model", model_path)->required();
  c_approx->add_option("--fuel", fuel);

  auto* c_am = app.add_subcommand("approx-member", "approximant-based membership");
  c_am->add_option("expr", expr)->required();
  c_am->add_option("--model", model_path)->required();
  c_am->add_option("--target", target_text)->required();
  c_am->add_option("--env", env_text);
  c_am->add_option("--fuel", fuel);
  c_am->add_option("--budget", budget, "approximants to try");
  c_am->add_option("--depth", depth);

  auto* c_suite = app.add_subcommand("suite", "curated verification suites");
  auto* c_list = c_suite->add_subcommand("list", "list suite names");
  auto* c_run = c_suite->add_subcommand("run", "run one suite (or `all`)");
  c_run->add_option("name", suite_name)->required();
  c_run->add_option("--fuel", fuel);
  c_run->add_option("--cases", cases, "override the suite's case count");
  c_run->add_option("--models", model_dir, "model directory override");
  c_suite->require_subcommand(1);

  // let trailing --strict/--json/--seed reach the root from any subcommand
  for (auto* sub : {c_model, c_reduce, c_member, c_approx, c_am, c_suite, c_list, c_run})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_model->parsed()) return cmd_model(model_path, sp, witness_path);
    if (c_reduce->parsed())
      return cmd_reduce(expr, model_path, strategy, fuel, trace, replay);
    if (c_member->parsed())
      return cmd_member(expr, model_path, env_text, target_text, fuel, depth, cross);
    if (c_approx->parsed()) return cmd_approx(expr, model_path, fuel);
    if (c_am->parsed())
      return cmd_approx_member(expr, model_path, target_text, env_text, fuel, budget, depth);
    if (c_list->parsed()) {
      for (const auto& n : suite_names()) record({{"suite", n}});
      return 0;
    }
    if (c_run->parsed()) return cmd_suite_run(suite_name, fuel, cases, model_dir);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return G.strict ? 3 : 1;
  }
  return 2;
}
