// Command-line front end: parse, eval, wp, check-prevision, choquet, oracle.
//
// Exit codes: 0 success, 1 analysis finding (falsified law, failed --expect),
// 2 usage or input errors. With --format kv the output is one `key = value`
// per line and is byte-stable for a fixed seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpwb/wpwb.hpp"

namespace {

using namespace wpwb;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Human-facing rationals: decimal when it terminates, fraction otherwise.
std::string display_rat(const Rat& q) {
  return q.has_finite_decimal() ? q.to_decimal_string() : q.to_string();
}

std::string display_ext(const ExtRat& v) {
  return v.is_infinite() ? "inf" : display_rat(v.rat());
}

struct Output {
  bool kv = false;
  void line(const std::string& key, const std::string& value) {
    if (kv)
      std::cout << key << " = " << value << "\n";
    else
      std::cout << value << "\n";
  }
  void pair(const std::string& key, const std::string& human) {
    if (kv)
      std::cout << key << "\n";
    else
      std::cout << human << "\n";
  }
};

// The semantics may come from the --mode flag or from a "mode:" header in
// the referenced env/universe files; when both are present they must agree.
Semantics resolve_mode(const std::string& flag_mode, bool flag_given,
                       const std::vector<std::string>& file_texts) {
  std::optional<Semantics> declared;
  for (const auto& text : file_texts) {
    const auto m = declared_mode(text);
    if (!m) continue;
    if (declared && !(*declared == *m))
      throw FileFormatError("input files declare conflicting modes");
    declared = m;
  }
  const Semantics from_flag = Semantics::parse(flag_mode);
  if (flag_given && declared && !(from_flag == *declared))
    throw FileFormatError("--mode disagrees with the file's mode: header");
  return flag_given ? from_flag : declared.value_or(from_flag);
}

std::uint64_t pick_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("WPWB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw FileFormatError("WPWB_SEED is not a number");
    }
  }
  return 1;
}

int cmd_parse(const std::string& program_path, const std::string& declare,
              bool kv) {
  const std::string text = read_file(program_path);
  Program p;
  if (declare.empty()) {
    p = parse_program(text);
  } else {
    std::vector<std::string> names;
    std::istringstream in(declare);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) names.push_back(item.substr(b, e - b + 1));
    }
    p = parse_program(text, names);
  }
  if (kv) {
    std::cout << "ok = true\n";
    std::string vars;
    for (const auto& v : p.declared_vars) vars += (vars.empty() ? "" : ",") + v;
    std::cout << "vars = " << vars << "\n";
    std::cout << "exit_label = " << p.exit_label << "\n";
    std::istringstream lines(pretty_print(p));
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) std::cout << "pretty." << ++n << " = " << line << "\n";
  } else {
    std::cout << pretty_print(p) << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& expr_text, const std::string& test_text,
             const std::string& mode, bool mode_given, const std::string& env_path,
             bool kv) {
  std::vector<std::string> texts;
  if (!env_path.empty()) texts.push_back(read_file(env_path));
  const Semantics sem = resolve_mode(mode, mode_given, texts);
  Env env = Env::empty(sem.mode == Mode::Real ? Mode::Real : Mode::Floating);
  if (!env_path.empty()) env = parse_env_text(texts.front(), sem);
  Output out{kv};
  if (!expr_text.empty()) {
    ExprPtr e = parse_expr(expr_text);
    if (sem.mode == Mode::Real) {
      const RealE v = eval_real(e, env);
      out.line("real", v.to_string());
    } else {
      // Float evaluation needs float bindings; the same file is reread in
      // real mode for the side-by-side exact answer.
      Env renv = Env::empty(Mode::Real);
      if (!env_path.empty()) renv = parse_env_text(texts.front(), Semantics::real());
      const FloatE f = eval_float(e, sem.fmt, env);
      const RealE r = eval_real(e, renv);
      if (kv) {
        std::cout << "float = " << f.to_string() << "\n";
        std::cout << "real = " << r.to_string() << "\n";
      } else {
        std::cout << "float: " << f.to_string() << " | real: " << r.to_string() << "\n";
      }
    }
    return 0;
  }
  if (!test_text.empty()) {
    TestPtr t = parse_test(test_text);
    out.line("result", eval_test(t, env, sem).to_string());
    return 0;
  }
  throw FileFormatError("eval: pass --expr or --test");
}

struct WpArgs {
  std::string program_path, cont_spec, table_path, ans, mode, env_path, universe_path;
  std::vector<std::string> capacities;
  int max_iter = 64;
  bool mode_given = false;
};

template <AnswerDomain D>
int run_wp(const WpArgs& a, bool kv) {
  std::vector<std::string> texts;
  if (!a.env_path.empty()) texts.push_back(read_file(a.env_path));
  if (!a.universe_path.empty()) texts.push_back(read_file(a.universe_path));
  const Semantics sem = resolve_mode(a.mode, a.mode_given, texts);
  const Program p = parse_program(read_file(a.program_path));

  WpConfig cfg;
  cfg.sem = sem;
  cfg.max_iter = a.max_iter;
  cfg.tracker = std::make_shared<FixTracker>();
  if (!a.universe_path.empty())
    cfg.universe = parse_universe_text(read_file(a.universe_path), sem);
  if (!a.capacities.empty()) {
    auto model = std::make_shared<InputModel>();
    for (const auto& spec : a.capacities) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos)
        throw FileFormatError("--capacity expects LABEL=FILE, got '" + spec + "'");
      model->set_site(std::stoi(spec.substr(0, eq)),
                      parse_capacity_text(read_file(spec.substr(eq + 1))));
    }
    cfg.input = model;
  }

  Continuation<D> kappa = a.table_path.empty()
                              ? parse_continuation_spec<D>(a.cont_spec, sem)
                              : parse_table_continuation<D>(read_file(a.table_path), sem);
  Continuation<D> result = wp<D>(p, kappa, cfg);

  std::vector<Env> points;
  if (!a.env_path.empty()) points.push_back(parse_env_text(read_file(a.env_path), sem));
  if (cfg.universe) points.insert(points.end(), cfg.universe->begin(), cfg.universe->end());
  if (points.empty())
    throw FileFormatError("wp: pass --env and/or --universe to pick evaluation states");

  int n = 0;
  for (const Env& rho : points) {
    const auto v = result(rho);
    const std::string status =
        cfg.tracker->any() ? cfg.tracker->last().to_string() : "no-loop";
    ++n;
    if (kv) {
      std::cout << "rho." << n << " = " << rho.to_string() << "\n";
      std::cout << "ans." << n << " = " << D::to_string(v) << "\n";
      std::cout << "status." << n << " = " << status << "\n";
    } else {
      std::cout << "[" << rho.to_string() << "]  ->  " << D::to_string(v) << "   (" << status
                << ")\n";
    }
  }
  return 0;
}

int cmd_check_prevision(const std::string& program_path, const std::string& mode,
                        int samples, std::uint64_t seed, bool kv) {
  const Semantics sem = Semantics::parse(mode);
  const Program p = parse_program(read_file(program_path));
  WpConfig cfg;
  cfg.sem = sem;
  const ParametricPrevision F = ParametricPrevision::of_wp(p, cfg);
  SamplePlan plan;
  plan.seed = seed;
  plan.samples_per_law = samples;
  plan.vars = p.declared_vars;
  plan.sem = sem;
  const LawReport report = check_laws(F, plan);
  if (kv) {
    for (const auto& v : report.verdicts) {
      std::cout << "law." << v.law << " = " << (v.holds() ? "holds" : "falsified") << "\n";
      std::cout << "law." << v.law << ".samples = " << v.checked << "\n";
    }
    std::cout << "theorem = " << (report.theorem_holds() ? "holds" : "falsified") << "\n";
  } else {
    std::cout << report.summary();
    std::cout << "(sampling-based with exact arithmetic: violations are genuine "
                 "counterexamples, passes are evidence)\n";
  }
  return report.theorem_holds() ? 0 : 1;
}

int cmd_choquet(const std::string& capacity_path, const std::string& f_spec, bool use_dual,
                const std::string& expect, bool kv) {
  Capacity nu = parse_capacity_text(read_file(capacity_path));
  if (use_dual) nu = Capacity::dual(nu);
  // --f "o1:2 o2:1": values by 1-based outcome position, 0 when omitted.
  std::vector<Rat> f(nu.n(), Rat(0));
  std::istringstream in(f_spec);
  std::string item;
  while (in >> item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || item[0] != 'o')
      throw FileFormatError("--f expects entries like o1:2, got '" + item + "'");
    const int idx = std::stoi(item.substr(1, colon - 1));
    if (idx < 1 || static_cast<std::size_t>(idx) > nu.n())
      throw FileFormatError("outcome o" + std::to_string(idx) + " out of range");
    f[idx - 1] = Rat::parse(item.substr(colon + 1));
  }
  const Rat value = choquet(f, nu);
  const CapacityFlags flags = nu.classify();
  bool expect_ok = true;
  if (!expect.empty()) {
    std::istringstream ex(expect);
    std::string flag;
    while (std::getline(ex, flag, ',')) {
      if (flag == "monotone") expect_ok &= flags.monotone;
      else if (flag == "convex") expect_ok &= flags.convex;
      else if (flag == "concave") expect_ok &= flags.concave;
      else if (flag == "normalized") expect_ok &= flags.normalized;
      else throw FileFormatError("unknown --expect flag '" + flag + "'");
    }
  }
  if (kv) {
    std::cout << "integral = " << value.to_string() << "\n";
    std::cout << "monotone = " << (flags.monotone ? "yes" : "no") << "\n";
    std::cout << "convex = " << (flags.convex ? "yes" : "no") << "\n";
    std::cout << "concave = " << (flags.concave ? "yes" : "no") << "\n";
    std::cout << "normalized = " << (flags.normalized ? "yes" : "no") << "\n";
    if (!expect.empty()) std::cout << "expect = " << (expect_ok ? "ok" : "failed") << "\n";
  } else {
    std::cout << display_rat(value) << "\n";
    std::cout << "flags: " << flags.to_string() << "\n";
    if (!expect.empty() && !expect_ok) std::cout << "expected flags FAILED\n";
  }
  return expect_ok ? 0 : 1;
}

int cmd_oracle(const std::string& program_path, const std::string& env_path,
               const std::string& mode, bool mode_given, long fuel, bool kv) {
  const std::string env_text = read_file(env_path);
  const Semantics sem = resolve_mode(mode, mode_given, {env_text});
  const Program p = parse_program(read_file(program_path));
  const Env env = parse_env_text(env_text, sem);
  const ExecResult res = enumerate_exec(p, env, sem, fuel);
  int n = 0;
  for (const Env& f : res.finals) {
    ++n;
    if (kv)
      std::cout << "final." << n << " = " << f.to_string() << "\n";
    else
      std::cout << "[" << f.to_string() << "]\n";
  }
  if (kv)
    std::cout << "exhausted = " << (res.exhausted ? "true" : "false") << "\n";
  else if (res.exhausted)
    std::cout << "(fuel exhausted: the set may be incomplete)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wpwb: a workbench for exact/rounded semantics, weakest "
               "preconditions, previsions and Choquet capacities"};
  app.require_subcommand(1);
  bool kv = false;
  app.add_flag("--format-kv,--kv", kv, "machine-readable key = value output");

  auto* parse_cmd = app.add_subcommand("parse", "parse a program and print it back");
  std::string parse_program_path, parse_declare;
  parse_cmd->add_option("--program", parse_program_path, "program file")->required();
  parse_cmd->add_option("--declare", parse_declare, "comma list of allowed variables");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression or test");
  std::string eval_expr, eval_test_s, eval_mode = "real", eval_env;
  eval_cmd->add_option("--expr", eval_expr, "expression text");
  eval_cmd->add_option("--test", eval_test_s, "test text");
  auto* eval_mode_opt =
      eval_cmd->add_option("--mode", eval_mode, "real | binary64 | tiny:p=..,emin=..,emax=..");
  eval_cmd->add_option("--env", eval_env, "environment file");

  auto* wp_cmd = app.add_subcommand("wp", "weakest precondition of a program");
  WpArgs wa;
  wp_cmd->add_option("--program", wa.program_path, "program file")->required();
  wp_cmd->add_option("--cont", wa.cont_spec, "continuation: 'indicator: t' or 'expr: e'");
  wp_cmd->add_option("--cont-table", wa.table_path, "table continuation file");
  wp_cmd->add_option("--ans", wa.ans, "answer domain: bool | extnn")->required();
  auto* wp_mode_opt = wp_cmd->add_option("--mode", wa.mode, "semantics mode")->default_val("real");
  wp_cmd->add_option("--env", wa.env_path, "environment file to evaluate at");
  wp_cmd->add_option("--universe", wa.universe_path, "finite env universe file");
  wp_cmd->add_option("--max-iter", wa.max_iter, "loop unfolding budget")->default_val(64);
  wp_cmd->add_option("--capacity", wa.capacities, "LABEL=FILE input model per site");

  auto* prev_cmd = app.add_subcommand("check-prevision", "law-check the wp transformer");
  std::string prev_program, prev_mode = "real";
  int prev_samples = 200;
  std::optional<std::uint64_t> prev_seed;
  prev_cmd->add_option("--program", prev_program, "program file")->required();
  prev_cmd->add_option("--mode", prev_mode, "semantics mode");
  prev_cmd->add_option("--samples", prev_samples, "samples per law");
  prev_cmd->add_option("--seed", prev_seed, "rng seed (default: WPWB_SEED or 1)");

  auto* cho_cmd = app.add_subcommand("choquet", "integrate a function against a capacity");
  std::string cho_capacity, cho_f, cho_expect;
  bool cho_dual = false;
  cho_cmd->add_option("--capacity", cho_capacity, "capacity file")->required();
  cho_cmd->add_option("--f", cho_f, "function over outcomes, e.g. 'o1:2 o2:1'")->required();
  cho_cmd->add_flag("--dual", cho_dual, "integrate against the dual capacity");
  cho_cmd->add_option("--expect", cho_expect, "comma list of flags that must hold");

  auto* ora_cmd = app.add_subcommand("oracle", "operational may-execution");
  std::string ora_program, ora_env, ora_mode = "real";
  long ora_fuel = 10000;
  ora_cmd->add_option("--program", ora_program, "program file")->required();
  ora_cmd->add_option("--env", ora_env, "initial environment file")->required();
  auto* ora_mode_opt = ora_cmd->add_option("--mode", ora_mode, "semantics mode");
  ora_cmd->add_option("--fuel", ora_fuel, "step budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return cmd_parse(parse_program_path, parse_declare, kv);
    if (eval_cmd->parsed())
      return cmd_eval(eval_expr, eval_test_s, eval_mode, eval_mode_opt->count() > 0, eval_env, kv);
    if (wp_cmd->parsed()) {
      if (wa.cont_spec.empty() && wa.table_path.empty())
        throw FileFormatError("wp: pass --cont or --cont-table");
      wa.mode_given = wp_mode_opt->count() > 0;
      if (wa.ans == "bool") return run_wp<BoolDomain>(wa, kv);
      if (wa.ans == "extnn") return run_wp<ExtNonNegDomain>(wa, kv);
      throw DomainMismatch("unknown answer domain '" + wa.ans + "'");
    }
    if (prev_cmd->parsed())
      return cmd_check_prevision(prev_program, prev_mode, prev_samples, pick_seed(prev_seed), kv);
    if (cho_cmd->parsed()) return cmd_choquet(cho_capacity, cho_f, cho_dual, cho_expect, kv);
    if (ora_cmd->parsed())
      return cmd_oracle(ora_program, ora_env, ora_mode, ora_mode_opt->count() > 0, ora_fuel, kv);
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
