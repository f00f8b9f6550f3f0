// Shared test machinery: a program fuzzer whose loops are bounded by
// construction, brute-force oracles for rounding and Choquet integration,
// and helpers to collect loop-head universes.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wpwb/wpwb.hpp"

namespace wpwb::testing {

// --- rounding oracle --------------------------------------------------------

// Scan of the enumerated format: minimize |f - r|, break ties by the even
// ulp, and when both tied candidates are even (the zero gap) take the one
// nearer zero. This mirrors the documented behavior of proj without sharing any
// arithmetic with it.
inline FloatE proj_oracle(const FloatFormat& fmt, const std::vector<FloatE>& values,
                          const RealE& r) {
  if (r.is_err()) return FloatE::error();
  const Rat& q = r.rat();
  if (q < fmt.min_value() || q > fmt.max_value()) return FloatE::error();
  std::vector<FloatE> best;
  std::optional<Rat> best_dist;
  for (const FloatE& f : values) {
    const Rat d = (f.to_rat() - q).abs();
    if (!best_dist || d < *best_dist) {
      best_dist = d;
      best = {f};
    } else if (d == *best_dist) {
      best.push_back(f);
    }
  }
  if (best.size() == 1) return best[0];
  std::vector<FloatE> even;
  for (const FloatE& f : best)
    if (ulp_is_even(fmt, f)) even.push_back(f);
  if (even.size() == 1) return even[0];
  std::sort(even.begin(), even.end(), [](const FloatE& a, const FloatE& b) {
    return a.to_rat().abs() < b.to_rat().abs();
  });
  return even.front();
}

// --- Choquet oracle ----------------------------------------------------------

// Ascending-level summation; telescopes to the same integral through a
// different grouping of terms.
inline ExtRat choquet_oracle(const std::vector<ExtRat>& f, const Capacity& nu) {
  SubsetMask inf_mask = 0;
  std::vector<Rat> levels;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].is_infinite())
      inf_mask |= SubsetMask(1) << i;
    else
      levels.push_back(f[i].rat());
  }
  if (inf_mask != 0 && !nu.at(inf_mask).is_zero()) return ExtRat::infinity();
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Rat sum(0);
  Rat prev(0);
  for (const Rat& level : levels) {
    if (level.is_zero() || level == prev) continue;
    SubsetMask mask = inf_mask;
    for (std::size_t k = 0; k < f.size(); ++k)
      if (!f[k].is_infinite() && f[k].rat() >= level) mask |= SubsetMask(1) << k;
    sum += (level - prev) * nu.at(mask);
    prev = level;
  }
  return ExtRat(sum);
}

// --- program fuzzer -----------------------------------------------------------

struct FuzzOptions {
  int stmt_depth = 3;
  int expr_depth = 2;
  bool allow_div = true;
  bool allow_loops = true;
  int max_loop_bound = 3;
  std::vector<std::string> data_vars = {"x", "y", "z", "w"};
};

struct FuzzProgram {
  InstrPtr root;
  std::vector<std::string> data_vars;
  std::vector<std::string> counters;

  std::vector<std::string> all_vars() const {
    std::vector<std::string> out = data_vars;
    out.insert(out.end(), counters.begin(), counters.end());
    return out;
  }
};

namespace detail {

struct FuzzState {
  FuzzOptions opt;
  int next_label = 1;
  int next_counter = 0;
  std::vector<std::string> counters;
};

inline InstrPtr fuzz_instr(Rng& rng, FuzzState& st, int depth) {
  // Loops read data vars and their own counter; everything may read
  // counters, but only data vars are written outside the increment, which
  // is what keeps every generated loop bounded.
  std::vector<std::string> readable = st.opt.data_vars;
  readable.insert(readable.end(), st.counters.begin(), st.counters.end());
  const int kind = static_cast<int>(rng.below(10));
  if (depth <= 0 || kind == 0) {
    if (kind == 0 && rng.chance(1, 3)) return instr_skip(st.next_label++);
    return instr_assign(st.next_label++, rng.pick(st.opt.data_vars),
                        sample_expr(rng, readable, st.opt.expr_depth, st.opt.allow_div));
  }
  if (kind <= 4) {  // assign
    return instr_assign(st.next_label++, rng.pick(st.opt.data_vars),
                        sample_expr(rng, readable, st.opt.expr_depth, st.opt.allow_div));
  }
  if (kind <= 6) {  // seq
    InstrPtr a = fuzz_instr(rng, st, depth - 1);
    InstrPtr b = fuzz_instr(rng, st, depth - 1);
    return instr_seq(a, b);
  }
  if (kind <= 8) {  // if
    TestPtr t = sample_test(rng, readable, st.opt.expr_depth, st.opt.allow_div);
    const int label = st.next_label++;
    InstrPtr a = fuzz_instr(rng, st, depth - 1);
    InstrPtr b = fuzz_instr(rng, st, depth - 1);
    return instr_if(label, t, a, b);
  }
  if (st.opt.allow_loops) {  // while, bounded by construction
    const std::string counter = "c" + std::to_string(st.next_counter++);
    st.counters.push_back(counter);
    const int bound = 1 + static_cast<int>(rng.below(st.opt.max_loop_bound));
    const int label = st.next_label++;
    const int inc_label = st.next_label++;
    InstrPtr inc = instr_assign(inc_label, counter,
                                expr_bin(Expr::Kind::Add, expr_var(counter), expr_lit(Rat(1))));
    InstrPtr rest = fuzz_instr(rng, st, depth - 1);
    return instr_while(label, test_cmp(Test::Kind::Lt, expr_var(counter), expr_lit(Rat(bound))),
                       instr_seq(inc, rest));
  }
  return instr_assign(st.next_label++, rng.pick(st.opt.data_vars),
                      sample_expr(rng, readable, st.opt.expr_depth, st.opt.allow_div));
}

}  // namespace detail

inline FuzzProgram fuzz_program(Rng& rng, const FuzzOptions& opt) {
  detail::FuzzState st;
  st.opt = opt;
  FuzzProgram out;
  out.root = detail::fuzz_instr(rng, st, opt.stmt_depth);
  out.data_vars = opt.data_vars;
  out.counters = st.counters;
  return out;
}

// Environment covering the fuzz program's variables: data vars from the
// grid, counters from {0, 1} so loops start near their bounds.
inline Env fuzz_env(Rng& rng, const FuzzProgram& p, const Semantics& sem) {
  std::map<std::string, RealE> bindings;
  for (const auto& v : p.data_vars) bindings[v] = RealE(rng.pick(value_grid()));
  for (const auto& c : p.counters) bindings[c] = RealE(Rat(static_cast<int>(rng.below(2))));
  if (sem.mode == Mode::Real) return Env::real(std::move(bindings));
  std::map<std::string, FloatE> fb;
  for (const auto& [k, v] : bindings) fb[k] = FloatE::from_rat(v.rat());
  return Env::floating(std::move(fb));
}

// May-reachability through the oracle: does some terminating run end in an
// environment where the test may pass?
inline bool oracle_reaches(const InstrPtr& prog, const Env& rho, const TestPtr& goal,
                           const Semantics& sem, long fuel = 200000) {
  const ExecResult res = enumerate_exec(prog, rho, sem, fuel);
  if (res.exhausted) throw Error("oracle_reaches: fuel exhausted on a bounded program");
  for (const Env& f : res.finals)
    if (eval_test(goal, f, sem).contains(1)) return true;
  return false;
}

// The loop-head environments reachable from rho0: rho0 itself plus every
// environment the body's may-execution can hand back to the loop head.
inline std::vector<Env> loop_head_universe(const InstrPtr& loop, const Env& rho0,
                                           const Semantics& sem, long fuel = 200000) {
  std::set<Env> heads{rho0};
  std::vector<Env> frontier{rho0};
  while (!frontier.empty()) {
    const Env sigma = frontier.back();
    frontier.pop_back();
    if (!eval_test(loop->test, sigma, sem).contains(1)) continue;
    const ExecResult step = enumerate_exec(loop->a, sigma, sem, fuel);
    if (step.exhausted) throw Error("loop_head_universe: fuel exhausted");
    for (const Env& next : step.finals)
      if (heads.insert(next).second) frontier.push_back(next);
  }
  return std::vector<Env>(heads.begin(), heads.end());
}

}  // namespace wpwb::testing
