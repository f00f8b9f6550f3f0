// Continuation-passing weakest preconditions.
//
// The clauses follow the structural recursion: skip is the identity,
// assignment substitutes through the state update, sequence composes, and a
// test whose result set is {0,1} takes the binary supremum of both branches
// (the may reading). A while loop denotes the supremum of the Kleene chain
// bottom, H(bottom), H(H(bottom)), ... of its loop functional.
//
// Evaluation strategy for loops: per queried environment the engine first
// discovers the finite set of loop-head environments reachable through the
// guard (branching on {0,1} guards), and when that discovery completes it
// solves the fixpoint exactly by table iteration and reports stabilized(n).
// If the discovery or the iteration blows its budget, it falls back to
// max_iter unfoldings of the chain and reports budget_exhausted; chain
// values only ever grow, so a truncated answer is a sound lower bound.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wpwb/answer.hpp"
#include "wpwb/ast.hpp"
#include "wpwb/capacity.hpp"
#include "wpwb/continuation.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/eval.hpp"

namespace wpwb {

enum class FixKind { Stabilized, BudgetExhausted };

struct FixStatus {
  FixKind kind = FixKind::Stabilized;
  int iterations = 0;

  std::string to_string() const {
    if (kind == FixKind::Stabilized)
      return "stabilized(" + std::to_string(iterations) + ")";
    return "budget_exhausted";
  }
};

// Aggregates the statuses of every fixpoint evaluation performed under one
// configuration; safe to share across worker threads.
class FixTracker {
 public:
  void note(const FixStatus& s) {
    std::lock_guard<std::mutex> lock(mu_);
    last_ = s;
    any_ = true;
    if (s.kind == FixKind::BudgetExhausted) worst_.kind = FixKind::BudgetExhausted;
    if (s.iterations > worst_.iterations) worst_.iterations = s.iterations;
  }

  bool any() const {
    std::lock_guard<std::mutex> lock(mu_);
    return any_;
  }
  FixStatus worst() const {
    std::lock_guard<std::mutex> lock(mu_);
    return worst_;
  }
  FixStatus last() const {
    std::lock_guard<std::mutex> lock(mu_);
    return last_;
  }

 private:
  mutable std::mutex mu_;
  bool any_ = false;
  FixStatus worst_{};
  FixStatus last_{};
};

namespace detail {

// Loop-head discovery is independent of the continuation, so its result is
// shared across every continuation built from the same configuration.
struct LoopDiscovery {
  bool complete = false;
  std::map<Env, std::set<Env>> successors;
};

struct WpCaches {
  std::mutex mu;
  std::map<std::pair<const Instr*, Env>, std::shared_ptr<const LoopDiscovery>> discovery;
};

}  // namespace detail

struct WpConfig {
  Semantics sem = Semantics::real();
  int max_iter = 64;  // chain unfoldings when the exact solve is unavailable
  std::optional<std::vector<Env>> universe;
  std::shared_ptr<const InputModel> input;
  long discovery_env_limit = 512;
  std::shared_ptr<FixTracker> tracker;          // filled in by the entry points
  std::shared_ptr<detail::WpCaches> caches;     // likewise
};

namespace detail {

template <AnswerDomain D>
Continuation<D> wp_rec(const InstrPtr& instr, Continuation<D> kappa, const WpConfig& cfg);

template <AnswerDomain D>
Env assign_step(const Instr& instr, const Env& env, const Semantics& sem) {
  if (sem.mode == Mode::Real)
    return env.with_real(instr.var, eval_real(instr.expr, env));
  return env.with_float(instr.var, eval_float(instr.expr, sem.fmt, env));
}

// phi_n(kappa)(rho): the n-th Kleene iterate of the loop functional applied
// to kappa, evaluated by unfolding. phi_0 is constant bottom. Branching
// guards make the naive unfolding exponential, so values are memoized per
// (environment, depth) for the lifetime of one kappa.
template <AnswerDomain D>
using IterateMemo = std::map<std::pair<Env, int>, typename D::Value>;

template <AnswerDomain D>
typename D::Value loop_iterate_value(const InstrPtr& loop, const Continuation<D>& kappa,
                                     const Env& rho, int n, const WpConfig& cfg,
                                     const std::shared_ptr<IterateMemo<D>>& memo) {
  if (n <= 0) return D::bottom();
  const auto key = std::make_pair(rho, n);
  if (auto it = memo->find(key); it != memo->end()) return it->second;
  const TestResult t = eval_test(loop->test, rho, cfg.sem);
  auto body_value = [&]() {
    Continuation<D> next = Continuation<D>::of_fn(
        [loop, kappa, n, cfg, memo](const Env& r) {
          return loop_iterate_value<D>(loop, kappa, r, n - 1, cfg, memo);
        },
        "loop-iterate");
    return wp_rec<D>(loop->a, next, cfg)(rho);
  };
  typename D::Value out = D::bottom();
  if (t.is_singleton())
    out = t.contains(1) ? body_value() : kappa(rho);
  else
    out = D::join(body_value(), kappa(rho));
  memo->emplace(key, out);
  return out;
}

// The environments at which the body's weakest precondition queries its
// continuation from sigma; independent of the continuation's values.
template <AnswerDomain D>
std::set<Env> body_successors(const InstrPtr& loop, const Env& sigma, const WpConfig& cfg) {
  auto hits = std::make_shared<std::set<Env>>();
  Continuation<D> recorder = Continuation<D>::of_fn(
      [hits](const Env& e) {
        hits->insert(e);
        return D::bottom();
      },
      "recorder");
  wp_rec<D>(loop->a, recorder, cfg)(sigma);
  return *hits;
}

template <AnswerDomain D>
struct LoopSolveState {
  std::mutex mu;
  std::map<Env, std::pair<typename D::Value, FixStatus>> cache;
  std::shared_ptr<IterateMemo<D>> iterate_memo = std::make_shared<IterateMemo<D>>();
};

// Exact solve on a finite set of loop heads: Kleene iteration of the head
// table until two consecutive rounds agree.
//
// The environments at which the body's wp queries its continuation do not
// depend on the continuation's values (guards never look at answers), so
// each head's exit set is computed once with a recorder pass and every
// round is then a pure join over table entries. Reads that escape the head
// set fall back to an explicit unfolding of the current iterate, which
// keeps rounds exact even for universes that are not closed under the body
// step; such escapes forfeit the stabilization claim.
template <AnswerDomain D>
struct TableSolveResult {
  std::map<Env, typename D::Value> table;
  FixStatus status;
};

template <AnswerDomain D>
TableSolveResult<D> solve_table(const InstrPtr& loop, const Continuation<D>& kappa,
                                const std::map<Env, std::set<Env>>& successors,
                                const WpConfig& cfg, int round_limit,
                                const std::shared_ptr<IterateMemo<D>>& memo) {
  using Value = typename D::Value;
  std::map<Env, Value> table;
  std::map<Env, TestResult> guards;
  std::map<Env, Value> exit_values;
  for (const auto& [h, _] : successors) {
    table.emplace(h, D::bottom());
    const TestResult t = eval_test(loop->test, h, cfg.sem);
    guards.emplace(h, t);
    if (t.contains(0)) exit_values.emplace(h, kappa(h));
  }

  // Bodies that integrate an input capacity are not join-decomposable over
  // their exit environments, so they re-evaluate the body's wp each round.
  const bool join_step = !contains_input(loop->a);

  bool escaped = false;
  int rounds = 0;
  bool stable = false;
  auto shared_table = std::make_shared<std::map<Env, Value>>();
  while (rounds < round_limit) {
    ++rounds;
    const int depth = rounds - 1;
    std::map<Env, Value> next;
    if (join_step) {
      for (const auto& [sigma, succ] : successors) {
        const TestResult& t = guards.at(sigma);
        Value v = D::bottom();
        if (t.contains(1)) {
          for (const Env& e : succ) {
            auto it = table.find(e);
            if (it != table.end()) {
              v = D::join(v, it->second);
            } else {
              escaped = true;
              v = D::join(v, loop_iterate_value<D>(loop, kappa, e, depth, cfg, memo));
            }
          }
        }
        if (t.contains(0))
          v = t.contains(1) ? D::join(v, exit_values.at(sigma)) : exit_values.at(sigma);
        next.emplace(sigma, std::move(v));
      }
    } else {
      *shared_table = table;
      auto escape_flag = std::make_shared<bool>(false);
      Continuation<D> lookup = Continuation<D>::of_fn(
          [shared_table, escape_flag, loop, kappa, depth, cfg, memo](const Env& e) -> Value {
            auto it = shared_table->find(e);
            if (it != shared_table->end()) return it->second;
            *escape_flag = true;
            return loop_iterate_value<D>(loop, kappa, e, depth, cfg, memo);
          },
          "loop-table");
      for (const auto& [sigma, succ] : successors) {
        (void)succ;
        const TestResult& t = guards.at(sigma);
        Value v = D::bottom();
        if (t.contains(1)) v = wp_rec<D>(loop->a, lookup, cfg)(sigma);
        if (t.contains(0))
          v = t.contains(1) ? D::join(v, exit_values.at(sigma)) : exit_values.at(sigma);
        next.emplace(sigma, std::move(v));
      }
      escaped = escaped || *escape_flag;
    }
    bool same = true;
    for (const auto& [sigma, v] : next)
      if (!D::eq(v, table.at(sigma))) {
        same = false;
        break;
      }
    table = std::move(next);
    if (same) {
      stable = true;
      break;
    }
  }
  FixStatus status;
  status.iterations = rounds;
  status.kind = (stable && !escaped) ? FixKind::Stabilized : FixKind::BudgetExhausted;
  return TableSolveResult<D>{std::move(table), status};
}

// One recorder pass per head builds the successor map solve_table consumes.
template <AnswerDomain D>
std::map<Env, std::set<Env>> head_successors(const InstrPtr& loop,
                                             const std::set<Env>& heads,
                                             const WpConfig& cfg) {
  std::map<Env, std::set<Env>> out;
  for (const Env& h : heads) {
    std::set<Env> succ;
    if (eval_test(loop->test, h, cfg.sem).contains(1))
      succ = body_successors<D>(loop, h, cfg);
    out.emplace(h, std::move(succ));
  }
  return out;
}

// Lazy per-environment solve: discover the reachable loop heads, then solve
// the closed table exactly; budget fallback to plain unfolding.
template <AnswerDomain D>
std::pair<typename D::Value, FixStatus> solve_loop_at(const InstrPtr& loop,
                                                      const Continuation<D>& kappa,
                                                      const Env& rho, const WpConfig& cfg,
                                                      LoopSolveState<D>& state) {
  {
    std::lock_guard<std::mutex> lock(state.mu);
    auto it = state.cache.find(rho);
    if (it != state.cache.end()) return it->second;
  }

  // Discovery is continuation-independent; consult the shared cache first.
  std::shared_ptr<const LoopDiscovery> disc;
  if (cfg.caches) {
    std::lock_guard<std::mutex> lock(cfg.caches->mu);
    auto it = cfg.caches->discovery.find({loop.get(), rho});
    if (it != cfg.caches->discovery.end()) disc = it->second;
  }
  if (!disc) {
    auto fresh = std::make_shared<LoopDiscovery>();
    fresh->complete = true;
    std::vector<Env> frontier{rho};
    fresh->successors.emplace(rho, std::set<Env>{});
    while (!frontier.empty()) {
      const Env sigma = frontier.back();
      frontier.pop_back();
      if (!eval_test(loop->test, sigma, cfg.sem).contains(1)) continue;
      std::set<Env> succ = body_successors<D>(loop, sigma, cfg);
      for (const Env& next : succ) {
        if (fresh->successors.emplace(next, std::set<Env>{}).second)
          frontier.push_back(next);
      }
      fresh->successors[sigma] = std::move(succ);
      if (static_cast<long>(fresh->successors.size()) > cfg.discovery_env_limit) {
        fresh->complete = false;
        break;
      }
    }
    disc = fresh;
    if (cfg.caches) {
      std::lock_guard<std::mutex> lock(cfg.caches->mu);
      cfg.caches->discovery.emplace(std::make_pair(loop.get(), rho), disc);
      if (disc->complete)
        for (const auto& [sigma, _] : disc->successors)
          cfg.caches->discovery.emplace(std::make_pair(loop.get(), sigma), disc);
    }
  }

  std::pair<typename D::Value, FixStatus> out;
  if (!disc->complete) {
    out = {loop_iterate_value<D>(loop, kappa, rho, cfg.max_iter, cfg, state.iterate_memo),
           FixStatus{FixKind::BudgetExhausted, cfg.max_iter}};
  } else {
    const int round_limit = static_cast<int>(
        std::max<long>(cfg.max_iter, static_cast<long>(disc->successors.size()) + 2));
    auto solved =
        solve_table<D>(loop, kappa, disc->successors, cfg, round_limit, state.iterate_memo);
    std::lock_guard<std::mutex> lock(state.mu);
    for (const auto& [sigma, v] : solved.table)
      state.cache.emplace(sigma, std::make_pair(v, solved.status));
    return {solved.table.at(rho), solved.status};
  }
  std::lock_guard<std::mutex> lock(state.mu);
  state.cache.emplace(rho, out);
  return out;
}

template <AnswerDomain D>
Continuation<D> wp_while(const InstrPtr& instr, Continuation<D> kappa, const WpConfig& cfg,
                         const std::shared_ptr<FixTracker>& tracker) {
  const std::string d = "wp(while ^" + std::to_string(instr->label) + ", " + kappa.desc() + ")";

  // The env universe drives this loop's table; loops nested in the body
  // solve lazily against their own reachable heads, reporting into a
  // sub-tracker. Any budget exhaustion below makes this loop's own status
  // budget_exhausted too, but inner iteration counts stay out of it.
  WpConfig body_cfg = cfg;
  body_cfg.universe.reset();
  auto sub = std::make_shared<FixTracker>();
  body_cfg.tracker = sub;
  auto degrade = [sub](FixStatus s) {
    if (sub->any() && sub->worst().kind == FixKind::BudgetExhausted)
      s.kind = FixKind::BudgetExhausted;
    return s;
  };

  if (cfg.universe.has_value()) {
    // Eager exact table over the provided universe.
    std::set<Env> heads(cfg.universe->begin(), cfg.universe->end());
    const int round_limit =
        static_cast<int>(std::max<long>(cfg.max_iter, static_cast<long>(heads.size()) + 2));
    auto memo = std::make_shared<IterateMemo<D>>();
    auto successors = head_successors<D>(instr, heads, body_cfg);
    auto solved = solve_table<D>(instr, kappa, successors, body_cfg, round_limit, memo);
    const FixStatus status = degrade(solved.status);
    if (tracker) tracker->note(status);
    auto table = std::make_shared<const std::map<Env, typename D::Value>>(std::move(solved.table));
    return Continuation<D>::of_fn(
        [table, instr, kappa, body_cfg, tracker, status, memo, degrade](const Env& rho) {
          auto it = table->find(rho);
          if (it != table->end()) {
            if (tracker) tracker->note(degrade(status));
            return it->second;
          }
          if (tracker) tracker->note(FixStatus{FixKind::BudgetExhausted, body_cfg.max_iter});
          return loop_iterate_value<D>(instr, kappa, rho, body_cfg.max_iter, body_cfg, memo);
        },
        d);
  }
  auto state = std::make_shared<LoopSolveState<D>>();
  return Continuation<D>::of_fn(
      [instr, kappa, body_cfg, state, tracker, degrade](const Env& rho) {
        auto [value, status] = solve_loop_at<D>(instr, kappa, rho, body_cfg, *state);
        if (tracker) tracker->note(degrade(status));
        return value;
      },
      d);
}

template <AnswerDomain D>
Continuation<D> wp_rec(const InstrPtr& instr, Continuation<D> kappa, const WpConfig& cfg) {
  switch (instr->kind) {
    case Instr::Kind::Skip:
      return kappa;
    case Instr::Kind::Assign: {
      const Semantics sem = cfg.sem;
      const std::string d = "wp(" + instr->var + ":=..., " + kappa.desc() + ")";
      return Continuation<D>::of_fn(
          [instr, kappa, sem](const Env& rho) {
            return kappa(assign_step<D>(*instr, rho, sem));
          },
          d);
    }
    case Instr::Kind::Seq:
      return wp_rec<D>(instr->a, wp_rec<D>(instr->b, std::move(kappa), cfg), cfg);
    case Instr::Kind::If: {
      Continuation<D> then_wp = wp_rec<D>(instr->a, kappa, cfg);
      Continuation<D> else_wp = wp_rec<D>(instr->b, kappa, cfg);
      const Semantics sem = cfg.sem;
      const std::string d = "wp(if ^" + std::to_string(instr->label) + ", " + kappa.desc() + ")";
      return Continuation<D>::of_fn(
          [instr, then_wp, else_wp, sem](const Env& rho) {
            const TestResult t = eval_test(instr->test, rho, sem);
            if (t.is_singleton()) return t.contains(1) ? then_wp(rho) : else_wp(rho);
            return D::join(then_wp(rho), else_wp(rho));
          },
          d);
    }
    case Instr::Kind::While:
      return wp_while<D>(instr, std::move(kappa), cfg, cfg.tracker);
    case Instr::Kind::Input: {
      if constexpr (std::is_same_v<D, ExtNonNegDomain>) {
        if (!cfg.input)
          throw NoInputModel("instruction ^" + std::to_string(instr->label) +
                             " needs a capacity per site");
        auto model = cfg.input;
        const Semantics sem = cfg.sem;
        const std::string d = "wp(input ^" + std::to_string(instr->label) + ", " + kappa.desc() + ")";
        return Continuation<D>::of_fn(
            [instr, kappa, model, sem](const Env& rho) {
              return wp_input(kappa, *model, instr->label, instr->targets, rho, sem);
            },
            d);
      } else {
        throw DomainMismatch("input instructions integrate continuations and need extnn answers");
      }
    }
  }
  throw Error("wp: unreachable");
}

}  // namespace detail

// --- public surface ---------------------------------------------------------

template <AnswerDomain D>
Continuation<D> wp(const InstrPtr& instr, Continuation<D> kappa, const WpConfig& cfg) {
  if (cfg.max_iter < 1) throw Error("WpConfig: max_iter must be at least 1");
  WpConfig c = cfg;
  if (!c.tracker) c.tracker = std::make_shared<FixTracker>();
  if (!c.caches) c.caches = std::make_shared<detail::WpCaches>();
  return detail::wp_rec<D>(instr, std::move(kappa), c);
}

template <AnswerDomain D>
Continuation<D> wp(const Program& p, Continuation<D> kappa, const WpConfig& cfg) {
  return wp<D>(p.root, std::move(kappa), cfg);
}

template <AnswerDomain D>
struct FixpointResult {
  Continuation<D> cont;
  std::shared_ptr<FixTracker> tracker;
};

template <AnswerDomain D>
FixpointResult<D> wp_fixpoint(const InstrPtr& loop, Continuation<D> kappa, const WpConfig& cfg) {
  if (loop->kind != Instr::Kind::While) throw Error("wp_fixpoint: not a while loop");
  WpConfig c = cfg;
  if (!c.tracker) c.tracker = std::make_shared<FixTracker>();
  if (!c.caches) c.caches = std::make_shared<detail::WpCaches>();
  Continuation<D> cont = detail::wp_rec<D>(loop, std::move(kappa), c);
  return FixpointResult<D>{std::move(cont), c.tracker};
}

// H^n(bottom)(kappa) as a continuation; the ascending-chain tests sample it.
template <AnswerDomain D>
Continuation<D> loop_iterate(const InstrPtr& loop, int n, Continuation<D> kappa,
                             const WpConfig& cfg) {
  if (loop->kind != Instr::Kind::While) throw Error("loop_iterate: not a while loop");
  WpConfig c = cfg;
  if (!c.tracker) c.tracker = std::make_shared<FixTracker>();
  if (!c.caches) c.caches = std::make_shared<detail::WpCaches>();
  auto memo = std::make_shared<detail::IterateMemo<D>>();
  return Continuation<D>::of_fn(
      [loop, kappa, n, c, memo](const Env& rho) {
        return detail::loop_iterate_value<D>(loop, kappa, rho, n, c, memo);
      },
      "H^" + std::to_string(n) + "(bottom)(" + kappa.desc() + ")");
}

// The loop functional H_{t,P} acting on continuation transformers, stated
// literally; the engine's unfolding path is extensionally the same map and
// the tests compare the two.
template <AnswerDomain D>
class LoopFunctional {
 public:
  using Transformer = std::function<Continuation<D>(const Continuation<D>&)>;

  LoopFunctional(TestPtr guard, InstrPtr body, WpConfig cfg)
      : guard_(std::move(guard)), body_(std::move(body)), cfg_(std::move(cfg)) {
    if (!cfg_.tracker) cfg_.tracker = std::make_shared<FixTracker>();
    if (!cfg_.caches) cfg_.caches = std::make_shared<detail::WpCaches>();
  }

  static Transformer bottom() {
    return [](const Continuation<D>&) { return Continuation<D>(); };
  }

  Transformer apply(Transformer phi) const {
    const TestPtr guard = guard_;
    const InstrPtr body = body_;
    const WpConfig cfg = cfg_;
    return [guard, body, cfg, phi](const Continuation<D>& kappa) {
      Continuation<D> advanced = phi(kappa);
      Continuation<D> body_wp = detail::wp_rec<D>(body, advanced, cfg);
      const Semantics sem = cfg.sem;
      return Continuation<D>::of_fn(
          [guard, body_wp, kappa, sem](const Env& rho) {
            const TestResult t = eval_test(guard, rho, sem);
            if (t.is_singleton()) return t.contains(1) ? body_wp(rho) : kappa(rho);
            return D::join(body_wp(rho), kappa(rho));
          },
          "H(phi)(" + kappa.desc() + ")");
    };
  }

  Transformer iterate(int n) const {
    Transformer phi = bottom();
    for (int i = 0; i < n; ++i) phi = apply(phi);
    return phi;
  }

 private:
  TestPtr guard_;
  InstrPtr body_;
  WpConfig cfg_;
};

}  // namespace wpwb
