// Operational may-execution: runs a program concretely, branching on BOTH
// outcomes whenever a test yields {0,1}, and collects the final environments
// of runs that terminate within the fuel bound. This is the independent
// oracle the weakest-precondition engine is checked against.
#pragma once

#include <set>
#include <vector>

#include "wpwb/ast.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/eval.hpp"

namespace wpwb {

struct ExecResult {
  std::set<Env> finals;
  bool exhausted = false;
};

namespace detail {

struct ExecState {
  Semantics sem;
  long fuel;
  bool exhausted = false;
};

inline void exec_run(const InstrPtr& instr, const Env& env, ExecState& st,
                     std::set<Env>& out) {
  if (st.fuel <= 0) {
    st.exhausted = true;
    return;
  }
  --st.fuel;  // one step per executed instruction node
  switch (instr->kind) {
    case Instr::Kind::Skip:
      out.insert(env);
      return;
    case Instr::Kind::Assign: {
      if (st.sem.mode == Mode::Real)
        out.insert(env.with_real(instr->var, eval_real(instr->expr, env)));
      else
        out.insert(env.with_float(instr->var, eval_float(instr->expr, st.sem.fmt, env)));
      return;
    }
    case Instr::Kind::If: {
      const TestResult t = eval_test(instr->test, env, st.sem);
      if (t.contains(1)) exec_run(instr->a, env, st, out);
      if (t.contains(0)) exec_run(instr->b, env, st, out);
      return;
    }
    case Instr::Kind::While: {
      const TestResult t = eval_test(instr->test, env, st.sem);
      if (t.contains(0)) out.insert(env);
      if (t.contains(1)) {
        std::set<Env> after_body;
        exec_run(instr->a, env, st, after_body);
        for (const Env& next : after_body) exec_run(instr, next, st, out);
      }
      return;
    }
    case Instr::Kind::Seq: {
      std::set<Env> mids;
      exec_run(instr->a, env, st, mids);
      for (const Env& mid : mids) exec_run(instr->b, mid, st, out);
      return;
    }
    case Instr::Kind::Input:
      throw Error("enumerate_exec: programs with input are not executable");
  }
}

}  // namespace detail

inline ExecResult enumerate_exec(const InstrPtr& instr, const Env& env,
                                 const Semantics& sem, long fuel = 10000) {
  detail::ExecState st{sem, fuel};
  ExecResult res;
  detail::exec_run(instr, env, st, res.finals);
  res.exhausted = st.exhausted;
  return res;
}

inline ExecResult enumerate_exec(const Program& p, const Env& env,
                                 const Semantics& sem, long fuel = 10000) {
  return enumerate_exec(p.root, env, sem, fuel);
}

}  // namespace wpwb
