// Concrete semantics of expressions and tests.
//
// The real semantics computes exactly; the float semantics rounds at the
// evaluation of every subexpression (literals included). Tests yield a
// non-empty subset of {0,1}: a singleton from the usual order on non-err
// operands, and {0,1} whenever either side evaluates to err, because err
// stands for any of +inf, -inf, NaN whose comparisons disagree.
#pragma once

#include <string>

#include "wpwb/ast.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/float_value.hpp"
#include "wpwb/real_value.hpp"

namespace wpwb {

inline RealE eval_real(const ExprPtr& e, const Env& env) {
  switch (e->kind) {
    case Expr::Kind::Literal: return RealE(e->value);
    case Expr::Kind::Var: return env.real_at(e->name);
    case Expr::Kind::Neg: return real_arith(ArithOp::Neg, eval_real(e->lhs, env));
    case Expr::Kind::Add:
      return real_arith(ArithOp::Add, eval_real(e->lhs, env), eval_real(e->rhs, env));
    case Expr::Kind::Sub:
      return real_arith(ArithOp::Sub, eval_real(e->lhs, env), eval_real(e->rhs, env));
    case Expr::Kind::Mul:
      return real_arith(ArithOp::Mul, eval_real(e->lhs, env), eval_real(e->rhs, env));
    case Expr::Kind::Div:
      return real_arith(ArithOp::Div, eval_real(e->lhs, env), eval_real(e->rhs, env));
  }
  throw Error("eval_real: unreachable");
}

inline FloatE eval_float(const ExprPtr& e, const FloatFormat& fmt, const Env& env) {
  switch (e->kind) {
    case Expr::Kind::Literal: return proj(fmt, RealE(e->value));
    case Expr::Kind::Var: return env.float_at(e->name);
    case Expr::Kind::Neg:
      return float_arith(ArithOp::Neg, fmt, eval_float(e->lhs, fmt, env));
    case Expr::Kind::Add:
      return float_arith(ArithOp::Add, fmt, eval_float(e->lhs, fmt, env),
                         eval_float(e->rhs, fmt, env));
    case Expr::Kind::Sub:
      return float_arith(ArithOp::Sub, fmt, eval_float(e->lhs, fmt, env),
                         eval_float(e->rhs, fmt, env));
    case Expr::Kind::Mul:
      return float_arith(ArithOp::Mul, fmt, eval_float(e->lhs, fmt, env),
                         eval_float(e->rhs, fmt, env));
    case Expr::Kind::Div:
      return float_arith(ArithOp::Div, fmt, eval_float(e->lhs, fmt, env),
                         eval_float(e->rhs, fmt, env));
  }
  throw Error("eval_float: unreachable");
}

// Mode dispatch with the result injected into the err-extended reals.
inline RealE eval_value(const ExprPtr& e, const Env& env, const Semantics& sem) {
  if (sem.mode == Mode::Real) return eval_real(e, env);
  return inj(eval_float(e, sem.fmt, env));
}

struct TestResult {
  bool has0 = false;
  bool has1 = false;

  static TestResult of(bool truth) { return TestResult{!truth, truth}; }
  static TestResult both() { return TestResult{true, true}; }

  bool contains(int v) const { return v == 0 ? has0 : has1; }
  bool is_singleton() const { return has0 != has1; }
  // {1-v | v in this}
  TestResult complement() const { return TestResult{has1, has0}; }

  friend bool operator==(const TestResult& a, const TestResult& b) {
    return a.has0 == b.has0 && a.has1 == b.has1;
  }

  std::string to_string() const {
    if (has0 && has1) return "{0,1}";
    return has0 ? "{0}" : "{1}";
  }
};

inline TestResult eval_test(const TestPtr& t, const Env& env, const Semantics& sem) {
  if (t->kind == Test::Kind::Not) return eval_test(t->inner, env, sem).complement();
  const RealE l = eval_value(t->lhs, env, sem);
  const RealE r = eval_value(t->rhs, env, sem);
  if (l.is_err() || r.is_err()) return TestResult::both();
  switch (t->kind) {
    case Test::Kind::Le: return TestResult::of(l.rat() <= r.rat());
    case Test::Kind::Lt: return TestResult::of(l.rat() < r.rat());
    case Test::Kind::Eq: return TestResult::of(l.rat() == r.rat());
    case Test::Kind::Ne: return TestResult::of(l.rat() != r.rat());
    case Test::Kind::Not: break;
  }
  throw Error("eval_test: unreachable");
}

}  // namespace wpwb
