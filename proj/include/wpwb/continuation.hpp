// Continuations: total maps from environments to answers, carried by the
// weakest-precondition engine. Beyond opaque closures there are named
// constructors for the shapes users write down: indicators of tests (may
// reading), non-negative expression values, and finite tables.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "wpwb/answer.hpp"
#include "wpwb/ast.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/eval.hpp"
#include "wpwb/parse.hpp"
#include "wpwb/print.hpp"

namespace wpwb {

template <AnswerDomain D>
class Continuation {
 public:
  using Value = typename D::Value;
  using Fn = std::function<Value(const Env&)>;

  Continuation() : fn_([](const Env&) { return D::bottom(); }), desc_("bottom") {}

  static Continuation of_fn(Fn fn, std::string desc = "<fn>") {
    Continuation k;
    k.fn_ = std::move(fn);
    k.desc_ = std::move(desc);
    return k;
  }

  static Continuation constant(Value v) {
    const std::string d = "const " + D::to_string(v);
    return of_fn([v](const Env&) { return v; }, d);
  }

  // 1 if the test may pass (1 is a member of the result set), else 0.
  static Continuation indicator(TestPtr t, Semantics sem) {
    const std::string d = "indicator: " + pretty_print(t);
    return of_fn(
        [t = std::move(t), sem](const Env& env) -> Value {
          return eval_test(t, env, sem).contains(1) ? one() : D::bottom();
        },
        d);
  }

  // Finite table with a default answer for environments it does not list.
  static Continuation table(std::map<Env, Value> entries, Value fallback) {
    auto shared = std::make_shared<const std::map<Env, Value>>(std::move(entries));
    const std::string d = "table[" + std::to_string(shared->size()) + "]";
    return of_fn(
        [shared, fallback](const Env& env) -> Value {
          auto it = shared->find(env);
          return it == shared->end() ? fallback : it->second;
        },
        d);
  }

  Value operator()(const Env& env) const { return fn_(env); }

  const std::string& desc() const { return desc_; }
  Continuation renamed(std::string d) const {
    Continuation k = *this;
    k.desc_ = std::move(d);
    return k;
  }

 private:
  static Value one() {
    if constexpr (std::is_same_v<D, BoolDomain>) return true;
    else return ExtRat(Rat(1));
  }

  Fn fn_;
  std::string desc_;
};

using BoolCont = Continuation<BoolDomain>;
using ExtCont = Continuation<ExtNonNegDomain>;

// The value of an expression read as a non-negative answer; err or negative
// results fall back to a configured default.
inline ExtCont expr_continuation(ExprPtr e, Semantics sem, ExtRat fallback = ExtRat(0)) {
  const std::string d = "expr: " + pretty_print(e);
  return ExtCont::of_fn(
      [e = std::move(e), sem, fallback](const Env& env) -> ExtRat {
        const RealE v = eval_value(e, env, sem);
        if (v.is_err() || v.rat().is_negative()) return fallback;
        return ExtRat(v.rat());
      },
      d);
}

// --- pointwise algebra ----------------------------------------------------

template <AnswerDomain D>
Continuation<D> kappa_join(const Continuation<D>& a, const Continuation<D>& b) {
  const std::string d = "join(" + a.desc() + ", " + b.desc() + ")";
  return Continuation<D>::of_fn(
      [a, b](const Env& env) { return D::join(a(env), b(env)); }, d);
}

inline ExtCont kappa_add(const ExtCont& a, const ExtCont& b) {
  const std::string d = "(" + a.desc() + " + " + b.desc() + ")";
  return ExtCont::of_fn([a, b](const Env& env) { return a(env) + b(env); }, d);
}

inline ExtCont kappa_scale(const Rat& alpha, const ExtCont& k) {
  if (alpha.is_negative()) throw Error("kappa_scale: negative scalar");
  const std::string d = alpha.to_string() + "*" + k.desc();
  return ExtCont::of_fn([alpha, k](const Env& env) { return scale(alpha, k(env)); }, d);
}

// Pointwise minimum with a constant cap; used to build ascending chains.
inline ExtCont kappa_truncate(const ExtCont& k, const ExtRat& cap) {
  const std::string d = "min(" + k.desc() + ", " + cap.to_string() + ")";
  return ExtCont::of_fn(
      [k, cap](const Env& env) {
        ExtRat v = k(env);
        return v <= cap ? v : cap;
      },
      d);
}

// --- CLI / file spec strings ----------------------------------------------

// "indicator: <test>" works in any domain; "expr: <expr>" and scaled sums
// need arithmetic and are ExtNonNeg-only; "table: <file text>" is parsed by
// the caller which owns file access.
template <AnswerDomain D>
Continuation<D> parse_continuation_spec(const std::string& spec, const Semantics& sem) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto b = rest.find_first_not_of(" \t");
  rest = b == std::string::npos ? "" : rest.substr(b);
  if (head == "indicator") return Continuation<D>::indicator(parse_test(rest), sem);
  if (head == "expr") {
    if constexpr (std::is_same_v<D, ExtNonNegDomain>) {
      return expr_continuation(parse_expr(rest), sem);
    } else {
      throw DomainMismatch("'expr:' continuations need the extnn domain");
    }
  }
  throw FileFormatError("unknown continuation spec '" + spec + "'");
}

// Table file: one entry per line, "x = 1, y = 2 -> 3/2"; an optional line
// "default -> v" sets the fallback (bottom otherwise).
template <AnswerDomain D>
Continuation<D> parse_table_continuation(const std::string& text, const Semantics& sem) {
  std::map<Env, typename D::Value> entries;
  typename D::Value fallback = D::bottom();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto parse_value = [](const std::string& s) -> typename D::Value {
    if constexpr (std::is_same_v<D, BoolDomain>) {
      if (s == "0") return false;
      if (s == "1") return true;
      throw FileFormatError("bool table value must be 0 or 1, got '" + s + "'");
    } else {
      return ExtRat::parse(s);
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      throw FileFormatError("table line " + std::to_string(lineno) + ": expected '->'");
    std::string lhs = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + 2);
    const auto lb = lhs.find_first_not_of(" \t");
    const auto le = lhs.find_last_not_of(" \t");
    lhs = lb == std::string::npos ? "" : lhs.substr(lb, le - lb + 1);
    const auto rb = rhs.find_first_not_of(" \t");
    const auto re = rhs.find_last_not_of(" \t\r");
    rhs = rb == std::string::npos ? "" : rhs.substr(rb, re - rb + 1);
    if (lhs == "default") {
      fallback = parse_value(rhs);
      continue;
    }
    std::string unfolded = lhs;
    for (char& c : unfolded)
      if (c == ',') c = '\n';
    entries[parse_env_text(unfolded, sem)] = parse_value(rhs);
  }
  return Continuation<D>::table(std::move(entries), fallback);
}

}  // namespace wpwb
