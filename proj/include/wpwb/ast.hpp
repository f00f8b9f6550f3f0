// Abstract syntax of the toy imperative language: expressions over exact
// rational constants, four comparisons plus negation for tests, and labeled
// instructions including a multi-target `input`.
//
// Nodes are immutable and shared; copying a tree is copying a pointer.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wpwb/errors.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

struct Expr;
struct Test;
struct Instr;
using ExprPtr = std::shared_ptr<const Expr>;
using TestPtr = std::shared_ptr<const Test>;
using InstrPtr = std::shared_ptr<const Instr>;

struct Expr {
  enum class Kind { Literal, Var, Neg, Add, Sub, Mul, Div };
  Kind kind;
  Rat value;         // Literal
  std::string name;  // Var
  ExprPtr lhs, rhs;  // Neg uses lhs only
};

inline ExprPtr expr_lit(Rat v) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Literal, std::move(v), {}, nullptr, nullptr});
}
inline ExprPtr expr_var(std::string name) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Var, {}, std::move(name), nullptr, nullptr});
}
inline ExprPtr expr_neg(ExprPtr e) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Neg, {}, {}, std::move(e), nullptr});
}
inline ExprPtr expr_bin(Expr::Kind k, ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{k, {}, {}, std::move(l), std::move(r)});
}

struct Test {
  enum class Kind { Le, Lt, Eq, Ne, Not };
  Kind kind;
  ExprPtr lhs, rhs;  // comparisons
  TestPtr inner;     // Not
};

inline TestPtr test_cmp(Test::Kind k, ExprPtr l, ExprPtr r) {
  return std::make_shared<Test>(Test{k, std::move(l), std::move(r), nullptr});
}
inline TestPtr test_not(TestPtr t) {
  return std::make_shared<Test>(Test{Test::Kind::Not, nullptr, nullptr, std::move(t)});
}

struct Instr {
  enum class Kind { Skip, Assign, If, While, Seq, Input };
  Kind kind;
  int label = 0;  // unused by Seq
  std::string var;
  ExprPtr expr;
  TestPtr test;
  InstrPtr a, b;  // If: then/else; While: body in a; Seq: first/second
  std::vector<std::string> targets;  // Input
};

inline InstrPtr instr_skip(int label) {
  return std::make_shared<Instr>(Instr{Instr::Kind::Skip, label, {}, nullptr, nullptr, nullptr, nullptr, {}});
}
inline InstrPtr instr_assign(int label, std::string var, ExprPtr e) {
  return std::make_shared<Instr>(Instr{Instr::Kind::Assign, label, std::move(var), std::move(e), nullptr, nullptr, nullptr, {}});
}
inline InstrPtr instr_if(int label, TestPtr t, InstrPtr then_branch, InstrPtr else_branch) {
  return std::make_shared<Instr>(Instr{Instr::Kind::If, label, {}, nullptr, std::move(t), std::move(then_branch), std::move(else_branch), {}});
}
inline InstrPtr instr_while(int label, TestPtr t, InstrPtr body) {
  return std::make_shared<Instr>(Instr{Instr::Kind::While, label, {}, nullptr, std::move(t), std::move(body), nullptr, {}});
}
inline InstrPtr instr_seq(InstrPtr first, InstrPtr second) {
  return std::make_shared<Instr>(Instr{Instr::Kind::Seq, 0, {}, nullptr, nullptr, std::move(first), std::move(second), {}});
}
inline InstrPtr instr_input(int label, std::vector<std::string> targets) {
  if (targets.empty()) throw Error("input: needs at least one target");
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw Error("input: duplicate target '" + targets[i] + "'");
  return std::make_shared<Instr>(Instr{Instr::Kind::Input, label, {}, nullptr, nullptr, nullptr, nullptr, std::move(targets)});
}

struct Program {
  InstrPtr root;
  int exit_label = 0;
  std::vector<std::string> declared_vars;  // sorted, unique
};

// --- structural equality -------------------------------------------------

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Literal: return a->value == b->value;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Neg: return structurally_equal(a->lhs, b->lhs);
    default:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

inline bool structurally_equal(const TestPtr& a, const TestPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == Test::Kind::Not) return structurally_equal(a->inner, b->inner);
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

inline bool structurally_equal(const InstrPtr& a, const InstrPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Instr::Kind::Skip: return a->label == b->label;
    case Instr::Kind::Assign:
      return a->label == b->label && a->var == b->var && structurally_equal(a->expr, b->expr);
    case Instr::Kind::If:
      return a->label == b->label && structurally_equal(a->test, b->test) &&
             structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    case Instr::Kind::While:
      return a->label == b->label && structurally_equal(a->test, b->test) &&
             structurally_equal(a->a, b->a);
    case Instr::Kind::Seq:
      return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    case Instr::Kind::Input:
      return a->label == b->label && a->targets == b->targets;
  }
  return false;
}

// --- free variables ------------------------------------------------------

inline void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Literal: return;
    case Expr::Kind::Var: out.insert(e->name); return;
    case Expr::Kind::Neg: collect_vars(e->lhs, out); return;
    default:
      collect_vars(e->lhs, out);
      collect_vars(e->rhs, out);
  }
}

inline void collect_vars(const TestPtr& t, std::set<std::string>& out) {
  if (t->kind == Test::Kind::Not) {
    collect_vars(t->inner, out);
    return;
  }
  collect_vars(t->lhs, out);
  collect_vars(t->rhs, out);
}

inline void collect_vars(const InstrPtr& i, std::set<std::string>& out) {
  switch (i->kind) {
    case Instr::Kind::Skip: return;
    case Instr::Kind::Assign:
      out.insert(i->var);
      collect_vars(i->expr, out);
      return;
    case Instr::Kind::If:
      collect_vars(i->test, out);
      collect_vars(i->a, out);
      collect_vars(i->b, out);
      return;
    case Instr::Kind::While:
      collect_vars(i->test, out);
      collect_vars(i->a, out);
      return;
    case Instr::Kind::Seq:
      collect_vars(i->a, out);
      collect_vars(i->b, out);
      return;
    case Instr::Kind::Input:
      for (const auto& v : i->targets) out.insert(v);
      return;
  }
}

template <class Node>
std::set<std::string> free_vars(const Node& n) {
  std::set<std::string> out;
  collect_vars(n, out);
  return out;
}

inline bool contains_input(const InstrPtr& i) {
  switch (i->kind) {
    case Instr::Kind::Input: return true;
    case Instr::Kind::If:
    case Instr::Kind::Seq: return contains_input(i->a) || contains_input(i->b);
    case Instr::Kind::While: return contains_input(i->a);
    default: return false;
  }
}

// --- labels ---------------------------------------------------------------

inline void collect_labels(const InstrPtr& i, std::vector<int>& out) {
  if (i->kind != Instr::Kind::Seq) out.push_back(i->label);
  switch (i->kind) {
    case Instr::Kind::If:
    case Instr::Kind::Seq:
      collect_labels(i->a, out);
      collect_labels(i->b, out);
      return;
    case Instr::Kind::While:
      collect_labels(i->a, out);
      return;
    default:
      return;
  }
}

// Throws DuplicateLabel on the first repeated label.
inline void check_labels_unique(const InstrPtr& root) {
  std::vector<int> labels;
  collect_labels(root, labels);
  std::set<int> seen;
  for (int l : labels)
    if (!seen.insert(l).second) throw DuplicateLabel(l);
}

// Wraps a root instruction into a Program: validates labels, derives the
// variable set from occurrences, and picks the exit label.
inline Program make_program(InstrPtr root) {
  check_labels_unique(root);
  Program p;
  p.root = std::move(root);
  const auto vars = free_vars(p.root);
  p.declared_vars.assign(vars.begin(), vars.end());
  std::vector<int> labels;
  collect_labels(p.root, labels);
  int mx = 0;
  for (int l : labels)
    if (l > mx) mx = l;
  p.exit_label = mx + 1;
  return p;
}

// As above but checks occurrences against an explicit declaration set.
inline Program make_program(InstrPtr root, const std::vector<std::string>& declared) {
  Program p = make_program(std::move(root));
  const std::set<std::string> allowed(declared.begin(), declared.end());
  for (const auto& v : p.declared_vars)
    if (!allowed.count(v)) throw UndeclaredVariable(v);
  p.declared_vars.assign(allowed.begin(), allowed.end());
  return p;
}

}  // namespace wpwb
