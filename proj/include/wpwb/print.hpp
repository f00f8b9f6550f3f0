// Pretty printer. Output re-parses to a structurally equal tree (labels
// included); parentheses are minimal for expressions, explicit for negation
// and negated tests.
#pragma once

#include <string>

#include "wpwb/ast.hpp"

namespace wpwb {

namespace detail {

inline int expr_prec(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    default: return 3;
  }
}

inline std::string print_expr(const ExprPtr& e, int parent_prec, bool right_side) {
  switch (e->kind) {
    case Expr::Kind::Literal: return e->value.to_string();
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::Neg: return "-(" + print_expr(e->lhs, 0, false) + ")";
    default: break;
  }
  const int prec = expr_prec(e);
  const char* op = e->kind == Expr::Kind::Add   ? " + "
                   : e->kind == Expr::Kind::Sub ? " - "
                   : e->kind == Expr::Kind::Mul ? " * "
                                                : " / ";
  std::string s = print_expr(e->lhs, prec, false) + op + print_expr(e->rhs, prec, true);
  // Left-associative operators: the right child needs parentheses at equal
  // precedence, both sides need them below the parent's precedence.
  if (prec < parent_prec || (prec == parent_prec && right_side)) return "(" + s + ")";
  return s;
}

inline std::string indent_of(int depth) { return std::string(depth * 2, ' '); }

inline bool is_block(const InstrPtr& i) {
  return i->kind == Instr::Kind::If || i->kind == Instr::Kind::While ||
         (i->kind == Instr::Kind::Seq && (is_block(i->a) || is_block(i->b)));
}

inline std::string print_instr(const InstrPtr& i, int depth);

inline std::string print_block(const InstrPtr& body, int depth) {
  return "{\n" + print_instr(body, depth + 1) + "\n" + indent_of(depth) + "}";
}

}  // namespace detail

inline std::string pretty_print(const ExprPtr& e) { return detail::print_expr(e, 0, false); }

inline std::string pretty_print(const TestPtr& t) {
  if (t->kind == Test::Kind::Not) return "!(" + pretty_print(t->inner) + ")";
  const char* op = t->kind == Test::Kind::Le   ? " <= "
                   : t->kind == Test::Kind::Lt ? " < "
                   : t->kind == Test::Kind::Eq ? " == "
                                               : " != ";
  return pretty_print(t->lhs) + op + pretty_print(t->rhs);
}

namespace detail {

inline std::string print_instr(const InstrPtr& i, int depth) {
  const std::string ind = indent_of(depth);
  const std::string lab = i->kind == Instr::Kind::Seq ? "" : "^" + std::to_string(i->label) + " ";
  switch (i->kind) {
    case Instr::Kind::Skip:
      return ind + lab + "skip";
    case Instr::Kind::Assign:
      return ind + lab + i->var + " = " + pretty_print(i->expr);
    case Instr::Kind::If:
      return ind + lab + "if " + pretty_print(i->test) + " " + print_block(i->a, depth) +
             " else " + print_block(i->b, depth);
    case Instr::Kind::While:
      return ind + lab + "while " + pretty_print(i->test) + " " + print_block(i->a, depth);
    case Instr::Kind::Seq: {
      if (!is_block(i->a) && !is_block(i->b) && depth == 0)
        return print_instr(i->a, 0) + "; " + print_instr(i->b, 0);
      return print_instr(i->a, depth) + ";\n" + print_instr(i->b, depth);
    }
    case Instr::Kind::Input: {
      std::string s = ind + lab + "(";
      for (std::size_t k = 0; k < i->targets.size(); ++k) {
        if (k) s += ", ";
        s += i->targets[k];
      }
      return s + ") = input()";
    }
  }
  return "";
}

}  // namespace detail

inline std::string pretty_print(const InstrPtr& i) { return detail::print_instr(i, 0); }

inline std::string pretty_print(const Program& p) { return pretty_print(p.root); }

}  // namespace wpwb
