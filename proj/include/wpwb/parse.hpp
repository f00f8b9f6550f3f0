// Lexer and recursive-descent parser for the concrete syntax.
//
//   program  := instr
//   instr    := labeled (';' labeled)*              (';' is right-associative)
//   labeled  := ('^' nat)? bare
//   bare     := 'skip'
//             | ident '=' expr
//             | 'if' test ['then'] '{' instr '}' 'else' '{' instr '}'
//             | 'while' test '{' instr '}'
//             | '(' ident (',' ident)* ')' '=' 'input' '(' ')'
//   test     := '!' test | '(' test ')' | expr relop expr
//   relop    := '<=' | '<' | '==' | '!=' | '>=' | '>'    (>=, > are sugar)
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := '-' factor | literal | ident | '(' expr ')'
//
// Literals are exact rationals: "3", "1.5", or "3/2" (digits directly around
// the slash; "3 / 2" is a division and "1/0" falls back to division too, so
// err stays expressible). '#' starts a line comment. Labels are optional and
// auto-assigned in preorder where missing.
#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wpwb/ast.hpp"
#include "wpwb/errors.hpp"

namespace wpwb {

namespace detail {

struct Token {
  enum class Kind { End, Ident, Number, Punct };
  Kind kind;
  std::string text;  // Ident / Punct spelling
  Rat value;         // Number
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { scan_all(); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void scan_all() {
    while (true) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) break;
      tokens_.push_back(next_token());
    }
    tokens_.push_back(Token{Token::Kind::End, "", {}, line_, col_});
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    const int line = line_, col = col_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number_token(line, col);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        name += src_[pos_];
        advance();
      }
      return Token{Token::Kind::Ident, name, {}, line, col};
    }
    for (const char* two : {"<=", "==", "!=", ">="}) {
      if (src_.compare(pos_, 2, two) == 0) {
        advance();
        advance();
        return Token{Token::Kind::Punct, two, {}, line, col};
      }
    }
    static const std::string singles = "^(){}=;,+-*/<>!";
    if (singles.find(c) != std::string::npos) {
      advance();
      return Token{Token::Kind::Punct, std::string(1, c), {}, line, col};
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }

  Token number_token(int line, int col) {
    std::string digits = scan_digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      advance();
      const std::string frac = scan_digits();
      BigInt scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rat v = Rat(BigInt(digits)) + Rat(BigInt(frac), scale);
      return Token{Token::Kind::Number, "", v, line, col};
    }
    if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      // Fused fraction literal, unless the denominator is zero: keep "1/0"
      // as a division so the error value remains writable.
      const std::size_t save_pos = pos_;
      const int save_line = line_, save_col = col_;
      advance();
      const std::string den = scan_digits();
      if (BigInt(den) != 0) {
        Rat v{BigInt(digits), BigInt(den)};
        return Token{Token::Kind::Number, "", v, line, col};
      }
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
    }
    return Token{Token::Kind::Number, "", Rat(BigInt(digits)), line, col};
  }

  std::string scan_digits() {
    std::string out;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      out += src_[pos_];
      advance();
    }
    return out;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  std::vector<Token> tokens_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) {}

  InstrPtr parse_instr_all() {
    InstrPtr i = instr();
    expect_end();
    return i;
  }
  ExprPtr parse_expr_all() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }
  TestPtr parse_test_all() {
    TestPtr t = test();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return lexer_.tokens()[idx_]; }
  const Token& get() { return lexer_.tokens()[idx_++]; }

  bool at_punct(const std::string& p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_keyword(const std::string& k) const {
    return peek().kind == Token::Kind::Ident && peek().text == k;
  }
  bool eat_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    ++idx_;
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!eat_punct(p)) fail("expected '" + p + "'");
  }
  void expect_keyword(const std::string& k) {
    if (!at_keyword(k)) fail("expected '" + k + "'");
    ++idx_;
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input"
                      : t.kind == Token::Kind::Number ? "number"
                                                      : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + got, t.line, t.column);
  }

  static const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {"skip", "if", "then", "else", "while", "input"};
    return kw;
  }

  std::string ident() {
    if (peek().kind != Token::Kind::Ident || keywords().count(peek().text))
      fail("expected identifier");
    return get().text;
  }

  InstrPtr instr() {
    InstrPtr first = labeled();
    if (eat_punct(";")) return instr_seq(first, instr());
    return first;
  }

  InstrPtr labeled() {
    int label = kNoLabel;
    if (eat_punct("^")) {
      if (peek().kind != Token::Kind::Number || !peek().value.is_integer() ||
          peek().value.is_negative())
        fail("expected a natural number label after '^'");
      if (peek().value > Rat(1000000)) fail("label out of range");
      label = static_cast<int>(peek().value.num());
      ++idx_;
    }
    return bare(label);
  }

  InstrPtr bare(int label) {
    if (at_keyword("skip")) {
      ++idx_;
      return instr_skip(label);
    }
    if (at_keyword("if")) {
      ++idx_;
      TestPtr t = test();
      if (at_keyword("then")) ++idx_;
      expect_punct("{");
      InstrPtr then_branch = instr();
      expect_punct("}");
      if (!at_keyword("else")) fail("expected 'else' (the grammar has no if without else)");
      ++idx_;
      expect_punct("{");
      InstrPtr else_branch = instr();
      expect_punct("}");
      return instr_if(label, t, then_branch, else_branch);
    }
    if (at_keyword("while")) {
      ++idx_;
      TestPtr t = test();
      expect_punct("{");
      InstrPtr body = instr();
      expect_punct("}");
      return instr_while(label, t, body);
    }
    if (at_punct("(")) {
      ++idx_;
      std::vector<std::string> targets;
      targets.push_back(ident());
      while (eat_punct(",")) targets.push_back(ident());
      expect_punct(")");
      expect_punct("=");
      expect_keyword("input");
      expect_punct("(");
      expect_punct(")");
      try {
        return instr_input(label, std::move(targets));
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    if (peek().kind == Token::Kind::Ident && !keywords().count(peek().text)) {
      std::string var = get().text;
      expect_punct("=");
      return instr_assign(label, std::move(var), expr());
    }
    fail("expected an instruction");
  }

  TestPtr test() {
    if (eat_punct("!")) return test_not(test());
    if (at_punct("(")) {
      // Either a parenthesized test or a parenthesized expression starting a
      // comparison; try the test reading first and backtrack.
      const std::size_t save = idx_;
      ++idx_;
      try {
        TestPtr inner = test();
        expect_punct(")");
        return inner;
      } catch (const SyntaxError&) {
        idx_ = save;
      }
    }
    ExprPtr l = expr();
    if (eat_punct("<=")) return test_cmp(Test::Kind::Le, l, expr());
    if (eat_punct("<")) return test_cmp(Test::Kind::Lt, l, expr());
    if (eat_punct("==")) return test_cmp(Test::Kind::Eq, l, expr());
    if (eat_punct("!=")) return test_cmp(Test::Kind::Ne, l, expr());
    if (eat_punct(">=")) return test_not(test_cmp(Test::Kind::Lt, l, expr()));
    if (eat_punct(">")) return test_not(test_cmp(Test::Kind::Le, l, expr()));
    fail("expected a comparison operator");
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (eat_punct("+")) e = expr_bin(Expr::Kind::Add, e, term());
      else if (eat_punct("-")) e = expr_bin(Expr::Kind::Sub, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      if (eat_punct("*")) e = expr_bin(Expr::Kind::Mul, e, factor());
      else if (eat_punct("/")) e = expr_bin(Expr::Kind::Div, e, factor());
      else return e;
    }
  }

  ExprPtr factor() {
    if (eat_punct("-")) return expr_neg(factor());
    if (peek().kind == Token::Kind::Number) return expr_lit(get().value);
    if (peek().kind == Token::Kind::Ident && !keywords().count(peek().text))
      return expr_var(get().text);
    if (eat_punct("(")) {
      ExprPtr e = expr();
      expect_punct(")");
      return e;
    }
    fail("expected an expression");
  }

  static constexpr int kNoLabel = -1;

  Lexer lexer_;
  std::size_t idx_ = 0;
};

// Preorder auto-numbering of unlabeled instructions, skipping labels that
// explicit annotations already use.
class LabelAssigner {
 public:
  InstrPtr run(const InstrPtr& root) {
    collect_used(root);
    return visit(root);
  }

 private:
  void collect_used(const InstrPtr& i) {
    if (i->kind != Instr::Kind::Seq && i->label >= 0) {
      if (!used_.insert(i->label).second) throw DuplicateLabel(i->label);
    }
    switch (i->kind) {
      case Instr::Kind::If:
      case Instr::Kind::Seq:
        collect_used(i->a);
        collect_used(i->b);
        return;
      case Instr::Kind::While:
        collect_used(i->a);
        return;
      default:
        return;
    }
  }

  int fresh() {
    while (used_.count(next_)) ++next_;
    used_.insert(next_);
    return next_;
  }

  InstrPtr visit(const InstrPtr& i) {
    const int label = i->kind == Instr::Kind::Seq ? 0 : (i->label >= 0 ? i->label : fresh());
    switch (i->kind) {
      case Instr::Kind::Skip: return instr_skip(label);
      case Instr::Kind::Assign: return instr_assign(label, i->var, i->expr);
      case Instr::Kind::If: {
        InstrPtr t = visit(i->a);
        InstrPtr e = visit(i->b);
        return instr_if(label, i->test, t, e);
      }
      case Instr::Kind::While: {
        InstrPtr b = visit(i->a);
        return instr_while(label, i->test, b);
      }
      case Instr::Kind::Seq: {
        InstrPtr f = visit(i->a);
        InstrPtr s = visit(i->b);
        return instr_seq(f, s);
      }
      case Instr::Kind::Input: return instr_input(label, i->targets);
    }
    throw Error("label assignment: unreachable");
  }

  std::set<int> used_;
  int next_ = 1;
};

}  // namespace detail

inline Program parse_program(const std::string& text) {
  detail::Parser parser(text);
  InstrPtr raw = parser.parse_instr_all();
  InstrPtr labeled = detail::LabelAssigner().run(raw);
  return make_program(labeled);
}

inline Program parse_program(const std::string& text,
                             const std::vector<std::string>& declared) {
  detail::Parser parser(text);
  InstrPtr raw = parser.parse_instr_all();
  InstrPtr labeled = detail::LabelAssigner().run(raw);
  return make_program(labeled, declared);
}

inline ExprPtr parse_expr(const std::string& text) {
  return detail::Parser(text).parse_expr_all();
}

inline TestPtr parse_test(const std::string& text) {
  return detail::Parser(text).parse_test_all();
}

}  // namespace wpwb
