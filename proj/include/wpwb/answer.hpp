// Answer domains for the continuation-passing semantics: omega-cpos with a
// bottom element and binary suprema. Two instances ship: the Booleans
// ordered 0 < 1, and the non-negative rationals extended with +inf under
// the conventions 0 * inf = 0, inf * inf = inf, x + inf = inf.
#pragma once

#include <compare>
#include <concepts>
#include <string>

#include "wpwb/errors.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

// A value in [0, +inf].
class ExtRat {
 public:
  ExtRat() : inf_(false), q_(0) {}
  ExtRat(Rat q) : inf_(false), q_(std::move(q)) {  // NOLINT(runtime/explicit)
    if (q_.is_negative()) throw Error("ExtRat: negative value " + q_.to_string());
  }
  ExtRat(int n) : ExtRat(Rat(n)) {}  // NOLINT(runtime/explicit)

  static ExtRat infinity() {
    ExtRat v;
    v.inf_ = true;
    return v;
  }

  bool is_infinite() const { return inf_; }
  bool is_zero() const { return !inf_ && q_.is_zero(); }
  const Rat& rat() const {
    if (inf_) throw Error("ExtRat: rat() on infinity");
    return q_;
  }

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtRat(a.q_ + b.q_);
  }

  friend ExtRat operator*(const ExtRat& a, const ExtRat& b) {
    // 0 * inf = inf * 0 = 0 takes precedence over absorption.
    if (a.is_zero() || b.is_zero()) return ExtRat(Rat(0));
    if (a.inf_ || b.inf_) return infinity();
    return ExtRat(a.q_ * b.q_);
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.q_ == b.q_;
  }
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    return a.q_ <=> b.q_;
  }

  std::string to_string() const { return inf_ ? "inf" : q_.to_string(); }

  static ExtRat parse(const std::string& text) {
    if (text == "inf") return infinity();
    return ExtRat(Rat::parse(text));
  }

 private:
  bool inf_;
  Rat q_;
};

inline ExtRat scale(const Rat& alpha, const ExtRat& v) {
  if (alpha.is_negative()) throw Error("scale: negative scalar");
  return ExtRat(alpha) * v;
}

// Capability record of an answer domain. Everything the engine needs:
// bottom, the order, binary joins, and equality. Chain suprema are taken by
// iteration; finite domains stabilize exactly, elsewhere the fixpoint
// machinery reports its budget status instead of truncating silently.
template <class D>
concept AnswerDomain = requires(const typename D::Value& a, const typename D::Value& b) {
  { D::bottom() } -> std::convertible_to<typename D::Value>;
  { D::leq(a, b) } -> std::convertible_to<bool>;
  { D::join(a, b) } -> std::convertible_to<typename D::Value>;
  { D::eq(a, b) } -> std::convertible_to<bool>;
  { D::name() } -> std::convertible_to<std::string>;
  { D::to_string(a) } -> std::convertible_to<std::string>;
};

// ANS = {0, 1}: weakest preconditions compute may-reachability predecessors.
struct BoolDomain {
  using Value = bool;
  static Value bottom() { return false; }
  static bool leq(Value a, Value b) { return !a || b; }
  static Value join(Value a, Value b) { return a || b; }
  static bool eq(Value a, Value b) { return a == b; }
  static std::string name() { return "bool"; }
  static std::string to_string(Value v) { return v ? "1" : "0"; }
};

// ANS = [0, +inf]: expectation-style answers.
struct ExtNonNegDomain {
  using Value = ExtRat;
  static Value bottom() { return ExtRat(Rat(0)); }
  static bool leq(const Value& a, const Value& b) { return a <= b; }
  static Value join(const Value& a, const Value& b) { return a >= b ? a : b; }
  static bool eq(const Value& a, const Value& b) { return a == b; }
  static std::string name() { return "extnn"; }
  static std::string to_string(const Value& v) { return v.to_string(); }
};

static_assert(AnswerDomain<BoolDomain>);
static_assert(AnswerDomain<ExtNonNegDomain>);

}  // namespace wpwb
