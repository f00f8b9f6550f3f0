// Err-extended exact values: the real number line restricted to rationals,
// plus a single absorbing error element standing in for IEEE overflow/NaN.
#pragma once

#include <compare>
#include <optional>
#include <string>

#include "wpwb/errors.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

enum class ArithOp { Add, Sub, Mul, Div, Neg };

inline const char* arith_op_name(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Neg: return "neg";
  }
  return "?";
}

class RealE {
 public:
  RealE() : err_(true) {}
  RealE(Rat q) : err_(false), q_(std::move(q)) {}  // NOLINT(runtime/explicit)
  RealE(int n) : err_(false), q_(n) {}             // NOLINT(runtime/explicit)

  static RealE error() { return RealE(); }

  bool is_err() const { return err_; }
  const Rat& rat() const {
    if (err_) throw Error("RealE: rat() on err");
    return q_;
  }

  // Structural equality: err == err, rationals by value.
  friend bool operator==(const RealE& a, const RealE& b) {
    if (a.err_ != b.err_) return false;
    return a.err_ || a.q_ == b.q_;
  }

  // Total order for use as a container key only; err sorts first.
  // The semantic order on values is defined just for non-err operands.
  friend std::strong_ordering operator<=>(const RealE& a, const RealE& b) {
    if (a.err_ && b.err_) return std::strong_ordering::equal;
    if (a.err_) return std::strong_ordering::less;
    if (b.err_) return std::strong_ordering::greater;
    return a.q_ <=> b.q_;
  }

  std::string to_string() const { return err_ ? "err" : q_.to_string(); }

  // Accepts "err" or any rational form.
  static RealE parse(const std::string& text) {
    if (text == "err") return error();
    return RealE(Rat::parse(text));
  }

 private:
  bool err_;
  Rat q_;
};

// err <> r = r <> err = r/0 = -err = err; exact rational arithmetic otherwise.
inline RealE real_arith(ArithOp op, const RealE& a,
                        const std::optional<RealE>& b = std::nullopt) {
  if (op == ArithOp::Neg) {
    if (b.has_value()) throw Error("real_arith: neg takes one operand");
    if (a.is_err()) return RealE::error();
    return RealE(-a.rat());
  }
  if (!b.has_value()) throw Error("real_arith: binary op needs two operands");
  if (a.is_err() || b->is_err()) return RealE::error();
  const Rat& x = a.rat();
  const Rat& y = b->rat();
  switch (op) {
    case ArithOp::Add: return RealE(x + y);
    case ArithOp::Sub: return RealE(x - y);
    case ArithOp::Mul: return RealE(x * y);
    case ArithOp::Div:
      if (y.is_zero()) return RealE::error();
      return RealE(x / y);
    case ArithOp::Neg: break;
  }
  throw Error("real_arith: unreachable");
}

}  // namespace wpwb
