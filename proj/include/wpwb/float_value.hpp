// Err-extended floating-point values and the conversion maps between the
// float world and the exact world: inj (exact embedding) and proj
// (round-to-nearest with even tie-breaking, err outside [F_min, F_max]).
//
// A finite value is stored as sign * sig * 2^exp with an odd significand
// (sig == 0 only for the unique zero), so equality is structural and a value
// carries no format of its own; formats decide representability.
#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpwb/errors.hpp"
#include "wpwb/float_format.hpp"
#include "wpwb/rational.hpp"
#include "wpwb/real_value.hpp"

namespace wpwb {

class FloatE {
 public:
  FloatE() : err_(true), neg_(false), sig_(0), exp_(0) {}

  static FloatE error() { return FloatE(); }
  static FloatE zero() { return from_value(false, 0, 0); }

  // value = (neg ? -1 : +1) * sig * 2^exp2; trailing zero bits of sig are
  // folded into the exponent so the stored significand is odd.
  static FloatE from_value(bool neg, std::uint64_t sig, int exp2) {
    FloatE f;
    f.err_ = false;
    if (sig == 0) {
      f.neg_ = false;
      f.sig_ = 0;
      f.exp_ = 0;
      return f;
    }
    while ((sig & 1) == 0) {
      sig >>= 1;
      ++exp2;
    }
    f.neg_ = neg;
    f.sig_ = sig;
    f.exp_ = exp2;
    return f;
  }

  // Exact conversion from a dyadic rational; throws on non-dyadic values.
  static FloatE from_rat(const Rat& q) {
    if (q.is_zero()) return zero();
    BigInt den = q.den();
    int k = 0;
    while (den % 2 == 0) {
      den /= 2;
      ++k;
    }
    if (den != 1) throw Error("FloatE: value " + q.to_string() + " is not dyadic");
    BigInt num = q.num() < 0 ? BigInt(-q.num()) : q.num();
    if (boost::multiprecision::msb(num) >= 63)
      throw Error("FloatE: significand too wide for " + q.to_string());
    return from_value(q.is_negative(), static_cast<std::uint64_t>(num), -k);
  }

  // IEEE double -> FloatE with the err collapse: +/-inf and NaN become err
  // and the two zeroes are confused.
  static FloatE from_double(double d) {
    if (!std::isfinite(d)) return error();
    if (d == 0.0) return zero();
    int e = 0;
    const double m = std::frexp(d, &e);  // d = m * 2^e, |m| in [0.5, 1)
    const double scaled = std::ldexp(m < 0 ? -m : m, 53);
    return from_value(d < 0, static_cast<std::uint64_t>(scaled), e - 53);
  }

  bool is_err() const { return err_; }
  bool is_zero() const { return !err_ && sig_ == 0; }
  bool negative() const { return neg_; }
  std::uint64_t sig() const { return sig_; }
  int exp2() const { return exp_; }

  Rat to_rat() const {
    if (err_) throw Error("FloatE: to_rat() on err");
    Rat magnitude = Rat(BigInt(sig_)) * Rat::pow2(exp_);
    return neg_ ? -magnitude : magnitude;
  }

  double to_double() const {
    if (err_) throw Error("FloatE: to_double() on err");
    const double magnitude = std::ldexp(static_cast<double>(sig_), exp_);
    return neg_ ? -magnitude : magnitude;
  }

  friend bool operator==(const FloatE& a, const FloatE& b) {
    if (a.err_ != b.err_) return false;
    if (a.err_) return true;
    return a.neg_ == b.neg_ && a.sig_ == b.sig_ && a.exp_ == b.exp_;
  }

  // Container order: err first, then by value.
  friend std::strong_ordering operator<=>(const FloatE& a, const FloatE& b) {
    if (a.err_ && b.err_) return std::strong_ordering::equal;
    if (a.err_) return std::strong_ordering::less;
    if (b.err_) return std::strong_ordering::greater;
    return a.to_rat() <=> b.to_rat();
  }

  // Dyadic values always have a terminating decimal expansion.
  std::string to_string() const {
    return err_ ? "err" : to_rat().to_decimal_string();
  }

 private:
  bool err_;
  bool neg_;
  std::uint64_t sig_;
  int exp_;
};

inline RealE inj(const FloatE& f) {
  return f.is_err() ? RealE::error() : RealE(f.to_rat());
}

namespace detail {

inline int bit_width_u64(std::uint64_t v) {
  int w = 0;
  while (v != 0) {
    v >>= 1;
    ++w;
  }
  return w;
}

// Normal form (M, E): value = M * 2^(E - p + 1) with 2^(p-1) <= M < 2^p.
struct NormalParts {
  std::uint64_t m;
  int e;
};

inline std::optional<NormalParts> normal_parts(const FloatFormat& fmt,
                                               const FloatE& f) {
  if (f.is_err() || f.is_zero()) return std::nullopt;
  const int bits = bit_width_u64(f.sig());
  if (bits > fmt.precision()) return std::nullopt;
  const int e = f.exp2() + bits - 1;
  if (e < fmt.emin() || e > fmt.emax()) return std::nullopt;
  return NormalParts{f.sig() << (fmt.precision() - bits), e};
}

}  // namespace detail

// True iff f is a finite member of fmt's value set.
inline bool representable(const FloatFormat& fmt, const FloatE& f) {
  if (f.is_err()) return false;
  if (f.is_zero()) return true;
  if (detail::normal_parts(fmt, f).has_value()) return true;
  if (!fmt.has_subnormals()) return false;
  const int bits = detail::bit_width_u64(f.sig());
  if (bits > fmt.precision()) return false;
  const int e = f.exp2() + bits - 1;
  return e < fmt.emin() && f.exp2() >= fmt.emin() - fmt.precision() + 1;
}

// The ulp of f in fmt: the last bit of the p-bit significand. Zero counts
// as even.
inline bool ulp_is_even(const FloatFormat& fmt, const FloatE& f) {
  if (f.is_err()) throw Error("ulp_is_even: err has no significand");
  if (f.is_zero()) return true;
  return detail::bit_width_u64(f.sig()) < fmt.precision();
}

// proj: round to nearest, even ties, err outside [F_min, F_max].
//
// Tiny formats have no subnormals, which leaves a gap between 0 and
// +/-2^emin whose midpoint is equidistant from two values that BOTH have an
// even ulp; that tie resolves toward zero (the abrupt-underflow reading).
inline FloatE proj(const FloatFormat& fmt, const RealE& r) {
  if (r.is_err()) return FloatE::error();
  const Rat& q = r.rat();
  const Rat fmax = fmt.max_value();
  if (q > fmax || q < -fmax) return FloatE::error();
  if (q.is_zero()) return FloatE::zero();

  const bool neg = q.is_negative();
  const Rat a = q.abs();
  const int p = fmt.precision();

  int e = 0;
  if (!fmt.has_subnormals() && a < Rat::pow2(fmt.emin())) {
    // Candidates are 0 and 2^emin only.
    const Rat mid = Rat::pow2(fmt.emin() - 1);
    if (a <= mid) return FloatE::zero();
    return FloatE::from_value(neg, 1, fmt.emin());
  } else if (fmt.has_subnormals()) {
    e = a.floor_log2();
    if (e < fmt.emin()) e = fmt.emin();
  } else {
    e = a.floor_log2();  // within [emin, emax] here
  }

  const Rat scaled = a * Rat::pow2(p - 1 - e);
  BigInt m = scaled.round_half_even();
  if (m == (BigInt(1) << p)) {
    m >>= 1;
    ++e;  // cannot pass emax: values above F_max were rejected already
  }
  if (m == 0) return FloatE::zero();  // subnormal underflow (binary64 only)
  return FloatE::from_value(neg, static_cast<std::uint64_t>(m), e - p + 1);
}

inline FloatE proj(const FloatFormat& fmt, const Rat& q) {
  return proj(fmt, RealE(q));
}

// All representable values of a tiny format in increasing order.
inline std::vector<FloatE> enumerate_format(const FloatFormat& fmt,
                                            const BigInt& limit = BigInt(1)
                                                                  << 20) {
  if (!fmt.is_tiny()) throw FormatTooLarge("binary64 is not enumerable");
  if (fmt.cardinality() > limit)
    throw FormatTooLarge(fmt.to_string() + " has " + fmt.cardinality().str() +
                         " values");
  const int p = fmt.precision();
  std::vector<FloatE> positives;
  for (int e = fmt.emin(); e <= fmt.emax(); ++e)
    for (std::uint64_t m = std::uint64_t(1) << (p - 1);
         m < (std::uint64_t(1) << p); ++m)
      positives.push_back(FloatE::from_value(false, m, e - p + 1));
  std::vector<FloatE> out;
  out.reserve(positives.size() * 2 + 1);
  for (auto it = positives.rbegin(); it != positives.rend(); ++it)
    out.push_back(FloatE::from_value(true, it->sig(), it->exp2()));
  out.push_back(FloatE::zero());
  for (const FloatE& f : positives) out.push_back(f);
  return out;
}

// Neighbors in a tiny format's value set (std::nullopt past the extremes).
inline std::optional<FloatE> next_up(const FloatFormat& fmt, const FloatE& f) {
  if (f.is_err()) throw Error("next_up: err");
  const int p = fmt.precision();
  const std::uint64_t mmin = std::uint64_t(1) << (p - 1);
  const std::uint64_t mmax = (std::uint64_t(1) << p) - 1;
  if (f.is_zero()) return FloatE::from_value(false, mmin, fmt.emin() - p + 1);
  auto parts = detail::normal_parts(fmt, f);
  if (!parts) throw Error("next_up: value not representable");
  if (!f.negative()) {
    if (parts->m < mmax) return FloatE::from_value(false, parts->m + 1, parts->e - p + 1);
    if (parts->e < fmt.emax()) return FloatE::from_value(false, mmin, parts->e + 1 - p + 1);
    return std::nullopt;  // F_max
  }
  // Negative values: stepping up shrinks the magnitude.
  if (parts->m > mmin) return FloatE::from_value(true, parts->m - 1, parts->e - p + 1);
  if (parts->e > fmt.emin()) return FloatE::from_value(true, mmax, parts->e - 1 - p + 1);
  return FloatE::zero();
}

inline std::optional<FloatE> next_down(const FloatFormat& fmt, const FloatE& f) {
  if (f.is_err()) throw Error("next_down: err");
  if (f.is_zero()) {
    const auto up = next_up(fmt, FloatE::zero());
    return FloatE::from_value(true, up->sig(), up->exp2());
  }
  const FloatE mirrored = FloatE::from_value(!f.negative(), f.sig(), f.exp2());
  const auto up = next_up(fmt, mirrored);
  if (!up) return std::nullopt;
  if (up->is_zero()) return FloatE::zero();
  return FloatE::from_value(!up->negative(), up->sig(), up->exp2());
}

// The preimage proj^-1(f) as an interval with explicit endpoint membership,
// or the err case {err} u (-inf, F_min) u (F_max, +inf).
struct RoundingPreimage {
  bool err_case = false;
  Rat lo, hi;
  bool lo_closed = false, hi_closed = false;
  Rat fmin, fmax;  // only used by the err case

  bool contains(const RealE& r) const {
    if (err_case) {
      if (r.is_err()) return true;
      return r.rat() < fmin || r.rat() > fmax;
    }
    if (r.is_err()) return false;
    const Rat& x = r.rat();
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  std::string to_string() const {
    if (err_case)
      return "{err} u (-inf, " + fmin.to_string() + ") u (" + fmax.to_string() +
             ", +inf)";
    return std::string(lo_closed ? "[" : "(") + lo.to_string() + ", " +
           hi.to_string() + (hi_closed ? "]" : ")");
  }
};

namespace detail {

// A midpoint between adjacent representables belongs to the one whose ulp is
// even; when both are even (only across the zero gap of a no-subnormal
// format) it belongs to the one nearer zero.
inline bool midpoint_belongs_to_first(const FloatFormat& fmt, const FloatE& f,
                                      const FloatE& g) {
  const bool fe = ulp_is_even(fmt, f);
  const bool ge = ulp_is_even(fmt, g);
  if (fe != ge) return fe;
  const Rat af = f.is_zero() ? Rat(0) : f.to_rat().abs();
  const Rat ag = g.is_zero() ? Rat(0) : g.to_rat().abs();
  return af < ag;
}

}  // namespace detail

// The measurability lemma's case analysis, computed from the enumerated
// neighbors rather than from proj (tests cross-check the two).
inline RoundingPreimage rounding_boundaries(const FloatFormat& fmt,
                                            const FloatE& f) {
  if (!fmt.is_tiny()) throw Error("rounding_boundaries: tiny formats only");
  RoundingPreimage out;
  if (f.is_err()) {
    out.err_case = true;
    out.fmin = fmt.min_value();
    out.fmax = fmt.max_value();
    return out;
  }
  if (!f.is_zero() && !representable(fmt, f))
    throw Error("rounding_boundaries: value not representable");
  const Rat v = f.to_rat();
  const auto up = next_up(fmt, f);
  const auto down = next_down(fmt, f);
  if (!down) {  // f = F_min
    out.lo = fmt.min_value();
    out.lo_closed = true;
  } else {
    out.lo = (v + down->to_rat()) / Rat(2);
    out.lo_closed = !detail::midpoint_belongs_to_first(fmt, *down, f);
  }
  if (!up) {  // f = F_max
    out.hi = fmt.max_value();
    out.hi_closed = true;
  } else {
    out.hi = (v + up->to_rat()) / Rat(2);
    out.hi_closed = detail::midpoint_belongs_to_first(fmt, f, *up);
  }
  return out;
}

// One arithmetic step of the float semantics: exact operation on the
// injected operands, then proj. binary64 runs on hardware instead; results
// agree with the exact route wherever the exact result is in range.
inline FloatE float_arith(ArithOp op, const FloatFormat& fmt, const FloatE& a,
                          const std::optional<FloatE>& b = std::nullopt) {
  if (fmt.kind() == FloatFormat::Kind::Binary64) {
    if (op == ArithOp::Neg) {
      if (a.is_err()) return FloatE::error();
      return FloatE::from_double(-a.to_double());
    }
    if (!b.has_value()) throw Error("float_arith: binary op needs two operands");
    if (a.is_err() || b->is_err()) return FloatE::error();
    const double x = a.to_double();
    const double y = b->to_double();
    switch (op) {
      case ArithOp::Add: return FloatE::from_double(x + y);
      case ArithOp::Sub: return FloatE::from_double(x - y);
      case ArithOp::Mul: return FloatE::from_double(x * y);
      case ArithOp::Div: return FloatE::from_double(x / y);
      case ArithOp::Neg: break;
    }
    throw Error("float_arith: unreachable");
  }
  const RealE exact = op == ArithOp::Neg
                          ? real_arith(op, inj(a))
                          : real_arith(op, inj(a), inj(*b));
  return proj(fmt, exact);
}

}  // namespace wpwb
