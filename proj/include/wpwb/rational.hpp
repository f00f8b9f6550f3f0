// Exact rational arithmetic over arbitrary-precision integers.
// Every value is kept in lowest terms with a positive denominator, so
// equality is structural and hashing/ordering need no normalization pass.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "wpwb/errors.hpp"

namespace wpwb {

using BigInt = boost::multiprecision::cpp_int;

class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(int n) : num_(n), den_(1) {}                // NOLINT(runtime/explicit)
  Rat(long long n) : num_(n), den_(1) {}          // NOLINT(runtime/explicit)
  Rat(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT(runtime/explicit)

  Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const { return Rat(raw{}, -num_, den_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.num_, a.den_ * b.den_);
  }
  // Caller must rule b == 0 out; the err-extended layer owns that case.
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  // 2^k for any integer k, including negative ones.
  static Rat pow2(int k) {
    BigInt p = BigInt(1) << static_cast<unsigned>(k < 0 ? -k : k);
    return k >= 0 ? Rat(std::move(p)) : Rat(BigInt(1), std::move(p));
  }

  // Largest e with 2^e <= *this. Requires a strictly positive value.
  int floor_log2() const {
    if (num_ <= 0) throw std::domain_error("floor_log2: nonpositive");
    const long nb = static_cast<long>(boost::multiprecision::msb(num_));
    const long db = static_cast<long>(boost::multiprecision::msb(den_));
    long e = nb - db;  // within 1 of the answer
    while (*this < pow2(static_cast<int>(e))) --e;
    while (*this >= pow2(static_cast<int>(e + 1))) ++e;
    return static_cast<int>(e);
  }

  BigInt floor() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) --q;
    return q;
  }

  // Nearest integer, ties to the even one.
  BigInt round_half_even() const {
    BigInt f = floor();
    const Rat frac = *this - Rat(f);
    const BigInt twice = frac.num_ * 2;  // frac = twice/(2*den), 0 <= frac < 1
    if (twice < frac.den_) return f;
    if (twice > frac.den_) return f + 1;
    return (f % 2 == 0) ? f : f + 1;
  }

  std::string to_string() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // Exact decimal expansion; only defined when den is of the form 2^a*5^b.
  bool has_finite_decimal() const {
    BigInt d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
  }

  std::string to_decimal_string() const {
    if (!has_finite_decimal())
      throw std::domain_error("to_decimal_string: not a terminating decimal");
    BigInt d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    const int k = twos > fives ? twos : fives;
    BigInt scaled = num_;
    for (int i = 0; i < k - twos; ++i) scaled *= 2;
    for (int i = 0; i < k - fives; ++i) scaled *= 5;
    const bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits = scaled.str();
    if (static_cast<int>(digits.size()) <= k)
      digits.insert(0, std::string(k + 1 - digits.size(), '0'));
    std::string out = neg ? "-" : "";
    out += digits.substr(0, digits.size() - k);
    if (k > 0) out += "." + digits.substr(digits.size() - k);
    return out;
  }

  // Accepts "7", "-3/4", "1.25". Fraction and decimal forms are exact.
  static Rat parse(const std::string& text) {
    std::size_t pos = 0;
    Rat r = parse_prefix(text, pos);
    if (pos != text.size())
      throw FileFormatError("trailing characters in rational '" + text + "'");
    return r;
  }

  // Parses a rational starting at `pos`; leaves `pos` after the last digit.
  static Rat parse_prefix(const std::string& text, std::size_t& pos) {
    std::size_t i = pos;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      neg = text[i] == '-';
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) throw FileFormatError("malformed rational '" + text + "'");
    BigInt ip(text.substr(start, i - start));
    Rat result(ip);
    if (i + 1 < text.size() && text[i] == '.' &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      std::size_t fs = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      const std::string frac = text.substr(fs, i - fs);
      BigInt scale = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
      result = result + Rat(BigInt(frac), scale);
    } else if (i + 1 < text.size() && text[i] == '/' &&
               std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      std::size_t ds = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      BigInt den(text.substr(ds, i - ds));
      if (den == 0) throw FileFormatError("zero denominator in '" + text + "'");
      result = Rat(ip, den);
    }
    pos = i;
    return neg ? -result : result;
  }

 private:
  struct raw {};  // bypasses normalization for already-canonical parts
  Rat(raw, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

}  // namespace wpwb
