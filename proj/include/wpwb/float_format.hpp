// Parametric binary floating-point formats. Tiny formats are fully
// enumerable (no subnormals, one zero); binary64 matches IEEE double
// including subnormals so hardware results can be read back exactly.
#pragma once

#include <string>

#include "wpwb/errors.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

class FloatFormat {
 public:
  enum class Kind { Tiny, Binary64 };

  static FloatFormat tiny(int precision, int emin, int emax) {
    if (precision < 2) throw Error("FloatFormat: precision must be >= 2");
    if (precision > 62) throw Error("FloatFormat: precision must be <= 62");
    if (emin > emax) throw Error("FloatFormat: emin > emax");
    return FloatFormat(Kind::Tiny, precision, emin, emax);
  }

  static FloatFormat binary64() {
    return FloatFormat(Kind::Binary64, 53, -1022, 1023);
  }

  Kind kind() const { return kind_; }
  bool is_tiny() const { return kind_ == Kind::Tiny; }
  int precision() const { return precision_; }
  int emin() const { return emin_; }
  int emax() const { return emax_; }
  // Subnormal gap filling below 2^emin; tiny formats leave the gap open.
  bool has_subnormals() const { return kind_ == Kind::Binary64; }

  // F_max = (2 - 2^(1-p)) * 2^emax; F_min = -F_max.
  Rat max_value() const {
    return Rat(BigInt((BigInt(1) << precision_) - 1)) *
           Rat::pow2(emax_ - precision_ + 1);
  }
  Rat min_value() const { return -max_value(); }

  // |F|: all normal magnitudes twice, plus zero.
  BigInt cardinality() const {
    BigInt magnitudes = BigInt(emax_ - emin_ + 1) << (precision_ - 1);
    return 2 * magnitudes + 1;
  }

  friend bool operator==(const FloatFormat& a, const FloatFormat& b) {
    return a.kind_ == b.kind_ && a.precision_ == b.precision_ &&
           a.emin_ == b.emin_ && a.emax_ == b.emax_;
  }

  std::string to_string() const {
    if (kind_ == Kind::Binary64) return "binary64";
    return "tiny:p=" + std::to_string(precision_) +
           ",emin=" + std::to_string(emin_) + ",emax=" + std::to_string(emax_);
  }

  // "tiny:p=3,emin=-1,emax=1" or "binary64".
  static FloatFormat parse(const std::string& text) {
    if (text == "binary64") return binary64();
    const std::string prefix = "tiny:";
    if (text.rfind(prefix, 0) != 0)
      throw FileFormatError("bad float format '" + text + "'");
    int p = 0, emin = 0, emax = 0;
    bool have_p = false, have_min = false, have_max = false;
    std::size_t i = prefix.size();
    while (i < text.size()) {
      std::size_t eq = text.find('=', i);
      std::size_t comma = text.find(',', i);
      if (eq == std::string::npos)
        throw FileFormatError("bad float format '" + text + "'");
      const std::string key = text.substr(i, eq - i);
      const std::string val =
          text.substr(eq + 1, (comma == std::string::npos ? text.size() : comma) - eq - 1);
      int v = 0;
      try {
        v = std::stoi(val);
      } catch (...) {
        throw FileFormatError("bad number in float format '" + text + "'");
      }
      if (key == "p") { p = v; have_p = true; }
      else if (key == "emin") { emin = v; have_min = true; }
      else if (key == "emax") { emax = v; have_max = true; }
      else throw FileFormatError("unknown key '" + key + "' in float format");
      i = comma == std::string::npos ? text.size() : comma + 1;
    }
    if (!have_p || !have_min || !have_max)
      throw FileFormatError("float format needs p, emin, emax: '" + text + "'");
    return tiny(p, emin, emax);
  }

 private:
  FloatFormat(Kind k, int p, int lo, int hi)
      : kind_(k), precision_(p), emin_(lo), emax_(hi) {}

  Kind kind_;
  int precision_;
  int emin_;
  int emax_;
};

}  // namespace wpwb
