// Program environments: total maps from the program's variables to
// err-extended values, tagged with the semantics they belong to.
#pragma once

#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wpwb/errors.hpp"
#include "wpwb/float_format.hpp"
#include "wpwb/float_value.hpp"
#include "wpwb/real_value.hpp"

namespace wpwb {

enum class Mode { Real, Floating };

struct Semantics {
  Mode mode = Mode::Real;
  FloatFormat fmt = FloatFormat::binary64();

  static Semantics real() { return Semantics{Mode::Real, FloatFormat::binary64()}; }
  static Semantics floating(FloatFormat f) { return Semantics{Mode::Floating, f}; }

  friend bool operator==(const Semantics& a, const Semantics& b) {
    if (a.mode != b.mode) return false;
    return a.mode == Mode::Real || a.fmt == b.fmt;
  }

  std::string to_string() const {
    return mode == Mode::Real ? "real" : fmt.to_string();
  }

  // "real", "binary64", or "tiny:p=...,emin=...,emax=...".
  static Semantics parse(const std::string& text) {
    if (text == "real") return real();
    return floating(FloatFormat::parse(text));
  }
};

class Env {
 public:
  Env() : mode_(Mode::Real) {}

  static Env real(std::map<std::string, RealE> bindings) {
    Env e;
    e.mode_ = Mode::Real;
    e.real_ = std::move(bindings);
    return e;
  }

  static Env floating(std::map<std::string, FloatE> bindings) {
    Env e;
    e.mode_ = Mode::Floating;
    e.float_ = std::move(bindings);
    return e;
  }

  static Env empty(Mode mode) {
    Env e;
    e.mode_ = mode;
    return e;
  }

  Mode mode() const { return mode_; }
  std::size_t size() const {
    return mode_ == Mode::Real ? real_.size() : float_.size();
  }

  bool has(const std::string& name) const {
    return mode_ == Mode::Real ? real_.count(name) > 0 : float_.count(name) > 0;
  }

  const RealE& real_at(const std::string& name) const {
    auto it = real_.find(name);
    if (mode_ != Mode::Real || it == real_.end()) throw UnboundVariable(name);
    return it->second;
  }

  const FloatE& float_at(const std::string& name) const {
    auto it = float_.find(name);
    if (mode_ != Mode::Floating || it == float_.end()) throw UnboundVariable(name);
    return it->second;
  }

  // The value as an err-extended real regardless of mode.
  RealE value_at(const std::string& name) const {
    if (mode_ == Mode::Real) return real_at(name);
    return inj(float_at(name));
  }

  Env with_real(const std::string& name, RealE v) const {
    if (mode_ != Mode::Real) throw Error("Env: real update on a float environment");
    Env e = *this;
    e.real_[name] = std::move(v);
    return e;
  }

  Env with_float(const std::string& name, FloatE v) const {
    if (mode_ != Mode::Floating) throw Error("Env: float update on a real environment");
    Env e = *this;
    e.float_[name] = std::move(v);
    return e;
  }

  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    if (mode_ == Mode::Real)
      for (const auto& [k, _] : real_) out.push_back(k);
    else
      for (const auto& [k, _] : float_) out.push_back(k);
    return out;
  }

  friend bool operator==(const Env& a, const Env& b) {
    return a.mode_ == b.mode_ && a.real_ == b.real_ && a.float_ == b.float_;
  }
  friend std::strong_ordering operator<=>(const Env& a, const Env& b) {
    if (a.mode_ != b.mode_)
      return a.mode_ == Mode::Real ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.real_ <=> b.real_; c != 0) return c;
    return a.float_ <=> b.float_;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    if (mode_ == Mode::Real) {
      for (const auto& [k, v] : real_) {
        if (!first) os << ", ";
        os << k << " = " << v.to_string();
        first = false;
      }
    } else {
      for (const auto& [k, v] : float_) {
        if (!first) os << ", ";
        os << k << " = " << v.to_string();
        first = false;
      }
    }
    return os.str();
  }

 private:
  Mode mode_;
  std::map<std::string, RealE> real_;
  std::map<std::string, FloatE> float_;
};

// A float-mode binding must be exactly representable in the format; rounding
// an environment silently would blur the two semantics.
inline FloatE float_binding(const FloatFormat& fmt, const RealE& v,
                            const std::string& name) {
  if (v.is_err()) return FloatE::error();
  FloatE f = FloatE::error();
  try {
    f = FloatE::from_rat(v.rat());
  } catch (const Error&) {
    throw FileFormatError("value " + v.rat().to_string() + " for '" + name +
                          "' is not representable in " + fmt.to_string());
  }
  if (!representable(fmt, f))
    throw FileFormatError("value " + v.rat().to_string() + " for '" + name +
                          "' is not representable in " + fmt.to_string());
  return f;
}

// An optional leading "mode: <semantics>" line lets env and universe files
// pin the semantics they were written for.
inline std::optional<Semantics> declared_mode(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::string prefix = "mode:";
    if (line.compare(b, prefix.size(), prefix) != 0) return std::nullopt;
    std::string value = line.substr(b + prefix.size());
    const std::size_t vb = value.find_first_not_of(" \t");
    const std::size_t ve = value.find_last_not_of(" \t\r");
    if (vb == std::string::npos) throw FileFormatError("empty mode: line");
    return Semantics::parse(value.substr(vb, ve - vb + 1));
  }
  return std::nullopt;
}

// One binding per line: "x = 3/2", "y = err". '#' comments allowed.
inline Env parse_env_text(const std::string& text, const Semantics& sem) {
  std::map<std::string, RealE> bindings;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.rfind("mode:", 0) == 0) continue;  // handled by declared_mode
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FileFormatError("env line " + std::to_string(lineno) + ": expected 'name = value'");
    std::string name = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    name.erase(name.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (name.empty() || value.empty())
      throw FileFormatError("env line " + std::to_string(lineno) + ": expected 'name = value'");
    bindings[name] = RealE::parse(value);
  }
  if (sem.mode == Mode::Real) return Env::real(std::move(bindings));
  std::map<std::string, FloatE> fb;
  for (const auto& [k, v] : bindings) fb[k] = float_binding(sem.fmt, v, k);
  return Env::floating(std::move(fb));
}

// One environment per line, bindings separated by commas:
//   x = 0, y = 1/2
inline std::vector<Env> parse_universe_text(const std::string& text, const Semantics& sem) {
  std::vector<Env> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line.compare(b, 5, "mode:") == 0) continue;  // handled by declared_mode
    std::string unfolded = line;
    for (char& c : unfolded)
      if (c == ',') c = '\n';
    out.push_back(parse_env_text(unfolded, sem));
  }
  return out;
}

}  // namespace wpwb
