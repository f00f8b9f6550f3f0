// Deterministic sampling utilities. The generator is a plain splitmix64 so
// a seed reproduces byte-identical runs on every platform; distribution
// quality beyond that is irrelevant here.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wpwb/ast.hpp"
#include "wpwb/continuation.hpp"
#include "wpwb/env.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool chance(int num, int den) { return below(den) < static_cast<std::uint64_t>(num); }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  Rng fork() { return Rng(next()); }

 private:
  std::uint64_t state_;
};

// The nine-point grid programs and environments draw their constants from.
inline const std::vector<Rat>& value_grid() {
  static const std::vector<Rat> grid = {
      Rat(-2), Rat(BigInt(-3), BigInt(2)), Rat(-1), Rat(BigInt(-1), BigInt(2)),
      Rat(0),  Rat(BigInt(1), BigInt(2)),  Rat(1),  Rat(BigInt(3), BigInt(2)),
      Rat(2)};
  return grid;
}

// Non-negative scalars for homogeneity checks; zero included on purpose.
inline const std::vector<Rat>& alpha_grid() {
  static const std::vector<Rat> grid = {
      Rat(0), Rat(1), Rat(2), Rat(BigInt(1), BigInt(2)), Rat(BigInt(3), BigInt(2)),
      Rat(BigInt(1), BigInt(3)), Rat(7)};
  return grid;
}

inline Env sample_real_env(Rng& rng, const std::vector<std::string>& vars,
                           bool allow_err = false) {
  std::map<std::string, RealE> bindings;
  for (const auto& v : vars) {
    if (allow_err && rng.chance(1, 8))
      bindings[v] = RealE::error();
    else
      bindings[v] = RealE(rng.pick(value_grid()));
  }
  return Env::real(std::move(bindings));
}

// Mode-aware sampling; grid values are representable in any format with
// p >= 2, emin <= -1, emax >= 1, so float environments bind them exactly.
inline Env sample_env(Rng& rng, const std::vector<std::string>& vars,
                      const Semantics& sem, bool allow_err = false) {
  Env base = sample_real_env(rng, vars, allow_err);
  if (sem.mode == Mode::Real) return base;
  std::map<std::string, FloatE> fb;
  for (const auto& v : vars) {
    const RealE& r = base.real_at(v);
    fb[v] = r.is_err() ? FloatE::error() : FloatE::from_rat(r.rat());
  }
  return Env::floating(std::move(fb));
}

inline ExprPtr sample_expr(Rng& rng, const std::vector<std::string>& vars, int depth,
                           bool allow_div) {
  if (depth <= 0 || rng.chance(2, 5)) {
    if (!vars.empty() && rng.chance(1, 2)) return expr_var(rng.pick(vars));
    return expr_lit(rng.pick(value_grid()));
  }
  switch (rng.below(allow_div ? 5 : 4)) {
    case 0: return expr_bin(Expr::Kind::Add, sample_expr(rng, vars, depth - 1, allow_div),
                            sample_expr(rng, vars, depth - 1, allow_div));
    case 1: return expr_bin(Expr::Kind::Sub, sample_expr(rng, vars, depth - 1, allow_div),
                            sample_expr(rng, vars, depth - 1, allow_div));
    case 2: return expr_bin(Expr::Kind::Mul, sample_expr(rng, vars, depth - 1, allow_div),
                            sample_expr(rng, vars, depth - 1, allow_div));
    case 3: return expr_neg(sample_expr(rng, vars, depth - 1, allow_div));
    default: return expr_bin(Expr::Kind::Div, sample_expr(rng, vars, depth - 1, allow_div),
                             sample_expr(rng, vars, depth - 1, allow_div));
  }
}

inline TestPtr sample_test(Rng& rng, const std::vector<std::string>& vars, int depth,
                           bool allow_div) {
  if (depth > 0 && rng.chance(1, 5))
    return test_not(sample_test(rng, vars, depth - 1, allow_div));
  static const std::vector<Test::Kind> kinds = {Test::Kind::Le, Test::Kind::Lt,
                                                Test::Kind::Eq, Test::Kind::Ne};
  return test_cmp(rng.pick(kinds), sample_expr(rng, vars, depth, allow_div),
                  sample_expr(rng, vars, depth, allow_div));
}

// Random ExtNonNeg continuations: expression values, indicators, finite
// tables over sampled environments, and non-negative combinations thereof.
inline ExtCont sample_kappa(Rng& rng, const std::vector<std::string>& vars,
                            const Semantics& sem, int depth = 2) {
  switch (rng.below(depth > 0 ? 5 : 3)) {
    case 0:
      return expr_continuation(sample_expr(rng, vars, 2, false), sem);
    case 1:
      return ExtCont::indicator(sample_test(rng, vars, 1, false), sem);
    case 2: {
      std::map<Env, ExtRat> entries;
      const int n = 1 + static_cast<int>(rng.below(4));
      for (int i = 0; i < n; ++i) {
        Env e = sample_env(rng, vars, sem, true);
        ExtRat v = rng.chance(1, 10) ? ExtRat::infinity()
                                     : ExtRat(rng.pick(alpha_grid()));
        entries.emplace(std::move(e), std::move(v));
      }
      ExtRat fallback = ExtRat(rng.pick(alpha_grid()));
      return ExtCont::table(std::move(entries), std::move(fallback));
    }
    case 3:
      return kappa_add(sample_kappa(rng, vars, sem, depth - 1),
                       sample_kappa(rng, vars, sem, depth - 1));
    default:
      return kappa_scale(rng.pick(alpha_grid()),
                         sample_kappa(rng, vars, sem, depth - 1));
  }
}

}  // namespace wpwb
