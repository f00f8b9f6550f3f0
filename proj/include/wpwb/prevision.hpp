// Parametric previsions: total transformers on non-negative continuations,
// with sampling-based law checking. Arithmetic is exact, so a reported
// violation is a genuine counterexample; a clean pass is evidence over the
// drawn samples, not a proof.
//
// Laws: positive homogeneity F(a*k) = a*F(k); monotonicity; the upper law
// F(k1+k2) <= F(k1)+F(k2) and its lower/linear variants; and chain
// continuity over explicitly constructed ascending chains.
#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wpwb/answer.hpp"
#include "wpwb/continuation.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/sampling.hpp"
#include "wpwb/wp.hpp"

namespace wpwb {

class ParametricPrevision {
 public:
  using Fn = std::function<ExtCont(const ExtCont&)>;

  ParametricPrevision() : fn_([](const ExtCont& k) { return k; }), provenance_("identity") {}

  static ParametricPrevision of_fn(Fn fn, std::string provenance) {
    ParametricPrevision f;
    f.fn_ = std::move(fn);
    f.provenance_ = std::move(provenance);
    return f;
  }

  static ParametricPrevision identity() { return ParametricPrevision(); }

  static ParametricPrevision of_wp(InstrPtr instr, WpConfig cfg,
                                   std::string provenance = "wp-of-program") {
    // Shared across every application of F: loop discovery caches and the
    // fixpoint tracker survive between continuations.
    if (!cfg.tracker) cfg.tracker = std::make_shared<FixTracker>();
    if (!cfg.caches) cfg.caches = std::make_shared<detail::WpCaches>();
    return of_fn(
        [instr = std::move(instr), cfg = std::move(cfg)](const ExtCont& k) {
          return wp<ExtNonNegDomain>(instr, k, cfg);
        },
        std::move(provenance));
  }

  static ParametricPrevision of_wp(const Program& p, WpConfig cfg,
                                   std::string provenance = "wp-of-program") {
    return of_wp(p.root, std::move(cfg), std::move(provenance));
  }

  ExtCont operator()(const ExtCont& k) const { return fn_(k); }
  const std::string& provenance() const { return provenance_; }

 private:
  Fn fn_;
  std::string provenance_;
};

inline ParametricPrevision compose(const ParametricPrevision& f, const ParametricPrevision& g) {
  return ParametricPrevision::of_fn([f, g](const ExtCont& k) { return f(g(k)); },
                                    "composed(" + f.provenance() + ", " + g.provenance() + ")");
}

inline ParametricPrevision sup2(const ParametricPrevision& f, const ParametricPrevision& g) {
  return ParametricPrevision::of_fn(
      [f, g](const ExtCont& k) { return kappa_join(f(k), g(k)); },
      "sup-of(" + f.provenance() + ", " + g.provenance() + ")");
}

// The classical prevision obtained by fixing the state parameter.
class ClassicalPrevision {
 public:
  ClassicalPrevision(ParametricPrevision f, Env rho) : f_(std::move(f)), rho_(std::move(rho)) {}
  ExtRat operator()(const ExtCont& k) const { return f_(k)(rho_); }
  const Env& state() const { return rho_; }

 private:
  ParametricPrevision f_;
  Env rho_;
};

inline ClassicalPrevision fix_at(const ParametricPrevision& f, const Env& rho) {
  return ClassicalPrevision(f, rho);
}

// --- law checking -----------------------------------------------------------

struct SamplePlan {
  std::uint64_t seed = 1;
  int samples_per_law = 50;
  int chain_length = 6;
  std::vector<std::string> vars;
  Semantics sem = Semantics::real();
  bool envs_with_err = true;
};

struct LawViolation {
  std::string description;
  std::function<bool()> replay;  // re-evaluates to true while still violated
};

struct LawVerdict {
  std::string law;
  long checked = 0;
  std::vector<LawViolation> violations;

  bool holds() const { return violations.empty(); }
};

struct LawReport {
  std::vector<LawVerdict> verdicts;

  const LawVerdict& verdict(const std::string& law) const {
    for (const auto& v : verdicts)
      if (v.law == law) return v;
    throw Error("no verdict for law '" + law + "'");
  }

  // The laws the wp theorem promises; linear/lower are classifications.
  bool theorem_holds() const {
    return verdict("homogeneity").holds() && verdict("monotonicity").holds() &&
           verdict("upper").holds() && verdict("chain-continuity").holds();
  }

  std::string summary() const {
    std::ostringstream os;
    for (const auto& v : verdicts) {
      os << v.law << ": " << (v.holds() ? "holds" : "FALSIFIED") << " (" << v.checked
         << " samples";
      if (!v.holds()) os << ", " << v.violations.size() << " counterexamples";
      os << ")\n";
      if (!v.holds()) os << "  e.g. " << v.violations.front().description << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline std::string law_case(const std::string& what, const Env& rho, const ExtRat& lhs,
                            const ExtRat& rhs) {
  return what + " at [" + rho.to_string() + "]: lhs=" + lhs.to_string() +
         " rhs=" + rhs.to_string();
}

}  // namespace detail

inline LawReport check_laws(const ParametricPrevision& F, const SamplePlan& plan) {
  Rng rng(plan.seed);
  LawVerdict homogeneity{"homogeneity", 0, {}};
  LawVerdict monotonicity{"monotonicity", 0, {}};
  LawVerdict upper{"upper", 0, {}};
  LawVerdict lower{"lower", 0, {}};
  LawVerdict linear{"linear", 0, {}};
  LawVerdict chain{"chain-continuity", 0, {}};

  for (int s = 0; s < plan.samples_per_law; ++s) {
    const ExtCont k1 = sample_kappa(rng, plan.vars, plan.sem);
    const ExtCont k2 = sample_kappa(rng, plan.vars, plan.sem);
    const Rat alpha = rng.pick(alpha_grid());
    const Env rho = sample_env(rng, plan.vars, plan.sem, plan.envs_with_err);

    // Homogeneity: F(alpha*k) = alpha*F(k), exact.
    {
      const ExtRat lhs = F(kappa_scale(alpha, k1))(rho);
      const ExtRat rhs = scale(alpha, F(k1)(rho));
      ++homogeneity.checked;
      if (!(lhs == rhs))
        homogeneity.violations.push_back(LawViolation{
            detail::law_case("F(" + alpha.to_string() + "*k) vs scaled, k=" + k1.desc(), rho,
                             lhs, rhs),
            [F, k1, alpha, rho] {
              return !(F(kappa_scale(alpha, k1))(rho) == scale(alpha, F(k1)(rho)));
            }});
    }

    // Monotonicity: k1 <= k1 + k2 pointwise, so F must preserve it.
    {
      const ExtCont bigger = kappa_add(k1, k2);
      const ExtRat lo = F(k1)(rho);
      const ExtRat hi = F(bigger)(rho);
      ++monotonicity.checked;
      if (!(lo <= hi))
        monotonicity.violations.push_back(LawViolation{
            detail::law_case("F(k1) <= F(k1+k2)", rho, lo, hi),
            [F, k1, bigger, rho] { return !(F(k1)(rho) <= F(bigger)(rho)); }});
    }

    // Sub/super/exact additivity.
    {
      const ExtRat joint = F(kappa_add(k1, k2))(rho);
      const ExtRat split = F(k1)(rho) + F(k2)(rho);
      ++upper.checked;
      ++lower.checked;
      ++linear.checked;
      const std::string pair_desc = ", k1=" + k1.desc() + ", k2=" + k2.desc();
      if (!(joint <= split))
        upper.violations.push_back(
            LawViolation{detail::law_case("F(k1+k2) <= F(k1)+F(k2)" + pair_desc, rho, joint, split),
                         [F, k1, k2, rho] {
                           return !(F(kappa_add(k1, k2))(rho) <= F(k1)(rho) + F(k2)(rho));
                         }});
      if (!(joint >= split))
        lower.violations.push_back(
            LawViolation{detail::law_case("F(k1+k2) >= F(k1)+F(k2)" + pair_desc, rho, joint, split),
                         [F, k1, k2, rho] {
                           return !(F(kappa_add(k1, k2))(rho) >= F(k1)(rho) + F(k2)(rho));
                         }});
      if (!(joint == split))
        linear.violations.push_back(
            LawViolation{detail::law_case("F(k1+k2) == F(k1)+F(k2)" + pair_desc, rho, joint, split),
                         [F, k1, k2, rho] {
                           return !(F(kappa_add(k1, k2))(rho) == F(k1)(rho) + F(k2)(rho));
                         }});
    }

    // Chain continuity over kappa_n = (1 - 2^-n) * k: the iterates must
    // ascend, and by homogeneity each F(kappa_n) pins the limit value
    // exactly, so the supremum is checked against F(k) in closed form.
    {
      ++chain.checked;
      bool ok = true;
      std::string why;
      const ExtRat limit = F(k1)(rho);
      ExtRat prev = ExtRat(Rat(0));
      for (int n = 0; n <= plan.chain_length && ok; ++n) {
        const Rat factor = Rat(1) - Rat(BigInt(1), BigInt(1) << n);
        const ExtRat vn = F(kappa_scale(factor, k1))(rho);
        if (!(prev <= vn)) {
          ok = false;
          why = "chain not ascending at n=" + std::to_string(n);
        }
        if (!(vn <= limit)) {
          ok = false;
          why = "chain exceeds its limit at n=" + std::to_string(n);
        }
        if (ok && !(vn == scale(factor, limit))) {
          ok = false;
          why = "F((1-2^-n)k) differs from (1-2^-n)F(k) at n=" + std::to_string(n);
        }
        prev = vn;
      }
      if (!ok)
        chain.violations.push_back(LawViolation{
            detail::law_case(why, rho, prev, limit), [] { return true; }});
    }
  }

  LawReport report;
  report.verdicts = {homogeneity, monotonicity, upper, lower, linear, chain};
  return report;
}

}  // namespace wpwb
