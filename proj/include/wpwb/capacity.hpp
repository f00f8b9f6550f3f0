// Finite outcome spaces, capacities over them, and Choquet integration.
//
// A capacity is a set function with nu(empty) = 0 and nu >= 0, stored as an
// explicit table over all subsets. Probability weights give additive
// capacities; non-negative Moebius masses give belief functions (convex by
// construction) and their duals give plausibilities (concave). The Choquet
// integral of a non-negative function is the descending-level-set sum
//   sum_i (a_i - a_{i+1}) * nu({f >= a_i}),
// which on finite spaces coincides with the step-function supremum.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wpwb/answer.hpp"
#include "wpwb/continuation.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/rational.hpp"

namespace wpwb {

using SubsetMask = std::uint32_t;

struct OutcomeSpace {
  std::vector<std::string> vars;               // the input-affected variables
  std::vector<std::vector<RealE>> outcomes;    // each row: one value per var

  std::size_t size() const { return outcomes.size(); }

  void validate() const {
    if (vars.empty()) throw Error("outcome space: no variables");
    if (outcomes.empty()) throw Error("outcome space: no outcomes");
    for (const auto& row : outcomes)
      if (row.size() != vars.size())
        throw Error("outcome space: outcome arity mismatch");
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      for (std::size_t j = i + 1; j < outcomes.size(); ++j)
        if (outcomes[i] == outcomes[j])
          throw Error("outcome space: duplicate outcome");
  }

  // rho with the affected variables overwritten by outcome i; everything
  // else (rho_0 in the extension formula) is untouched.
  Env apply(const Env& rho, std::size_t i, const Semantics& sem) const {
    Env out = rho;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (sem.mode == Mode::Real)
        out = out.with_real(vars[k], outcomes[i][k]);
      else
        out = out.with_float(vars[k], float_binding(sem.fmt, outcomes[i][k], vars[k]));
    }
    return out;
  }

  std::string outcome_string(std::size_t i) const {
    std::string s;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (k) s += ", ";
      s += vars[k] + "=" + outcomes[i][k].to_string();
    }
    return s;
  }
};

struct CapacityFlags {
  bool monotone = false;
  bool convex = false;
  bool concave = false;
  bool normalized = false;

  std::string to_string() const {
    std::string s;
    auto add = [&](const char* name, bool v) {
      if (!s.empty()) s += ", ";
      s += std::string(name) + "=" + (v ? "yes" : "no");
    };
    add("monotone", monotone);
    add("convex", convex);
    add("concave", concave);
    add("normalized", normalized);
    return s;
  }
};

class Capacity {
 public:
  static constexpr std::size_t kMaxTable = 20;      // 2^20 subset entries
  static constexpr std::size_t kMaxPairCheck = 12;  // exhaustive pair checks

  static Capacity from_table(std::shared_ptr<const OutcomeSpace> space,
                             std::vector<Rat> table) {
    Capacity c(std::move(space));
    if (table.size() != (std::size_t(1) << c.n()))
      throw Error("capacity table: wrong number of subsets");
    if (!table[0].is_zero()) throw Error("capacity: nu(empty) must be 0");
    for (const Rat& v : table)
      if (v.is_negative()) throw Error("capacity: nu must be non-negative");
    c.table_ = std::move(table);
    return c;
  }

  static Capacity probability(std::shared_ptr<const OutcomeSpace> space,
                              std::vector<Rat> weights) {
    Capacity c(std::move(space));
    if (weights.size() != c.n()) throw Error("probability: one weight per outcome");
    for (const Rat& w : weights)
      if (w.is_negative()) throw Error("probability: negative weight");
    const std::size_t subsets = std::size_t(1) << c.n();
    c.table_.assign(subsets, Rat(0));
    for (SubsetMask m = 1; m < subsets; ++m) {
      Rat sum(0);
      for (std::size_t i = 0; i < c.n(); ++i)
        if (m & (SubsetMask(1) << i)) sum += weights[i];
      c.table_[m] = sum;
    }
    c.monotone_ = true;
    c.convex_ = true;   // additivity gives equality in both inequalities
    c.concave_ = true;
    return c;
  }

  // Belief function from non-negative Moebius masses on non-empty subsets:
  // nu(A) = sum of m(B) over non-empty B contained in A. Total monotonicity
  // makes this convex without any pair check.
  static Capacity belief(std::shared_ptr<const OutcomeSpace> space,
                         const std::map<SubsetMask, Rat>& masses) {
    Capacity c(std::move(space));
    const std::size_t subsets = std::size_t(1) << c.n();
    for (const auto& [mask, m] : masses) {
      if (mask == 0) throw Error("belief: mass on the empty set");
      if (mask >= subsets) throw Error("belief: mask out of range");
      if (m.is_negative()) throw Error("belief: negative mass");
    }
    c.table_.assign(subsets, Rat(0));
    for (SubsetMask a = 1; a < subsets; ++a) {
      Rat sum(0);
      for (const auto& [mask, m] : masses)
        if ((mask & a) == mask) sum += m;
      c.table_[a] = sum;
    }
    c.monotone_ = true;
    c.convex_ = true;
    return c;
  }

  // Plausibility: the dual pl(A) = b(Omega) - b(Omega \ A) of the belief
  // with the same masses; concave where the belief is convex.
  static Capacity plausibility(std::shared_ptr<const OutcomeSpace> space,
                               const std::map<SubsetMask, Rat>& masses) {
    Capacity b = belief(space, masses);
    return dual(b);
  }

  static Capacity dual(const Capacity& c) {
    Capacity d(c.space_);
    const std::size_t subsets = std::size_t(1) << c.n();
    const SubsetMask full = static_cast<SubsetMask>(subsets - 1);
    d.table_.assign(subsets, Rat(0));
    for (SubsetMask a = 0; a < subsets; ++a) {
      d.table_[a] = c.table_[full] - c.table_[full & ~a];
      if (d.table_[a].is_negative())
        throw Error("dual: capacity is not monotone enough to dualize");
    }
    if (c.monotone_ == true) d.monotone_ = true;
    if (c.convex_ == true) d.concave_ = true;
    if (c.concave_ == true) d.convex_ = true;
    return d;
  }

  const OutcomeSpace& space() const { return *space_; }
  std::shared_ptr<const OutcomeSpace> space_ptr() const { return space_; }
  std::size_t n() const { return space_->size(); }
  SubsetMask full_mask() const {
    return static_cast<SubsetMask>((std::size_t(1) << n()) - 1);
  }

  const Rat& at(SubsetMask subset) const {
    if (subset >= table_.size()) throw Error("capacity: subset out of range");
    return table_[subset];
  }
  const Rat& total() const { return table_.back(); }

  bool is_monotone() const {
    if (monotone_.has_value()) return *monotone_;
    classify_cached();
    return *monotone_;
  }

  CapacityFlags classify() const {
    classify_cached();
    return CapacityFlags{*monotone_, *convex_, *concave_, total() == Rat(1)};
  }

 private:
  explicit Capacity(std::shared_ptr<const OutcomeSpace> space) : space_(std::move(space)) {
    space_->validate();
    if (n() > kMaxTable)
      throw SpaceTooLarge(std::to_string(n()) + " outcomes (table cap " +
                          std::to_string(kMaxTable) + ")");
  }

  void classify_cached() const {
    if (monotone_ && convex_ && concave_) return;
    if (n() > kMaxPairCheck)
      throw SpaceTooLarge(std::to_string(n()) + " outcomes (pair-check cap " +
                          std::to_string(kMaxPairCheck) + ")");
    const std::size_t subsets = std::size_t(1) << n();
    if (!monotone_) {
      bool mono = true;
      for (SubsetMask a = 0; a < subsets && mono; ++a)
        for (std::size_t i = 0; i < n() && mono; ++i)
          if (!(a & (SubsetMask(1) << i)) &&
              table_[a] > table_[a | (SubsetMask(1) << i)])
            mono = false;
      monotone_ = mono;
    }
    if (!convex_ || !concave_) {
      bool cvx = true, ccv = true;
      for (SubsetMask a = 0; a < subsets && (cvx || ccv); ++a) {
        for (SubsetMask b = a; b < subsets; ++b) {
          const Rat lhs = table_[a | b] + table_[a & b];
          const Rat rhs = table_[a] + table_[b];
          if (lhs < rhs) cvx = false;
          if (lhs > rhs) ccv = false;
          if (!cvx && !ccv) break;
        }
      }
      if (!convex_) convex_ = cvx;
      if (!concave_) concave_ = ccv;
    }
  }

  std::shared_ptr<const OutcomeSpace> space_;
  std::vector<Rat> table_;
  mutable std::optional<bool> monotone_, convex_, concave_;
};

// Choquet integral of a non-negative function given per outcome. Values may
// be +inf: that part contributes inf * nu({f = inf}), with 0 * inf = 0.
inline ExtRat choquet(const std::vector<ExtRat>& f, const Capacity& nu) {
  if (f.size() != nu.n()) throw Error("choquet: one value per outcome");
  if (!nu.is_monotone()) throw NonMonotoneCapacity();
  SubsetMask inf_mask = 0;
  std::vector<Rat> finite;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].is_infinite())
      inf_mask |= SubsetMask(1) << i;
    else
      finite.push_back(f[i].rat());
  }
  if (inf_mask != 0 && !nu.at(inf_mask).is_zero()) return ExtRat::infinity();
  std::sort(finite.begin(), finite.end(), [](const Rat& a, const Rat& b) { return a > b; });
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
  Rat sum(0);
  for (std::size_t i = 0; i < finite.size(); ++i) {
    const Rat& level = finite[i];
    const Rat next = i + 1 < finite.size() ? finite[i + 1] : Rat(0);
    if (level == next) continue;
    SubsetMask mask = inf_mask;
    for (std::size_t k = 0; k < f.size(); ++k)
      if (!f[k].is_infinite() && f[k].rat() >= level) mask |= SubsetMask(1) << k;
    sum += (level - next) * nu.at(mask);
  }
  return ExtRat(sum);
}

inline Rat choquet(const std::vector<Rat>& f, const Capacity& nu) {
  std::vector<ExtRat> lifted;
  lifted.reserve(f.size());
  for (const Rat& v : f) lifted.emplace_back(v);
  return choquet(lifted, nu).rat();
}

// The extension of nu to sets of whole environments: a set C of envs is
// measured by the outcomes whose merge over the fixed rest of rho lands in
// C. Evaluated on finitely-describable C given as a predicate.
class ExtendedCapacity {
 public:
  ExtendedCapacity(const Capacity& nu, Env rho, Semantics sem)
      : nu_(nu), rho_(std::move(rho)), sem_(sem) {}

  Rat operator()(const std::function<bool(const Env&)>& member) const {
    SubsetMask mask = 0;
    for (std::size_t i = 0; i < nu_.n(); ++i)
      if (member(nu_.space().apply(rho_, i, sem_))) mask |= SubsetMask(1) << i;
    return nu_.at(mask);
  }

 private:
  const Capacity& nu_;
  Env rho_;
  Semantics sem_;
};

inline ExtendedCapacity extend_capacity(const Capacity& nu, const Env& rho,
                                        const Semantics& sem) {
  return ExtendedCapacity(nu, rho, sem);
}

// Per-site noise models for `input` instructions, keyed by label.
class InputModel {
 public:
  void set_site(int label, Capacity nu) { sites_.insert_or_assign(label, std::move(nu)); }

  bool has_site(int label) const { return sites_.count(label) > 0; }

  const Capacity& site(int label) const {
    auto it = sites_.find(label);
    if (it == sites_.end()) throw NoModelForSite(label);
    return it->second;
  }

 private:
  std::map<int, Capacity> sites_;
};

// weak[input](kappa)(rho): the Choquet integral of the continuation against
// the extended capacity, collapsed over the finite outcome space.
inline ExtRat wp_input(const ExtCont& kappa, const InputModel& model, int label,
                       const std::vector<std::string>& targets, const Env& rho,
                       const Semantics& sem) {
  const Capacity& nu = model.site(label);
  if (nu.space().vars != targets)
    throw Error("input site ^" + std::to_string(label) +
                ": model variables do not match the instruction targets");
  std::vector<ExtRat> values;
  values.reserve(nu.n());
  for (std::size_t i = 0; i < nu.n(); ++i)
    values.push_back(kappa(nu.space().apply(rho, i, sem)));
  return choquet(values, nu);
}

// --- capacity files ---------------------------------------------------------
//
//   outcomes: x=0.5 | x=1.0
//   prob: 0.5 0.5
//   mass: {1}=0.3 {1,2}=0.7
//   table: {}=0 {1}=0.2 {2}=0.3 {1,2}=1
//
// Subsets use 1-based outcome indices in declaration order.

namespace detail {

inline SubsetMask parse_subset(const std::string& text, std::size_t n) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw FileFormatError("bad subset '" + text + "'");
  SubsetMask mask = 0;
  std::string inner = text.substr(1, text.size() - 2);
  std::istringstream in(inner);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const int idx = std::stoi(item.substr(b, e - b + 1));
    if (idx < 1 || static_cast<std::size_t>(idx) > n)
      throw FileFormatError("outcome index " + std::to_string(idx) + " out of range");
    mask |= SubsetMask(1) << (idx - 1);
  }
  return mask;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace detail

inline Capacity parse_capacity_text(const std::string& text) {
  std::optional<std::string> outcomes_line, body_head, body_rest;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FileFormatError("capacity line needs 'key: ...'");
    const std::string key = line.substr(0, colon);
    const std::string rest = line.substr(colon + 1);
    if (key == "outcomes") {
      outcomes_line = rest;
    } else if (key == "prob" || key == "mass" || key == "table" || key == "plaus") {
      if (body_head) throw FileFormatError("capacity file has more than one body line");
      body_head = key;
      body_rest = rest;
    } else {
      throw FileFormatError("unknown capacity key '" + key + "'");
    }
  }
  if (!outcomes_line) throw FileFormatError("capacity file needs an outcomes line");
  if (!body_head) throw FileFormatError("capacity file needs prob:, mass:, plaus: or table:");

  auto space = std::make_shared<OutcomeSpace>();
  {
    std::istringstream parts(*outcomes_line);
    std::string part;
    bool first = true;
    while (std::getline(parts, part, '|')) {
      std::string unfolded = part;
      for (char& c : unfolded)
        if (c == ',') c = '\n';
      const Env e = parse_env_text(unfolded, Semantics::real());
      const auto names = e.vars();
      if (first) {
        space->vars = names;
        first = false;
      } else if (space->vars != names) {
        throw FileFormatError("outcomes must all bind the same variables");
      }
      std::vector<RealE> row;
      for (const auto& v : space->vars) row.push_back(e.real_at(v));
      space->outcomes.push_back(std::move(row));
    }
  }
  space->validate();
  const std::size_t n = space->size();

  if (*body_head == "prob") {
    std::vector<Rat> weights;
    for (const auto& w : detail::split_ws(*body_rest)) weights.push_back(Rat::parse(w));
    return Capacity::probability(space, std::move(weights));
  }
  if (*body_head == "mass" || *body_head == "plaus") {
    std::map<SubsetMask, Rat> masses;
    for (const auto& item : detail::split_ws(*body_rest)) {
      const auto eq = item.rfind('=');
      if (eq == std::string::npos) throw FileFormatError("mass entry needs '='");
      masses[detail::parse_subset(item.substr(0, eq), n)] = Rat::parse(item.substr(eq + 1));
    }
    return *body_head == "mass" ? Capacity::belief(space, masses)
                                : Capacity::plausibility(space, masses);
  }
  std::vector<Rat> table(std::size_t(1) << n, Rat(0));
  std::vector<bool> seen(table.size(), false);
  for (const auto& item : detail::split_ws(*body_rest)) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos) throw FileFormatError("table entry needs '='");
    const SubsetMask mask = detail::parse_subset(item.substr(0, eq), n);
    table[mask] = Rat::parse(item.substr(eq + 1));
    seen[mask] = true;
  }
  for (std::size_t m = 0; m < seen.size(); ++m)
    if (!seen[m])
      throw FileFormatError("table capacity is missing a subset entry");
  return Capacity::from_table(space, std::move(table));
}

}  // namespace wpwb
