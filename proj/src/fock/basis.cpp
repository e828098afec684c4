#include "mwo/fock/basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "mwo/error.hpp"

namespace mwo::fock {

ModeSet::ModeSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw PreconditionError("mode set needs at least one mode");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw PreconditionError("mode labels must be non-empty");
    if (!seen.insert(l).second) throw PreconditionError("duplicate mode label '" + l + "'");
  }
}

std::size_t ModeSet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw PreconditionError("unknown mode '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

bool ModeSet::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

long long ChargeRule::evaluate(std::span<const int> occupation) const {
  long long sum = 0;
  for (std::size_t i = 0; i < coefficients.size() && i < occupation.size(); ++i)
    sum += static_cast<long long>(coefficients[i]) * occupation[i];
  return sum;
}

bool ChargeRule::admits(std::span<const int> occupation) const { return evaluate(occupation) == value; }

std::optional<std::size_t> FockSector::find(const Occupation& occupation) const {
  auto it = index_.find(occupation);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FockSector::satisfies_rules(std::span<const int> occupation) const {
  return std::all_of(rules_.begin(), rules_.end(), [&](const ChargeRule& r) { return r.admits(occupation); });
}

namespace {

constexpr long long kUnbounded = std::numeric_limits<long long>::max();

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Tightens per-mode upper bounds until no rule can improve any of them.
// Returns false if some bound becomes negative (no admissible tuple).
bool propagate_bounds(const std::vector<ChargeRule>& rules, std::vector<long long>& ub) {
  const std::size_t modes = ub.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : rules) {
      for (std::size_t j = 0; j < modes; ++j) {
        const long long cj = rule.coefficients[j];
        if (cj == 0) continue;
        // Range of the remaining terms given current bounds.
        bool min_finite = true, max_finite = true;
        long long rest_min = 0, rest_max = 0;
        for (std::size_t i = 0; i < modes; ++i) {
          if (i == j) continue;
          const long long ci = rule.coefficients[i];
          if (ci > 0) {
            if (ub[i] == kUnbounded) max_finite = false;
            else rest_max += ci * ub[i];
          } else if (ci < 0) {
            if (ub[i] == kUnbounded) min_finite = false;
            else rest_min += ci * ub[i];
          }
        }
        long long bound = kUnbounded;
        if (cj > 0 && min_finite) bound = floor_div(rule.value - rest_min, cj);
        if (cj < 0 && max_finite) bound = floor_div(rule.value - rest_max, cj);
        if (bound < ub[j]) {
          if (bound < 0) return false;
          ub[j] = bound;
          changed = true;
        }
      }
    }
  }
  return true;
}

}  // namespace

FockSector enumerate_sector(const ModeSet& modes, std::vector<ChargeRule> rules,
                            std::optional<int> max_occupation) {
  const std::size_t m = modes.size();
  for (const auto& r : rules) {
    if (r.coefficients.size() != m)
      throw PreconditionError("charge rule has " + std::to_string(r.coefficients.size()) +
                              " coefficients for " + std::to_string(m) + " modes");
  }
  if (max_occupation && *max_occupation < 0) throw PreconditionError("max_occupation must be >= 0");

  FockSector sector(modes, rules, max_occupation);

  std::vector<long long> ub(m, max_occupation ? *max_occupation : kUnbounded);
  for (const auto& r : rules) {
    const bool trivial = std::all_of(r.coefficients.begin(), r.coefficients.end(), [](int c) { return c == 0; });
    if (trivial && r.value != 0) throw PreconditionError("empty sector: contradictory charge rule 0 = " + std::to_string(r.value));
  }
  if (!propagate_bounds(rules, ub)) throw PreconditionError("empty sector: charge rules admit no occupation tuple");
  for (std::size_t i = 0; i < m; ++i) {
    if (ub[i] == kUnbounded) throw PreconditionError("sector not finite: mode '" + modes.label(i) + "' is unbounded");
  }

  // For each mode, rules whose last non-zero coefficient sits at that mode
  // fix its occupation once all earlier modes are assigned.
  std::vector<std::vector<std::size_t>> closing(m);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (std::size_t j = m; j-- > 0;) {
      if (rules[r].coefficients[j] != 0) {
        closing[j].push_back(r);
        break;
      }
    }
  }

  Occupation occ(m, 0);
  std::vector<long long> partial(rules.size(), 0);

  auto assign = [&](std::size_t depth, int value) {
    occ[depth] = value;
    for (std::size_t r = 0; r < rules.size(); ++r) partial[r] += static_cast<long long>(rules[r].coefficients[depth]) * value;
  };
  auto unassign = [&](std::size_t depth) {
    for (std::size_t r = 0; r < rules.size(); ++r)
      partial[r] -= static_cast<long long>(rules[r].coefficients[depth]) * occ[depth];
    occ[depth] = 0;
  };

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == m) {
      sector.index_.emplace(occ, sector.states_.size());
      sector.states_.push_back(occ);
      return;
    }
    if (!closing[depth].empty()) {
      const auto& first = rules[closing[depth].front()];
      const long long c = first.coefficients[depth];
      const long long residual = first.value - partial[closing[depth].front()];
      if (residual % c != 0) return;
      const long long v = residual / c;
      if (v < 0 || v > ub[depth]) return;
      assign(depth, static_cast<int>(v));
      const bool ok = std::all_of(closing[depth].begin(), closing[depth].end(),
                                  [&](std::size_t r) { return partial[r] == rules[r].value; });
      if (ok) self(self, depth + 1);
      unassign(depth);
      return;
    }
    for (long long v = 0; v <= ub[depth]; ++v) {
      assign(depth, static_cast<int>(v));
      self(self, depth + 1);
      unassign(depth);
    }
  };
  recurse(recurse, 0);

  if (sector.states_.empty()) throw PreconditionError("empty sector: charge rules admit no occupation tuple");
  return sector;
}

}  // namespace mwo::fock
