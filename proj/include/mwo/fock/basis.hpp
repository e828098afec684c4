#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mwo::fock {

using Occupation = std::vector<int>;

// Ordered set of uniquely labelled bosonic modes.
class ModeSet {
 public:
  explicit ModeSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  // Position of `label`; throws PreconditionError for unknown labels.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  bool operator==(const ModeSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

// Linear conserved charge: a tuple n is admitted iff sum_i coefficients[i] * n[i] == value.
struct ChargeRule {
  std::vector<int> coefficients;
  int value = 0;

  bool admits(std::span<const int> occupation) const;
  long long evaluate(std::span<const int> occupation) const;
};

// Occupation-number basis restricted by charge rules and, optionally, a
// per-mode occupation cap. States are stored in lexicographic order.
class FockSector {
 public:
  const ModeSet& modes() const { return modes_; }
  const std::vector<ChargeRule>& rules() const { return rules_; }
  std::optional<int> max_occupation() const { return max_occupation_; }

  std::size_t dimension() const { return states_.size(); }
  const Occupation& state(std::size_t i) const { return states_.at(i); }
  const std::vector<Occupation>& states() const { return states_; }

  std::optional<std::size_t> find(const Occupation& occupation) const;

  // True if the tuple satisfies every charge rule (ignores the cap).
  bool satisfies_rules(std::span<const int> occupation) const;

 private:
  friend FockSector enumerate_sector(const ModeSet&, std::vector<ChargeRule>, std::optional<int>);
  FockSector(ModeSet modes, std::vector<ChargeRule> rules, std::optional<int> cap)
      : modes_(std::move(modes)), rules_(std::move(rules)), max_occupation_(cap) {}

  ModeSet modes_;
  std::vector<ChargeRule> rules_;
  std::optional<int> max_occupation_;
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t> index_;
};

// Enumerates every admissible tuple with non-negative occupations.
//
// Without `max_occupation` the rules themselves must bound each mode; upper
// bounds are derived by propagating the rules to a fixed point, and a mode
// that stays unbounded raises "sector not finite". With a cap the space is a
// truncated box intersected with the rules. An empty result is an error.
FockSector enumerate_sector(const ModeSet& modes, std::vector<ChargeRule> rules,
                            std::optional<int> max_occupation = std::nullopt);

}  // namespace mwo::fock
