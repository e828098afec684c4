#pragma once

#include <complex>
#include <compare>
#include <string>
#include <vector>

namespace mwo::fock {

using Complex = std::complex<double>;

enum class Ladder { raise, lower };

struct Factor {
  std::string mode;
  Ladder kind;

  auto operator<=>(const Factor&) const = default;
};

// coefficient * f_0 f_1 ... f_{n-1}; the rightmost factor acts first.
struct Term {
  Complex coefficient{1.0, 0.0};
  std::vector<Factor> factors;
};

// Sum of products of bosonic ladder operators. Built with the free functions
// `raise`, `lower`, `number`, `identity` and ordinary arithmetic:
//
//   auto pair = 4.0 * raise("a1") * raise("am1") * lower("a01") * lower("a02");
//   auto h = pair + pair.adjoint();
class OperatorExpression {
 public:
  OperatorExpression() = default;
  explicit OperatorExpression(std::vector<Term> terms) : terms_(std::move(terms)) {}

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OperatorExpression adjoint() const;

  OperatorExpression& operator+=(const OperatorExpression& rhs);
  OperatorExpression& operator-=(const OperatorExpression& rhs);
  OperatorExpression& operator*=(Complex scale);

  friend OperatorExpression operator+(OperatorExpression lhs, const OperatorExpression& rhs) { return lhs += rhs; }
  friend OperatorExpression operator-(OperatorExpression lhs, const OperatorExpression& rhs) { return lhs -= rhs; }
  friend OperatorExpression operator*(const OperatorExpression& lhs, const OperatorExpression& rhs);
  friend OperatorExpression operator*(Complex s, OperatorExpression e) { return e *= s; }
  friend OperatorExpression operator*(OperatorExpression e, Complex s) { return e *= s; }
  friend OperatorExpression operator*(double s, OperatorExpression e) { return e *= Complex(s, 0.0); }
  friend OperatorExpression operator*(OperatorExpression e, double s) { return e *= Complex(s, 0.0); }
  friend OperatorExpression operator-(OperatorExpression e) { return e *= Complex(-1.0, 0.0); }

 private:
  std::vector<Term> terms_;
};

OperatorExpression identity(Complex coefficient = {1.0, 0.0});
OperatorExpression raise(const std::string& mode);
OperatorExpression lower(const std::string& mode);
OperatorExpression number(const std::string& mode);

// [a, b] = ab - ba
OperatorExpression commutator(const OperatorExpression& a, const OperatorExpression& b);

// Normal-ordered equivalent using [a_i, a_j^dagger] = delta_ij. Within the
// creation and annihilation blocks factors are sorted by mode label, like
// monomials are merged, exact zeros dropped, and terms sorted, so the result
// is unique and canonicalize(canonicalize(e)) == canonicalize(e).
OperatorExpression canonicalize(const OperatorExpression& expr);

bool is_normal_ordered(const Term& term);

std::string to_string(const Term& term);
std::string to_string(const OperatorExpression& expr);

}  // namespace mwo::fock
