#include "mwo/fock/operator_expression.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mwo::fock {

OperatorExpression OperatorExpression::adjoint() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term a{std::conj(t.coefficient), {}};
    a.factors.reserve(t.factors.size());
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
      a.factors.push_back({it->mode, it->kind == Ladder::raise ? Ladder::lower : Ladder::raise});
    out.push_back(std::move(a));
  }
  return OperatorExpression(std::move(out));
}

OperatorExpression& OperatorExpression::operator+=(const OperatorExpression& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this;
}

OperatorExpression& OperatorExpression::operator-=(const OperatorExpression& rhs) {
  for (const auto& t : rhs.terms_) terms_.push_back({-t.coefficient, t.factors});
  return *this;
}

OperatorExpression& OperatorExpression::operator*=(Complex scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  return *this;
}

OperatorExpression operator*(const OperatorExpression& lhs, const OperatorExpression& rhs) {
  std::vector<Term> out;
  out.reserve(lhs.terms_.size() * rhs.terms_.size());
  for (const auto& a : lhs.terms_) {
    for (const auto& b : rhs.terms_) {
      Term t{a.coefficient * b.coefficient, a.factors};
      t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
      out.push_back(std::move(t));
    }
  }
  return OperatorExpression(std::move(out));
}

OperatorExpression identity(Complex coefficient) { return OperatorExpression({Term{coefficient, {}}}); }
OperatorExpression raise(const std::string& mode) { return OperatorExpression({Term{{1.0, 0.0}, {{mode, Ladder::raise}}}}); }
OperatorExpression lower(const std::string& mode) { return OperatorExpression({Term{{1.0, 0.0}, {{mode, Ladder::lower}}}}); }
OperatorExpression number(const std::string& mode) { return raise(mode) * lower(mode); }

OperatorExpression commutator(const OperatorExpression& a, const OperatorExpression& b) { return a * b - b * a; }

bool is_normal_ordered(const Term& term) {
  bool seen_lower = false;
  for (const auto& f : term.factors) {
    if (f.kind == Ladder::lower) seen_lower = true;
    else if (seen_lower) return false;
  }
  return true;
}

namespace {

// Raises sort before lowers; within each block by mode label.
bool factor_order(const Factor& a, const Factor& b) {
  if (a.kind != b.kind) return a.kind == Ladder::raise;
  return a.mode < b.mode;
}

}  // namespace

OperatorExpression canonicalize(const OperatorExpression& expr) {
  std::map<std::vector<Factor>, Complex> accumulated;
  std::vector<Term> work(expr.terms().begin(), expr.terms().end());

  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (t.coefficient == Complex{}) continue;

    std::size_t swap_at = t.factors.size();
    for (std::size_t i = 0; i + 1 < t.factors.size(); ++i) {
      if (t.factors[i].kind == Ladder::lower && t.factors[i + 1].kind == Ladder::raise) {
        swap_at = i;
        break;
      }
    }
    if (swap_at == t.factors.size()) {
      std::stable_sort(t.factors.begin(), t.factors.end(), factor_order);
      accumulated[t.factors] += t.coefficient;
      continue;
    }
    // a_i a_j^+ = a_j^+ a_i + delta_ij
    if (t.factors[swap_at].mode == t.factors[swap_at + 1].mode) {
      Term contracted{t.coefficient, {}};
      contracted.factors.reserve(t.factors.size() - 2);
      for (std::size_t i = 0; i < t.factors.size(); ++i)
        if (i != swap_at && i != swap_at + 1) contracted.factors.push_back(t.factors[i]);
      work.push_back(std::move(contracted));
    }
    std::swap(t.factors[swap_at], t.factors[swap_at + 1]);
    work.push_back(std::move(t));
  }

  std::vector<Term> out;
  for (auto& [factors, c] : accumulated) {
    if (c == Complex{}) continue;
    out.push_back({c, factors});
  }
  return OperatorExpression(std::move(out));
}

std::string to_string(const Term& term) {
  std::ostringstream os;
  os << "(" << term.coefficient.real();
  if (term.coefficient.imag() != 0.0) os << (term.coefficient.imag() < 0 ? "-" : "+") << std::abs(term.coefficient.imag()) << "i";
  os << ")";
  for (const auto& f : term.factors) os << " " << f.mode << (f.kind == Ladder::raise ? "^+" : "");
  return os.str();
}

std::string to_string(const OperatorExpression& expr) {
  if (expr.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < expr.terms().size(); ++i) {
    if (i) out += " + ";
    out += to_string(expr.terms()[i]);
  }
  return out;
}

}  // namespace mwo::fock
