#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "mwo/fock/dynamics.hpp"
#include "mwo/fock/operator_expression.hpp"

using namespace mwo::fock;

namespace {

bool same(const OperatorExpression& a, const OperatorExpression& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (a.terms()[i].factors != b.terms()[i].factors) return false;
    if (std::abs(a.terms()[i].coefficient - b.terms()[i].coefficient) > 1e-14) return false;
  }
  return true;
}

// Truncated single-mode annihilator on levels 0..cap.
Eigen::MatrixXcd truncated_lower(int cap) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cap + 1, cap + 1);
  for (int n = 1; n <= cap; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("single commutator: a a+ -> a+ a + 1") {
  auto c = canonicalize(lower("a") * raise("a"));
  CHECK(same(c, identity() + number("a")));
}

TEST_CASE("normal-ordered input is unchanged") {
  CHECK(same(canonicalize(number("a")), number("a")));
  CHECK(same(canonicalize(raise("a") * raise("b") * lower("a")), raise("a") * raise("b") * lower("a")));
}

TEST_CASE("a a+ a a+ -> a+a+aa + 3 a+a + 1") {
  auto c = canonicalize(lower("a") * raise("a") * lower("a") * raise("a"));
  auto expected = identity() + 3.0 * number("a") + raise("a") * raise("a") * lower("a") * lower("a");
  CHECK(same(c, canonicalize(expected)));
  REQUIRE(c.terms().size() == 3);
  CHECK(c.terms()[0].factors.empty());
  CHECK(c.terms()[0].coefficient == Complex(1.0, 0.0));
}

TEST_CASE("different modes commute without contraction") {
  auto c = canonicalize(lower("a") * raise("b"));
  CHECK(same(c, raise("b") * lower("a")));
  CHECK(canonicalize(commutator(lower("a"), raise("b"))).empty());
  CHECK(same(canonicalize(commutator(lower("a"), raise("a"))), identity()));
}

TEST_CASE("adjoint reverses and flips factors") {
  auto e = Complex(0.0, 2.0) * raise("a") * lower("b");
  auto d = e.adjoint();
  REQUIRE(d.terms().size() == 1);
  CHECK(d.terms()[0].coefficient == Complex(0.0, -2.0));
  CHECK(d.terms()[0].factors == std::vector<Factor>{{"b", Ladder::raise}, {"a", Ladder::lower}});
}

TEST_CASE("property: canonicalize is idempotent and normal-ordered") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(0, 6), coin(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    OperatorExpression e = identity(Complex(1.0 + trial, -0.5));
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      const std::string mode = coin(rng) ? "a" : "b";
      e = e * (coin(rng) ? raise(mode) : lower(mode));
    }
    auto c1 = canonicalize(e);
    auto c2 = canonicalize(c1);
    CHECK(same(c1, c2));
    for (const auto& t : c1.terms()) CHECK(is_normal_ordered(t));
  }
}

TEST_CASE("property: canonical form matches truncated matrix products on two modes") {
  // Monomials of length <= 4 move occupations by at most 4, so levels
  // n <= cap - 4 are free of truncation effects.
  const int cap = 8, guard = 4;
  const auto a1 = truncated_lower(cap);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(cap + 1, cap + 1);
  const Eigen::MatrixXcd A = kron(a1, id), B = kron(id, a1);
  const Eigen::MatrixXcd Ad = A.adjoint(), Bd = B.adjoint();
  auto sector = std::make_shared<FockSector>(enumerate_sector(ModeSet({"a", "b"}), {}, cap));

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(1, 4), pick(0, 3);
  for (int trial = 0; trial < 60; ++trial) {
    OperatorExpression e = identity();
    Eigen::MatrixXcd direct = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      switch (pick(rng)) {
        case 0: e = e * lower("a"); direct = direct * A; break;
        case 1: e = e * raise("a"); direct = direct * Ad; break;
        case 2: e = e * lower("b"); direct = direct * B; break;
        default: e = e * raise("b"); direct = direct * Bd; break;
      }
    }
    const Eigen::MatrixXcd canon = Eigen::MatrixXcd(build_matrix(canonicalize(e), *sector));
    // The Kronecker index (na * (cap+1) + nb) coincides with the lexicographic sector order.
    for (Eigen::Index col = 0; col < A.cols(); ++col) {
      const auto& occ = sector->state(static_cast<std::size_t>(col));
      if (occ[0] > cap - guard || occ[1] > cap - guard) continue;
      for (Eigen::Index row = 0; row < A.rows(); ++row) CHECK(std::abs(canon(row, col) - direct(row, col)) < 1e-10);
    }
  }
}
