#include "doctest.h"

#include <random>

#include "qva/algebra.hpp"

using namespace qva;

namespace {

HScalar random_scalar(std::mt19937& rng, int order, bool unit = false) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  std::vector<Rational> c(order);
  for (auto& q : c) q = Rational(num(rng), den(rng));
  if (unit && sgn(c[0]) == 0) c[0] = 1;
  return HScalar::from_coeffs(c, order);
}

}  // namespace

TEST_CASE("h-scalar arithmetic truncates at the h-order") {
  HScalar one(1), h = HScalar::h_power(1, 3);
  HScalar a = (one + h) * (one - h);
  CHECK(a == HScalar::from_coeffs({1, 0, -1}, 3));
  CHECK((one - h).truncated(3).inverse() == HScalar::from_coeffs({1, 1, 1}, 3));
  CHECK((HScalar::h_power(2, 3) * h).is_zero());
  CHECK(HScalar::h_power(2, 3).lowest_order() == 2);
  CHECK(HScalar().lowest_order() == -1);
}

TEST_CASE("inversion requires a unit") {
  CHECK_THROWS_AS(HScalar::h_power(1, 3).inverse(), InversionOfNonUnit);
  CHECK_THROWS_AS(HScalar().inverse(), InversionOfNonUnit);
  CHECK(HScalar(Rational(2, 3)).inverse() == HScalar(Rational(3, 2)));
}

TEST_CASE("h-scalars form a commutative ring (randomized)") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    int m = 1 + it % 4;
    HScalar a = random_scalar(rng, m), b = random_scalar(rng, m), c = random_scalar(rng, m);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == HScalar());
    HScalar u = random_scalar(rng, m, true);
    CHECK(u * u.inverse() == HScalar(Rational(1), m));
    CHECK(u.inverse().inverse() == u);
  }
}

TEST_CASE("h-scalar text round trip") {
  HScalar a = HScalar::from_coeffs({Rational(-3, 4), 0, Rational(5)}, 4);
  CHECK(a.str() == "-3/4*h^0+5*h^2");
  CHECK(HScalar::parse(a.str(), 4) == a);
  CHECK(HScalar::parse("0", 4).is_zero());
  CHECK_THROWS(HScalar::parse("2/4*h^0", 4));
  CHECK_THROWS(HScalar::parse("1*h^5", 4));
  CHECK_THROWS(HScalar::parse("1*x^0", 4));
}

TEST_CASE("graded space validation") {
  CHECK_THROWS_AS(GradedSpace({{"vac", 1}}, 0, 2), ValidationError);
  CHECK_THROWS_AS(GradedSpace({{"vac", 0}, {"a", 3}}, 0, 2), ValidationError);
  CHECK_THROWS_AS(GradedSpace({{"vac", 0}, {"vac", 1}}, 0, 2), ValidationError);
  GradedSpace s({{"vac", 0}, {"a", 1}, {"b", 1}}, 0, 2);
  CHECK(s.of_weight(1) == std::vector<int>{1, 2});
  CHECK(s.index_of("b") == 2);
  CHECK_THROWS_AS(s.index_of("c"), IndexOutOfRange);
}

TEST_CASE("tensor products are bilinear") {
  HScalar h = HScalar::h_power(1, 3);
  CHECK(tensor(GVector::basis(1), GVector::basis(2)) == TensorElement::basis2(1, 2));
  TensorElement t = tensor(GVector::basis(1) + h * GVector::basis(3), GVector::basis(2));
  CHECK(t.coeff({1, 2, -1}) == HScalar(1));
  CHECK(t.coeff({3, 2, -1}) == h);
  CHECK(tensor(GVector(), GVector::basis(2)).is_zero());

  std::mt19937 rng(3);
  for (int it = 0; it < 50; ++it) {
    GVector u, u2, v;
    for (int i = 0; i < 4; ++i) {
      u.add(i, random_scalar(rng, 2));
      u2.add(i, random_scalar(rng, 2));
      v.add(i, random_scalar(rng, 2));
    }
    HScalar al = random_scalar(rng, 2);
    CHECK(tensor(al * u + u2, v) == al * tensor(u, v) + tensor(u2, v));
  }
}

TEST_CASE("tensor slot permutation") {
  TensorElement t = TensorElement::basis3(1, 2, 3);
  CHECK(t.permuted({1, 0, 2}) == TensorElement::basis3(2, 1, 3));
  CHECK(t.permuted({2, 0, 1}) == TensorElement::basis3(3, 1, 2));
}

TEST_CASE("sparse matrices act on vectors") {
  SparseMatrix id = SparseMatrix::identity(3);
  GVector v = GVector::basis(0, HScalar(2)) + GVector::basis(2, HScalar::h_power(1, 2));
  CHECK(apply_linear(id, v) == v);
  SparseMatrix t(3, 3);
  t.add(1, 0, HScalar(1));
  t.add(2, 1, HScalar(1));
  CHECK(apply_linear(t, apply_linear(t, apply_linear(t, GVector::basis(0)))).is_zero());
  CHECK_THROWS_AS(apply_linear(SparseMatrix(2, 2), GVector::basis(2)), DimensionMismatch);
}

TEST_CASE("generalized binomials") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(-1, 3) == -1);
  CHECK(binomial(-2, 2) == 3);
  CHECK(binomial(2, 3) == 0);
  CHECK(factorial(5) == 120);
}
