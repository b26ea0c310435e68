#include "doctest.h"

#include <random>

#include "qva/dist.hpp"
#include "window_oracle.hpp"

using namespace qva;

namespace {

const std::vector<std::string> ZW{"z", "w"};

bool vanishes(const ScalarDist& d) { return d.terms().empty(); }

ScalarDist laurent(const std::map<long, long>& coeffs) {
  ScalarDist d({"z"});
  long lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
  d.set_axes({Axis{Interval{}, Interval{lo, hi}}});
  for (auto [e, c] : coeffs) d.add({e, 0}, HScalar(c));
  return d;
}

}  // namespace

TEST_CASE("delta distribution coefficients") {
  ScalarDist d = delta_dist({-10, 10}, {-10, 10});
  CHECK(d.coeff({-1, 0}) == HScalar(1));
  for (long m = -9; m <= 9; ++m) CHECK(d.coeff({-m - 1, m}) == HScalar(1));
  CHECK(d.coeff({0, 0}).is_zero());
  CHECK(d.axis(0).box == Interval{-10, 10});
}

TEST_CASE("iota expansions") {
  ScalarDist a = iota_expand(-1, Expansion::kFirst, 8);
  for (long k = 0; k <= 8; ++k) CHECK(a.coeff({-1 - k, k}) == HScalar(1));
  ScalarDist p = iota_expand(2, Expansion::kSecond, 0);
  CHECK(p.terms().size() == 3);
  CHECK(p.coeff({2, 0}) == HScalar(1));
  CHECK(p.coeff({1, 1}) == HScalar(-2));
  CHECK(p.coeff({0, 2}) == HScalar(1));
  CHECK(iota_expand(2, Expansion::kFirst, 0).terms() == p.terms());

  // iota_{z,w} - iota_{w,z} of (z-w)^{-1} is the delta function.
  ScalarDist diff = iota_expand(-1, Expansion::kFirst, 8) - iota_expand(-1, Expansion::kSecond, 8);
  ScalarDist delta = delta_dist({-9, 8}, {-9, 8});
  Comparison c = compare(diff, delta);
  CHECK(c.equal);
  CHECK(diff.coeff({-1, 0}) == HScalar(1));
  CHECK(diff.coeff({0, -1}) == HScalar(1));
}

TEST_CASE("products and the window calculus") {
  ScalarDist zw = iota_expand(1, Expansion::kFirst, 0);
  SUBCASE("(z-w)^2 annihilates delta") {
    ScalarDist d = delta_dist({-10, 10}, {-10, 10});
    ScalarDist r = dist_mul(zw, dist_mul(zw, d));
    CHECK(vanishes(r));
    CHECK_FALSE(r.box_empty());
  }
  SUBCASE("monomial shifts exponents and box") {
    ScalarDist d = delta_dist({-5, 5}, {-5, 5});
    ScalarDist r = dist_mul(monomial(ZW, {3, 0}), d);
    CHECK(r.axis(0).box == Interval{-2, 8});
    CHECK(r.coeff({2, 0}) == HScalar(1));
  }
  SUBCASE("(z-w) times iota (z-w)^{-1} is one") {
    ScalarDist r = dist_mul(zw, iota_expand(-1, Expansion::kFirst, 10));
    CHECK(r.coeff({0, 0}) == HScalar(1));
    CHECK(r.terms().size() == 1);
    CHECK(r.axis(1).box.hi == 10);
  }
  SUBCASE("iota (z-w)^n iota (z-w)^{-n} is one") {
    for (long n = -5; n <= 5; ++n) {
      ScalarDist a = iota_expand(n, Expansion::kFirst, 12);
      ScalarDist b = iota_expand(-n, Expansion::kFirst, 12);
      ScalarDist r = dist_mul(a, b);
      CHECK_FALSE(r.box_empty());
      CHECK(compare(r, monomial(ZW, {0, 0})).equal);
      CHECK(r.in_box({0, 0}));
    }
  }
  SUBCASE("infinite convolutions are refused") {
    ScalarDist a = iota_expand(-1, Expansion::kFirst, 5);
    ScalarDist b = iota_expand(-1, Expansion::kSecond, 5);
    CHECK_THROWS_AS(dist_mul(a, b), UntrustedProduct);
  }
}

TEST_CASE("residues") {
  ScalarDist d = delta_dist({-10, 10}, {-10, 10});
  ScalarDist r = residue(d, "z");
  for (long m = -9; m <= 9; ++m) CHECK(r.coeff({m, 0}) == (m == 0 ? HScalar(1) : HScalar()));

  // Res_z f(z) delta(z,w) = f(w) for Laurent polynomials inside the window.
  ScalarDist f = laurent({{5, 1}, {-2, 3}, {0, -7}});
  ScalarDist g = residue(dist_mul(promote(f, ZW), d), "z");
  for (long m = -4; m <= 4; ++m) CHECK(g.coeff({m, 0}) == f.coeff({m, 0}));
  CHECK(g.in_box({5, 0}));

  CHECK(vanishes(residue(monomial({"z"}, {0, 0}), "z")));
  ScalarDist narrow = delta_dist({0, 4}, {-10, 10});
  CHECK_THROWS_AS(residue(narrow, "z"), ResidueOutsideWindow);
}

TEST_CASE("derivatives and locality witnesses") {
  ScalarDist d = delta_dist({-12, 12}, {-12, 12});
  ScalarDist dd = derivative(d, "w");
  for (long m = -5; m <= 5; ++m) CHECK(dd.coeff({-m - 1, m - 1}) == HScalar(m));

  CHECK(locality_order(d, 1, 8).witness[0] == 1);
  CHECK(locality_order(dd, 1, 8).witness[0] == 2);
  LocalityResult none = locality_order(monomial(ZW, {3, -2}), 1, 6);
  CHECK_FALSE(none.witness[0].has_value());
  CHECK(none.first_failing_h_order == 0);
  CHECK(none.location.has_value());
}

TEST_CASE("a witness is not granted once the box loses the support") {
  // A constant known only on z, w <= 1: (z+w)^3 pushes every image out of the box.
  ScalarDist d(ZW);
  d.set_axes({Axis{Interval{-kInf, 1}, Interval{0, kInf}}, Axis{Interval{-kInf, 1}, Interval{}}, Axis{}});
  d.add({0, 0}, HScalar(2));
  LocalityResult r = locality_order(d, 1, 6, +1);
  CHECK_FALSE(r.witness[0].has_value());
  CHECK(r.scanned_to == 2);
}

TEST_CASE("locality witnesses are tracked per h-order") {
  ScalarDist d = delta_dist({-12, 12}, {-12, 12});
  ScalarDist dd = derivative(d, "w").scaled(HScalar::h_power(1, 3));
  LocalityResult r = locality_order(d + dd, 3, 8);
  CHECK(r.witness[0] == 1);
  CHECK(r.witness[1] == 2);
  CHECK(r.witness[2] == 2);
}

TEST_CASE("each h-order is scanned on its own") {
  // h^0 needs N=2, h^1 alone needs N=1.
  ScalarDist d = delta_dist({-12, 12}, {-12, 12});
  ScalarDist lower = derivative(d, "w");
  ScalarDist r0 = lower + d.scaled(HScalar::h_power(1, 2));
  LocalityResult r = locality_order(r0, 2, 8);
  CHECK(r.layer[0] == 2);
  CHECK(r.layer[1] == 1);
  CHECK(r.witness[1] == 2);

  // A result trusted only through h^0 cannot supply h^1.
  LocalityResult none = locality_order(monomial(ZW, {3, -2}, HScalar::h_power(1, 2)), 2, 4);
  CHECK(none.layer[0] == 0);
  CHECK_FALSE(none.layer[1].has_value());
  LocalityResult m = merge_layers({r, none}, {0, 1});
  CHECK(m.witness[0] == 2);
  CHECK_FALSE(m.witness[1].has_value());
  CHECK(m.first_failing_h_order == 1);
  LocalityResult ok = merge_layers({none, r}, {1, 1});
  CHECK(ok.layer[0] == 0);
  CHECK(ok.witness[1] == 1);
}

TEST_CASE("decomposition of local distributions") {
  ScalarDist d = delta_dist({-12, 12}, {-12, 12});
  auto c = decompose_local(d, 1, 8);
  REQUIRE(c.size() == 1);
  CHECK(c[0].coeff({0, 0}) == HScalar(1));
  CHECK(c[0].terms().size() == 1);

  auto c2 = decompose_local(derivative(d, "w"), 1, 8);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].terms().empty());
  CHECK(c2[1].coeff({0, 0}) == HScalar(1));

  CHECK_THROWS_AS(decompose_local(monomial(ZW, {3, -2}), 1, 6), NotLocal);
}

TEST_CASE("decompose inverts reconstruct") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3), ex(-3, 3);
  for (int it = 0; it < 30; ++it) {
    int n = 1 + it % 3;
    std::vector<ScalarDist> cs;
    for (int j = 0; j < n; ++j) {
      ScalarDist c({"w"});
      c.set_axes({Axis{Interval{}, Interval{-3, 3}}});
      for (int k = 0; k < 3; ++k) c.add({ex(rng), 0}, HScalar(coef(rng)));
      if (j == n - 1 && c.terms().empty()) c.add({0, 0}, HScalar(1));
      cs.push_back(c);
    }
    ScalarDist d = reconstruct_local(cs, ZW, {-20, 20}, {-20, 20});
    auto back = decompose_local(d, 1, 8);
    REQUIRE(back.size() == cs.size());
    for (size_t j = 0; j < cs.size(); ++j) CHECK(compare(back[j], cs[j]).equal);
  }
}

TEST_CASE("taylor shift with a nilpotent step") {
  // Step on exponent-valued scalars: x -> x/2 until zero after 3 steps.
  ScalarDist one = monomial({"z"}, {0, 0});
  int calls = 0;
  auto step = [&](const HScalar& c) {
    ++calls;
    return calls >= 3 ? HScalar() : c;
  };
  ScalarDist r = taylor_shift(one, "z", step, 4);
  CHECK(r.coeff({0, 0}) == HScalar(1));
  CHECK(r.coeff({1, 0}) == HScalar(1));
  CHECK(r.coeff({2, 0}) == HScalar(Rational(1, 2)));
  CHECK(r.coeff({3, 0}).is_zero());
}

TEST_CASE("substitution z -> z + w") {
  // z^{-1} becomes iota_{z,w} (z+w)^{-1}.
  ScalarDist d = monomial(ZW, {-1, 0});
  std::vector<Axis> ax = d.axes();
  ax[1].box = {-kInf, 6};
  d.set_axes(ax);
  ScalarDist s = substitute_sum(d);
  ScalarDist ref = binom_expand(-1, 1, 1, Expansion::kFirst, 6);
  CHECK(compare(s, ref).equal);
  CHECK(s.coeff({-3, 2}) == HScalar(1));
}

TEST_CASE("sliced delta of a difference") {
  // Residue in x of x^{-1} delta(x, z-w) slices is iota (z-w)^0 = 1.
  SlicedDist<HScalar> s = delta_of_difference({-4, 3}, Expansion::kFirst, 5);
  CHECK(s.slices.size() == 8);
  CHECK(s.slices.at(-1).coeff({0, 0}) == HScalar(1));
  CHECK(s.slices.at(0).coeff({-1, 0}) == HScalar(1));
  CHECK(s.slices.at(0).coeff({-2, 1}) == HScalar(1));
}

TEST_CASE("window calculus agrees with brute force") {
  std::mt19937 rng(2024);
  oracle::Tally t;
  for (int i = 0; i < 300; ++i) oracle::product_trial(rng, 1 + i % 2, t);
  for (int i = 0; i < 100; ++i) oracle::residue_trial(rng, 1 + i % 2, t);
  CHECK(t.mismatched == 0);
  CHECK(t.checked > 1000);
  MESSAGE("checked " << t.checked << " coefficients, " << t.untrusted << " refused");
}
