#include <doctest.h>

#include "qva/examples.hpp"

using namespace qva;

namespace {

const StateField& affine3() {
  static const StateField sf = build_affine_sl2(Rational(1), 3);
  return sf;
}

const StateField& comm3() {
  static const StateField sf = build_commutative({{"u", 1}}, 3);
  return sf;
}

int idx(const StateField& sf, const std::string& name) { return sf.space().index_of(name); }

GVector vec(const StateField& sf, const std::string& name, const HScalar& c = HScalar(1)) {
  return GVector::basis(idx(sf, name), c);
}

std::vector<std::array<int, 3>> compatible_triples(const StateField& sf) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < sf.dim(); ++a)
    for (int b = 0; b < sf.dim(); ++b)
      for (int c = 0; c < sf.dim(); ++c)
        if (weight_compatible(sf, a, b, c)) out.push_back({a, b, c});
  return out;
}

}  // namespace

TEST_CASE("affine PBW basis dimensions by weight") {
  StateField sf = build_affine_sl2(Rational(1), 4);
  std::vector<int> dims;
  for (int w = 0; w <= 4; ++w) dims.push_back(static_cast<int>(sf.space().of_weight(w).size()));
  CHECK(dims == std::vector<int>{1, 3, 9, 22, 51});
  CHECK(sf.dim() == 86);
  CHECK_THROWS_AS(build_affine_sl2(Rational(1), 7), CutoffTooLarge);
}

TEST_CASE("affine current products") {
  for (int k : {1, -2, 5}) {
    StateField sf = build_affine_sl2(Rational(k), 3);
    int e = idx(sf, "e(-1)"), f = idx(sf, "f(-1)"), h = idx(sf, "h(-1)");
    CHECK(sf.product(e, 0, f) == vec(sf, "h(-1)"));
    CHECK(sf.product(e, 1, f) == vec(sf, "vac", HScalar(k)));
    CHECK(sf.product(h, 1, h) == vec(sf, "vac", HScalar(2 * k)));
    CHECK(sf.product(h, 0, e) == vec(sf, "e(-1)", HScalar(2)));
    CHECK(sf.product(e, 1, e).is_zero());
    CHECK(sf.product(e, -1, f) == vec(sf, "e(-1)f(-1)"));
    CHECK(sf.product(f, -1, e) == vec(sf, "e(-1)f(-1)") - vec(sf, "h(-2)"));
    CHECK(sf.apply_T(vec(sf, "e(-1)")) == vec(sf, "e(-2)"));
    // a_(-2)|0> = Ta
    for (int i = 0; i < sf.dim(); ++i)
      if (sf.weight(i) < sf.cutoff()) CHECK(sf.product(i, -2, sf.vacuum()) == sf.apply_T(GVector::basis(i)));
  }
}

TEST_CASE("apply_Y and exp_T on affine currents") {
  const StateField& sf = affine3();
  VectorDist y = apply_Y(sf, vec(sf, "e(-1)"), vec(sf, "f(-1)"));
  CHECK(y.coeff({-2, 0}) == vec(sf, "vac"));
  CHECK(y.coeff({-1, 0}) == vec(sf, "h(-1)"));

  VectorDist d({"z"});
  d.set_axes({Axis{Interval{}, Interval{0, 0}}});
  d.add({0, 0}, vec(sf, "e(-1)"));
  VectorDist s = exp_T(sf, d, "z");
  CHECK(s.coeff({0, 0}) == vec(sf, "e(-1)"));
  CHECK(s.coeff({1, 0}) == vec(sf, "e(-2)"));
  CHECK(s.coeff({2, 0}) == vec(sf, "e(-3)"));
}

TEST_CASE("commutative builder") {
  const StateField& sf = comm3();
  std::vector<std::string> names;
  for (int i = 0; i < sf.dim(); ++i) names.push_back(sf.space().name(i));
  CHECK(names == std::vector<std::string>{"vac", "u", "u'", "u^2", "u''", "u'u", "u^3"});
  int u = idx(sf, "u");
  CHECK(sf.product(u, -2, sf.vacuum()) == vec(sf, "u'"));
  CHECK(sf.product(u, -1, u) == vec(sf, "u^2"));
  CHECK(sf.product(u, -2, u) == vec(sf, "u'u"));
  for (int i = 0; i < sf.dim(); ++i)
    for (int j = 0; j < sf.dim(); ++j) {
      CHECK(sf.product(i, -1, j) == sf.product(j, -1, i));
      for (const auto& [n, v] : sf.products(i, j)) CHECK(n < 0);
    }
  StateField d5 = build_commutative({{"u", 1}}, 5);
  CHECK(d5.dim() == 19);
  StateField two = build_commutative({{"u", 1}, {"v", 2}}, 3);
  CHECK(two.space().index_of("uv") >= 0);
}

TEST_CASE("holomorphy") {
  CHECK(check_holomorphic(comm3()).status == Status::kPass);
  CHECK(check_holomorphic(affine3()).status == Status::kFail);
  CHECK(check_holomorphic(build_vacuum_only()).status == Status::kPass);
}

TEST_CASE("axioms hold on shipped instances") {
  CHECK(validate_axioms(affine3()).status == Status::kPass);
  CHECK(validate_axioms(build_affine_sl2(Rational(-2), 3)).status == Status::kPass);
  CHECK(validate_axioms(comm3()).status == Status::kPass);
  CHECK(validate_axioms(build_vacuum_only()).status == Status::kPass);
}

TEST_CASE("corrupted translation is rejected") {
  StateField sf = affine3();
  SparseMatrix T = sf.T();
  T.add(idx(sf, "h(-2)"), idx(sf, "e(-1)"), HScalar(1));
  sf.set_T(T);
  CheckReport r = validate_axioms(sf);
  CHECK(r.status == Status::kFail);
  CHECK(!r.location.empty());
}

TEST_CASE("current locality witnesses follow the bracket") {
  const StateField& sf = affine3();
  Windows win = default_windows(sf.cutoff());
  const char* cur[] = {"e(-1)", "h(-1)", "f(-1)"};
  const int letter_form[3][3] = {{0, 0, 1}, {0, 2, 0}, {1, 0, 0}};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      int expected = letter_form[x][y] != 0 ? 2 : (x == y ? 0 : 1);
      int best = 0;
      for (int c = 0; c < sf.dim(); ++c) {
        if (!weight_compatible(sf, idx(sf, cur[x]), idx(sf, cur[y]), c)) continue;
        CheckReport r = check_locality(sf, idx(sf, cur[x]), idx(sf, cur[y]), c, win);
        REQUIRE(r.status == Status::kPass);
        REQUIRE(r.witness.size() == 1);
        REQUIRE(r.witness[0].has_value());
        best = std::max(best, *r.witness[0]);
      }
      CHECK_MESSAGE(best == expected, cur[x], " ", cur[y]);
    }
}

TEST_CASE("commutative locality needs no factor") {
  const StateField& sf = comm3();
  Windows win = default_windows(sf.cutoff());
  for (const auto& [a, b, c] : compatible_triples(sf)) {
    CheckReport r = check_locality(sf, a, b, c, win);
    CHECK(r.status == Status::kPass);
    CHECK(r.witness.at(0) == 0);
  }
}

TEST_CASE("classical suite on affine and commutative truncations") {
  for (const StateField* sf : {&affine3(), &comm3()}) {
    Windows win = default_windows(sf->cutoff());
    for (int a = 0; a < sf->dim(); ++a)
      for (int b = 0; b < sf->dim(); ++b)
        if (sf->weight(a) + sf->weight(b) <= sf->cutoff()) CHECK(check_skewsymmetry(*sf, a, b).status == Status::kPass);
    for (const auto& [a, b, c] : compatible_triples(*sf)) {
      TripleKernel k(*sf, a, b, c, win);
      CHECK(k.associativity().status == Status::kPass);
      CHECK(k.jacobi(-(sf->cutoff() + 1), sf->cutoff() + 1).status == Status::kPass);
      for (int n = -3; n <= 3; ++n) {
        CheckReport r = k.borcherds(n);
        CHECK(r.status != Status::kFail);
        CHECK(k.nproduct(n).status != Status::kFail);
      }
    }
  }
}

TEST_CASE("nproduct identity on the affine instance") {
  const StateField& sf = affine3();
  Windows win = default_windows(sf.cutoff());
  int e = idx(sf, "e(-1)");
  for (int n = -3; n <= 3; ++n) CHECK(check_nproduct_identity(sf, e, e, n, win).status != Status::kFail);
  CHECK(check_nproduct_identity(sf, e, idx(sf, "f(-1)"), 0, win).status == Status::kPass);
  // Large n: both sides vanish.
  CHECK(check_nproduct_identity(sf, e, e, 9, win).status != Status::kFail);
}

TEST_CASE("corrupted product is caught") {
  StateField sf = affine3();
  int e = idx(sf, "e(-1)"), f = idx(sf, "f(-1)");
  sf.set_product(e, 0, f, vec(sf, "h(-1)", HScalar(2)));
  Windows win = default_windows(sf.cutoff());
  CHECK(check_nproduct_identity(sf, e, f, 0, win).status == Status::kFail);
  bool borcherds_failed = false;
  for (int c = 0; c < sf.dim() && !borcherds_failed; ++c)
    if (weight_compatible(sf, e, f, c))
      for (int n = -2; n <= 2; ++n) borcherds_failed |= check_borcherds(sf, e, f, c, n, win).failed();
  CHECK(borcherds_failed);
  CHECK(check_skewsymmetry(sf, e, f).status == Status::kFail);
}

TEST_CASE("non-skewsymmetric products break skewsymmetry") {
  StateField sf = build_commutative({{"u", 1}}, 4);
  int u = idx(sf, "u"), up = idx(sf, "u'");
  sf.set_product(u, -1, up, vec(sf, "u'u", HScalar(3)));
  CHECK(check_skewsymmetry(sf, u, up).status == Status::kFail);
  CHECK(check_associativity(sf, u, up, u, default_windows(sf.cutoff())).status == Status::kFail);
}

TEST_CASE("vacuum-only instance passes everything") {
  StateField sf = build_vacuum_only();
  Windows win = default_windows(sf.cutoff());
  CHECK(check_locality(sf, 0, 0, 0, win).status == Status::kPass);
  CHECK(check_associativity(sf, 0, 0, 0, win).status == Status::kPass);
  CHECK(check_jacobi(sf, 0, 0, 0, win).status == Status::kPass);
  for (int n = -2; n <= 2; ++n) CHECK(check_borcherds(sf, 0, 0, 0, n, win).status == Status::kPass);
}
