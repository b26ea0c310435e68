#include <doctest.h>

#include "json.hpp"
#include "qva/examples.hpp"
#include "qva/io.hpp"

using namespace qva;

namespace {

Instance plain(StateField sf) {
  Instance inst;
  inst.win = default_windows(sf.cutoff());
  inst.sf = std::make_shared<const StateField>(std::move(sf));
  return inst;
}

Instance braided(QuantumInstance q) {
  Instance inst;
  inst.sf = q.sf;
  inst.win = default_windows(q.sf->cutoff());
  inst.S = q.S;
  inst.control = q.control;
  return inst;
}

const char* kTiny =
    "HEADER\n"
    "h_order 2\n"
    "weight_cutoff 1\n"
    "z_window -9 9\n"
    "x_window -3 1\n"
    "BASIS\n"
    "0 vac 0\n"
    "1 u 1\n"
    "VACUUM\n"
    "0\n"
    "T\n"
    "Y\n"
    "Y 0 -1 0 -> 1*h^0\xC2\xB7" "0\n"
    "Y 0 -1 1 -> 1*h^0\xC2\xB7" "1\n"
    "Y 1 -1 0 -> 1*h^0\xC2\xB7" "1\n";

std::string with_line(const std::string& base, const std::string& after, const std::string& line) {
  std::string s = base;
  size_t at = s.find(after);
  REQUIRE(at != std::string::npos);
  s.insert(at + after.size(), line);
  return s;
}

std::vector<std::string> stripped(const std::vector<CheckReport>& rs) {
  std::vector<std::string> out;
  for (auto r : rs) {
    r.elapsed_ms = 0;
    out.push_back(report_json(r));
  }
  return out;
}

}  // namespace

TEST_CASE("instances round trip through the file format") {
  std::vector<Instance> cases;
  cases.push_back(plain(build_affine_sl2(Rational(1), 3)));
  cases.push_back(plain(build_affine_sl2(Rational(-2), 2, 2)));
  cases.push_back(plain(build_commutative({{"u", 1}, {"v", 2}}, 3)));
  cases.push_back(plain(build_vacuum_only(0)));
  auto sf = std::make_shared<const StateField>(build_affine_sl2(Rational(1, 2), 2, 3));
  cases.push_back(braided(wrap_trivial_braiding(sf)));
  cases.push_back(braided(seeded_control_braiding(sf, 4)));
  cases.push_back(braided(make_control_braiding(sf, swap_minus_identity(*sf), -1)));
  for (const auto& inst : cases) {
    std::string text = emit_instance(inst);
    Instance back = parse_instance(text);
    CHECK(back == inst);
    CHECK(emit_instance(back) == text);
  }
  CHECK(parse_instance(emit_instance(cases[5])).control);
}

TEST_CASE("builders are deterministic and counted") {
  CHECK(emit_instance(plain(build_affine_sl2(Rational(1), 3))) == emit_instance(plain(build_affine_sl2(Rational(1), 3))));
  auto basis_lines = [](const Instance& inst) {
    std::string t = emit_instance(inst);
    size_t from = t.find("BASIS\n") + 6, to = t.find("VACUUM\n");
    return std::count(t.begin() + from, t.begin() + to, '\n');
  };
  CHECK(basis_lines(plain(build_commutative({{"u", 1}}, 2))) == 4);
  CHECK(basis_lines(plain(build_vacuum_only(0))) == 1);
  CHECK(basis_lines(plain(build_affine_sl2(Rational(1), 3))) == 35);
}

TEST_CASE("a lower h-order truncates coefficients") {
  auto sf = std::make_shared<const StateField>(build_affine_sl2(Rational(1), 2, 3));
  Instance inst = braided(seeded_control_braiding(sf, 2));
  std::string text = emit_instance(inst);
  Instance one = parse_instance(text, 1);
  CHECK(one.sf->h_order() == 1);
  CHECK(one.S->trivial());
  Instance two = parse_instance(text, 2);
  CHECK(two.S->h_powers() == std::set<int>{1});
  CHECK_THROWS_AS(parse_instance(text, 4), ValidationError);
}

TEST_CASE("the tiny fixture parses") {
  Instance inst = parse_instance(kTiny);
  CHECK(inst.sf->dim() == 2);
  CHECK(inst.win.z == Interval{-9, 9});
  CHECK_FALSE(inst.S.has_value());
  CHECK_FALSE(inst.control);
  CHECK(inst.sf->product(1, -1, 0) == GVector::basis(1));
}

TEST_CASE("malformed instances are refused with a line number") {
  const std::string tiny = kTiny;
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "h_order 2\n", "colour blue\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "1 u 1\n", "3 w 1\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "T\n", "1 0 2/4*h^0\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "T\n", "1 7 1*h^0\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "T\n", "1 0 1*h^5\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "Y\n", "Y 1 0 1 1*h^0\xC2\xB7" "0\n")), ParseError);
  CHECK_THROWS_AS(parse_instance(with_line(tiny, "Y\n", "Y 1 -1 0 -> 1*h^0\xC2\xB7" "1\n")), ParseError);
  // u_(0)u would have weight 1 but names the vacuum.
  try {
    parse_instance(with_line(tiny, "Y\n", "Y 1 0 1 -> 1*h^0\xC2\xB7" "0\n"));
    FAIL("inhomogeneous product accepted");
  } catch (const ParseError& e) {
    CHECK(e.line == 13);
  }
  CHECK_THROWS_AS(parse_instance(tiny + "S\nS 1 1 z^0 h^0 -> 1\xC2\xB7(1,1)\n"),
                  ParseError);
  CHECK_NOTHROW(parse_instance(tiny + "S\nS 1 1 z^0 h^1 -> -1/2\xC2\xB7(1,0)\n"));
  CHECK_THROWS_AS(parse_instance("HEADER\nh_order 1\n"), ParseError);
}

TEST_CASE("pretty printing") {
  StateField sf = build_affine_sl2(Rational(1), 2, 2);
  int e = sf.space().index_of("e(-1)"), f = sf.space().index_of("f(-1)");
  CHECK(pretty(sf.space(), sf.product(e, 1, f)) == "1\xC2\xB7vac");
  GVector v = GVector::basis(e, HScalar::h_power(1, 2) + HScalar(Rational(-1, 2)));
  CHECK(pretty(sf.space(), v) == "(-1/2*h^0+1*h^1)\xC2\xB7" "e(-1)");
  CHECK(pretty(sf.space(), GVector()) == "0");
  CHECK(pretty(sf.space(), TensorElement::basis2(e, f, HScalar(3))) == "3\xC2\xB7(e(-1),f(-1))");
}

TEST_CASE("report records keep a fixed key order") {
  CheckReport r;
  r.check = "locality";
  r.a = 1;
  r.b = 2;
  r.c = 0;
  r.h_order = 2;
  r.witness = {1, std::nullopt};
  r.status = Status::kFail;
  r.first_failing_h_order = 1;
  r.box_vars = {"z", "w"};
  r.box = {Interval{-kInf, 3}, Interval{-2, 5}};
  r.location = "z^1 w^0 after N=4";
  auto j = nlohmann::ordered_json::parse(report_json(r));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"check", "a", "b", "c", "n", "h_order", "status", "control", "witness",
                                         "first_failing_h_order", "box", "location", "detail", "elapsed_ms"});
  CHECK(j["witness"][0] == 1);
  CHECK(j["witness"][1].is_null());
  CHECK(j["box"]["z"][0].is_null());
  CHECK(j["box"]["w"][1] == 5);
  CHECK(j["n"].is_null());
  CHECK(j["first_failing_h_order"] == 1);
}

TEST_CASE("sampled triples are reproducible") {
  StateField sf = build_affine_sl2(Rational(1), 3);
  auto all = select_triples(sf, std::nullopt);
  auto s1 = select_triples(sf, std::make_pair(5u, 30));
  auto s2 = select_triples(sf, std::make_pair(5u, 30));
  CHECK(s1 == s2);
  CHECK(s1.size() == 30);
  CHECK(std::is_sorted(s1.begin(), s1.end()));
  for (const auto& t : s1) CHECK(std::find(all.begin(), all.end(), t) != all.end());
  CHECK(select_triples(sf, std::make_pair(6u, 30)) != s1);
  CHECK(select_triples(sf, std::make_pair(5u, 100000)).size() == all.size());
}

TEST_CASE("runner output does not depend on the worker count") {
  auto sf = std::make_shared<const StateField>(build_affine_sl2(Rational(1), 2, 2));
  Instance inst = braided(seeded_control_braiding(sf, 3));
  RunOptions opt;
  opt.suite = "quantum";
  opt.workers = 1;
  auto one = run_checks(inst, opt);
  opt.workers = 6;
  auto six = run_checks(inst, opt);
  CHECK(stripped(one) == stripped(six));
  bool any_failed = false;
  for (const auto& r : one) {
    CHECK(r.control);
    any_failed |= r.failed();
  }
  CHECK(any_failed);
  CHECK(exit_code(one) == 0);
  for (auto& r : one) r.control = false;
  CHECK(exit_code(one) == 1);
}

TEST_CASE("suites select their checks") {
  Instance inst = plain(build_affine_sl2(Rational(1), 2));
  RunOptions opt;
  opt.n_range = std::make_pair(-2, 2);
  std::set<std::string> names;
  for (const auto& r : run_checks(inst, opt)) names.insert(r.check);
  CHECK(names == std::set<std::string>{"associativity", "axioms", "borcherds", "jacobi", "locality",
                                       "nproduct_identity", "skewsymmetry"});

  opt.suite = "quantum";
  auto q = run_checks(inst, opt);
  int gated = 0;
  for (const auto& r : q) {
    CHECK(r.status != Status::kFail);
    if (r.check == "s_commutativity" || r.check == "scomm_commutation") {
      CHECK(r.status == Status::kSkipped);
      ++gated;
    }
  }
  CHECK(gated == 2);
  CHECK(exit_code(q) == 0);

  opt.suite = "s_commutativity";
  bool failed = false;
  for (const auto& r : run_checks(inst, opt)) failed |= r.failed();
  CHECK(failed);

  opt.suite = "equivalence";
  auto eq = run_checks(inst, opt);
  int verdicts = 0;
  for (const auto& r : eq)
    if (r.check.rfind("suite", 0) == 0) {
      CHECK(r.status == Status::kPass);
      ++verdicts;
    }
  CHECK(verdicts == 6);

  opt.suite = "no_such_check";
  CHECK_THROWS_AS(run_checks(inst, opt), Error);
}

TEST_CASE("hand-written fixtures round trip and behave") {
  const std::string dir = QVA_FIXTURE_DIR;
  Instance boson = read_instance(dir + "/heisenberg_d2.qva");
  CHECK(parse_instance(emit_instance(boson)) == boson);
  RunOptions opt;
  auto records = run_checks(boson, opt);
  CHECK(exit_code(records) == 0);
  int a = boson.sf->space().index_of("a");
  int best = 0;
  for (const auto& r : records)
    if (r.check == "locality" && r.a == a && r.b == a) best = std::max(best, r.witness.at(0).value_or(-1));
  CHECK(best == 2);

  Instance control = read_instance(dir + "/heisenberg_control.qva");
  CHECK(parse_instance(emit_instance(control)) == control);
  CHECK(control.control);
  REQUIRE(control.S.has_value());
  CHECK(control.S->h_powers() == std::set<int>{1});
  CHECK(control.sf->product(a, 1, a) == boson.sf->product(a, 1, a));
  opt.suite = "ys_equals_yop";
  auto q = run_checks(control, opt);
  CHECK(std::any_of(q.begin(), q.end(), [](const CheckReport& r) { return r.failed(); }));
  CHECK(exit_code(q) == 0);
}
