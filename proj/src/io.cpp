#include "qva/io.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "qva/examples.hpp"

namespace qva {

namespace {

const std::string kDot = "\xC2\xB7";  // U+00B7, separates coefficients from basis labels

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// Splits "x + y + z" on the spaced plus; h-scalars never contain spaces.
std::vector<std::string> split_terms(const std::string& rhs) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t next = rhs.find(" + ", pos);
    out.push_back(rhs.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return out;
}

long parse_long(const std::string& s, int line) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw ParseError(line, "not an integer: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(line, "not an integer: " + s);
  }
}

int parse_int(const std::string& s, int line) { return static_cast<int>(parse_long(s, line)); }

long parse_exponent(const std::string& s, const std::string& prefix, int line) {
  if (s.rfind(prefix, 0) != 0) throw ParseError(line, "expected " + prefix + "<int>, got " + s);
  return parse_long(s.substr(prefix.size()), line);
}

Rational parse_rational(const std::string& s, int line) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError(line, "malformed rational: " + s);
  Rational canon = q;
  canon.canonicalize();
  if (canon.get_num() != q.get_num() || canon.get_den() != q.get_den())
    throw ParseError(line, "rational not in lowest terms: " + s);
  return canon;
}

std::string coeff_str(const HScalar& c) {
  if (c.coeffs().size() == 1) return c.coeffs()[0].get_str();
  return "(" + c.str() + ")";
}

using Task = std::function<std::vector<CheckReport>()>;

std::vector<CheckReport> run_pool(const std::vector<Task>& tasks, int workers) {
  std::vector<std::vector<CheckReport>> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<CheckReport> flat;
  for (auto& v : out)
    for (auto& r : v) flat.push_back(std::move(r));
  return flat;
}

const std::vector<std::string>& classical_names() {
  static const std::vector<std::string> k{"axioms",      "skewsymmetry", "locality",         "associativity",
                                          "jacobi",      "borcherds",    "nproduct_identity"};
  return k;
}

std::vector<std::string> braid_prop_names() {
  std::vector<std::string> out;
  for (BraidProp p : {BraidProp::kVacuum, BraidProp::kLeftShift, BraidProp::kRightShift, BraidProp::kTotalShift,
                      BraidProp::kUnitarity, BraidProp::kQybe})
    for (const char* m : {"_raw", "_composed"}) out.push_back("braiding_" + prop_name(p) + m);
  return out;
}

const std::vector<std::string>& quantum_names() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v{"ys_equals_yop",   "s_locality",           "quasi_associativity",
                               "associativity_q", "hexagon_raw",          "hexagon_composed",
                               "s_jacobi",        "quantum_borcherds",    "quantum_nproduct_identity",
                               "s_product_vacuum_left", "s_product_vacuum_right", "s_product_shift",
                               "s_product_derivation",  "s_commutativity",        "scomm_commutation"};
    for (auto& n : braid_prop_names()) v.push_back(n);
    return v;
  }();
  return k;
}

CheckReport skipped(const std::string& name, const QuantumInstance& q, const std::string& why) {
  CheckReport r;
  r.check = name;
  r.h_order = q.h_order();
  r.control = q.control;
  r.status = Status::kSkipped;
  r.detail = why;
  return r;
}

}  // namespace

QuantumInstance Instance::quantum() const {
  return QuantumInstance{sf, S ? *S : Braiding(sf->dim(), sf->h_order()), control};
}

bool Instance::operator==(const Instance& o) const {
  return *sf == *o.sf && S == o.S && win.z == o.win.z && win.x == o.win.x && win.max_witness == o.win.max_witness &&
         control == o.control;
}

std::string emit_instance(const Instance& inst) {
  const StateField& sf = *inst.sf;
  const GradedSpace& space = sf.space();
  std::ostringstream out;
  out << "HEADER\n";
  out << "h_order " << sf.h_order() << "\n";
  out << "weight_cutoff " << sf.cutoff() << "\n";
  out << "z_window " << inst.win.z.lo << " " << inst.win.z.hi << "\n";
  out << "x_window " << inst.win.x.lo << " " << inst.win.x.hi << "\n";
  out << "max_witness " << inst.win.max_witness << "\n";
  out << "control " << (inst.control ? "yes" : "no") << "\n";
  out << "BASIS\n";
  for (int i = 0; i < sf.dim(); ++i) out << i << " " << space.name(i) << " " << space.weight(i) << "\n";
  out << "VACUUM\n" << sf.vacuum() << "\n";
  out << "T\n";
  for (int j = 0; j < sf.dim(); ++j)
    for (const auto& [i, c] : sf.T().column(j)) out << i << " " << j << " " << c.str() << "\n";
  out << "Y\n";
  for (int i = 0; i < sf.dim(); ++i)
    for (int j = 0; j < sf.dim(); ++j)
      for (const auto& [n, v] : sf.products(i, j)) {
        if (v.is_zero()) continue;
        out << "Y " << i << " " << n << " " << j << " ->";
        bool first = true;
        for (const auto& [k, c] : v.coords()) {
          out << (first ? " " : " + ") << c.str() << kDot << k;
          first = false;
        }
        out << "\n";
      }
  if (inst.S) {
    out << "S\n";
    for (const auto& [pair, by_m] : inst.S->entries())
      for (const auto& [m, t] : by_m)
        for (int p = 1; p < inst.S->h_order(); ++p) {
          std::string terms;
          for (const auto& [k, c] : t.terms()) {
            Rational r = c.coeff(p);
            if (sgn(r) == 0) continue;
            terms += (terms.empty() ? " " : " + ") + r.get_str() + kDot + "(" + std::to_string(k[0]) + "," +
                     std::to_string(k[1]) + ")";
          }
          if (terms.empty()) continue;
          out << "S " << pair.first << " " << pair.second << " z^" << m << " h^" << p << " ->" << terms << "\n";
        }
  }
  return out.str();
}

Instance parse_instance(const std::string& text, std::optional<int> h_order) {
  enum class Section { kNone, kHeader, kBasis, kVacuum, kT, kY, kS };
  Section sec = Section::kNone;
  std::set<std::string> seen_sections;
  std::map<std::string, std::vector<std::string>> header;
  std::vector<BasisVector> basis;
  std::optional<int> vacuum;
  struct Entry {
    int line;
    std::vector<std::string> tok;
    std::string rhs;
  };
  std::vector<Entry> t_lines, y_lines, s_lines;

  std::istringstream in(text);
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() == 1) {
      static const std::map<std::string, Section> kSections{{"HEADER", Section::kHeader}, {"BASIS", Section::kBasis},
                                                            {"VACUUM", Section::kVacuum}, {"T", Section::kT},
                                                            {"Y", Section::kY},           {"S", Section::kS}};
      auto it = kSections.find(tok[0]);
      if (it != kSections.end()) {
        if (!seen_sections.insert(tok[0]).second) throw ParseError(lineno, "repeated section " + tok[0]);
        sec = it->second;
        continue;
      }
    }
    switch (sec) {
      case Section::kNone:
        throw ParseError(lineno, "content before the first section");
      case Section::kHeader:
        if (!header.emplace(tok[0], std::vector<std::string>(tok.begin() + 1, tok.end())).second)
          throw ParseError(lineno, "repeated header key " + tok[0]);
        break;
      case Section::kBasis:
        if (tok.size() != 3) throw ParseError(lineno, "basis lines are: index name weight");
        if (parse_int(tok[0], lineno) != static_cast<int>(basis.size()))
          throw ParseError(lineno, "basis indices must run 0, 1, 2, ...");
        basis.push_back({tok[1], parse_int(tok[2], lineno)});
        break;
      case Section::kVacuum:
        if (tok.size() != 1 || vacuum) throw ParseError(lineno, "vacuum section holds one index");
        vacuum = parse_int(tok[0], lineno);
        break;
      case Section::kT:
        if (tok.size() != 3) throw ParseError(lineno, "T lines are: row column coefficient");
        t_lines.push_back({lineno, tok, ""});
        break;
      case Section::kY:
      case Section::kS: {
        size_t arrow = line.find(" -> ");
        if (arrow == std::string::npos) throw ParseError(lineno, "missing ' -> '");
        auto lhs = split_ws(line.substr(0, arrow));
        std::string rhs = line.substr(arrow + 4);
        const char* tag = sec == Section::kY ? "Y" : "S";
        size_t want = sec == Section::kY ? 4 : 5;
        if (lhs.size() != want || lhs[0] != tag) throw ParseError(lineno, std::string("malformed ") + tag + " line");
        (sec == Section::kY ? y_lines : s_lines).push_back({lineno, lhs, rhs});
        break;
      }
    }
  }

  auto need = [&](const std::string& key, size_t count) -> const std::vector<std::string>& {
    auto it = header.find(key);
    if (it == header.end()) throw ParseError(0, "header lacks " + key);
    if (it->second.size() != count) throw ParseError(0, "header " + key + " takes " + std::to_string(count) + " values");
    return it->second;
  };
  for (const auto& [key, v] : header) {
    static const std::set<std::string> kKeys{"h_order", "weight_cutoff", "z_window", "x_window", "max_witness",
                                             "control"};
    if (!kKeys.count(key)) throw ParseError(0, "unknown header key " + key);
  }
  const int file_order = parse_int(need("h_order", 1)[0], 0);
  if (file_order < 1) throw ParseError(0, "h_order must be positive");
  const int order = h_order.value_or(file_order);
  if (order < 1 || order > file_order)
    throw ValidationError("requested h-order " + std::to_string(order) + " outside [1, " + std::to_string(file_order) +
                          "]");
  const int cutoff = parse_int(need("weight_cutoff", 1)[0], 0);
  Instance inst;
  inst.win = default_windows(cutoff);
  const auto& zw = need("z_window", 2);
  const auto& xw = need("x_window", 2);
  inst.win.z = Interval{parse_long(zw[0], 0), parse_long(zw[1], 0)};
  inst.win.x = Interval{parse_long(xw[0], 0), parse_long(xw[1], 0)};
  if (inst.win.z.empty() || inst.win.x.empty()) throw ParseError(0, "empty window");
  if (header.count("max_witness")) inst.win.max_witness = parse_int(need("max_witness", 1)[0], 0);
  if (header.count("control")) {
    const std::string& c = need("control", 1)[0];
    if (c != "yes" && c != "no") throw ParseError(0, "control is yes or no");
    inst.control = c == "yes";
  }
  if (basis.empty()) throw ParseError(0, "empty basis");
  if (!vacuum) throw ParseError(0, "missing vacuum");

  auto scalar = [&](const std::string& s, int line) {
    try {
      return HScalar::parse(s, file_order).truncated(order);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  };
  try {
    auto space = std::make_shared<const GradedSpace>(basis, *vacuum, cutoff);
    const int dim = space->dim();
    auto index = [&](const std::string& s, int line) {
      int i = parse_int(s, line);
      if (i < 0 || i >= dim) throw ParseError(line, "index out of range: " + s);
      return i;
    };
    SparseMatrix T(dim, dim);
    for (const auto& e : t_lines) T.add(index(e.tok[0], e.line), index(e.tok[1], e.line), scalar(e.tok[2], e.line));
    auto sf = std::make_shared<StateField>(space, T, order);
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : y_lines) {
      int i = index(e.tok[1], e.line), n = parse_int(e.tok[2], e.line), j = index(e.tok[3], e.line);
      if (!seen.insert({i, n, j}).second) throw ParseError(e.line, "repeated product");
      GVector v;
      for (const auto& term : split_terms(e.rhs)) {
        size_t dot = term.find(kDot);
        if (dot == std::string::npos) throw ParseError(e.line, "term lacks '" + kDot + "': " + term);
        v.add(index(term.substr(dot + kDot.size()), e.line), scalar(term.substr(0, dot), e.line));
      }
      try {
        sf->set_product(i, n, j, v);
      } catch (const Error& err) {
        throw ParseError(e.line, err.what());
      }
    }
    inst.sf = sf;
    if (seen_sections.count("S")) {
      Braiding S(dim, order);
      for (const auto& e : s_lines) {
        int i = index(e.tok[1], e.line), j = index(e.tok[2], e.line);
        int m = static_cast<int>(parse_exponent(e.tok[3], "z^", e.line));
        int p = static_cast<int>(parse_exponent(e.tok[4], "h^", e.line));
        if (p < 1 || p >= file_order) throw ParseError(e.line, "braiding h-power outside [1, h_order)");
        TensorElement r(2);
        for (const auto& term : split_terms(e.rhs)) {
          size_t dot = term.find(kDot);
          if (dot == std::string::npos || term.size() < dot + kDot.size() + 5 || term.back() != ')' ||
              term[dot + kDot.size()] != '(')
            throw ParseError(e.line, "braiding terms are c" + kDot + "(k,l): " + term);
          std::string inner = term.substr(dot + kDot.size() + 1, term.size() - dot - kDot.size() - 2);
          size_t comma = inner.find(',');
          if (comma == std::string::npos) throw ParseError(e.line, "braiding terms are c" + kDot + "(k,l): " + term);
          r.add({index(inner.substr(0, comma), e.line), index(inner.substr(comma + 1), e.line), -1},
                HScalar(parse_rational(term.substr(0, dot), e.line)));
        }
        if (p >= order) continue;
        try {
          S.add(i, j, m, p, r);
        } catch (const Error& err) {
          throw ParseError(e.line, err.what());
        }
      }
      inst.S = std::move(S);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  return inst;
}

Instance build_instance(const BuildParams& params) {
  Rational level;
  if (level.set_str(params.level, 10) != 0 || level.get_den() == 0) throw Error("bad level " + params.level);
  level.canonicalize();
  StateField built = [&] {
    if (params.kind == "affine_sl2") return build_affine_sl2(level, params.cutoff, params.h_order);
    if (params.kind == "commutative") return build_commutative(params.generators, params.cutoff, params.h_order);
    if (params.kind == "vacuum") return build_vacuum_only(params.cutoff, params.h_order);
    throw Error("unknown kind " + params.kind);
  }();
  auto sf = std::make_shared<const StateField>(std::move(built));
  Instance inst;
  inst.sf = sf;
  inst.win = default_windows(sf->cutoff());
  const std::string& how = params.braiding;
  if (how == "none") return inst;
  auto count_after = [&](size_t prefix) {
    try {
      size_t used = 0;
      long v = std::stol(how.substr(prefix), &used);
      if (used == how.size() - prefix) return v;
    } catch (const std::logic_error&) {
    }
    throw Error("unknown braiding " + how);
  };
  QuantumInstance q = [&] {
    if (how == "trivial") return wrap_trivial_braiding(sf);
    if (how.rfind("seeded:", 0) == 0) return seeded_control_braiding(sf, static_cast<unsigned>(count_after(7)));
    if (how.rfind("swap:", 0) == 0)
      return make_control_braiding(sf, swap_minus_identity(*sf), static_cast<int>(count_after(5)));
    throw Error("unknown braiding " + how);
  }();
  inst.S = q.S;
  inst.control = q.control;
  return inst;
}

std::vector<std::string> commutator_states(const Instance& inst, int a, int b) {
  const StateField& sf = *inst.sf;
  if (sf.weight(a) + sf.weight(b) > sf.cutoff()) throw Error("pair is heavier than the cutoff");
  TripleKernel k(sf, a, b, sf.vacuum(), inst.win);
  VectorDist d = k.first() - k.second();
  std::vector<std::string> out;
  // c^j(w)|0> = e^{wT} a_(j)b, so its constant term names the field.
  const Exp zero{0, 0};
  for (const auto& c : decompose_local(d, sf.h_order(), inst.win.max_witness))
    out.push_back(c.in_box(zero) ? pretty(sf.space(), c.coeff(zero)) : "(outside window)");
  return out;
}

int basis_index(const StateField& sf, const std::string& label) {
  int i = sf.space().index_of(label);
  if (i >= 0) return i;
  try {
    size_t used = 0;
    i = std::stoi(label, &used);
    if (used == label.size() && i >= 0 && i < sf.dim()) return i;
  } catch (const std::logic_error&) {
  }
  throw IndexOutOfRange("unknown basis vector " + label);
}

Instance read_instance(const std::string& path, std::optional<int> h_order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), h_order);
}

std::string pretty(const GradedSpace& s, const GVector& v) {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : v.coords()) {
    if (!out.empty()) out += " + ";
    out += coeff_str(c) + kDot + s.name(i);
  }
  return out;
}

std::string pretty(const GradedSpace& s, const TensorElement& t) {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : t.terms()) {
    if (!out.empty()) out += " + ";
    out += coeff_str(c) + kDot + "(" + s.name(k[0]);
    for (int i = 1; i < t.rank(); ++i) out += "," + s.name(k[i]);
    out += ")";
  }
  return out;
}

std::string report_json(const CheckReport& r) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  auto bound = [](long b) { return b <= -kInf || b >= kInf ? ordered_json(nullptr) : ordered_json(b); };
  ordered_json j;
  j["check"] = r.check;
  j["a"] = opt(r.a);
  j["b"] = opt(r.b);
  j["c"] = opt(r.c);
  j["n"] = opt(r.n);
  j["h_order"] = r.h_order;
  j["status"] = status_name(r.status);
  j["control"] = r.control;
  ordered_json w = ordered_json::array();
  for (const auto& x : r.witness) w.push_back(opt(x));
  j["witness"] = w;
  j["first_failing_h_order"] = r.failed() ? ordered_json(r.first_failing_h_order) : ordered_json(nullptr);
  ordered_json box = ordered_json::object();
  for (size_t i = 0; i < r.box.size() && i < r.box_vars.size(); ++i)
    box[r.box_vars[i]] = ordered_json::array({bound(r.box[i].lo), bound(r.box[i].hi)});
  j["box"] = box;
  j["location"] = r.location.empty() ? ordered_json(nullptr) : ordered_json(r.location);
  j["detail"] = r.detail.empty() ? ordered_json(nullptr) : ordered_json(r.detail);
  j["elapsed_ms"] = std::round(r.elapsed_ms * 1000.0) / 1000.0;
  return j.dump();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v = classical_names();
    v.push_back("holomorphic");
    for (const auto& n : quantum_names()) v.push_back(n);
    return v;
  }();
  return k;
}

std::vector<std::array<int, 3>> select_triples(const StateField& sf,
                                               const std::optional<std::pair<unsigned, int>>& sample) {
  std::vector<std::array<int, 3>> all;
  for (int a = 0; a < sf.dim(); ++a)
    for (int b = 0; b < sf.dim(); ++b)
      for (int c = 0; c < sf.dim(); ++c)
        if (weight_compatible(sf, a, b, c)) all.push_back({a, b, c});
  if (!sample || sample->second >= static_cast<int>(all.size())) return all;
  if (sample->second < 0) throw Error("sample count must be nonnegative");
  // Partial Fisher-Yates on the raw engine output, which is portable.
  std::mt19937 rng(sample->first);
  const size_t count = static_cast<size_t>(sample->second);
  for (size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng() % (all.size() - i)]);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

int default_workers() {
  if (const char* env = std::getenv("QVA_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CheckReport> run_checks(const Instance& inst, const RunOptions& opt) {
  const StateField& sf = *inst.sf;
  const QuantumInstance q = inst.quantum();
  Windows win = inst.win;
  if (opt.max_witness) win.max_witness = *opt.max_witness;
  auto [n_lo, n_hi] = opt.n_range.value_or(default_n_range(sf));
  if (n_lo > n_hi) throw Error("empty n-range");

  std::set<std::string> wanted;
  const std::string& suite = opt.suite;
  if (suite == "classical") {
    wanted.insert(classical_names().begin(), classical_names().end());
  } else if (suite == "quantum") {
    wanted.insert(quantum_names().begin(), quantum_names().end());
  } else if (suite == "equivalence") {
    for (Suite s : all_suites()) wanted.insert(suite_members(s).begin(), suite_members(s).end());
  } else if (std::find(check_names().begin(), check_names().end(), suite) != check_names().end()) {
    wanted.insert(suite);
  } else {
    throw Error("unknown suite or check: " + suite);
  }
  auto want = [&](const std::string& n) { return wanted.count(n) > 0; };
  auto any = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      if (want(n)) return true;
    return false;
  };
  // Exact S-commutativity needs products without singular terms.
  const bool gate_holomorphic = suite == "quantum";
  const bool holomorphic = check_holomorphic(sf).status == Status::kPass;

  const auto triples = select_triples(sf, opt.sample);
  std::set<std::pair<int, int>> pair_set;
  for (const auto& [a, b, c] : triples) pair_set.insert({a, b});
  const std::vector<std::pair<int, int>> pairs(pair_set.begin(), pair_set.end());

  std::vector<Task> tasks;
  if (want("axioms")) tasks.push_back([&] { return std::vector<CheckReport>{validate_axioms(sf)}; });
  if (want("holomorphic")) tasks.push_back([&] { return std::vector<CheckReport>{check_holomorphic(sf)}; });
  for (const auto& name : braid_prop_names()) {
    if (!want(name)) continue;
    for (BraidProp p : {BraidProp::kVacuum, BraidProp::kLeftShift, BraidProp::kRightShift, BraidProp::kTotalShift,
                        BraidProp::kUnitarity, BraidProp::kQybe})
      for (HexagonMode m : {HexagonMode::kRaw, HexagonMode::kComposed})
        if ("braiding_" + prop_name(p) + (m == HexagonMode::kRaw ? "_raw" : "_composed") == name)
          tasks.push_back([&, p, m] { return std::vector<CheckReport>{check_braiding_props(q, p, m, win)}; });
  }
  for (const char* name : {"s_commutativity", "scomm_commutation"})
    if (want(name) && gate_holomorphic && !holomorphic) {
      wanted.erase(name);
      tasks.push_back([&, name] { return std::vector<CheckReport>{skipped(name, q, "instance is not holomorphic")}; });
    }
  if (any({"s_product_vacuum_left", "s_product_vacuum_right"}))
    for (int a = 0; a < sf.dim(); ++a)
      tasks.push_back([&, a] {
        std::vector<CheckReport> out;
        for (int n = n_lo; n <= n_hi; ++n) {
          if (want("s_product_vacuum_left")) out.push_back(check_s_product_vacuum_left(q, a, n));
          if (want("s_product_vacuum_right")) out.push_back(check_s_product_vacuum_right(q, a, n));
        }
        return out;
      });
  for (const auto& [a, b] : pairs)
    tasks.push_back([&, a = a, b = b] {
      std::vector<CheckReport> out;
      if (want("skewsymmetry")) out.push_back(check_skewsymmetry(sf, a, b));
      if (want("ys_equals_yop")) out.push_back(check_ys_equals_yop(q, a, b));
      if (want("scomm_commutation")) out.push_back(check_scomm_commutation(q, a, b));
      for (int n = n_lo; n <= n_hi; ++n) {
        if (want("nproduct_identity")) out.push_back(check_nproduct_identity(sf, a, b, n, win));
        if (want("quantum_nproduct_identity")) out.push_back(check_quantum_nproduct_identity(q, a, b, n, win));
        if (want("s_product_shift")) out.push_back(check_s_product_shift(q, a, b, n));
        if (want("s_product_derivation")) out.push_back(check_s_product_derivation(q, a, b, n));
      }
      return out;
    });
  const bool classical_triple = any({"locality", "associativity", "jacobi", "borcherds"});
  const bool quantum_triple = any({"s_locality", "quasi_associativity", "associativity_q", "hexagon_raw",
                                   "hexagon_composed", "s_jacobi", "quantum_borcherds", "s_commutativity"});
  if (classical_triple || quantum_triple)
    for (const auto& [a, b, c] : triples)
      tasks.push_back([&, a = a, b = b, c = c] {
        std::vector<CheckReport> out;
        if (classical_triple) {
          TripleKernel k(sf, a, b, c, win);
          if (want("locality")) out.push_back(k.locality());
          if (want("associativity")) out.push_back(k.associativity());
          if (want("jacobi")) out.push_back(k.jacobi(n_lo, n_hi));
          if (want("borcherds"))
            for (int n = n_lo; n <= n_hi; ++n) out.push_back(k.borcherds(n));
        }
        if (quantum_triple) {
          QuantumTriple t(q, a, b, c, win);
          if (want("s_locality")) out.push_back(t.s_locality());
          if (want("quasi_associativity")) out.push_back(t.quasi_associativity());
          if (want("associativity_q")) out.push_back(t.associativity());
          if (want("hexagon_raw")) out.push_back(t.hexagon(HexagonMode::kRaw));
          if (want("hexagon_composed")) out.push_back(t.hexagon(HexagonMode::kComposed));
          if (want("s_jacobi")) out.push_back(t.jacobi(n_lo, n_hi));
          if (want("s_commutativity")) out.push_back(t.s_commutativity());
          if (want("quantum_borcherds"))
            for (int n = n_lo; n <= n_hi; ++n) out.push_back(t.borcherds(n));
        }
        return out;
      });

  std::vector<CheckReport> records = run_pool(tasks, opt.workers > 0 ? opt.workers : default_workers());
  for (auto& r : records) r.control = r.control || inst.control;
  if (suite == "equivalence") {
    std::vector<CheckReport> verdicts;
    for (Suite s : all_suites()) verdicts.push_back(suite_verdict(s, records));
    CheckReport agree = suites_agree(verdicts);
    for (auto& v : verdicts) records.push_back(std::move(v));
    records.push_back(std::move(agree));
  }
  auto key = [](const CheckReport& r) {
    return std::make_tuple(r.check, r.a.value_or(-1), r.b.value_or(-1), r.c.value_or(-1), r.n.value_or(INT_MIN));
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const CheckReport& x, const CheckReport& y) { return key(x) < key(y); });
  return records;
}

int exit_code(const std::vector<CheckReport>& records) {
  for (const auto& r : records)
    if (r.failed() && !r.control) return 1;
  return 0;
}

}  // namespace qva
