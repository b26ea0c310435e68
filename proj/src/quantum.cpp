#include "qva/quantum.hpp"

#include <algorithm>

namespace qva {

namespace {

const std::vector<std::string> kZW{"z", "w"};

HScalar sign_power(int s, long p) { return (s < 0 && (p & 1)) ? HScalar(-1) : HScalar(1); }

// Splits a tensor distribution into one scalar distribution per basis key,
// each carrying the axes of the whole.
std::map<TensorElement::Key, ScalarDist> split_by_key(const TensorDist& d) {
  std::map<TensorElement::Key, ScalarDist> parts;
  for (const auto& [e, t] : d.terms())
    for (const auto& [k, c] : t.terms()) {
      auto it = parts.find(k);
      if (it == parts.end()) {
        ScalarDist s(d.vars());
        s.set_axes(d.axes());
        it = parts.emplace(k, std::move(s)).first;
      }
      it->second.add(e, c);
    }
  return parts;
}

// sum over keys of part_key * field(key).
template <class C, class Field>
WindowedDist<C> compose_keys(const TensorDist& d, Field field) {
  std::optional<WindowedDist<C>> acc;
  for (const auto& [key, part] : split_by_key(d)) {
    WindowedDist<C> term = dist_mul(part, field(key));
    if (acc)
      *acc += term;
    else
      acc = std::move(term);
  }
  if (acc) return *acc;
  WindowedDist<C> r(d.vars());
  r.set_axes(d.axes());
  return r;
}

void require_rank(const TensorDist& d, int rank, const char* what) {
  for (const auto& [e, t] : d.terms())
    if (t.rank() != rank) throw DimensionMismatch(std::string(what) + " needs rank-" + std::to_string(rank) + " tensors");
}

// R_m applied on slots (i, j) of t.
TensorElement apply_tail(const Braiding& S, const TensorElement& t, int i, int j, int m) {
  TensorElement out(t.rank());
  for (const auto& [key, c] : t.terms()) {
    const auto& tail = S.tail(key[i], key[j]);
    auto it = tail.find(m);
    if (it == tail.end()) continue;
    for (const auto& [rk, rc] : it->second.terms()) {
      TensorElement::Key n = key;
      n[i] = rk[0];
      n[j] = rk[1];
      out.add(n, c * rc);
    }
  }
  return out;
}

// Y(var)(k (x) l) in vars, with an optional T on one slot folded into the field:
// Y(Tk, z) = d_z Y(k, z) and Y(z)(k (x) Tl) = (T - d_z) Y(z)(k (x) l).
VectorDist pair_field(const StateField& sf, int k, int l, const std::string& var,
                      const std::vector<std::string>& vars, int t_slot = -1) {
  VectorDist f = apply_Y(sf, GVector::basis(k), GVector::basis(l), var);
  if (t_slot == 0) f = derivative(f, var);
  if (t_slot == 1) f = f.map_coeffs([&](const GVector& v) { return sf.apply_T(v); }) - derivative(f, var);
  return promote(f, vars);
}

VectorDist compose_Y_with(const StateField& sf, const TensorDist& d, const std::string& var, int t_slot) {
  require_rank(d, 2, "Y composition");
  d.var_index(var);
  return compose_keys<GVector>(d, [&](const TensorElement::Key& k) {
    return pair_field(sf, k[0], k[1], var, d.vars(), t_slot);
  });
}

GVector t_power(const StateField& sf, GVector v, int n) {
  Rational f = 1;
  for (int i = 1; i <= n; ++i) {
    v = sf.apply_T(v);
    f *= i;
  }
  return HScalar(Rational(1 / f)) * v;
}

TensorDist apply_T_slot(const StateField& sf, const TensorDist& d, int slot) {
  return d.map_coeffs([&](const TensorElement& t) {
    TensorElement out(t.rank());
    for (const auto& [k, c] : t.terms()) {
      GVector moved = sf.apply_T(GVector::basis(k[slot]));
      for (const auto& [i, x] : moved.coords()) {
        TensorElement::Key n = k;
        n[slot] = i;
        out.add(n, c * x);
      }
    }
    return out;
  });
}

std::string pair_label(const StateField& sf, int a, int b) {
  return "(" + sf.space().name(a) + "," + sf.space().name(b) + ") ";
}

CheckReport start(const QuantumInstance& q, const std::string& name) {
  CheckReport r;
  r.check = name;
  r.h_order = q.h_order();
  r.control = q.control;
  return r;
}

std::string mode_suffix(HexagonMode m) { return m == HexagonMode::kRaw ? "_raw" : "_composed"; }

}  // namespace

ScalarDist arg_power(const Arg& arg, long m, long small_hi, const std::vector<std::string>& vars) {
  if (arg.s0 == 0 && arg.s1 == 0) throw Error("argument is identically zero");
  if (vars.size() == 1) {
    if (arg.s1 != 0) throw Error("two-variable argument in a one-variable distribution");
    return monomial(vars, {m, 0}, sign_power(arg.s0, m));
  }
  if (arg.s1 == 0) return monomial(vars, {m, 0}, sign_power(arg.s0, m));
  if (arg.s0 == 0) return monomial(vars, {0, m}, sign_power(arg.s1, m));
  return binom_expand(m, arg.s0, arg.s1, arg.order, small_hi, vars);
}

Braiding::Braiding(int dim, int h_order) : dim_(dim), h_order_(h_order) {
  if (h_order < 1) throw ValidationError("h-order must be positive");
}

void Braiding::add(int i, int j, int m, int p, const TensorElement& r) {
  if (p < 1) throw ValidationError("braiding tail terms need a positive h-power");
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw ValidationError("braiding index out of range");
  if (r.rank() != 2 && !r.is_zero()) throw DimensionMismatch("braiding values are rank-2 tensors");
  for (const auto& [k, c] : r.terms())
    if (k[0] < 0 || k[1] < 0 || k[0] >= dim_ || k[1] >= dim_) throw ValidationError("braiding image out of range");
  TensorElement scaled = HScalar::h_power(p, h_order_) * r;
  if (scaled.is_zero()) return;
  auto& slot = tail_[{i, j}];
  auto it = slot.find(m);
  if (it == slot.end()) {
    slot.emplace(m, scaled);
  } else {
    it->second += scaled;
    if (it->second.is_zero()) slot.erase(it);
  }
  if (slot.empty()) tail_.erase({i, j});
}

const std::map<int, TensorElement>& Braiding::tail(int i, int j) const {
  static const std::map<int, TensorElement> kNone;
  auto it = tail_.find({i, j});
  return it == tail_.end() ? kNone : it->second;
}

std::set<int> Braiding::exponents() const {
  std::set<int> out;
  for (const auto& [pair, by_m] : tail_)
    for (const auto& [m, t] : by_m) out.insert(m);
  return out;
}

std::set<int> Braiding::h_powers() const {
  std::set<int> out;
  for (const auto& [pair, by_m] : tail_)
    for (const auto& [m, t] : by_m)
      for (const auto& [k, c] : t.terms())
        for (int p = 1; p < static_cast<int>(c.coeffs().size()); ++p)
          if (sgn(c.coeffs()[p]) != 0) out.insert(p);
  return out;
}

Braiding Braiding::truncated(int p) const {
  Braiding out(dim_, h_order_);
  for (const auto& [pair, by_m] : tail_)
    for (const auto& [m, t] : by_m) {
      TensorElement cut(t.rank());
      for (const auto& [k, c] : t.terms()) {
        std::vector<Rational> coeffs = c.coeffs();
        if (static_cast<int>(coeffs.size()) > p + 1) coeffs.resize(p + 1);
        cut.add(k, HScalar::from_coeffs(std::move(coeffs), h_order_));
      }
      if (!cut.is_zero()) out.tail_[pair][m] = std::move(cut);
    }
  return out;
}

TensorDist constant_tensor(const TensorElement& t, const std::vector<std::string>& vars) {
  TensorDist d(vars);
  std::vector<Axis> ax(d.naxes(), Axis{Interval{}, Interval{0, 0}});
  d.set_axes(ax);
  d.add({0, 0}, t);
  return d;
}

TensorDist lift_S(const QuantumInstance& q, const TensorDist& d, int i, int j, const Arg& arg, long small_hi) {
  int rank = 0;
  for (const auto& [e, t] : d.terms()) rank = std::max(rank, t.rank());
  if (i == j || i < 0 || j < 0 || (rank > 0 && (i >= rank || j >= rank)))
    throw DimensionMismatch("braiding slots out of range");
  TensorDist out = d;
  for (int m : q.S.exponents()) {
    TensorDist part = d.map_coeffs([&](const TensorElement& t) { return apply_tail(q.S, t, i, j, m); });
    out += dist_mul(arg_power(arg, m, small_hi, d.vars()), part);
  }
  return out;
}

TensorDist apply_S(const QuantumInstance& q, const GVector& a, const GVector& b) {
  return lift_S(q, constant_tensor(tensor(a, b), {"z"}), 0, 1, Arg::z(), kInf);
}

VectorDist compose_Y(const StateField& sf, const TensorDist& d, const std::string& var) {
  return compose_Y_with(sf, d, var, -1);
}

VectorDist compose_nested(const StateField& sf, const TensorDist& d) {
  require_rank(d, 3, "nested composition");
  return compose_keys<GVector>(d, [&](const TensorElement::Key& k) { return nested(sf, k[0], k[1], k[2], d.vars()); });
}

VectorDist compose_nested_swapped(const StateField& sf, const TensorDist& d) {
  require_rank(d, 3, "nested composition");
  if (d.vars() != kZW) throw Error("swapped composition works in {z, w}");
  return compose_keys<GVector>(
      d, [&](const TensorElement::Key& k) { return swap_vars(nested(sf, k[0], k[1], k[2], {"w", "z"})); });
}

VectorDist compose_sum_nested(const StateField& sf, const TensorDist& d) {
  require_rank(d, 3, "nested composition");
  return compose_keys<GVector>(
      d, [&](const TensorElement::Key& k) { return substitute_sum(nested(sf, k[0], k[1], k[2], d.vars())); });
}

TensorDist compose_left(const StateField& sf, const TensorDist& d) {
  require_rank(d, 3, "left composition");
  const std::string& var = d.vars().at(0);
  return compose_keys<TensorElement>(d, [&](const TensorElement::Key& k) {
    VectorDist f = apply_Y(sf, GVector::basis(k[0]), GVector::basis(k[1]), var);
    // Heavier products are missing from the table but still feed later slots.
    f.axis(0).box.hi = sf.cutoff() - sf.weight(k[0]) - sf.weight(k[1]);
    f.axis(0).supp.hi = kInf;
    f.prune();
    GVector third = GVector::basis(k[2]);
    return promote(f.map_coeffs([&](const GVector& v) { return tensor(v, third); }), d.vars());
  });
}

GVector s_n_product(const QuantumInstance& q, const GVector& a, const GVector& b, int n) {
  VectorDist F = compose_Y(*q.sf, apply_S(q, a, b), "z");
  Exp e{-n - 1, 0};
  if (!F.in_box(e) && F.axis(0).supp.contains(e[0]))
    throw ResidueOutsideWindow("exponent " + std::to_string(e[0]) + " of Y(z)S(z) is not trusted");
  return F.coeff(e);
}

ProductSource quantum_products(const QuantumInstance& q, int a, int b) {
  const StateField& sf = *q.sf;
  auto F = std::make_shared<VectorDist>(compose_Y(sf, apply_S(q, GVector::basis(a), GVector::basis(b)), "z"));
  const int D = sf.cutoff();
  // (n-independent part of the weight, z-shift) for every piece of S(z)(a (x) b).
  std::vector<std::pair<int, int>> pieces{{sf.weight(a) + sf.weight(b), 0}};
  for (const auto& [m, t] : q.S.tail(a, b))
    for (const auto& [k, c] : t.terms()) pieces.push_back({sf.weight(k[0]) + sf.weight(k[1]), m});
  ProductSource p;
  p.product = [F](int m) {
    Exp e{-m - 1, 0};
    if (!F->in_box(e) && F->axis(0).supp.contains(e[0]))
      throw ResidueOutsideWindow("exponent " + std::to_string(e[0]) + " of Y(z)S(z) is not trusted");
    return F->coeff(e);
  };
  p.testable = [pieces, D](int n) {
    for (auto [w, m] : pieces)
      if (w - n - m - 1 > D) return false;
    return true;
  };
  p.top = pieces[0].first - 1;
  for (auto [w, m] : pieces) p.top = std::max(p.top, w - 1 - m);
  return p;
}

VectorDist quantum_n_product_fields(const QuantumInstance& q, int a, int b, int n, int c, const Windows& win) {
  const StateField& sf = *q.sf;
  const std::vector<std::string> xz{"x", "z"};
  TensorDist braided =
      lift_S(q, constant_tensor(TensorElement::basis3(a, b, c), xz), 0, 1, Arg::z_minus_w(Expansion::kFirst), win.z.hi);
  VectorDist first = compose_nested(sf, braided);
  VectorDist second = swap_vars(nested(sf, b, a, c, {"z", "x"}));
  return residue(borcherds_lhs(first, second, n), "x");
}

std::string prop_name(BraidProp p) {
  switch (p) {
    case BraidProp::kVacuum: return "vacuum";
    case BraidProp::kLeftShift: return "left_shift";
    case BraidProp::kRightShift: return "right_shift";
    case BraidProp::kTotalShift: return "total_shift";
    case BraidProp::kUnitarity: return "unitarity";
    case BraidProp::kQybe: return "qybe";
  }
  return "unknown";
}

std::string describe(const StateField& sf, const TensorElement& t) { return t.str(sf.space()); }

QuantumTriple::QuantumTriple(const QuantumInstance& q, int a, int b, int c, const Windows& win)
    : QuantumTriple(q, a, b, c, win, false) {}

QuantumTriple::QuantumTriple(const QuantumInstance& q, int a, int b, int c, const Windows& win, bool single)
    : q_(q), sf_(*q.sf), a_(a), b_(b), c_(c), win_(win) {
  sf_.space().check_index(a);
  sf_.space().check_index(b);
  sf_.space().check_index(c);
  if (single || q.S.trivial()) return;
  std::vector<int> levels{0};
  for (int p : q.S.h_powers()) levels.push_back(p);
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    Cut cut;
    cut.q = std::make_unique<QuantumInstance>(QuantumInstance{q.sf, q.S.truncated(levels[i]), q.control});
    cut.t.reset(new QuantumTriple(*cut.q, a, b, c, win, true));
    cut.trusted_hi = levels[i + 1] - 1;
    cuts_.push_back(std::move(cut));
  }
}

// A failure counts when its h-order is trusted on the cut that found it; the
// lowest counted failure wins over the report of the full braiding.
template <class F>
CheckReport QuantumTriple::over_cuts(F check) const {
  if (cuts_.empty()) return check(*this);
  Stopwatch sw;
  CheckReport out = check(*this);
  for (const Cut& cut : cuts_) {
    CheckReport r = check(*cut.t);
    if (!r.failed() || r.first_failing_h_order > cut.trusted_hi) continue;
    if (!out.failed() || r.first_failing_h_order < out.first_failing_h_order) {
      out.status = Status::kFail;
      out.first_failing_h_order = r.first_failing_h_order;
      out.location = r.location;
    }
  }
  out.elapsed_ms = sw.ms();
  return out;
}

CheckReport QuantumTriple::locality_over_cuts(const std::string& name, VectorDist (QuantumTriple::*diff)() const,
                                              int sign) const {
  Stopwatch sw;
  CheckReport r = base(name);
  std::vector<LocalityResult> results;
  std::vector<int> trusted;
  for (const Cut& cut : cuts_) {
    results.push_back(locality_order(((*cut.t).*diff)(), q_.h_order(), win_.max_witness, sign));
    trusted.push_back(cut.trusted_hi);
  }
  VectorDist d = (this->*diff)();
  results.push_back(locality_order(d, q_.h_order(), win_.max_witness, sign));
  trusted.push_back(q_.h_order() - 1);
  fill_witness(r, merge_layers(results, trusted), d.vars());
  r.elapsed_ms = sw.ms();
  return r;
}

const VectorDist& QuantumTriple::braided_first() const {
  if (!braided_first_) {
    TensorDist t = lift_S(q_, constant_tensor(TensorElement::basis3(a_, b_, c_), kZW), 0, 1,
                          Arg::z_minus_w(Expansion::kFirst), small_hi());
    braided_first_ = compose_nested(sf_, t);
  }
  return *braided_first_;
}

const TripleKernel& QuantumTriple::classical() const {
  if (!classical_) classical_.emplace(sf_, a_, b_, c_, win_);
  return *classical_;
}

const TripleKernel& QuantumTriple::braided() const {
  if (!braided_)
    braided_.emplace(sf_, a_, b_, c_, win_, braided_first(), classical().second(), classical().iterated(),
                     quantum_products(q_, a_, b_));
  return *braided_;
}

CheckReport QuantumTriple::base(const std::string& name) const {
  CheckReport r = start(q_, name);
  r.a = a_;
  r.b = b_;
  r.c = c_;
  return r;
}

VectorDist QuantumTriple::s_locality_diff() const { return braided_first() - classical().second(); }

CheckReport QuantumTriple::s_locality() const {
  return locality_over_cuts("s_locality", &QuantumTriple::s_locality_diff, -1);
}

CheckReport QuantumTriple::s_commutativity() const {
  return over_cuts([](const QuantumTriple& t) { return t.s_commutativity_single(); });
}

CheckReport QuantumTriple::s_commutativity_single() const {
  Stopwatch sw;
  CheckReport r = base("s_commutativity");
  record(r, braided_first(), classical().second(), [&](const GVector& v) { return describe(sf_, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport QuantumTriple::quasi_associativity() const {
  return locality_over_cuts("quasi_associativity", &QuantumTriple::quasi_associativity_diff, +1);
}

VectorDist QuantumTriple::quasi_associativity_diff() const {
  TensorDist abc = constant_tensor(TensorElement::basis3(a_, b_, c_), kZW);
  TensorDist inner = lift_S(q_, lift_S(q_, abc, 0, 2, Arg::z_plus_w(Expansion::kFirst), small_hi()), 1, 2, Arg::w(),
                            small_hi());
  VectorDist left = compose_sum_nested(sf_, inner);
  VectorDist right = compose_Y(sf_, lift_S(q_, compose_left(sf_, abc), 0, 1, Arg::w(), small_hi()), "w");
  return right - left;
}

CheckReport QuantumTriple::associativity() const {
  CheckReport r = classical().associativity();
  r.check = "associativity_q";
  r.control = q_.control;
  return r;
}

CheckReport QuantumTriple::hexagon(HexagonMode mode) const {
  return over_cuts([mode](const QuantumTriple& t) { return t.hexagon_single(mode); });
}

CheckReport QuantumTriple::hexagon_single(HexagonMode mode) const {
  Stopwatch sw;
  CheckReport r = base("hexagon" + mode_suffix(mode));
  TensorDist abc = constant_tensor(TensorElement::basis3(a_, b_, c_), kZW);
  TensorDist left = lift_S(q_, compose_left(sf_, abc), 0, 1, Arg::w(), small_hi());
  TensorDist inner = lift_S(q_, lift_S(q_, abc, 0, 2, Arg::z_plus_w(Expansion::kSecond), small_hi()), 1, 2, Arg::w(),
                            small_hi());
  TensorDist right = compose_left(sf_, inner);
  if (mode == HexagonMode::kRaw)
    record(r, left, right, [&](const TensorElement& t) { return describe(sf_, t); });
  else
    record(r, compose_Y(sf_, left, "w"), compose_Y(sf_, right, "w"),
           [&](const GVector& v) { return describe(sf_, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport QuantumTriple::qybe(HexagonMode mode) const {
  return over_cuts([mode](const QuantumTriple& t) { return t.qybe_single(mode); });
}

CheckReport QuantumTriple::qybe_single(HexagonMode mode) const {
  Stopwatch sw;
  CheckReport r = base("qybe" + mode_suffix(mode));
  TensorDist abc = constant_tensor(TensorElement::basis3(a_, b_, c_), kZW);
  const Arg diff = Arg::z_minus_w(Expansion::kFirst);
  TensorDist left = lift_S(q_, abc, 1, 2, Arg::w(), small_hi());
  left = lift_S(q_, left, 0, 2, Arg::z(), small_hi());
  left = lift_S(q_, left, 0, 1, diff, small_hi());
  TensorDist right = lift_S(q_, abc, 0, 1, diff, small_hi());
  right = lift_S(q_, right, 0, 2, Arg::z(), small_hi());
  right = lift_S(q_, right, 1, 2, Arg::w(), small_hi());
  if (mode == HexagonMode::kRaw)
    record(r, left, right, [&](const TensorElement& t) { return describe(sf_, t); });
  else
    record(r, compose_nested(sf_, left), compose_nested(sf_, right),
           [&](const GVector& v) { return describe(sf_, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport QuantumTriple::borcherds(int n) const {
  return over_cuts([n](const QuantumTriple& t) {
    CheckReport r = t.braided().borcherds(n);
    r.check = "quantum_borcherds";
    r.control = t.q_.control;
    return r;
  });
}

CheckReport QuantumTriple::nproduct(int n) const {
  return over_cuts([n](const QuantumTriple& t) {
    CheckReport r = t.braided().nproduct(n);
    r.check = "quantum_nproduct_identity";
    r.control = t.q_.control;
    return r;
  });
}

CheckReport QuantumTriple::jacobi(int n_lo, int n_hi) const {
  return over_cuts([=](const QuantumTriple& t) { return t.jacobi_single(n_lo, n_hi); });
}

CheckReport QuantumTriple::jacobi_single(int n_lo, int n_hi) const {
  TensorDist bac = constant_tensor(TensorElement::basis3(b_, a_, c_), kZW);
  VectorDist second =
      compose_nested_swapped(sf_, lift_S(q_, bac, 0, 1, Arg::w_minus_z(Expansion::kSecond), small_hi()));
  TripleKernel k(sf_, a_, b_, c_, win_, classical().first(), std::move(second), classical().iterated(),
                 classical_products(sf_, a_, b_));
  CheckReport r = k.jacobi(n_lo, n_hi);
  r.check = "s_jacobi";
  r.control = q_.control;
  return r;
}

CheckReport check_s_locality(const QuantumInstance& q, int a, int b, int c, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).s_locality();
}

CheckReport check_quasi_associativity(const QuantumInstance& q, int a, int b, int c, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).quasi_associativity();
}

CheckReport check_associativity_q(const QuantumInstance& q, int a, int b, int c, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).associativity();
}

CheckReport check_hexagon(const QuantumInstance& q, int a, int b, int c, HexagonMode mode, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).hexagon(mode);
}

CheckReport check_quantum_borcherds(const QuantumInstance& q, int a, int b, int c, int n, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).borcherds(n);
}

CheckReport check_s_jacobi(const QuantumInstance& q, int a, int b, int c, const Windows& win) {
  auto [lo, hi] = default_n_range(*q.sf);
  return QuantumTriple(q, a, b, c, win).jacobi(lo, hi);
}

CheckReport check_s_commutativity(const QuantumInstance& q, int a, int b, int c, const Windows& win) {
  return QuantumTriple(q, a, b, c, win).s_commutativity();
}

CheckReport check_quantum_nproduct_identity(const QuantumInstance& q, int a, int b, int n, const Windows& win) {
  Stopwatch sw;
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "quantum_nproduct_identity");
  r.a = a;
  r.b = b;
  r.n = n;
  int ran = 0;
  for (int c = 0; c < sf.dim(); ++c) {
    if (!weight_compatible(sf, a, b, c)) continue;
    CheckReport part = QuantumTriple(q, a, b, c, win).nproduct(n);
    if (part.status == Status::kSkipped) continue;
    if (part.failed()) part.location = "c=" + sf.space().name(c) + " " + part.location;
    r.absorb(part);
    ++ran;
  }
  if (ran == 0) r.status = Status::kSkipped;
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_ys_equals_yop(const QuantumInstance& q, int a, int b) {
  Stopwatch sw;
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "ys_equals_yop");
  r.a = a;
  r.b = b;
  GVector va = GVector::basis(a), vb = GVector::basis(b);
  record(r, compose_Y(sf, apply_S(q, va, vb), "z"), y_op(sf, va, vb),
         [&](const GVector& v) { return describe(sf, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_braiding_props(const QuantumInstance& q, BraidProp which, HexagonMode mode, const Windows& win) {
  Stopwatch sw;
  const StateField& sf = *q.sf;
  const int D = sf.cutoff(), vac = sf.vacuum();
  CheckReport r = start(q, "braiding_" + prop_name(which) + mode_suffix(mode));
  const bool raw = mode == HexagonMode::kRaw;
  auto vec_describe = [&](const GVector& v) { return describe(sf, v); };
  auto ten_describe = [&](const TensorElement& t) { return describe(sf, t); };
  // Compares two tensor sides, or their images under Y(z) when composed.
  auto compare_pair = [&](const TensorDist& left, const TensorDist& right, const std::string& where) {
    if (raw)
      record(r, left, right, ten_describe, where);
    else
      record(r, compose_Y(sf, left, "z"), compose_Y(sf, right, "z"), vec_describe, where);
  };
  if (which == BraidProp::kQybe) {
    for (int a = 0; a < sf.dim(); ++a)
      for (int b = 0; b < sf.dim(); ++b)
        for (int c = 0; c < sf.dim(); ++c) {
          if (!weight_compatible(sf, a, b, c)) continue;
          CheckReport part = QuantumTriple(q, a, b, c, win).qybe(mode);
          if (part.failed())
            part.location = "(" + sf.space().name(a) + "," + sf.space().name(b) + "," + sf.space().name(c) + ") " +
                            part.location;
          r.absorb(part);
        }
    r.elapsed_ms = sw.ms();
    return r;
  }
  for (int a = 0; a < sf.dim(); ++a)
    for (int b = 0; b < sf.dim(); ++b) {
      const int wa = sf.weight(a), wb = sf.weight(b);
      if (wa + wb > D) continue;
      GVector va = GVector::basis(a), vb = GVector::basis(b);
      std::string where = pair_label(sf, a, b);
      TensorDist s = apply_S(q, va, vb);
      switch (which) {
        case BraidProp::kVacuum:
          if (a == vac || b == vac) compare_pair(s, constant_tensor(tensor(va, vb), {"z"}), where);
          break;
        case BraidProp::kLeftShift:
        case BraidProp::kRightShift: {
          // [T (x) 1, S(z)] = -d_z S(z) and [1 (x) T, S(z)] = d_z S(z).
          const bool left = which == BraidProp::kLeftShift;
          if ((left ? wa : wb) + 1 > D) break;
          const int slot = left ? 0 : 1;
          TensorDist moved = left ? apply_S(q, sf.apply_T(va), vb) : apply_S(q, va, sf.apply_T(vb));
          TensorDist ds = derivative(s, "z");
          if (left) ds = ds.scaled(HScalar(-1));
          if (raw)
            record(r, apply_T_slot(sf, s, slot) - moved, ds, ten_describe, where);
          else
            record(r, compose_Y_with(sf, s, "z", slot) - compose_Y(sf, moved, "z"), compose_Y(sf, ds, "z"),
                   vec_describe, where);
          break;
        }
        case BraidProp::kTotalShift: {
          if (wa + 1 > D || wb + 1 > D) break;
          TensorDist moved = apply_S(q, sf.apply_T(va), vb) + apply_S(q, va, sf.apply_T(vb));
          TensorDist zero = s.shell();
          if (raw) {
            record(r, apply_T_slot(sf, s, 0) + apply_T_slot(sf, s, 1) - moved, zero, ten_describe, where);
          } else {
            VectorDist ys = compose_Y(sf, s, "z");
            VectorDist tys = ys.map_coeffs([&](const GVector& v) { return sf.apply_T(v); });
            record(r, tys - compose_Y(sf, moved, "z"), compose_Y(sf, zero, "z"), vec_describe, where);
          }
          break;
        }
        case BraidProp::kUnitarity: {
          TensorDist x = constant_tensor(tensor(va, vb), {"z"});
          TensorDist u = lift_S(q, lift_S(q, x, 1, 0, Arg::minus_z(), kInf), 0, 1, Arg::z(), kInf);
          compare_pair(u, x, where);
          break;
        }
        case BraidProp::kQybe: break;
      }
    }
  r.elapsed_ms = sw.ms();
  return r;
}

GVector normally_ordered_product(const QuantumInstance& q, const GVector& a, const GVector& b) {
  VectorDist y = apply_Y(*q.sf, a, b, "z");
  return residue(shift(y, "z", -1), "z").coeff({0, 0});
}

CheckReport check_scomm_commutation(const QuantumInstance& q, int a, int b) {
  Stopwatch sw;
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "scomm_commutation");
  r.a = a;
  r.b = b;
  GVector va = GVector::basis(a), vb = GVector::basis(b);
  TensorDist s = apply_S(q, va, vb);
  auto T0 = [&](const TensorElement& t) {
    TensorElement out(t.rank());
    for (const auto& [k, c] : t.terms()) {
      GVector moved = sf.apply_T(GVector::basis(k[0]));
      for (const auto& [i, x] : moved.coords()) out.add({i, k[1], k[2]}, c * x);
    }
    return out;
  };
  TensorDist shifted = taylor_shift(s, "z", T0, sf.cutoff());
  TensorElement res = residue(shift(shifted, "z", -1), "z").coeff({0, 0});
  GVector twisted;
  for (const auto& [k, c] : res.terms())
    twisted += c * normally_ordered_product(q, GVector::basis(k[0]), GVector::basis(k[1]));
  GVector direct = normally_ordered_product(q, vb, va);
  GVector diff = direct - twisted;
  if (!diff.is_zero()) {
    r.status = Status::kFail;
    r.first_failing_h_order = diff.lowest_order();
    r.location = ":ba: - twisted = " + describe(sf, diff);
  }
  r.elapsed_ms = sw.ms();
  return r;
}

FieldTable field_table(const QuantumInstance& q, const GVector& a, bool opposite) {
  const StateField& sf = *q.sf;
  FieldTable table;
  for (int v = 0; v < sf.dim(); ++v) {
    GVector vv = GVector::basis(v);
    VectorDist f = opposite ? y_op(sf, a, vv) : apply_Y(sf, a, vv);
    for (const auto& [e, x] : f.terms()) {
      auto it = table.try_emplace(static_cast<int>(e[0]), sf.dim(), sf.dim()).first;
      for (const auto& [k, c] : x.coords()) it->second.add(k, v, c);
    }
  }
  return table;
}

CheckReport check_quantum_goddard(const QuantumInstance& q, int a, const FieldTable& candidate, const Windows& win) {
  Stopwatch sw;
  const StateField& sf = *q.sf;
  const long D = sf.cutoff(), wa = sf.weight(a);
  CheckReport r = start(q, "quantum_goddard");
  r.a = a;
  auto hypothesis_failed = [&](const std::string& why) {
    r.status = Status::kHypothesisFailed;
    r.detail = why;
    r.elapsed_ms = sw.ms();
    return r;
  };
  auto act = [&](int e, const GVector& v) {
    auto it = candidate.find(e);
    return it == candidate.end() ? GVector() : apply_linear(it->second, v);
  };
  if (candidate.empty()) return hypothesis_failed("empty candidate");
  for (const auto& [e, m] : candidate) {
    if (m.rows() != sf.dim() || m.cols() != sf.dim()) throw DimensionMismatch("candidate matrix has the wrong size");
    for (int v = 0; v < sf.dim(); ++v)
      for (const auto& [k, c] : m.column(v))
        if (sf.weight(k) != wa + sf.weight(v) + e)
          return hypothesis_failed("candidate is not homogeneous at z^" + std::to_string(e) + " on " +
                                   sf.space().name(v));
  }
  const int e_lo = candidate.begin()->first, e_hi = candidate.rbegin()->first;
  // Translation covariance: [T, a_e] = (e+1) a_{e+1} on vectors whose T is exact.
  for (int v = 0; v < sf.dim(); ++v) {
    if (sf.weight(v) + 1 > D) continue;
    GVector vv = GVector::basis(v);
    for (int e = e_lo - 1; e <= e_hi; ++e) {
      GVector d = sf.apply_T(act(e, vv)) - act(e, sf.apply_T(vv)) - HScalar(e + 1) * act(e + 1, vv);
      if (!d.is_zero())
        return hypothesis_failed("not translation covariant at z^" + std::to_string(e) + " on " + sf.space().name(v));
    }
  }
  // Locality with every Y(b, .) on every vector.
  const Interval cand_supp{e_lo, e_hi};
  for (int b = 0; b < sf.dim(); ++b)
    for (int v = 0; v < sf.dim(); ++v) {
      const long wb = sf.weight(b), wv = sf.weight(v);
      if (wa + wb + wv > D) continue;
      VectorDist left(kZW), right(kZW);
      left.set_axes({Axis{Interval{}, cand_supp}, Axis{Interval{-kInf, D - wb - wv}, Interval{-(wb + wv), kInf}},
                     Axis{}});
      right.set_axes({Axis{Interval{-kInf, D - wa - wv}, Interval{-(wa + wv), kInf}},
                      Axis{Interval{}, Interval{-(wb + D), D - wb}}, Axis{}});
      for (const auto& [m, x] : sf.products(b, v))
        for (int e = e_lo; e <= e_hi; ++e) left.add({e, -m - 1}, act(e, x));
      for (int e = e_lo; e <= e_hi; ++e) {
        GVector y = act(e, GVector::basis(v));
        for (const auto& [k, c] : y.coords())
          for (const auto& [m, x] : sf.products(b, k)) right.add({e, -m - 1}, c * x);
      }
      VectorDist d = left - right;
      LocalityResult lr = locality_order(d, q.h_order(), win.max_witness);
      if (!lr.witness.back())
        return hypothesis_failed("not local with Y(" + sf.space().name(b) + ") on " + sf.space().name(v));
    }
  GVector state = act(0, GVector::basis(sf.vacuum()));
  for (int v = 0; v < sf.dim(); ++v) {
    GVector vv = GVector::basis(v);
    VectorDist cand({"z"});
    cand.set_axes({Axis{Interval{}, cand_supp}});
    for (int e = e_lo; e <= e_hi; ++e) cand.add({e, 0}, act(e, vv));
    record(r, cand, compose_Y(sf, apply_S(q, state, vv), "z"), [&](const GVector& x) { return describe(sf, x); },
           sf.space().name(v) + ": ");
  }
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_s_product_vacuum_left(const QuantumInstance& q, int a, int n) {
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "s_product_vacuum_left");
  r.a = a;
  r.n = n;
  GVector va = GVector::basis(a);
  GVector d = s_n_product(q, GVector::basis(sf.vacuum()), va, n) - (n == -1 ? va : GVector());
  if (!d.is_zero()) {
    r.status = Status::kFail;
    r.first_failing_h_order = d.lowest_order();
    r.location = describe(sf, d);
  }
  return r;
}

CheckReport check_s_product_vacuum_right(const QuantumInstance& q, int a, int n) {
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "s_product_vacuum_right");
  r.a = a;
  r.n = n;
  GVector va = GVector::basis(a);
  GVector expect = n <= -1 ? t_power(sf, va, -n - 1) : GVector();
  GVector d = s_n_product(q, va, GVector::basis(sf.vacuum()), n) - expect;
  if (!d.is_zero()) {
    r.status = Status::kFail;
    r.first_failing_h_order = d.lowest_order();
    r.location = describe(sf, d);
  }
  return r;
}

CheckReport check_s_product_shift(const QuantumInstance& q, int a, int b, int n) {
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "s_product_shift");
  r.a = a;
  r.b = b;
  r.n = n;
  if (n < 0 || sf.weight(a) + n > sf.cutoff()) {
    r.status = Status::kSkipped;
    r.detail = n < 0 ? "identity is stated for n >= 0" : "T^n a lies above the weight cutoff";
    return r;
  }
  GVector va = GVector::basis(a), vb = GVector::basis(b);
  GVector d = s_n_product(q, va, vb, -n - 1) - s_n_product(q, t_power(sf, va, n), vb, -1);
  if (!d.is_zero()) {
    r.status = Status::kFail;
    r.first_failing_h_order = d.lowest_order();
    r.location = describe(sf, d);
  }
  return r;
}

CheckReport check_s_product_derivation(const QuantumInstance& q, int a, int b, int n) {
  const StateField& sf = *q.sf;
  CheckReport r = start(q, "s_product_derivation");
  r.a = a;
  r.b = b;
  r.n = n;
  if (sf.weight(a) + 1 > sf.cutoff() || sf.weight(b) + 1 > sf.cutoff()) {
    r.status = Status::kSkipped;
    r.detail = "Ta or Tb lies above the weight cutoff";
    return r;
  }
  GVector va = GVector::basis(a), vb = GVector::basis(b);
  GVector d = sf.apply_T(s_n_product(q, va, vb, n)) - s_n_product(q, sf.apply_T(va), vb, n) -
              s_n_product(q, va, sf.apply_T(vb), n);
  if (!d.is_zero()) {
    r.status = Status::kFail;
    r.first_failing_h_order = d.lowest_order();
    r.location = describe(sf, d);
  }
  return r;
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> kAll{Suite::kLocalityAssociativity, Suite::kJacobi, Suite::kAssociativityYS,
                                       Suite::kBorcherds, Suite::kNProductLocality};
  return kAll;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::kLocalityAssociativity: return "suite_s_locality_associativity";
    case Suite::kJacobi: return "suite_s_jacobi";
    case Suite::kAssociativityYS: return "suite_associativity_ys_equals_yop";
    case Suite::kBorcherds: return "suite_quantum_borcherds";
    case Suite::kNProductLocality: return "suite_quantum_nproduct_s_locality";
  }
  return "suite_unknown";
}

const std::vector<std::string>& suite_members(Suite s) {
  static const std::map<Suite, std::vector<std::string>> kMembers{
      {Suite::kLocalityAssociativity, {"s_locality", "associativity_q"}},
      {Suite::kJacobi, {"s_jacobi"}},
      {Suite::kAssociativityYS, {"associativity_q", "ys_equals_yop"}},
      {Suite::kBorcherds, {"quantum_borcherds"}},
      {Suite::kNProductLocality, {"quantum_nproduct_identity", "s_locality"}},
  };
  return kMembers.at(s);
}

CheckReport suite_verdict(Suite s, const std::vector<CheckReport>& records) {
  const auto& members = suite_members(s);
  CheckReport v;
  v.check = suite_name(s);
  v.status = Status::kSkipped;
  for (const auto& r : records) {
    if (std::find(members.begin(), members.end(), r.check) == members.end()) continue;
    v.h_order = r.h_order;
    v.control = r.control;
    v.elapsed_ms += r.elapsed_ms;
    if (r.failed()) {
      if (!v.failed() || r.first_failing_h_order < v.first_failing_h_order) {
        v.first_failing_h_order = r.first_failing_h_order;
        v.location = r.check + " " + r.location;
      }
      v.status = Status::kFail;
    } else if (r.status == Status::kPass && v.status == Status::kSkipped) {
      v.status = Status::kPass;
    }
  }
  return v;
}

CheckReport suites_agree(const std::vector<CheckReport>& verdicts) {
  CheckReport r;
  r.check = "suites_agree";
  if (verdicts.empty()) {
    r.status = Status::kSkipped;
    return r;
  }
  r.h_order = verdicts.front().h_order;
  r.control = false;
  const CheckReport& first = verdicts.front();
  for (const auto& v : verdicts) {
    if (v.status == first.status && v.first_failing_h_order == first.first_failing_h_order) continue;
    r.status = Status::kFail;
    r.first_failing_h_order = std::min(v.failed() ? v.first_failing_h_order : first.first_failing_h_order,
                                       first.failed() ? first.first_failing_h_order : v.first_failing_h_order);
    r.location = first.check + "=" + status_name(first.status) + " vs " + v.check + "=" + status_name(v.status);
    break;
  }
  return r;
}

std::vector<CheckReport> equivalence_records(const QuantumInstance& q, const std::vector<std::array<int, 3>>& triples,
                                             int n_lo, int n_hi, const Windows& win) {
  std::vector<CheckReport> out;
  std::set<std::pair<int, int>> pairs;
  for (const auto& [a, b, c] : triples) {
    QuantumTriple t(q, a, b, c, win);
    out.push_back(t.s_locality());
    out.push_back(t.associativity());
    out.push_back(t.jacobi(n_lo, n_hi));
    for (int n = n_lo; n <= n_hi; ++n) {
      out.push_back(t.borcherds(n));
      out.push_back(t.nproduct(n));
    }
    pairs.insert({a, b});
  }
  for (const auto& [a, b] : pairs) out.push_back(check_ys_equals_yop(q, a, b));
  return out;
}

}  // namespace qva
