#include "qva/vertex.hpp"

#include <algorithm>

namespace qva {

StateField::StateField(SpacePtr space, SparseMatrix T, int h_order)
    : space_(std::move(space)), h_order_(h_order) {
  if (!space_) throw ValidationError("state-field correspondence needs a space");
  if (h_order < 1) throw ValidationError("h-order must be positive");
  table_.assign(static_cast<size_t>(dim()) * dim(), {});
  set_T(std::move(T));
}

void StateField::set_T(SparseMatrix T) {
  if (T.rows() != dim() || T.cols() != dim()) throw DimensionMismatch("T must be square of the space dimension");
  SparseMatrix t(dim(), dim());
  for (int j = 0; j < dim(); ++j)
    for (const auto& [i, c] : T.column(j)) {
      if (weight(i) != weight(j) + 1)
        throw ValidationError("T does not raise weight by one at (" + space_->name(i) + ", " + space_->name(j) + ")");
      t.add(i, j, c.truncated(h_order_));
    }
  T_ = std::move(t);
}

const std::map<int, GVector>& StateField::products(int i, int j) const {
  space_->check_index(i);
  space_->check_index(j);
  return table_[static_cast<size_t>(i) * dim() + j];
}

GVector StateField::product(int i, int n, int j) const {
  const auto& m = products(i, j);
  auto it = m.find(n);
  return it == m.end() ? GVector() : it->second;
}

GVector StateField::product(const GVector& a, int n, const GVector& b) const {
  GVector r;
  for (const auto& [i, x] : a.coords())
    for (const auto& [j, y] : b.coords()) {
      const auto& m = products(i, j);
      auto it = m.find(n);
      if (it != m.end()) r += (x * y) * it->second;
    }
  return r;
}

void StateField::set_product(int i, int n, int j, GVector v) {
  space_->check_index(i);
  space_->check_index(j);
  v = v.truncated(h_order_);
  int w = weight(i) + weight(j) - n - 1;
  for (const auto& [k, c] : v.coords()) {
    space_->check_index(k);
    if (weight(k) != w)
      throw ValidationError("product " + space_->name(i) + "_(" + std::to_string(n) + ")" + space_->name(j) +
                            " is not weight homogeneous");
  }
  auto& m = table_[static_cast<size_t>(i) * dim() + j];
  if (v.is_zero())
    m.erase(n);
  else
    m[n] = std::move(v);
}

bool StateField::operator==(const StateField& o) const {
  return space_->basis().size() == o.space_->basis().size() && h_order_ == o.h_order_ && T_ == o.T_ &&
         table_ == o.table_ && vacuum() == o.vacuum() && cutoff() == o.cutoff() && [&] {
           for (int i = 0; i < dim(); ++i)
             if (space_->name(i) != o.space_->name(i) || weight(i) != o.weight(i)) return false;
           return true;
         }();
}

bool weight_compatible(const StateField& sf, int a, int b, int c) {
  return sf.weight(a) + sf.weight(b) + sf.weight(c) <= sf.cutoff();
}

bool borcherds_testable(const StateField& sf, int a, int b, int n) {
  return sf.weight(a) + sf.weight(b) - n - 1 <= sf.cutoff();
}

std::pair<int, int> default_n_range(const StateField& sf) { return {-(sf.cutoff() + 1), sf.cutoff() + 1}; }

std::string describe(const StateField& sf, const GVector& v) { return v.str(sf.space()); }

namespace {

long kD(const StateField& sf) { return sf.cutoff(); }

// Adds src into an optional accumulator.
void accumulate(std::optional<VectorDist>& acc, VectorDist src) {
  if (acc)
    *acc += src;
  else
    acc = std::move(src);
}

VectorDist field_of_basis(const StateField& sf, int i, int j, const std::string& var) {
  const long wa = sf.weight(i), wb = sf.weight(j), D = kD(sf);
  VectorDist d({var});
  d.set_axes({Axis{Interval{}, Interval{-(wa + wb), D - wa - wb}}});
  for (const auto& [n, v] : sf.products(i, j)) d.add({-n - 1, 0}, v);
  return d;
}

VectorDist zero_like(const std::vector<std::string>& vars) {
  VectorDist d(vars);
  std::vector<Axis> ax(d.naxes(), Axis{Interval{}, Interval{1, 0}});
  d.set_axes(ax);
  return d;
}

}  // namespace

VectorDist apply_Y(const StateField& sf, const GVector& a, const GVector& b, const std::string& var) {
  std::optional<VectorDist> acc;
  for (const auto& [i, x] : a.coords())
    for (const auto& [j, y] : b.coords()) accumulate(acc, field_of_basis(sf, i, j, var).scaled(x * y));
  return acc ? *acc : zero_like({var});
}

VectorDist exp_T(const StateField& sf, const VectorDist& d, const std::string& var) {
  return taylor_shift(d, var, [&](const GVector& v) { return sf.apply_T(v); }, sf.cutoff());
}

VectorDist y_op(const StateField& sf, const GVector& a, const GVector& b, const std::string& var) {
  return exp_T(sf, negate_var(apply_Y(sf, b, a, var), var), var);
}

VectorDist nested(const StateField& sf, int a, int b, int c, const std::vector<std::string>& vars) {
  const long wa = sf.weight(a), wb = sf.weight(b), wc = sf.weight(c), D = kD(sf), S = wa + wb + wc;
  VectorDist d(vars);
  d.set_axes({Axis{Interval{}, Interval{-(wa + D), D - wa}},
              Axis{Interval{-kInf, D - wb - wc}, Interval{-(wb + wc), kInf}},
              Axis{Interval{}, Interval{-S, D - S}}});
  for (const auto& [m, x] : sf.products(b, c))
    for (const auto& [l, coef] : x.coords())
      for (const auto& [n, y] : sf.products(a, l)) d.add({-n - 1, -m - 1}, coef * y);
  return d;
}

VectorDist iterate(const StateField& sf, int a, int b, int c, const std::vector<std::string>& vars) {
  const long wa = sf.weight(a), wb = sf.weight(b), wc = sf.weight(c), D = kD(sf), S = wa + wb + wc;
  VectorDist d(vars);
  d.set_axes({Axis{Interval{-kInf, D - wa - wb}, Interval{-(wa + wb), kInf}},
              Axis{Interval{}, Interval{-(D + wc), D - wc}},
              Axis{Interval{}, Interval{-S, D - S}}});
  for (const auto& [n, x] : sf.products(a, b))
    for (const auto& [l, coef] : x.coords())
      for (const auto& [m, y] : sf.products(l, c)) d.add({-n - 1, -m - 1}, coef * y);
  return d;
}

VectorDist nested(const StateField& sf, const TensorElement& t, const std::vector<std::string>& vars) {
  if (t.rank() != 3 && !t.is_zero()) throw DimensionMismatch("nested composition needs a rank-3 tensor");
  std::optional<VectorDist> acc;
  for (const auto& [k, c] : t.terms()) accumulate(acc, nested(sf, k[0], k[1], k[2], vars).scaled(c));
  return acc ? *acc : zero_like(vars);
}

VectorDist iterate(const StateField& sf, const TensorElement& t, const std::vector<std::string>& vars) {
  if (t.rank() != 3 && !t.is_zero()) throw DimensionMismatch("iterated composition needs a rank-3 tensor");
  std::optional<VectorDist> acc;
  for (const auto& [k, c] : t.terms()) accumulate(acc, iterate(sf, k[0], k[1], k[2], vars).scaled(c));
  return acc ? *acc : zero_like(vars);
}

VectorDist nested_swapped(const StateField& sf, const TensorElement& t) {
  return swap_vars(nested(sf, t.permuted({1, 0, 2}), {"w", "z"}));
}

VectorDist borcherds_lhs(const VectorDist& first, const VectorDist& second, int n) {
  const auto& v = first.vars();
  ScalarDist big = iota_expand(n, Expansion::kFirst, small_hi_for(first, v[1]), v);
  ScalarDist small = iota_expand(n, Expansion::kSecond, small_hi_for(second, v[0]), v);
  return dist_mul(big, first) - dist_mul(small, second);
}

VectorDist delta_series(const StateField& sf, const std::vector<GVector>& states, const GVector& c,
                        const Interval& zbox, const Interval& wbox) {
  const std::vector<std::string> vars{"z", "w"};
  VectorDist acc(vars);
  acc.set_axes({Axis{zbox, Interval{}}, Axis{wbox, Interval{}}, Axis{}});
  ScalarDist delta = delta_dist(zbox, wbox, vars);
  Rational fact = 1;
  for (size_t j = 0; j < states.size(); ++j) {
    if (j > 0) {
      delta = derivative(delta, "w");
      fact *= static_cast<long>(j);
    }
    if (states[j].is_zero()) continue;
    VectorDist field = promote(apply_Y(sf, states[j], c, "w"), vars);
    acc += dist_mul(delta.scaled(HScalar(Rational(1 / fact))), field);
  }
  return acc;
}

VectorDist n_product_fields(const StateField& sf, int a, int b, int n, int c) {
  VectorDist first = nested(sf, a, b, c, {"x", "z"});
  VectorDist second = swap_vars(nested(sf, b, a, c, {"z", "x"}));
  return residue(borcherds_lhs(first, second, n), "x");
}

ProductSource classical_products(const StateField& sf, int a, int b) {
  ProductSource p;
  p.product = [&sf, a, b](int m) { return sf.product(a, m, b); };
  p.testable = [&sf, a, b](int n) { return borcherds_testable(sf, a, b, n); };
  p.top = sf.weight(a) + sf.weight(b) - 1;
  return p;
}

TripleKernel::TripleKernel(const StateField& sf, int a, int b, int c, const Windows& win)
    : TripleKernel(sf, a, b, c, win, nested(sf, a, b, c, {"z", "w"}),
                   nested_swapped(sf, TensorElement::basis3(a, b, c)), iterate(sf, a, b, c, {"z", "w"}),
                   classical_products(sf, a, b)) {}

TripleKernel::TripleKernel(const StateField& sf, int a, int b, int c, const Windows& win, VectorDist first,
                           VectorDist second, VectorDist iterated, ProductSource products)
    : sf_(sf),
      a_(a),
      b_(b),
      c_(c),
      win_(win),
      first_(std::move(first)),
      second_(std::move(second)),
      iterated_(std::move(iterated)),
      products_(std::move(products)) {}

CheckReport TripleKernel::base(const std::string& name) const {
  CheckReport r;
  r.check = name;
  r.a = a_;
  r.b = b_;
  r.c = c_;
  r.h_order = sf_.h_order();
  return r;
}

const VectorDist& TripleKernel::lhs(int n) const {
  auto it = lhs_cache_.find(n);
  if (it == lhs_cache_.end()) it = lhs_cache_.emplace(n, borcherds_lhs(first_, second_, n)).first;
  return it->second;
}

CheckReport TripleKernel::locality() const {
  Stopwatch sw;
  CheckReport r = base("locality");
  VectorDist d = first_ - second_;
  fill_witness(r, locality_order(d, sf_.h_order(), win_.max_witness), d.vars());
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport TripleKernel::associativity() const {
  Stopwatch sw;
  CheckReport r = base("associativity");
  VectorDist d = iterated_ - substitute_sum(first_);
  fill_witness(r, locality_order(d, sf_.h_order(), win_.max_witness, +1), d.vars());
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport TripleKernel::borcherds(int n) const {
  Stopwatch sw;
  CheckReport r = base("borcherds");
  r.n = n;
  if (!products_.testable(n)) {
    r.status = Status::kSkipped;
    r.detail = "a_(n)b lies above the weight cutoff";
    return r;
  }
  const VectorDist& left = lhs(n);
  std::vector<GVector> states;
  for (int m = n; m <= products_.top; ++m) states.push_back(products_.product(m));
  VectorDist right = delta_series(sf_, states, GVector::basis(c_), left.axis(0).box.meet(win_.z),
                                  left.axis(1).box.meet(win_.z));
  record(r, left, right, [&](const GVector& v) { return describe(sf_, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport TripleKernel::nproduct(int n) const {
  Stopwatch sw;
  CheckReport r = base("nproduct_identity");
  r.n = n;
  if (!products_.testable(n)) {
    r.status = Status::kSkipped;
    r.detail = "a_(n)b lies above the weight cutoff";
    return r;
  }
  VectorDist left;
  try {
    left = residue(lhs(n), "z");
  } catch (const ResidueOutsideWindow& e) {
    r.status = Status::kSkipped;
    r.detail = e.what();
    return r;
  }
  VectorDist right = apply_Y(sf_, products_.product(n), GVector::basis(c_), "w");
  record(r, left, right, [&](const GVector& v) { return describe(sf_, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport TripleKernel::jacobi(int n_lo, int n_hi) const {
  Stopwatch sw;
  CheckReport r = base("jacobi");
  const int top = products_.top;
  std::optional<SlicedDist<HScalar>> deltas;
  int slices = 0;
  for (int m = n_lo; m <= n_hi; ++m) {
    long x = -m - 1;
    if (!products_.testable(m) || !win_.x.contains(x)) continue;
    // x^x slice: sum_l D_l(z,w) Y(w)(a_(l-x-1)b (x) c).
    long l_hi = top + x + 1;
    if (!deltas || deltas->outer_axis.box.hi < l_hi) deltas = delta_shifted(std::max(l_hi, 0L), win_.z);
    const VectorDist& left = lhs(m);
    VectorDist right({"z", "w"});
    right.set_axes({Axis{left.axis(0).box.meet(win_.z), Interval{}}, Axis{win_.z, Interval{}}, Axis{}});
    for (long l = 0; l <= l_hi; ++l) {
      GVector state = products_.product(static_cast<int>(l - x - 1));
      if (state.is_zero()) continue;
      VectorDist field = promote(apply_Y(sf_, state, GVector::basis(c_), "w"), {"z", "w"});
      right += dist_mul(deltas->slices.at(l), field);
    }
    record(r, left, right, [&](const GVector& v) { return describe(sf_, v); }, "x^" + std::to_string(x) + " ");
    ++slices;
  }
  if (slices == 0) {
    r.status = Status::kSkipped;
    r.detail = "no x-slice inside the window";
  }
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_locality(const StateField& sf, int a, int b, int c, const Windows& win) {
  return TripleKernel(sf, a, b, c, win).locality();
}

CheckReport check_associativity(const StateField& sf, int a, int b, int c, const Windows& win) {
  return TripleKernel(sf, a, b, c, win).associativity();
}

CheckReport check_jacobi(const StateField& sf, int a, int b, int c, const Windows& win) {
  auto [lo, hi] = default_n_range(sf);
  return TripleKernel(sf, a, b, c, win).jacobi(lo, hi);
}

CheckReport check_borcherds(const StateField& sf, int a, int b, int c, int n, const Windows& win) {
  return TripleKernel(sf, a, b, c, win).borcherds(n);
}

CheckReport check_nproduct_identity(const StateField& sf, int a, int b, int n, const Windows& win) {
  Stopwatch sw;
  CheckReport r;
  r.check = "nproduct_identity";
  r.a = a;
  r.b = b;
  r.n = n;
  r.h_order = sf.h_order();
  int ran = 0;
  for (int c = 0; c < sf.dim(); ++c) {
    if (!weight_compatible(sf, a, b, c)) continue;
    CheckReport part = TripleKernel(sf, a, b, c, win).nproduct(n);
    if (part.status == Status::kSkipped) continue;
    if (part.failed()) part.location = "c=" + sf.space().name(c) + " " + part.location;
    r.absorb(part);
    ++ran;
  }
  if (ran == 0) r.status = Status::kSkipped;
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_skewsymmetry(const StateField& sf, int a, int b) {
  Stopwatch sw;
  CheckReport r;
  r.check = "skewsymmetry";
  r.a = a;
  r.b = b;
  r.h_order = sf.h_order();
  GVector va = GVector::basis(a), vb = GVector::basis(b);
  record(r, apply_Y(sf, va, vb), y_op(sf, va, vb), [&](const GVector& v) { return describe(sf, v); });
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport check_holomorphic(const StateField& sf) {
  Stopwatch sw;
  CheckReport r;
  r.check = "holomorphic";
  r.h_order = sf.h_order();
  for (int i = 0; i < sf.dim() && r.status == Status::kPass; ++i)
    for (int j = 0; j < sf.dim() && r.status == Status::kPass; ++j)
      for (const auto& [n, v] : sf.products(i, j))
        if (n >= 0) {
          r.status = Status::kFail;
          r.first_failing_h_order = v.lowest_order();
          r.location = sf.space().name(i) + "_(" + std::to_string(n) + ")" + sf.space().name(j) + " = " +
                       describe(sf, v);
          break;
        }
  r.elapsed_ms = sw.ms();
  return r;
}

CheckReport validate_axioms(const StateField& sf) {
  Stopwatch sw;
  CheckReport r;
  r.check = "axioms";
  r.h_order = sf.h_order();
  const auto& sp = sf.space();
  const int vac = sf.vacuum(), D = sf.cutoff();
  auto fail = [&](const std::string& where, const GVector& diff) {
    if (r.status == Status::kFail) return;
    r.status = Status::kFail;
    r.first_failing_h_order = diff.lowest_order();
    r.location = where + ": " + describe(sf, diff);
  };
  GVector Tvac = sf.apply_T(GVector::basis(vac));
  if (!Tvac.is_zero()) fail("T|0>", Tvac);
  for (int a = 0; a < sf.dim(); ++a) {
    GVector va = GVector::basis(a);
    // Y(z)(|0> (x) a) = a
    for (const auto& [n, v] : sf.products(vac, a))
      if (n != -1) fail("vacuum left " + sp.name(a) + " n=" + std::to_string(n), v);
    GVector left = sf.product(vac, -1, a) - va;
    if (!left.is_zero()) fail("vacuum left " + sp.name(a) + " n=-1", left);
    // Y(z)(a (x) |0>) in a + zV[[z]]
    for (const auto& [n, v] : sf.products(a, vac))
      if (n >= 0) fail("vacuum right " + sp.name(a) + " n=" + std::to_string(n), v);
    GVector right = sf.product(a, -1, vac) - va;
    if (!right.is_zero()) fail("vacuum right " + sp.name(a) + " n=-1", right);
  }
  for (int a = 0; a < sf.dim(); ++a)
    for (int b = 0; b < sf.dim(); ++b) {
      const int wa = sf.weight(a), wb = sf.weight(b);
      GVector va = GVector::basis(a), vb = GVector::basis(b);
      GVector Ta = sf.apply_T(va), Tb = sf.apply_T(vb);
      for (int n = wa + wb - D; n <= wa + wb; ++n) {
        GVector shift = HScalar(-n) * sf.product(a, n - 1, b);
        std::string at = sp.name(a) + "_(" + std::to_string(n) + ")" + sp.name(b);
        if (wb + 1 <= D) {
          GVector d = sf.apply_T(sf.product(a, n, b)) - sf.product(va, n, Tb) - shift;
          if (!d.is_zero()) fail("translation covariance 1 " + at, d);
        }
        if (wa + 1 <= D) {
          GVector d = sf.product(Ta, n, vb) - shift;
          if (!d.is_zero()) fail("translation covariance 2 " + at, d);
        }
      }
    }
  r.elapsed_ms = sw.ms();
  return r;
}

}  // namespace qva
