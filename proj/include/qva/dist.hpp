#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qva/algebra.hpp"

namespace qva {

// Exponent bounds saturate at +-kInf, which stands for an unbounded side.
constexpr long kInf = 1L << 40;

inline long sat_add(long a, long b) {
  if (a <= -kInf || b <= -kInf) return (a >= kInf || b >= kInf) ? 0 : -kInf;
  if (a >= kInf || b >= kInf) return kInf;
  long s = a + b;
  return std::clamp(s, -kInf, kInf);
}

struct Interval {
  long lo = -kInf;
  long hi = kInf;
  bool contains(long e) const { return lo <= e && e <= hi; }
  bool empty() const { return lo > hi; }
  Interval meet(const Interval& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  Interval hull(const Interval& o) const { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
  Interval shifted(long k) const { return {sat_add(lo, k), sat_add(hi, k)}; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
  std::string str() const;
};

// Per-axis knowledge about a truncated series: coefficients are exact on `box`,
// and the true series vanishes outside `supp` (for exponents whose other
// coordinates lie inside their boxes).
struct Axis {
  Interval box;
  Interval supp;
  bool operator==(const Axis& o) const { return box == o.box && supp == o.supp; }
};

// Domain of an iota expansion: kFirst expands in powers of second/first
// (|first| > |second|), kSecond the other way round.
enum class Expansion { kFirst, kSecond };

using Exp = std::array<long, 2>;

// Trusted axes of a product; throws UntrustedProduct when the box is empty or
// the convolution is not finite.
std::vector<Axis> product_axes(const std::vector<Axis>& a, const std::vector<Axis>& b, int nv);

// Sparse formal distribution in up to two variables. With two variables a third
// axis tracks the total degree, which is what keeps diagonal sums finite.
template <class C>
class WindowedDist {
 public:
  WindowedDist() = default;
  explicit WindowedDist(std::vector<std::string> vars) : vars_(std::move(vars)) {
    axes_.assign(naxes(), Axis{});
  }

  int nv() const { return static_cast<int>(vars_.size()); }
  int naxes() const { return nv() == 2 ? 3 : nv(); }
  const std::vector<std::string>& vars() const { return vars_; }
  int var_index(const std::string& v) const {
    for (int i = 0; i < nv(); ++i)
      if (vars_[i] == v) return i;
    throw Error("variable " + v + " not present");
  }
  const std::vector<Axis>& axes() const { return axes_; }
  Axis& axis(int i) { return axes_.at(i); }
  const Axis& axis(int i) const { return axes_.at(i); }
  void set_axes(std::vector<Axis> ax) { axes_ = std::move(ax); prune(); }
  const std::map<Exp, C>& terms() const { return terms_; }

  bool in_box(const Exp& e) const {
    for (int i = 0; i < nv(); ++i)
      if (!axes_[i].box.contains(e[i])) return false;
    return nv() < 2 || axes_[2].box.contains(e[0] + e[1]);
  }
  bool box_empty() const {
    for (const auto& a : axes_)
      if (a.box.empty()) return true;
    return false;
  }

  // Adds c at e; terms outside the trusted box are dropped.
  void add(const Exp& e, const C& c) {
    if (c.is_zero() || !in_box(e)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  C coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C() : it->second;
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (it->second.is_zero() || !in_box(it->first)) ? terms_.erase(it) : std::next(it);
  }

  WindowedDist& operator+=(const WindowedDist& o) { return accumulate(o, false); }
  WindowedDist& operator-=(const WindowedDist& o) { return accumulate(o, true); }
  friend WindowedDist operator+(WindowedDist a, const WindowedDist& b) { return a += b; }
  friend WindowedDist operator-(WindowedDist a, const WindowedDist& b) { return a -= b; }

  WindowedDist scaled(const HScalar& s) const {
    WindowedDist r = shell();
    for (const auto& [e, c] : terms_) r.add(e, s * c);
    return r;
  }

  // Same variables and axes, no terms.
  WindowedDist shell() const {
    WindowedDist r(vars_);
    r.axes_ = axes_;
    return r;
  }

  template <class F>
  auto map_coeffs(F f) const {
    using D = decltype(f(std::declval<const C&>()));
    WindowedDist<D> r(vars_);
    r.set_axes(axes_);
    for (const auto& [e, c] : terms_) r.add(e, f(c));
    return r;
  }

 private:
  WindowedDist& accumulate(const WindowedDist& o, bool negate) {
    if (o.vars_ != vars_) throw Error("distribution variables differ");
    for (int i = 0; i < naxes(); ++i) {
      axes_[i].box = axes_[i].box.meet(o.axes_[i].box);
      axes_[i].supp = axes_[i].supp.hull(o.axes_[i].supp);
    }
    prune();
    for (const auto& [e, c] : o.terms_) add(e, negate ? HScalar(-1) * c : c);
    return *this;
  }

  std::vector<std::string> vars_;
  std::vector<Axis> axes_;
  std::map<Exp, C> terms_;
};

using ScalarDist = WindowedDist<HScalar>;
using VectorDist = WindowedDist<GVector>;
using TensorDist = WindowedDist<TensorElement>;

// Cauchy product with the window calculus of product_axes.
template <class C>
WindowedDist<C> dist_mul(const ScalarDist& a, const WindowedDist<C>& b) {
  if (a.vars() != b.vars()) throw Error("product of distributions in different variables");
  WindowedDist<C> r(b.vars());
  r.set_axes(product_axes(a.axes(), b.axes(), a.nv()));
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exp e{ea[0] + eb[0], ea[1] + eb[1]};
      if (!r.in_box(e)) continue;
      r.add(e, ca * cb);
    }
  return r;
}

// Monomial c * v0^e0 * v1^e1, exact everywhere.
ScalarDist monomial(const std::vector<std::string>& vars, const Exp& e, const HScalar& c = HScalar(1));

// (s0*v0 + s1*v1)^n expanded in the given domain; for n < 0 the small
// variable is truncated at exponent small_hi.
ScalarDist binom_expand(long n, int s0, int s1, Expansion order, long small_hi,
                        const std::vector<std::string>& vars = {"z", "w"});

// iota expansion of (z-w)^n.
ScalarDist iota_expand(long n, Expansion order, long small_hi,
                       const std::vector<std::string>& vars = {"z", "w"});

// sum_m z^{-m-1} w^m over the box.
ScalarDist delta_dist(const Interval& zbox, const Interval& wbox,
                      const std::vector<std::string>& vars = {"z", "w"});

// Truncation exponent for the small variable of an expansion that will multiply
// `partner`, chosen so the product keeps the partner's trusted range.
template <class C>
long small_hi_for(const WindowedDist<C>& partner, const std::string& small_var) {
  const Axis& ax = partner.axis(partner.var_index(small_var));
  if (ax.box.hi >= kInf) return ax.box.hi;
  if (ax.supp.lo <= -kInf) throw WindowTooSmall("partner has no lower bound in " + small_var);
  return std::max(0L, ax.box.hi - ax.supp.lo);
}

// Embeds a one-variable distribution into `vars` with exponent 0 elsewhere.
template <class C>
WindowedDist<C> promote(const WindowedDist<C>& d, const std::vector<std::string>& vars) {
  if (d.vars() == vars) return d;
  if (d.nv() != 1 || vars.size() != 2) throw Error("promote expects one variable into two");
  int k = vars[0] == d.vars()[0] ? 0 : 1;
  if (vars[k] != d.vars()[0]) throw Error("promote: variable mismatch");
  WindowedDist<C> r(vars);
  std::vector<Axis> ax(3);
  ax[k] = d.axis(0);
  ax[1 - k] = Axis{Interval{}, Interval{0, 0}};
  ax[2] = Axis{Interval{}, d.axis(0).supp};
  r.set_axes(ax);
  for (const auto& [e, c] : d.terms()) {
    Exp n{0, 0};
    n[k] = e[0];
    r.add(n, c);
  }
  return r;
}

// Coefficient of var^{-1}; var is dropped.
template <class C>
WindowedDist<C> residue(const WindowedDist<C>& d, const std::string& var) {
  int k = d.var_index(var);
  const Axis& ax = d.axis(k);
  bool known_zero = !ax.supp.contains(-1);
  if (!ax.box.contains(-1) && !known_zero)
    throw ResidueOutsideWindow("exponent -1 of " + var + " is not trusted (box " + ax.box.str() + ")");
  std::vector<std::string> rest;
  for (int i = 0; i < d.nv(); ++i)
    if (i != k) rest.push_back(d.vars()[i]);
  WindowedDist<C> r(rest);
  if (d.nv() == 2) {
    Axis o = d.axis(1 - k);
    o.box = o.box.meet(d.axis(2).box.shifted(1));
    o.supp = o.supp.meet(d.axis(2).supp.shifted(1));
    r.set_axes({o});
  }
  if (known_zero) return r;
  for (const auto& [e, c] : d.terms()) {
    if (e[k] != -1) continue;
    Exp n{0, 0};
    if (d.nv() == 2) n[0] = e[1 - k];
    r.add(n, c);
  }
  return r;
}

template <class C>
WindowedDist<C> derivative(const WindowedDist<C>& d, const std::string& var) {
  int k = d.var_index(var);
  std::vector<Axis> ax = d.axes();
  ax[k].box = ax[k].box.shifted(-1);
  ax[k].supp = ax[k].supp.shifted(-1);
  if (d.nv() == 2) {
    ax[2].box = ax[2].box.shifted(-1);
    ax[2].supp = ax[2].supp.shifted(-1);
  }
  WindowedDist<C> r(d.vars());
  r.set_axes(ax);
  for (const auto& [e, c] : d.terms()) {
    if (e[k] == 0) continue;
    Exp n = e;
    n[k] -= 1;
    r.add(n, HScalar(e[k]) * c);
  }
  return r;
}

// Multiplies by var^k.
template <class C>
WindowedDist<C> shift(const WindowedDist<C>& d, const std::string& var, long k) {
  int i = d.var_index(var);
  std::vector<Axis> ax = d.axes();
  ax[i].box = ax[i].box.shifted(k);
  ax[i].supp = ax[i].supp.shifted(k);
  if (d.nv() == 2) {
    ax[2].box = ax[2].box.shifted(k);
    ax[2].supp = ax[2].supp.shifted(k);
  }
  WindowedDist<C> r(d.vars());
  r.set_axes(ax);
  for (const auto& [e, c] : d.terms()) {
    Exp n = e;
    n[i] += k;
    r.add(n, c);
  }
  return r;
}

// Substitutes var -> -var.
template <class C>
WindowedDist<C> negate_var(const WindowedDist<C>& d, const std::string& var) {
  int k = d.var_index(var);
  WindowedDist<C> r = d.shell();
  for (const auto& [e, c] : d.terms()) r.add(e, (e[k] % 2) ? HScalar(-1) * c : c);
  return r;
}

template <class C>
WindowedDist<C> rename(const WindowedDist<C>& d, const std::vector<std::string>& vars) {
  if (static_cast<int>(vars.size()) != d.nv()) throw Error("rename: arity mismatch");
  WindowedDist<C> r(vars);
  r.set_axes(d.axes());
  for (const auto& [e, c] : d.terms()) r.add(e, c);
  return r;
}

// Exchanges the two variables' positions (the names travel with the axes).
template <class C>
WindowedDist<C> swap_vars(const WindowedDist<C>& d) {
  if (d.nv() != 2) throw Error("swap_vars needs two variables");
  WindowedDist<C> r({d.vars()[1], d.vars()[0]});
  r.set_axes({d.axis(1), d.axis(0), d.axis(2)});
  for (const auto& [e, c] : d.terms()) r.add({e[1], e[0]}, c);
  return r;
}

// Reorders to the requested variable order.
template <class C>
WindowedDist<C> reorder(const WindowedDist<C>& d, const std::vector<std::string>& vars) {
  if (d.vars() == vars) return d;
  if (d.nv() == 2 && d.vars()[0] == vars.at(1) && d.vars()[1] == vars.at(0)) return swap_vars(d);
  throw Error("reorder: variable sets differ");
}

// var^k-weighted iota substitution first -> first + second, expanded in
// powers of second/first. Exact up to the input's box in the second variable.
template <class C>
WindowedDist<C> substitute_sum(const WindowedDist<C>& d) {
  if (d.nv() != 2) throw Error("substitute_sum needs two variables");
  const Axis& ws = d.axis(1);
  if (ws.box.hi >= kInf) throw WindowTooSmall("substitution needs a bounded window in " + d.vars()[1]);
  const Axis& zs = d.axis(0);
  if (zs.box.lo > zs.supp.lo || zs.box.hi < zs.supp.hi || ws.box.lo > ws.supp.lo)
    throw WindowTooSmall("substitution needs the full support below the window");
  std::vector<Axis> ax(3);
  ax[0] = Axis{Interval{}, Interval{-kInf, d.axis(0).supp.hi}};
  ax[1] = Axis{Interval{-kInf, ws.box.hi}, Interval{ws.supp.lo, kInf}};
  ax[2] = d.axis(2);
  WindowedDist<C> r(d.vars());
  r.set_axes(ax);
  for (const auto& [e, c] : d.terms()) {
    for (long l = 0; e[1] + l <= ws.box.hi; ++l) {
      Rational b = binomial(e[0], l);
      if (sgn(b) == 0) break;
      r.add({e[0] - l, e[1] + l}, HScalar(b) * c);
    }
  }
  return r;
}

// e^{var*T} applied coefficientwise: sum_k var^k T^k c / k!. The map `step`
// applies T once; `depth` bounds the nilpotency (T^{depth+1} = 0).
template <class C, class Step>
WindowedDist<C> taylor_shift(const WindowedDist<C>& d, const std::string& var, Step step, int depth) {
  int k = d.var_index(var);
  std::vector<Axis> ax = d.axes();
  if (ax[k].supp.lo < ax[k].box.lo) ax[k].box.lo = sat_add(ax[k].box.lo, depth);
  ax[k].supp.hi = sat_add(ax[k].supp.hi, depth);
  if (d.nv() == 2) {
    if (ax[2].supp.lo < ax[2].box.lo) ax[2].box.lo = sat_add(ax[2].box.lo, depth);
    ax[2].supp.hi = sat_add(ax[2].supp.hi, depth);
  }
  WindowedDist<C> r(d.vars());
  r.set_axes(ax);
  for (const auto& [e, c] : d.terms()) {
    C cur = c;
    Rational fact = 1;
    for (int j = 0; j <= depth && !cur.is_zero(); ++j) {
      Exp n = e;
      n[k] += j;
      r.add(n, HScalar(Rational(1 / fact)) * cur);
      cur = step(cur);
      fact *= (j + 1);
    }
  }
  return r;
}

// Outcome of comparing two distributions on the meet of their boxes.
struct Comparison {
  bool equal = true;
  int first_failing_h_order = -1;  // lowest h-exponent of any difference
  std::optional<Exp> location;      // first term realizing it
  std::vector<Interval> box;
  std::vector<std::string> vars;
};

template <class C>
Comparison compare(const WindowedDist<C>& a, const WindowedDist<C>& b) {
  WindowedDist<C> d = a - b;
  Comparison cmp;
  cmp.vars = d.vars();
  for (const auto& ax : d.axes()) cmp.box.push_back(ax.box);
  for (const auto& [e, c] : d.terms()) {
    int p = c.lowest_order();
    if (p < 0) continue;
    if (cmp.equal || p < cmp.first_failing_h_order) {
      cmp.first_failing_h_order = p;
      cmp.location = e;
    }
    cmp.equal = false;
  }
  return cmp;
}

// Least N with (z-w)^N d == 0 on the residual box. The factor carries no h, so
// each h-exponent is scanned on its own: layer[p] kills h^p alone and
// witness[p] = max(layer[0..p]) kills every exponent <= p (nullopt if some
// layer survives up to max_n). With sign = +1 the factor is (z+w).
struct LocalityResult {
  std::vector<std::optional<int>> witness;
  std::vector<std::optional<int>> layer;
  std::vector<std::optional<Exp>> survivor;  // last surviving coefficient of each layer
  std::vector<int> layer_scanned;            // last N at which each layer was judged
  int first_failing_h_order = -1;            // -1: every h-order has a witness
  std::optional<Exp> location;
  std::vector<Interval> box;
  int scanned_to = 0;
};

// Derives witness, first failure, location and scanned_to from the layers.
inline void settle_layers(LocalityResult& r) {
  int h = static_cast<int>(r.layer.size());
  r.witness.assign(h, std::nullopt);
  r.first_failing_h_order = -1;
  r.location.reset();
  std::optional<int> acc = 0;
  for (int p = 0; p < h; ++p) {
    acc = acc && r.layer[p] ? std::optional<int>(std::max(*acc, *r.layer[p])) : std::nullopt;
    r.witness[p] = acc;
    if (!r.layer[p] && r.first_failing_h_order < 0) {
      r.first_failing_h_order = p;
      r.location = r.survivor[p];
      r.scanned_to = r.layer_scanned[p];
    }
  }
  if (r.first_failing_h_order < 0 && h > 0) r.scanned_to = *r.witness.back();
}

// Layer p of results[i] is trusted when p <= trusted_hi[i]; the first trusted
// witness wins, and missing layers report the last result.
inline LocalityResult merge_layers(const std::vector<LocalityResult>& results, const std::vector<int>& trusted_hi) {
  LocalityResult out = results.back();
  for (size_t p = 0; p < out.layer.size(); ++p)
    for (size_t i = 0; i < results.size(); ++i)
      if (static_cast<int>(p) <= trusted_hi[i] && results[i].layer[p]) {
        out.layer[p] = results[i].layer[p];
        break;
      }
  settle_layers(out);
  return out;
}

template <class C>
LocalityResult locality_order(const WindowedDist<C>& d, int h_order, int max_n, int sign = -1) {
  if (d.nv() != 2) throw Error("locality needs two variables");
  LocalityResult res;
  res.layer.assign(h_order, std::nullopt);
  res.survivor.assign(h_order, std::nullopt);
  res.layer_scanned.assign(h_order, 0);
  auto has_order = [](const C& c, int p) { return c.truncated(p + 1) != c.truncated(p); };
  WindowedDist<C> cur = d;
  ScalarDist step = binom_expand(1, 1, sign, Expansion::kFirst, 0, d.vars());
  std::vector<std::vector<Exp>> support(h_order);
  for (const auto& [e, c] : d.terms())
    if (d.in_box(e))
      for (int p = 0; p < h_order; ++p)
        if (has_order(c, p)) support[p].push_back(e);
  // A layer is only judged while each of its nonzero coefficients still
  // reaches the trusted box of the product through some monomial of the factor.
  auto covers = [&](const WindowedDist<C>& prod, int n, const std::vector<Exp>& sup) {
    for (const auto& e : sup) {
      bool hit = false;
      for (int k = 0; k <= n && !hit; ++k) {
        Exp img = e;
        img[0] += n - k;
        img[1] += k;
        hit = prod.in_box(img);
      }
      if (!hit) return false;
    }
    return true;
  };
  std::vector<bool> open(h_order, true);
  for (int n = 0; n <= max_n; ++n) {
    if (n > 0) {
      WindowedDist<C> next;
      try {
        next = dist_mul(step, cur);
      } catch (const UntrustedProduct&) {
        break;
      }
      if (next.box_empty()) break;
      bool any = false;
      for (int p = 0; p < h_order; ++p) {
        if (open[p] && !covers(next, n, support[p])) open[p] = false;
        any = any || open[p];
      }
      if (!any) break;
      cur = std::move(next);
    } else if (cur.box_empty()) {
      throw WindowTooSmall("trusted box is empty");
    }
    std::vector<std::optional<Exp>> alive(h_order);
    for (const auto& [e, c] : cur.terms())
      for (int p = 0; p < h_order; ++p)
        if (open[p] && !alive[p] && has_order(c, p)) alive[p] = e;
    bool any = false;
    for (int p = 0; p < h_order; ++p) {
      if (!open[p]) continue;
      res.layer_scanned[p] = n;
      if (alive[p]) {
        res.survivor[p] = alive[p];
        any = true;
      } else {
        res.layer[p] = n;
        open[p] = false;
      }
    }
    res.box.clear();
    for (const auto& ax : cur.axes()) res.box.push_back(ax.box);
    if (!any) break;
  }
  settle_layers(res);
  return res;
}

// c^j(w) = Res_z (z-w)^j d for j < N, where N is the witness mod h^M.
template <class C>
std::vector<WindowedDist<C>> decompose_local(const WindowedDist<C>& d, int h_order, int max_n) {
  LocalityResult loc = locality_order(d, h_order, max_n);
  if (!loc.witness.back()) throw NotLocal("no witness up to N=" + std::to_string(loc.scanned_to));
  int n = *loc.witness.back();
  std::vector<WindowedDist<C>> out;
  for (int j = 0; j < n; ++j) {
    ScalarDist p = binom_expand(j, 1, -1, Expansion::kFirst, 0, d.vars());
    out.push_back(residue(dist_mul(p, d), d.vars()[0]));
  }
  return out;
}

// sum_j c^j(w) d_w^j delta(z,w) / j! over the given delta box.
template <class C>
WindowedDist<C> reconstruct_local(const std::vector<WindowedDist<C>>& cs, const std::vector<std::string>& vars,
                                  const Interval& zbox, const Interval& wbox) {
  ScalarDist delta = delta_dist(zbox, wbox, vars);
  std::optional<WindowedDist<C>> acc;
  Rational fact = 1;
  for (size_t j = 0; j < cs.size(); ++j) {
    if (j > 0) {
      delta = derivative(delta, vars[1]);
      fact *= static_cast<long>(j);
    }
    WindowedDist<C> term = dist_mul(delta.scaled(HScalar(Rational(1 / fact))), promote(cs[j], vars));
    acc = acc ? *acc + term : term;
  }
  if (!acc) {
    WindowedDist<C> zero(vars);
    zero.set_axes({Axis{zbox, {}}, Axis{wbox, {}}, Axis{}});
    return zero;
  }
  return *acc;
}

// Three-variable distribution as slices indexed by the outer variable's
// exponent; each slice is a two-variable distribution.
template <class C>
struct SlicedDist {
  std::string outer;
  Axis outer_axis;
  std::vector<std::string> inner_vars;
  std::map<long, WindowedDist<C>> slices;
};

// Slice product: result slice r = sum_{p+q=r} a_p * b_q with the one-variable
// window rule on the outer axis.
template <class C>
SlicedDist<C> sliced_mul(const SlicedDist<HScalar>& a, const SlicedDist<C>& b) {
  std::vector<Axis> ax = product_axes({a.outer_axis}, {b.outer_axis}, 1);
  SlicedDist<C> r{a.outer, ax[0], b.inner_vars, {}};
  for (const auto& [p, sa] : a.slices)
    for (const auto& [q, sb] : b.slices) {
      long e = p + q;
      if (!r.outer_axis.box.contains(e)) continue;
      WindowedDist<C> prod = dist_mul(sa, sb);
      auto it = r.slices.find(e);
      if (it == r.slices.end())
        r.slices.emplace(e, std::move(prod));
      else
        it->second += prod;
    }
  return r;
}

template <class C>
SlicedDist<C> sliced_sub(const SlicedDist<C>& a, const SlicedDist<C>& b) {
  SlicedDist<C> r{a.outer,
                  Axis{a.outer_axis.box.meet(b.outer_axis.box), a.outer_axis.supp.hull(b.outer_axis.supp)},
                  a.inner_vars,
                  {}};
  for (const auto& [e, s] : a.slices)
    if (r.outer_axis.box.contains(e)) r.slices.emplace(e, s);
  for (const auto& [e, s] : b.slices) {
    if (!r.outer_axis.box.contains(e)) continue;
    auto it = r.slices.find(e);
    if (it == r.slices.end())
      r.slices.emplace(e, s.scaled(HScalar(-1)));
    else
      it->second -= s;
  }
  return r;
}

// iota_{z,w} delta(x, z-w) = sum_m x^{-m-1} iota_{z,w}(z-w)^m over x in xbox.
SlicedDist<HScalar> delta_of_difference(const Interval& xbox, Expansion order, long small_hi,
                                        const std::vector<std::string>& vars = {"z", "w"});
// iota_{z,x} delta(w, z-x) = sum_k w^{-k-1} iota_{z,x}(z-x)^k, sliced by x^l
// for 0 <= l <= l_hi, with w exponents restricted to wbox.
SlicedDist<HScalar> delta_shifted(long l_hi, const Interval& wbox,
                                  const std::vector<std::string>& vars = {"z", "w"});

}  // namespace qva
