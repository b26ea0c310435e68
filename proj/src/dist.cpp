#include "qva/dist.hpp"

#include <array>

namespace qva {

std::string Interval::str() const {
  auto side = [](long v) {
    if (v <= -kInf) return std::string("-inf");
    if (v >= kInf) return std::string("inf");
    return std::to_string(v);
  };
  return "[" + side(lo) + "," + side(hi) + "]";
}

namespace {

// Affine form coef . (k0, k1, k2) + c, where k2 = k0 + k1 is the total degree.
struct Atom {
  std::array<int, 3> coef{0, 0, 0};
  long c = 0;
};

Atom var_atom(int coord, long c) {
  Atom a;
  a.coef[coord] = 1;
  a.c = c;
  return a;
}

Atom const_atom(long c) {
  Atom a;
  a.c = c;
  return a;
}

// Rewrites to at most one coordinate with coefficient +-1, or fails.
std::optional<Atom> reduce(Atom a, int naxes) {
  auto simple = [](const Atom& x) {
    int nz = 0;
    for (int v : x.coef) {
      if (v != 0 && v != 1 && v != -1) return false;
      nz += v != 0;
    }
    return nz <= 1;
  };
  if (simple(a)) return a;
  if (naxes < 3) return std::nullopt;
  for (int t : {-1, 1, -2, 2}) {
    Atom b = a;
    b.coef[0] += t;
    b.coef[1] += t;
    b.coef[2] -= t;
    if (simple(b)) return b;
  }
  return std::nullopt;
}

std::optional<Atom> combine(const Atom& x, int sign, const Atom& y, int naxes) {
  if (x.c <= -kInf || x.c >= kInf || y.c <= -kInf || y.c >= kInf) return std::nullopt;
  Atom r;
  for (int i = 0; i < 3; ++i) r.coef[i] = x.coef[i] + sign * y.coef[i];
  r.c = x.c + sign * y.c;
  return reduce(r, naxes);
}

struct Leaf {
  int coord = -1;   // -1: constant leaf
  bool truth = false;
  bool upper = true;  // k[coord] <= bound, else >=
  long bound = 0;
};

// Turns "atom (<= or >=) rhs" into a leaf.
Leaf make_leaf(const Atom& a, bool le, long rhs) {
  Leaf l;
  int coord = -1, s = 0;
  for (int i = 0; i < 3; ++i)
    if (a.coef[i] != 0) {
      coord = i;
      s = a.coef[i];
    }
  long b = rhs - a.c;
  if (coord < 0) {
    l.truth = le ? 0 <= b : 0 >= b;
    return l;
  }
  l.coord = coord;
  if (s > 0) {
    l.upper = le;
    l.bound = b;
  } else {
    l.upper = !le;
    l.bound = -b;
  }
  return l;
}

bool finite(long v) { return v > -kInf && v < kInf; }

}  // namespace

std::vector<Axis> product_axes(const std::vector<Axis>& a, const std::vector<Axis>& b, int nv) {
  const int na = nv == 2 ? 3 : nv;
  std::vector<Axis> out(na);
  for (int i = 0; i < na; ++i) {
    out[i].supp = {sat_add(a[i].supp.lo, b[i].supp.lo), sat_add(a[i].supp.hi, b[i].supp.hi)};
  }
  for (int i = 0; i < na; ++i)
    if (a[i].supp.empty() || b[i].supp.empty()) {
      for (auto& ax : out) ax = Axis{Interval{}, Interval{1, 0}};
      return out;
    }
  if (na == 0) return out;

  // Feasible range of the left factor's exponent i for target exponent k.
  std::vector<std::vector<Atom>> L(na), U(na);
  for (int i = 0; i < na; ++i) {
    if (finite(a[i].supp.lo)) L[i].push_back(const_atom(a[i].supp.lo));
    if (finite(b[i].supp.hi)) L[i].push_back(var_atom(i, -b[i].supp.hi));
    if (finite(a[i].supp.hi)) U[i].push_back(const_atom(a[i].supp.hi));
    if (finite(b[i].supp.lo)) U[i].push_back(var_atom(i, -b[i].supp.lo));
  }
  if (na == 3) {
    auto Lc = L, Uc = U;
    auto cross = [&](std::vector<Atom>& dst, const std::vector<Atom>& xs, int sign, const std::vector<Atom>& ys) {
      for (const auto& x : xs)
        for (const auto& y : ys)
          if (auto r = combine(x, sign, y, na)) dst.push_back(*r);
    };
    cross(Lc[0], L[2], -1, U[1]);
    cross(Uc[0], U[2], -1, L[1]);
    cross(Lc[1], L[2], -1, U[0]);
    cross(Uc[1], U[2], -1, L[0]);
    cross(Lc[2], L[0], +1, L[1]);
    cross(Uc[2], U[0], +1, U[1]);
    L = std::move(Lc);
    U = std::move(Uc);
  }
  for (int i = 0; i < nv; ++i)
    if (L[i].empty() || U[i].empty())
      throw UntrustedProduct("convolution is not finite along axis " + std::to_string(i));

  std::vector<Interval> box(na);
  auto apply_clause = [&](int axis, const std::vector<Leaf>& leaves) {
    const Leaf* best = nullptr;
    auto rank = [&](const Leaf& l) { return l.coord == axis ? 0 : (l.coord == 2 ? 1 : 2); };
    for (const auto& l : leaves) {
      if (l.coord < 0) {
        if (l.truth) return;
        continue;
      }
      if (!best || rank(l) < rank(*best) ||
          (rank(l) == rank(*best) && l.upper == best->upper && l.coord == best->coord &&
           (l.upper ? l.bound > best->bound : l.bound < best->bound)))
        best = &l;
    }
    if (!best) throw UntrustedProduct("empty trusted box along axis " + std::to_string(axis));
    Interval& t = box[best->coord];
    if (best->upper)
      t.hi = std::min(t.hi, best->bound);
    else
      t.lo = std::max(t.lo, best->bound);
  };
  auto minus_k = [&](const Atom& x, int axis) { return combine(x, -1, var_atom(axis, 0), na); };

  for (int i = 0; i < na; ++i) {
    std::vector<Leaf> leaves;
    if (finite(a[i].box.lo)) {
      leaves.clear();
      for (const auto& x : L[i]) leaves.push_back(make_leaf(x, false, a[i].box.lo));
      apply_clause(i, leaves);
    }
    if (finite(a[i].box.hi)) {
      leaves.clear();
      for (const auto& x : U[i]) leaves.push_back(make_leaf(x, true, a[i].box.hi));
      apply_clause(i, leaves);
    }
    if (finite(b[i].box.lo)) {
      leaves.clear();
      for (const auto& x : U[i])
        if (auto y = minus_k(x, i)) leaves.push_back(make_leaf(*y, true, -b[i].box.lo));
      apply_clause(i, leaves);
    }
    if (finite(b[i].box.hi)) {
      leaves.clear();
      for (const auto& x : L[i])
        if (auto y = minus_k(x, i)) leaves.push_back(make_leaf(*y, false, -b[i].box.hi));
      apply_clause(i, leaves);
    }
  }
  for (int i = 0; i < na; ++i) {
    if (box[i].empty()) throw UntrustedProduct("empty trusted box along axis " + std::to_string(i));
    out[i].box = box[i];
  }
  return out;
}

ScalarDist monomial(const std::vector<std::string>& vars, const Exp& e, const HScalar& c) {
  ScalarDist d(vars);
  std::vector<Axis> ax(d.naxes());
  for (int i = 0; i < d.nv(); ++i) ax[i] = Axis{Interval{}, Interval{e[i], e[i]}};
  if (d.nv() == 2) ax[2] = Axis{Interval{}, Interval{e[0] + e[1], e[0] + e[1]}};
  d.set_axes(ax);
  d.add(d.nv() == 0 ? Exp{0, 0} : e, c);
  return d;
}

ScalarDist binom_expand(long n, int s0, int s1, Expansion order, long small_hi,
                        const std::vector<std::string>& vars) {
  if (vars.size() != 2) throw Error("binom_expand needs two variables");
  auto sign_pow = [](int s, long p) { return (s < 0 && (p & 1)) ? -1 : 1; };
  ScalarDist d(vars);
  std::vector<Axis> ax(3);
  ax[2] = Axis{Interval{}, Interval{n, n}};
  if (n >= 0) {
    ax[0] = Axis{Interval{}, Interval{0, n}};
    ax[1] = Axis{Interval{}, Interval{0, n}};
    d.set_axes(ax);
    for (long k = 0; k <= n; ++k)
      d.add({n - k, k}, HScalar(Rational(binomial(n, k) * sign_pow(s0, n - k) * sign_pow(s1, k))));
    return d;
  }
  if (small_hi >= kInf) throw WindowTooSmall("expansion of a negative power needs a finite window");
  int big = order == Expansion::kFirst ? 0 : 1;
  int small = 1 - big;
  int sb = big == 0 ? s0 : s1, ss = big == 0 ? s1 : s0;
  ax[big] = Axis{Interval{}, Interval{-kInf, n}};
  ax[small] = Axis{Interval{-kInf, small_hi}, Interval{0, kInf}};
  d.set_axes(ax);
  for (long k = 0; k <= small_hi; ++k) {
    Exp e{0, 0};
    e[big] = n - k;
    e[small] = k;
    d.add(e, HScalar(Rational(binomial(n, k) * sign_pow(sb, n - k) * sign_pow(ss, k))));
  }
  return d;
}

ScalarDist iota_expand(long n, Expansion order, long small_hi, const std::vector<std::string>& vars) {
  return binom_expand(n, 1, -1, order, small_hi, vars);
}

ScalarDist delta_dist(const Interval& zbox, const Interval& wbox, const std::vector<std::string>& vars) {
  long lo = std::max(wbox.lo, sat_add(-zbox.hi, -1));
  long hi = std::min(wbox.hi, sat_add(-zbox.lo, -1));
  if (!finite(lo) || !finite(hi)) throw WindowTooSmall("delta window must be finite");
  ScalarDist d(vars);
  d.set_axes({Axis{zbox, Interval{}}, Axis{wbox, Interval{}}, Axis{Interval{}, Interval{-1, -1}}});
  for (long m = lo; m <= hi; ++m) d.add({-m - 1, m}, HScalar(1));
  return d;
}

SlicedDist<HScalar> delta_of_difference(const Interval& xbox, Expansion order, long small_hi,
                                        const std::vector<std::string>& vars) {
  if (!finite(xbox.lo) || !finite(xbox.hi)) throw WindowTooSmall("x window must be finite");
  SlicedDist<HScalar> s{"x", Axis{xbox, Interval{}}, vars, {}};
  for (long r = xbox.lo; r <= xbox.hi; ++r)
    s.slices.emplace(r, binom_expand(-r - 1, 1, -1, order, small_hi, vars));
  return s;
}

SlicedDist<HScalar> delta_shifted(long l_hi, const Interval& wbox, const std::vector<std::string>& vars) {
  if (!finite(wbox.lo) || !finite(wbox.hi)) throw WindowTooSmall("w window must be finite");
  SlicedDist<HScalar> s{"x", Axis{Interval{-kInf, l_hi}, Interval{0, kInf}}, vars, {}};
  for (long l = 0; l <= l_hi; ++l) {
    ScalarDist d(vars);
    d.set_axes({Axis{}, Axis{wbox, Interval{}}, Axis{Interval{}, Interval{-1 - l, -1 - l}}});
    int sign = (l & 1) ? -1 : 1;
    for (long q = wbox.lo; q <= wbox.hi; ++q) {
      long k = -q - 1;
      Rational b = binomial(k, l);
      if (sgn(b) != 0) d.add({k - l, q}, HScalar(Rational(b * sign)));
    }
    s.slices.emplace(l, std::move(d));
  }
  return s;
}

}  // namespace qva
