#include "qva/examples.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <tuple>

namespace qva {

namespace {

// ---- affine sl2 ----

enum Letter { kE = 0, kH = 1, kF = 2 };
constexpr char kLetterName[] = {'e', 'h', 'f'};

// (letter, p) stands for the creation mode x_(-p), p >= 1.
using Gen = std::pair<int, int>;
using Mono = std::vector<Gen>;
using Poly = std::map<Mono, Rational>;

// [x, y] as (letter, coefficient) terms.
std::vector<std::pair<int, int>> bracket(int x, int y) {
  if (x == y) return {};
  if (x == kH) return {{y, y == kE ? 2 : -2}};
  if (y == kH) return {{x, x == kE ? -2 : 2}};
  return {{kH, x == kE ? 1 : -1}};
}

int form(int x, int y) {
  if (x == kH && y == kH) return 2;
  if ((x == kE && y == kF) || (x == kF && y == kE)) return 1;
  return 0;
}

int mono_weight(const Mono& m) {
  int w = 0;
  for (const auto& g : m) w += g.second;
  return w;
}

void add_to(Poly& acc, const Poly& p, const Rational& s = 1) {
  for (const auto& [m, c] : p) {
    Rational& slot = acc[m];
    slot += s * c;
    if (sgn(slot) == 0) acc.erase(m);
  }
}

class AffineModule {
 public:
  AffineModule(Rational level, int cutoff) : k_(std::move(level)), D_(cutoff) {}

  // x_(j) on a PBW monomial, dropped when the result would exceed the cutoff.
  Poly act(int x, int j, const Mono& m) {
    int w = mono_weight(m) - j;
    if (w < 0 || w > D_) return {};
    auto key = std::make_tuple(x, j, m);
    if (auto it = act_memo_.find(key); it != act_memo_.end()) return it->second;
    Poly r;
    const Gen g{x, -j};
    if (j < 0 && (m.empty() || g <= m.front())) {
      Mono out;
      out.reserve(m.size() + 1);
      out.push_back(g);
      out.insert(out.end(), m.begin(), m.end());
      r[out] = 1;
    } else if (!m.empty()) {
      const Gen head = m.front();
      const Mono rest(m.begin() + 1, m.end());
      add_to(r, act(head.first, -head.second, act(x, j, rest)));
      for (const auto& [z, c] : bracket(x, head.first)) add_to(r, act(z, j - head.second, rest), c);
      if (j == head.second && form(x, head.first) != 0) add_to(r, Poly{{rest, 1}}, k_ * j * form(x, head.first));
    }
    act_memo_.emplace(key, r);
    return r;
  }

  Poly act(int x, int j, const Poly& v) {
    Poly r;
    for (const auto& [m, c] : v) add_to(r, act(x, j, m), c);
    return r;
  }

  // a_(n)b through (x_(-p)a')_(n) = sum_i C(p+i-1, i)[x_(-p-i) a'_(n+i) - (-1)^p a'_(n-p-i) x_(i)].
  Poly product(const Mono& a, int n, const Mono& b) {
    const int wa = mono_weight(a), wb = mono_weight(b);
    const int w = wa + wb - n - 1;
    if (w < 0 || w > D_) return {};
    if (a.empty()) return n == -1 ? Poly{{b, 1}} : Poly{};
    auto key = std::make_tuple(a, n, b);
    if (auto it = prod_memo_.find(key); it != prod_memo_.end()) return it->second;
    const auto [x, p] = a.front();
    const Mono rest(a.begin() + 1, a.end());
    const int wr = wa - p;
    const int i_hi = std::max(wr + wb - n - 1, wb);
    Poly r;
    for (int i = 0; i <= i_hi; ++i) {
      Rational coef = binomial(p + i - 1, i);
      add_to(r, act(x, -p - i, product(rest, n + i, b)), coef);
      add_to(r, product(rest, n - p - i, act(x, i, b)), (p % 2 ? coef : Rational(-coef)));
    }
    prod_memo_.emplace(key, r);
    return r;
  }

  Poly product(const Mono& a, int n, const Poly& b) {
    Poly r;
    for (const auto& [m, c] : b) add_to(r, product(a, n, m), c);
    return r;
  }

  // Applies the generators of m right to left to the vacuum.
  Poly evaluate(const Mono& m) {
    Poly v{{Mono{}, 1}};
    for (auto it = m.rbegin(); it != m.rend(); ++it) v = act(it->first, -it->second, v);
    return v;
  }

 private:
  Rational k_;
  int D_;
  std::map<std::tuple<int, int, Mono>, Poly> act_memo_;
  std::map<std::tuple<Mono, int, Mono>, Poly> prod_memo_;
};

void enumerate_pbw(int budget, const Gen& floor, Mono& cur, std::vector<Mono>& out) {
  out.push_back(cur);
  for (int x = floor.first; x < 3; ++x)
    for (int p = (x == floor.first ? floor.second : 1); p <= budget; ++p) {
      cur.push_back({x, p});
      enumerate_pbw(budget - p, {x, p}, cur, out);
      cur.pop_back();
    }
}

std::string pbw_name(const Mono& m) {
  if (m.empty()) return "vac";
  std::string s;
  for (const auto& [x, p] : m) s += std::string(1, kLetterName[x]) + "(-" + std::to_string(p) + ")";
  return s;
}

GVector to_gvector(const Poly& p, const std::map<Mono, int>& index) {
  GVector v;
  for (const auto& [m, c] : p) v.add(index.at(m), HScalar(c));
  return v;
}

// ---- commutative differential algebra ----

// (generator, derivative order); monomials are sorted multisets.
using Factor = std::pair<int, int>;
using CMono = std::vector<Factor>;
using CPoly = std::map<CMono, Rational>;

CMono cmul(const CMono& a, const CMono& b) {
  CMono r;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

CPoly derive(const CPoly& p) {
  CPoly r;
  for (const auto& [m, c] : p)
    for (size_t i = 0; i < m.size(); ++i) {
      CMono d = m;
      ++d[i].second;
      std::sort(d.begin(), d.end());
      Rational& slot = r[d];
      slot += c;
      if (sgn(slot) == 0) r.erase(d);
    }
  return r;
}

}  // namespace

StateField build_affine_sl2(const Rational& level, int cutoff, int h_order) {
  if (cutoff > 6) throw CutoffTooLarge("affine sl2 truncation supports cutoff <= 6, got " + std::to_string(cutoff));
  if (cutoff < 1) throw ValidationError("cutoff must be at least 1");
  std::vector<Mono> monos;
  Mono cur;
  enumerate_pbw(cutoff, {0, 1}, cur, monos);
  std::stable_sort(monos.begin(), monos.end(), [](const Mono& a, const Mono& b) {
    int wa = mono_weight(a), wb = mono_weight(b);
    return wa != wb ? wa < wb : a < b;
  });
  std::vector<BasisVector> basis;
  std::map<Mono, int> index;
  for (const auto& m : monos) {
    index.emplace(m, static_cast<int>(basis.size()));
    basis.push_back({pbw_name(m), mono_weight(m)});
  }
  auto space = std::make_shared<const GradedSpace>(std::move(basis), 0, cutoff);
  const int dim = space->dim();

  AffineModule mod(level, cutoff);
  // T is the derivation with [T, x_(-p)] = p x_(-p-1), T|0> = 0.
  SparseMatrix T(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const Mono& m = monos[j];
    if (mono_weight(m) + 1 > cutoff) continue;
    Poly acc;
    for (size_t s = 0; s < m.size(); ++s) {
      Mono shifted = m;
      ++shifted[s].second;
      add_to(acc, mod.evaluate(shifted), m[s].second);
    }
    for (const auto& [mm, c] : acc) T.add(index.at(mm), j, HScalar(c));
  }

  StateField sf(space, T, h_order);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const int w = space->weight(i) + space->weight(j);
      for (int n = w - 1 - cutoff; n <= w - 1; ++n) {
        Poly p = mod.product(monos[i], n, monos[j]);
        if (!p.empty()) sf.set_product(i, n, j, to_gvector(p, index));
      }
    }
  return sf;
}

StateField build_commutative(const std::vector<std::pair<std::string, int>>& generators, int cutoff, int h_order) {
  if (cutoff < 1) throw ValidationError("cutoff must be at least 1");
  for (const auto& [name, w] : generators)
    if (w < 1) throw ValidationError("generator " + name + " must have positive weight");
  auto fweight = [&](const Factor& f) { return generators[f.first].second + f.second; };
  auto cweight = [&](const CMono& m) {
    int w = 0;
    for (const auto& f : m) w += fweight(f);
    return w;
  };

  std::vector<Factor> factors;
  for (int g = 0; g < static_cast<int>(generators.size()); ++g)
    for (int r = 0; generators[g].second + r <= cutoff; ++r) factors.push_back({g, r});
  std::sort(factors.begin(), factors.end());
  std::vector<CMono> monos;
  CMono cur;
  std::function<void(size_t, int)> grow = [&](size_t from, int budget) {
    monos.push_back(cur);
    for (size_t f = from; f < factors.size(); ++f)
      if (fweight(factors[f]) <= budget) {
        cur.push_back(factors[f]);
        grow(f, budget - fweight(factors[f]));
        cur.pop_back();
      }
  };
  grow(0, cutoff);
  // Within a weight: fewer factors first, then higher derivatives first.
  auto desc = [](CMono m) {
    std::sort(m.begin(), m.end(), [](const Factor& x, const Factor& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    return m;
  };
  std::sort(monos.begin(), monos.end(), [&](const CMono& a, const CMono& b) {
    int wa = cweight(a), wb = cweight(b);
    if (wa != wb) return wa < wb;
    if (a.size() != b.size()) return a.size() < b.size();
    auto da = desc(a), db = desc(b);
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end(), [](const Factor& x, const Factor& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
  });

  auto name_of = [&](const CMono& m) {
    if (m.empty()) return std::string("vac");
    auto d = desc(m);
    std::string s;
    for (size_t i = 0; i < d.size();) {
      size_t j = i;
      while (j < d.size() && d[j] == d[i]) ++j;
      s += generators[d[i].first].first + std::string(d[i].second, '\'');
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    return s;
  };
  std::vector<BasisVector> basis;
  std::map<CMono, int> index;
  for (const auto& m : monos) {
    index.emplace(m, static_cast<int>(basis.size()));
    basis.push_back({name_of(m), cweight(m)});
  }
  auto space = std::make_shared<const GradedSpace>(std::move(basis), 0, cutoff);
  const int dim = space->dim();
  auto to_vec = [&](const CPoly& p) {
    GVector v;
    for (const auto& [m, c] : p)
      if (cweight(m) <= cutoff) v.add(index.at(m), HScalar(c));
    return v;
  };

  SparseMatrix T(dim, dim);
  for (int j = 0; j < dim; ++j) {
    GVector d = to_vec(derive(CPoly{{monos[j], 1}}));
    for (const auto& [i, c] : d.coords()) T.add(i, j, c);
  }

  StateField sf(space, T, h_order);
  for (int i = 0; i < dim; ++i) {
    // T^k a / k! for k while the weight fits.
    CPoly deriv{{monos[i], 1}};
    for (int k = 0; space->weight(i) + k <= cutoff; ++k) {
      if (k > 0) {
        deriv = derive(deriv);
        for (auto& [m, c] : deriv) c /= k;
      }
      for (int j = 0; j < dim; ++j) {
        if (space->weight(i) + k + space->weight(j) > cutoff) continue;
        CPoly prod;
        for (const auto& [m, c] : deriv) prod[cmul(m, monos[j])] += c;
        GVector v = to_vec(prod);
        if (!v.is_zero()) sf.set_product(i, -k - 1, j, std::move(v));
      }
    }
  }
  return sf;
}

StateField build_vacuum_only(int cutoff, int h_order) {
  auto space = std::make_shared<const GradedSpace>(std::vector<BasisVector>{{"vac", 0}}, 0, cutoff);
  StateField sf(space, SparseMatrix(1, 1), h_order);
  sf.set_product(0, -1, 0, GVector::basis(0));
  return sf;
}

QuantumInstance wrap_trivial_braiding(StateFieldPtr sf) {
  if (!sf) throw ValidationError("no state-field correspondence");
  Braiding S(sf->dim(), sf->h_order());
  return QuantumInstance{std::move(sf), std::move(S), false};
}

QuantumInstance make_control_braiding(StateFieldPtr sf, const PairMap& R, int m) {
  if (!sf) throw ValidationError("no state-field correspondence");
  if (sf->h_order() < 2) throw ValidationError("a control needs h-order at least 2 to be visible");
  Braiding S(sf->dim(), sf->h_order());
  for (const auto& [pair, t] : R) S.add(pair.first, pair.second, m, 1, t);
  if (S.trivial()) throw ValidationError("control braiding needs a nonzero R");
  return QuantumInstance{std::move(sf), std::move(S), true};
}

PairMap swap_minus_identity(const StateField& sf) {
  PairMap R;
  for (int i = 0; i < sf.dim(); ++i)
    for (int j = 0; j < sf.dim(); ++j)
      if (i != j && sf.weight(i) + sf.weight(j) <= sf.cutoff())
        R[{i, j}] = TensorElement::basis2(j, i) - TensorElement::basis2(i, j);
  return R;
}

QuantumInstance seeded_control_braiding(StateFieldPtr sf, unsigned seed) {
  if (!sf) throw ValidationError("no state-field correspondence");
  std::mt19937 rng(seed);
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> states;
  for (int i = 0; i < sf->dim(); ++i) {
    if (i == sf->vacuum()) continue;
    states.push_back(i);
    for (int j = 0; j < sf->dim(); ++j)
      if (j != sf->vacuum() && sf->weight(i) + sf->weight(j) <= sf->cutoff()) pairs.push_back({i, j});
  }
  if (pairs.empty()) throw ValidationError("instance has no nonvacuum pair under the cutoff");
  auto pick = [&](auto& v) { return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)]; };
  std::uniform_int_distribution<int> coef(1, 3), sign(0, 1), count(1, 2), shift(-1, 1);
  PairMap R;
  for (int n = count(rng); n > 0; --n) {
    auto [i, j] = pick(pairs);
    int k = pick(states);
    HScalar c(sign(rng) ? coef(rng) : -coef(rng));
    R[{i, j}] += sign(rng) ? TensorElement::basis2(sf->vacuum(), k, c) : TensorElement::basis2(k, sf->vacuum(), c);
  }
  int m = shift(rng);
  return make_control_braiding(std::move(sf), R, m);
}

}  // namespace qva
