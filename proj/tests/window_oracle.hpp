#pragma once

// Brute-force reference for the window calculus: random finite series are
// known in full, truncated to a random trusted box with honest support bounds,
// and every trusted output coefficient is compared with the full convolution.

#include <map>
#include <random>
#include <string>

#include "qva/dist.hpp"

namespace oracle {

using qva::Axis;
using qva::Exp;
using qva::HScalar;
using qva::Interval;
using qva::kInf;
using qva::ScalarDist;

struct Series {
  std::vector<std::string> vars;
  std::map<Exp, HScalar> full;
  ScalarDist windowed;
};

inline long total(const Exp& e, int nv) { return nv == 2 ? e[0] + e[1] : e[0]; }

inline Series random_series(std::mt19937& rng, int nv) {
  std::vector<std::string> vars = nv == 2 ? std::vector<std::string>{"z", "w"} : std::vector<std::string>{"z"};
  std::uniform_int_distribution<int> coin(0, 3), coef(-4, 4), ex(-6, 6), cnt(1, 10);
  Series s{vars, {}, ScalarDist(vars)};
  int n = cnt(rng);
  for (int i = 0; i < n; ++i) {
    Exp e{ex(rng), nv == 2 ? ex(rng) : 0};
    int c = coef(rng);
    if (c != 0) s.full[e] += HScalar(c);
  }
  for (auto it = s.full.begin(); it != s.full.end();) it = it->second.is_zero() ? s.full.erase(it) : std::next(it);

  int na = nv == 2 ? 3 : 1;
  std::vector<Axis> ax(na);
  for (int a = 0; a < na; ++a) {
    long lo = kInf, hi = -kInf;
    for (const auto& [e, c] : s.full) {
      long v = a < 2 ? e[a] : total(e, 2);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (s.full.empty()) lo = hi = 0;
    // Honest but possibly loose support, sometimes unbounded on one side.
    int mode = coin(rng);
    if (mode == 1) lo -= coin(rng);
    if (mode == 2) hi += coin(rng);
    if (mode == 3) (coin(rng) < 2 ? lo : hi) = coin(rng) < 2 ? -kInf : kInf;
    if (lo >= kInf) lo = -kInf;
    if (hi <= -kInf) hi = kInf;
    ax[a].supp = {lo, hi};
    // Random trusted box, possibly unbounded.
    long blo = coin(rng) == 0 ? -kInf : ex(rng) - 3;
    long bhi = coin(rng) == 0 ? kInf : ex(rng) + 3;
    if (blo > bhi) std::swap(blo, bhi);
    if (a == 2) {
      blo = coin(rng) < 3 ? -kInf : blo;
      bhi = coin(rng) < 3 ? kInf : bhi;
    }
    ax[a].box = {blo, bhi};
  }
  s.windowed.set_axes(ax);
  for (const auto& [e, c] : s.full) s.windowed.add(e, c);
  return s;
}

inline std::map<Exp, HScalar> full_product(const Series& a, const Series& b) {
  std::map<Exp, HScalar> r;
  for (const auto& [ea, ca] : a.full)
    for (const auto& [eb, cb] : b.full) r[{ea[0] + eb[0], ea[1] + eb[1]}] += ca * cb;
  return r;
}

struct Tally {
  long checked = 0;
  long mismatched = 0;
  long untrusted = 0;
};

// Compares every trusted coefficient of `got` (stored or implicitly zero on the
// box, probed over a generous grid) with `truth`.
inline void compare_trusted(const ScalarDist& got, const std::map<Exp, HScalar>& truth, Tally& t) {
  int nv = got.nv();
  auto value = [&](const Exp& e) {
    auto it = truth.find(e);
    return it == truth.end() ? HScalar() : it->second;
  };
  const long R = 30;
  if (nv == 0) {
    ++t.checked;
    if (got.coeff({0, 0}) != value({0, 0})) ++t.mismatched;
    return;
  }
  for (long i = -R; i <= R; ++i)
    for (long j = (nv == 2 ? -R : 0); j <= (nv == 2 ? R : 0); ++j) {
      Exp e{i, j};
      if (!got.in_box(e)) continue;
      ++t.checked;
      if (got.coeff(e) != value(e)) ++t.mismatched;
    }
}

inline void product_trial(std::mt19937& rng, int nv, Tally& t) {
  Series a = random_series(rng, nv), b = random_series(rng, nv);
  ScalarDist p;
  try {
    p = qva::dist_mul(a.windowed, b.windowed);
  } catch (const qva::UntrustedProduct&) {
    ++t.untrusted;
    return;
  }
  compare_trusted(p, full_product(a, b), t);
}

inline void residue_trial(std::mt19937& rng, int nv, Tally& t) {
  Series a = random_series(rng, nv);
  const std::string var = nv == 2 && (rng() & 1) ? "w" : "z";
  ScalarDist r;
  try {
    r = qva::residue(a.windowed, var);
  } catch (const qva::ResidueOutsideWindow&) {
    ++t.untrusted;
    return;
  }
  int k = var == "z" ? 0 : 1;
  std::map<Exp, HScalar> truth;
  for (const auto& [e, c] : a.full)
    if (e[k] == -1) truth[{nv == 2 ? e[1 - k] : 0, 0}] += c;
  compare_trusted(r, truth, t);
}

}  // namespace oracle
