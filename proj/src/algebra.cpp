#include "qva/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace qva {

HScalar::HScalar(const Rational& q, int order) : order_(order) {
  if (order < 1) throw Error("h-order must be positive");
  if (sgn(q) != 0) c_.push_back(q);
}

HScalar HScalar::from_coeffs(std::vector<Rational> coeffs, int order) {
  if (order < 1) throw Error("h-order must be positive");
  HScalar s;
  s.order_ = order;
  if (order != kUnbounded && static_cast<int>(coeffs.size()) > order) coeffs.resize(order);
  for (auto& q : coeffs) q.canonicalize();
  s.c_ = std::move(coeffs);
  s.trim();
  return s;
}

HScalar HScalar::h_power(int p, int order, const Rational& q) {
  std::vector<Rational> c(p + 1);
  c[p] = q;
  return from_coeffs(std::move(c), order);
}

Rational HScalar::coeff(int p) const {
  return p >= 0 && p < static_cast<int>(c_.size()) ? c_[p] : Rational(0);
}

int HScalar::lowest_order() const {
  for (size_t p = 0; p < c_.size(); ++p)
    if (sgn(c_[p]) != 0) return static_cast<int>(p);
  return -1;
}

void HScalar::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

HScalar HScalar::truncated(int order) const {
  HScalar r = *this;
  r.order_ = std::min(order_, order);
  if (r.order_ != kUnbounded && static_cast<int>(r.c_.size()) > r.order_) r.c_.resize(r.order_);
  r.trim();
  return r;
}

HScalar& HScalar::operator+=(const HScalar& o) {
  order_ = std::min(order_, o.order_);
  size_t n = std::max(c_.size(), o.c_.size());
  if (order_ != kUnbounded) n = std::min(n, static_cast<size_t>(order_));
  c_.resize(std::max(c_.size(), n));
  for (size_t p = 0; p < n && p < o.c_.size(); ++p) c_[p] += o.c_[p];
  c_.resize(n);
  trim();
  return *this;
}

HScalar& HScalar::operator-=(const HScalar& o) { return *this += -o; }

HScalar& HScalar::operator*=(const HScalar& o) {
  int order = std::min(order_, o.order_);
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    order_ = order;
    return *this;
  }
  if (c_.size() == 1 && o.c_.size() == 1) {
    c_[0] *= o.c_[0];
    order_ = order;
    return *this;
  }
  size_t n = c_.size() + o.c_.size() - 1;
  if (order != kUnbounded) n = std::min(n, static_cast<size_t>(order));
  std::vector<Rational> r(n);
  for (size_t i = 0; i < c_.size() && i < n; ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (size_t j = 0; j < o.c_.size() && i + j < n; ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  order_ = order;
  trim();
  return *this;
}

HScalar HScalar::operator-() const {
  HScalar r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

HScalar HScalar::inverse() const {
  if (!is_unit()) throw InversionOfNonUnit("h^0 coefficient is zero");
  if (c_.size() == 1) return HScalar(1 / c_[0], order_);
  if (order_ == kUnbounded)
    throw InversionOfNonUnit("inverse of a non-constant series needs a finite h-order");
  // b_0 = 1/a_0, b_p = -(sum_{i=1..p} a_i b_{p-i}) / a_0
  std::vector<Rational> b(order_);
  b[0] = 1 / c_[0];
  for (int p = 1; p < order_; ++p) {
    Rational s = 0;
    for (int i = 1; i <= p && i < static_cast<int>(c_.size()); ++i) s += c_[i] * b[p - i];
    b[p] = -s * b[0];
  }
  return from_coeffs(std::move(b), order_);
}

std::string HScalar::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (size_t p = 0; p < c_.size(); ++p) {
    if (sgn(c_[p]) == 0) continue;
    if (!out.empty()) out += '+';
    out += c_[p].get_str() + "*h^" + std::to_string(p);
  }
  return out;
}

HScalar HScalar::parse(const std::string& text, int order) {
  if (text == "0") return HScalar(Rational(0), order);
  std::vector<Rational> c;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t star = text.find("*h^", pos);
    if (star == std::string::npos) throw Error("malformed h-scalar: " + text);
    size_t end = star + 3;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end == star + 3) throw Error("malformed h-exponent: " + text);
    Rational q;
    if (q.set_str(text.substr(pos, star - pos), 10) != 0) throw Error("malformed rational: " + text);
    if (q.get_den() == 0) throw Error("zero denominator: " + text);
    Rational canon = q;
    canon.canonicalize();
    if (canon.get_num() != q.get_num() || canon.get_den() != q.get_den())
      throw Error("rational not in lowest terms: " + text);
    int p = std::stoi(text.substr(star + 3, end - star - 3));
    if (static_cast<int>(c.size()) <= p) c.resize(p + 1);
    c[p] += canon;
    pos = end;
    if (pos < text.size()) {
      if (text[pos] != '+') throw Error("malformed h-scalar: " + text);
      ++pos;
    }
  }
  if (order != kUnbounded && static_cast<int>(c.size()) > order)
    throw Error("h-exponent beyond h-order in: " + text);
  return from_coeffs(std::move(c), order);
}

GradedSpace::GradedSpace(std::vector<BasisVector> basis, int vacuum, int cutoff)
    : basis_(std::move(basis)), vacuum_(vacuum), cutoff_(cutoff) {
  if (cutoff < 0) throw ValidationError("weight cutoff must be nonnegative");
  if (vacuum < 0 || vacuum >= dim()) throw ValidationError("vacuum index out of range");
  if (basis_[vacuum].weight != 0) throw ValidationError("vacuum must have weight 0");
  for (int i = 0; i < dim(); ++i) {
    const auto& b = basis_[i];
    if (b.weight < 0 || b.weight > cutoff)
      throw ValidationError("basis vector " + b.name + " has weight outside [0, cutoff]");
    if (!by_name_.emplace(b.name, i).second)
      throw ValidationError("duplicate basis name " + b.name);
  }
}

int GradedSpace::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw IndexOutOfRange("unknown basis vector " + name);
  return it->second;
}

std::vector<int> GradedSpace::of_weight(int w) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].weight == w) out.push_back(i);
  return out;
}

void GradedSpace::check_index(int i) const {
  if (i < 0 || i >= dim()) throw IndexOutOfRange("basis index " + std::to_string(i) + " out of range");
}

GVector GVector::basis(int i, const HScalar& c) {
  GVector v;
  v.add(i, c);
  return v;
}

HScalar GVector::coord(int i) const {
  auto it = coords_.find(i);
  return it == coords_.end() ? HScalar() : it->second;
}

void GVector::add(int i, const HScalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = coords_.try_emplace(i, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) coords_.erase(it);
}

GVector& GVector::operator+=(const GVector& o) {
  for (const auto& [i, c] : o.coords_) add(i, c);
  return *this;
}

GVector& GVector::operator-=(const GVector& o) {
  for (const auto& [i, c] : o.coords_) add(i, -c);
  return *this;
}

GVector GVector::operator-() const {
  GVector r;
  for (const auto& [i, c] : coords_) r.coords_.emplace(i, -c);
  return r;
}

GVector operator*(const HScalar& s, const GVector& v) {
  GVector r;
  if (s.is_zero()) return r;
  for (const auto& [i, c] : v.coords_) {
    HScalar p = s * c;
    if (!p.is_zero()) r.coords_.emplace(i, std::move(p));
  }
  return r;
}

int GVector::lowest_order() const {
  int best = -1;
  for (const auto& [i, c] : coords_) {
    int p = c.lowest_order();
    if (best < 0 || p < best) best = p;
  }
  return best;
}

GVector GVector::truncated(int order) const {
  GVector r;
  for (const auto& [i, c] : coords_) r.add(i, c.truncated(order));
  return r;
}

std::pair<int, int> GVector::weight_range(const GradedSpace& s) const {
  if (coords_.empty()) return {0, -1};
  int lo = INT_MAX, hi = INT_MIN;
  for (const auto& [i, c] : coords_) {
    lo = std::min(lo, s.weight(i));
    hi = std::max(hi, s.weight(i));
  }
  return {lo, hi};
}

std::string GVector::str(const GradedSpace& s) const {
  if (coords_.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : coords_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")*" + s.name(i);
  }
  return out;
}

TensorElement TensorElement::basis2(int i, int j, const HScalar& c) {
  TensorElement t(2);
  t.add({i, j, -1}, c);
  return t;
}

TensorElement TensorElement::basis3(int i, int j, int k, const HScalar& c) {
  TensorElement t(3);
  t.add({i, j, k}, c);
  return t;
}

void TensorElement::add(const Key& k, const HScalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

HScalar TensorElement::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? HScalar() : it->second;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (o.rank_ != rank_ && !o.is_zero() && !is_zero()) throw DimensionMismatch("tensor rank mismatch");
  if (is_zero()) rank_ = o.rank_;
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  if (o.rank_ != rank_ && !o.is_zero() && !is_zero()) throw DimensionMismatch("tensor rank mismatch");
  if (is_zero()) rank_ = o.rank_;
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

TensorElement operator*(const HScalar& s, const TensorElement& t) {
  TensorElement r(t.rank_);
  if (s.is_zero()) return r;
  for (const auto& [k, c] : t.terms_) {
    HScalar p = s * c;
    if (!p.is_zero()) r.terms_.emplace(k, std::move(p));
  }
  return r;
}

int TensorElement::lowest_order() const {
  int best = -1;
  for (const auto& [k, c] : terms_) {
    int p = c.lowest_order();
    if (best < 0 || p < best) best = p;
  }
  return best;
}

TensorElement TensorElement::truncated(int order) const {
  TensorElement r(rank_);
  for (const auto& [k, c] : terms_) r.add(k, c.truncated(order));
  return r;
}

TensorElement TensorElement::permuted(const std::array<int, 3>& perm) const {
  TensorElement r(rank_);
  for (const auto& [k, c] : terms_) {
    Key n{-1, -1, -1};
    for (int s = 0; s < rank_; ++s) n[s] = k[perm[s]];
    r.add(n, c);
  }
  return r;
}

std::string TensorElement::str(const GradedSpace& s) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")*(";
    for (int i = 0; i < rank_; ++i) out += (i ? "," : "") + s.name(k[i]);
    out += ")";
  }
  return out;
}

TensorElement tensor(const GVector& u, const GVector& v) {
  TensorElement t(2);
  for (const auto& [i, a] : u.coords())
    for (const auto& [j, b] : v.coords()) t.add({i, j, -1}, a * b);
  return t;
}

TensorElement tensor(const GVector& u, const GVector& v, const GVector& w) {
  TensorElement t(3);
  for (const auto& [i, a] : u.coords())
    for (const auto& [j, b] : v.coords()) {
      HScalar ab = a * b;
      for (const auto& [k, c] : w.coords()) t.add({i, j, k}, ab * c);
    }
  return t;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.add(i, i, HScalar(1));
  return m;
}

void SparseMatrix::add(int i, int j, const HScalar& c) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionMismatch("matrix index out of range");
  if (c.is_zero()) return;
  auto& col = by_col_[j];
  auto [it, fresh] = col.try_emplace(i, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) col.erase(it);
}

HScalar SparseMatrix::at(int i, int j) const {
  const auto& col = by_col_.at(j);
  auto it = col.find(i);
  return it == col.end() ? HScalar() : it->second;
}

GVector apply_linear(const SparseMatrix& m, const GVector& v) {
  GVector r;
  for (const auto& [j, c] : v.coords()) {
    if (j < 0 || j >= m.cols()) throw DimensionMismatch("vector index beyond matrix columns");
    for (const auto& [i, a] : m.column(j)) r.add(i, a * c);
  }
  return r;
}

Rational binomial(long n, long k) {
  if (k < 0) return 0;
  Rational r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

Rational factorial(long n) {
  Rational r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace qva
