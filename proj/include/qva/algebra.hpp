#pragma once

#include <gmpxx.h>

#include <array>
#include <climits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qva/errors.hpp"

namespace qva {

using Rational = mpq_class;

// Element of Q[[h]]/h^M. Coefficients are stored densely up to the last
// nonzero one; an order of kUnbounded means no truncation was requested.
class HScalar {
 public:
  static constexpr int kUnbounded = INT_MAX;

  HScalar() = default;
  HScalar(long v) : HScalar(Rational(v)) {}  // NOLINT: integers promote freely
  HScalar(const Rational& q, int order = kUnbounded);

  static HScalar from_coeffs(std::vector<Rational> coeffs, int order);
  static HScalar h_power(int p, int order, const Rational& q = 1);

  int order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int p) const;
  bool is_zero() const { return c_.empty(); }
  bool is_unit() const { return !c_.empty() && sgn(c_[0]) != 0; }
  // Lowest h-exponent with a nonzero coefficient, or -1 for zero.
  int lowest_order() const;

  HScalar truncated(int order) const;
  HScalar inverse() const;

  HScalar& operator+=(const HScalar& o);
  HScalar& operator-=(const HScalar& o);
  HScalar& operator*=(const HScalar& o);
  friend HScalar operator+(HScalar a, const HScalar& b) { return a += b; }
  friend HScalar operator-(HScalar a, const HScalar& b) { return a -= b; }
  friend HScalar operator*(HScalar a, const HScalar& b) { return a *= b; }
  HScalar operator-() const;
  bool operator==(const HScalar& o) const { return c_ == o.c_; }
  bool operator!=(const HScalar& o) const { return !(*this == o); }

  // "p/q*h^m" terms joined by '+'; zero prints as "0".
  std::string str() const;
  static HScalar parse(const std::string& text, int order);

 private:
  void trim();
  std::vector<Rational> c_;
  int order_ = kUnbounded;
};

struct BasisVector {
  std::string name;
  int weight = 0;
};

class GradedSpace {
 public:
  GradedSpace(std::vector<BasisVector> basis, int vacuum, int cutoff);

  int dim() const { return static_cast<int>(basis_.size()); }
  int vacuum() const { return vacuum_; }
  int cutoff() const { return cutoff_; }
  int weight(int i) const { return basis_.at(i).weight; }
  const std::string& name(int i) const { return basis_.at(i).name; }
  const std::vector<BasisVector>& basis() const { return basis_; }
  int index_of(const std::string& name) const;
  std::vector<int> of_weight(int w) const;
  void check_index(int i) const;

 private:
  std::vector<BasisVector> basis_;
  std::map<std::string, int> by_name_;
  int vacuum_;
  int cutoff_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

class GVector {
 public:
  GVector() = default;
  static GVector basis(int i, const HScalar& c = HScalar(1));

  const std::map<int, HScalar>& coords() const { return coords_; }
  HScalar coord(int i) const;
  bool is_zero() const { return coords_.empty(); }
  void add(int i, const HScalar& c);

  GVector& operator+=(const GVector& o);
  GVector& operator-=(const GVector& o);
  friend GVector operator+(GVector a, const GVector& b) { return a += b; }
  friend GVector operator-(GVector a, const GVector& b) { return a -= b; }
  GVector operator-() const;
  friend GVector operator*(const HScalar& s, const GVector& v);
  bool operator==(const GVector& o) const { return coords_ == o.coords_; }
  bool operator!=(const GVector& o) const { return !(*this == o); }

  int lowest_order() const;
  GVector truncated(int order) const;
  // Weight range of the support; {0,-1} when zero.
  std::pair<int, int> weight_range(const GradedSpace& s) const;
  std::string str(const GradedSpace& s) const;

 private:
  std::map<int, HScalar> coords_;
};

// Rank 2 or 3 element of the completed tensor power; unused slots hold -1.
class TensorElement {
 public:
  using Key = std::array<int, 3>;

  explicit TensorElement(int rank = 2) : rank_(rank) {}
  static TensorElement basis2(int i, int j, const HScalar& c = HScalar(1));
  static TensorElement basis3(int i, int j, int k, const HScalar& c = HScalar(1));

  int rank() const { return rank_; }
  const std::map<Key, HScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const Key& k, const HScalar& c);
  HScalar coeff(const Key& k) const;

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const HScalar& s, const TensorElement& t);
  bool operator==(const TensorElement& o) const {
    return rank_ == o.rank_ && terms_ == o.terms_;
  }

  int lowest_order() const;
  TensorElement truncated(int order) const;
  // Permutes slots: result slot k holds input slot perm[k].
  TensorElement permuted(const std::array<int, 3>& perm) const;
  std::string str(const GradedSpace& s) const;

 private:
  int rank_;
  std::map<Key, HScalar> terms_;
};

TensorElement tensor(const GVector& u, const GVector& v);
TensorElement tensor(const GVector& u, const GVector& v, const GVector& w);

class SparseMatrix {
 public:
  SparseMatrix(int rows = 0, int cols = 0) : rows_(rows), cols_(cols), by_col_(cols) {}
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void add(int i, int j, const HScalar& c);
  HScalar at(int i, int j) const;
  // Entries of column j as (row, coefficient), rows ascending.
  const std::map<int, HScalar>& column(int j) const { return by_col_.at(j); }
  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && by_col_ == o.by_col_;
  }

 private:
  int rows_, cols_;
  std::vector<std::map<int, HScalar>> by_col_;
};

GVector apply_linear(const SparseMatrix& m, const GVector& v);

Rational binomial(long n, long k);  // generalized: n may be negative, k >= 0
Rational factorial(long n);

}  // namespace qva
