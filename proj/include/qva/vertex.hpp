#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qva/dist.hpp"
#include "qva/report.hpp"

namespace qva {

// Structure constants a_(n)b on basis pairs plus the translation operator.
// Products are weight homogeneous: wt(a_(n)b) = wt(a) + wt(b) - n - 1. The
// table holds the projection to weights <= cutoff, so every stored entry is
// exact and anything heavier reads as zero.
class StateField {
 public:
  StateField(SpacePtr space, SparseMatrix T, int h_order);

  const GradedSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SparseMatrix& T() const { return T_; }
  int h_order() const { return h_order_; }
  int cutoff() const { return space_->cutoff(); }
  int dim() const { return space_->dim(); }
  int vacuum() const { return space_->vacuum(); }
  int weight(int i) const { return space_->weight(i); }

  // n -> a_(n)b for basis a = i, b = j.
  const std::map<int, GVector>& products(int i, int j) const;
  GVector product(int i, int n, int j) const;
  GVector product(const GVector& a, int n, const GVector& b) const;
  // Rejects entries that break weight homogeneity.
  void set_product(int i, int n, int j, GVector v);

  GVector apply_T(const GVector& v) const { return apply_linear(T_, v); }
  void set_T(SparseMatrix T);

  bool operator==(const StateField& o) const;

 private:
  SpacePtr space_;
  SparseMatrix T_;
  int h_order_;
  std::vector<std::map<int, GVector>> table_;
};

using StateFieldPtr = std::shared_ptr<const StateField>;

// wt(a) + wt(b) + wt(c) <= cutoff for basis indices.
bool weight_compatible(const StateField& sf, int a, int b, int c);
// The Borcherds identity at n involves a_(n)b, which is tabulated only when its
// weight fits under the cutoff.
bool borcherds_testable(const StateField& sf, int a, int b, int n);
// Range of n probed by the identity checks.
std::pair<int, int> default_n_range(const StateField& sf);

// Y(var)(a (x) b) = sum_n a_(n)b var^{-n-1}.
VectorDist apply_Y(const StateField& sf, const GVector& a, const GVector& b, const std::string& var = "z");
// e^{var T} applied coefficientwise.
VectorDist exp_T(const StateField& sf, const VectorDist& d, const std::string& var);
// e^{zT} Y(-z)(b (x) a).
VectorDist y_op(const StateField& sf, const GVector& a, const GVector& b, const std::string& var = "z");

// Y(v0)(1 (x) Y(v1)) and Y(v1)(Y(v0) (x) 1) on rank-3 tensors, in vars {v0, v1}.
VectorDist nested(const StateField& sf, const TensorElement& t, const std::vector<std::string>& vars);
VectorDist iterate(const StateField& sf, const TensorElement& t, const std::vector<std::string>& vars);
VectorDist nested(const StateField& sf, int a, int b, int c, const std::vector<std::string>& vars);
VectorDist iterate(const StateField& sf, int a, int b, int c, const std::vector<std::string>& vars);

// Y(w)(b (x) a(z) c) reordered to vars {z, w}: the second composition order.
VectorDist nested_swapped(const StateField& sf, const TensorElement& t);

// i_{z,w}(z-w)^n L - i_{w,z}(z-w)^n R, the left side shared by the Borcherds
// identity, its residue and the Jacobi slices.
VectorDist borcherds_lhs(const VectorDist& first, const VectorDist& second, int n);
// sum_j Y(w)(x_j (x) c) d_w^j delta(z,w) / j! laid out on the window.
VectorDist delta_series(const StateField& sf, const std::vector<GVector>& states, const GVector& c,
                        const Interval& zbox, const Interval& wbox);

// (Y(a,z)_(n) Y(b,z)) c.
VectorDist n_product_fields(const StateField& sf, int a, int b, int n, int c);

// The products a_(m)b feeding right-hand sides of the identity checks.
struct ProductSource {
  std::function<GVector(int)> product;
  // Whether a_(n)b and everything it is assembled from lies under the cutoff.
  std::function<bool(int)> testable;
  int top = 0;  // a_(m)b = 0 for m > top
};

ProductSource classical_products(const StateField& sf, int a, int b);

// Heavy compositions for one basis triple, shared by all checks on it.
// `first` is Y(z)(1 (x) Y(w)) of the (possibly braided) triple, `second`
// the swapped composition in vars {z, w}.
class TripleKernel {
 public:
  TripleKernel(const StateField& sf, int a, int b, int c, const Windows& win);
  TripleKernel(const StateField& sf, int a, int b, int c, const Windows& win, VectorDist first, VectorDist second,
               VectorDist iterated, ProductSource products);

  CheckReport locality() const;
  CheckReport associativity() const;
  CheckReport borcherds(int n) const;
  CheckReport nproduct(int n) const;
  CheckReport jacobi(int n_lo, int n_hi) const;

  const VectorDist& first() const { return first_; }
  const VectorDist& second() const { return second_; }
  const VectorDist& iterated() const { return iterated_; }

 private:
  CheckReport base(const std::string& name) const;
  const VectorDist& lhs(int n) const;

  const StateField& sf_;
  int a_, b_, c_;
  Windows win_;
  VectorDist first_, second_, iterated_;
  ProductSource products_;
  mutable std::map<int, VectorDist> lhs_cache_;
};

CheckReport validate_axioms(const StateField& sf);
CheckReport check_locality(const StateField& sf, int a, int b, int c, const Windows& win);
CheckReport check_skewsymmetry(const StateField& sf, int a, int b);
CheckReport check_associativity(const StateField& sf, int a, int b, int c, const Windows& win);
CheckReport check_jacobi(const StateField& sf, int a, int b, int c, const Windows& win);
CheckReport check_borcherds(const StateField& sf, int a, int b, int c, int n, const Windows& win);
// Compares over every basis c compatible with (a, b).
CheckReport check_nproduct_identity(const StateField& sf, int a, int b, int n, const Windows& win);
// Holomorphic iff a_(n)b = 0 for all n >= 0 (a_(n) multiplies z^{-n-1}).
CheckReport check_holomorphic(const StateField& sf);

// Describes a vector-valued difference for failure locations.
std::string describe(const StateField& sf, const GVector& v);

}  // namespace qva
