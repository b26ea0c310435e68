#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qva/vertex.hpp"

namespace qva {

// s0*z + s1*w raised to integer powers, expanded in a declared domain. Single
// variable arguments (one sign zero) need no domain.
struct Arg {
  int s0 = 1;
  int s1 = 0;
  Expansion order = Expansion::kFirst;

  static Arg z() { return {1, 0, Expansion::kFirst}; }
  static Arg minus_z() { return {-1, 0, Expansion::kFirst}; }
  static Arg w() { return {0, 1, Expansion::kFirst}; }
  // The expansion domain is part of the argument and must be spelled out.
  static Arg z_minus_w(Expansion order) { return {1, -1, order}; }
  static Arg w_minus_z(Expansion order) { return {-1, 1, order}; }
  static Arg z_plus_w(Expansion order) { return {1, 1, order}; }
};

// arg^m in vars; the small variable of a negative power is cut at small_hi.
ScalarDist arg_power(const Arg& arg, long m, long small_hi, const std::vector<std::string>& vars);

// S(z) = 1 + sum_{m, p>=1} h^p z^m R_{m,p}. Only the tail is stored: for each
// basis pair, m -> rank-2 tensor whose coefficients carry the h-powers.
class Braiding {
 public:
  Braiding(int dim, int h_order);

  int dim() const { return dim_; }
  int h_order() const { return h_order_; }
  bool trivial() const { return tail_.empty(); }

  // Adds h^p z^m r to S(z)(i (x) j); p >= 1.
  void add(int i, int j, int m, int p, const TensorElement& r);
  // m -> tail tensor for the pair; empty for untouched pairs.
  const std::map<int, TensorElement>& tail(int i, int j) const;
  const std::map<std::pair<int, int>, std::map<int, TensorElement>>& entries() const { return tail_; }
  // Every z-exponent carrying a tail term.
  std::set<int> exponents() const;
  // Every h-power carrying a tail term.
  std::set<int> h_powers() const;
  // The tail with h-powers above p dropped.
  Braiding truncated(int p) const;

  bool operator==(const Braiding& o) const { return dim_ == o.dim_ && h_order_ == o.h_order_ && tail_ == o.tail_; }

 private:
  int dim_;
  int h_order_;
  std::map<std::pair<int, int>, std::map<int, TensorElement>> tail_;
};

struct QuantumInstance {
  StateFieldPtr sf;
  Braiding S;
  // Controls are expected to fail; reports mark them.
  bool control = false;

  int h_order() const { return sf->h_order(); }
};

// S(z)(a (x) b) as a rank-2 tensor-valued distribution in z.
TensorDist apply_S(const QuantumInstance& q, const GVector& a, const GVector& b);
// S^{ij}(arg) applied to a tensor-valued distribution on slots (i, j) in this
// order; small_hi cuts negative powers of the argument.
TensorDist lift_S(const QuantumInstance& q, const TensorDist& d, int i, int j, const Arg& arg, long small_hi);

// Constant tensor in vars.
TensorDist constant_tensor(const TensorElement& t, const std::vector<std::string>& vars);

// Y(var) applied to a rank-2 tensor distribution; var must be one of d's vars.
VectorDist compose_Y(const StateField& sf, const TensorDist& d, const std::string& var);
// Y(z)(1 (x) Y(w)) on a rank-3 tensor distribution in {z, w}.
VectorDist compose_nested(const StateField& sf, const TensorDist& d);
// Y(w)(1 (x) Y(z)) on a rank-3 tensor distribution in {z, w}: slot 0 carries w.
VectorDist compose_nested_swapped(const StateField& sf, const TensorDist& d);
// Y(z+w)(1 (x) Y(w)), expanded in powers of w/z.
VectorDist compose_sum_nested(const StateField& sf, const TensorDist& d);
// (Y(z) (x) 1) on a rank-3 tensor distribution in {z, w}; rank-2 result.
TensorDist compose_left(const StateField& sf, const TensorDist& d);

// a^S_(n)b = Res_z z^n Y(z)S(z)(a (x) b).
GVector s_n_product(const QuantumInstance& q, const GVector& a, const GVector& b, int n);
ProductSource quantum_products(const QuantumInstance& q, int a, int b);
// Res_x of the S-twisted n-product of fields applied to c, in variable z.
VectorDist quantum_n_product_fields(const QuantumInstance& q, int a, int b, int n, int c, const Windows& win);

enum class HexagonMode { kRaw, kComposed };
enum class BraidProp { kVacuum, kLeftShift, kRightShift, kTotalShift, kUnitarity, kQybe };
std::string prop_name(BraidProp p);

// Compositions shared by the quantum checks on one basis triple.
//
// Every h-power where S changes cuts the braiding. h^p is judged on the cuts
// that agree with S through p, so images that only appear at higher powers
// cannot shrink the trusted boxes of lower orders.
class QuantumTriple {
 public:
  QuantumTriple(const QuantumInstance& q, int a, int b, int c, const Windows& win);
  QuantumTriple(const QuantumTriple&) = delete;
  QuantumTriple& operator=(const QuantumTriple&) = delete;

  CheckReport s_locality() const;
  CheckReport s_commutativity() const;
  CheckReport quasi_associativity() const;
  CheckReport associativity() const;
  CheckReport hexagon(HexagonMode mode) const;
  CheckReport qybe(HexagonMode mode) const;
  CheckReport borcherds(int n) const;
  CheckReport nproduct(int n) const;
  CheckReport jacobi(int n_lo, int n_hi) const;

  // Y(z)(1 (x) Y(w))(S(z-w)(a (x) b) (x) c) expanded in powers of w/z.
  const VectorDist& braided_first() const;

 private:
  struct Cut {
    std::unique_ptr<QuantumInstance> q;
    std::unique_ptr<QuantumTriple> t;
    int trusted_hi;
  };

  QuantumTriple(const QuantumInstance& q, int a, int b, int c, const Windows& win, bool single);
  template <class F>
  CheckReport over_cuts(F check) const;
  CheckReport locality_over_cuts(const std::string& name, VectorDist (QuantumTriple::*diff)() const, int sign) const;
  VectorDist s_locality_diff() const;
  VectorDist quasi_associativity_diff() const;
  CheckReport s_commutativity_single() const;
  CheckReport hexagon_single(HexagonMode mode) const;
  CheckReport qybe_single(HexagonMode mode) const;
  CheckReport jacobi_single(int n_lo, int n_hi) const;

  CheckReport base(const std::string& name) const;
  long small_hi() const { return win_.z.hi; }
  const TripleKernel& classical() const;
  const TripleKernel& braided() const;

  const QuantumInstance& q_;
  const StateField& sf_;
  int a_, b_, c_;
  Windows win_;
  // Built on first use; a QuantumTriple is not shared between threads.
  mutable std::optional<VectorDist> braided_first_;
  mutable std::optional<TripleKernel> classical_;
  mutable std::optional<TripleKernel> braided_;
  std::vector<Cut> cuts_;  // lower cuts; the last one is this triple itself
};

CheckReport check_s_locality(const QuantumInstance& q, int a, int b, int c, const Windows& win);
CheckReport check_ys_equals_yop(const QuantumInstance& q, int a, int b);
CheckReport check_quasi_associativity(const QuantumInstance& q, int a, int b, int c, const Windows& win);
CheckReport check_associativity_q(const QuantumInstance& q, int a, int b, int c, const Windows& win);
CheckReport check_hexagon(const QuantumInstance& q, int a, int b, int c, HexagonMode mode, const Windows& win);
// Pair properties run over all basis pairs, qybe over compatible triples.
CheckReport check_braiding_props(const QuantumInstance& q, BraidProp which, HexagonMode mode, const Windows& win);
CheckReport check_quantum_nproduct_identity(const QuantumInstance& q, int a, int b, int n, const Windows& win);
CheckReport check_quantum_borcherds(const QuantumInstance& q, int a, int b, int c, int n, const Windows& win);
CheckReport check_s_jacobi(const QuantumInstance& q, int a, int b, int c, const Windows& win);
CheckReport check_s_commutativity(const QuantumInstance& q, int a, int b, int c, const Windows& win);

// :ab: = Res_z z^{-1} Y(z)(a (x) b) = a_(-1)b.
GVector normally_ordered_product(const QuantumInstance& q, const GVector& a, const GVector& b);
// :ba: against :Res_z z^{-1}(e^{zT} (x) 1)S(z)(a (x) b):.
CheckReport check_scomm_commutation(const QuantumInstance& q, int a, int b);

// Candidate field of a: z-exponent -> matrix acting on V.
using FieldTable = std::map<int, SparseMatrix>;
FieldTable field_table(const QuantumInstance& q, const GVector& a, bool opposite);
// Under translation covariance and S-locality of the candidate with every Y(b, .),
// the candidate equals Y(z)S(z)(a (x) -) for a = candidate(z)|0> at z = 0.
CheckReport check_quantum_goddard(const QuantumInstance& q, int a, const FieldTable& candidate, const Windows& win);

// The four product identities of the S-twisted products on basis vectors.
CheckReport check_s_product_vacuum_left(const QuantumInstance& q, int a, int n);
CheckReport check_s_product_vacuum_right(const QuantumInstance& q, int a, int n);
CheckReport check_s_product_shift(const QuantumInstance& q, int a, int b, int n);
CheckReport check_s_product_derivation(const QuantumInstance& q, int a, int b, int n);

std::string describe(const StateField& sf, const TensorElement& t);

// The five condition suites that must agree on a quantum instance.
enum class Suite { kLocalityAssociativity, kJacobi, kAssociativityYS, kBorcherds, kNProductLocality };
const std::vector<Suite>& all_suites();
std::string suite_name(Suite s);
// Check names whose records make up the suite.
const std::vector<std::string>& suite_members(Suite s);
// Fails at the lowest failing h-order among the member records.
CheckReport suite_verdict(Suite s, const std::vector<CheckReport>& records);
// Passes when every suite verdict has the same status and first failing h-order.
CheckReport suites_agree(const std::vector<CheckReport>& verdicts);
// Member records of every suite on the given triples, n in [n_lo, n_hi].
std::vector<CheckReport> equivalence_records(const QuantumInstance& q, const std::vector<std::array<int, 3>>& triples,
                                             int n_lo, int n_hi, const Windows& win);

}  // namespace qva
