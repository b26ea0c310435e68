#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qva/quantum.hpp"

namespace qva {

// Level-k universal affine sl2 truncated at weight cutoff <= 6. The basis is
// PBW monomials x_{-p}...|0> with letters ordered e < h < f, modes -1 before -2,
// and products come from letting currents act on the induced module.
StateField build_affine_sl2(const Rational& level, int cutoff, int h_order = 1);

// Free commutative differential algebra on (name, weight) generators truncated
// at the cutoff, with a_(-k-1)b = (T^k a / k!) b and a_(n)b = 0 for n >= 0.
StateField build_commutative(const std::vector<std::pair<std::string, int>>& generators, int cutoff,
                             int h_order = 1);

// V = span{|0>}.
StateField build_vacuum_only(int cutoff = 1, int h_order = 1);

// S = 1.
QuantumInstance wrap_trivial_braiding(StateFieldPtr sf);

// Basis pair -> rank-2 tensor.
using PairMap = std::map<std::pair<int, int>, TensorElement>;

// S = 1 + h z^m R, tagged as a control. R must be nonzero.
QuantumInstance make_control_braiding(StateFieldPtr sf, const PairMap& R, int m);
// swap - identity on every pair whose weights fit under the cutoff.
PairMap swap_minus_identity(const StateField& sf);
// R on one or two pairs of nonvacuum states, each sent to a multiple of
// |0> (x) k or k (x) |0>, which Y(z) never annihilates; m in {-1, 0, 1}.
QuantumInstance seeded_control_braiding(StateFieldPtr sf, unsigned seed);

}  // namespace qva
