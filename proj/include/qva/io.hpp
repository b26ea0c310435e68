#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qva/quantum.hpp"

namespace qva {

// A state-field table with its comparison windows and an optional braiding.
struct Instance {
  StateFieldPtr sf;
  std::optional<Braiding> S;
  Windows win;
  bool control = false;

  // S = 1 when the file carries no braiding.
  QuantumInstance quantum() const;
  bool operator==(const Instance& o) const;
};

// Parameters of the deterministic builders.
struct BuildParams {
  std::string kind;         // affine_sl2 | commutative | vacuum
  std::string level = "1";  // affine level, a rational
  int cutoff = 3;
  int h_order = 1;
  std::vector<std::pair<std::string, int>> generators{{"u", 1}};
  std::string braiding = "none";  // none | trivial | seeded:N | swap:M
};
Instance build_instance(const BuildParams& params);

// A basis label or its index.
int basis_index(const StateField& sf, const std::string& label);

// Sections HEADER, BASIS, VACUUM, T, Y and optionally S; see README.
std::string emit_instance(const Instance& inst);
// A lower h_order truncates every coefficient; a higher one is refused.
Instance parse_instance(const std::string& text, std::optional<int> h_order = std::nullopt);
Instance read_instance(const std::string& path, std::optional<int> h_order = std::nullopt);

// "c·name + ..." with bare rationals for h-free coefficients.
std::string pretty(const GradedSpace& s, const GVector& v);
std::string pretty(const GradedSpace& s, const TensorElement& t);

// The commutator of the fields of a and b decomposed as
// sum_j c^j(w) d_w^j delta(z,w) / j!; entry j names the state whose field is c^j.
std::vector<std::string> commutator_states(const Instance& inst, int a, int b);

// One JSON object, keys in a fixed order.
std::string report_json(const CheckReport& r);

struct RunOptions {
  std::string suite = "classical";  // classical | quantum | equivalence | a single check name
  std::optional<std::pair<int, int>> n_range;
  std::optional<int> max_witness;
  std::optional<std::pair<unsigned, int>> sample;  // seed, count
  int workers = 0;                                 // 0: QVA_WORKERS, else hardware threads
};

// Names accepted as a single-check suite.
const std::vector<std::string>& check_names();
// Weight-compatible triples, or a reproducible sample of them.
std::vector<std::array<int, 3>> select_triples(const StateField& sf,
                                               const std::optional<std::pair<unsigned, int>>& sample);
int default_workers();
// Records sorted by (check, a, b, c, n) whatever the completion order.
std::vector<CheckReport> run_checks(const Instance& inst, const RunOptions& opt);
// 0 iff no non-control record failed.
int exit_code(const std::vector<CheckReport>& records);

}  // namespace qva
