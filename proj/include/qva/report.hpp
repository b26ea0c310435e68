#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "qva/dist.hpp"

namespace qva {

enum class Status { kPass, kFail, kHypothesisFailed, kSkipped };

std::string status_name(Status s);

// Comparison windows shared by all checks on an instance.
struct Windows {
  Interval z;          // exponent range in each of z, w where deltas are laid out
  Interval x;          // x-exponents examined by the three-variable identities
  int max_witness = 0;  // largest N tried by witness scans
};

Windows default_windows(int cutoff);

struct CheckReport {
  std::string check;
  std::optional<int> a, b, c, n;
  int h_order = 1;
  Status status = Status::kPass;
  std::vector<std::optional<int>> witness;  // per h-order; empty when the check has none
  int first_failing_h_order = -1;
  std::vector<std::string> box_vars;
  std::vector<Interval> box;
  std::string location;  // set on failure
  std::string detail;
  double elapsed_ms = 0;
  bool control = false;

  bool failed() const { return status == Status::kFail; }
  // Folds another outcome into this one: the lowest failing h-order wins.
  void absorb(const CheckReport& o);
};

std::string exponent_str(const std::vector<std::string>& vars, const Exp& e);

// Fills status, box and location from a two-sided comparison.
template <class C, class Describe>
void record(CheckReport& r, const WindowedDist<C>& lhs, const WindowedDist<C>& rhs, Describe describe,
            const std::string& prefix = "") {
  WindowedDist<C> diff = lhs - rhs;
  Comparison cmp = compare(lhs, rhs);
  CheckReport part;
  part.box_vars = cmp.vars;
  for (int i = 0; i < static_cast<int>(cmp.vars.size()); ++i) part.box.push_back(cmp.box[i]);
  if (!cmp.equal) {
    part.status = Status::kFail;
    part.first_failing_h_order = cmp.first_failing_h_order;
    part.location = prefix + exponent_str(cmp.vars, *cmp.location) + ": " + describe(diff.coeff(*cmp.location));
  }
  r.absorb(part);
}

// Fills witness, box and failure location from a witness scan.
void fill_witness(CheckReport& r, const LocalityResult& lr, const std::vector<std::string>& vars);

// Wall-clock stopwatch for elapsed_ms.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qva
