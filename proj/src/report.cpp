#include "qva/report.hpp"

namespace qva {

std::string status_name(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kHypothesisFailed: return "hypothesis_failed";
    case Status::kSkipped: return "skipped";
  }
  return "unknown";
}

Windows default_windows(int cutoff) {
  long w = 3L * cutoff + 6;
  return Windows{Interval{-w, w}, Interval{-(cutoff + 2L), static_cast<long>(cutoff)}, 2 * cutoff + 4};
}

void CheckReport::absorb(const CheckReport& o) {
  if (box.empty()) {
    box_vars = o.box_vars;
    box = o.box;
  } else if (o.box_vars == box_vars) {
    for (size_t i = 0; i < box.size(); ++i) box[i] = box[i].meet(o.box[i]);
  }
  if (o.status == Status::kFail) {
    bool better = status != Status::kFail || o.first_failing_h_order < first_failing_h_order;
    if (better) {
      first_failing_h_order = o.first_failing_h_order;
      location = o.location;
    }
    status = Status::kFail;
  } else if (o.status == Status::kHypothesisFailed && status == Status::kPass) {
    status = o.status;
    detail = o.detail;
  }
}

std::string exponent_str(const std::vector<std::string>& vars, const Exp& e) {
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += vars[i] + "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

void fill_witness(CheckReport& r, const LocalityResult& lr, const std::vector<std::string>& vars) {
  r.witness = lr.witness;
  r.box_vars = vars;
  r.box = lr.box;
  r.box.resize(vars.size());
  if (!lr.witness.back()) {
    r.status = Status::kFail;
    r.first_failing_h_order = lr.first_failing_h_order;
    if (lr.location) r.location = exponent_str(vars, *lr.location) + " after N=" + std::to_string(lr.scanned_to);
  }
}

}  // namespace qva
