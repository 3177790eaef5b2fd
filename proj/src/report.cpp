#include "ratiolab/report.hpp"

#include <cmath>
#include <limits>

namespace ratiolab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::PassWithUnmetPreconditions:
      return "pass-with-unmet-preconditions";
    case Verdict::Fail:
      return "fail";
  }
  return "unknown";
}

double VerificationReport::margin() const {
  if (!evaluated()) return std::numeric_limits<double>::quiet_NaN();
  if (observed == 0.0) return std::numeric_limits<double>::infinity();
  return bound / observed;
}

bool VerificationReport::preconditions_met() const {
  for (const auto& p : preconditions) {
    if (!p.satisfied) return false;
  }
  return true;
}

bool VerificationReport::evaluated() const { return !std::isnan(observed); }

void VerificationReport::require(std::string name, bool satisfied, double threshold,
                                 double value) {
  preconditions.push_back({std::move(name), satisfied, threshold, value});
}

void VerificationReport::measure(std::string name, double value) {
  measurements.emplace_back(std::move(name), value);
}

void VerificationReport::finalize() {
  bool any_fail = false;
  // A subcheck with unmet hypotheses shows that in its own verdict; only its
  // failures propagate upward.
  const bool any_unmet = !preconditions_met();
  for (auto& sub : subchecks) {
    sub.finalize();
    any_fail = any_fail || sub.verdict == Verdict::Fail;
  }
  const bool violated = evaluated() && !(observed <= bound);
  if (any_fail || (violated && preconditions_met())) {
    verdict = Verdict::Fail;
  } else if (any_unmet) {
    verdict = Verdict::PassWithUnmetPreconditions;
  } else {
    verdict = Verdict::Pass;
  }
}

int exit_status(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return 1;
  }
  return 0;
}

}  // namespace ratiolab
