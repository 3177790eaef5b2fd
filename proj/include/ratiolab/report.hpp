#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ratiolab {

enum class Verdict { Pass, PassWithUnmetPreconditions, Fail };

std::string to_string(Verdict v);

struct Precondition {
  std::string name;
  bool satisfied = false;
  double threshold = 0.0;  // what the measured value was compared against
  double value = 0.0;      // the measured value
};

// One sampled inequality `observed <= bound`, with the hypotheses under which
// the inequality is claimed. A check can only fail when every hypothesis was
// measured to hold.
struct VerificationReport {
  std::string check;
  double bound = 0.0;
  double observed = 0.0;  // NaN when the check was not evaluated
  std::size_t samples = 0;
  std::size_t excluded = 0;
  std::vector<Precondition> preconditions;
  std::vector<std::pair<std::string, double>> measurements;
  std::vector<std::string> notes;
  std::vector<VerificationReport> subchecks;
  Verdict verdict = Verdict::Pass;

  /// bound / observed; +inf when observed is zero.
  double margin() const;
  bool preconditions_met() const;
  bool evaluated() const;

  void require(std::string name, bool satisfied, double threshold, double value);
  void measure(std::string name, double value);

  /// Sets `verdict` (recursively for subchecks) from the fields above.
  void finalize();
};

/// Overall exit status for a batch of reports: 0 if nothing failed, 1 otherwise.
int exit_status(const std::vector<VerificationReport>& reports);

}  // namespace ratiolab
