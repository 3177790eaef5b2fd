#pragma once

// Command-line entry point: constants, zeros, jensen, jost and verify.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "ratiolab/class_params.hpp"
#include "ratiolab/disk_grid.hpp"
#include "ratiolab/json_io.hpp"

namespace ratiolab::cli {

inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 66;
inline constexpr int kExitOutput = 73;
inline constexpr int kExitEvaluation = 2;

// Class-parameter flags; absent ones keep the preset or file value.
struct ParamFlags {
  std::optional<double> C0, C1, rho, sigma, mu, r0;

  ClassParams apply(ClassParams base) const;
  bool complete() const;
  bool operator==(const ParamFlags&) const = default;
};

struct RunConfig {
  std::string command;  // constants | zeros | jensen | jost | verify
  std::string check;    // verify target: lemma2 ... remark5, all
  ParamFlags params;
  std::optional<double> delta;
  std::optional<double> eps;
  std::optional<double> a;
  std::optional<double> R;
  std::optional<int> p_override;
  grid::GridSpec grid;
  std::string preset = "engineered";
  std::string pair_path;
  std::string model_path;
  std::string kernel_path;
  std::string out_path;
  std::string plot_path;
  std::string format;  // json | csv; empty picks the subcommand's default
  std::uint64_t seed = 0;
  int threads = 0;     // 0: all available cores
  double radius = 1.0;  // zeros, jensen
  std::optional<cplx> eval_point;
  bool ray_fit = false;
  bool growth_fit = false;
  bool remark6 = false;
  bool random_g = false;
  std::optional<double> angle;
  double rmin = 10.0;
  double rmax = 100.0;
  std::size_t samples = 64;
  std::size_t trials = 1;
  std::string method;  // jost: closed-form | quadrature
  double tolerance = 1e-14;

  bool operator==(const RunConfig&) const = default;
};

io::json to_json(const RunConfig& config);
RunConfig config_from_json(const io::json& j);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError (message includes the usage text) on malformed flags.
/// `--help` yields a config with command "help" and the text in `check`.
RunConfig parse_args(int argc, const char* const* argv);

/// Runs a parsed configuration; exit codes: 0 ok, 1 a verification failed,
/// 2 evaluation error, 64 usage, 66 unreadable input, 73 unwritable output.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratiolab::cli
