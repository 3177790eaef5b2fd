#pragma once

// JSON and CSV forms of configurations, constants, reports and input files.
// Reals are written as decimal strings with 17 significant digits so that
// a value read back is bit-identical; exact integers as decimal strings.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ratiolab/class_params.hpp"
#include "ratiolab/constants.hpp"
#include "ratiolab/entire_model.hpp"
#include "ratiolab/jost.hpp"
#include "ratiolab/report.hpp"
#include "ratiolab/verifier.hpp"

namespace ratiolab::io {

using json = nlohmann::ordered_json;

// Thrown for unreadable or malformed input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string real_string(double v);
/// Accepts a JSON number or a decimal string ("inf", "nan" included).
double real_value(const json& j);
json complex_json(cplx z);
cplx complex_value(const json& j);

json to_json(const ClassParams& params);
ClassParams params_from_json(const json& j, ClassParams defaults = {});

json to_json(const constants::DerivedConstants& dc);
json to_json(const VerificationReport& report);
json to_json(const std::vector<VerificationReport>& reports);
json to_json(const zeros::JensenResult& r);
json to_json(const jost::RayFit& fit);
json to_json(const jost::GrowthFit& fit);

json to_json(const jost::Kernel& kernel);
jost::Kernel kernel_from_json(const json& j);

/// One row per report (subchecks flattened with dotted names):
/// check,verdict,bound,observed,margin,samples,excluded,preconditions_met.
std::string reports_csv(const std::vector<VerificationReport>& reports);

json read_json_file(const std::filesystem::path& path);

// Model file: {"type": "product", "zeros": CSV path, "genus", "g": [[re, im]...],
// "origin_order"} or {"type": "jost", "kernel": {...}, "method"?}.
struct LoadedModel {
  zeros::AnalyticFn fn;
  std::optional<ClassParams> params;  // "params" block if present
  std::string description;
};
LoadedModel load_model(const std::filesystem::path& path);

// Pair file: {"shared_zeros", "outer_a", "outer_b": CSV paths relative to the
// file, "p"?, "params": {...}, "ray_angle"?, "R"?, "delta"?, "g1"?, "g2"?}.
verify::PairSpec load_pair(const std::filesystem::path& path);
/// Writes the pair file plus <stem>_shared.csv, <stem>_outer_a.csv and
/// <stem>_outer_b.csv next to it.
void save_pair(const std::filesystem::path& path, const verify::PairSpec& spec);

}  // namespace ratiolab::io
