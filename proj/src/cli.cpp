#include "ratiolab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "ratiolab/constants.hpp"
#include "ratiolab/jost.hpp"
#include "ratiolab/kernels.hpp"
#include "ratiolab/verifier.hpp"
#include "ratiolab/zero_locator.hpp"

namespace ratiolab::cli {

namespace {

using io::json;
using io::real_string;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json optional_real(const std::optional<double>& v) {
  return v ? json(real_string(*v)) : json(nullptr);
}

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return io::real_value(j.at(key));
}

cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--eval expects RE,IM");
  try {
    std::size_t used_re = 0, used_im = 0;
    const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
    const cplx z{std::stod(re, &used_re), std::stod(im, &used_im)};
    if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument(text);
    return z;
  } catch (const std::logic_error&) {
    throw UsageError("--eval expects RE,IM, got " + text);
  }
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path);
  if (!file) throw OutputError("cannot write " + cfg.out_path);
  file << text;
  if (!file) throw OutputError("write failed: " + cfg.out_path);
}

std::string format_of(const RunConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

int run_constants(const RunConfig& cfg, std::ostream& out) {
  const ClassParams params = cfg.params.apply({});
  const constants::DerivedConstants dc =
      constants::derive_constants(params, *cfg.delta, *cfg.eps, cfg.a, cfg.p_override);
  const json j = io::to_json(dc);
  if (format_of(cfg, "json") == "csv") {
    std::ostringstream csv;
    csv << "key,value\n";
    for (const auto& [key, value] : j.items()) {
      if (value.is_string() || value.is_number()) {
        csv << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
    }
    emit(cfg, csv.str(), out);
  } else {
    emit(cfg, j.dump(2) + "\n", out);
  }
  return 0;
}

int run_zeros(const RunConfig& cfg, std::ostream& out) {
  const io::LoadedModel model = io::load_model(cfg.model_path);
  const ZeroSet zs = zeros::locate_zeros(model.fn, 0.0, cfg.radius);
  if (format_of(cfg, "csv") == "json") {
    json list = json::array();
    for (const Zero& z : zs.entries()) {
      list.push_back({real_string(z.location.real()), real_string(z.location.imag()), z.multiplicity});
    }
    emit(cfg, json{{"radius", real_string(cfg.radius)}, {"count", zs.total_count()}, {"zeros", list}}.dump(2) + "\n",
         out);
  } else {
    std::ostringstream csv;
    write_zero_csv(csv, zs);
    emit(cfg, csv.str(), out);
  }
  return 0;
}

int run_jensen(const RunConfig& cfg, std::ostream& out) {
  const io::LoadedModel model = io::load_model(cfg.model_path);
  const zeros::JensenResult r = zeros::jensen_check(model.fn, cfg.radius);
  json j = io::to_json(r);
  j["radius"] = real_string(cfg.radius);
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int run_jost(const RunConfig& cfg, std::ostream& out) {
  const jost::Kernel kernel = io::kernel_from_json(io::read_json_file(cfg.kernel_path));
  std::optional<jost::Method> method;
  if (cfg.method == "closed-form") method = jost::Method::ClosedForm;
  if (cfg.method == "quadrature") method = jost::Method::Quadrature;
  const jost::JostFunction psi(kernel, method, cfg.tolerance);
  json j;
  j["kernel"] = io::to_json(kernel);
  j["method"] = psi.method() == jost::Method::ClosedForm ? "closed-form" : "quadrature";
  if (cfg.eval_point) {
    const cplx z = *cfg.eval_point;
    j["z"] = io::complex_json(z);
    j["psi"] = io::complex_json(psi(z));
    j["deviation"] = io::complex_json(psi.deviation(z));
  }
  if (cfg.ray_fit) {
    const double angle = cfg.angle.value_or(std::numbers::pi / 2);
    const jost::RayFit fit =
        cfg.remark6 ? jost::ray_decay_fit(jost::remark6_deviation(psi), angle, cfg.samples, cfg.rmin, cfg.rmax)
                    : jost::ray_decay_fit(psi, angle, cfg.samples, cfg.rmin, cfg.rmax);
    j["ray_fit"] = io::to_json(fit);
    j["ray_fit"]["angle"] = real_string(angle);
    j["ray_fit"]["transformed"] = cfg.remark6;
  }
  if (cfg.growth_fit) {
    std::vector<double> radii;
    const int n = 8;
    for (int i = 0; i < n; ++i) radii.push_back(cfg.rmin * std::pow(cfg.rmax / cfg.rmin, i / (n - 1.0)));
    j["growth_fit"] = io::to_json(jost::growth_fit(psi, radii));
  }
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

verify::PairSpec pair_spec_for(const RunConfig& cfg) {
  verify::PairSpec spec;
  if (!cfg.pair_path.empty()) {
    spec = io::load_pair(cfg.pair_path);
  } else if (cfg.preset == "engineered") {
    spec = verify::engineered_spec(cfg.seed, cfg.R.value_or(200.0));
  } else {
    throw UsageError("--preset custom needs --pair FILE");
  }
  if (cfg.R) spec.R = *cfg.R;
  if (cfg.delta) spec.delta = *cfg.delta;
  if (cfg.p_override) spec.p = *cfg.p_override;
  spec.params = cfg.params.apply(spec.params);
  if (!(spec.R > 0.0)) throw UsageError("the pair file has no R; pass --R");
  if (cfg.random_g) {
    const int p = spec.genus();
    const double r = std::pow(spec.R, 1.0 - spec.delta);
    const double C1 = 0.4 * spec.params.C1;
    spec.g1 = verify::random_admissible_polynomial(2 * cfg.seed + 1, p, r, C1, spec.params.mu, spec.ray_angle);
    spec.g2 = verify::random_admissible_polynomial(2 * cfg.seed + 2, p, r, C1, spec.params.mu, spec.ray_angle);
  }
  return spec;
}

std::vector<VerificationReport> lemma3_reports(const verify::Pair& pair, const RunConfig& cfg) {
  const verify::PairSpec& s = pair.spec;
  const double r = std::pow(s.R, 1.0 - s.delta);
  std::vector<cplx> diff(static_cast<std::size_t>(pair.p) + 1, 0.0);
  for (std::size_t j = 0; j < diff.size(); ++j) {
    if (j < s.g2.size()) diff[j] += s.g2[j];
    if (j < s.g1.size()) diff[j] -= s.g1[j];
  }
  std::vector<VerificationReport> out;
  if (std::any_of(diff.begin(), diff.end(), [](cplx c) { return c != 0.0; })) {
    // g2 - g1 of the pair; on the ray segment |e^{g2-g1} - 1| <= 9 C1 |z|^-mu.
    VerificationReport rep =
        verify::check_lemma3(diff, r, 9.0 * s.params.C1, s.params.mu, pair.p, cfg.grid, s.ray_angle);
    rep.notes.push_back("g = g2 - g1 of the pair, C1 scaled by 9");
    out.push_back(std::move(rep));
    return out;
  }
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto g = verify::random_admissible_polynomial(cfg.seed + t, pair.p, r, s.params.C1, s.params.mu,
                                                        s.ray_angle);
    VerificationReport rep =
        verify::check_lemma3(g, r, s.params.C1, s.params.mu, pair.p, cfg.grid, s.ray_angle);
    rep.notes.push_back("random admissible polynomial, seed " + std::to_string(cfg.seed + t));
    out.push_back(std::move(rep));
  }
  return out;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const verify::PairSpec spec = pair_spec_for(cfg);
  const verify::Pair pair = verify::build_pair(spec);
  const double eps = cfg.eps.value_or(0.1);
  const bool all = cfg.check == "all";
  std::vector<VerificationReport> reports;

  if (all || cfg.check == "lemma2") {
    const double a = cfg.a.value_or(pair.p + 1);
    for (const auto* outer : {&spec.outer_a, &spec.outer_b}) {
      VerificationReport rep =
          verify::check_lemma2(*outer, a, pair.p, spec.delta, spec.params, spec.R, cfg.grid);
      rep.notes.push_back(outer == &spec.outer_a ? "outer zeros of psi1" : "outer zeros of psi2");
      reports.push_back(std::move(rep));
    }
  }
  if (all || cfg.check == "lemma3") {
    for (auto& rep : lemma3_reports(pair, cfg)) reports.push_back(std::move(rep));
  }
  if (all || cfg.check == "decomposition") reports.push_back(verify::check_decomposition(pair, cfg.grid));
  if (all || cfg.check == "step5") {
    for (auto& rep : verify::check_step5_bounds(pair, cfg.grid)) reports.push_back(std::move(rep));
  }
  if (all || cfg.check == "theorem") reports.push_back(verify::check_theorem(pair, eps, cfg.grid));
  if (all || cfg.check == "remark5") reports.push_back(verify::check_remark5(pair, eps));

  if (!cfg.plot_path.empty()) {
    std::ostringstream csv;
    csv << "check,r,bound,observed\n";
    if (all || cfg.check == "theorem") {
      for (const verify::PlotRow& row : verify::theorem_profile(pair, cfg.grid)) {
        csv << "theorem," << real_string(row.r) << ',' << real_string(row.bound) << ','
            << real_string(row.observed) << '\n';
      }
    }
    for (const VerificationReport& rep : reports) {
      if (rep.check == "theorem") continue;
      csv << rep.check << ',' << real_string(spec.R) << ',' << real_string(rep.bound) << ','
          << real_string(rep.observed) << '\n';
    }
    std::ofstream file(cfg.plot_path);
    if (!file) throw OutputError("cannot write " + cfg.plot_path);
    file << csv.str();
  }

  if (format_of(cfg, "json") == "csv") {
    emit(cfg, io::reports_csv(reports), out);
  } else {
    emit(cfg, io::to_json(reports).dump(2) + "\n", out);
  }
  return exit_status(reports);
}

}  // namespace

ClassParams ParamFlags::apply(ClassParams base) const {
  if (C0) base.C0 = *C0;
  if (C1) base.C1 = *C1;
  if (rho) base.rho = *rho;
  if (sigma) base.sigma = *sigma;
  if (mu) base.mu = *mu;
  if (r0) base.r0 = *r0;
  return base;
}

bool ParamFlags::complete() const { return C0 && C1 && rho && sigma && mu && r0; }

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["check"] = c.check;
  j["params"] = {{"C0", optional_real(c.params.C0)},       {"C1", optional_real(c.params.C1)},
                 {"rho", optional_real(c.params.rho)},     {"sigma", optional_real(c.params.sigma)},
                 {"mu", optional_real(c.params.mu)},       {"r0", optional_real(c.params.r0)}};
  j["delta"] = optional_real(c.delta);
  j["eps"] = optional_real(c.eps);
  j["a"] = optional_real(c.a);
  j["R"] = optional_real(c.R);
  j["p_override"] = c.p_override ? json(*c.p_override) : json(nullptr);
  j["grid"] = {{"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}, {"interior", c.grid.interior},
               {"seed", c.grid.seed}};
  j["preset"] = c.preset;
  j["pair"] = c.pair_path;
  j["model"] = c.model_path;
  j["kernel"] = c.kernel_path;
  j["out"] = c.out_path;
  j["plot_data"] = c.plot_path;
  j["format"] = c.format;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["radius"] = real_string(c.radius);
  j["eval"] = c.eval_point ? io::complex_json(*c.eval_point) : json(nullptr);
  j["ray_fit"] = c.ray_fit;
  j["growth_fit"] = c.growth_fit;
  j["remark6"] = c.remark6;
  j["random_g"] = c.random_g;
  j["angle"] = optional_real(c.angle);
  j["rmin"] = real_string(c.rmin);
  j["rmax"] = real_string(c.rmax);
  j["samples"] = c.samples;
  j["trials"] = c.trials;
  j["method"] = c.method;
  j["tolerance"] = real_string(c.tolerance);
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.check = j.at("check").get<std::string>();
  const json& p = j.at("params");
  c.params = {optional_from(p, "C0"), optional_from(p, "C1"), optional_from(p, "rho"),
              optional_from(p, "sigma"), optional_from(p, "mu"), optional_from(p, "r0")};
  c.delta = optional_from(j, "delta");
  c.eps = optional_from(j, "eps");
  c.a = optional_from(j, "a");
  c.R = optional_from(j, "R");
  if (!j.at("p_override").is_null()) c.p_override = j.at("p_override").get<int>();
  const json& g = j.at("grid");
  c.grid.n_r = g.at("n_r").get<int>();
  c.grid.n_theta = g.at("n_theta").get<int>();
  c.grid.interior = g.at("interior").get<std::size_t>();
  c.grid.seed = g.at("seed").get<std::uint64_t>();
  c.preset = j.at("preset").get<std::string>();
  c.pair_path = j.at("pair").get<std::string>();
  c.model_path = j.at("model").get<std::string>();
  c.kernel_path = j.at("kernel").get<std::string>();
  c.out_path = j.at("out").get<std::string>();
  c.plot_path = j.at("plot_data").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<int>();
  c.radius = io::real_value(j.at("radius"));
  if (!j.at("eval").is_null()) c.eval_point = io::complex_value(j.at("eval"));
  c.ray_fit = j.at("ray_fit").get<bool>();
  c.growth_fit = j.at("growth_fit").get<bool>();
  c.remark6 = j.at("remark6").get<bool>();
  c.random_g = j.at("random_g").get<bool>();
  c.angle = optional_from(j, "angle");
  c.rmin = io::real_value(j.at("rmin"));
  c.rmax = io::real_value(j.at("rmax"));
  c.samples = j.at("samples").get<std::size_t>();
  c.trials = j.at("trials").get<std::size_t>();
  c.method = j.at("method").get<std::string>();
  c.tolerance = io::real_value(j.at("tolerance"));
  return c;
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Verification lab for the ratio of entire functions with common zeros in a disk",
               "ratiolab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string grid_text = grid::to_string(cfg.grid);
  std::string eval_text;

  auto add_params = [&](CLI::App* sub, bool required) {
    for (auto [name, field] : {std::pair{"--C0", &cfg.params.C0}, {"--C1", &cfg.params.C1},
                               {"--rho", &cfg.params.rho}, {"--sigma", &cfg.params.sigma},
                               {"--mu", &cfg.params.mu}, {"--r0", &cfg.params.r0}}) {
      auto* opt = sub->add_option(name, *field);
      if (required) opt->required();
    }
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write the result here instead of standard output");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "OpenMP threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "Seed for every random choice");
  };

  CLI::App* constants_cmd = app.add_subcommand("constants", "Derived constants and thresholds");
  add_params(constants_cmd, true);
  constants_cmd->add_option("--delta", cfg.delta)->required();
  constants_cmd->add_option("--eps", cfg.eps)->required();
  constants_cmd->add_option("--a", cfg.a, "Disk scale (default p+1)");
  constants_cmd->add_option("--p-override", cfg.p_override, "Genus instead of the bracketing rule");
  add_output(constants_cmd);

  CLI::App* zeros_cmd = app.add_subcommand("zeros", "Zeros of a model in B(0, radius) as CSV");
  CLI::App* jensen_cmd = app.add_subcommand("jensen", "Jensen-formula check on |z| = radius");
  for (CLI::App* sub : {zeros_cmd, jensen_cmd}) {
    sub->add_option("--model", cfg.model_path, "Model JSON file")->required();
    sub->add_option("--radius", cfg.radius)->required()->check(CLI::PositiveNumber);
    add_output(sub);
  }

  CLI::App* jost_cmd = app.add_subcommand("jost", "Evaluate and fit psi = 1 + int K(t) e^{izt} dt");
  jost_cmd->add_option("--kernel", cfg.kernel_path, "Kernel JSON file")->required();
  jost_cmd->add_option("--eval", eval_text, "Evaluate at RE,IM");
  jost_cmd->add_flag("--ray-fit", cfg.ray_fit, "Fit |psi - 1| <= C1 r^-mu on a ray");
  jost_cmd->add_flag("--growth-fit", cfg.growth_fit, "Fit ln M(r) ~ sigma r^rho");
  jost_cmd->add_flag("--remark6", cfg.remark6, "Ray fit of psi + K(0)/(iz)");
  jost_cmd->add_option("--angle", cfg.angle, "Ray angle (default pi/2)");
  jost_cmd->add_option("--rmin", cfg.rmin)->check(CLI::PositiveNumber);
  jost_cmd->add_option("--rmax", cfg.rmax)->check(CLI::PositiveNumber);
  jost_cmd->add_option("--samples", cfg.samples)->check(CLI::Range(4, 1 << 20));
  jost_cmd->add_option("--method", cfg.method)->check(CLI::IsMember({"closed-form", "quadrature"}));
  jost_cmd->add_option("--tolerance", cfg.tolerance)->check(CLI::PositiveNumber);
  add_output(jost_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Sampled checks of the ratio estimate");
  verify_cmd->require_subcommand(1);
  add_params(verify_cmd, false);
  verify_cmd->add_option("--R", cfg.R)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--delta", cfg.delta);
  verify_cmd->add_option("--eps", cfg.eps)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--a", cfg.a)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--p-override", cfg.p_override);
  verify_cmd->add_option("--grid", grid_text, "Polar grid NRxNT");
  verify_cmd->add_option("--pair", cfg.pair_path, "Pair JSON file");
  verify_cmd->add_option("--preset", cfg.preset)->check(CLI::IsMember({"engineered", "custom"}));
  verify_cmd->add_option("--plot-data", cfg.plot_path, "CSV of (check, r, bound, observed)");
  verify_cmd->add_option("--trials", cfg.trials, "Random polynomials for lemma3")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--random-g", cfg.random_g, "Give both functions random admissible polynomial parts");
  add_output(verify_cmd);
  for (const char* name : {"lemma2", "lemma3", "decomposition", "step5", "theorem", "remark5", "all"}) {
    verify_cmd->add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    cfg.command = "help";
    cfg.check = app.help();
    return cfg;
  } catch (const CLI::CallForAllHelp&) {
    cfg.command = "help";
    cfg.check = app.help("", CLI::AppFormatMode::All);
    return cfg;
  } catch (const CLI::ParseError& e) {
    std::string usage;
    for (CLI::App* sub : app.get_subcommands()) usage = sub->help();
    if (usage.empty()) usage = app.help();
    throw UsageError(std::string(e.what()) + "\n" + usage);
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.command == "verify") cfg.check = chosen->get_subcommands().front()->get_name();
  try {
    cfg.grid = grid::parse_grid(grid_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  cfg.grid.seed = cfg.seed;
  if (!eval_text.empty()) cfg.eval_point = parse_point(eval_text);
  if (cfg.command == "jost" && !cfg.eval_point && !cfg.ray_fit && !cfg.growth_fit) {
    throw UsageError("jost needs --eval RE,IM, --ray-fit or --growth-fit\n" + jost_cmd->help());
  }
  if (cfg.command == "jost" && !(cfg.rmin < cfg.rmax)) throw UsageError("--rmin must be below --rmax");
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "help") {
    out << cfg.check;
    return 0;
  }
  kernels::set_thread_count(cfg.threads);
  try {
    if (cfg.command == "constants") return run_constants(cfg, out);
    if (cfg.command == "zeros") return run_zeros(cfg, out);
    if (cfg.command == "jensen") return run_jensen(cfg, out);
    if (cfg.command == "jost") return run_jost(cfg, out);
    if (cfg.command == "verify") return run_verify(cfg, out);
    err << "unknown command: " << cfg.command << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const io::InputError& e) {
    err << e.what() << '\n';
    return kExitInput;
  } catch (const OutputError& e) {
    err << e.what() << '\n';
    return kExitOutput;
  } catch (const std::invalid_argument& e) {
    // Out-of-range parameters reach the numerics only through flags or files.
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kExitEvaluation;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return execute(cfg, out, err);
}

}  // namespace ratiolab::cli
