#include "ratiolab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace ratiolab::io {

namespace fs = std::filesystem;

std::string real_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double real_value(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw InputError("expected a number, got " + j.dump());
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  // strtod rather than stod: subnormals must parse, not throw out_of_range.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError("not a number: " + s);
  return v;
}

json complex_json(cplx z) { return json::array({real_string(z.real()), real_string(z.imag())}); }

cplx complex_value(const json& j) {
  if (j.is_array() && j.size() == 2) return {real_value(j[0]), real_value(j[1])};
  return {real_value(j), 0.0};
}

json to_json(const ClassParams& p) {
  return {{"C0", real_string(p.C0)},       {"C1", real_string(p.C1)},
          {"rho", real_string(p.rho)},     {"sigma", real_string(p.sigma)},
          {"mu", real_string(p.mu)},       {"r0", real_string(p.r0)}};
}

ClassParams params_from_json(const json& j, ClassParams p) {
  if (!j.is_object()) throw InputError("params must be an object");
  auto take = [&](const char* key, double& field) {
    if (j.contains(key)) field = real_value(j.at(key));
  };
  take("C0", p.C0);
  take("C1", p.C1);
  take("rho", p.rho);
  take("sigma", p.sigma);
  take("mu", p.mu);
  take("r0", p.r0);
  return p;
}

json to_json(const constants::DerivedConstants& dc) {
  json j;
  j["params"] = to_json(dc.params);
  j["delta"] = real_string(dc.delta);
  j["eps"] = real_string(dc.eps);
  j["p"] = dc.p;
  j["a"] = real_string(dc.a);
  j["alpha"] = real_string(dc.alpha);
  j["c"] = real_string(dc.c);
  j["r1"] = real_string(dc.r1);
  j["r2"] = real_string(dc.r2);
  j["r3"] = real_string(dc.r3);
  j["r4"] = real_string(dc.r4);
  j["r5"] = real_string(dc.r5);
  j["C2"] = real_string(dc.C2);
  j["C3"] = real_string(dc.C3);
  j["W"] = dc.W.str();
  j["Ap"] = real_string(dc.Ap);
  j["Rprime"] = real_string(dc.Rprime);
  j["R0"] = real_string(dc.R0);
  j["ratio_exponent"] = real_string(dc.ratio_exponent);
  j["R0_stages"] = {{"delta1", real_string(dc.stages.delta1)},
                    {"p_inner", dc.stages.inner.p},
                    {"C_tilde", real_string(dc.stages.C_tilde)},
                    {"inner_max", real_string(dc.stages.inner_max)},
                    {"eps_term", real_string(dc.stages.eps_term)}};
  j["warnings"] = dc.warnings;
  return j;
}

json to_json(const VerificationReport& r) {
  json j;
  j["check"] = r.check;
  j["verdict"] = to_string(r.verdict);
  j["bound"] = real_string(r.bound);
  j["observed"] = real_string(r.observed);
  j["margin"] = real_string(r.margin());
  j["samples"] = r.samples;
  j["excluded"] = r.excluded;
  json pre = json::array();
  for (const Precondition& p : r.preconditions) {
    pre.push_back({{"name", p.name},
                   {"satisfied", p.satisfied},
                   {"threshold", real_string(p.threshold)},
                   {"value", real_string(p.value)}});
  }
  j["preconditions"] = pre;
  json meas = json::object();
  for (const auto& [name, value] : r.measurements) meas[name] = real_string(value);
  j["measurements"] = meas;
  j["notes"] = r.notes;
  json subs = json::array();
  for (const VerificationReport& s : r.subchecks) subs.push_back(to_json(s));
  j["subchecks"] = subs;
  return j;
}

json to_json(const std::vector<VerificationReport>& reports) {
  json j = json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

json to_json(const zeros::JensenResult& r) {
  return {{"lhs", real_string(r.lhs)},
          {"rhs", real_string(r.rhs)},
          {"diff", real_string(r.diff())},
          {"quadrature_points", r.quadrature_points},
          {"zeros", r.zeros.total_count()}};
}

json to_json(const jost::RayFit& f) {
  return {{"C1", real_string(f.C1)},
          {"mu", real_string(f.mu)},
          {"mu_raw", real_string(f.mu_raw)},
          {"degenerate", f.degenerate},
          {"samples", f.samples}};
}

json to_json(const jost::GrowthFit& f) {
  json radii = json::array(), mm = json::array();
  for (double r : f.radii) radii.push_back(real_string(r));
  for (double m : f.max_modulus) mm.push_back(real_string(m));
  return {{"C0", real_string(f.C0)},
          {"sigma", real_string(f.sigma)},
          {"rho", real_string(f.rho)},
          {"log_coefficient", real_string(f.log_coefficient)},
          {"degenerate", f.degenerate},
          {"radii", radii},
          {"max_modulus", mm}};
}

json to_json(const jost::Kernel& k) {
  json j;
  switch (k.kind) {
    case jost::KernelKind::PiecewisePolynomial: {
      j["kind"] = "piecewise";
      json knots = json::array();
      for (double t : k.knots) knots.push_back(real_string(t));
      json coeffs = json::array();
      for (const auto& piece : k.coeffs) {
        json row = json::array();
        for (double c : piece) row.push_back(real_string(c));
        coeffs.push_back(row);
      }
      j["knots"] = knots;
      j["coeffs"] = coeffs;
      break;
    }
    case jost::KernelKind::SuperExponential:
      j["kind"] = "super-exponential";
      j["C"] = real_string(k.C);
      j["gamma"] = real_string(k.gamma);
      break;
    case jost::KernelKind::Exponential:
      j["kind"] = "exponential";
      j["C"] = real_string(k.C);
      j["beta"] = real_string(k.beta);
      if (k.T) j["T"] = real_string(*k.T);
      break;
  }
  return j;
}

jost::Kernel kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InputError("kernel needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto real_or = [&](const char* key, double fallback) {
    return j.contains(key) ? real_value(j.at(key)) : fallback;
  };
  jost::Kernel k;
  try {
    if (kind == "piecewise" || kind == "piecewise-polynomial") {
      std::vector<double> knots;
      for (const auto& t : j.at("knots")) knots.push_back(real_value(t));
      std::vector<std::vector<double>> coeffs;
      for (const auto& row : j.at("coeffs")) {
        std::vector<double> piece;
        for (const auto& c : row) piece.push_back(real_value(c));
        coeffs.push_back(std::move(piece));
      }
      k = jost::Kernel::piecewise(std::move(knots), std::move(coeffs));
    } else if (kind == "super-exponential") {
      k = jost::Kernel::super_exponential(real_or("C", 1.0), real_or("gamma", 2.0));
    } else if (kind == "exponential") {
      std::optional<double> T;
      if (j.contains("T")) T = real_value(j.at("T"));
      k = jost::Kernel::exponential(real_or("C", 1.0), real_or("beta", 1.0), T);
    } else {
      throw InputError("unknown kernel kind: " + kind);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed kernel: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid kernel: ") + e.what());
  }
  return k;
}

namespace {

void flatten_csv(std::ostringstream& out, const VerificationReport& r, const std::string& prefix) {
  const std::string name = prefix.empty() || r.check.rfind(prefix, 0) == 0 ? r.check : prefix + "." + r.check;
  out << name << ',' << to_string(r.verdict) << ',' << real_string(r.bound) << ','
      << real_string(r.observed) << ',' << real_string(r.margin()) << ',' << r.samples << ','
      << r.excluded << ',' << (r.preconditions_met() ? "true" : "false") << '\n';
  for (const auto& s : r.subchecks) flatten_csv(out, s, name);
}

std::vector<cplx> coefficient_list(const json& j) {
  std::vector<cplx> out;
  for (const auto& c : j) out.push_back(complex_value(c));
  return out;
}

ZeroSet read_csv_checked(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return read_zero_csv(in);
  } catch (const std::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const json& j) {
  fs::path p = j.get<std::string>();
  return p.is_absolute() ? p : base.parent_path() / p;
}

}  // namespace

std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "check,verdict,bound,observed,margin,samples,excluded,preconditions_met\n";
  for (const auto& r : reports) flatten_csv(out, r, "");
  return out.str();
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

LoadedModel load_model(const fs::path& path) {
  const json j = read_json_file(path);
  LoadedModel out;
  try {
    const std::string type = j.value("type", "product");
    if (j.contains("params")) out.params = params_from_json(j.at("params"));
    if (type == "product") {
      ZeroSet zs = j.contains("zeros") ? read_csv_checked(resolve(path, j.at("zeros"))) : ZeroSet{};
      const int genus = j.value("genus", 1);
      std::vector<cplx> g = j.contains("g") ? coefficient_list(j.at("g")) : std::vector<cplx>{};
      const int origin = j.value("origin_order", 0);
      out.description = "canonical product of genus " + std::to_string(genus) + " over " +
                        std::to_string(zs.size()) + " zeros";
      out.fn = model::EntireModel(std::move(zs), genus, std::move(g), origin).as_analytic();
    } else if (type == "jost") {
      std::optional<jost::Method> method;
      if (j.contains("method")) {
        const std::string m = j.at("method").get<std::string>();
        if (m == "closed-form") method = jost::Method::ClosedForm;
        else if (m == "quadrature") method = jost::Method::Quadrature;
        else throw InputError("unknown method: " + m);
      }
      out.description = "Jost function";
      out.fn = jost::JostFunction(kernel_from_json(j.at("kernel")), method).as_analytic();
    } else {
      throw InputError("unknown model type: " + type);
    }
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return out;
}

verify::PairSpec load_pair(const fs::path& path) {
  const json j = read_json_file(path);
  verify::PairSpec spec;
  try {
    spec.shared = read_csv_checked(resolve(path, j.at("shared_zeros")));
    spec.outer_a = read_csv_checked(resolve(path, j.at("outer_a")));
    spec.outer_b = read_csv_checked(resolve(path, j.at("outer_b")));
    if (j.contains("params")) spec.params = params_from_json(j.at("params"));
    if (j.contains("p") && !j.at("p").is_null()) spec.p = j.at("p").get<int>();
    if (j.contains("ray_angle")) spec.ray_angle = real_value(j.at("ray_angle"));
    if (j.contains("R")) spec.R = real_value(j.at("R"));
    if (j.contains("delta")) spec.delta = real_value(j.at("delta"));
    if (j.contains("g1")) spec.g1 = coefficient_list(j.at("g1"));
    if (j.contains("g2")) spec.g2 = coefficient_list(j.at("g2"));
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return spec;
}

void save_pair(const fs::path& path, const verify::PairSpec& spec) {
  const std::string stem = path.stem().string();
  const fs::path dir = path.parent_path();
  auto write_csv = [&](const std::string& suffix, const ZeroSet& zs) {
    const std::string name = stem + "_" + suffix + ".csv";
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    write_zero_csv(out, zs);
    return name;
  };
  json j;
  j["shared_zeros"] = write_csv("shared", spec.shared);
  j["outer_a"] = write_csv("outer_a", spec.outer_a);
  j["outer_b"] = write_csv("outer_b", spec.outer_b);
  if (spec.p) j["p"] = *spec.p;
  j["params"] = to_json(spec.params);
  j["ray_angle"] = real_string(spec.ray_angle);
  j["R"] = real_string(spec.R);
  j["delta"] = real_string(spec.delta);
  auto coeffs = [](const std::vector<cplx>& g) {
    json a = json::array();
    for (cplx c : g) a.push_back(complex_json(c));
    return a;
  };
  if (!spec.g1.empty()) j["g1"] = coeffs(spec.g1);
  if (!spec.g2.empty()) j["g2"] = coeffs(spec.g2);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace ratiolab::io
