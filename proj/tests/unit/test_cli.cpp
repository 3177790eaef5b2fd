#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "ratiolab/cli.hpp"
#include "ratiolab/json_io.hpp"
#include "ratiolab/verifier.hpp"

using namespace ratiolab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the installed binary so exit codes are the real process status.
Outcome run_binary(const std::string& args) {
  const char* bin = std::getenv("RATIOLAB_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

Outcome run_inprocess(std::vector<const char*> args) {
  args.insert(args.begin(), "ratiolab");
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  o.out = out.str();
  return o;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("ratiolab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("constants subcommand") {
  const Outcome o = run_binary("constants --C0 2 --C1 1 --rho 1 --sigma 1 --mu 1 --r0 1 --delta 0.6667 --eps 0.1");
  REQUIRE(o.code == 0);
  const auto j = io::json::parse(o.out);
  CHECK(j["p"] == 2);
  CHECK(io::real_value(j["c"]) == 2.0);
  CHECK(io::real_value(j["r1"]) == 2.0);
  CHECK(j["W"] == "2");
  for (const char* key : {"r2", "r3", "r4", "r5", "C2", "C3", "Ap", "Rprime", "R0"}) CHECK(j.contains(key));
  CHECK(j["warnings"].is_array());
}

TEST_CASE("usage and file errors") {
  const Outcome missing = run_binary("constants --C1 1 --rho 1 --sigma 1 --mu 1 --r0 1 --delta 0.5 --eps 0.1");
  CHECK(missing.code == cli::kExitUsage);
  CHECK(run_binary("frobnicate").code == cli::kExitUsage);
  CHECK(run_binary("verify theorem --grid 12by4").code == cli::kExitUsage);
  CHECK(run_binary("constants --C0 -1 --C1 1 --rho 1 --sigma 1 --mu 1 --r0 1 --delta 0.5 --eps 0.1").code ==
        cli::kExitUsage);
  CHECK(run_binary("jensen --model /nonexistent/model.json --radius 1").code == cli::kExitInput);
  CHECK(run_binary("constants --C0 2 --C1 1 --rho 1 --sigma 1 --mu 1 --r0 1 --delta 0.5 --eps 0.1 "
                   "--out /nonexistent/dir/out.json")
            .code == cli::kExitOutput);
  const Outcome help = run_binary("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("config round trip") {
  const char* argv[] = {"ratiolab", "verify",   "theorem", "--R",   "250",      "--delta", "0.9",
                        "--grid",   "16x64",    "--seed",  "7",     "--eps",    "0.05",    "--C1",
                        "0.001",    "--random-g", "--format", "csv"};
  const cli::RunConfig cfg = cli::parse_args(static_cast<int>(std::size(argv)), argv);
  CHECK(cfg.command == "verify");
  CHECK(cfg.check == "theorem");
  CHECK(cfg.R == 250.0);
  CHECK(cfg.grid.n_r == 16);
  CHECK(cfg.grid.seed == 7);
  CHECK(cfg.params.C1 == 0.001);
  CHECK(!cfg.params.C0);
  CHECK(cfg.random_g);
  const cli::RunConfig back = cli::config_from_json(io::json::parse(cli::to_json(cfg).dump()));
  CHECK(back == cfg);
  const char* jost_argv[] = {"ratiolab", "jost", "--kernel", "k.json", "--eval", "0.1,-2.5e-3"};
  const cli::RunConfig jc = cli::parse_args(6, jost_argv);
  REQUIRE(jc.eval_point);
  CHECK(*jc.eval_point == cplx(0.1, -2.5e-3));
  CHECK(cli::config_from_json(cli::to_json(jc)) == jc);
}

TEST_CASE("reals survive serialisation bit for bit") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308, 5e-324}) {
    CHECK(io::real_value(io::json(io::real_string(v))) == v);
  }
  CHECK(std::isinf(io::real_value(io::json("inf"))));
  CHECK_THROWS_AS(io::real_value(io::json("1.5x")), io::InputError);
}

TEST_CASE("verify decomposition on a pair file") {
  const fs::path dir = scratch_dir();
  verify::PairSpec spec = verify::engineered_spec(4, 200.0, 40);
  spec.R = 100.0;
  spec.outer_a = spec.outer_a.merged(spec.shared.outer(100.0));
  spec.outer_b = spec.outer_b.merged(spec.shared.outer(100.0));
  spec.shared = spec.shared.inner(100.0);
  io::save_pair(dir / "pair.json", spec);
  const verify::PairSpec loaded = io::load_pair(dir / "pair.json");
  CHECK(loaded.outer_a == spec.outer_a);
  CHECK(loaded.params == spec.params);

  const std::string pair_arg = (dir / "pair.json").string();
  const Outcome o = run_binary("verify decomposition --pair " + pair_arg + " --R 100 --grid 32x128");
  CHECK(o.code == 0);
  const auto reports = io::json::parse(o.out);
  REQUIRE(reports.size() == 1);
  CHECK(io::real_value(reports[0]["observed"]) < 1e-10);

  // Bit-identical output for identical invocations, at any thread count.
  const Outcome again = run_binary("verify decomposition --pair " + pair_arg + " --R 100 --grid 32x128 --threads 1");
  CHECK(again.out == o.out);

  const std::string plot = (dir / "plot.csv").string();
  const Outcome csv = run_binary("verify theorem --preset engineered --grid 8x32 --format csv --plot-data " + plot);
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("check,verdict,bound,observed", 0) == 0);
  std::ifstream pf(plot);
  std::string header;
  std::getline(pf, header);
  CHECK(header == "check,r,bound,observed");

  CHECK(run_binary("verify theorem --preset custom").code == cli::kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("zeros, jensen and jost subcommands") {
  const fs::path dir = scratch_dir();
  {
    std::ofstream(dir / "z.csv") << "re,im,mult\n2,0,1\n0,-3,2\n";
    std::ofstream(dir / "model.json") << R"({"type": "product", "zeros": "z.csv", "genus": 1})";
    std::ofstream(dir / "k.json") << R"({"kind": "piecewise", "knots": [0, 1], "coeffs": [[1]]})";
  }
  const Outcome z = run_binary("zeros --model " + (dir / "model.json").string() + " --radius 4");
  REQUIRE(z.code == 0);
  std::istringstream zin(z.out);
  const ZeroSet found = read_zero_csv(zin);
  CHECK(found.total_count() == 3);

  const Outcome j = run_binary("jensen --model " + (dir / "model.json").string() + " --radius 4");
  REQUIRE(j.code == 0);
  const auto jj = io::json::parse(j.out);
  CHECK(std::abs(io::real_value(jj["diff"])) < 1e-8);

  const std::string k = (dir / "k.json").string();
  const Outcome e = run_inprocess({"jost", "--kernel", k.c_str(), "--eval", "0,0"});
  REQUIRE(e.code == 0);
  CHECK(io::complex_value(io::json::parse(e.out)["psi"]) == cplx(2.0, 0.0));
  const Outcome ray = run_binary("jost --kernel " + k + " --ray-fit --rmin 10 --rmax 1000");
  REQUIRE(ray.code == 0);
  CHECK(io::real_value(io::json::parse(ray.out)["ray_fit"]["mu"]) == doctest::Approx(1.0).epsilon(0.06));
  CHECK(run_binary("jost --kernel " + k).code == cli::kExitUsage);
  fs::remove_all(dir);
}
