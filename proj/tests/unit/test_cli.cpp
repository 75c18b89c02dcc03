#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "conic_shubin/cli.hpp"
#include "conic_shubin/symbol_io.hpp"
#include "conic_shubin/symbol_parser.hpp"
#include "support/cli_cases.hpp"

using namespace conic_shubin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("conic_shubin_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "conic-shubin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Result run_case(const cli_cases::Case& c, const fs::path& dir) {
  auto args = c.args;
  args.push_back("--out");
  args.push_back(dir.string());
  return run(args);
}

}  // namespace

TEST_CASE("flag parsing") {
  CHECK(parse_aniso_flag("2,2,1") == AnisotropyVector(2, 2, 1));
  CHECK_THROWS_AS(parse_aniso_flag("2,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_aniso_flag("2,x,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_aniso_flag("0,1,1"), std::invalid_argument);
  CHECK(parse_grid_flag("-3,4,512,32") == GridSpec{-3, 4, 512, 32});
  CHECK(parse_grid_flag(R"({"t0":-1,"t1":2,"nt":64,"nz":8,"closure":"reflection"})") ==
        GridSpec{-1, 2, 64, 8, Closure::Reflection});
  CHECK_THROWS_AS(parse_grid_flag("-3,4,100,32"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_flag("-3,4,64"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_flag("-3,4,64.5,8"), std::invalid_argument);
}

TEST_CASE("golden outputs") {
  const bool update = std::getenv("CONIC_SHUBIN_UPDATE_GOLDENS") != nullptr;
  for (const auto& c : cli_cases::cases()) {
    TempDir dir;
    const auto r = run_case(c, dir.path);
    INFO("case ", c.name, ": ", r.err);
    CHECK(r.code == c.exit_code);
    for (const auto& f : c.outputs) {
      INFO("artifact ", f);
      REQUIRE(fs::exists(dir.path / f));
      const auto golden = cli_cases::golden_dir() / c.name / f;
      if (update) {
        fs::create_directories(golden.parent_path());
        fs::copy_file(dir.path / f, golden, fs::copy_options::overwrite_existing);
      }
      REQUIRE(fs::exists(golden));
      CHECK(cli_cases::artifact_matches(dir.path / f, golden));
    }
  }
}

TEST_CASE("outputs do not depend on the thread count") {
  for (const auto& c : cli_cases::cases()) {
    TempDir one, four;
    setenv("CONIC_SHUBIN_THREADS", "1", 1);
    run_case(c, one.path);
    setenv("CONIC_SHUBIN_THREADS", "4", 1);
    run_case(c, four.path);
    unsetenv("CONIC_SHUBIN_THREADS");
    for (const auto& f : c.outputs) {
      INFO("case ", c.name, " artifact ", f);
      CHECK(cli_cases::read_bytes(one.path / f) == cli_cases::read_bytes(four.path / f));
    }
  }
}

TEST_CASE("exact outputs match the symbolic layer") {
  TempDir dir;
  const AnisotropyVector l(2, 2, 1);
  REQUIRE(run({"compose", "--expr", "sigma", "--expr", "tau", "--out", dir.path.string()}).code == 0);
  auto j = nlohmann::json::parse(cli_cases::read_bytes(dir.path / "compose.json"));
  CHECK(symbol_from_json(j.at("symbol")) == sharp(parse_symbol_expr("sigma", l), parse_symbol_expr("tau", l)));
  CHECK(symbol_from_json(j.at("symbol")) == parse_symbol_expr("sigma*tau - i*tau", l));

  // adjoint twice through files is the identity
  const std::string expr = "sigma^2*tau + i*x^-1*zeta*exp(i*z) + 3/2";
  REQUIRE(run({"adjoint", "--expr", expr, "--out", (dir.path / "a").string()}).code == 0);
  REQUIRE(run({"adjoint", "--symbol", (dir.path / "a" / "adjoint.json").string(), "--out", (dir.path / "b").string()})
              .code == 0);
  j = nlohmann::json::parse(cli_cases::read_bytes(dir.path / "b" / "adjoint.json"));
  CHECK(symbol_from_json(j.at("symbol")) == parse_symbol_expr(expr, l));
  CHECK(parse_symbol_expr(j.at("expression").get<std::string>(), l) == parse_symbol_expr(expr, l));
}

TEST_CASE("custom spectrum of the harmonic symbol") {
  TempDir a, b;
  REQUIRE(run({"spectrum", "--grid", "-4,3,128,16", "--closure", "reflection", "--out", a.path.string()}).code == 0);
  REQUIRE(run({"spectrum", "--kind", "custom", "--expr", "sigma^2 + zeta^2 + tau^4", "--grid", "-4,3,128,16",
               "--closure", "reflection", "--out", b.path.string()})
              .code == 0);
  CHECK(cli_cases::artifact_matches(a.path / "spectrum.csv", b.path / "spectrum.csv", 1e-8));
}

TEST_CASE("error handling") {
  TempDir dir;
  const std::string out = dir.path.string();
  CHECK(run({}).code == kExitError);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"frobnicate"}).code == kExitError);
  CHECK(run({"compose", "--bogus", "--out", out}).code == kExitError);

  const auto parse = run({"adjoint", "--expr", "sigma + zeta^1.5", "--out", out});
  CHECK(parse.code == kExitError);
  CHECK(parse.err.find("line 1, column") != std::string::npos);
  CHECK(run({"adjoint", "--expr", "x^2*sigma", "--out", out}).code == kExitError);

  CHECK(run({"compose", "--expr", "sigma", "--out", out}).code == kExitError);
  CHECK(run({"adjoint", "--symbol", (dir.path / "missing.json").string(), "--out", out}).code == kExitError);
  CHECK(run({"quantize", "--expr", "sigma", "--grid", "1,2,3", "--out", out}).code == kExitError);
  CHECK(run({"quantize", "--expr", "sigma", "--grid", "-1,1,12,8", "--out", out}).code == kExitError);
  CHECK(run({"check-ellipticity", "--expr", "sigma", "--tol", "0", "--out", out}).code == kExitError);
  CHECK(run({"sobolev-norm", "--out", out}).code == kExitError);
  CHECK(run({"spectrum", "--kind", "weird", "--out", out}).code == kExitError);
  CHECK(run({"build-parametrix", "--expr", "sigma^2 + zeta^2", "--grid", "-1,1,16,8", "--out", out}).code ==
        kExitError);
  CHECK(run({"check-ellipticity", "--expr", "sigma", "--out", out}).code == kExitNotElliptic);
}
