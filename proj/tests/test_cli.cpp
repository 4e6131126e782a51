#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "homprobe/cli.hpp"
#include "homprobe/io.hpp"

using namespace homprobe;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "homprobe");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("homprobe_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("scalar subcommands") {
  auto r = invoke({"rate", "--p", "1", "--eta", "1", "--dark-count-prob", "0", "--beta-sq", "1", "--overlap", "1"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.090204) <= 5e-7);

  r = invoke({"visibility", "--p", "1", "--eta", "1", "--dark-count-prob", "0", "--beta-sq", "0", "--overlap", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("undefined visibility: R_C(0)=0") != std::string::npos);

  r = invoke({"correction-factor", "--p", "1", "--eta", "1", "--xi", "0.99", "--beta-sq", "0.26"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.8648) <= 1e-4);

  r = invoke({"rate", "--p", "1", "--eta", "1", "--xi", "1", "--beta-sq", "1", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"schema\": 1") != std::string::npos);
  CHECK(r.out.find("\"value\": 0.0902040104") != std::string::npos);
}

TEST_CASE("parameter errors exit with 2") {
  CHECK(invoke({"rate", "--p", "1", "--eta", "1", "--xi", "1", "--dark-count-prob", "0", "--beta-sq", "1"}).code == 2);
  CHECK(invoke({"rate", "--p", "2", "--eta", "1", "--beta-sq", "1"}).code == 2);
  CHECK(invoke({"rate", "--p", "1", "--eta", "1"}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"overlap", "--state", "/nonexistent.json", "--mode", "/nonexistent.json"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("oracle-check") {
  const auto r = invoke({"oracle-check", "--preset", "default"});
  CHECK(r.code == 0);
  const std::string key = "max |oracle−analytic| = ";
  const auto pos = r.out.find(key);
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + key.size())) <= 1e-6);

  const auto trunc = invoke({"oracle-check", "--n-max", "3", "--sweep-size", "5"});
  CHECK(trunc.code == 3);
  CHECK(trunc.err.find("use n_max >=") != std::string::npos);
}

TEST_CASE("file-based subcommands") {
  TempDir dir;
  const auto state = dir / "rho.json";
  const auto mode = dir / "u.json";
  REQUIRE(invoke({"gaussian", "--kind", "state", "--out", state}).code == 0);
  REQUIRE(invoke({"gaussian", "--kind", "mode", "--out", mode}).code == 0);

  auto r = invoke({"overlap", "--state", state, "--mode", mode});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-9));
  r = invoke({"overlap", "--state", state, "--mode", mode, "--delay", "1"});
  CHECK(std::abs(std::stod(r.out) - std::exp(-1.0)) <= 1e-6);

  SUBCASE("dip-scan CSV round trip") {
    const auto out = dir / "scan.csv";
    r = invoke({"dip-scan", "--state", state, "--mode", mode, "--tau-lo", "0", "--tau-hi", "3", "--tau-steps", "31",
                "--p", "1", "--eta", "1", "--xi", "1", "--beta-sq", "1", "--out", out});
    REQUIRE(r.code == 0);
    std::ifstream in(out);
    const auto t = io::read_csv(in);
    CHECK(t.kind == "dip-scan");
    CHECK(t.columns == std::vector<std::string>{"tau", "T", "V", "R_C"});
    REQUIRE(t.rows.size() == 31);
    const double v0 = t.number(0, "V");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double tau = t.number(i, "tau");
      CHECK(std::abs(t.number(i, "V") / v0 - std::exp(-tau * tau)) <= 1e-4);
    }
  }

  SUBCASE("contour JSON mirrors CSV") {
    const auto csv = dir / "grid.csv";
    const auto js = dir / "grid.json";
    const std::vector<std::string> base{"contour", "--dark-count-prob", "0.01", "--eta-p-lo", "0.1", "--eta-p-hi", "1",
                                        "--eta-p-steps", "4", "--intensity-lo", "0.1", "--intensity-hi", "2",
                                        "--intensity-steps", "5"};
    auto a = base;
    a.insert(a.end(), {"--out", csv});
    auto b = base;
    b.insert(b.end(), {"--out", js, "--format", "json"});
    REQUIRE(invoke(a).code == 0);
    REQUIRE(invoke(b).code == 0);
    std::ifstream ci(csv), ji(js);
    const auto tc = io::read_csv(ci);
    const auto tj = io::read_json(ji);
    CHECK(tc.columns == std::vector<std::string>{"eta_p", "eta_beta_sq", "xi", "c_f", "rc0"});
    CHECK(tc.rows.size() == 20);
    CHECK(tc.rows == tj.rows);
    CHECK(tc.number(0, "xi") == 0.99);
  }

  SUBCASE("monte-carlo output is byte-identical across runs") {
    const auto m1 = dir / "mc1.csv";
    const auto m2 = dir / "mc2.csv";
    const std::vector<std::string> base{"monte-carlo", "--p", "1", "--eta", "1", "--xi", "1", "--beta-sq", "1",
                                        "--overlap", "0.5", "--pulses", "20000", "--replicas", "6", "--seed", "17"};
    auto a = base;
    a.insert(a.end(), {"--out", m1});
    auto b = base;
    b.insert(b.end(), {"--out", m2});
    REQUIRE(invoke(a).code == 0);
    REQUIRE(invoke(b).code == 0);
    CHECK(slurp(m1) == slurp(m2));
    std::ifstream in(m1);
    const auto t = io::read_csv(in);
    CHECK(t.rows.size() == 12);
    CHECK(t.text(0, "setting") == "matched");
    CHECK(t.text(1, "setting") == "unmatched");
  }
}

TEST_CASE("optimize") {
  const auto r = invoke({"optimize", "--eta-p", "0.3", "--dark-count-prob", "0.01"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto t = io::read_csv(in);
  CHECK(t.number(0, "eta_beta_sq") == doctest::Approx(0.8702).epsilon(1e-3));
  CHECK(invoke({"optimize", "--eta-p", "0"}).code == 2);
}
