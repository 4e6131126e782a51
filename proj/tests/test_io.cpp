#include "doctest.h"

#include <clocale>
#include <random>
#include <sstream>

#include "homprobe/errors.hpp"
#include "homprobe/io.hpp"

using namespace homprobe;
using namespace homprobe::io;

TEST_CASE("number formatting") {
  CHECK(format_number(0.0902040104310498646) == "0.0902040104");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1e-12) == "1e-12");
  CHECK(format_number(-2.5) == "-2.5");
}

TEST_CASE("tables survive CSV and JSON round trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Table t;
  t.kind = "contour";
  t.columns = {"a", "b", "label", "count"};
  for (int i = 0; i < 50; ++i)
    t.rows.push_back({format_number(u(rng)), format_number(u(rng) * 1e-9), i % 2 ? "matched" : "unmatched",
                      std::to_string(1'000'000'000'000LL + i)});

  std::stringstream csv;
  write_csv(t, csv);
  const Table c = read_csv(csv);
  CHECK(c.kind == t.kind);
  CHECK(c.columns == t.columns);
  CHECK(c.rows == t.rows);

  std::stringstream js;
  write_json(t, js);
  const Table j = read_json(js);
  CHECK(j.kind == t.kind);
  CHECK(j.columns == t.columns);
  CHECK(j.rows == t.rows);

  CHECK(c.number(3, "a") == doctest::Approx(std::stod(t.rows[3][0])));
  CHECK_THROWS_AS(c.number(0, "label"), InvalidArgument);
  CHECK_THROWS_AS(c.column("missing"), InvalidArgument);
}

TEST_CASE("CSV reader rejects foreign files") {
  std::stringstream no_header("a,b\n1,2\n");
  CHECK_THROWS_AS(read_csv(no_header), InvalidArgument);
  std::stringstream future("# homprobe dip-scan schema: 2\na,b\n1,2\n");
  CHECK_THROWS_AS(read_csv(future), InvalidArgument);
  std::stringstream ragged("# homprobe dip-scan schema: 1\na,b\n1\n");
  CHECK_THROWS_AS(read_csv(ragged), InvalidArgument);
}

TEST_CASE("state and mode files") {
  const auto grid = FrequencyGrid::uniform(-6.0, 6.0, 128);
  const auto u = make_gaussian_mode({0.2, 1.1, 0.4}, grid);
  const auto v = make_gaussian_mode({-0.3, 0.9, 0.0}, grid);
  const auto rho = mix_states({{0.3, pure_state(u)}, {0.7, pure_state(v)}});

  std::stringstream ss;
  write_state(rho, ss);
  const auto back = read_state(ss);
  CHECK((back.entries() - rho.entries()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(*back.grid() == *rho.grid());

  std::stringstream ms;
  write_mode(u, ms);
  const auto ub = read_mode(ms);
  CHECK((ub.amplitudes() - u.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(overlap_T(back, ub) == doctest::Approx(overlap_T(rho, u)).epsilon(1e-14));

  SUBCASE("mode without grid uses the fallback") {
    std::stringstream bare(R"({"mode": {"re": [1, 1], "im": [0, 0]}})");
    const auto g2 = FrequencyGrid::from_points({0.0, 1.0});
    const auto m = read_mode(bare, g2);
    CHECK(m.norm_squared() == doctest::Approx(1.0));
    std::stringstream bare2(R"({"mode": {"re": [1, 1]}})");
    CHECK_THROWS_AS(read_mode(bare2), InvalidArgument);
  }

  SUBCASE("malformed files") {
    std::stringstream junk("{not json");
    CHECK_THROWS_AS(read_state(junk), InvalidArgument);
    std::stringstream non_herm(
        R"({"grid": {"points": [0, 1]}, "rho": {"re": [[1, 0], [0, 1]], "im": [[0, 0.5], [0.5, 0]]}})");
    CHECK_THROWS_AS(read_state(non_herm), InvalidArgument);
    std::stringstream wrong_size(R"({"grid": {"points": [0, 1]}, "rho": {"re": [[1]]}})");
    CHECK_THROWS_AS(read_state(wrong_size), InvalidArgument);
  }
}
