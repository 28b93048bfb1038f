#include "lgs/defense.hpp"

#include "testutil.hpp"

#include <doctest.h>

using namespace lgs;

TEST_CASE("defense json round trip preserves every kind") {
  std::vector<DefenseConfig> configs = fullDefenseGrid();
  for (const DefenseConfig& cfg : configs) {
    const DefenseConfig back = defenseFromJson(defenseToJson(cfg));
    CHECK(back.kind() == cfg.kind());
    CHECK(back.paramsLabel() == cfg.paramsLabel());
  }
}

TEST_CASE("full grid holds every comparison row") {
  const auto grid = fullDefenseGrid();
  CHECK(grid.size() == 5 + 3 + 6 + 3 + 3);
  const auto sweep = lgsLambdaSweep();
  REQUIRE(sweep.size() == 5);
  CHECK(std::get<LgsParams>(sweep.front().params).lambda == 1.5);
  CHECK(std::get<LgsParams>(sweep.back().params).lambda == 2.3);
}

TEST_CASE("shipped defaults are the standard operating point") {
  const LgsParams p;
  CHECK(p.lambda == 2.3);
  CHECK(p.block == 15);
  CHECK(p.overlap == 5);
  CHECK(p.gamma == 0.1);
}

TEST_CASE("parameter validation per kind") {
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"jpeg","params":{"quality":0}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"bitdepth","params":{"depth":9}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"median","params":{"window":4}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"tvm","params":{"weight":-1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"lgs","params":{"overlap":15}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(defenseFromJson(R"({"kind":"sharpen"})"), std::invalid_argument);
}

TEST_CASE("short aliases parse and defaults fill in") {
  const DefenseConfig mf = defenseFromJson(R"({"kind":"mf"})");
  CHECK(mf.shortLabel() == "MF");
  CHECK(std::get<MedianParams>(mf.params).window == 3);
  const DefenseConfig gf = defenseFromJson(R"({"kind":"gf","params":{"window":5}})");
  CHECK(std::get<GaussianParams>(gf.params).window == 5);
}

TEST_CASE("gaussian sigma defaults to window/6 in labels and json") {
  DefenseConfig cfg{GaussianParams{5, 0}};
  CHECK(cfg.paramsLabel() == "window=5 sigma=0.833333");
  const std::string js = defenseToJson(cfg);
  CHECK(js.find("0.8333333") != std::string::npos);
}

TEST_CASE("applyDefense dispatches and reports tvm metadata") {
  const Image img = testutil::randomImage(16, 16, 6);
  DefenseRunInfo info;
  const Image out = applyDefense(img, DefenseConfig{TvmParams{10, 200, 2e-4}}, &info);
  CHECK(out.rows() == 16);
  REQUIRE(info.tvmConverged.has_value());
  CHECK(*info.tvmConverged);
  CHECK(*info.tvmIterations >= 1);

  DefenseRunInfo none;
  (void)applyDefense(img, DefenseConfig{MedianParams{3}}, &none);
  CHECK_FALSE(none.tvmConverged.has_value());
}
