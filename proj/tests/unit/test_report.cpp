#include "doctest.h"
#include "fixtures.hpp"
#include "tabmem/report.hpp"

using namespace tabmem;

TEST_CASE("memorization report json") {
  Rng rng(1);
  const auto s = fixtures::mixed_schema(1, 1);
  const auto t = fixtures::random_table(s, 20, rng);
  const auto j = to_json(audit(t, t));
  CHECK(j["mem_ratio"] == 1.0);
  CHECK(j["histogram"]["counts"].size() == 50);
  CHECK(j["ratios"].size() == 20);
  CHECK(j["n_generated"] == 20);
}

TEST_CASE("fidelity report omits dcr without a holdout") {
  FidelityReport r;
  CHECK_FALSE(to_json(r).contains("dcr_probability"));
  r.dcr_probability = 0.5;
  CHECK(to_json(r)["dcr_probability"] == 0.5);
}

TEST_CASE("cluster json uses feature names") {
  const auto s = fixtures::mixed_schema(2, 1);
  FeatureClusters c{{{0, 2}, {1}}, 0.4};
  const auto j = to_json(c, s);
  CHECK(j["clusters"] == nlohmann::json::parse(R"([["x0","c0"],["x1"]])"));
  CHECK(j["threshold"] == 0.4);
}

TEST_CASE("floats serialize at full precision") {
  FidelityReport r;
  r.shape_score = 0.1 + 0.2;
  const auto text = to_json(r).dump();
  CHECK(nlohmann::json::parse(text)["shape_score"].get<double>() == 0.1 + 0.2);
}
