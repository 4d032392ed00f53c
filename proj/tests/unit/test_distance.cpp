#include "doctest.h"
#include "fixtures.hpp"
#include "tabmem/distance.hpp"
#include "tabmem/error.hpp"

using namespace tabmem;
using fixtures::num;
using fixtures::sym;

namespace {

Schema two_by_two() {
  return Schema({{"n0", FeatureKind::Numerical},
                 {"n1", FeatureKind::Numerical},
                 {"k0", FeatureKind::Categorical},
                 {"k1", FeatureKind::Categorical}},
                std::nullopt);
}

Table one_numeric(std::initializer_list<double> values) {
  Schema s({{"v", FeatureKind::Numerical}}, std::nullopt);
  std::vector<Cell> cells(values.begin(), values.end());
  return Table::from_cells(s, cells);
}

}  // namespace

TEST_CASE("raw numeric distance") {
  const auto s = two_by_two();
  const std::vector<Cell> a{num(0), num(0), sym("A"), sym("B")};
  const std::vector<Cell> b{num(3), num(4), sym("A"), sym("C")};
  CHECK(raw_numeric_distance(a, a, s) == 0.0);
  CHECK(raw_numeric_distance(a, b, s) == doctest::Approx(5.0).epsilon(1e-15));

  Schema cats({{"k", FeatureKind::Categorical}}, std::nullopt);
  const std::vector<Cell> x{sym("p")}, y{sym("q")};
  CHECK(raw_numeric_distance(x, y, cats) == 0.0);
}

TEST_CASE("normalizer from an enumerated population") {
  const auto q = one_numeric({0.0});
  const auto r = one_numeric({0.0, 5.0, 10.0});
  const auto n = fit_normalizer(q, r);
  CHECK(n.d_min() == 0.0);
  CHECK(n.d_max() == 10.0);
  CHECK(n.normalize(5.0) == 0.5);
  CHECK(n.normalize(20.0) == 1.0);
  CHECK(n.normalize(-1.0) == 0.0);

  const auto single = fit_normalizer(one_numeric({2.0}), one_numeric({9.0}));
  CHECK(single.degenerate());
  CHECK(single.normalize(7.0) == 0.0);

  const auto flat = fit_normalizer(one_numeric({3.0, 3.0}), one_numeric({3.0, 3.0, 3.0}));
  CHECK(flat.degenerate());
  CHECK(flat.normalize(123.0) == 0.0);
}

TEST_CASE("normalizer over several reference tables") {
  const auto q = one_numeric({0.0});
  const auto r1 = one_numeric({1.0});
  const auto r2 = one_numeric({4.0});
  PairPopulation pop{&q, {&r1, &r2}};
  const auto n = fit_normalizer(pop);
  CHECK(n.d_min() == 1.0);
  CHECK(n.d_max() == 4.0);
}

TEST_CASE("mixed distance hand value") {
  const auto s = two_by_two();
  const std::vector<Cell> a{num(0), num(0), sym("A"), sym("B")};
  const std::vector<Cell> b{num(3), num(4), sym("A"), sym("C")};
  const DistanceNormalizer n(0.0, 10.0);
  CHECK(mixed_distance(a, b, s, n) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(mixed_distance(a, a, s, n) == 0.0);

  Schema cats({{"k0", FeatureKind::Categorical}, {"k1", FeatureKind::Categorical}}, std::nullopt);
  const std::vector<Cell> x{sym("p"), sym("q")}, y{sym("r"), sym("s")};
  CHECK(mixed_distance(x, y, cats, n) == 1.0);
}

TEST_CASE("encoded rows agree with cell distance") {
  Rng rng(17);
  const auto s = fixtures::mixed_schema(3, 3);
  const auto a = fixtures::random_table(s, 30, rng);
  const auto b = fixtures::random_table(s, 30, rng);
  const auto n = fit_normalizer(a, b);
  const EncodedRows ea(a), eb(b);
  for (std::size_t i = 0; i < a.row_count(); ++i)
    for (std::size_t j = 0; j < b.row_count(); ++j)
      CHECK(mixed_distance(ea, i, eb, j, n, s.feature_count()) == mixed_distance(a.row(i), b.row(j), s, n));
}

TEST_CASE("distance is symmetric and bounded") {
  Rng rng(23);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto a = fixtures::random_table(s, 25, rng);
  const auto n = fit_normalizer(a, a);
  for (std::size_t i = 0; i < a.row_count(); ++i)
    for (std::size_t j = 0; j < a.row_count(); ++j) {
      const double d = mixed_distance(a.row(i), a.row(j), s, n);
      CHECK(d == mixed_distance(a.row(j), a.row(i), s, n));
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
    }
}

TEST_CASE("two nearest finds an exact copy") {
  const auto s = two_by_two();
  const Table train(s, {{num(100), num(100), sym("x"), sym("y")},
                        {num(1), num(2), sym("A"), sym("B")},
                        {num(-100), num(50), sym("z"), sym("w")}});
  const Table gen(s, {{num(1), num(2), sym("A"), sym("B")}});
  const auto res = two_nearest(gen, train, fit_normalizer(gen, train));
  REQUIRE(res.size() == 1);
  CHECK(res[0].nn1_index == 1);
  CHECK(res[0].nn1_distance == 0.0);
}

TEST_CASE("two nearest breaks ties by lower index") {
  const auto t = one_numeric({-1.0, 1.0, 7.0});
  const auto g = one_numeric({0.0});
  const auto res = two_nearest(g, t, fit_normalizer(g, t));
  CHECK(res[0].nn1_index == 0);
  CHECK(res[0].nn2_index == 1);
  CHECK(res[0].nn1_distance == res[0].nn2_distance);
}

TEST_CASE("two nearest matches the brute-force oracle") {
  Rng rng(29);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto train = fixtures::random_table(s, 120, rng, 3, 0.5);
  const auto gen = fixtures::random_table(s, 80, rng, 3, 0.5);
  const auto got = two_nearest(gen, train, fit_normalizer(gen, train));
  const auto want = fixtures::oracle_two_nearest(gen, train);
  for (std::size_t i = 0; i < gen.row_count(); ++i) {
    CHECK(got[i].nn1_index == want[i].i1);
    CHECK(got[i].nn2_index == want[i].i2);
    CHECK(got[i].nn1_distance == doctest::Approx(want[i].d1).epsilon(1e-12));
    CHECK(got[i].nn2_distance == doctest::Approx(want[i].d2).epsilon(1e-12));
  }
}

TEST_CASE("two nearest needs two train rows") {
  const auto t = one_numeric({1.0});
  const auto g = one_numeric({0.0});
  CHECK_THROWS_AS(two_nearest(g, t, fit_normalizer(g, t)), Error);
}

TEST_CASE("closest distances") {
  const auto ref = one_numeric({0.0, 10.0});
  const auto q = one_numeric({2.0, 9.0});
  const auto d = closest_distances(q, ref, DistanceNormalizer(0.0, 10.0));
  CHECK(d[0] == doctest::Approx(0.2));
  CHECK(d[1] == doctest::Approx(0.1));
}
