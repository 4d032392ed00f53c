#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "tabmem/augment.hpp"
#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

using namespace tabmem;
using fixtures::sym;

namespace {

Table labelled(std::initializer_list<const char*> labels) {
  Schema s({{"v", FeatureKind::Numerical}}, std::string("y"));
  std::vector<Cell> cells;
  double x = 0;
  for (const char* l : labels) {
    cells.push_back(x++);
    cells.push_back(sym(l));
  }
  return Table::from_cells(s, cells);
}

double prob_of(const ClassPrior& p, const char* name) {
  for (std::size_t k = 0; k < p.classes.size(); ++k)
    if (p.classes[k] == Symbol::intern(name)) return p.probabilities[k];
  return -1;
}

}  // namespace

TEST_CASE("class prior") {
  const auto p = class_prior(labelled({"A", "A", "B", "B"}));
  CHECK(prob_of(p, "A") == 0.5);
  CHECK(prob_of(p, "B") == 0.5);
  const auto q = class_prior(labelled({"A", "A", "A", "B"}));
  CHECK(prob_of(q, "A") == 0.75);
  CHECK(prob_of(q, "B") == 0.25);
  const auto one = class_prior(labelled({"A", "A"}));
  CHECK(one.classes.size() == 1);
  CHECK(prob_of(one, "A") == 1.0);

  Schema nolabel({{"v", FeatureKind::Numerical}}, std::nullopt);
  CHECK_THROWS_AS(class_prior(Table(nolabel, {{1.0}})), Error);
}

TEST_CASE("forced masks select a donor") {
  Rng rng(1);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto t = fixtures::random_table(s, 2, rng);
  const auto units = feature_units(s);
  MixMask ones{std::vector<std::uint8_t>(4, 1), {}};
  MixMask zeros{std::vector<std::uint8_t>(4, 0), {}};
  const auto lab = Symbol::intern("c");
  const auto a = mix_rows(t.row(0), t.row(1), ones, units, s, lab);
  const auto b = mix_rows(t.row(0), t.row(1), zeros, units, s, lab);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(a[j] == t.row(0)[j]);
    CHECK(b[j] == t.row(1)[j]);
  }
  CHECK(std::get<Symbol>(a[4]) == lab);
}

TEST_CASE("cutmix output comes from two donors of its class") {
  Rng data_rng(2);
  const auto s = fixtures::mixed_schema(3, 3);
  const auto t = fixtures::random_table(s, 60, data_rng, 6);
  const DonorSampler donors(t, class_prior(t));
  for (std::uint64_t i = 0; i < 300; ++i) {
    Rng rng = make_stream(5, i);
    Rng replay = rng;
    MixMask mask;
    const auto out = cutmix_once(donors, rng, &mask);
    const auto d = donors.draw(replay);
    CHECK(d.a != d.b);
    CHECK(t.label(d.a) == t.label(d.b));
    CHECK(std::get<Symbol>(out[s.target_column()]) == t.label(d.a));
    for (std::size_t j = 0; j < s.feature_count(); ++j) {
      CHECK((out[j] == t.at(d.a, j) || out[j] == t.at(d.b, j)));
      CHECK(out[j] == (mask.bits[j] ? t.at(d.a, j) : t.at(d.b, j)));
    }
  }
}

TEST_CASE("one cluster copies a whole donor") {
  Rng data_rng(3);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto t = fixtures::random_table(s, 30, data_rng, 8);
  FeatureClusters all{{{0, 1, 2, 3}}, 1.0};
  const auto prior = class_prior(t);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = make_stream(9, i);
    const auto out = cutmixplus_once(t, prior, all, rng);
    bool matches = false;
    for (std::size_t r = 0; r < t.row_count() && !matches; ++r) {
      bool same = true;
      for (std::size_t j = 0; j < 4; ++j) same = same && out[j] == t.at(r, j);
      matches = same;
    }
    CHECK(matches);
  }
}

TEST_CASE("singleton clusters draw independent per-feature masks") {
  Rng data_rng(4);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto t = fixtures::random_table(s, 40, data_rng, 4);
  const DonorSampler donors(t, class_prior(t));
  FeatureClusters singles{{{0}, {1}, {2}, {3}}, 0.0};
  const int n = 40000;
  double plus_first = 0, plus_both = 0, mix_first = 0, mix_both = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng r1 = make_stream(3, i), r2 = make_stream(4, i);
    MixMask m1, m2;
    cutmixplus_once(donors, singles, r1, &m1);
    cutmix_once(donors, r2, &m2);
    CHECK(m1.lambdas.size() == 4);
    plus_first += m1.bits[0];
    plus_both += m1.bits[0] & m1.bits[1];
    mix_first += m2.bits[0];
    mix_both += m2.bits[0] & m2.bits[1];
  }
  // Marginals are Bern(1/2) in both modes; a shared lambda correlates CutMix bits (E[l^2] = 1/3).
  CHECK(plus_first / n == doctest::Approx(0.5).epsilon(0.03));
  CHECK(mix_first / n == doctest::Approx(0.5).epsilon(0.03));
  CHECK(plus_both / n == doctest::Approx(0.25).epsilon(0.04));
  CHECK(mix_both / n == doctest::Approx(1.0 / 3.0).epsilon(0.04));
}

TEST_CASE("linked features stay linked for every donor pair") {
  Rng data_rng(5);
  const auto t = fixtures::linked_table(12, data_rng);
  FeatureClusters c{{{0, 1}, {2}, {3}}, 0.7};
  const auto units = c.clusters;
  // Every ordered donor pair and every mask over the three units.
  for (std::size_t a = 0; a < t.row_count(); ++a)
    for (std::size_t b = 0; b < t.row_count(); ++b)
      for (unsigned m = 0; m < 8; ++m) {
        MixMask mask{{std::uint8_t(m & 1), std::uint8_t((m >> 1) & 1), std::uint8_t((m >> 2) & 1)}, {}};
        const auto out = mix_rows(t.row(a), t.row(b), mask, units, t.schema(), t.label(a));
        CHECK(fixtures::link_holds(out));
      }
}

TEST_CASE("donor sampler needs two rows per class") {
  CHECK_THROWS_AS(DonorSampler(labelled({"A", "A", "B"}), class_prior(labelled({"A", "A", "B"}))), Error);
}

TEST_CASE("ijf degenerate columns and moments") {
  Schema s({{"c", FeatureKind::Numerical}, {"k", FeatureKind::Categorical}, {"g", FeatureKind::Numerical}},
           std::string("y"));
  Rng data_rng(6);
  std::vector<Cell> cells;
  for (int r = 0; r < 1000; ++r) {
    cells.push_back(3.5);
    cells.push_back(sym("only"));
    cells.push_back(10.0 + 2.0 * standard_normal(data_rng));
    cells.push_back(sym(r % 4 == 0 ? "p" : "q"));
  }
  const auto t = Table::from_cells(s, cells);
  const IjfModel model(t);
  double mean = 0.0;
  double data_mean = 0.0;
  for (std::size_t r = 0; r < t.row_count(); ++r) data_mean += std::get<double>(t.at(r, 2)) / 1000.0;
  Rng rng(7);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto row = model.sample(rng);
    CHECK(std::get<double>(row[0]) == 3.5);
    CHECK(std::get<Symbol>(row[1]) == Symbol::intern("only"));
    mean += std::get<double>(row[2]) / n;
  }
  CHECK(std::abs(mean - data_mean) < 0.05);
}

TEST_CASE("augment sizes and determinism") {
  CHECK(augmented_count(24000, 0.3) == 7200);
  Rng data_rng(8);
  const auto s = fixtures::mixed_schema(2, 2);
  const auto t = fixtures::random_table(s, 50, data_rng);
  for (auto mode : {AugmentMode::CutMix, AugmentMode::CutMixPlus, AugmentMode::IJF}) {
    AugmentConfig cfg;
    cfg.mode = mode;
    cfg.ratio = 0.0;
    CHECK(augment(t, cfg) == t);
    cfg.ratio = 0.3;
    const auto out = augment(t, cfg);
    CHECK(out.row_count() == 65);
    CHECK(out == augment(t, cfg));
    for (std::size_t r = 0; r < 50; ++r)
      for (std::size_t c = 0; c < s.width(); ++c) CHECK(out.at(r, c) == t.at(r, c));
  }
}

TEST_CASE("augment result does not depend on the worker count") {
  Rng data_rng(9);
  const auto t = fixtures::random_table(fixtures::mixed_schema(3, 2), 80, data_rng);
  AugmentConfig cfg;
  cfg.mode = AugmentMode::CutMixPlus;
  cfg.ratio = 2.0;
  const auto before = thread_count();
  set_thread_count(1);
  const auto one = augment(t, cfg);
  set_thread_count(8);
  const auto eight = augment(t, cfg);
  set_thread_count(before);
  CHECK(one == eight);
}

TEST_CASE("augment mode names") {
  CHECK(parse_augment_mode("cutmixplus") == AugmentMode::CutMixPlus);
  CHECK(to_string(AugmentMode::IJF) == "ijf");
  CHECK_THROWS_AS(parse_augment_mode("mixup"), Error);
}
