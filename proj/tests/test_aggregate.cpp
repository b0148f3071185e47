#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace malvis;
using testing_support::heatmap;
using testing_support::random_heatmap;

namespace {

ModelHeatmaps model_from(const std::map<std::string, Heatmap>& maps) {
  ModelHeatmaps m;
  for (const auto& [label, hm] : maps) m.emplace(label, CumulativeHeatmap{label, 1, hm});
  return m;
}

}  // namespace

TEST(CumulativeHeatmap, SingleAndIdentical) {
  std::mt19937_64 rng(1);
  const auto hm = random_heatmap(rng, 7, 7);
  const std::vector<Heatmap> one{hm};
  const auto c1 = cumulative_heatmap("a", one);
  EXPECT_EQ(c1.map, hm);
  EXPECT_EQ(c1.count, 1u);
  EXPECT_EQ(c1.class_label, "a");

  const std::vector<Heatmap> two{hm, hm};
  EXPECT_EQ(cumulative_heatmap("a", two).map, hm);
}

TEST(CumulativeHeatmap, ComplementaryMapsCollapseToZero) {
  const std::vector<Heatmap> maps{heatmap(2, 2, {0, 1, 1, 0}), heatmap(2, 2, {1, 0, 0, 1})};
  const auto c = cumulative_heatmap("x", maps);
  EXPECT_TRUE(c.map.all_zero());
  EXPECT_EQ(c.count, 2u);
}

TEST(CumulativeHeatmap, Errors) {
  EXPECT_THROW(cumulative_heatmap("x", std::vector<Heatmap>{}), Error);
  const std::vector<Heatmap> mixed{heatmap(2, 2, {0, 1, 1, 0}), heatmap(1, 2, {1, 0})};
  EXPECT_THROW(cumulative_heatmap("x", mixed), Error);
}

TEST(CumulativeHeatmap, PermutationInvariant) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Heatmap> maps;
    for (std::size_t i = 0, n = 2 + rng() % 20; i < n; ++i) maps.push_back(random_heatmap(rng, 7, 7));
    const auto base = cumulative_heatmap("c", maps);
    EXPECT_NO_THROW(testing_support::expect_heatmap_invariants(base.map));
    std::shuffle(maps.begin(), maps.end(), rng);
    EXPECT_EQ(cumulative_heatmap("c", maps).map, base.map);
  }
}

TEST(Ssim, IdentityIsExactlyOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_heatmap(rng, 7, 7);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
  const auto zero = heatmap(2, 2, {0, 0, 0, 0});
  EXPECT_EQ(ssim(zero, zero), 1.0);
}

TEST(Ssim, ZeroVersusOne) {
  const auto zero = heatmap(7, 7, std::vector<double>(49, 0.0));
  const auto one = heatmap(7, 7, std::vector<double>(49, 1.0));
  EXPECT_NEAR(ssim(zero, one), ssim_c1 / (1.0 + ssim_c1), 1e-12);
  EXPECT_NEAR(ssim(zero, one), 9.999000099990001e-05, 1e-15);
}

TEST(Ssim, SymmetricAndBounded) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_heatmap(rng, 7, 7);
    const auto b = random_heatmap(rng, 7, 7);
    const double v = ssim(a, b);
    EXPECT_EQ(v, ssim(b, a));
    EXPECT_LE(std::fabs(v), 1.0 + 1e-9);
  }
}

TEST(Ssim, HandComputedPair) {
  // a = {0,1}, b = {1,0}: mu = 0.5 each, var = 0.25 each, cov = -0.25.
  const auto a = heatmap(1, 2, {0, 1});
  const auto b = heatmap(1, 2, {1, 0});
  const double expected = (0.5 + ssim_c1) * (-0.5 + ssim_c2) / ((0.5 + ssim_c1) * (0.5 + ssim_c2));
  EXPECT_NEAR(ssim(a, b), expected, 1e-15);
  EXPECT_LT(ssim(a, b), 0.0);
}

TEST(Ssim, DimensionMismatch) {
  EXPECT_THROW(ssim(heatmap(1, 2, {0, 1}), heatmap(2, 1, {0, 1})), Error);
}

TEST(SsimSliding, SingleWindowEqualsGlobal) {
  std::mt19937_64 rng(5);
  const auto a = random_heatmap(rng, 11, 11);
  const auto b = random_heatmap(rng, 11, 11);
  EXPECT_DOUBLE_EQ(ssim_sliding(a, b), ssim(a, b));
  EXPECT_THROW(ssim_sliding(random_heatmap(rng, 7, 7), random_heatmap(rng, 7, 7)), Error);
}

TEST(SsimSliding, MeanOfWindows) {
  std::mt19937_64 rng(6);
  const auto a = random_heatmap(rng, 12, 13);
  const auto b = random_heatmap(rng, 12, 13);
  double total = 0.0;
  int n = 0;
  for (std::size_t r = 0; r + 11 <= 12; ++r)
    for (std::size_t c = 0; c + 11 <= 13; ++c, ++n) {
      std::vector<double> va, vb;
      for (std::size_t i = r; i < r + 11; ++i)
        for (std::size_t j = c; j < c + 11; ++j) {
          va.push_back(a.at(i, j));
          vb.push_back(b.at(i, j));
        }
      total += ssim(heatmap(11, 11, va), heatmap(11, 11, vb));
    }
  EXPECT_NEAR(ssim_sliding(a, b), total / n, 1e-12);
  EXPECT_EQ(n, 6);
}

TEST(PairwiseSsim, SelfComparison) {
  std::mt19937_64 rng(7);
  const auto model = model_from({{"a", random_heatmap(rng, 7, 7)},
                                 {"b", random_heatmap(rng, 7, 7)},
                                 {"c", random_heatmap(rng, 7, 7)},
                                 {"d", random_heatmap(rng, 7, 7)}});
  const auto report = pairwise_cumulative_ssim(model, model);
  EXPECT_EQ(report.mean, 1.0);
  EXPECT_EQ(report.sum, 4.0);
  for (const auto& [_, v] : report.per_class) EXPECT_EQ(v, 1.0);
}

TEST(PairwiseSsim, Compositional) {
  const auto a1 = heatmap(2, 2, {0, 1, 0.5, 0.2});
  const auto a2 = heatmap(2, 2, {1, 0, 0.3, 0.3});
  const auto b1 = heatmap(2, 2, {0.1, 1, 0.4, 0});
  const auto b2 = heatmap(2, 2, {0, 0.2, 1, 0.6});
  const auto report = pairwise_cumulative_ssim(model_from({{"x", a1}, {"y", a2}}), model_from({{"x", b1}, {"y", b2}}));
  EXPECT_EQ(report.per_class.at("x"), ssim(a1, b1));
  EXPECT_EQ(report.per_class.at("y"), ssim(a2, b2));
  EXPECT_EQ(report.sum, ssim(a1, b1) + ssim(a2, b2));
  EXPECT_EQ(report.mean, (ssim(a1, b1) + ssim(a2, b2)) / 2.0);
}

TEST(PairwiseSsim, ClassSetMismatch) {
  const auto hm = heatmap(1, 1, {1});
  try {
    pairwise_cumulative_ssim(model_from({{"x", hm}, {"y", hm}}), model_from({{"x", hm}, {"z", hm}}));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'y'"), std::string::npos);
    EXPECT_NE(msg.find("'z'"), std::string::npos);
  }
}

TEST(SelfSsim, IdenticalClassesGiveOne) {
  std::mt19937_64 rng(8);
  const auto hm = random_heatmap(rng, 7, 7);
  EXPECT_EQ(model_self_ssim(model_from({{"a", hm}, {"b", hm}, {"c", hm}})), 1.0);
}

TEST(SelfSsim, MeanOfPairs) {
  std::mt19937_64 rng(9);
  const auto a = random_heatmap(rng, 7, 7), b = random_heatmap(rng, 7, 7), c = random_heatmap(rng, 7, 7);
  const double expected = (ssim(a, b) + ssim(a, c) + ssim(b, c)) / 3.0;
  EXPECT_NEAR(model_self_ssim(model_from({{"a", a}, {"b", b}, {"c", c}})), expected, 1e-15);
}

TEST(SelfSsim, RelabelingInvariant) {
  std::mt19937_64 rng(10);
  std::vector<Heatmap> maps;
  for (int i = 0; i < 6; ++i) maps.push_back(random_heatmap(rng, 7, 7));
  std::map<std::string, Heatmap> first, second;
  const std::vector<std::string> names{"q", "w", "e", "r", "t", "y"};
  for (int i = 0; i < 6; ++i) {
    first.emplace("class" + std::to_string(i), maps[static_cast<std::size_t>(i)]);
    second.emplace(names[static_cast<std::size_t>(i)], maps[static_cast<std::size_t>(i)]);
  }
  EXPECT_EQ(model_self_ssim(model_from(first)), model_self_ssim(model_from(second)));
}

TEST(SelfSsim, NeedsTwoClasses) {
  EXPECT_THROW(model_self_ssim(model_from({{"a", heatmap(1, 1, {1})}})), Error);
}

TEST(SsimReport, JsonFormat) {
  SsimReport r;
  r.per_class = {{"b", 0.5}, {"a", 1.0}};
  r.sum = 1.5;
  r.mean = 0.75;
  EXPECT_EQ(to_json(r),
            "{\n  \"classes\": {\n    \"a\": 1.000000,\n    \"b\": 0.500000\n  },\n  \"mean\": 0.750000,\n"
            "  \"sum\": 1.500000\n}\n");
}
