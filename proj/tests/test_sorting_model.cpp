#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sortenv/sorting_model.hpp"

using namespace sortenv;

namespace {

// Limit map with limits(v) = 0.6 at speed 5, used by the single-speed examples.
OccupancyLimitMap limits_with(int speed, double value) {
  auto values = OccupancyLimitMap().values();
  values[static_cast<std::size_t>(speed - 1)] = value;
  return OccupancyLimitMap(values);
}

}  // namespace

TEST(Occupancy, Examples) {
  EXPECT_DOUBLE_EQ(occupancy({30, 20}), 0.5);
  EXPECT_EQ(occupancy({0, 0}), 0.0);
  EXPECT_EQ(occupancy({100, 0}), 1.0);
}

TEST(BaseAccuracy, Examples) {
  const auto lim = limits_with(5, 0.6);
  EXPECT_EQ(base_accuracy(5, 0.5, lim, 3.0, 0.0), 1.0);
  EXPECT_NEAR(base_accuracy(5, 0.7, lim, 3.0, 0.0), 0.7, 1e-12);
  const auto tight = limits_with(10, 0.1);
  EXPECT_EQ(base_accuracy(10, 1.0, tight, 3.0, 0.0), 0.0);
  EXPECT_EQ(base_accuracy(10, 1.0, tight, 3.0, 0.12), 0.0);
}

TEST(BaseAccuracy, NoiseDrawStaysInRange) {
  Rng rng(1);
  const OccupancyLimitMap lim;
  for (int i = 0; i < 1000; ++i) {
    const double a = base_accuracy(3, 0.2, lim, 3.0, Range{0.10, 0.15}, rng);
    ASSERT_GT(a, 0.85 - 1e-12);
    ASSERT_LE(a, 0.90 + 1e-12);
  }
}

TEST(BaseAccuracy, MonotoneInOccupancyAndLimit) {
  const OccupancyLimitMap lim;
  for (int k = 1; k <= 10; ++k) {
    for (double noise : {0.0, 0.05, 0.12}) {
      double prev = 2.0;
      for (int i = 0; i <= 100; ++i) {
        const double a = base_accuracy(k, i / 100.0, lim, 3.0, noise);
        ASSERT_LE(a, prev);
        prev = a;
      }
    }
  }
  for (int i = 0; i <= 100; ++i) {
    double prev = -1.0;
    for (int j = 0; j <= 10; ++j) {
      const double a = base_accuracy(5, i / 100.0, limits_with(5, j / 10.0), 3.0, 0.03);
      ASSERT_GE(a, prev);
      prev = a;
    }
  }
}

TEST(BaseAccuracy, ExactlyOneWithinLimitWithoutNoise) {
  const OccupancyLimitMap lim;
  for (int k = 1; k <= 10; ++k) {
    for (int i = 0; i <= 100; ++i) {
      const double o = i / 100.0;
      if (o <= lim.at(k)) EXPECT_EQ(base_accuracy(k, o, lim, 3.0, 0.0), 1.0);
    }
  }
}

TEST(ClassifyRatio, Examples) {
  EXPECT_EQ(classify_ratio({50, 50}), SortingMode::Basic);
  EXPECT_EQ(classify_ratio({80, 20}), SortingMode::Positive);
  EXPECT_EQ(classify_ratio({75, 25}), SortingMode::Basic);
  EXPECT_EQ(classify_ratio({25, 75}), SortingMode::Basic);
  EXPECT_EQ(classify_ratio({20, 80}), SortingMode::Negative);
  EXPECT_EQ(classify_ratio({10, 0}), SortingMode::Positive);
  EXPECT_EQ(classify_ratio({0, 10}), SortingMode::Negative);
  EXPECT_EQ(classify_ratio({0, 0}), SortingMode::Basic);
}

TEST(ClassifyRatio, SymmetricUnderSwap) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(0, 60), b = rng.uniform(0, 40);
    const SortingMode fwd = classify_ratio({a, b});
    const SortingMode rev = classify_ratio({b, a});
    ASSERT_EQ(fwd == SortingMode::Positive, rev == SortingMode::Negative);
    ASSERT_EQ(fwd == SortingMode::Basic, rev == SortingMode::Basic);
  }
}

TEST(ApplyMode, Examples) {
  EXPECT_EQ(apply_mode(0.90, true, 0.0), 1.0);
  EXPECT_EQ(apply_mode(0.05, false, 0.10), 0.0);
  EXPECT_NEAR(apply_mode(0.80, true, 0.05), 0.90, 1e-12);
}

TEST(ApplyMode, DrawsFromTheModeRange) {
  Rng rng(4);
  const Range ok{0.0, 0.05}, bad{0.10, 0.15};
  for (int i = 0; i < 1000; ++i) {
    const double c = apply_mode(1.0, SortingMode::Positive, SortingMode::Positive, ok, bad, rng);
    ASSERT_GE(c, 0.95 - 1e-12);
    const double w = apply_mode(1.0, SortingMode::Basic, SortingMode::Positive, ok, bad, rng);
    ASSERT_LE(w, 0.80 + 1e-12);
    ASSERT_GE(w, 0.75 - 1e-12);
  }
}

TEST(SortTransfer, Examples) {
  auto perfect = sort_transfer({30, 20}, 1.0);
  EXPECT_EQ(perfect.containers.a, 30);
  EXPECT_EQ(perfect.containers.b, 20);
  EXPECT_EQ(perfect.tally.a_false, 0.0);
  EXPECT_EQ(perfect.tally.b_false, 0.0);

  auto even = sort_transfer({50, 50}, 0.8);
  EXPECT_NEAR(even.containers.a, 50, 1e-12);
  EXPECT_NEAR(even.containers.b, 50, 1e-12);
  EXPECT_NEAR(even.tally.a_true, 40, 1e-12);
  EXPECT_NEAR(even.tally.a_false, 10, 1e-12);
  EXPECT_NEAR(even.tally.b_true, 40, 1e-12);
  EXPECT_NEAR(even.tally.b_false, 10, 1e-12);

  auto skew = sort_transfer({60, 20}, 0.9);
  EXPECT_NEAR(skew.containers.a, 56, 1e-12);
  EXPECT_NEAR(skew.containers.b, 24, 1e-12);
}

TEST(SortTransfer, ConservesMass) {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(0, 50), b = rng.uniform(0, 50), alpha = rng.uniform01();
    const auto out = sort_transfer({a, b}, alpha);
    ASSERT_NEAR(out.containers.a + out.containers.b, a + b, 1e-12 * (a + b + 1));
    ASSERT_NEAR(out.tally.total(), a + b, 1e-12 * (a + b + 1));
  }
}

TEST(Purity, Examples) {
  EXPECT_NEAR(purity({40, 10, 40, 10}), 0.8, 1e-15);
  EXPECT_EQ(purity({40, 0, 20, 0}), 1.0);
  EXPECT_EQ(purity({}), 1.0);
}

TEST(Purity, SingleBatchEqualsAccuracy) {
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(0.1, 50), b = rng.uniform(0.1, 50), alpha = rng.uniform01();
    const double p = purity(sort_transfer({a, b}, alpha).tally);
    ASSERT_NEAR(p, alpha, 1e-12);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
}

TEST(StepReward, Examples) {
  const EnvConfig cfg;
  EXPECT_DOUBLE_EQ(step_reward(0.65, 0.5, cfg, false), -0.1);
  EXPECT_NEAR(step_reward(1.0, 1.0, cfg, false), 1.0, 1e-12);
  EXPECT_NEAR(step_reward(0.85, 0.55, cfg, false), 0.5, 1e-12);

  EnvConfig penalized;
  penalized.action_penalty = 0.5;
  EXPECT_NEAR(step_reward(1.0, 1.0, penalized, false), 1.0, 1e-12);
  EXPECT_NEAR(step_reward(1.0, 1.0, penalized, true), 0.5, 1e-12);
  EXPECT_NEAR(step_reward(0.65, 1.0, penalized, true), -0.6, 1e-12);
}

TEST(StepReward, StrictlyIncreasingAboveThreshold) {
  const EnvConfig cfg;
  for (int k = 1; k <= 10; ++k) {
    double prev = -1e9;
    for (int i = 70; i <= 100; ++i) {
      const double r = step_reward(i / 100.0, k / 10.0, cfg, false);
      ASSERT_GT(r, prev);
      prev = r;
    }
  }
  for (int i = 70; i <= 100; ++i) {
    double prev = -1e9;
    for (int k = 1; k <= 10; ++k) {
      const double r = step_reward(i / 100.0, k / 10.0, cfg, false);
      ASSERT_GT(r, prev);
      prev = r;
    }
  }
}

TEST(Formulas, MatchDirectEvaluationOracles) {
  Rng rng(99);
  const OccupancyLimitMap lim;
  EnvConfig cfg;
  cfg.action_penalty = 0.5;
  for (int i = 0; i < 10000; ++i) {
    const int k = rng.uniform_int(1, 10);
    const double o = rng.uniform01(), noise = rng.uniform(0.0, 0.2), alpha = rng.uniform01();
    ASSERT_NEAR(base_accuracy(k, o, lim, 3.0, noise),
                oracle::base_accuracy(o, oracle::default_limit(k), 3.0, noise), 1e-12);
    const bool ok = rng.uniform01() < 0.5;
    ASSERT_NEAR(apply_mode(alpha, ok, noise), oracle::apply_mode(alpha, ok, noise), 1e-12);
    const bool changed = rng.uniform01() < 0.5;
    ASSERT_NEAR(step_reward(alpha, k / 10.0, cfg, changed),
                oracle::reward(alpha, k / 10.0, 0.7, 0.5, 0.5, 0.5, changed), 1e-12);
  }
}

TEST(RewardSurface, UniqueArgmaxPerOccupancy) {
  EnvConfig cfg;
  cfg.base_noise_range = {0.0, 0.0};
  int prev_best = 11;
  for (int i = 0; i <= 100; ++i) {
    const double o = i / 100.0;
    int best = 0, ties = 0;
    double best_r = -1e9;
    for (int k = 1; k <= 10; ++k) {
      const double r = expected_reward(k, o, cfg);
      if (r > best_r + 1e-12) {
        best_r = r;
        best = k;
        ties = 0;
      } else if (std::abs(r - best_r) <= 1e-12) {
        ++ties;
      }
    }
    EXPECT_EQ(ties, 0) << "occupancy " << o;
    EXPECT_LE(best, prev_best) << "occupancy " << o;
    prev_best = best;
  }
}

TEST(ExpectedAccuracy, UsesNoiseMeans) {
  EnvConfig basic;
  EXPECT_NEAR(expected_accuracy(1, 0.5, basic), 0.875, 1e-12);
  EnvConfig adv;
  adv.variant = Variant::Advanced;
  EXPECT_NEAR(expected_accuracy(1, 0.5, adv, true), 0.975, 1e-12);
  EXPECT_NEAR(expected_accuracy(1, 0.5, adv, false), 0.775, 1e-12);
}
