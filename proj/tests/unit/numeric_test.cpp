#include "soft2hard/numeric.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace soft2hard {
namespace {

TEST(PairwiseSumTest, MatchesExactSums) {
  EXPECT_EQ(pairwise_sum({}), 0.0);
  std::vector<double> ints(1000);
  std::iota(ints.begin(), ints.end(), 1.0);
  EXPECT_EQ(pairwise_sum(ints), 500500.0);
}

TEST(PairwiseSumTest, BeatsNaiveOnCancellation) {
  std::vector<double> v(1 << 20, 0.1);
  double naive = 0.0;
  for (double x : v) naive += x;
  const double exact = 0.1 * v.size();
  EXPECT_LT(std::abs(pairwise_sum(v) - exact), std::abs(naive - exact));
}

TEST(SimpsonTest, ExactForCubics) {
  const double got = simpson([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 3);
  EXPECT_NEAR(got, (16.0 - 1.0) / 4.0 - (4.0 - 1.0) + 3.0, 1e-14);
}

TEST(LeastSquaresTest, ExactLineAndDegenerateInputs) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = least_squares_line(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r_squared, 1.0);

  const std::vector<double> one{1.0};
  EXPECT_THROW(least_squares_line(one, one), DegenerateFitError);
  const std::vector<double> same{2.0, 2.0}, any{1.0, 3.0};
  EXPECT_THROW(least_squares_line(same, any), DegenerateFitError);
}

TEST(LeastSquaresTest, RSquaredInUnitInterval) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(10), y(10);
    for (int i = 0; i < 10; ++i) {
      x[static_cast<std::size_t>(i)] = i;
      y[static_cast<std::size_t>(i)] = n01(rng);
    }
    const LineFit f = least_squares_line(x, y);
    EXPECT_GE(f.r_squared, 0.0);
    EXPECT_LE(f.r_squared, 1.0);
  }
}

TEST(ParallelForTest, VisitsEachIndexOnce) {
  for (int threads : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ThreadsFromEnvironmentTest, Parsing) {
  ::setenv("SOFT2HARD_THREADS", "6", 1);
  EXPECT_EQ(threads_from_environment(), 6);
  ::setenv("SOFT2HARD_THREADS", "zero", 1);
  EXPECT_EQ(threads_from_environment(), 1);
  ::setenv("SOFT2HARD_THREADS", "0", 1);
  EXPECT_EQ(threads_from_environment(), 1);
  ::unsetenv("SOFT2HARD_THREADS");
  EXPECT_EQ(threads_from_environment(), 1);
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e6), "1e+06");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e10, 1e10);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

}  // namespace
}  // namespace soft2hard
