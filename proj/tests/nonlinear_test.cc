// Copyright 2026 The rsqrt2pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/nonlinear.h"
#include "rsqrt2pc/session.h"
#include "test_util.h"

namespace rsqrt2pc::nonlinear {
namespace {

const ring::FixedPointCodec kCodec;

rsqrt::RsqrtConfig rsqrt_at(int E_m, int iterations) {
  rsqrt::RsqrtConfig cfg;
  cfg.flood.E_m = E_m;
  cfg.newton.iterations = iterations;
  return cfg;
}

// Runs fn on a tensor shared from xs and returns the reconstruction.
template <class Fn>
std::vector<double> shared_run(const std::vector<double>& xs,
                               std::vector<size_t> shape, Fn fn,
                               uint64_t seed = 1) {
  const auto sx = testing::share_all(xs, kCodec, seed);
  auto r = run_two_party(SessionOptions{}, [&](Session& s) {
    return fn(s, TensorShares{shape, sx.of(s.is_server())}).data;
  });
  return reconstruct_all(r.client, r.server, kCodec);
}

// Plain erf by its Maclaurin series, for |x| up to about 5.
double erf_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0 / std::sqrt(M_PI) * sum;
}

TEST(SmuPlainTest, ReluBranches) {
  EXPECT_EQ(smu_plain(-3.0, SmuParams::relu()), 0.0);
  EXPECT_EQ(smu_plain(3.0, SmuParams::relu()), 3.0);
}

TEST(SmuPlainTest, OffsetAtZero) {
  const SmuParams g = SmuParams::gelu();
  EXPECT_NEAR(smu_plain(0.0, g), g.mu / 2, 1e-12);
  EXPECT_NEAR(smu_plain(0.0, g), 0.35355, 1e-5);
}

TEST(SmuPlainTest, GeluFidelityBound) {
  double worst = 0.0, arg = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    const double d = std::fabs(smu_plain(x, SmuParams::gelu()) - gelu_plain(x));
    if (d > worst) worst = d, arg = x;
  }
  EXPECT_LE(worst, 0.36);
  EXPECT_NEAR(arg, 0.0, 0.02);
}

TEST(SmuPlainTest, ReluLimit) {
  const SmuParams p{0.0, 1e-3};
  for (double x = -6.0; x <= 6.0; x += 0.001) {
    ASSERT_LE(std::fabs(smu_plain(x, p) - std::max(x, 0.0)), p.mu / 2 + 1e-15);
  }
}

TEST(SmuPlainTest, NonzeroAlphaFollowsFormula) {
  // The square root takes (1 - alpha) x^2, so for alpha > 0 this is not
  // max(x, alpha x) exactly.
  const SmuParams p{0.2, 0.0};
  EXPECT_NEAR(smu_plain(-5.0, p), -3.0 + std::sqrt(20.0) / 2, 1e-12);
  EXPECT_NEAR(smu_plain(5.0, p), 3.0 + std::sqrt(20.0) / 2, 1e-12);
  EXPECT_THROW((SmuParams{1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((SmuParams{0.0, -1.0}.validate()), ConfigError);
}

TEST(OracleTest, GeluAndErf) {
  EXPECT_EQ(gelu_plain(0.0), 0.0);
  for (double x = -5.0; x <= 5.0; x += 0.125) {
    ASSERT_NEAR(std::erf(x), erf_series(x), 1e-7) << x;
  }
  EXPECT_NEAR(gelu_plain(1.0), 0.841344746, 1e-9);
}

TEST(OracleTest, Softmax) {
  const std::vector<double> z = {0.0, 0.0};
  EXPECT_EQ(softmax_plain(z), (std::vector<double>{0.5, 0.5}));
  const std::vector<double> v = {1000.0, 1000.0, 1000.0, 1000.0};
  for (double p : softmax_plain(v)) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(OracleTest, SoftmaxStar) {
  const std::vector<double> zeros(4, 0.0);
  for (double p : softmax_star_plain(zeros)) EXPECT_EQ(p, 0.0);
  const std::vector<double> v = {5.0, -5.0};
  const auto p = softmax_star_plain(v);
  EXPECT_NEAR(p[0], 1.0, 1e-4);
  EXPECT_EQ(p[1], 0.0);
}

TEST(OracleTest, LayerNorm) {
  const std::vector<double> x = {1.0, -1.0}, g = {1.0, 1.0}, b = {0.0, 0.0};
  const auto y = layernorm_plain(x, g, b);
  EXPECT_NEAR(y[0], 1.0 / std::sqrt(1.0 + 1e-5), 1e-12);
  EXPECT_NEAR(y[1], -1.0 / std::sqrt(1.0 + 1e-5), 1e-12);
  const std::vector<double> one = {1.0};
  EXPECT_THROW(layernorm_plain(one, one, one), UsageError);
}

TEST(TensorTest, ShapeChecks) {
  TensorShares t{{2, 3}, Shares(6)};
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.last_dim(), 3u);
  EXPECT_NO_THROW(t.check());
  t.data.pop_back();
  EXPECT_THROW(t.check(), UsageError);
  EXPECT_THROW(TensorShares{}.last_dim(), UsageError);
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> xs;
  for (double x = lo; x <= hi + 1e-12; x += step) xs.push_back(x);
  return xs;
}

TEST(SmuSharedTest, GeluGridCalibrated) {
  // Radicands x^2 + 1/2 on [-6, 6] span six binades; the expected exponent
  // covers the top one and six Newton steps reach the bottom.
  const auto xs = grid(-6.0, 6.0, 0.25);
  const auto cfg = rsqrt_at(130, 6);
  const auto y = shared_run(xs, {xs.size()}, [&](Session& s, const TensorShares& t) {
    return smu_shared(s, t, SmuParams::gelu(), cfg);
  });
  for (size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(y[i], smu_plain(xs[i], SmuParams::gelu()), 2e-2) << xs[i];
  }
}

TEST(SmuSharedTest, GeluFourIterationsOnNarrowRange) {
  const auto xs = grid(-3.0, 3.0, 0.25);
  const auto cfg = rsqrt_at(128, 4);
  const auto y = shared_run(xs, {xs.size()}, [&](Session& s, const TensorShares& t) {
    return smu_shared(s, t, SmuParams::gelu(), cfg);
  });
  for (size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(y[i], smu_plain(xs[i], SmuParams::gelu()), 2e-2) << xs[i];
  }
}

TEST(SmuSharedTest, ZeroTensorGivesHalfMu) {
  const std::vector<double> xs(6, 0.0);
  const auto cfg = rsqrt_at(126, 4);
  const auto y = shared_run(xs, {2, 3}, [&](Session& s, const TensorShares& t) {
    return smu_shared(s, t, SmuParams::gelu(), cfg);
  });
  for (double v : y) EXPECT_NEAR(v, 1.0 / std::sqrt(2.0) / 2.0, 1e-2);
}

TEST(SmuSharedTest, MultiplicationCount) {
  const std::vector<double> xs = {0.5, -1.0, 2.0};
  for (int n : {2, 4}) {
    const auto sx = testing::share_all(xs, kCodec, 3);
    auto r = run_two_party(SessionOptions{}, [&](Session& s) {
      const auto before = s.mul_calls();
      smu_shared(s, TensorShares{{3}, sx.of(s.is_server())}, SmuParams::gelu(),
                 rsqrt_at(128, n));
      return s.mul_calls() - before;
    });
    EXPECT_EQ(r.client, static_cast<uint64_t>(2 + 3 * n));
    // x^2, reshare, conversion, 3n Newton products, s * invsqrt.
    EXPECT_EQ(r.rounds(), static_cast<uint64_t>(1 + 1 + 1 + 3 * n + 1));
  }
}

TEST(SoftmaxStarTest, AllZerosRowIsUniform) {
  // Each numerator is the smoothed ReLU at 0, a few fixed-point units; by
  // symmetry every output is the same share of a sum that epsilon nudges
  // below one.
  const std::vector<double> xs(4, 0.0);
  SoftmaxStarConfig cfg;
  cfg.relu = rsqrt_at(111, 4);
  cfg.reciprocal = rsqrt_at(120, 4);
  const auto y = shared_run(xs, {1, 4}, [&](Session& s, const TensorShares& t) {
    return softmax_star_shared(s, t, cfg);
  });
  for (double v : y) {
    EXPECT_NEAR(v, y[0], 4 * kCodec.resolution());
    EXPECT_GT(v, 0.15);
    EXPECT_LE(v, 0.25 + 1e-3);
  }
}

TEST(SoftmaxStarTest, DominantEntry) {
  const std::vector<double> xs = {5.0, -5.0};
  SoftmaxStarConfig cfg;
  cfg.relu = rsqrt_at(131, 6);
  cfg.reciprocal = rsqrt_at(129, 6);
  const auto y = shared_run(xs, {1, 2}, [&](Session& s, const TensorShares& t) {
    return softmax_star_shared(s, t, cfg);
  });
  EXPECT_NEAR(y[0], 1.0, 1e-2);
  EXPECT_NEAR(y[1], 0.0, 1e-2);
}

TEST(SoftmaxStarTest, RowsNormalise) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 1.0);
  const size_t rows = 200, k = 8;
  std::vector<double> xs;
  while (xs.size() < rows * k) {
    std::vector<double> row(k);
    double relu_sum = 0.0;
    for (auto& v : row) relu_sum += std::max(v = nd(rng), 0.0);
    if (relu_sum < 0.25) continue;  // epsilon would dominate the plain target
    xs.insert(xs.end(), row.begin(), row.end());
  }
  SoftmaxStarConfig cfg;
  cfg.relu = rsqrt_at(130, 16);
  cfg.reciprocal = rsqrt_at(129, 16);
  const auto y = shared_run(xs, {rows, k}, [&](Session& s, const TensorShares& t) {
    return softmax_star_shared(s, t, cfg);
  });
  for (size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      EXPECT_GE(y[r * k + j], -0x1p-10);
      EXPECT_LE(y[r * k + j], 1.0 + 0x1p-10);
      sum += y[r * k + j];
    }
    EXPECT_NEAR(sum, 1.0, 0x1p-10) << "row " << r;
  }
}

TEST(LayerNormTest, ConstantInputGivesBeta) {
  const std::vector<double> xs(8, 2.5);
  const std::vector<double> gamma(8, 1.5), beta = {0, 1, 2, 3, -1, -2, 0.5, 4};
  LayerNormConfig cfg;
  // The variance is just epsilon, so the expected exponent is its binade.
  cfg.rsqrt = rsqrt_at(flood::exponent_of(kCodec.decode(kCodec.encode(cfg.eps))), 4);
  const auto y = shared_run(xs, {1, 8}, [&](Session& s, const TensorShares& t) {
    return layernorm_shared(s, t, gamma, beta, cfg);
  });
  for (size_t i = 0; i < 8; ++i) EXPECT_NEAR(y[i], beta[i], 2e-2);
}

TEST(LayerNormTest, PlusMinusOne) {
  const std::vector<double> xs = {1.0, -1.0}, g = {1.0, 1.0}, b = {0.0, 0.0};
  LayerNormConfig cfg;
  cfg.rsqrt = rsqrt_at(127, 4);
  const auto y = shared_run(xs, {1, 2}, [&](Session& s, const TensorShares& t) {
    return layernorm_shared(s, t, g, b, cfg);
  });
  EXPECT_NEAR(y[0], 1.0, 5e-3);
  EXPECT_NEAR(y[1], -1.0, 5e-3);
}

std::vector<double> normal_rows(size_t rows, size_t k, uint64_t seed,
                                double lo_var = 0.0, double hi_var = 1e9) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> xs;
  while (xs.size() < rows * k) {
    std::vector<double> row(k);
    for (auto& v : row) v = nd(rng);
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / k;
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean) / k;
    if (var < lo_var || var >= hi_var) continue;
    xs.insert(xs.end(), row.begin(), row.end());
  }
  return xs;
}

void check_layernorm(const std::vector<double>& xs, size_t rows, size_t k,
                     const LayerNormConfig& cfg) {
  const std::vector<double> g(k, 1.0), b(k, 0.0);
  const auto y = shared_run(xs, {rows, k}, [&](Session& s, const TensorShares& t) {
    return layernorm_shared(s, t, g, b, cfg);
  });
  for (size_t r = 0; r < rows; ++r) {
    const std::span<const double> row(xs.data() + r * k, k);
    const auto want = layernorm_plain(row, g, b, cfg.eps);
    double mean = 0.0, var = 0.0;
    for (size_t j = 0; j < k; ++j) {
      EXPECT_NEAR(y[r * k + j], want[j], 2e-2) << "row " << r;
      mean += y[r * k + j] / k;
    }
    for (size_t j = 0; j < k; ++j) var += (y[r * k + j] - mean) * (y[r * k + j] - mean) / k;
    EXPECT_LE(std::fabs(mean), 1e-2);
    EXPECT_NEAR(var, 1.0, 5e-2);
  }
}

TEST(LayerNormTest, RandomRowsSixIterations) {
  LayerNormConfig cfg;
  cfg.rsqrt = rsqrt_at(127, 6);
  check_layernorm(normal_rows(64, 16, 5), 64, 16, cfg);
}

TEST(LayerNormTest, RandomRowsFourIterationsInsideWindow) {
  // Four steps suffice while the variance stays within the two binades
  // around the expected exponent.
  LayerNormConfig cfg;
  cfg.rsqrt = rsqrt_at(127, 4);
  check_layernorm(normal_rows(64, 16, 6, 0.5, 2.0), 64, 16, cfg);
}

TEST(LayerNormTest, RejectsShortAxis) {
  const std::vector<double> one = {1.0};
  EXPECT_THROW(run_two_party(SessionOptions{},
                             [&](Session& s) {
                               return layernorm_shared(
                                          s, TensorShares{{1}, Shares{0}}, one,
                                          one, LayerNormConfig{})
                                   .data;
                             }),
               UsageError);
}

}  // namespace
}  // namespace rsqrt2pc::nonlinear
