// Copyright 2026 The hpdecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hpdecode/fit.hpp"

#include <gtest/gtest.h>

#include "hpdecode/rng.hpp"

using namespace hpdecode;

namespace {

std::vector<FitPoint> synthetic(double a, double alpha, double b, int t_max) {
    std::vector<FitPoint> pts;
    for (int t = 0; t <= t_max; ++t) {
        pts.push_back({static_cast<double>(t), a * std::exp(-alpha * t) + b, 0.0, 1});
    }
    return pts;
}

}  // namespace

TEST(fit, recovers_table_parameters_exactly) {
    struct Row {
        double a, alpha, b;
    };
    for (const Row& r : {Row{0.7243, 0.167, 0.2757}, Row{0.8483, 0.129, 0.1517}, Row{0.5860, 0.167, 0.4140},
                         Row{0.6794, 0.129, 0.3206}, Row{0.72, 0.167, 0.28}, Row{0.85, 0.129, 0.15}}) {
        const auto fit = fit_exponential(synthetic(r.a, r.alpha, r.b, 12));
        EXPECT_NEAR(fit.a, r.a, 1e-6);
        EXPECT_NEAR(fit.alpha, r.alpha, 1e-6);
        EXPECT_NEAR(fit.b, r.b, 1e-6);
        EXPECT_FALSE(fit.degenerate);
        EXPECT_LT(fit.residual_norm, 1e-8);
    }
}

TEST(fit, growing_and_unordered_data) {
    auto pts = synthetic(-0.5, 0.3, 0.9, 10);
    std::reverse(pts.begin(), pts.end());
    const auto fit = fit_exponential(pts);
    EXPECT_NEAR(fit.a, -0.5, 1e-6);
    EXPECT_NEAR(fit.alpha, 0.3, 1e-6);
    EXPECT_NEAR(fit.b, 0.9, 1e-6);
    EXPECT_EQ(fit.points.front().t, 0.0);
}

TEST(fit, constant_data_is_degenerate) {
    const auto fit = fit_exponential(synthetic(0.0, 0.2, 0.6, 6));
    EXPECT_TRUE(fit.degenerate);
    EXPECT_EQ(fit.a, 0.0);
    EXPECT_EQ(fit.alpha, 0.0);
    EXPECT_NEAR(fit.b, 0.6, 1e-15);
}

TEST(fit, input_validation) {
    EXPECT_THROW(fit_exponential(synthetic(1.0, 0.1, 0.0, 1)), std::invalid_argument);
    std::vector<FitPoint> dup = {{0, 1, 0, 1}, {0, 0.9, 0, 1}, {1, 0.8, 0, 1}, {1, 0.7, 0, 1}};
    EXPECT_THROW(fit_exponential(dup), std::invalid_argument);
    auto bad = synthetic(1.0, 0.1, 0.0, 4);
    bad[2].mean = std::nan("");
    EXPECT_THROW(fit_exponential(bad), std::invalid_argument);
}

TEST(fit, noisy_data_is_deterministic) {
    Rng rng(3);
    auto pts = synthetic(0.7, 0.17, 0.3, 12);
    for (auto& p : pts) {
        p.mean += 0.01 * rng.normal();
    }
    const auto f1 = fit_exponential(pts);
    const auto f2 = fit_exponential(pts);
    EXPECT_EQ(f1.a, f2.a);
    EXPECT_EQ(f1.alpha, f2.alpha);
    EXPECT_NEAR(f1.alpha, 0.17, 0.08);
    EXPECT_NEAR(f1(0.0), f1.a + f1.b, 1e-15);
}

TEST(fit, log_linear_ratio) {
    std::vector<double> t, y;
    for (int k = 0; k <= 6; ++k) {
        t.push_back(k);
        y.push_back(0.01 * std::pow(0.75, k));
    }
    const auto d = fit_log_linear(t, y);
    EXPECT_NEAR(d.ratio, 0.75, 1e-12);
    EXPECT_NEAR(std::exp(d.intercept), 0.01, 1e-12);
    EXPECT_NEAR(d.slope_std_error, 0.0, 1e-10);
    EXPECT_THROW(fit_log_linear({0, 1}, {1.0, -1.0}), std::invalid_argument);
}

TEST(stats, summarize) {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    EXPECT_EQ(s.count, 4u);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(5.0 / 12.0));
    EXPECT_EQ(summarize({}).count, 0u);
    EXPECT_EQ(summarize({0.4}).std_error, 0.0);
}

TEST(stats, standard_error_shrinks_with_sample_size) {
    Rng rng(5);
    auto se = [&rng](std::size_t m) {
        std::vector<double> v(m);
        for (auto& x : v) {
            x = 0.5 + 0.1 * rng.normal();
        }
        return summarize(v).std_error;
    };
    const double s100 = se(100), s10000 = se(10000);
    EXPECT_NEAR(s100 / s10000, 10.0, 3.0);
}
