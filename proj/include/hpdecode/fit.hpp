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

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

namespace hpdecode {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    /// Unbiased sample variance; zero for a single value.
    double variance = 0.0;
    double std_error = 0.0;
};

inline Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(s.count);
    if (s.count > 1) {
        double m2 = 0.0;
        for (double v : values) {
            m2 += (v - s.mean) * (v - s.mean);
        }
        s.variance = m2 / static_cast<double>(s.count - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
    }
    return s;
}

struct FitPoint {
    double t = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// y(t) = a exp(-alpha t) + b.
struct FitResult {
    double a = 0.0;
    double alpha = 0.0;
    double b = 0.0;
    double residual_norm = 0.0;
    bool degenerate = false;
    int iterations = 0;
    std::vector<FitPoint> points;

    double operator()(double t) const { return a * std::exp(-alpha * t) + b; }
};

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct ExpDecayFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<FitPoint>* pts;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(pts->size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
        for (std::size_t i = 0; i < pts->size(); ++i) {
            const auto& p = (*pts)[i];
            fvec(static_cast<Eigen::Index>(i)) = x(0) * std::exp(-x(1) * p.t) + x(2) - p.mean;
        }
        return 0;
    }

    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
        for (std::size_t i = 0; i < pts->size(); ++i) {
            const double t = (*pts)[i].t;
            const double e = std::exp(-x(1) * t);
            const auto r = static_cast<Eigen::Index>(i);
            jac(r, 0) = e;
            jac(r, 1) = -x(0) * t * e;
            jac(r, 2) = 1.0;
        }
        return 0;
    }
};

inline const char* lm_status_name(Eigen::LevenbergMarquardtSpace::Status s) {
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (s) {
        case NotStarted: return "not started";
        case Running: return "running";
        case ImproperInputParameters: return "improper input parameters";
        case RelativeReductionTooSmall: return "relative reduction below tolerance";
        case RelativeErrorTooSmall: return "relative error below tolerance";
        case RelativeErrorAndReductionTooSmall: return "relative error and reduction below tolerance";
        case CosinusTooSmall: return "gradient orthogonal to residuals";
        case TooManyFunctionEvaluation: return "iteration cap reached";
        case FtolTooSmall: return "ftol too small";
        case XtolTooSmall: return "xtol too small";
        case GtolTooSmall: return "gtol too small";
        case UserAsked: return "stopped by user";
    }
    return "unknown";
}

}  // namespace detail

/// Unweighted least squares for a exp(-alpha t) + b, started from
/// a = y(t_min) - y(t_max), b = y(t_max), alpha = 0.15. Constant data returns
/// the degenerate fit a = 0, b = mean, alpha = 0.
inline FitResult fit_exponential(std::vector<FitPoint> points, int max_evaluations = 10000, double tol = 1e-10) {
    std::set<double> distinct;
    for (const auto& p : points) {
        if (!std::isfinite(p.t) || !std::isfinite(p.mean)) {
            throw std::invalid_argument("fit_exponential: non-finite data point");
        }
        distinct.insert(p.t);
    }
    if (distinct.size() < 3) {
        throw std::invalid_argument("fit_exponential: need at least 3 distinct t values");
    }
    std::stable_sort(points.begin(), points.end(), [](const FitPoint& x, const FitPoint& y) { return x.t < y.t; });
    FitResult out;
    out.points = points;
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const FitPoint& x, const FitPoint& y) { return x.mean < y.mean; });
    if (hi->mean - lo->mean <= 1e-14 * std::max(1.0, std::abs(hi->mean))) {
        double mean = 0.0;
        for (const auto& p : points) {
            mean += p.mean;
        }
        out.b = mean / static_cast<double>(points.size());
        out.degenerate = true;
        return out;
    }
    detail::ExpDecayFunctor f{&out.points};
    Eigen::VectorXd x(3);
    x << points.front().mean - points.back().mean, 0.15, points.back().mean;
    Eigen::LevenbergMarquardt<detail::ExpDecayFunctor> lm(f);
    lm.parameters.maxfev = max_evaluations;
    lm.parameters.xtol = tol;
    lm.parameters.ftol = tol;
    const auto status = lm.minimize(x);
    using namespace Eigen::LevenbergMarquardtSpace;
    const bool ok = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                    status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                    status == XtolTooSmall || status == FtolTooSmall || status == GtolTooSmall;
    Eigen::VectorXd r(points.size());
    f(x, r);
    if (!ok || !x.allFinite()) {
        throw FitError(std::string("fit_exponential: ") + detail::lm_status_name(status) + " after " +
                       std::to_string(lm.nfev) + " evaluations (a=" + std::to_string(x(0)) +
                       ", alpha=" + std::to_string(x(1)) + ", b=" + std::to_string(x(2)) +
                       ", residual=" + std::to_string(r.norm()) + ")");
    }
    out.a = x(0);
    out.alpha = x(1);
    out.b = x(2);
    out.residual_norm = r.norm();
    out.iterations = static_cast<int>(lm.iter);
    return out;
}

/// log y = intercept + t log(ratio), fit by ordinary least squares.
struct DecayRatio {
    double ratio = 0.0;
    double slope = 0.0;
    double slope_std_error = 0.0;
    double intercept = 0.0;
};

inline DecayRatio fit_log_linear(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) {
        throw std::invalid_argument("fit_log_linear: need at least two (t, y) pairs");
    }
    const std::size_t m = t.size();
    Eigen::MatrixXd design(m, 2);
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(y[i] > 0.0)) {
            throw std::invalid_argument("fit_log_linear: values must be positive");
        }
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design(static_cast<Eigen::Index>(i), 1) = t[i];
        rhs(static_cast<Eigen::Index>(i)) = std::log(y[i]);
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    DecayRatio out;
    out.intercept = coef(0);
    out.slope = coef(1);
    out.ratio = std::exp(out.slope);
    if (m > 2) {
        const double sse = (design * coef - rhs).squaredNorm();
        const Eigen::Matrix2d cov = (design.transpose() * design).inverse() * (sse / static_cast<double>(m - 2));
        out.slope_std_error = std::sqrt(cov(1, 1));
    }
    return out;
}

}  // namespace hpdecode
