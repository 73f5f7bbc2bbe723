// Copyright 2026 The cvfaith Authors
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

#include "cvfaith/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cvfaith::special {

namespace {

constexpr double kRescaleThreshold = 1e200;

} // namespace

double ScaledValue::value() const {
    if (mantissa == 0.0) {
        return 0.0;
    }
    return mantissa * std::exp(log_scale);
}

std::vector<ScaledValue> assoc_laguerre_sequence(std::size_t count, std::size_t k, double x) {
    std::vector<ScaledValue> out;
    out.reserve(count);
    if (count == 0) {
        return out;
    }
    const double kd = static_cast<double>(k);
    double prev = 0.0;
    double cur = 1.0;
    double scale = 0.0;
    out.push_back({cur, scale});
    if (count == 1) {
        return out;
    }
    prev = cur;
    cur = 1.0 + kd - x;
    out.push_back({cur, scale});
    for (std::size_t n = 1; n + 1 < count; ++n) {
        const double nd = static_cast<double>(n);
        const double next = ((2.0 * nd + 1.0 + kd - x) * cur - (nd + kd) * prev) / (nd + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleThreshold) {
            cur /= kRescaleThreshold;
            prev /= kRescaleThreshold;
            scale += std::log(kRescaleThreshold);
        }
        out.push_back({cur, scale});
    }
    return out;
}

double assoc_laguerre(std::size_t n, std::size_t k, double x) {
    return assoc_laguerre_sequence(n + 1, k, x).back().value();
}

double bessel_i0(double x) {
    const double ax = std::abs(x);
    if (ax < 15.0) {
        const double q = 0.25 * ax * ax;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < 1e-17 * sum) {
                break;
            }
        }
        return sum;
    }
    // Asymptotic series; stop at the smallest term.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd / (8.0 * k * ax);
        if (next >= term || next < 1e-17 * sum) {
            break;
        }
        term = next;
        sum += term;
    }
    return std::exp(ax) / std::sqrt(2.0 * std::numbers::pi * ax) * sum;
}

QuadratureRule gauss_laguerre(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("gauss_laguerre: need at least one node");
    }
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (std::size_t i = 0; i < n; ++i) {
        diag(static_cast<Eigen::Index>(i)) = 2.0 * static_cast<double>(i) + 1.0;
        if (i + 1 < n) {
            sub(static_cast<Eigen::Index>(i)) = static_cast<double>(i + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss_laguerre: eigenvalue solver failed");
    }

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        for (int iter = 0; iter < 8; ++iter) {
            const auto seq = assoc_laguerre_sequence(n + 1, 0, x);
            const double ln = seq[n].mantissa;
            const double lnm1 = seq[n - 1].mantissa * std::exp(seq[n - 1].log_scale - seq[n].log_scale);
            const double denom = nd * (ln - lnm1);
            if (denom == 0.0) {
                break;
            }
            const double step = x * ln / denom;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::abs(x)) {
                break;
            }
        }
        const auto seq = assoc_laguerre_sequence(n + 2, 0, x);
        const auto &lnp1 = seq[n + 1];
        const double log_w = std::log(x) - 2.0 * std::log(nd + 1.0) -
                             2.0 * (std::log(std::abs(lnp1.mantissa)) + lnp1.log_scale);
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(log_w);
    }
    return rule;
}

} // namespace cvfaith::special
