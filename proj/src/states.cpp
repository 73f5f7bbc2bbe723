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

#include "cvfaith/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvfaith/special_functions.hpp"

namespace cvfaith {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

constexpr double kTargetDeficit = 1e-10;

void require_unit_interval(double lambda, const char *what) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": lambda must lie in [0, 1), got " + std::to_string(lambda));
    }
}

double hermiticity_error(const Matrix &m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

SingleModeState::SingleModeState(FockOperator carrier, double nominal_trace_deficit)
    : carrier_(std::move(carrier)), deficit_(nominal_trace_deficit) {
    if (hermiticity_error(carrier_.matrix()) > 1e-12) {
        throw std::invalid_argument("SingleModeState: carrier is not Hermitian");
    }
    const cplx tr = carrier_.matrix().trace();
    if (std::abs(tr.imag()) > 1e-12 || std::abs(1.0 - tr.real()) > deficit_ + 1e-10) {
        throw std::invalid_argument("SingleModeState: trace " + std::to_string(tr.real()) +
                                    " inconsistent with deficit " + std::to_string(deficit_));
    }
}

SingleModeState vacuum_state(std::size_t d) { return SingleModeState(fock_projector(0, d), 0.0); }

SingleModeState fock_state(std::size_t n, std::size_t d) { return SingleModeState(fock_projector(n, d), 0.0); }

SingleModeState thermal_state(double mean_photons, std::size_t d) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
        throw std::invalid_argument("thermal_state: mean photon number must be finite and >= 0");
    }
    const double ratio = mean_photons / (1.0 + mean_photons);
    FockOperator p = number_power(ratio, d);
    return SingleModeState(FockOperator(p.matrix() / (1.0 + mean_photons)), std::pow(ratio, static_cast<double>(d)));
}

SingleModeState coherent_state(cplx alpha, std::size_t d) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("coherent_state: non-finite amplitude");
    }
    Vector c(idx(d));
    cplx term = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < d; ++n) {
        if (n > 0) {
            term *= alpha / std::sqrt(static_cast<double>(n));
        }
        c(idx(n)) = term;
    }
    const double kept = c.squaredNorm();
    return SingleModeState(FockOperator(c * c.adjoint()), std::max(0.0, 1.0 - kept));
}

DensityOperator::DensityOperator(BipartiteOperator carrier, double nominal_trace_deficit)
    : carrier_(std::move(carrier)), deficit_(nominal_trace_deficit) {
    if (!(deficit_ >= 0.0)) {
        throw std::invalid_argument("DensityOperator: negative trace deficit");
    }
    const double scale = std::max(1.0, carrier_.matrix().cwiseAbs().maxCoeff());
    if (hermiticity_error(carrier_.matrix()) > 1e-12 * scale) {
        throw std::invalid_argument("DensityOperator: carrier is not Hermitian");
    }
    const cplx tr = carrier_.trace();
    if (std::abs(tr.imag()) > 1e-12 || std::abs(1.0 - tr.real()) > deficit_ + 1e-10) {
        throw std::invalid_argument("DensityOperator: trace " + std::to_string(tr.real()) +
                                    " inconsistent with deficit " + std::to_string(deficit_));
    }
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(carrier_.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double GaussianMoments::conjugacy_violation() const {
    double v = 0.0;
    v = std::max(v, std::abs(a_bdag - std::conj(adag_b)));
    v = std::max(v, std::abs(adag_bdag - std::conj(a_b)));
    v = std::max(v, std::abs(adag_a.imag()));
    v = std::max(v, std::abs(bdag_b.imag()));
    v = std::max(v, -adag_a.real());
    v = std::max(v, -bdag_b.real());
    return v;
}

DensityOperator twin_beam(double lambda, std::size_t d) {
    require_unit_interval(lambda, "twin_beam");
    if (d < 2) {
        throw std::invalid_argument("twin_beam: truncation dimension must be at least 2");
    }
    Vector psi = Vector::Zero(idx(d * d));
    const double norm = std::sqrt(1.0 - lambda * lambda);
    double p = 1.0;
    for (std::size_t n = 0; n < d; ++n) {
        psi(idx(n * d + n)) = norm * p;
        p *= lambda;
    }
    return DensityOperator(BipartiteOperator(d, psi * psi.adjoint()), std::pow(lambda, 2.0 * static_cast<double>(d)));
}

double split_thermal_trace_deficit(double sigma2, std::size_t d) {
    if (sigma2 == 0.0) {
        return 0.0;
    }
    const double total_mean = 2.0 * sigma2;
    const double log_ratio = std::log(total_mean / (1.0 + total_mean));
    const double log_norm = -std::log1p(total_mean);
    double kept = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            const double k = static_cast<double>(n + m);
            const double log_binom = std::lgamma(k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m + 1.0);
            kept += std::exp(log_norm + k * log_ratio + log_binom - k * std::numbers::ln2);
        }
    }
    return std::max(0.0, 1.0 - kept);
}

DensityOperator split_thermal(double sigma2, std::size_t d, std::size_t quad_points) {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("split_thermal: variance must be finite and >= 0, got " + std::to_string(sigma2));
    }
    if (d < 2) {
        throw std::invalid_argument("split_thermal: truncation dimension must be at least 2");
    }
    if (sigma2 == 0.0) {
        return product_state(vacuum_state(d), vacuum_state(d));
    }
    const std::size_t needed = 2 * d - 1;
    if (quad_points == 0) {
        quad_points = std::max<std::size_t>(64, 2 * d);
    }
    if (quad_points < needed) {
        throw std::invalid_argument("split_thermal: " + std::to_string(quad_points) +
                                    " quadrature points cannot integrate truncation " + std::to_string(d) +
                                    " exactly; need at least " + std::to_string(needed));
    }

    const double c = 1.0 + 2.0 * sigma2;
    const auto radial = special::gauss_laguerre(quad_points);
    const std::size_t angular = quad_points;
    const std::size_t nodes = radial.nodes.size() * angular;

    // Columns are sqrt(weight) |g>|g> with unnormalized coherent amplitudes
    // g^n / sqrt(n!); the Gaussian factors live in the Laguerre weight.
    Matrix columns(idx(d * d), idx(nodes));
    Vector amp(idx(d));
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double radius = std::sqrt(sigma2 * radial.nodes[i] / c);
        const double weight = std::sqrt(radial.weights[i] / (c * static_cast<double>(angular)));
        for (std::size_t j = 0; j < angular; ++j) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angular);
            const cplx g = std::polar(radius, phi);
            amp(0) = 1.0;
            for (std::size_t n = 1; n < d; ++n) {
                amp(idx(n)) = amp(idx(n - 1)) * g / std::sqrt(static_cast<double>(n));
            }
            auto col = columns.col(idx(i * angular + j));
            for (std::size_t n = 0; n < d; ++n) {
                col.segment(idx(n * d), idx(d)) = (weight * amp(idx(n))) * amp;
            }
        }
    }
    Matrix r = Matrix::Zero(idx(d * d), idx(d * d));
    r.selfadjointView<Eigen::Lower>().rankUpdate(columns);
    Matrix full = r.selfadjointView<Eigen::Lower>();
    return DensityOperator(BipartiteOperator(d, std::move(full)), split_thermal_trace_deficit(sigma2, d));
}

DensityOperator product_state(const SingleModeState &rho, const SingleModeState &sigma) {
    const double deficit =
        1.0 - (1.0 - rho.nominal_trace_deficit()) * (1.0 - sigma.nominal_trace_deficit());
    return DensityOperator(tensor(rho.carrier(), sigma.carrier()), std::max(0.0, deficit));
}

DensityOperator correlated_fock(double lambda, std::size_t d) {
    require_unit_interval(lambda, "correlated_fock");
    if (d < 2) {
        throw std::invalid_argument("correlated_fock: truncation dimension must be at least 2");
    }
    Matrix r = Matrix::Zero(idx(d * d), idx(d * d));
    double p = 1.0 - lambda;
    for (std::size_t n = 0; n < d; ++n) {
        r(idx(n * d + n), idx(n * d + n)) = p;
        p *= lambda;
    }
    return DensityOperator(BipartiteOperator(d, std::move(r)), std::pow(lambda, static_cast<double>(d)));
}

GaussianMoments moments_of(const BipartiteOperator &r) {
    const std::size_t d = r.dim();
    const FockOperator a = annihilator(d);
    const FockOperator ad = creator(d);
    const FockOperator id = identity(d);
    const auto ev = [&](const FockOperator &x, const FockOperator &y) { return trace_with_product(r, x, y); };

    const cplx ma = ev(a, id);
    const cplx mb = ev(id, a);
    const cplx mad = ev(ad, id);
    const cplx mbd = ev(id, ad);

    GaussianMoments g{};
    g.mean_a = ma;
    g.mean_b = mb;
    g.adag_bdag = ev(ad, ad) - mad * mbd;
    g.a_b = ev(a, a) - ma * mb;
    g.adag_b = ev(ad, a) - mad * mb;
    g.a_bdag = ev(a, ad) - ma * mbd;
    g.adag_a = ev(ad * a, id) - mad * ma;
    g.bdag_b = ev(id, ad * a) - mbd * mb;
    g.a_a = ev(a * a, id) - ma * ma;
    g.b_b = ev(id, a * a) - mb * mb;
    return g;
}

double total_photon_number(const BipartiteOperator &r) {
    const std::size_t d = r.dim();
    const FockOperator n = number_operator(d);
    const FockOperator id = identity(d);
    return (trace_with_product(r, n, id) + trace_with_product(r, id, n)).real();
}

std::size_t default_dim_twin_beam(double lambda) {
    require_unit_interval(lambda, "default_dim_twin_beam");
    if (lambda == 0.0) {
        return 2;
    }
    const double d = std::log(kTargetDeficit) / (2.0 * std::log(lambda));
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(d)));
}

std::size_t default_dim_split_thermal(double sigma2) {
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("default_dim_split_thermal: variance must be >= 0");
    }
    if (sigma2 == 0.0) {
        return 2;
    }
    // Each marginal is thermal with mean sigma2; bound both tails.
    const double ratio = sigma2 / (1.0 + sigma2);
    const double tail = std::log(0.5 * kTargetDeficit) / std::log(ratio);
    const double d = std::max(40.0 * sigma2, tail);
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(d)));
}

std::size_t default_dim_correlated_fock(double lambda) {
    require_unit_interval(lambda, "default_dim_correlated_fock");
    if (lambda == 0.0) {
        return 2;
    }
    const double d = std::log(kTargetDeficit) / std::log(lambda);
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(d)));
}

} // namespace cvfaith
