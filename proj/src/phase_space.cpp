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

#include "cvfaith/phase_space.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "cvfaith/parallel.hpp"
#include "cvfaith/special_functions.hpp"

namespace cvfaith {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

constexpr double kWignerPrefactor = 4.0 / (std::numbers::pi * std::numbers::pi);

void require_finite(cplx z, const char *what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument(std::string(what) + ": non-finite phase-space argument");
    }
}

void require_unit_interval(double lambda, const char *what) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": lambda must lie in [0, 1), got " + std::to_string(lambda));
    }
}

void require_variance(double sigma2, const char *what) {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument(std::string(what) + ": variance must be finite and >= 0");
    }
}

// Swaps the inner indices: out[(n n'), (m m')] = in[(n m), (n' m')]. The map
// is its own inverse.
Matrix reshuffle(const Matrix &in, std::size_t d) {
    Matrix out(in.rows(), in.cols());
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            for (std::size_t n2 = 0; n2 < d; ++n2) {
                for (std::size_t m2 = 0; m2 < d; ++m2) {
                    out(idx(n * d + n2), idx(m * d + m2)) = in(idx(n * d + m), idx(n2 * d + m2));
                }
            }
        }
    }
    return out;
}

using Kernel = std::function<FockOperator(cplx)>;

// Row i holds kernel(points[i]) flattened row-major, transposed first if asked.
Matrix kernel_rows(const std::vector<cplx> &points, std::size_t d, const Kernel &kernel, bool transpose) {
    Matrix rows(idx(points.size()), idx(d * d));
    parallel_for(points.size(), [&](std::size_t i) {
        const FockOperator k = kernel(points[i]);
        for (std::size_t n = 0; n < d; ++n) {
            for (std::size_t n2 = 0; n2 < d; ++n2) {
                rows(idx(i), idx(n * d + n2)) = transpose ? k(idx(n2), idx(n)) : k(idx(n), idx(n2));
            }
        }
    });
    return rows;
}

Kernel wigner_kernel(std::size_t d) {
    return [d](cplx z) { return displaced_parity(2.0 * z, d); };
}

Kernel characteristic_kernel(std::size_t d) {
    return [d](cplx z) { return displacement(z, d); };
}

PhaseSpaceGrid evaluate_grid(const BipartiteOperator &r, const std::vector<cplx> &alphas,
                             const std::vector<cplx> &betas, GridKind kind) {
    if (alphas.empty() || betas.empty()) {
        throw std::invalid_argument("phase-space grid must contain at least one alpha and one beta node");
    }
    for (const auto &z : alphas) {
        require_finite(z, "grid");
    }
    for (const auto &z : betas) {
        require_finite(z, "grid");
    }
    const std::size_t d = r.dim();
    const Kernel kernel = kind == GridKind::Wigner ? wigner_kernel(d) : characteristic_kernel(d);
    const Matrix left = kernel_rows(alphas, d, kernel, true);
    const Matrix right = kernel_rows(betas, d, kernel, true);
    const Matrix shuffled = reshuffle(r.matrix(), d);
    Matrix values = (left * shuffled) * right.transpose();
    if (kind == GridKind::Wigner) {
        values *= kWignerPrefactor;
    }
    return PhaseSpaceGrid{kind, alphas, betas, std::move(values), std::nullopt, std::nullopt};
}

} // namespace

std::vector<cplx> SquareAxis::nodes() const {
    if (points == 0 || !(extent > 0.0)) {
        throw std::invalid_argument("SquareAxis: need positive extent and at least one point");
    }
    const double h = spacing();
    std::vector<cplx> out;
    out.reserve(points * points);
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t j = 0; j < points; ++j) {
            out.emplace_back(-extent + (static_cast<double>(i) + 0.5) * h, -extent + (static_cast<double>(j) + 0.5) * h);
        }
    }
    return out;
}

cplx PhaseSpaceGrid::integral() const {
    if (!alpha_axis || !beta_axis) {
        throw GridBoundsError("grid integral requires uniform square axes");
    }
    return values.sum() * alpha_axis->cell_area() * beta_axis->cell_area();
}

double PhaseSpaceGrid::integral_of_square() const {
    if (!alpha_axis || !beta_axis) {
        throw GridBoundsError("grid integral requires uniform square axes");
    }
    return values.cwiseAbs2().sum() * alpha_axis->cell_area() * beta_axis->cell_area();
}

double reliable_radius(std::size_t d) { return 0.5 * std::sqrt(static_cast<double>(d)); }

WignerSample wigner_sample(const BipartiteOperator &r, cplx alpha, cplx beta) {
    require_finite(alpha, "wigner_point");
    require_finite(beta, "wigner_point");
    const std::size_t d = r.dim();
    const cplx w = kWignerPrefactor *
                   trace_with_product(r, displaced_parity(2.0 * alpha, d), displaced_parity(2.0 * beta, d));
    const double limit = reliable_radius(d);
    return WignerSample{w.real(), w.imag(), std::abs(alpha) > limit || std::abs(beta) > limit};
}

double wigner_point(const BipartiteOperator &r, cplx alpha, cplx beta) { return wigner_sample(r, alpha, beta).value; }

cplx characteristic_point(const BipartiteOperator &r, cplx alpha, cplx beta) {
    require_finite(alpha, "characteristic_point");
    require_finite(beta, "characteristic_point");
    const std::size_t d = r.dim();
    return trace_with_product(r, displacement(alpha, d), displacement(beta, d));
}

PhaseSpaceGrid wigner_grid(const BipartiteOperator &r, const std::vector<cplx> &alphas,
                           const std::vector<cplx> &betas) {
    return evaluate_grid(r, alphas, betas, GridKind::Wigner);
}

PhaseSpaceGrid wigner_grid(const BipartiteOperator &r, const SquareAxis &alpha_axis, const SquareAxis &beta_axis) {
    PhaseSpaceGrid g = evaluate_grid(r, alpha_axis.nodes(), beta_axis.nodes(), GridKind::Wigner);
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    return g;
}

PhaseSpaceGrid characteristic_grid(const BipartiteOperator &r, const std::vector<cplx> &alphas,
                                   const std::vector<cplx> &betas) {
    return evaluate_grid(r, alphas, betas, GridKind::Characteristic);
}

PhaseSpaceGrid characteristic_grid(const BipartiteOperator &r, const SquareAxis &alpha_axis,
                                   const SquareAxis &beta_axis) {
    PhaseSpaceGrid g = evaluate_grid(r, alpha_axis.nodes(), beta_axis.nodes(), GridKind::Characteristic);
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    return g;
}

void require_reconstruction_grid(const PhaseSpaceGrid &grid, std::size_t d) {
    if (grid.kind != GridKind::Wigner) {
        throw std::invalid_argument("state_from_wigner: grid must hold Wigner values");
    }
    if (!grid.alpha_axis || !grid.beta_axis) {
        throw GridBoundsError("state_from_wigner: grid must be a uniform square grid on both planes");
    }
    if (d < 2) {
        throw std::invalid_argument("state_from_wigner: truncation dimension must be at least 2");
    }
    const double min_extent = std::sqrt(static_cast<double>(d));
    for (const SquareAxis *axis : {&*grid.alpha_axis, &*grid.beta_axis}) {
        const double max_spacing = std::numbers::pi / (4.0 * axis->extent);
        if (axis->extent < min_extent) {
            throw GridBoundsError("state_from_wigner: grid extent " + std::to_string(axis->extent) +
                                  " below sqrt(d) = " + std::to_string(min_extent));
        }
        if (axis->spacing() > max_spacing) {
            throw GridBoundsError("state_from_wigner: grid spacing " + std::to_string(axis->spacing()) +
                                  " exceeds pi/(4 extent) = " + std::to_string(max_spacing));
        }
    }
    if (grid.values.rows() != idx(grid.alphas.size()) || grid.values.cols() != idx(grid.betas.size())) {
        throw std::invalid_argument("state_from_wigner: value matrix does not match the node lists");
    }
}

BipartiteOperator state_from_wigner(const PhaseSpaceGrid &grid, std::size_t d) {
    require_reconstruction_grid(grid, d);
    const Kernel kernel = wigner_kernel(d);
    const Matrix left = kernel_rows(grid.alphas, d, kernel, false);
    const Matrix right = kernel_rows(grid.betas, d, kernel, false);
    const double weight = 4.0 * grid.alpha_axis->cell_area() * grid.beta_axis->cell_area();
    const Matrix shuffled = weight * (left.transpose() * grid.values) * right;
    return BipartiteOperator(d, reshuffle(shuffled, d));
}

cplx characteristic_from_wigner(const PhaseSpaceGrid &wigner, cplx xi, cplx eta) {
    if (wigner.kind != GridKind::Wigner || !wigner.alpha_axis || !wigner.beta_axis) {
        throw GridBoundsError("characteristic_from_wigner: needs a Wigner grid on uniform square axes");
    }
    Vector left(idx(wigner.alphas.size()));
    for (std::size_t i = 0; i < wigner.alphas.size(); ++i) {
        const cplx a = wigner.alphas[i];
        left(idx(i)) = std::exp(xi * std::conj(a) - std::conj(xi) * a);
    }
    Vector right(idx(wigner.betas.size()));
    for (std::size_t j = 0; j < wigner.betas.size(); ++j) {
        const cplx b = wigner.betas[j];
        right(idx(j)) = std::exp(eta * std::conj(b) - std::conj(eta) * b);
    }
    const cplx sum = (left.transpose() * wigner.values * right).value();
    return sum * wigner.alpha_axis->cell_area() * wigner.beta_axis->cell_area();
}

double analytic_wigner_twin_beam(double lambda, cplx alpha, cplx beta) {
    require_unit_interval(lambda, "analytic_wigner_twin_beam");
    const double l2 = lambda * lambda;
    const double radial = -2.0 * (1.0 + l2) / (1.0 - l2) * (std::norm(alpha) + std::norm(beta));
    const double cross = 4.0 * lambda / (1.0 - l2) * 2.0 * (alpha * beta).real();
    return kWignerPrefactor * std::exp(radial + cross);
}

double analytic_wigner_split_thermal(double sigma2, cplx alpha, cplx beta) {
    require_variance(sigma2, "analytic_wigner_split_thermal");
    const double q = 1.0 + 4.0 * sigma2;
    const double radial = -2.0 * (1.0 + 2.0 * sigma2) / q * (std::norm(alpha) + std::norm(beta));
    const double cross = 4.0 * sigma2 / q * 2.0 * (alpha * std::conj(beta)).real();
    return kWignerPrefactor / q * std::exp(radial + cross);
}

double analytic_wigner_split_thermal_quoted(double sigma2, cplx alpha, cplx beta) {
    require_variance(sigma2, "analytic_wigner_split_thermal_quoted");
    const double q = 1.0 + 2.0 * sigma2;
    const double radial = -2.0 / q * (std::norm(alpha) + std::norm(beta));
    const double cross = 4.0 * sigma2 / q * 2.0 * (alpha * std::conj(beta)).real();
    return kWignerPrefactor / q * std::exp(radial + cross);
}

double analytic_wigner_correlated_fock(double lambda, cplx alpha, cplx beta) {
    require_unit_interval(lambda, "analytic_wigner_correlated_fock");
    const double radial = -2.0 * (1.0 + lambda) / (1.0 - lambda) * (std::norm(alpha) + std::norm(beta));
    const double arg = 8.0 * std::sqrt(lambda) / (1.0 - lambda) * std::abs(alpha) * std::abs(beta);
    return kWignerPrefactor * std::exp(radial) * special::bessel_i0(arg);
}

double gaussian_integral_identity_check(double sigma2, cplx alpha, cplx gamma, std::optional<SquareAxis> grid) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("gaussian_integral_identity_check: variance must be positive");
    }
    require_finite(alpha, "gaussian_integral_identity_check");
    require_finite(gamma, "gaussian_integral_identity_check");
    const double sigma = std::sqrt(sigma2);
    if (!grid) {
        const double extent = 8.0 * sigma + 0.5 * sigma2 * std::abs(alpha - gamma);
        const auto points = static_cast<std::size_t>(std::ceil(2.0 * extent / (sigma / 8.0)));
        grid = SquareAxis{extent, points};
    }
    if (grid->extent < 6.0 * sigma) {
        throw GridBoundsError("gaussian_integral_identity_check: grid extent " + std::to_string(grid->extent) +
                              " below 6 sigma = " + std::to_string(6.0 * sigma));
    }
    if (grid->points == 0 || grid->spacing() > 0.5 * sigma) {
        throw GridBoundsError("gaussian_integral_identity_check: grid spacing must not exceed sigma/2");
    }
    cplx sum = 0.0;
    const cplx ac = std::conj(alpha);
    for (const cplx b : grid->nodes()) {
        sum += std::exp(-std::norm(b) / sigma2 + b * ac - std::conj(b) * gamma);
    }
    sum *= grid->cell_area();
    const cplx exact = std::numbers::pi * sigma2 * std::exp(-sigma2 * ac * gamma);
    return std::abs(sum - exact);
}

} // namespace cvfaith
