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

#ifndef CVFAITH_PHASE_SPACE_HPP
#define CVFAITH_PHASE_SPACE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvfaith/fock.hpp"

namespace cvfaith {

/// Raised when a grid is too coarse or too narrow for the requested operation.
class GridBoundsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Midpoint nodes on the square [-extent, extent]^2 of the complex plane,
/// `points` per real axis.
struct SquareAxis {
    double extent;
    std::size_t points;

    double spacing() const { return 2.0 * extent / static_cast<double>(points); }
    double cell_area() const { return spacing() * spacing(); }
    /// Node (i, j) sits at index i * points + j, real part from i.
    std::vector<cplx> nodes() const;
};

enum class GridKind { Wigner, Characteristic };

struct PhaseSpaceGrid {
    GridKind kind;
    std::vector<cplx> alphas;
    std::vector<cplx> betas;
    Matrix values; // (alpha index, beta index)
    std::optional<SquareAxis> alpha_axis;
    std::optional<SquareAxis> beta_axis;

    /// Midpoint-rule integral of the values; needs both axes.
    cplx integral() const;
    /// Midpoint-rule integral of |values|^2; needs both axes.
    double integral_of_square() const;
};

struct WignerSample {
    double value;
    double imag_residual;
    bool outside_reliable_region;
};

/// |alpha| up to which a truncation d reproduces phase-space features reliably.
double reliable_radius(std::size_t d);

/// W(alpha, beta) = (4/pi^2) Tr[R (D(2a)(-1)^N (x) D(2b)(-1)^N)].
WignerSample wigner_sample(const BipartiteOperator &r, cplx alpha, cplx beta);
double wigner_point(const BipartiteOperator &r, cplx alpha, cplx beta);

/// Gamma(alpha, beta) = Tr[R D(alpha) (x) D(beta)].
cplx characteristic_point(const BipartiteOperator &r, cplx alpha, cplx beta);

// Grid evaluation contracts R once per alpha node, then once more against
// all beta nodes in a single product; results do not depend on thread count.
PhaseSpaceGrid wigner_grid(const BipartiteOperator &r, const std::vector<cplx> &alphas,
                           const std::vector<cplx> &betas);
PhaseSpaceGrid wigner_grid(const BipartiteOperator &r, const SquareAxis &alpha_axis, const SquareAxis &beta_axis);
PhaseSpaceGrid characteristic_grid(const BipartiteOperator &r, const std::vector<cplx> &alphas,
                                   const std::vector<cplx> &betas);
PhaseSpaceGrid characteristic_grid(const BipartiteOperator &r, const SquareAxis &alpha_axis,
                                   const SquareAxis &beta_axis);

/// Throws GridBoundsError unless the Wigner grid has spacing <= pi/(4 extent)
/// and extent >= sqrt(d) on both planes.
void require_reconstruction_grid(const PhaseSpaceGrid &grid, std::size_t d);

/// R = 4 int int W D(2a)(-1)^N (x) D(2b)(-1)^N by the midpoint rule.
BipartiteOperator state_from_wigner(const PhaseSpaceGrid &grid, std::size_t d);

/// int int W(a, b) exp(xi a^* - xi^* a) exp(eta b^* - eta^* b), the
/// characteristic function recovered from a Wigner grid.
cplx characteristic_from_wigner(const PhaseSpaceGrid &wigner, cplx xi, cplx eta);

double analytic_wigner_twin_beam(double lambda, cplx alpha, cplx beta);

/// Wigner function of split_thermal(sigma2), obtained by averaging the
/// coherent-state Wigner product over the Gaussian mixing weight:
/// 4/(pi^2 (1+4s)) exp[-2(1+2s)/(1+4s)(|a|^2+|b|^2) + 4s/(1+4s)(a b^* + a^* b)].
double analytic_wigner_split_thermal(double sigma2, cplx alpha, cplx beta);

/// The commonly quoted closed form
/// 4/(pi^2 (1+2s)) exp[-2/(1+2s)(|a|^2+|b|^2) + 4s/(1+2s)(a b^* + a^* b)].
/// It integrates to 1/(1 - 2s) and does not describe split_thermal(s); kept
/// for comparison only.
double analytic_wigner_split_thermal_quoted(double sigma2, cplx alpha, cplx beta);

double analytic_wigner_correlated_fock(double lambda, cplx alpha, cplx beta);

/// |int d^2b exp(-|b|^2/s) exp(b a^* - b^* g) - pi s exp(-s a^* g)| on a
/// midpoint grid. Without an explicit axis the grid is centered on the
/// integrand's peak budget: extent 8 sqrt(s) + s |a - g| / 2, spacing sqrt(s)/8.
double gaussian_integral_identity_check(double sigma2, cplx alpha, cplx gamma,
                                        std::optional<SquareAxis> grid = std::nullopt);

} // namespace cvfaith

#endif
