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

#ifndef CVFAITH_STATES_HPP
#define CVFAITH_STATES_HPP

#include <cstddef>

#include "cvfaith/fock.hpp"

namespace cvfaith {

/// Truncated single-mode density matrix.
class SingleModeState {
public:
    SingleModeState(FockOperator carrier, double nominal_trace_deficit);

    const FockOperator &carrier() const { return carrier_; }
    std::size_t dim() const { return carrier_.dim(); }
    double nominal_trace_deficit() const { return deficit_; }

private:
    FockOperator carrier_;
    double deficit_;
};

SingleModeState vacuum_state(std::size_t d);
SingleModeState thermal_state(double mean_photons, std::size_t d);
SingleModeState coherent_state(cplx alpha, std::size_t d);
SingleModeState fock_state(std::size_t n, std::size_t d);

/// Truncated two-mode density matrix.
///
/// The mass lost to truncation is recorded in nominal_trace_deficit and never
/// renormalized away. Construction checks hermiticity and the trace; positivity
/// is checked on demand by min_eigenvalue() because it costs a full
/// diagonalization.
class DensityOperator {
public:
    DensityOperator(BipartiteOperator carrier, double nominal_trace_deficit);

    const BipartiteOperator &carrier() const { return carrier_; }
    operator const BipartiteOperator &() const { return carrier_; }
    std::size_t dim() const { return carrier_.dim(); }
    double nominal_trace_deficit() const { return deficit_; }
    double min_eigenvalue() const;

private:
    BipartiteOperator carrier_;
    double deficit_;
};

/// First moments and centered second moments, <dPQ> = <PQ> - <P><Q>.
struct GaussianMoments {
    cplx mean_a;
    cplx mean_b;
    cplx adag_bdag; // <d a^dag b^dag>
    cplx a_b;       // <d a b>
    cplx adag_b;    // <d a^dag b>
    cplx a_bdag;    // <d a b^dag>
    cplx adag_a;    // <d a^dag a>
    cplx bdag_b;    // <d b^dag b>
    cplx a_a;       // <d a^2>
    cplx b_b;       // <d b^2>

    /// Largest violation of the conjugacy relations and reality conditions.
    double conjugacy_violation() const;
};

/// (1 - lambda^2) sum_{n,m<d} lambda^{n+m} |nn><mm|.
DensityOperator twin_beam(double lambda, std::size_t d);

/// Gaussian mixture of twin coherent states, integral of
/// exp(-|g|^2/sigma2)/(pi sigma2) |g><g| (x) |g><g| d^2g, realized by quadrature.
///
/// Radial nodes are Gauss-Laguerre in u = (1/sigma2 + 2)|g|^2, which absorbs
/// both the mixing weight and the coherent-state normalization, so each
/// matrix element is integrated exactly once quad_points >= 2d - 1. Angular
/// nodes are uniform. quad_points = 0 selects max(64, 2d).
DensityOperator split_thermal(double sigma2, std::size_t d, std::size_t quad_points = 0);

DensityOperator product_state(const SingleModeState &rho, const SingleModeState &sigma);

/// (1 - lambda) sum_{n<d} lambda^n |nn><nn|.
DensityOperator correlated_fock(double lambda, std::size_t d);

/// Every moment as Tr[R X] with R used as given (no renormalization).
GaussianMoments moments_of(const BipartiteOperator &r);

/// Tr[R (a^dag a + b^dag b)].
double total_photon_number(const BipartiteOperator &r);

/// Truncation mass lost by split_thermal, from the thermal/binomial photon
/// statistics of the untruncated state.
double split_thermal_trace_deficit(double sigma2, std::size_t d);

// Default truncations targeting a trace deficit below 1e-10.
std::size_t default_dim_twin_beam(double lambda);
std::size_t default_dim_split_thermal(double sigma2);
std::size_t default_dim_correlated_fock(double lambda);

} // namespace cvfaith

#endif
