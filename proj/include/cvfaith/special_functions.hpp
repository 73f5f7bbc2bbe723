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

#ifndef CVFAITH_SPECIAL_FUNCTIONS_HPP
#define CVFAITH_SPECIAL_FUNCTIONS_HPP

#include <cstddef>
#include <vector>

namespace cvfaith::special {

/// Laguerre values carried as mantissa * exp(log_scale) so that large
/// arguments do not overflow.
struct ScaledValue {
    double mantissa;
    double log_scale;
    double value() const;
};

/// L_n^{(k)}(x) for n = 0..count-1, by upward recurrence in n.
std::vector<ScaledValue> assoc_laguerre_sequence(std::size_t count, std::size_t k, double x);

double assoc_laguerre(std::size_t n, std::size_t k, double x);

/// Modified Bessel function I_0. Power series below 15, asymptotic expansion above.
double bessel_i0(double x);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for the weight exp(-u) on [0, inf).
///
/// Nodes from the Jacobi matrix eigenvalues, polished by Newton; weights from
/// the L_{n+1} formula so that the far-tail weights keep relative accuracy.
QuadratureRule gauss_laguerre(std::size_t n);

} // namespace cvfaith::special

#endif
