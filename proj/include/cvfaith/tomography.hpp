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


#ifndef CVFAITH_TOMOGRAPHY_HPP
#define CVFAITH_TOMOGRAPHY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cvfaith/fock.hpp"
#include "cvfaith/states.hpp"

namespace cvfaith {

/// Trace-preserving map given by Kraus operators on a truncated mode.
class Channel {
public:
    /// Throws unless sum K^dag K = I on the interior window to 1e-8.
    Channel(std::string name, std::vector<FockOperator> kraus);

    const std::string &name() const { return name_; }
    const std::vector<FockOperator> &kraus() const { return kraus_; }
    std::size_t dim() const { return kraus_.front().dim(); }

private:
    std::string name_;
    std::vector<FockOperator> kraus_;
};

Channel identity_channel(std::size_t d);
Channel phase_rotation_channel(double theta, std::size_t d);
/// Kraus operators |n><n|.
Channel dephasing_channel(std::size_t d);
/// Beam splitter of transmissivity eta with vacuum in the idle port,
/// K_k = sum_n sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k><n|.
Channel attenuation_channel(double eta, std::size_t d);
/// Haar-like unitary from the QR factorization of a complex Gaussian matrix.
Channel random_unitary_channel(std::size_t d, std::uint64_t seed);

/// identity, phase (theta = 0.7 unless given), dephasing, attenuation
/// (eta = 0.6 unless given), unitary (seeded).
Channel channel_by_name(const std::string &name, std::size_t d, double parameter = -1.0, std::uint64_t seed = 1);

/// C = sum |K>><<K|; first factor is the output index.
class ChoiMatrix {
public:
    explicit ChoiMatrix(BipartiteOperator carrier) : carrier_(std::move(carrier)) {}
    const BipartiteOperator &carrier() const { return carrier_; }
    std::size_t dim() const { return carrier_.dim(); }

private:
    BipartiteOperator carrier_;
};

ChoiMatrix choi_of(const Channel &channel);

struct ChoiDiagnostics {
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    /// max |Tr_out C - I| on the interior window.
    double trace_preservation_error = 0.0;

    bool passes(double tol) const {
        return hermiticity_error <= tol && min_eigenvalue >= -tol && trace_preservation_error <= tol;
    }
};

ChoiDiagnostics check_choi(const ChoiMatrix &choi);

/// sum_n (K_n (x) I) R (K_n^dag (x) I).
BipartiteOperator apply_channel_first(const BipartiteOperator &r, const Channel &channel);
DensityOperator apply_channel_first(const DensityOperator &r, const Channel &channel);

/// Row-major flattening of a d^2 x d^2 matrix.
Vector vectorize(const Matrix &m);
Matrix unvectorize(const Vector &v, std::size_t rows);

/// Largest d for which the forward map is materialized.
inline constexpr std::size_t kForwardMapMaxDim = 6;

/// vec(R_E) = M vec(C) for every channel E, with M of size d^4 x d^4.
///
/// M[(a b)(c e), (a j)(c l)] = R[(j b), (l e)], so M is a row/column
/// permutation of I_{d^2} (x) R-check: its singular values are those of the
/// check operator, each repeated d^2 times.
struct ForwardMap {
    std::size_t dim = 0;
    Matrix matrix;
    std::vector<double> singular_values; // descending
    std::size_t rank = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double rank_tol = 0.0;
    Matrix pseudo_inverse; // cutoff rank_tol * sigma_max
};

ForwardMap forward_map(const BipartiteOperator &r, double rank_tol = 1e-10, std::size_t max_dim = kForwardMapMaxDim);

struct ReconstructionResult {
    ChoiMatrix choi_estimate;
    double residual_norm = 0.0;
    bool recovered = false;
    std::size_t rank = 0;
    double sigma_min = 0.0;
};

/// Least squares for M c = vec(R_out) through the SVD pseudo-inverse with
/// relative cutoff tol. recovered requires full rank, a residual below
/// 1e-8 relative to |vec(R_out)|, and Choi diagnostics passing at 1e-6.
ReconstructionResult reconstruct(const BipartiteOperator &r, const BipartiteOperator &r_out, double tol = 1e-10);
ReconstructionResult reconstruct(const ForwardMap &map, const BipartiteOperator &r_out);

struct NoiseRow {
    double lambda_or_sigma2;
    std::size_t d;
    double epsilon;
    std::size_t trial;
    double choi_error;
    double sigma_min;
    double chi;
};

struct NoiseSummaryEntry {
    double epsilon;
    double mean_error;
    double p99_error;
    double mean_slope; // mean_error / epsilon
    double p99_slope;
    double bound_slope; // 1 / sigma_min(M)
    bool within_bound;  // p99_slope <= 1.5 bound_slope
};

struct NoiseStudy {
    double lambda_or_sigma2 = 0.0;
    std::size_t d = 0;
    bool recovered = false;
    double sigma_min = 0.0;
    double chi = 0.0;
    std::vector<NoiseRow> rows;
    std::vector<NoiseSummaryEntry> summary;
};

/// Adds to vec(R_out) a complex Gaussian vector rescaled to 2-norm epsilon,
/// reconstructs, and records the Frobenius Choi error. Trial t at epsilon
/// index k draws from mt19937_64 seeded with {seed, k, t}, so results do not
/// depend on the thread count.
NoiseStudy noise_amplification_study(const DensityOperator &r, const Channel &channel,
                                     const std::vector<double> &epsilons, std::size_t trials, std::uint64_t seed,
                                     double label = 0.0);

struct NoiseTrend {
    std::vector<NoiseStudy> studies; // one per lambda, in input order
    /// Mean error at the first epsilon strictly decreases along the lambdas.
    bool monotone_decreasing = false;
};

NoiseTrend twin_beam_noise_trend(const std::vector<double> &lambdas, std::size_t d, const Channel &channel,
                                 double epsilon, std::size_t trials, std::uint64_t seed);

} // namespace cvfaith

#endif
