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


#include "cvfaith/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "cvfaith/faithfulness.hpp"
#include "cvfaith/parallel.hpp"
#include "svd.hpp"

namespace cvfaith {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double binomial(std::size_t n, std::size_t k) {
    return std::exp(std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0));
}

} // namespace

Channel::Channel(std::string name, std::vector<FockOperator> kraus) : name_(std::move(name)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
        throw std::invalid_argument("channel needs at least one Kraus operator");
    }
    const std::size_t d = kraus_.front().dim();
    Matrix sum = Matrix::Zero(idx(d), idx(d));
    for (const auto &k : kraus_) {
        if (k.dim() != d) {
            throw std::invalid_argument("Kraus operators of different dimensions");
        }
        sum += k.matrix().adjoint() * k.matrix();
    }
    const Index w = idx(interior_window(d));
    const double err = (sum.topLeftCorner(w, w) - Matrix::Identity(w, w)).cwiseAbs().maxCoeff();
    if (err > 1e-8) {
        throw std::invalid_argument("Kraus operators are not trace preserving (error " + std::to_string(err) + ")");
    }
}

Channel identity_channel(std::size_t d) { return Channel("identity", {identity(d)}); }

Channel phase_rotation_channel(double theta, std::size_t d) {
    return Channel("phase", {phase_rotation_operator(theta, d)});
}

Channel dephasing_channel(std::size_t d) {
    std::vector<FockOperator> kraus;
    for (std::size_t n = 0; n < d; ++n) {
        kraus.push_back(fock_projector(n, d));
    }
    return Channel("dephasing", std::move(kraus));
}

Channel attenuation_channel(double eta, std::size_t d) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("attenuation transmissivity must lie in [0, 1]");
    }
    std::vector<FockOperator> kraus;
    for (std::size_t k = 0; k < d; ++k) {
        Matrix m = Matrix::Zero(idx(d), idx(d));
        for (std::size_t n = k; n < d; ++n) {
            const double amp = std::sqrt(binomial(n, k) * std::pow(eta, double(n - k)) * std::pow(1.0 - eta, double(k)));
            m(idx(n - k), idx(n)) = amp;
        }
        kraus.emplace_back(std::move(m));
    }
    return Channel("attenuation", std::move(kraus));
}

Channel random_unitary_channel(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix g(idx(d), idx(d));
    for (Index i = 0; i < g.rows(); ++i) {
        for (Index j = 0; j < g.cols(); ++j) {
            g(i, j) = cplx(normal(rng), normal(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(idx(d), idx(d));
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < q.cols(); ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return Channel("unitary", {FockOperator(std::move(q))});
}

Channel channel_by_name(const std::string &name, std::size_t d, double parameter, std::uint64_t seed) {
    if (name == "identity") {
        return identity_channel(d);
    }
    if (name == "phase") {
        return phase_rotation_channel(parameter < 0.0 ? 0.7 : parameter, d);
    }
    if (name == "dephasing") {
        return dephasing_channel(d);
    }
    if (name == "attenuation") {
        return attenuation_channel(parameter < 0.0 ? 0.6 : parameter, d);
    }
    if (name == "unitary") {
        return random_unitary_channel(d, seed);
    }
    throw std::invalid_argument("unknown channel '" + name + "'");
}

ChoiMatrix choi_of(const Channel &channel) {
    const std::size_t d = channel.dim();
    Matrix c = Matrix::Zero(idx(d * d), idx(d * d));
    for (const auto &k : channel.kraus()) {
        const Vector v = double_ket(k).vector();
        c += v * v.adjoint();
    }
    return ChoiMatrix(BipartiteOperator(d, std::move(c)));
}

ChoiDiagnostics check_choi(const ChoiMatrix &choi) {
    const std::size_t d = choi.dim();
    const Matrix &c = choi.carrier().matrix();
    ChoiDiagnostics out;
    out.hermiticity_error = (c - c.adjoint()).cwiseAbs().maxCoeff();
    const Matrix h = 0.5 * (c + c.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    const std::size_t w = interior_window(d);
    for (std::size_t j = 0; j < w; ++j) {
        for (std::size_t l = 0; l < w; ++l) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                s += c(idx(a * d + j), idx(a * d + l));
            }
            out.trace_preservation_error = std::max(out.trace_preservation_error, std::abs(s - (j == l ? 1.0 : 0.0)));
        }
    }
    return out;
}

BipartiteOperator apply_channel_first(const BipartiteOperator &r, const Channel &channel) {
    if (r.dim() != channel.dim()) {
        throw std::invalid_argument("apply_channel_first: state has dimension " + std::to_string(r.dim()) +
                                    ", channel " + std::to_string(channel.dim()));
    }
    const std::size_t d = r.dim();
    const FockOperator id = identity(d);
    Matrix out = Matrix::Zero(r.matrix().rows(), r.matrix().cols());
    for (const auto &k : channel.kraus()) {
        const Matrix kk = tensor(k, id).matrix();
        out += kk * r.matrix() * kk.adjoint();
    }
    return BipartiteOperator(d, std::move(out));
}

DensityOperator apply_channel_first(const DensityOperator &r, const Channel &channel) {
    return DensityOperator(apply_channel_first(r.carrier(), channel), r.nominal_trace_deficit());
}

Vector vectorize(const Matrix &m) {
    Vector v(m.size());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            v(i * m.cols() + j) = m(i, j);
        }
    }
    return v;
}

Matrix unvectorize(const Vector &v, std::size_t rows) {
    const Index n = idx(rows);
    if (n == 0 || v.size() % n != 0) {
        throw std::invalid_argument("unvectorize: length is not a multiple of the row count");
    }
    const Index cols = v.size() / n;
    Matrix m(n, cols);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = v(i * cols + j);
        }
    }
    return m;
}

ForwardMap forward_map(const BipartiteOperator &r, double rank_tol, std::size_t max_dim) {
    const std::size_t d = r.dim();
    if (d > max_dim) {
        throw std::invalid_argument("forward map at d = " + std::to_string(d) + " exceeds the memory budget (d <= " +
                                    std::to_string(max_dim) + ")");
    }
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
        throw std::invalid_argument("rank tolerance must lie in (0, 1)");
    }
    const std::size_t d2 = d * d;
    ForwardMap map;
    map.dim = d;
    map.rank_tol = rank_tol;
    // M is block diagonal in (a, c) with every block K[(b e), (j l)] = R[(j b), (l e)].
    Matrix block(idx(d2), idx(d2));
    for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t e = 0; e < d; ++e) {
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t l = 0; l < d; ++l) {
                    block(idx(b * d + e), idx(j * d + l)) = r.element(j, b, l, e);
                }
            }
        }
    }
    const detail::Svd svd = detail::svd(block, true);
    const Eigen::VectorXd &s = svd.values;
    const double block_max = s.size() > 0 ? s(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    std::size_t block_rank = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (block_max > 0.0 && s(i) > rank_tol * block_max) {
            inv(i) = 1.0 / s(i);
            ++block_rank;
        }
    }
    const Matrix block_pinv = svd.v * inv.asDiagonal() * svd.u.adjoint();

    map.matrix = Matrix::Zero(idx(d2 * d2), idx(d2 * d2));
    map.pseudo_inverse = Matrix::Zero(idx(d2 * d2), idx(d2 * d2));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t b = 0; b < d; ++b) {
                for (std::size_t e = 0; e < d; ++e) {
                    const Index row = idx((a * d + b) * d2 + (c * d + e));
                    for (std::size_t j = 0; j < d; ++j) {
                        for (std::size_t l = 0; l < d; ++l) {
                            const Index col = idx((a * d + j) * d2 + (c * d + l));
                            map.matrix(row, col) = block(idx(b * d + e), idx(j * d + l));
                            map.pseudo_inverse(col, row) = block_pinv(idx(j * d + l), idx(b * d + e));
                        }
                    }
                }
            }
        }
    }
    for (Index i = 0; i < s.size(); ++i) {
        map.singular_values.insert(map.singular_values.end(), d2, s(i));
    }
    map.sigma_max = block_max;
    map.sigma_min = s.size() > 0 ? s(s.size() - 1) : 0.0;
    map.rank = block_rank * d2;
    return map;
}

ReconstructionResult reconstruct(const ForwardMap &map, const BipartiteOperator &r_out) {
    if (r_out.dim() != map.dim) {
        throw std::invalid_argument("reconstruct: output state dimension does not match the forward map");
    }
    const Vector y = vectorize(r_out.matrix());
    const Vector c = map.pseudo_inverse * y;
    const std::size_t d2 = map.dim * map.dim;
    ReconstructionResult result{ChoiMatrix(BipartiteOperator(map.dim, unvectorize(c, d2)))};
    result.residual_norm = (map.matrix * c - y).norm();
    result.rank = map.rank;
    result.sigma_min = map.sigma_min;
    const bool full_rank = map.rank == d2 * d2;
    const bool small_residual = result.residual_norm <= 1e-8 * std::max(1.0, y.norm());
    result.recovered = full_rank && small_residual && check_choi(result.choi_estimate).passes(1e-6);
    return result;
}

ReconstructionResult reconstruct(const BipartiteOperator &r, const BipartiteOperator &r_out, double tol) {
    if (r.dim() != r_out.dim()) {
        throw std::invalid_argument("reconstruct: input and output states differ in dimension");
    }
    return reconstruct(forward_map(r, tol), r_out);
}

NoiseStudy noise_amplification_study(const DensityOperator &r, const Channel &channel,
                                     const std::vector<double> &epsilons, std::size_t trials, std::uint64_t seed,
                                     double label) {
    for (double eps : epsilons) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) {
            throw std::invalid_argument("noise magnitudes must be finite and non-negative");
        }
    }
    const std::size_t d = r.dim();
    const ForwardMap map = forward_map(r.carrier(), kDefaultRankTolerance);
    const BipartiteOperator r_out = apply_channel_first(r.carrier(), channel);
    const Vector y = vectorize(r_out.matrix());
    const Vector truth = vectorize(choi_of(channel).carrier().matrix());

    NoiseStudy study;
    study.lambda_or_sigma2 = label;
    study.d = d;
    study.recovered = reconstruct(map, r_out).recovered;
    study.sigma_min = map.sigma_min;
    study.chi = chi(moments_of(r.carrier()));
    study.rows.resize(epsilons.size() * trials);

    parallel_for(study.rows.size(), [&](std::size_t task) {
        const std::size_t k = task / trials;
        const std::size_t t = task % trials;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        Vector noise(y.size());
        for (Index i = 0; i < noise.size(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            noise(i) = cplx(re, im);
        }
        const double norm = noise.norm();
        noise *= norm > 0.0 ? epsilons[k] / norm : 0.0;
        const Vector estimate = map.pseudo_inverse * (y + noise);
        study.rows[task] = NoiseRow{label, d, epsilons[k], t, (estimate - truth).norm(), map.sigma_min, study.chi};
    });

    const double bound = map.sigma_min > 0.0 ? 1.0 / map.sigma_min : std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        std::vector<double> errors;
        errors.reserve(trials);
        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            errors.push_back(study.rows[k * trials + t].choi_error);
            sum += errors.back();
        }
        NoiseSummaryEntry entry{};
        entry.epsilon = epsilons[k];
        entry.bound_slope = bound;
        if (trials > 0) {
            std::sort(errors.begin(), errors.end());
            const auto rank = static_cast<std::size_t>(std::ceil(0.99 * double(trials)));
            entry.mean_error = sum / double(trials);
            entry.p99_error = errors[std::max<std::size_t>(rank, 1) - 1];
        }
        if (entry.epsilon > 0.0) {
            entry.mean_slope = entry.mean_error / entry.epsilon;
            entry.p99_slope = entry.p99_error / entry.epsilon;
        }
        entry.within_bound = entry.p99_slope <= 1.5 * bound;
        study.summary.push_back(entry);
    }
    return study;
}

NoiseTrend twin_beam_noise_trend(const std::vector<double> &lambdas, std::size_t d, const Channel &channel,
                                 double epsilon, std::size_t trials, std::uint64_t seed) {
    NoiseTrend trend;
    for (double lambda : lambdas) {
        trend.studies.push_back(noise_amplification_study(twin_beam(lambda, d), channel, {epsilon}, trials, seed, lambda));
    }
    trend.monotone_decreasing = true;
    for (std::size_t i = 1; i < trend.studies.size(); ++i) {
        if (!(trend.studies[i].summary.front().mean_error < trend.studies[i - 1].summary.front().mean_error)) {
            trend.monotone_decreasing = false;
        }
    }
    return trend;
}

} // namespace cvfaith
