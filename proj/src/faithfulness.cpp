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

#include "cvfaith/faithfulness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvfaith/phase_space.hpp"
#include "svd.hpp"

namespace cvfaith {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// E X: rows (a b) <- (b a).
Matrix swap_left(const Matrix &x, std::size_t d) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            out.row(idx(a * d + b)) = x.row(idx(b * d + a));
        }
    }
    return out;
}

// X E: columns (c e) <- (e c).
Matrix swap_right(const Matrix &x, std::size_t d) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t e = 0; e < d; ++e) {
            out.col(idx(c * d + e)) = x.col(idx(e * d + c));
        }
    }
    return out;
}

std::vector<double> singular_values_of(const Matrix &m) {
    const Eigen::VectorXd s = detail::svd(m, false).values;
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

void require_tolerance(double tol) {
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("rank tolerance must lie in (0, 1), got " + std::to_string(tol));
    }
}

} // namespace

CheckOperator::CheckOperator(BipartiteOperator carrier, double rank_tolerance)
    : carrier_(std::move(carrier)), singular_values_(singular_values_of(carrier_.matrix())),
      rank_tolerance_(rank_tolerance) {
    require_tolerance(rank_tolerance_);
}

std::string to_string(ReportMethod method) { return method == ReportMethod::Svd ? "svd" : "gaussian"; }

NotInvertibleError::NotInvertibleError(FaithfulnessReport report)
    : std::runtime_error("check operator is not invertible: numerical rank " + std::to_string(report.numerical_rank) +
                         " of " + std::to_string(report.dim * report.dim)),
      report_(std::move(report)) {}

CheckOperator check_operator(const BipartiteOperator &r, double rank_tolerance) {
    const std::size_t d = r.dim();
    const BipartiteOperator swapped(d, swap_left(r.matrix(), d));
    const Matrix first = swap_right(partial_transpose(swapped, Mode::Second).matrix(), d);

    const BipartiteOperator transposed2(d, swap_right(partial_transpose(r, Mode::Second).matrix(), d));
    const Matrix second = partial_transpose(transposed2, Mode::First).matrix();

    const double scale = std::max(1.0, r.matrix().cwiseAbs().maxCoeff());
    if ((first - second).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::logic_error("check_operator: the two index routes disagree");
    }
    return CheckOperator(BipartiteOperator(d, first), rank_tolerance);
}

CheckOperator check_from_decomposition(std::span<const OperatorTerm> terms, DecompositionForm form,
                                       double rank_tolerance) {
    if (terms.empty()) {
        throw std::invalid_argument("check_from_decomposition: empty term list");
    }
    const std::size_t d = terms.front().first.dim();
    Matrix acc = Matrix::Zero(idx(d * d), idx(d * d));
    for (const auto &term : terms) {
        if (term.first.dim() != d || term.second.dim() != d) {
            throw std::invalid_argument("check_from_decomposition: inconsistent term dimensions");
        }
        if (form == DecompositionForm::Product) {
            // |B>><<A^*| = vec(B) vec(A)^T
            acc += double_ket(term.second).vector() * double_ket(term.first).vector().transpose();
        } else {
            acc += tensor(term.first.transpose(), term.second.adjoint()).matrix();
        }
    }
    return CheckOperator(BipartiteOperator(d, std::move(acc)), rank_tolerance);
}

FaithfulnessReport classify(const CheckOperator &check, double tol) {
    require_tolerance(tol);
    const auto &s = check.singular_values();
    FaithfulnessReport report;
    report.dim = check.dim();
    report.tol = tol;
    report.method = ReportMethod::Svd;
    report.sigma_max = s.empty() ? 0.0 : s.front();
    report.sigma_min = s.empty() ? 0.0 : s.back();
    const double cutoff = tol * report.sigma_max;
    report.numerical_rank = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](double v) { return report.sigma_max > 0.0 && v > cutoff; }));
    report.full_rank = report.numerical_rank == report.dim * report.dim;
    report.condition_number = report.sigma_min > 0.0 ? report.sigma_max / report.sigma_min
                                                     : std::numeric_limits<double>::infinity();
    return report;
}

BipartiteOperator invert_check(const CheckOperator &check, double tol) {
    const FaithfulnessReport report = classify(check, tol);
    if (!report.full_rank) {
        throw NotInvertibleError(report);
    }
    const detail::Svd svd = detail::svd(check.carrier().matrix(), true);
    const Eigen::VectorXd inv = svd.values.cwiseInverse();
    Matrix pinv = svd.v * inv.asDiagonal() * svd.u.adjoint();
    return BipartiteOperator(check.dim(), std::move(pinv));
}

double chi_from_quadratures(const GaussianMoments &g) {
    const cplx i(0.0, 1.0);
    const cplx xx = (g.a_b + g.a_bdag + g.adag_b + g.adag_bdag) / 4.0;
    const cplx yy = -(g.a_b - g.a_bdag - g.adag_b + g.adag_bdag) / 4.0;
    const cplx xy = (g.a_b - g.a_bdag + g.adag_b - g.adag_bdag) / (4.0 * i);
    const cplx yx = (g.a_b + g.a_bdag - g.adag_b - g.adag_bdag) / (4.0 * i);
    return (2.0 * (xx * xx + yy * yy + xy * xy + yx * yx)).real();
}

double chi(const GaussianMoments &g) {
    if (g.conjugacy_violation() > 1e-8) {
        throw std::invalid_argument("chi: moments violate conjugacy by " + std::to_string(g.conjugacy_violation()));
    }
    const double value = (g.adag_bdag * g.a_b + g.adag_b * g.a_bdag).real();
    const double quad = chi_from_quadratures(g);
    if (std::abs(value - quad) > 1e-10 * std::max(1.0, std::abs(value))) {
        throw std::logic_error("chi: quadrature form disagrees with the moment form");
    }
    return value;
}

GaussianCoefficients ab_from_moments(const GaussianMoments &g) { return {g.adag_bdag, -g.adag_b}; }

GaussianCoefficients ab_coefficients(const BipartiteOperator &r, double h) {
    if (!(h >= 1e-5 && h <= 1e-1)) {
        throw std::invalid_argument("ab_coefficients: finite-difference step must lie in [1e-5, 1e-1]");
    }
    const auto gamma = [&](double x1, double y1, double x2, double y2) {
        return characteristic_point(r, cplx(x1, y1), cplx(x2, y2));
    };
    // Axis k in {x1, y1, x2, y2}.
    const auto at = [&](int k1, double s1, int k2, double s2) {
        double v[4] = {0.0, 0.0, 0.0, 0.0};
        v[k1] += s1;
        v[k2] += s2;
        return gamma(v[0], v[1], v[2], v[3]);
    };
    struct Derivs {
        cplx d[4];
        cplx dd[2][2]; // [x1|y1][x2|y2]
    };
    const auto derivs = [&](double s) {
        Derivs out{};
        for (int k = 0; k < 4; ++k) {
            out.d[k] = (at(k, s, k, 0.0) - at(k, -s, k, 0.0)) / (2.0 * s);
        }
        for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
                const int ku = u;
                const int kv = 2 + v;
                out.dd[u][v] = (at(ku, s, kv, s) - at(ku, s, kv, -s) - at(ku, -s, kv, s) + at(ku, -s, kv, -s)) /
                               (4.0 * s * s);
            }
        }
        return out;
    };
    const Derivs coarse = derivs(h);
    const Derivs fine = derivs(0.5 * h);
    Derivs best{};
    for (int k = 0; k < 4; ++k) {
        best.d[k] = (4.0 * fine.d[k] - coarse.d[k]) / 3.0;
    }
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            best.dd[u][v] = (4.0 * fine.dd[u][v] - coarse.dd[u][v]) / 3.0;
        }
    }

    const cplx i(0.0, 1.0);
    const cplx d_alpha = 0.5 * (best.d[0] - i * best.d[1]);
    const cplx d_beta = 0.5 * (best.d[2] - i * best.d[3]);
    const cplx d_beta_conj = 0.5 * (best.d[2] + i * best.d[3]);
    const cplx d_alpha_beta = 0.25 * (best.dd[0][0] - i * best.dd[0][1] - i * best.dd[1][0] - best.dd[1][1]);
    const cplx d_alpha_beta_conj = 0.25 * (best.dd[0][0] + i * best.dd[0][1] - i * best.dd[1][0] + best.dd[1][1]);

    const GaussianCoefficients fd{d_alpha_beta - d_alpha * d_beta, d_alpha_beta_conj - d_alpha * d_beta_conj};

    const GaussianCoefficients exact = ab_from_moments(moments_of(r));
    const double allowed = std::max(1e-6, 100.0 * h * h * h * h) * (1.0 + std::abs(exact.a) + std::abs(exact.b));
    if (std::abs(fd.a - exact.a) > allowed || std::abs(fd.b - exact.b) > allowed) {
        throw std::logic_error("ab_coefficients: finite differences disagree with the moment route");
    }
    return fd;
}

bool gaussian_faithful(const GaussianCoefficients &coeffs, double tol) { return std::abs(coeffs.discriminant()) > tol; }

FaithfulnessReport analyze(const BipartiteOperator &r, double tol) {
    FaithfulnessReport report = classify(check_operator(r, tol), tol);
    report.chi = chi(moments_of(r));
    return report;
}

} // namespace cvfaith
