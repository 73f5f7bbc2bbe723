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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cvfaith/faithfulness.hpp"
#include "cvfaith/fock.hpp"
#include "cvfaith/phase_space.hpp"
#include "cvfaith/states.hpp"
#include "cvfaith/tomography.hpp"

using namespace cvfaith;

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

cplx random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
}

cplx random_in_disk(std::mt19937_64 &rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    return std::polar(r, 2.0 * M_PI * u(rng));
}

Matrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols) {
    Matrix m(ix(rows), ix(cols));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = random_complex(rng);
        }
    }
    return m;
}

std::size_t random_dim(std::mt19937_64 &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Diagonal oracle c * x^n y^m at composite index n d + m.
Matrix diagonal_power(double c, double x, std::size_t d) {
    Matrix m = Matrix::Zero(ix(d * d), ix(d * d));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t k = 0; k < d; ++k) {
            m(ix(n * d + k), ix(n * d + k)) = c * std::pow(x, double(n + k));
        }
    }
    return m;
}

// Check operator built entry by entry: check[(ab),(cd)] = R[(ca),(db)].
Matrix check_by_entries(const BipartiteOperator &r) {
    const std::size_t d = r.dim();
    Matrix out(ix(d * d), ix(d * d));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t e = 0; e < d; ++e) {
                    out(ix(a * d + b), ix(c * d + e)) = r.matrix()(ix(c * d + a), ix(e * d + b));
                }
            }
        }
    }
    return out;
}

Outcome twin_beam_closed_form() {
    Outcome o;
    double worst_check = 0.0;
    double worst_inverse = 0.0;
    for (double lambda : {0.2, 0.5, 0.8}) {
        for (std::size_t d = 2; d <= 8; ++d) {
            const CheckOperator c = check_operator(twin_beam(lambda, d));
            worst_check = std::max(worst_check,
                                   max_abs(c.carrier().matrix() - diagonal_power(1.0 - lambda * lambda, lambda, d)));
            const Matrix expected_inv = diagonal_power(1.0 / (1.0 - lambda * lambda), 1.0 / lambda, d);
            // Relative to the largest expected entry.
            const double err = max_abs(invert_check(c).matrix() - expected_inv) / max_abs(expected_inv);
            worst_inverse = std::max(worst_inverse, err);
        }
    }
    o.require(worst_check <= 1e-12, "check entry error " + fmt("%.3g", worst_check));
    o.require(worst_inverse <= 1e-9, "relative inverse error " + fmt("%.3g", worst_inverse));
    o.detail = o.pass ? "max check error " + fmt("%.2g", worst_check) + ", max relative inverse error " +
                            fmt("%.2g", worst_inverse)
                      : o.detail;
    return o;
}

std::vector<cplx> lattice_3x3() {
    std::vector<cplx> out;
    for (double re : {-0.7, 0.0, 0.7}) {
        for (double im : {-0.7, 0.0, 0.7}) {
            out.emplace_back(re, im);
        }
    }
    return out;
}

Outcome analytic_wigner() {
    Outcome o;
    const std::vector<cplx> nodes = lattice_3x3();
    struct Case {
        const char *name;
        BipartiteOperator state;
        std::function<double(cplx, cplx)> formula;
    };
    const std::vector<Case> cases{
        {"twin beam", twin_beam(0.5, 35), [](cplx a, cplx b) { return analytic_wigner_twin_beam(0.5, a, b); }},
        {"split thermal", split_thermal(0.5, 25),
         [](cplx a, cplx b) { return analytic_wigner_split_thermal(0.5, a, b); }},
        {"correlated Fock", correlated_fock(0.5, 40),
         [](cplx a, cplx b) { return analytic_wigner_correlated_fock(0.5, a, b); }},
    };
    std::string summary;
    for (const auto &c : cases) {
        double worst = 0.0;
        for (cplx a : nodes) {
            for (cplx b : nodes) {
                worst = std::max(worst, std::abs(wigner_point(c.state, a, b) - c.formula(a, b)));
            }
        }
        o.require(worst <= 1e-6, std::string(c.name) + " deviates by " + fmt("%.3g", worst));
        summary += std::string(summary.empty() ? "" : ", ") + c.name + " " + fmt("%.2g", worst);
    }
    if (o.pass) {
        o.detail = "81 points each, max deviation: " + summary;
    }
    return o;
}

// <a b> of twin_beam(lambda, d): (1 - l^2) sum_{n < d-1} (n + 1) l^(2n+1).
double truncated_twin_beam_chi(double lambda, std::size_t d) {
    double ab = 0.0;
    for (std::size_t n = 0; n + 1 < d; ++n) {
        ab += (1.0 - lambda * lambda) * double(n + 1) * std::pow(lambda, 2.0 * double(n) + 1.0);
    }
    return ab * ab;
}

// <a^dag b> of split_thermal(s, d) summed from its elements
// k! s^k / ((1+2s)^(k+1) sqrt(n! m! n'! m'!)) on the block n + m = k.
double truncated_split_thermal_chi(double s, std::size_t d) {
    double v = 0.0;
    for (std::size_t n = 0; n + 1 < d; ++n) {
        for (std::size_t m = 1; m < d; ++m) {
            const double k = double(n + m);
            v += std::exp(std::lgamma(k + 1.0) + k * std::log(s) - (k + 1.0) * std::log1p(2.0 * s) -
                          std::lgamma(double(n) + 1.0) - std::lgamma(double(m)));
        }
    }
    return v * v;
}

Outcome chi_oracles() {
    Outcome o;
    const std::size_t d = 20;
    double worst = 0.0;
    double largest_tail = 0.0;
    for (double lambda : {0.2, 0.5, 0.8}) {
        const double oracle = truncated_twin_beam_chi(lambda, d);
        worst = std::max(worst, std::abs(chi(moments_of(twin_beam(lambda, d))) - oracle));
        const double ideal = lambda * lambda / std::pow(1.0 - lambda * lambda, 2);
        largest_tail = std::max(largest_tail, std::abs(ideal - oracle));
    }
    for (double s : {0.25, 0.5, 1.0}) {
        const double oracle = truncated_split_thermal_chi(s, d);
        worst = std::max(worst, std::abs(chi(moments_of(split_thermal(s, d))) - oracle));
        largest_tail = std::max(largest_tail, std::abs(s * s - oracle));
    }
    // Untruncated values where the tail is negligible at d = 30.
    const double tb = chi(moments_of(twin_beam(0.5, 30)));
    o.require(std::abs(tb - 4.0 / 9.0) <= 1e-8, "twin beam 0.5 at d 30: " + fmt("%.17g", tb));
    const double st = chi(moments_of(split_thermal(0.25, 30)));
    o.require(std::abs(st - 0.0625) <= 1e-8, "split thermal 0.25 at d 30: " + fmt("%.17g", st));
    o.require(worst <= 1e-8, "truncated oracle deviation " + fmt("%.3g", worst));

    double zero = 0.0;
    for (std::size_t dd : {6, 15}) {
        zero = std::max(zero, std::abs(chi(moments_of(product_state(thermal_state(0.7, dd), coherent_state(0.4, dd))))));
        zero = std::max(zero, std::abs(chi(moments_of(correlated_fock(0.5, dd)))));
    }
    o.require(zero <= 1e-10, "product or correlated Fock chi " + fmt("%.3g", zero));
    if (o.pass) {
        o.detail = "oracle deviation " + fmt("%.2g", worst) + " at d 20 (tail correction up to " +
                   fmt("%.2g", largest_tail) + "), zero cases " + fmt("%.2g", zero);
    }
    return o;
}

Outcome structural_ranks() {
    Outcome o;
    for (std::size_t d = 3; d <= 8; ++d) {
        const std::string at = " at d " + std::to_string(d);
        const auto rank = [](const BipartiteOperator &r) { return classify(check_operator(r)).numerical_rank; };
        o.require(rank(product_state(thermal_state(0.7, d), coherent_state(cplx(0.3, 0.2), d))) == 1,
                  "product rank" + at);
        o.require(rank(product_state(vacuum_state(d), fock_state(1, d))) == 1, "vacuum-Fock rank" + at);
        o.require(rank(correlated_fock(0.5, d)) == d, "correlated Fock rank" + at);
        o.require(rank(twin_beam(0.5, d)) == d * d, "twin beam rank" + at);
        o.require(rank(split_thermal(0.5, d)) == d * d, "split thermal rank" + at);
    }
    if (o.pass) {
        o.detail = "product 1, correlated Fock d, twin beam and split thermal d^2 for d 3..8";
    }
    return o;
}

Outcome gaussian_consistency() {
    Outcome o;
    const std::size_t svd_dim = 4;
    const std::size_t fd_dim = 30;
    std::size_t cases = 0;
    bool swap_ok = true;
    for (double lambda : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const GaussianCoefficients ab = ab_coefficients(twin_beam(lambda, fd_dim));
        const bool svd = classify(check_operator(twin_beam(lambda, svd_dim))).full_rank;
        o.require(gaussian_faithful(ab) == svd, "twin beam disagreement at " + fmt("%g", lambda));
        swap_ok = swap_ok && std::abs(ab.a) > 1e-3 && std::abs(ab.b) < 1e-8;
        ++cases;
    }
    for (double s : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        const GaussianCoefficients ab = ab_coefficients(split_thermal(s, fd_dim));
        const bool svd = classify(check_operator(split_thermal(s, svd_dim))).full_rank;
        o.require(gaussian_faithful(ab) == svd, "split thermal disagreement at " + fmt("%g", s));
        swap_ok = swap_ok && std::abs(ab.b) > 1e-3 && std::abs(ab.a) < 1e-8;
        ++cases;
    }
    // A rank-deficient Gaussian control.
    const BipartiteOperator control = product_state(thermal_state(0.5, fd_dim), thermal_state(0.5, fd_dim));
    o.require(!gaussian_faithful(ab_coefficients(control)), "product control flagged faithful");
    o.require(!classify(check_operator(product_state(thermal_state(0.5, svd_dim), thermal_state(0.5, svd_dim))))
                   .full_rank,
              "product control full rank");
    o.require(swap_ok, "A and B do not swap roles between the families");
    if (o.pass) {
        o.detail = std::to_string(cases) + " sweep points agree, A-only for twin beam and B-only for split thermal";
    }
    return o;
}

Outcome tomography_round_trip() {
    Outcome o;
    const std::size_t d = 3;
    const DensityOperator r = twin_beam(0.5, d);
    const ForwardMap map = forward_map(r);
    double worst = 0.0;
    for (const Channel &ch : {identity_channel(d), phase_rotation_channel(0.7, d), dephasing_channel(d),
                              attenuation_channel(0.6, d)}) {
        const ReconstructionResult res = reconstruct(map, apply_channel_first(r, ch));
        const double err = max_abs(res.choi_estimate.carrier().matrix() - choi_of(ch).carrier().matrix());
        worst = std::max(worst, err);
        o.require(res.recovered, ch.name() + " not recovered");
        o.require(err <= 1e-8, ch.name() + " Choi error " + fmt("%.3g", err));
    }
    const DensityOperator prod = product_state(thermal_state(0.5, d), vacuum_state(d));
    const ReconstructionResult bad = reconstruct(prod, apply_channel_first(prod, dephasing_channel(d)));
    o.require(!bad.recovered, "product state reported as recovered");
    o.require(bad.rank < d * d * d * d, "product forward map reported full rank");
    if (o.pass) {
        o.detail = "max Choi entry error " + fmt("%.2g", worst) + ", product state rank " +
                   std::to_string(bad.rank) + " of 81 rejected";
    }
    return o;
}

Outcome noise_trend() {
    Outcome o;
    const std::size_t d = 3;
    const NoiseTrend trend = twin_beam_noise_trend({0.2, 0.5, 0.8}, d, phase_rotation_channel(0.7, d), 1e-6, 100, 2026);
    o.require(trend.monotone_decreasing, "mean error not decreasing in lambda");
    std::string means;
    for (const auto &s : trend.studies) {
        const NoiseSummaryEntry &e = s.summary.front();
        o.require(e.within_bound, "p99 above bound at lambda " + fmt("%g", s.lambda_or_sigma2));
        o.require(e.p99_error <= 1.5 * e.epsilon / s.sigma_min, "p99 check at lambda " + fmt("%g", s.lambda_or_sigma2));
        means += (means.empty() ? "" : " > ") + fmt("%.3g", e.mean_error);
    }
    if (o.pass) {
        o.detail = "mean error " + means + ", p99 within 1.5 eps/sigma_min";
    }
    return o;
}

Outcome integral_identity() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> s_dist(0.3, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double s = s_dist(rng);
        const cplx a = random_in_disk(rng, 1.0);
        const cplx g = random_in_disk(rng, 1.0);
        worst = std::max(worst, gaussian_integral_identity_check(s, a, g));
    }
    o.require(worst <= 1e-7, "residual " + fmt("%.3g", worst));
    if (o.pass) {
        o.detail = "max residual " + fmt("%.2g", worst) + " over 10 draws";
    }
    return o;
}

Outcome algebraic_properties() {
    Outcome o;
    std::mt19937_64 rng(9);
    double routes = 0.0;
    double abc = 0.0;
    double linear = 0.0;
    bool round_trip = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = random_dim(rng, 2, 6);
        const BipartiteOperator r(d, random_matrix(rng, d * d, d * d));
        routes = std::max(routes, max_abs(check_operator(r).carrier().matrix() - check_by_entries(r)));

        const FockOperator a(random_matrix(rng, d, d));
        const FockOperator b(random_matrix(rng, d, d));
        const FockOperator c(random_matrix(rng, d, d));
        Matrix kron(ix(d * d), ix(d * d));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                kron.block(ix(i * d), ix(j * d), ix(d), ix(d)) = a.matrix()(ix(i), ix(j)) * b.matrix();
            }
        }
        const Vector expected = kron * double_ket(c).vector();
        abc = std::max(abc, (abc_identity_apply(a, b, c).vector() - expected).cwiseAbs().maxCoeff() /
                                (1.0 + expected.cwiseAbs().maxCoeff()));

        const BipartiteOperator r2(d, random_matrix(rng, d * d, d * d));
        const cplx x = random_complex(rng);
        const cplx y = random_complex(rng);
        const Matrix lhs = check_operator(x * r + y * r2).carrier().matrix();
        const Matrix rhs = x * check_operator(r).carrier().matrix() + y * check_operator(r2).carrier().matrix();
        linear = std::max(linear, max_abs(lhs - rhs) / (1.0 + max_abs(rhs)));

        round_trip = round_trip && undouble_ket(double_ket(a)).matrix() == a.matrix();
    }
    o.require(routes <= 1e-12, "check operator routes differ by " + fmt("%.3g", routes));
    o.require(abc <= 1e-12, "A (x) B |C>> identity off by " + fmt("%.3g", abc));
    o.require(linear <= 1e-13, "linearity off by " + fmt("%.3g", linear));
    o.require(round_trip, "double-ket round trip not exact");
    if (o.pass) {
        o.detail = "100 draws each: routes " + fmt("%.2g", routes) + ", A (x) B |C>> " + fmt("%.2g", abc) +
                   ", linearity " + fmt("%.2g", linear) + ", round trips exact";
    }
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"twin-beam check operator closed form", twin_beam_closed_form},
        {"analytic Wigner formulas", analytic_wigner},
        {"chi oracle values", chi_oracles},
        {"structural classification", structural_ranks},
        {"Gaussian criterion consistency", gaussian_consistency},
        {"tomography round trip", tomography_round_trip},
        {"noise trend", noise_trend},
        {"Gaussian integral identity", integral_identity},
        {"algebraic identities", algebraic_properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s (%s) [%.2f s]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
