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

#include <gtest/gtest.h>

#include "cvfaith/faithfulness.hpp"
#include "cvfaith/phase_space.hpp"
#include "test_util.hpp"

using namespace cvfaith;
using namespace cvfaith::testing;

namespace {

std::vector<Channel> channel_library(std::size_t d) {
    return {identity_channel(d), phase_rotation_channel(0.7, d), dephasing_channel(d), attenuation_channel(0.6, d),
            random_unitary_channel(d, 99)};
}

// Kraus sum written out element by element.
Matrix kraus_sum_oracle(const BipartiteOperator &r, const Channel &ch) {
    const std::size_t d = r.dim();
    Matrix out = Matrix::Zero(ix(d * d), ix(d * d));
    for (const auto &k : ch.kraus()) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                for (std::size_t c = 0; c < d; ++c) {
                    for (std::size_t e = 0; e < d; ++e) {
                        cplx s = 0.0;
                        for (std::size_t j = 0; j < d; ++j) {
                            for (std::size_t l = 0; l < d; ++l) {
                                s += k(ix(a), ix(j)) * r.element(j, b, l, e) * std::conj(k(ix(c), ix(l)));
                            }
                        }
                        out(ix(a * d + b), ix(c * d + e)) += s;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace

TEST(tomography, channels_are_trace_preserving) {
    for (std::size_t d : {2u, 3u, 6u}) {
        for (const Channel &ch : channel_library(d)) {
            Matrix sum = Matrix::Zero(ix(d), ix(d));
            for (const auto &k : ch.kraus()) {
                sum += k.matrix().adjoint() * k.matrix();
            }
            ASSERT_LE(max_diff(sum, Matrix::Identity(ix(d), ix(d))), 1e-12) << ch.name();
        }
    }
    ASSERT_THROW(Channel("bad", {2.0 * identity(3)}), std::invalid_argument);
    ASSERT_THROW(Channel("empty", {}), std::invalid_argument);
    ASSERT_THROW(attenuation_channel(1.5, 3), std::invalid_argument);
    ASSERT_THROW(channel_by_name("teleport", 3), std::invalid_argument);
    ASSERT_EQ(channel_by_name("attenuation", 3).kraus().size(), 3u);
}

TEST(tomography, apply_channel_examples) {
    const DensityOperator tb = twin_beam(0.5, 6);
    ASSERT_EQ(apply_channel_first(tb, identity_channel(6)).carrier().matrix(), tb.carrier().matrix());

    const DensityOperator deph = apply_channel_first(tb, dephasing_channel(6));
    Matrix expected = Matrix::Zero(36, 36);
    for (std::size_t n = 0; n < 6; ++n) {
        expected(ix(n * 6 + n), ix(n * 6 + n)) = 0.75 * std::pow(0.25, double(n));
    }
    ASSERT_LE(max_diff(deph.carrier().matrix(), expected), 1e-15);

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = random_dim(rng, 2, 4);
        const BipartiteOperator r = random_density(rng, d);
        for (const Channel &ch : channel_library(d)) {
            const BipartiteOperator out = apply_channel_first(r, ch);
            ASSERT_LE(max_diff(out.matrix(), kraus_sum_oracle(r, ch)), 1e-13);
            ASSERT_NEAR(out.trace().real(), 1.0, 1e-12);
        }
    }
    ASSERT_THROW(apply_channel_first(tb, identity_channel(5)), std::invalid_argument);
}

TEST(tomography, phase_rotation_rotates_wigner) {
    const double theta = std::numbers::pi / 2.0;
    const std::size_t d = 35;
    const DensityOperator out = apply_channel_first(twin_beam(0.5, d), phase_rotation_channel(theta, d));
    std::mt19937_64 rng(62);
    for (int i = 0; i < 10; ++i) {
        const cplx a = random_in_disk(rng, 0.8);
        const cplx b = random_in_disk(rng, 0.8);
        ASSERT_NEAR(wigner_point(out, a, b), analytic_wigner_twin_beam(0.5, a * std::polar(1.0, -theta), b), 1e-6);
    }
}

TEST(tomography, choi_examples) {
    const Vector id = double_ket(identity(3)).vector();
    ASSERT_EQ(choi_of(identity_channel(3)).carrier().matrix(), id * id.adjoint());

    const ChoiMatrix deph = choi_of(dephasing_channel(3));
    Matrix expected = Matrix::Zero(9, 9);
    for (int n = 0; n < 3; ++n) {
        expected(4 * n, 4 * n) = 1.0;
    }
    ASSERT_EQ(deph.carrier().matrix(), expected);
    Eigen::ComplexEigenSolver<Matrix> es(deph.carrier().matrix());
    ASSERT_EQ((es.eigenvalues().cwiseAbs().array() > 1e-12).count(), 3);

    const Eigen::JacobiSVD<Matrix> svd(choi_of(random_unitary_channel(4, 5)).carrier().matrix());
    ASSERT_NEAR(svd.singularValues()(0), 4.0, 1e-12);
    ASSERT_LE(svd.singularValues()(1), 1e-12);

    for (const Channel &ch : channel_library(4)) {
        ASSERT_TRUE(check_choi(choi_of(ch)).passes(1e-10)) << ch.name();
    }
}

TEST(tomography, vectorize_round_trip) {
    std::mt19937_64 rng(63);
    const Matrix m = random_matrix(rng, 9, 9);
    ASSERT_EQ(unvectorize(vectorize(m), 9), m);
    ASSERT_EQ(vectorize(m)(10), m(1, 1));
    ASSERT_EQ(vectorize(m)(9), m(1, 0));
    ASSERT_THROW(unvectorize(Vector::Zero(10), 3), std::invalid_argument);
}

TEST(tomography, forward_map_examples) {
    const ForwardMap tb = forward_map(twin_beam(0.5, 2));
    ASSERT_EQ(tb.matrix.rows(), 16);
    ASSERT_EQ(tb.rank, 16u);
    const ForwardMap prod = forward_map(product_state(vacuum_state(2), thermal_state(0.4, 2)));
    ASSERT_EQ(prod.rank, 4u);

    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = random_dim(rng, 2, 4);
        const BipartiteOperator r = random_density(rng, d);
        const ForwardMap map = forward_map(r);
        for (const Channel &ch : channel_library(d)) {
            const Vector predicted = map.matrix * vectorize(choi_of(ch).carrier().matrix());
            ASSERT_LE(max_abs(predicted - vectorize(apply_channel_first(r, ch).matrix())), 1e-12);
        }
    }
    ASSERT_THROW(forward_map(twin_beam(0.5, 7)), std::invalid_argument);
}

TEST(tomography, forward_map_spectrum_is_check_spectrum_repeated) {
    std::mt19937_64 rng(65);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = random_dim(rng, 2, 4);
        const BipartiteOperator r = random_density(rng, d);
        const ForwardMap map = forward_map(r);
        const std::vector<double> check = check_operator(r).singular_values();
        for (std::size_t i = 0; i < map.singular_values.size(); ++i) {
            ASSERT_NEAR(map.singular_values[i], check[i / (d * d)], 1e-12);
        }
        ASSERT_NEAR(map.sigma_min, check.back(), 1e-12);
    }
}

TEST(tomography, rank_deficiency_carries_over) {
    for (std::size_t d = 2; d <= 4; ++d) {
        const std::vector<BipartiteOperator> states{
            product_state(vacuum_state(d), vacuum_state(d)), product_state(thermal_state(0.5, d), fock_state(1, d)),
            correlated_fock(0.4, d), twin_beam(0.5, d), split_thermal(0.5, d)};
        for (const auto &r : states) {
            const FaithfulnessReport rep = classify(check_operator(r));
            const ForwardMap map = forward_map(r);
            ASSERT_EQ(map.rank, d * d * rep.numerical_rank);
            if (!rep.full_rank) {
                ASSERT_LT(map.rank, d * d * d * d);
            }
        }
    }
}

TEST(tomography, reconstruct_examples) {
    const DensityOperator tb = twin_beam(0.5, 3);
    const Channel phase = phase_rotation_channel(0.7, 3);
    const ReconstructionResult ok = reconstruct(tb, apply_channel_first(tb, phase));
    ASSERT_TRUE(ok.recovered);
    ASSERT_GE(ok.residual_norm, 0.0);
    ASSERT_LE(max_diff(ok.choi_estimate.carrier().matrix(), choi_of(phase).carrier().matrix()), 1e-8);

    const ReconstructionResult ident = reconstruct(tb, apply_channel_first(tb, identity_channel(3)));
    ASSERT_TRUE(ident.recovered);
    ASSERT_LE(max_diff(ident.choi_estimate.carrier().matrix(), choi_of(identity_channel(3)).carrier().matrix()), 1e-8);

    const DensityOperator prod = product_state(thermal_state(0.5, 3), vacuum_state(3));
    const ReconstructionResult bad = reconstruct(prod, apply_channel_first(prod, phase));
    ASSERT_FALSE(bad.recovered);
    ASSERT_EQ(bad.rank, 9u);
    ASSERT_GT(max_diff(bad.choi_estimate.carrier().matrix(), choi_of(phase).carrier().matrix()), 0.1);
    ASSERT_THROW(reconstruct(tb, twin_beam(0.5, 4)), std::invalid_argument);
}

TEST(tomography, round_trip_property) {
    std::mt19937_64 rng(66);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = random_dim(rng, 2, 4);
        const DensityOperator r = (trial % 2 == 0) ? twin_beam(0.6, d) : split_thermal(0.7, d);
        const Channel ch = (trial % 3 == 0)   ? random_unitary_channel(d, 1000 + trial)
                           : (trial % 3 == 1) ? dephasing_channel(d)
                                              : attenuation_channel(0.3 + 0.02 * trial, d);
        const ReconstructionResult res = reconstruct(r, apply_channel_first(r, ch));
        ASSERT_TRUE(res.recovered);
        const double err = max_diff(res.choi_estimate.carrier().matrix(), choi_of(ch).carrier().matrix());
        ASSERT_LE(err, 1e-8);
        ASSERT_LE(check_choi(res.choi_estimate).trace_preservation_error, 1e-9);
    }
}

TEST(tomography, noise_study_examples) {
    const DensityOperator tb = twin_beam(0.5, 3);
    const NoiseStudy s = noise_amplification_study(tb, phase_rotation_channel(0.7, 3), {0.0, 1e-6}, 100, 7, 0.5);
    ASSERT_TRUE(s.recovered);
    ASSERT_EQ(s.rows.size(), 200u);
    for (std::size_t t = 0; t < 100; ++t) {
        ASSERT_LE(s.rows[t].choi_error, 1e-12);
    }
    const double bound = 1.0 / s.sigma_min;
    for (std::size_t t = 100; t < 200; ++t) {
        ASSERT_LE(s.rows[t].choi_error / 1e-6, bound * 1.5);
    }
    ASSERT_TRUE(s.summary[1].within_bound);
    ASSERT_NEAR(s.summary[1].bound_slope, bound, 1e-12);
    ASSERT_NEAR(s.chi, chi(moments_of(tb)), 1e-15);
}

TEST(tomography, noise_study_is_deterministic_and_thread_independent) {
    const DensityOperator tb = twin_beam(0.5, 3);
    const Channel ch = attenuation_channel(0.6, 3);
    setenv("CVFAITH_THREADS", "1", 1);
    const NoiseStudy a = noise_amplification_study(tb, ch, {1e-6}, 40, 3);
    setenv("CVFAITH_THREADS", "3", 1);
    const NoiseStudy b = noise_amplification_study(tb, ch, {1e-6}, 40, 3);
    unsetenv("CVFAITH_THREADS");
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        ASSERT_EQ(a.rows[i].choi_error, b.rows[i].choi_error);
    }
    const NoiseStudy c = noise_amplification_study(tb, ch, {1e-6}, 40, 4);
    ASSERT_NE(a.rows[0].choi_error, c.rows[0].choi_error);
}

TEST(tomography, noise_trend_over_lambda) {
    const NoiseTrend trend = twin_beam_noise_trend({0.2, 0.5, 0.8}, 3, phase_rotation_channel(0.7, 3), 1e-6, 100, 11);
    ASSERT_TRUE(trend.monotone_decreasing);
    ASSERT_EQ(trend.studies.size(), 3u);
    for (const auto &s : trend.studies) {
        ASSERT_TRUE(s.summary.front().within_bound);
    }
    ASSERT_LT(trend.studies[0].chi, trend.studies[2].chi);
}
