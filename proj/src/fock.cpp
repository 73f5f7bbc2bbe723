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

#include "cvfaith/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvfaith/special_functions.hpp"

namespace cvfaith {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_dim(std::size_t d, const char *what) {
    if (d < 2) {
        throw std::invalid_argument(std::string(what) + ": truncation dimension must be at least 2, got " +
                                    std::to_string(d));
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    }
}

std::size_t composite_root(Index n) {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("bipartite operator size " + std::to_string(n) + " is not a perfect square");
    }
    return d;
}

} // namespace

FockOperator::FockOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("FockOperator: matrix must be square");
    }
    require_dim(static_cast<std::size_t>(entries_.rows()), "FockOperator");
    if (!entries_.allFinite()) {
        throw std::invalid_argument("FockOperator: non-finite entries");
    }
}

FockOperator operator*(const FockOperator &a, const FockOperator &b) {
    require_same_dim(a.dim(), b.dim(), "FockOperator product");
    return FockOperator(a.matrix() * b.matrix());
}

FockOperator operator+(const FockOperator &a, const FockOperator &b) {
    require_same_dim(a.dim(), b.dim(), "FockOperator sum");
    return FockOperator(a.matrix() + b.matrix());
}

FockOperator operator*(cplx s, const FockOperator &a) { return FockOperator(s * a.matrix()); }

BipartiteOperator::BipartiteOperator(Matrix entries)
    : BipartiteOperator(composite_root(entries.rows()), std::move(entries)) {}

BipartiteOperator::BipartiteOperator(std::size_t dim, Matrix entries) : dim_(dim), entries_(std::move(entries)) {
    require_dim(dim_, "BipartiteOperator");
    if (entries_.rows() != idx(dim_ * dim_) || entries_.cols() != idx(dim_ * dim_)) {
        throw std::invalid_argument("BipartiteOperator: expected a " + std::to_string(dim_ * dim_) + "x" +
                                    std::to_string(dim_ * dim_) + " matrix");
    }
    if (!entries_.allFinite()) {
        throw std::invalid_argument("BipartiteOperator: non-finite entries");
    }
}

BipartiteOperator operator*(const BipartiteOperator &a, const BipartiteOperator &b) {
    require_same_dim(a.dim(), b.dim(), "BipartiteOperator product");
    return BipartiteOperator(a.dim(), a.matrix() * b.matrix());
}

BipartiteOperator operator+(const BipartiteOperator &a, const BipartiteOperator &b) {
    require_same_dim(a.dim(), b.dim(), "BipartiteOperator sum");
    return BipartiteOperator(a.dim(), a.matrix() + b.matrix());
}

BipartiteOperator operator-(const BipartiteOperator &a, const BipartiteOperator &b) {
    require_same_dim(a.dim(), b.dim(), "BipartiteOperator difference");
    return BipartiteOperator(a.dim(), a.matrix() - b.matrix());
}

BipartiteOperator operator*(cplx s, const BipartiteOperator &a) { return BipartiteOperator(a.dim(), s * a.matrix()); }

DoubleKet::DoubleKet(std::size_t dim, Vector entries) : dim_(dim), entries_(std::move(entries)) {
    require_dim(dim_, "DoubleKet");
    if (entries_.size() != idx(dim_ * dim_)) {
        throw std::invalid_argument("DoubleKet: expected length " + std::to_string(dim_ * dim_));
    }
}

Mode mode_from_index(int which) {
    if (which == 1) {
        return Mode::First;
    }
    if (which == 2) {
        return Mode::Second;
    }
    throw std::invalid_argument("mode selector must be 1 or 2, got " + std::to_string(which));
}

FockOperator identity(std::size_t d) {
    require_dim(d, "identity");
    return FockOperator(Matrix::Identity(idx(d), idx(d)));
}

FockOperator annihilator(std::size_t d) {
    require_dim(d, "annihilator");
    Matrix m = Matrix::Zero(idx(d), idx(d));
    for (std::size_t n = 1; n < d; ++n) {
        m(idx(n - 1), idx(n)) = std::sqrt(static_cast<double>(n));
    }
    return FockOperator(std::move(m));
}

FockOperator creator(std::size_t d) { return annihilator(d).adjoint(); }

FockOperator number_operator(std::size_t d) {
    require_dim(d, "number_operator");
    Matrix m = Matrix::Zero(idx(d), idx(d));
    for (std::size_t n = 0; n < d; ++n) {
        m(idx(n), idx(n)) = static_cast<double>(n);
    }
    return FockOperator(std::move(m));
}

FockOperator parity(std::size_t d) {
    require_dim(d, "parity");
    Matrix m = Matrix::Zero(idx(d), idx(d));
    for (std::size_t n = 0; n < d; ++n) {
        m(idx(n), idx(n)) = (n % 2 == 0) ? 1.0 : -1.0;
    }
    return FockOperator(std::move(m));
}

FockOperator number_power(double lambda, std::size_t d) {
    require_dim(d, "number_power");
    Matrix m = Matrix::Zero(idx(d), idx(d));
    double p = 1.0;
    for (std::size_t n = 0; n < d; ++n) {
        m(idx(n), idx(n)) = p;
        p *= lambda;
    }
    return FockOperator(std::move(m));
}

FockOperator fock_projector(std::size_t n, std::size_t d) {
    require_dim(d, "fock_projector");
    if (n >= d) {
        throw std::invalid_argument("fock_projector: level " + std::to_string(n) + " outside truncation");
    }
    Matrix m = Matrix::Zero(idx(d), idx(d));
    m(idx(n), idx(n)) = 1.0;
    return FockOperator(std::move(m));
}

FockOperator phase_rotation_operator(double theta, std::size_t d) {
    require_dim(d, "phase_rotation_operator");
    Matrix m = Matrix::Zero(idx(d), idx(d));
    for (std::size_t n = 0; n < d; ++n) {
        m(idx(n), idx(n)) = std::polar(1.0, theta * static_cast<double>(n));
    }
    return FockOperator(std::move(m));
}

FockOperator displacement(cplx alpha, std::size_t d) {
    require_dim(d, "displacement");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("displacement: non-finite amplitude");
    }
    const double r = std::abs(alpha);
    if (r == 0.0) {
        return identity(d);
    }
    const double x = r * r;
    const double theta = std::arg(alpha);
    const double log_r = std::log(r);
    Matrix m(idx(d), idx(d));
    for (std::size_t k = 0; k < d; ++k) {
        const auto lag = special::assoc_laguerre_sequence(d - k, k, x);
        const cplx phase_lower = std::polar(1.0, theta * static_cast<double>(k));
        const cplx phase_upper = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(phase_lower);
        for (std::size_t n = 0; n + k < d; ++n) {
            const std::size_t mm = n + k;
            const auto &l = lag[n];
            double value = 0.0;
            if (l.mantissa != 0.0) {
                const double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(mm + 1.0)) +
                                       static_cast<double>(k) * log_r - 0.5 * x + l.log_scale +
                                       std::log(std::abs(l.mantissa));
                value = std::copysign(std::exp(log_mag), l.mantissa);
            }
            m(idx(mm), idx(n)) = value * phase_lower;
            if (k != 0) {
                m(idx(n), idx(mm)) = value * phase_upper;
            }
        }
    }
    return FockOperator(std::move(m));
}

FockOperator displaced_parity(cplx alpha, std::size_t d) {
    Matrix m = displacement(alpha, d).matrix();
    for (Index c = 1; c < m.cols(); c += 2) {
        m.col(c) = -m.col(c);
    }
    return FockOperator(std::move(m));
}

DoubleKet double_ket(const FockOperator &a) {
    const std::size_t d = a.dim();
    Vector v(idx(d * d));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            v(idx(n * d + m)) = a(idx(n), idx(m));
        }
    }
    return DoubleKet(d, std::move(v));
}

FockOperator undouble_ket(const DoubleKet &k) {
    const std::size_t d = k.dim();
    Matrix m(idx(d), idx(d));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t j = 0; j < d; ++j) {
            m(idx(n), idx(j)) = k.vector()(idx(n * d + j));
        }
    }
    return FockOperator(std::move(m));
}

DoubleKet abc_identity_apply(const FockOperator &a, const FockOperator &b, const FockOperator &c) {
    require_same_dim(a.dim(), b.dim(), "abc_identity_apply");
    require_same_dim(a.dim(), c.dim(), "abc_identity_apply");
    return double_ket(FockOperator(a.matrix() * c.matrix() * b.matrix().transpose()));
}

BipartiteOperator swap_operator(std::size_t d) {
    require_dim(d, "swap_operator");
    Matrix e = Matrix::Zero(idx(d * d), idx(d * d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            e(idx(i * d + j), idx(j * d + i)) = 1.0;
        }
    }
    return BipartiteOperator(d, std::move(e));
}

BipartiteOperator partial_transpose(const BipartiteOperator &x, Mode which) {
    const std::size_t d = x.dim();
    Matrix y(idx(d * d), idx(d * d));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            for (std::size_t n2 = 0; n2 < d; ++n2) {
                for (std::size_t m2 = 0; m2 < d; ++m2) {
                    y(idx(n * d + m), idx(n2 * d + m2)) =
                        which == Mode::First ? x.element(n2, m, n, m2) : x.element(n, m2, n2, m);
                }
            }
        }
    }
    return BipartiteOperator(d, std::move(y));
}

BipartiteOperator tensor(const FockOperator &a, const FockOperator &b) {
    require_same_dim(a.dim(), b.dim(), "tensor");
    const std::size_t d = a.dim();
    Matrix k(idx(d * d), idx(d * d));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t n2 = 0; n2 < d; ++n2) {
            k.block(idx(n * d), idx(n2 * d), idx(d), idx(d)) = a(idx(n), idx(n2)) * b.matrix();
        }
    }
    return BipartiteOperator(d, std::move(k));
}

BipartiteOperator bipartite_identity(std::size_t d) {
    require_dim(d, "bipartite_identity");
    return BipartiteOperator(d, Matrix::Identity(idx(d * d), idx(d * d)));
}

BipartiteOperator outer(const DoubleKet &x, const DoubleKet &y) {
    require_same_dim(x.dim(), y.dim(), "outer");
    return BipartiteOperator(x.dim(), x.vector() * y.vector().adjoint());
}

cplx trace_with_product(const BipartiteOperator &x, const FockOperator &a, const FockOperator &b) {
    require_same_dim(x.dim(), a.dim(), "trace_with_product");
    require_same_dim(x.dim(), b.dim(), "trace_with_product");
    const Index d = idx(x.dim());
    const Matrix bt = b.matrix().transpose();
    cplx sum = 0.0;
    for (Index n = 0; n < d; ++n) {
        for (Index n2 = 0; n2 < d; ++n2) {
            const cplx coeff = a(n2, n);
            if (coeff == cplx(0.0)) {
                continue;
            }
            sum += coeff * x.matrix().block(n * d, n2 * d, d, d).cwiseProduct(bt).sum();
        }
    }
    return sum;
}

std::size_t interior_window(std::size_t d) { return std::max<std::size_t>(1, (d + 1) / 2); }

} // namespace cvfaith
