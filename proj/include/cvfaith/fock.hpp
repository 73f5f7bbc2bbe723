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

#ifndef CVFAITH_FOCK_HPP
#define CVFAITH_FOCK_HPP

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace cvfaith {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense operator on a single-mode Fock space truncated to |0>..|d-1>.
class FockOperator {
public:
    explicit FockOperator(Matrix entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix &matrix() const { return entries_; }
    cplx operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

    FockOperator adjoint() const { return FockOperator(entries_.adjoint()); }
    FockOperator transpose() const { return FockOperator(entries_.transpose()); }
    FockOperator conjugate() const { return FockOperator(entries_.conjugate()); }

private:
    Matrix entries_;
};

FockOperator operator*(const FockOperator &a, const FockOperator &b);
FockOperator operator+(const FockOperator &a, const FockOperator &b);
FockOperator operator*(cplx s, const FockOperator &a);

/// Dense operator on the two-mode space.
///
/// The composite index of |n>_a (x) |m>_b is n*d + m (mode a major). Every
/// routine in the library relies on this ordering.
class BipartiteOperator {
public:
    explicit BipartiteOperator(Matrix entries);
    BipartiteOperator(std::size_t dim, Matrix entries);

    std::size_t dim() const { return dim_; }
    const Matrix &matrix() const { return entries_; }
    cplx operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }
    cplx element(std::size_t n, std::size_t m, std::size_t n2, std::size_t m2) const {
        return entries_(static_cast<Eigen::Index>(n * dim_ + m), static_cast<Eigen::Index>(n2 * dim_ + m2));
    }
    cplx trace() const { return entries_.trace(); }

private:
    std::size_t dim_;
    Matrix entries_;
};

BipartiteOperator operator*(const BipartiteOperator &a, const BipartiteOperator &b);
BipartiteOperator operator+(const BipartiteOperator &a, const BipartiteOperator &b);
BipartiteOperator operator-(const BipartiteOperator &a, const BipartiteOperator &b);
BipartiteOperator operator*(cplx s, const BipartiteOperator &a);

/// Vectorized operator |A>> with component <n|A|m> at index n*d + m.
class DoubleKet {
public:
    DoubleKet(std::size_t dim, Vector entries);

    std::size_t dim() const { return dim_; }
    const Vector &vector() const { return entries_; }

private:
    std::size_t dim_;
    Vector entries_;
};

enum class Mode { First = 1, Second = 2 };

/// Parses 1 or 2; anything else is rejected.
Mode mode_from_index(int which);

FockOperator identity(std::size_t d);
FockOperator annihilator(std::size_t d);
FockOperator creator(std::size_t d);
FockOperator number_operator(std::size_t d);
FockOperator parity(std::size_t d);
/// lambda^{a^dagger a}, i.e. diag(lambda^n). 0^0 is taken as 1.
FockOperator number_power(double lambda, std::size_t d);
FockOperator fock_projector(std::size_t n, std::size_t d);
FockOperator phase_rotation_operator(double theta, std::size_t d);

/// Truncated matrix of D(alpha) = exp(alpha a^dagger - alpha^* a).
///
/// Elements come from the closed Laguerre form, so every element with
/// indices below d is exact; only unitarity suffers from truncation, and only
/// near the top of the index range.
FockOperator displacement(cplx alpha, std::size_t d);

/// D(alpha) (-1)^{a^dagger a}, the kernel of the Cahill-Glauber transform.
FockOperator displaced_parity(cplx alpha, std::size_t d);

DoubleKet double_ket(const FockOperator &a);
FockOperator undouble_ket(const DoubleKet &k);

/// (A (x) B)|C>> evaluated through |A C B^T>>.
DoubleKet abc_identity_apply(const FockOperator &a, const FockOperator &b, const FockOperator &c);

BipartiteOperator swap_operator(std::size_t d);
BipartiteOperator partial_transpose(const BipartiteOperator &x, Mode which);
BipartiteOperator tensor(const FockOperator &a, const FockOperator &b);
BipartiteOperator bipartite_identity(std::size_t d);
/// |x>><<y|
BipartiteOperator outer(const DoubleKet &x, const DoubleKet &y);

/// Tr[X (A (x) B)] without materializing the Kronecker product.
cplx trace_with_product(const BipartiteOperator &x, const FockOperator &a, const FockOperator &b);

/// Number of indices considered free of truncation artifacts (the lower half).
std::size_t interior_window(std::size_t d);

} // namespace cvfaith

#endif
