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

#ifndef CVFAITH_FAITHFULNESS_HPP
#define CVFAITH_FAITHFULNESS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvfaith/fock.hpp"
#include "cvfaith/states.hpp"

namespace cvfaith {

/// Relative singular-value cutoff used for rank decisions.
inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kDefaultGaussianTolerance = 1e-8;
inline constexpr double kDefaultFiniteDifferenceStep = 1e-3;

/// The operator (E R)^{t2} E whose invertibility decides faithfulness, with
/// its singular values (descending) computed once at construction.
class CheckOperator {
public:
    explicit CheckOperator(BipartiteOperator carrier, double rank_tolerance = kDefaultRankTolerance);

    const BipartiteOperator &carrier() const { return carrier_; }
    const std::vector<double> &singular_values() const { return singular_values_; }
    double rank_tolerance() const { return rank_tolerance_; }
    std::size_t dim() const { return carrier_.dim(); }

private:
    BipartiteOperator carrier_;
    std::vector<double> singular_values_;
    double rank_tolerance_;
};

enum class ReportMethod { Svd, Gaussian };

struct FaithfulnessReport {
    std::size_t dim = 0;
    double tol = kDefaultRankTolerance;
    std::size_t numerical_rank = 0;
    bool full_rank = false;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition_number = 0.0;
    std::optional<double> chi;
    ReportMethod method = ReportMethod::Svd;
};

std::string to_string(ReportMethod method);

class NotInvertibleError : public std::runtime_error {
public:
    explicit NotInvertibleError(FaithfulnessReport report);
    const FaithfulnessReport &report() const { return report_; }

private:
    FaithfulnessReport report_;
};

/// Builds the check operator from R. Both index routes, (E R)^{t2} E and
/// (R^{t2} E)^{t1}, are evaluated and required to agree.
CheckOperator check_operator(const BipartiteOperator &r, double rank_tolerance = kDefaultRankTolerance);

struct OperatorTerm {
    FockOperator first;
    FockOperator second;
};

enum class DecompositionForm {
    Product,   // R = sum A (x) B, check = sum |B>><<A^*|
    DoubleKet, // R = sum |A>><<B|, check = sum A^T (x) B^dagger
};

/// The check operator read off a decomposition of R, without touching R itself.
CheckOperator check_from_decomposition(std::span<const OperatorTerm> terms,
                                       DecompositionForm form = DecompositionForm::Product,
                                       double rank_tolerance = kDefaultRankTolerance);

/// Rank is the number of singular values above tol * sigma_max.
FaithfulnessReport classify(const CheckOperator &check, double tol = kDefaultRankTolerance);

/// SVD pseudo-inverse; throws NotInvertibleError when classify(check, tol)
/// is rank deficient.
BipartiteOperator invert_check(const CheckOperator &check, double tol = kDefaultRankTolerance);

/// <d a^dag b^dag><d a b> + <d a^dag b><d a b^dag>. Throws when the moments
/// break conjugacy by more than 1e-8 or the two evaluation routes disagree.
double chi(const GaussianMoments &moments);

/// The same functional through the quadratures X = (c + c^dag)/2,
/// Y = (c - c^dag)/(2i): 2 (<dXaXb>^2 + <dYaYb>^2 + <dXaYb>^2 + <dYaXb>^2).
double chi_from_quadratures(const GaussianMoments &moments);

/// Coefficients of (alpha beta) and (alpha beta^*) in log Gamma.
struct GaussianCoefficients {
    cplx a;
    cplx b;
    double discriminant() const { return std::norm(a) - std::norm(b); }
};

/// A and B from central finite differences of the characteristic function at
/// the origin (one Richardson step), checked against the moment route
/// A = <d a^dag b^dag>, B = -<d a^dag b>.
GaussianCoefficients ab_coefficients(const BipartiteOperator &r, double h = kDefaultFiniteDifferenceStep);

GaussianCoefficients ab_from_moments(const GaussianMoments &moments);

/// True iff ||A|^2 - |B|^2| > tol.
bool gaussian_faithful(const GaussianCoefficients &coeffs, double tol = kDefaultGaussianTolerance);

/// SVD classification of R with chi attached.
FaithfulnessReport analyze(const BipartiteOperator &r, double tol = kDefaultRankTolerance);

} // namespace cvfaith

#endif
