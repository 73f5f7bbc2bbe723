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


#ifndef CVFAITH_SRC_SVD_HPP
#define CVFAITH_SRC_SVD_HPP

#include <Eigen/Core>

#include "cvfaith/fock.hpp"

namespace cvfaith::detail {

struct Svd {
    Eigen::VectorXd values; // descending
    Matrix u;               // empty unless vectors were requested
    Matrix v;
};

/// LAPACK divide-and-conquer SVD; throws std::runtime_error if it fails to converge.
Svd svd(const Matrix &m, bool vectors);

} // namespace cvfaith::detail

#endif
