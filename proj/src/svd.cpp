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


#include "svd.hpp"

#include <complex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cvfaith::detail {

Svd svd(const Matrix &m, bool vectors) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    Svd out;
    out.values.resize(std::min(rows, cols));
    if (out.values.size() == 0) {
        return out;
    }
    Matrix a = m;
    Matrix vt;
    if (vectors) {
        out.u.resize(rows, rows);
        vt.resize(cols, cols);
    }
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, vectors ? 'A' : 'N', rows, cols, a.data(), rows, out.values.data(),
                       vectors ? out.u.data() : nullptr, rows, vectors ? vt.data() : nullptr, cols);
    if (info != 0) {
        throw std::runtime_error("singular value decomposition failed (zgesdd info " + std::to_string(info) + ")");
    }
    if (vectors) {
        out.v = vt.adjoint();
    }
    return out;
}

} // namespace cvfaith::detail
