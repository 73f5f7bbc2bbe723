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


#include <cmath>
#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvfaith/container.hpp"
#include "cvfaith/faithfulness.hpp"
#include "cvfaith/phase_space.hpp"
#include "cvfaith/states.hpp"
#include "cvfaith/tomography.hpp"

namespace py = pybind11;
using namespace cvfaith;

namespace {

BipartiteOperator as_bipartite(const Matrix &m) {
    const auto n = static_cast<double>(m.rows());
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(n)));
    if (d * d != static_cast<std::size_t>(m.rows())) {
        throw std::invalid_argument("expected a square matrix of side d*d");
    }
    return BipartiteOperator(d, m);
}

py::dict report_dict(const FaithfulnessReport &r) {
    py::dict out;
    out["rank"] = r.numerical_rank;
    out["full_rank"] = r.full_rank;
    out["sigma_min"] = r.sigma_min;
    out["sigma_max"] = r.sigma_max;
    out["cond"] = r.condition_number;
    out["chi"] = r.chi ? py::object(py::float_(*r.chi)) : py::object(py::none());
    out["method"] = to_string(r.method);
    out["dim"] = r.dim;
    out["tol"] = r.tol;
    return out;
}

py::tuple state_tuple(const DensityOperator &s) { return py::make_tuple(s.carrier().matrix(), s.nominal_trace_deficit()); }

} // namespace

PYBIND11_MODULE(_cvfaith, m) {
    m.doc() = "Faithfulness analysis for two-mode continuous-variable states.";

    static py::exception<NotInvertibleError> not_invertible(m, "NotInvertibleError", PyExc_ArithmeticError);
    static py::exception<GridBoundsError> grid_bounds(m, "GridBoundsError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const NotInvertibleError &e) {
            not_invertible(e.what());
        } catch (const GridBoundsError &e) {
            grid_bounds(e.what());
        }
    });

    // States come back as (matrix, nominal_trace_deficit).
    m.def("twin_beam", [](double lambda, std::size_t d) { return state_tuple(twin_beam(lambda, d)); },
          py::arg("lam"), py::arg("d"));
    m.def("split_thermal",
          [](double sigma2, std::size_t d, std::size_t q) { return state_tuple(split_thermal(sigma2, d, q)); },
          py::arg("sigma2"), py::arg("d"), py::arg("quad_points") = 0);
    m.def("correlated_fock", [](double lambda, std::size_t d) { return state_tuple(correlated_fock(lambda, d)); },
          py::arg("lam"), py::arg("d"));
    m.def(
        "build_state",
        [](const std::string &spec, std::optional<std::size_t> dim) { return state_tuple(build_state(spec, dim).state); },
        py::arg("spec"), py::arg("dim") = py::none());

    m.def("check_operator", [](const Matrix &r) { return check_operator(as_bipartite(r)).carrier().matrix(); });
    m.def("check_singular_values", [](const Matrix &r) { return check_operator(as_bipartite(r)).singular_values(); });
    m.def(
        "analyze", [](const Matrix &r, double tol) { return report_dict(analyze(as_bipartite(r), tol)); },
        py::arg("r"), py::arg("tol") = kDefaultRankTolerance);
    m.def(
        "invert_check",
        [](const Matrix &r, double tol) { return invert_check(check_operator(as_bipartite(r), tol), tol).matrix(); },
        py::arg("r"), py::arg("tol") = kDefaultRankTolerance);
    m.def("chi", [](const Matrix &r) { return chi(moments_of(as_bipartite(r))); });
    m.def(
        "ab_coefficients",
        [](const Matrix &r, double h) {
            const GaussianCoefficients c = ab_coefficients(as_bipartite(r), h);
            return py::make_tuple(c.a, c.b);
        },
        py::arg("r"), py::arg("h") = kDefaultFiniteDifferenceStep);
    m.def("total_photon_number", [](const Matrix &r) { return total_photon_number(as_bipartite(r)); });

    m.def("wigner_point", [](const Matrix &r, cplx a, cplx b) { return wigner_point(as_bipartite(r), a, b); });
    m.def("characteristic_point",
          [](const Matrix &r, cplx a, cplx b) { return characteristic_point(as_bipartite(r), a, b); });
    m.def("wigner_grid", [](const Matrix &r, const std::vector<cplx> &alphas, const std::vector<cplx> &betas) {
        return wigner_grid(as_bipartite(r), alphas, betas).values;
    });
    m.def("characteristic_grid",
          [](const Matrix &r, const std::vector<cplx> &alphas, const std::vector<cplx> &betas) {
              return characteristic_grid(as_bipartite(r), alphas, betas).values;
          });
    m.def("analytic_wigner_twin_beam", &analytic_wigner_twin_beam);
    m.def("analytic_wigner_split_thermal", &analytic_wigner_split_thermal);
    m.def("analytic_wigner_correlated_fock", &analytic_wigner_correlated_fock);
    m.def(
        "gaussian_integral_identity_check",
        [](double sigma2, cplx alpha, cplx gamma) { return gaussian_integral_identity_check(sigma2, alpha, gamma); },
        py::arg("sigma2"), py::arg("alpha"), py::arg("gamma"));

    m.def(
        "choi_of",
        [](const std::string &name, std::size_t d, double param, std::uint64_t seed) {
            return choi_of(channel_by_name(name, d, param, seed)).carrier().matrix();
        },
        py::arg("channel"), py::arg("d"), py::arg("param") = -1.0, py::arg("seed") = 1);
    m.def(
        "apply_channel_first",
        [](const Matrix &r, const std::string &name, double param, std::uint64_t seed) {
            const BipartiteOperator b = as_bipartite(r);
            return apply_channel_first(b, channel_by_name(name, b.dim(), param, seed)).matrix();
        },
        py::arg("r"), py::arg("channel"), py::arg("param") = -1.0, py::arg("seed") = 1);
    m.def(
        "reconstruct",
        [](const Matrix &r, const Matrix &r_out, double tol) {
            const ReconstructionResult res = reconstruct(as_bipartite(r), as_bipartite(r_out), tol);
            py::dict out;
            out["choi"] = res.choi_estimate.carrier().matrix();
            out["residual_norm"] = res.residual_norm;
            out["recovered"] = res.recovered;
            out["rank"] = res.rank;
            out["sigma_min"] = res.sigma_min;
            return out;
        },
        py::arg("r"), py::arg("r_out"), py::arg("tol") = 1e-10);

    m.def("read_matrix", [](const std::string &path) {
        const MatrixRecord rec = read_matrix(path);
        return py::make_tuple(to_string(rec.kind), rec.dim, rec.entries, rec.meta);
    });
    m.def(
        "write_matrix",
        [](const std::string &path, const Matrix &r, const std::string &meta) {
            write_matrix(path, record_of(as_bipartite(r), meta));
        },
        py::arg("path"), py::arg("r"), py::arg("meta") = "{}");
}
