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


#ifndef CVFAITH_CONTAINER_HPP
#define CVFAITH_CONTAINER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "cvfaith/fock.hpp"
#include "cvfaith/states.hpp"

namespace cvfaith {

// Matrix container.
//
// JSON (chosen for paths ending in .json):
//   {"format": "cvfaith-matrix", "version": 1, "kind": "bipartite",
//    "dim": d, "rows": r, "cols": c, "entries": [[re, im], ...], "meta": {...}}
//
// Binary (every other path), little endian:
//   "CVFM" | u32 version | u32 kind (0 single, 1 bipartite, 2 doubleket)
//   | u64 dim | u64 rows | u64 cols | u64 meta_len | meta (JSON text)
//   | rows*cols pairs of f64 (re, im)
//
// Entries are row-major in both. Doubles are written with enough digits to
// round-trip exactly.

enum class MatrixKind { Single, Bipartite, DoubleKet };

std::string to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(const std::string &name);

/// Raised for unreadable, malformed or inconsistent inputs.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MatrixRecord {
    MatrixKind kind = MatrixKind::Bipartite;
    std::size_t dim = 0;
    Matrix entries;
    std::string meta = "{}"; // JSON object text
};

MatrixRecord record_of(const FockOperator &op, std::string meta = "{}");
MatrixRecord record_of(const BipartiteOperator &op, std::string meta = "{}");
MatrixRecord record_of(const DoubleKet &ket, std::string meta = "{}");

std::string encode_json(const MatrixRecord &record);
std::string encode_binary(const MatrixRecord &record);
MatrixRecord decode(const std::string &bytes);

void write_matrix(const std::string &path, const MatrixRecord &record);
MatrixRecord read_matrix(const std::string &path);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

// State specifications, e.g.
//   {"family": "twinbeam", "lambda": 0.5, "dim": 10}
//   {"family": "splitthermal", "sigma2": 0.5, "dim": 25, "quad_points": 64}
//   {"family": "correlatedfock", "lambda": 0.4, "dim": 6}
//   {"family": "product", "dim": 8, "first": {"kind": "thermal", "nbar": 1},
//    "second": {"kind": "coherent", "alpha": [0.3, 0.1]}}
//   {"family": "file", "path": "state.json"}
// Single-mode kinds: vacuum, thermal (nbar), coherent (alpha = [re, im]),
// fock (n). dim defaults per family when omitted (required for product).

/// Raised for state specifications that do not parse; the message names the field.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StateBuild {
    DensityOperator state;
    /// The specification with dim (and quad_points) resolved, as JSON text.
    std::string resolved_spec;
    std::string family;
    /// lambda or sigma2 for the parametrized families.
    std::optional<double> parameter;
};

StateBuild build_state(const std::string &spec_json, std::optional<std::size_t> dim_override = std::nullopt);

/// Analytic Wigner value for the families with a closed form.
std::optional<double> analytic_wigner(const StateBuild &build, cplx alpha, cplx beta);

} // namespace cvfaith

#endif
