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


#include "cvfaith/container.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "cvfaith/phase_space.hpp"

namespace cvfaith {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

constexpr char kMagic[4] = {'C', 'V', 'F', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::string &out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_u32(std::string &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

class Reader {
public:
    explicit Reader(const std::string &bytes) : bytes_(bytes) {}

    std::uint64_t u64() { return take(8); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
    double f64() { return std::bit_cast<double>(take(8)); }
    std::string text(std::size_t n) {
        need(n);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            throw FormatError("binary matrix container is truncated");
        }
    }
    std::uint64_t take(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= std::uint64_t(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    const std::string &bytes_;
    std::size_t pos_ = 0;
};

void validate(const MatrixRecord &r) {
    const auto rows = static_cast<std::size_t>(r.entries.rows());
    const auto cols = static_cast<std::size_t>(r.entries.cols());
    bool ok = false;
    switch (r.kind) {
    case MatrixKind::Single:
        ok = rows == r.dim && cols == r.dim;
        break;
    case MatrixKind::Bipartite:
        ok = rows == r.dim * r.dim && cols == r.dim * r.dim;
        break;
    case MatrixKind::DoubleKet:
        ok = rows == r.dim * r.dim && cols == 1;
        break;
    }
    if (!ok) {
        throw FormatError("matrix shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " does not match kind '" + to_string(r.kind) + "' with dim " + std::to_string(r.dim));
    }
    if (!r.entries.allFinite()) {
        throw FormatError("matrix container holds non-finite entries");
    }
}

json parse_meta(const std::string &text) {
    try {
        json meta = json::parse(text);
        if (!meta.is_object()) {
            throw FormatError("matrix meta must be a JSON object");
        }
        return meta;
    } catch (const json::exception &e) {
        throw FormatError(std::string("matrix meta is not valid JSON: ") + e.what());
    }
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

std::string to_string(MatrixKind kind) {
    switch (kind) {
    case MatrixKind::Single:
        return "single";
    case MatrixKind::Bipartite:
        return "bipartite";
    case MatrixKind::DoubleKet:
        return "doubleket";
    }
    return "?";
}

MatrixKind matrix_kind_from_string(const std::string &name) {
    if (name == "single") {
        return MatrixKind::Single;
    }
    if (name == "bipartite") {
        return MatrixKind::Bipartite;
    }
    if (name == "doubleket") {
        return MatrixKind::DoubleKet;
    }
    throw FormatError("unknown matrix kind '" + name + "'");
}

MatrixRecord record_of(const FockOperator &op, std::string meta) {
    return {MatrixKind::Single, op.dim(), op.matrix(), std::move(meta)};
}

MatrixRecord record_of(const BipartiteOperator &op, std::string meta) {
    return {MatrixKind::Bipartite, op.dim(), op.matrix(), std::move(meta)};
}

MatrixRecord record_of(const DoubleKet &ket, std::string meta) {
    return {MatrixKind::DoubleKet, ket.dim(), ket.vector(), std::move(meta)};
}

std::string encode_json(const MatrixRecord &record) {
    validate(record);
    json entries = json::array();
    for (Index i = 0; i < record.entries.rows(); ++i) {
        for (Index j = 0; j < record.entries.cols(); ++j) {
            entries.push_back({record.entries(i, j).real(), record.entries(i, j).imag()});
        }
    }
    json doc = {{"format", "cvfaith-matrix"},
                {"version", kVersion},
                {"kind", to_string(record.kind)},
                {"dim", record.dim},
                {"rows", record.entries.rows()},
                {"cols", record.entries.cols()},
                {"entries", std::move(entries)},
                {"meta", parse_meta(record.meta)}};
    return doc.dump() + "\n";
}

std::string encode_binary(const MatrixRecord &record) {
    validate(record);
    const std::string meta = parse_meta(record.meta).dump();
    std::string out(kMagic, kMagic + 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(record.kind));
    put_u64(out, record.dim);
    put_u64(out, static_cast<std::uint64_t>(record.entries.rows()));
    put_u64(out, static_cast<std::uint64_t>(record.entries.cols()));
    put_u64(out, meta.size());
    out += meta;
    for (Index i = 0; i < record.entries.rows(); ++i) {
        for (Index j = 0; j < record.entries.cols(); ++j) {
            put_u64(out, std::bit_cast<std::uint64_t>(record.entries(i, j).real()));
            put_u64(out, std::bit_cast<std::uint64_t>(record.entries(i, j).imag()));
        }
    }
    return out;
}

MatrixRecord decode(const std::string &bytes) {
    MatrixRecord record;
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
        Reader in(bytes);
        in.text(4);
        if (in.u32() != kVersion) {
            throw FormatError("unsupported binary container version");
        }
        const std::uint32_t kind = in.u32();
        if (kind > 2) {
            throw FormatError("unknown matrix kind code " + std::to_string(kind));
        }
        record.kind = static_cast<MatrixKind>(kind);
        record.dim = in.u64();
        const std::uint64_t rows = in.u64();
        const std::uint64_t cols = in.u64();
        if (rows > (1u << 20) || cols > (1u << 20)) {
            throw FormatError("binary container declares an implausible shape");
        }
        record.meta = in.text(in.u64());
        parse_meta(record.meta);
        record.entries.resize(static_cast<Index>(rows), static_cast<Index>(cols));
        for (Index i = 0; i < record.entries.rows(); ++i) {
            for (Index j = 0; j < record.entries.cols(); ++j) {
                const double re = in.f64();
                const double im = in.f64();
                record.entries(i, j) = cplx(re, im);
            }
        }
        if (!in.done()) {
            throw FormatError("binary container has trailing bytes");
        }
        validate(record);
        return record;
    }

    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception &e) {
        throw FormatError(std::string("matrix file is neither a binary container nor JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "cvfaith-matrix") {
            throw FormatError("field 'format': expected \"cvfaith-matrix\"");
        }
        if (doc.at("version").get<std::uint32_t>() != kVersion) {
            throw FormatError("field 'version': unsupported container version");
        }
        record.kind = matrix_kind_from_string(doc.at("kind").get<std::string>());
        record.dim = doc.at("dim").get<std::size_t>();
        const auto rows = doc.at("rows").get<Index>();
        const auto cols = doc.at("cols").get<Index>();
        const json &entries = doc.at("entries");
        if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows * cols)) {
            throw FormatError("field 'entries': expected rows*cols pairs");
        }
        record.entries.resize(rows, cols);
        for (Index k = 0; k < rows * cols; ++k) {
            const json &pair = entries[static_cast<std::size_t>(k)];
            if (!pair.is_array() || pair.size() != 2) {
                throw FormatError("field 'entries': element " + std::to_string(k) + " is not a [re, im] pair");
            }
            record.entries(k / cols, k % cols) = cplx(pair[0].get<double>(), pair[1].get<double>());
        }
        record.meta = doc.contains("meta") ? doc["meta"].dump() : "{}";
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed matrix JSON: ") + e.what());
    }
    validate(record);
    return record;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw FormatError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw FormatError("cannot move output into place at '" + path + "'");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_matrix(const std::string &path, const MatrixRecord &record) {
    write_file_atomic(path, ends_with(path, ".json") ? encode_json(record) : encode_binary(record));
}

MatrixRecord read_matrix(const std::string &path) { return decode(read_file(path)); }

namespace {

template <typename T>
T field(const json &obj, const std::string &name, const std::string &where) {
    if (!obj.contains(name)) {
        throw SpecError("field '" + where + name + "' is required");
    }
    try {
        return obj.at(name).get<T>();
    } catch (const json::exception &) {
        throw SpecError("field '" + where + name + "' has the wrong type");
    }
}

template <typename T>
std::optional<T> optional_field(const json &obj, const std::string &name, const std::string &where) {
    if (!obj.contains(name)) {
        return std::nullopt;
    }
    return field<T>(obj, name, where);
}

std::size_t positive_dim(const json &obj) {
    const auto v = field<long long>(obj, "dim", "");
    if (v < 2 || v > 4096) {
        throw SpecError("field 'dim' must be an integer in [2, 4096]");
    }
    return static_cast<std::size_t>(v);
}

SingleModeState single_mode(const json &obj, const std::string &where, std::size_t d) {
    if (!obj.is_object()) {
        throw SpecError("field '" + where + "' must be an object");
    }
    const std::string prefix = where + ".";
    const auto kind = field<std::string>(obj, "kind", prefix);
    if (kind == "vacuum") {
        return vacuum_state(d);
    }
    if (kind == "thermal") {
        return thermal_state(field<double>(obj, "nbar", prefix), d);
    }
    if (kind == "coherent") {
        const auto alpha = field<std::vector<double>>(obj, "alpha", prefix);
        if (alpha.size() != 2) {
            throw SpecError("field '" + prefix + "alpha' must be [re, im]");
        }
        return coherent_state(cplx(alpha[0], alpha[1]), d);
    }
    if (kind == "fock") {
        const auto n = field<long long>(obj, "n", prefix);
        if (n < 0) {
            throw SpecError("field '" + prefix + "n' must be non-negative");
        }
        return fock_state(static_cast<std::size_t>(n), d);
    }
    throw SpecError("field '" + prefix + "kind': unknown single-mode state '" + kind + "'");
}

} // namespace

StateBuild build_state(const std::string &spec_json, std::optional<std::size_t> dim_override) {
    json spec;
    try {
        spec = json::parse(spec_json);
    } catch (const json::exception &e) {
        throw SpecError(std::string("state specification is not valid JSON: ") + e.what());
    }
    if (!spec.is_object()) {
        throw SpecError("state specification must be a JSON object");
    }
    const auto family = field<std::string>(spec, "family", "");
    if (dim_override) {
        spec["dim"] = *dim_override;
    }

    const auto wrap = [&](std::function<DensityOperator()> make, std::optional<double> parameter) {
        try {
            DensityOperator state = make();
            return StateBuild{std::move(state), spec.dump(), family, parameter};
        } catch (const SpecError &) {
            throw;
        } catch (const std::invalid_argument &e) {
            throw SpecError(e.what());
        }
    };

    if (family == "twinbeam") {
        const auto lambda = field<double>(spec, "lambda", "");
        if (!(lambda >= 0.0 && lambda < 1.0)) {
            throw SpecError("field 'lambda' must lie in [0, 1)");
        }
        if (!spec.contains("dim")) {
            spec["dim"] = default_dim_twin_beam(lambda);
        }
        const std::size_t d = positive_dim(spec);
        return wrap([&] { return twin_beam(lambda, d); }, lambda);
    }
    if (family == "splitthermal") {
        const auto sigma2 = field<double>(spec, "sigma2", "");
        if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
            throw SpecError("field 'sigma2' must be finite and non-negative");
        }
        if (!spec.contains("dim")) {
            spec["dim"] = default_dim_split_thermal(sigma2);
        }
        const std::size_t d = positive_dim(spec);
        const auto q = optional_field<long long>(spec, "quad_points", "").value_or(0);
        if (q < 0) {
            throw SpecError("field 'quad_points' must be non-negative");
        }
        return wrap([&] { return split_thermal(sigma2, d, static_cast<std::size_t>(q)); }, sigma2);
    }
    if (family == "correlatedfock") {
        const auto lambda = field<double>(spec, "lambda", "");
        if (!(lambda >= 0.0 && lambda < 1.0)) {
            throw SpecError("field 'lambda' must lie in [0, 1)");
        }
        if (!spec.contains("dim")) {
            spec["dim"] = default_dim_correlated_fock(lambda);
        }
        const std::size_t d = positive_dim(spec);
        return wrap([&] { return correlated_fock(lambda, d); }, lambda);
    }
    if (family == "product") {
        const std::size_t d = positive_dim(spec);
        if (!spec.contains("first") || !spec.contains("second")) {
            throw SpecError(std::string("field '") + (spec.contains("first") ? "second" : "first") + "' is required");
        }
        return wrap(
            [&] {
                try {
                    return product_state(single_mode(spec["first"], "first", d), single_mode(spec["second"], "second", d));
                } catch (const SpecError &) {
                    throw;
                } catch (const std::invalid_argument &e) {
                    throw SpecError(e.what());
                }
            },
            std::nullopt);
    }
    if (family == "file") {
        const auto path = field<std::string>(spec, "path", "");
        MatrixRecord record;
        try {
            record = read_matrix(path);
        } catch (const FormatError &e) {
            throw SpecError(std::string("field 'path': ") + e.what());
        }
        if (record.kind != MatrixKind::Bipartite) {
            throw SpecError("field 'path': container holds a " + to_string(record.kind) + " matrix, not a bipartite state");
        }
        if (dim_override && *dim_override != record.dim) {
            throw SpecError("field 'dim': file holds dimension " + std::to_string(record.dim));
        }
        const json meta = parse_meta(record.meta);
        const double deficit = meta.contains("nominal_trace_deficit")
                                   ? meta["nominal_trace_deficit"].get<double>()
                                   : std::abs(1.0 - record.entries.trace().real());
        StateBuild build{DensityOperator(BipartiteOperator(record.dim, record.entries), deficit), spec.dump(), "file",
                         std::nullopt};
        if (meta.contains("spec") && meta["spec"].is_object()) {
            const json &inner = meta["spec"];
            build.family = inner.value("family", "file");
            if (inner.contains("lambda")) {
                build.parameter = inner["lambda"].get<double>();
            } else if (inner.contains("sigma2")) {
                build.parameter = inner["sigma2"].get<double>();
            }
        }
        return build;
    }
    throw SpecError("field 'family': unknown family '" + family + "'");
}

std::optional<double> analytic_wigner(const StateBuild &build, cplx alpha, cplx beta) {
    if (!build.parameter) {
        return std::nullopt;
    }
    if (build.family == "twinbeam") {
        return analytic_wigner_twin_beam(*build.parameter, alpha, beta);
    }
    if (build.family == "splitthermal") {
        return analytic_wigner_split_thermal(*build.parameter, alpha, beta);
    }
    if (build.family == "correlatedfock") {
        return analytic_wigner_correlated_fock(*build.parameter, alpha, beta);
    }
    return std::nullopt;
}

} // namespace cvfaith
