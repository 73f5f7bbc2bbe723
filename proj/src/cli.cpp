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


#include "cvfaith/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvfaith/container.hpp"
#include "cvfaith/faithfulness.hpp"
#include "cvfaith/phase_space.hpp"
#include "cvfaith/tomography.hpp"

namespace cvfaith {

namespace {

using json = nlohmann::json;

struct RunConfig {
    std::optional<std::size_t> dim;
    double tol = kDefaultRankTolerance;
    double grid_extent = 1.0;
    std::size_t grid_points = 5;
    std::uint64_t seed = 1;
    std::string out;

    std::string spec;
    std::string spec_file;
    std::string state_file;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json report_json(const FaithfulnessReport &r) {
    json j = {{"rank", r.numerical_rank}, {"full_rank", r.full_rank}, {"sigma_min", r.sigma_min},
              {"sigma_max", r.sigma_max}, {"cond", r.condition_number}, {"method", to_string(r.method)},
              {"dim", r.dim},           {"tol", r.tol}};
    j["chi"] = r.chi ? json(*r.chi) : json(nullptr);
    if (!std::isfinite(r.condition_number)) {
        j["cond"] = nullptr;
    }
    return j;
}

std::string state_spec_text(const RunConfig &cfg) {
    const int given = int(!cfg.spec.empty()) + int(!cfg.spec_file.empty()) + int(!cfg.state_file.empty());
    if (given != 1) {
        throw SpecError("exactly one of --spec, --spec-file, --state is required");
    }
    if (!cfg.spec.empty()) {
        return cfg.spec;
    }
    if (!cfg.spec_file.empty()) {
        return read_file(cfg.spec_file);
    }
    return json{{"family", "file"}, {"path", cfg.state_file}}.dump();
}

StateBuild load_state(const RunConfig &cfg) { return build_state(state_spec_text(cfg), cfg.dim); }

void emit(const RunConfig &cfg, std::ostream &out, const std::string &content) {
    if (cfg.out.empty()) {
        out << content;
    } else {
        write_file_atomic(cfg.out, content);
    }
}

std::vector<double> parse_list(const std::string &text, const std::string &flag) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw SpecError("flag '" + flag + "': cannot parse '" + item + "' as a number");
        }
    }
    if (values.empty()) {
        throw SpecError("flag '" + flag + "': empty list");
    }
    return values;
}

int cmd_state(const RunConfig &cfg, std::ostream &out) {
    if (cfg.out.empty()) {
        throw SpecError("flag '--out' is required for the state command");
    }
    const StateBuild build = load_state(cfg);
    const json meta = {{"spec", json::parse(build.resolved_spec)},
                       {"nominal_trace_deficit", build.state.nominal_trace_deficit()}};
    write_matrix(cfg.out, record_of(build.state.carrier(), meta.dump()));
    const json summary = {{"path", cfg.out},
                          {"dim", build.state.dim()},
                          {"trace", build.state.carrier().trace().real()},
                          {"nominal_trace_deficit", build.state.nominal_trace_deficit()},
                          {"total_photon_number", total_photon_number(build.state)}};
    out << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_grid(const RunConfig &cfg, GridKind kind, const std::string &reconstruct_path,
             std::optional<std::size_t> reconstruct_dim, std::ostream &out) {
    const StateBuild build = load_state(cfg);
    const SquareAxis axis{cfg.grid_extent, cfg.grid_points};
    const PhaseSpaceGrid grid = kind == GridKind::Wigner ? wigner_grid(build.state, axis, axis)
                                                         : characteristic_grid(build.state, axis, axis);
    const bool with_analytic = kind == GridKind::Wigner && analytic_wigner(build, 0.0, 0.0).has_value();

    std::string csv = "alpha_re,alpha_im,beta_re,beta_im,value_re,value_im";
    csv += with_analytic ? ",analytic\n" : "\n";
    for (std::size_t i = 0; i < grid.alphas.size(); ++i) {
        for (std::size_t j = 0; j < grid.betas.size(); ++j) {
            const cplx a = grid.alphas[i];
            const cplx b = grid.betas[j];
            const cplx v = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            csv += num(a.real()) + "," + num(a.imag()) + "," + num(b.real()) + "," + num(b.imag()) + "," +
                   num(v.real()) + "," + num(v.imag());
            if (with_analytic) {
                csv += "," + num(*analytic_wigner(build, a, b));
            }
            csv += "\n";
        }
    }

    if (!reconstruct_path.empty()) {
        const std::size_t d = reconstruct_dim.value_or(build.state.dim());
        require_reconstruction_grid(grid, d);
        write_matrix(reconstruct_path, record_of(state_from_wigner(grid, d)));
    }
    emit(cfg, out, csv);
    return kExitOk;
}

int cmd_check(const RunConfig &cfg, const std::string &sweep, const std::string &invert_path, std::ostream &out) {
    if (sweep.empty()) {
        const StateBuild build = load_state(cfg);
        const FaithfulnessReport report = analyze(build.state, cfg.tol);
        if (!invert_path.empty()) {
            write_matrix(invert_path, record_of(invert_check(check_operator(build.state, cfg.tol), cfg.tol)));
        }
        emit(cfg, out, report_json(report).dump(2) + "\n");
        return kExitOk;
    }
    const std::string spec = state_spec_text(cfg);
    const json parsed = json::parse(spec, nullptr, false);
    if (!cfg.state_file.empty() || (parsed.is_object() && parsed.value("family", "") == "file")) {
        throw SpecError("flag '--sweep': a stored state cannot be rebuilt at other dimensions");
    }
    json reports = json::array();
    for (double v : parse_list(sweep, "--sweep")) {
        if (!(v >= 2.0) || v != std::floor(v)) {
            throw SpecError("flag '--sweep': dimensions must be integers >= 2");
        }
        const StateBuild build = build_state(spec, static_cast<std::size_t>(v));
        reports.push_back(report_json(analyze(build.state, cfg.tol)));
    }
    emit(cfg, out, reports.dump(2) + "\n");
    return kExitOk;
}

json chi_json(const BipartiteOperator &r, double fd_step) {
    const GaussianMoments m = moments_of(r);
    const GaussianCoefficients fd = ab_coefficients(r, fd_step);
    const GaussianCoefficients exact = ab_from_moments(m);
    return {{"chi", chi(m)},
            {"chi_quadrature", chi_from_quadratures(m)},
            {"a", complex_json(fd.a)},
            {"b", complex_json(fd.b)},
            {"a_moments", complex_json(exact.a)},
            {"b_moments", complex_json(exact.b)},
            {"discriminant", fd.discriminant()},
            {"gaussian_faithful", gaussian_faithful(fd)},
            {"fd_step", fd_step},
            {"total_photon_number", total_photon_number(r)},
            {"moments",
             {{"mean_a", complex_json(m.mean_a)},
              {"mean_b", complex_json(m.mean_b)},
              {"adag_bdag", complex_json(m.adag_bdag)},
              {"a_b", complex_json(m.a_b)},
              {"adag_b", complex_json(m.adag_b)},
              {"a_bdag", complex_json(m.a_bdag)}}}};
}

int cmd_chi(const RunConfig &cfg, double fd_step, std::ostream &out) {
    const StateBuild build = load_state(cfg);
    emit(cfg, out, chi_json(build.state, fd_step).dump(2) + "\n");
    return kExitOk;
}

std::string noise_csv(const std::vector<const NoiseStudy *> &studies) {
    std::string csv = "lambda_or_sigma2,d,epsilon,trial,choi_error,sigma_min,chi\n";
    for (const NoiseStudy *s : studies) {
        for (const NoiseRow &row : s->rows) {
            csv += num(row.lambda_or_sigma2) + "," + std::to_string(row.d) + "," + num(row.epsilon) + "," +
                   std::to_string(row.trial) + "," + num(row.choi_error) + "," + num(row.sigma_min) + "," +
                   num(row.chi) + "\n";
        }
    }
    return csv;
}

json study_json(const NoiseStudy &s) {
    json entries = json::array();
    for (const auto &e : s.summary) {
        entries.push_back({{"epsilon", e.epsilon},
                           {"mean_error", e.mean_error},
                           {"p99_error", e.p99_error},
                           {"mean_slope", e.mean_slope},
                           {"p99_slope", e.p99_slope},
                           {"bound_slope", std::isfinite(e.bound_slope) ? json(e.bound_slope) : json(nullptr)},
                           {"within_bound", e.within_bound}});
    }
    return {{"lambda_or_sigma2", s.lambda_or_sigma2},
            {"d", s.d},
            {"recovered", s.recovered},
            {"sigma_min", s.sigma_min},
            {"chi", s.chi},
            {"epsilons", std::move(entries)}};
}

void emit_study(const RunConfig &cfg, const std::string &summary_path, const std::string &csv, const json &summary,
                std::ostream &out) {
    const std::string text = summary.dump(2) + "\n";
    if (cfg.out.empty()) {
        out << csv;
    } else {
        write_file_atomic(cfg.out, csv);
    }
    if (!summary_path.empty()) {
        write_file_atomic(summary_path, text);
    } else if (!cfg.out.empty()) {
        out << text;
    }
}

struct TomoOptions {
    std::string channel = "phase";
    double channel_param = -1.0;
    std::string epsilons = "0,1e-6";
    std::size_t trials = 100;
    std::string summary;
};

int cmd_tomo(const RunConfig &cfg, const TomoOptions &opt, std::ostream &out) {
    const StateBuild build = load_state(cfg);
    const Channel channel = channel_by_name(opt.channel, build.state.dim(), opt.channel_param, cfg.seed);
    const NoiseStudy study = noise_amplification_study(build.state, channel, parse_list(opt.epsilons, "--epsilons"),
                                                       opt.trials, cfg.seed, build.parameter.value_or(0.0));
    json summary = study_json(study);
    summary["channel"] = opt.channel;
    summary["seed"] = cfg.seed;
    summary["trials"] = opt.trials;
    emit_study(cfg, opt.summary, noise_csv({&study}), summary, out);
    return kExitOk;
}

struct SweepOptions {
    std::string family = "twinbeam";
    std::string values = "0.2,0.5,0.8";
    std::size_t quad_points = 0;
    double fd_step = kDefaultFiniteDifferenceStep;
    bool noise_trend = false;
    double epsilon = 1e-6;
};

int cmd_sweep(const RunConfig &cfg, const SweepOptions &opt, const TomoOptions &tomo, std::ostream &out) {
    const std::vector<double> values = parse_list(opt.values, "--values");
    if (opt.noise_trend) {
        if (opt.family != "twinbeam") {
            throw SpecError("flag '--noise-trend' requires --family twinbeam");
        }
        const std::size_t d = cfg.dim.value_or(3);
        const Channel channel = channel_by_name(tomo.channel, d, tomo.channel_param, cfg.seed);
        const NoiseTrend trend = twin_beam_noise_trend(values, d, channel, opt.epsilon, tomo.trials, cfg.seed);
        json studies = json::array();
        std::vector<const NoiseStudy *> ptrs;
        for (const auto &s : trend.studies) {
            studies.push_back(study_json(s));
            ptrs.push_back(&s);
        }
        const json summary = {{"channel", tomo.channel},
                              {"seed", cfg.seed},
                              {"trials", tomo.trials},
                              {"monotone_decreasing", trend.monotone_decreasing},
                              {"studies", std::move(studies)}};
        emit_study(cfg, tomo.summary, noise_csv(ptrs), summary, out);
        return kExitOk;
    }

    json rows = json::array();
    for (double v : values) {
        json spec = {{"family", opt.family}};
        if (opt.family == "splitthermal") {
            spec["sigma2"] = v;
            spec["quad_points"] = opt.quad_points;
        } else if (opt.family == "twinbeam" || opt.family == "correlatedfock") {
            spec["lambda"] = v;
        } else {
            throw SpecError("flag '--family': sweeps support twinbeam, splitthermal, correlatedfock");
        }
        const StateBuild build = build_state(spec.dump(), cfg.dim);
        const FaithfulnessReport report = analyze(build.state, cfg.tol);
        const GaussianCoefficients fd = ab_coefficients(build.state, opt.fd_step);
        const bool gaussian = gaussian_faithful(fd);
        json row = {{"parameter", v},
                    {"dim", build.state.dim()},
                    {"report", report_json(report)},
                    {"a", complex_json(fd.a)},
                    {"b", complex_json(fd.b)},
                    {"gaussian_faithful", gaussian}};
        if (opt.family != "correlatedfock") {
            row["consistent"] = gaussian == report.full_rank;
        }
        rows.push_back(std::move(row));
    }
    emit(cfg, out, rows.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Faithfulness analysis for two-mode continuous-variable states", "cvfaith"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::size_t dim_value = 0;
    auto *dim_opt = app.add_option("--dim", dim_value, "Fock truncation per mode")->check(CLI::Range(2, 4096));
    app.add_option("--tol", cfg.tol, "Relative singular-value cutoff")->check(CLI::Range(1e-300, 0.999999));
    app.add_option("--grid-extent", cfg.grid_extent, "Half-width of the square grid per plane")
        ->check(CLI::PositiveNumber);
    app.add_option("--grid-points", cfg.grid_points, "Nodes per real axis")->check(CLI::Range(1, 4096));
    app.add_option("--seed", cfg.seed, "Seed for noise and random channels");
    app.add_option("--out", cfg.out, "Output path (stdout when omitted)");
    app.add_option("--spec", cfg.spec, "State specification as JSON text");
    app.add_option("--spec-file", cfg.spec_file, "File holding a JSON state specification");
    app.add_option("--state", cfg.state_file, "Matrix container holding a bipartite state");

    auto *state = app.add_subcommand("state", "Build a state and write it as a matrix container");
    auto *wigner = app.add_subcommand("wigner", "Wigner function on a square grid (CSV)");
    std::string reconstruct_path;
    std::size_t reconstruct_dim = 0;
    auto *reconstruct_dim_opt = wigner->add_option("--reconstruct-dim", reconstruct_dim, "Truncation for --reconstruct");
    wigner->add_option("--reconstruct", reconstruct_path, "Rebuild the state from the grid into this container");
    auto *character = app.add_subcommand("char", "Characteristic function on a square grid (CSV)");
    auto *check = app.add_subcommand("check", "Singular-value faithfulness report (JSON)");
    std::string sweep_dims;
    std::string invert_path;
    check->add_option("--sweep", sweep_dims, "Comma-separated list of truncations");
    check->add_option("--invert", invert_path, "Write the inverse check operator to this container");
    auto *chi_cmd = app.add_subcommand("chi", "Gaussian correlation criterion (JSON)");
    double fd_step = kDefaultFiniteDifferenceStep;
    chi_cmd->add_option("--fd-step", fd_step, "Finite-difference step")->check(CLI::Range(1e-5, 1e-1));

    TomoOptions tomo_opt;
    auto add_tomo_options = [&](CLI::App *sub) {
        sub->add_option("--channel", tomo_opt.channel, "identity, phase, dephasing, attenuation, unitary");
        sub->add_option("--channel-param", tomo_opt.channel_param, "Rotation angle or transmissivity");
        sub->add_option("--trials", tomo_opt.trials, "Monte-Carlo trials per noise level");
        sub->add_option("--summary", tomo_opt.summary, "Path for the JSON summary");
    };
    auto *tomo = app.add_subcommand("tomo", "Channel reconstruction and noise study (CSV + JSON)");
    add_tomo_options(tomo);
    tomo->add_option("--epsilons", tomo_opt.epsilons, "Comma-separated noise magnitudes");

    SweepOptions sweep_opt;
    auto *sweep = app.add_subcommand("sweep", "Parameter sweep of a state family (JSON)");
    add_tomo_options(sweep);
    sweep->add_option("--family", sweep_opt.family, "twinbeam, splitthermal, correlatedfock");
    sweep->add_option("--values", sweep_opt.values, "Comma-separated lambda or sigma2 values");
    sweep->add_option("--quad-points", sweep_opt.quad_points, "Quadrature nodes for splitthermal");
    sweep->add_option("--fd-step", sweep_opt.fd_step, "Finite-difference step")->check(CLI::Range(1e-5, 1e-1));
    sweep->add_flag("--noise-trend", sweep_opt.noise_trend, "Run the twin-beam noise study instead");
    sweep->add_option("--epsilon", sweep_opt.epsilon, "Noise magnitude for --noise-trend");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (*dim_opt) {
        cfg.dim = dim_value;
    }

    try {
        if (*state) {
            return cmd_state(cfg, out);
        }
        if (*wigner) {
            std::optional<std::size_t> rd;
            if (*reconstruct_dim_opt) {
                rd = reconstruct_dim;
            }
            return cmd_grid(cfg, GridKind::Wigner, reconstruct_path, rd, out);
        }
        if (*character) {
            return cmd_grid(cfg, GridKind::Characteristic, "", std::nullopt, out);
        }
        if (*check) {
            return cmd_check(cfg, sweep_dims, invert_path, out);
        }
        if (*chi_cmd) {
            return cmd_chi(cfg, fd_step, out);
        }
        if (*tomo) {
            return cmd_tomo(cfg, tomo_opt, out);
        }
        if (*sweep) {
            return cmd_sweep(cfg, sweep_opt, tomo_opt, out);
        }
    } catch (const NotInvertibleError &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const GridBoundsError &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SpecError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

} // namespace cvfaith
