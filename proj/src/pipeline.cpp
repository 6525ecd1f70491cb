#include "smx/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace smx {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config (de)serialisation

std::string kind_name(FieldRecipe::Kind kind) {
    switch (kind) {
        case FieldRecipe::Kind::constant: return "constant";
        case FieldRecipe::Kind::sine_bump: return "sine_bump";
        case FieldRecipe::Kind::scaled_to_m: return "scaled_to_m";
    }
    return "constant";
}

FieldRecipe::Kind kind_from_name(const std::string& name) {
    if (name == "constant") return FieldRecipe::Kind::constant;
    if (name == "sine_bump") return FieldRecipe::Kind::sine_bump;
    if (name == "scaled_to_m") return FieldRecipe::Kind::scaled_to_m;
    throw ConfigError("unknown field kind '" + name + "'");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json recipe_to_json(const FieldRecipe& r) { return {{"kind", kind_name(r.kind)}, {"value", r.value}}; }

FieldRecipe recipe_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"kind", "value"}, where);
    FieldRecipe r;
    r.kind = kind_from_name(j.at("kind").get<std::string>());
    r.value = j.at("value").get<double>();
    return r;
}

std::string metric_name(GradientMetric m) { return m == GradientMetric::l2 ? "l2" : "sobolev"; }

GradientMetric metric_from_name(const std::string& name) {
    if (name == "l2") return GradientMetric::l2;
    if (name == "sobolev") return GradientMetric::sobolev;
    throw ConfigError("unknown gradient metric '" + name + "'");
}

// ---------------------------------------------------------------------------
// Report (de)serialisation

json ball_to_json(const BallSpec& b) {
    return {{"c1", b.c1}, {"c2", b.c2},       {"r1", b.r1},
            {"m", b.m},   {"p", b.p},         {"sample_count", b.sample_count},
            {"seed", b.seed}};
}

BallSpec ball_from_json(const json& j) {
    BallSpec b;
    b.c1 = j.at("c1").get<double>();
    b.c2 = j.at("c2").get<double>();
    b.r1 = j.at("r1").get<double>();
    b.m = j.at("m").get<double>();
    b.p = j.at("p").get<double>();
    b.sample_count = j.at("sample_count").get<int>();
    b.seed = j.at("seed").get<std::uint64_t>();
    return b;
}

json verification_to_json(const VerificationReport& v) {
    return {{"fixed_point_rel_residual", v.fixed_point_rel_residual},
            {"pde_rel_residual", v.pde_rel_residual},
            {"u2_in_ball", v.u2_in_ball},
            {"u1_w2n", v.u1_w2n},
            {"u2_w2n", v.u2_w2n},
            {"vi_samples", v.vi_samples},
            {"vi_violations", v.vi_violations},
            {"phi_nonneg_ok", v.phi_nonneg_ok},
            {"phi_scaling_ok", v.phi_scaling_ok},
            {"phi_bound_ok", v.phi_bound_ok},
            {"phi_bound_constant", v.phi_bound_constant},
            {"vi_gap_at_u2", v.vi_gap_at_u2},
            {"convexity_gap", v.convexity_gap},
            {"inequality_pair_ok", v.inequality_pair_ok},
            {"closure_constant", v.closure_constant},
            {"closure_ok", v.closure_ok},
            {"u1_l2", v.u1_l2},
            {"passed", v.passed}};
}

VerificationReport verification_from_json(const json& j) {
    VerificationReport v;
    v.fixed_point_rel_residual = j.at("fixed_point_rel_residual").get<double>();
    v.pde_rel_residual = j.at("pde_rel_residual").get<double>();
    v.u2_in_ball = j.at("u2_in_ball").get<bool>();
    v.u1_w2n = j.at("u1_w2n").get<double>();
    v.u2_w2n = j.at("u2_w2n").get<double>();
    v.vi_samples = j.at("vi_samples").get<int>();
    v.vi_violations = j.at("vi_violations").get<int>();
    v.phi_nonneg_ok = j.at("phi_nonneg_ok").get<bool>();
    v.phi_scaling_ok = j.at("phi_scaling_ok").get<bool>();
    v.phi_bound_ok = j.at("phi_bound_ok").get<bool>();
    v.phi_bound_constant = j.at("phi_bound_constant").get<double>();
    v.vi_gap_at_u2 = j.at("vi_gap_at_u2").get<double>();
    v.convexity_gap = j.at("convexity_gap").get<double>();
    v.inequality_pair_ok = j.at("inequality_pair_ok").get<bool>();
    v.closure_constant = j.at("closure_constant").get<double>();
    v.closure_ok = j.at("closure_ok").get<bool>();
    v.u1_l2 = j.at("u1_l2").get<double>();
    v.passed = j.at("passed").get<bool>();
    return v;
}

ScalarField build_field(const DomainGrid& grid, const FieldRecipe& recipe) {
    constexpr double pi = std::numbers::pi;
    switch (recipe.kind) {
        case FieldRecipe::Kind::constant: return ScalarField::constant(grid, recipe.value);
        case FieldRecipe::Kind::sine_bump:
            return ScalarField::from_function(grid, [a = recipe.value](double x, double y, double z) {
                return a * std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * z);
            });
        case FieldRecipe::Kind::scaled_to_m: break;
    }
    throw ConfigError("scaled_to_m needs the admissible bound; build it after compute_r1");
}

template <typename Fn>
auto run_stage(const std::string& name, std::map<std::string, double>& wall_time, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
        auto out = fn();
        wall_time[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    } catch (const ForcingTooLargeError&) {
        throw;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
    if (schema_version != kSchemaVersion) {
        throw ConfigError("unsupported schema_version " + std::to_string(schema_version) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
    if (grid_n < 3) throw ConfigError("grid_n must be >= 3");
    if (!(p > 1.0)) throw ConfigError("p must be > 1");
    if (K.kind == FieldRecipe::Kind::scaled_to_m) throw ConfigError("K does not accept scaled_to_m");
    if (!(K.value >= 0.0)) throw ConfigError("K must be nonnegative");
    if (h.kind == FieldRecipe::Kind::scaled_to_m) {
        if (!(h.value > 0.0 && h.value <= 1.0)) throw ConfigError("h scaled_to_m fraction must lie in (0,1]");
    } else if (!(h.value > 0.0)) {
        throw ConfigError("h must be positive");
    }
    if (!(safety >= 1.0)) throw ConfigError("safety must be >= 1");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    if (verify.vi_samples < 1 || verify.phi_calibration_samples < 1) throw ConfigError("verify sample counts must be >= 1");
    try {
        linear.validate();
        minimize.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig config_from_json(const json& j) {
    try {
        reject_unknown_keys(j,
                            {"schema_version", "grid_n", "p", "K", "h", "safety", "samples", "seed", "linear",
                             "minimize", "verify", "output_path"},
                            "config");
        ExperimentConfig c;
        c.schema_version = j.at("schema_version").get<int>();
        c.grid_n = j.at("grid_n").get<int>();
        c.p = j.at("p").get<double>();
        c.K = recipe_from_json(j.at("K"), "K");
        c.h = recipe_from_json(j.at("h"), "h");
        read_opt(j, "safety", c.safety);
        read_opt(j, "samples", c.samples);
        read_opt(j, "seed", c.seed);
        read_opt(j, "output_path", c.output_path);
        if (j.contains("linear")) {
            const json& l = j.at("linear");
            reject_unknown_keys(l, {"rel_tol", "max_iters"}, "linear");
            read_opt(l, "rel_tol", c.linear.rel_tol);
            if (l.contains("max_iters") && !l.at("max_iters").is_null()) c.linear.max_iters = l.at("max_iters").get<int>();
        }
        if (j.contains("minimize")) {
            const json& m = j.at("minimize");
            reject_unknown_keys(m,
                                {"max_iters", "grad_tol", "energy_tol", "backtrack_factor", "initial_step",
                                 "max_backtracks", "metric"},
                                "minimize");
            read_opt(m, "max_iters", c.minimize.max_iters);
            read_opt(m, "grad_tol", c.minimize.grad_tol);
            read_opt(m, "energy_tol", c.minimize.energy_tol);
            read_opt(m, "backtrack_factor", c.minimize.backtrack_factor);
            read_opt(m, "initial_step", c.minimize.initial_step);
            read_opt(m, "max_backtracks", c.minimize.max_backtracks);
            if (m.contains("metric")) c.minimize.metric = metric_from_name(m.at("metric").get<std::string>());
        }
        if (j.contains("verify")) {
            const json& v = j.at("verify");
            reject_unknown_keys(v,
                                {"vi_samples", "fixed_point_tol", "pde_tol", "phi_calibration_samples",
                                 "phi_calibration_safety", "phi_scaling_t"},
                                "verify");
            read_opt(v, "vi_samples", c.verify.vi_samples);
            read_opt(v, "fixed_point_tol", c.verify.fixed_point_tol);
            read_opt(v, "pde_tol", c.verify.pde_tol);
            read_opt(v, "phi_calibration_samples", c.verify.phi_calibration_samples);
            read_opt(v, "phi_calibration_safety", c.verify.phi_calibration_safety);
            read_opt(v, "phi_scaling_t", c.verify.phi_scaling_t);
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& c) {
    json linear = {{"rel_tol", c.linear.rel_tol}, {"max_iters", nullptr}};
    if (c.linear.max_iters) linear["max_iters"] = *c.linear.max_iters;
    return {{"schema_version", c.schema_version},
            {"grid_n", c.grid_n},
            {"p", c.p},
            {"K", recipe_to_json(c.K)},
            {"h", recipe_to_json(c.h)},
            {"safety", c.safety},
            {"samples", c.samples},
            {"seed", c.seed},
            {"linear", linear},
            {"minimize",
             {{"max_iters", c.minimize.max_iters},
              {"grad_tol", c.minimize.grad_tol},
              {"energy_tol", c.minimize.energy_tol},
              {"backtrack_factor", c.minimize.backtrack_factor},
              {"initial_step", c.minimize.initial_step},
              {"max_backtracks", c.minimize.max_backtracks},
              {"metric", metric_name(c.minimize.metric)}}},
            {"verify",
             {{"vi_samples", c.verify.vi_samples},
              {"fixed_point_tol", c.verify.fixed_point_tol},
              {"pde_tol", c.verify.pde_tol},
              {"phi_calibration_samples", c.verify.phi_calibration_samples},
              {"phi_calibration_safety", c.verify.phi_calibration_safety},
              {"phi_scaling_t", c.verify.phi_scaling_t}}},
            {"output_path", c.output_path}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json report_to_json(const SolveReport& r) {
    return {{"version", r.version},
            {"config", config_to_json(r.config)},
            {"ball", ball_to_json(r.ball)},
            {"estimation", {{"max_ratio1", r.max_ratio1}, {"max_ratio2", r.max_ratio2}}},
            {"h_norm", r.h_norm},
            {"beta", r.beta},
            {"minimize",
             {{"iterations", r.trace_summary.iterations},
              {"converged", r.trace_summary.converged},
              {"on_boundary", r.trace_summary.on_boundary},
              {"stop_reason", r.trace_summary.stop_reason},
              {"initial_energy", r.trace_summary.initial_energy},
              {"final_energy", r.trace_summary.final_energy}}},
            {"verification", verification_to_json(r.verification)},
            {"wall_time", r.wall_time},
            {"seeds",
             {{"estimation", r.seeds.estimation},
              {"minimize", r.seeds.minimize},
              {"verification", r.seeds.verification}}}};
}

SolveReport report_from_json(const json& j) {
    SolveReport r;
    r.version = j.at("version").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.ball = ball_from_json(j.at("ball"));
    r.max_ratio1 = j.at("estimation").at("max_ratio1").get<double>();
    r.max_ratio2 = j.at("estimation").at("max_ratio2").get<double>();
    r.h_norm = j.at("h_norm").get<double>();
    r.beta = j.at("beta").get<double>();
    const json& m = j.at("minimize");
    r.trace_summary.iterations = m.at("iterations").get<int>();
    r.trace_summary.converged = m.at("converged").get<bool>();
    r.trace_summary.on_boundary = m.at("on_boundary").get<bool>();
    r.trace_summary.stop_reason = m.at("stop_reason").get<std::string>();
    r.trace_summary.initial_energy = m.at("initial_energy").get<double>();
    r.trace_summary.final_energy = m.at("final_energy").get<double>();
    r.verification = verification_from_json(j.at("verification"));
    r.wall_time = j.at("wall_time").get<std::map<std::string, double>>();
    const json& s = j.at("seeds");
    r.seeds.estimation = s.at("estimation").get<std::uint64_t>();
    r.seeds.minimize = s.at("minimize").get<std::uint64_t>();
    r.seeds.verification = s.at("verification").get<std::uint64_t>();
    return r;
}

ScalarField unit_sine_bump(const DomainGrid& grid) {
    ScalarField bump = build_field(grid, {FieldRecipe::Kind::sine_bump, 1.0});
    return (1.0 / lp_norm(bump, 3.0)) * bump;
}

SolveReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    SolveReport report;
    report.config = config;
    report.seeds = {config.seed, config.seed, config.seed + 0x5bd1e995ULL};

    const DomainGrid grid(config.grid_n);
    const bool scaled = config.h.kind == FieldRecipe::Kind::scaled_to_m;
    // The constants do not depend on h; a unit bump stands in until m is known.
    ProblemSpec spec = ProblemSpec::create(config.p, build_field(grid, config.K),
                                           scaled ? unit_sine_bump(grid) : build_field(grid, config.h), config.linear);

    const ConstantEstimate est = run_stage("estimate_constants", report.wall_time, [&] {
        return estimate_constants(spec, config.samples, report.seeds.estimation, config.safety);
    });
    report.max_ratio1 = est.max_ratio1;
    report.max_ratio2 = est.max_ratio2;

    report.ball = run_stage("compute_r1", report.wall_time, [&] {
        return make_ball(est.c1, est.c2, config.p, est.used, report.seeds.estimation);
    });

    spec = run_stage("admit_forcing", report.wall_time, [&] {
        if (scaled) return spec.with_forcing((config.h.value * report.ball.m) * unit_sine_bump(grid));
        const double norm = lp_norm(spec.h(), 3.0);
        if (norm > report.ball.m) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "forcing too large: ||h||_L3 = " << norm << " exceeds the admissible bound m = " << report.ball.m
                << "; rescale h below m";
            throw ForcingTooLargeError(msg.str(), norm, report.ball.m);
        }
        return spec;
    });
    report.h_norm = lp_norm(spec.h(), 3.0);

    MinimizeOptions mopts = config.minimize;
    mopts.seed = report.seeds.minimize;
    const MinimizeResult result =
        run_stage("minimize", report.wall_time, [&] { return minimize(spec, report.ball, mopts); });
    report.beta = result.beta;
    report.trace = result.trace;
    report.trace_summary = {result.iterations,
                            result.converged,
                            result.on_boundary,
                            std::string(to_string(result.stop_reason)),
                            result.trace.front().energy,
                            result.trace.back().energy};

    VerifyOptions vopts = config.verify;
    vopts.seed = report.seeds.verification;
    report.verification =
        run_stage("verify", report.wall_time, [&] { return verify(result.u1, spec, report.ball, vopts); });
    return report;
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
    std::ostringstream os;
    os << "iteration,energy,step,displacement\n";
    for (const TraceEntry& t : trace) {
        os << t.iteration << ',' << format_double(t.energy) << ',' << format_double(t.step) << ','
           << format_double(t.displacement) << '\n';
    }
    return os.str();
}

void write_outputs(const SolveReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "report.json") << report_to_json(report).dump(2) << '\n';
    std::ofstream(dir / "trace.csv") << trace_csv(report.trace);
}

double manufactured_poisson_error(int n, const LinearSolveOptions& opts) {
    constexpr double pi = std::numbers::pi;
    const DomainGrid grid(n);
    const ScalarField exact = first_eigenfunction(grid);
    const ScalarField solution = solve_dirichlet_poisson(3.0 * pi * pi * exact, opts).w;
    return lp_norm(solution - exact, 2.0) / lp_norm(exact, 2.0);
}

std::vector<StudyRow> convergence_study(const ExperimentConfig& base, const std::vector<int>& grids) {
    if (grids.empty()) throw ConfigError("study needs at least one grid");
    for (std::size_t i = 0; i < grids.size(); ++i) {
        if (grids[i] < 3) throw ConfigError("study grids must be >= 3");
        if (i > 0 && grids[i] <= grids[i - 1]) throw ConfigError("study grids must be strictly increasing");
    }

    std::vector<StudyRow> rows;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        StudyRow row;
        row.n = grids[i];
        try {
            row.manufactured_error = manufactured_poisson_error(row.n, base.linear);
            if (i > 0 && rows.back().manufactured_error) {
                row.observed_order = std::log(*rows.back().manufactured_error / *row.manufactured_error) /
                                     std::log(static_cast<double>(row.n) / rows.back().n);
            }
            ExperimentConfig cfg = base;
            cfg.grid_n = row.n;
            const SolveReport rep = run_experiment(cfg);
            row.beta = rep.beta;
            row.pde_rel_residual = rep.verification.pde_rel_residual;
            row.passed = rep.verification.passed;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::ostringstream os;
    os << "n,manufactured_l2_error,observed_order,beta,pde_rel_residual,passed,error\n";
    for (const StudyRow& r : rows) {
        std::string err = r.error;
        for (char& ch : err) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        os << r.n << ',' << opt(r.manufactured_error) << ',' << opt(r.observed_order) << ',' << opt(r.beta) << ','
           << opt(r.pde_rel_residual) << ',' << (r.passed ? (*r.passed ? "true" : "false") : "") << ',' << err
           << '\n';
    }
    return os.str();
}

}  // namespace smx
