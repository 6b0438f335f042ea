#include "eit/app/commands.hpp"

#include "eit/app/svg.hpp"
#include "eit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <exception>

namespace eit::app {
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string describe_phi(const ElectrodeConfig& cfg) {
    std::string s = "(";
    for (std::size_t i = 0; i < kNumElectrodes; ++i) s += (i ? ", " : "") + fmt("%.4f", cfg.phi[i]);
    return s + ")";
}

InversionFile invert(const RunConfig& config, const DataFile& data, std::optional<double> lambda, std::ostream& log) {
    InversionFile f;
    f.electrodes = data.electrodes;
    f.epsilon = data.data.epsilon;
    f.target_residual = data.data.epsilon * data.data.norm();
    if (!lambda) lambda = config.lambda;
    if (!lambda && data.data.epsilon == 0.0) lambda = 0.0;

    if (lambda) {
        f.method = "fixed";
        f.result = minimize(data.data, data.electrodes, *lambda, config.reg, minimize_options(config));
        f.trace.push_back({*lambda, f.result.residual_norm});
    } else {
        MorozovOptions mo;
        mo.minimize = minimize_options(config);
        MorozovResult m = morozov_lambda(data.data, data.electrodes, data.data.epsilon, config.reg, mo);
        f.method = "morozov";
        f.result = m.inversion;
        f.target_residual = m.target_residual;
        f.trace = m.trace;
    }
    log << "  lambda = " << fmt("%.6g", f.result.lambda) << " (" << f.method << "), residual "
        << fmt("%.6g", f.result.residual_norm) << ", t* = " << to_string(f.result.t_star) << "\n";
    return f;
}

void require_converged(const InversionResult& r, const std::string& what) {
    if (!r.converged)
        throw NumericalError(what + ": optimizer did not converge (gradient norm " + fmt("%.3g", r.gradient_norm) +
                             ")");
}

DesignFile design(const RunConfig& config, const EllipseParams& t_star, double lambda, std::ostream& log) {
    DesignFile f;
    f.t_star = t_star;
    f.lambda = lambda;
    f.budget = config.design_evaluations;
    f.result = optimize_design(t_star, lambda, config.reg, config.design_seed, config.design_evaluations,
                               design_options(config));
    const ElectrodeConfig uniform = ElectrodeConfig::uniform();
    f.uniform_value = config.design_criterion == Criterion::DOptimal ? d_criterion(uniform, t_star, lambda, config.reg)
                                                                    : e_criterion(uniform, t_star, lambda, config.reg);
    f.e_value = e_criterion(f.result.phi_opt, t_star, lambda, config.reg);
    log << "  phi_opt = " << describe_phi(f.result.phi_opt) << ", " << to_string(f.result.criterion)
        << "-criterion " << fmt("%.6g", f.result.objective_value) << " (uniform " << fmt("%.6g", f.uniform_value)
        << ")\n";
    return f;
}

StudyResult study(const RunConfig& config, const ElectrodeConfig& cfg, double lambda, const std::string& label,
                  std::ostream& log) {
    StudyOptions so;
    so.minimize = minimize_options(config);
    StudyResult r = run_study(config.ground_truth, cfg, lambda, config.epsilon, config.trials,
                              config.base_seed + kTrialSeedOffset, config.reg, label, so);
    const fs::path dir = config.output_dir;
    write_text(dir / ("mc_" + label + ".csv"), trials_csv(r.records));
    write_json(dir / ("mc_" + label + ".json"), to_json(r.summary));
    log << "  " << label << ": " << r.summary.n_converged << "/" << r.summary.n_trials << " converged"
        << (r.summary.degraded ? " (degraded)" : "") << "\n";
    return r;
}

json stage_report(const StageResult& s, const EllipseParams& truth, double criterion_value) {
    json j;
    j["label"] = s.label;
    j["electrodes"] = to_json(s.data.electrodes);
    j["lambda"] = s.inversion.result.lambda;
    j["lambda_method"] = s.inversion.method;
    j["t_star"] = to_json(s.inversion.result.t_star);
    j["t_star_distance"] = json(equivalence_distance(s.inversion.result.t_star, truth));
    j["criterion_value"] = criterion_value;
    const TrialSummary& sum = s.study.summary;
    j["n_trials"] = sum.n_trials;
    j["n_converged"] = sum.n_converged;
    j["degraded"] = sum.degraded;
    ParamVector mean{}, stddev{};
    for (std::size_t k = 0; k < kNumParams; ++k) {
        mean[k] = sum.stats[k].mean;
        stddev[k] = sum.stats[k].stddev;
    }
    j["mean"] = mean;
    j["stddev"] = stddev;
    j["mean_distance"] = json(equivalence_distance(EllipseParams::from_array(mean), truth));
    j["mean_residual"] = sum.mean_residual;
    return j;
}

std::string report_text(const json& report) {
    std::string s = "Two-stage electrode design study\n";
    s += "epsilon " + fmt("%.4g", report["epsilon"].get<double>()) + ", trials " +
         std::to_string(report["trials"].get<int>()) + ", truth (b1, b2, A, r, xi) = (";
    const json& truth = report["ground_truth"];
    for (std::size_t k = 0; k < kNumParams; ++k) s += (k ? ", " : "") + fmt("%.6g", truth[kParamNames[k]]);
    s += ")\n";
    s += "criterion ratio optimal/uniform at the first-stage estimate: " +
         fmt("%.6g", report["criterion_ratio"].get<double>()) + "\n\n";

    for (const json& d : report["designs"]) {
        s += d["label"].get<std::string>() + ": lambda " + fmt("%.6g", d["lambda"].get<double>()) + " (" +
             d["lambda_method"].get<std::string>() + "), converged " + std::to_string(d["n_converged"].get<int>()) +
             "/" + std::to_string(d["n_trials"].get<int>()) + "\n";
    }
    s += "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-10s %14s %14s %14s %14s\n", "param", "design", "truth", "mean", "std",
                  "|mean-truth|");
    s += line;
    for (std::size_t k = 0; k < kNumParams; ++k) {
        for (const json& d : report["designs"]) {
            std::snprintf(line, sizeof line, "%-6s %-10s %14.6g %14.6g %14.6g %14.6g\n", kParamNames[k],
                          d["label"].get<std::string>().c_str(), truth[kParamNames[k]].get<double>(),
                          d["mean"][k].get<double>(), d["stddev"][k].get<double>(),
                          d["mean_distance"][k].get<double>());
            s += line;
        }
    }
    return s;
}

} // namespace

int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

DataFile cmd_forward(const RunConfig& config, bool noisy, std::ostream& log) {
    validate(config);
    ensure_dir(config.output_dir);
    DataFile f;
    f.electrodes = config.electrodes;
    f.ground_truth = config.ground_truth;
    if (noisy) {
        f.data = synthesize_data(config.ground_truth, config.electrodes, config.epsilon, config.base_seed);
        f.seed = config.base_seed;
    } else {
        f.data = forward_map(config.ground_truth, config.electrodes);
    }
    write_json(config.output_dir / "data.json", to_json(f));
    log << "forward: " << (noisy ? "noisy" : "noiseless") << " data written to "
        << (config.output_dir / "data.json").string() << "\n";
    return f;
}

InversionFile cmd_invert(const RunConfig& config, const fs::path& data_path, std::optional<double> lambda,
                         std::ostream& log) {
    validate(config);
    const DataFile data = data_file_from_json(read_json(data_path));
    try {
        validate(data.electrodes);
    } catch (const DomainError& e) {
        throw ConfigError(data_path.string() + ": " + e.what());
    }
    ensure_dir(config.output_dir);
    log << "invert: " << data_path.string() << "\n";
    InversionFile f = invert(config, data, lambda, log);
    write_json(config.output_dir / "inversion.json", to_json(f));
    require_converged(f.result, "inversion");
    return f;
}

DesignFile cmd_design(const RunConfig& config, const fs::path& inversion_path, std::ostream& log) {
    validate(config);
    const InversionFile inv = inversion_file_from_json(read_json(inversion_path));
    try {
        validate(inv.result.t_star);
    } catch (const DomainError& e) {
        throw ConfigError(inversion_path.string() + ": " + e.what());
    }
    ensure_dir(config.output_dir);
    log << "design: at t* = " << to_string(inv.result.t_star) << "\n";
    DesignFile f = design(config, inv.result.t_star, inv.result.lambda, log);
    write_json(config.output_dir / "design.json", to_json(f));
    return f;
}

StudyResult cmd_mc(const RunConfig& config, const McArgs& args, std::ostream& log) {
    validate(config);
    if (args.label.empty() || args.label.find_first_of("/\\") != std::string::npos)
        throw ConfigError("label must be a non-empty file-name component");
    ElectrodeConfig cfg = config.electrodes;
    if (args.design_path) cfg = design_file_from_json(read_json(*args.design_path)).result.phi_opt;
    std::optional<double> lambda = args.lambda;
    if (!lambda && args.inversion_path) lambda = inversion_file_from_json(read_json(*args.inversion_path)).result.lambda;
    if (!lambda) lambda = config.lambda;
    if (!lambda && config.epsilon == 0.0) lambda = 0.0;
    if (!lambda) throw ConfigError("mc needs a penalty weight: pass --lambda, --inversion, or set lambda in the config");
    if (*lambda < 0.0) throw ConfigError("lambda must be >= 0");
    try {
        validate(cfg);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    ensure_dir(config.output_dir);
    log << "mc: " << args.label << " at " << describe_phi(cfg) << ", lambda " << fmt("%.6g", *lambda) << "\n";
    StudyResult r = study(config, cfg, *lambda, args.label, log);
    if (config.emit_svg)
        write_text(config.output_dir / ("mc_" + args.label + ".svg"),
                   render_boxplots({{args.label, r.summary}}, config.ground_truth));
    return r;
}

PipelineResult cmd_pipeline(const RunConfig& config, std::ostream& log) {
    validate(config);
    const fs::path dir = config.output_dir;
    ensure_dir(dir);
    json saved = to_json(config);
    saved.erase("output_dir");
    write_json(dir / "config.json", saved);

    PipelineResult out;
    const ElectrodeConfig uniform = ElectrodeConfig::uniform();
    out.initial.label = config.electrodes.sorted() == uniform ? "uniform" : "initial";
    out.optimal.label = "optimal";

    log << "stage 1: data at " << describe_phi(config.electrodes) << "\n";
    out.initial.data.electrodes = config.electrodes;
    out.initial.data.ground_truth = config.ground_truth;
    out.initial.data.seed = config.base_seed;
    out.initial.data.data = synthesize_data(config.ground_truth, config.electrodes, config.epsilon, config.base_seed);
    write_json(dir / ("data_" + out.initial.label + ".json"), to_json(out.initial.data));
    out.initial.inversion = invert(config, out.initial.data, std::nullopt, log);
    write_json(dir / ("inversion_" + out.initial.label + ".json"), to_json(out.initial.inversion));
    require_converged(out.initial.inversion.result, "first-stage inversion");

    log << "stage 2: design\n";
    const InversionResult& first = out.initial.inversion.result;
    out.design = design(config, first.t_star, first.lambda, log);
    write_json(dir / "design.json", to_json(out.design));
    const ElectrodeConfig phi_opt = out.design.result.phi_opt;

    log << "stage 3: data at " << describe_phi(phi_opt) << "\n";
    out.optimal.data.electrodes = phi_opt;
    out.optimal.data.ground_truth = config.ground_truth;
    out.optimal.data.seed = config.base_seed + 1;
    out.optimal.data.data = synthesize_data(config.ground_truth, phi_opt, config.epsilon, config.base_seed + 1);
    write_json(dir / "data_optimal.json", to_json(out.optimal.data));
    out.optimal.inversion = invert(config, out.optimal.data, std::nullopt, log);
    write_json(dir / "inversion_optimal.json", to_json(out.optimal.inversion));
    require_converged(out.optimal.inversion.result, "second-stage inversion");

    log << "stage 4: Monte Carlo, " << config.trials << " trials per design\n";
    out.initial.study = study(config, config.electrodes, first.lambda, out.initial.label, log);
    out.optimal.study = study(config, phi_opt, out.optimal.inversion.result.lambda, out.optimal.label, log);

    const double initial_value = config.design_criterion == Criterion::DOptimal
                                     ? d_criterion(config.electrodes, first.t_star, first.lambda, config.reg)
                                     : e_criterion(config.electrodes, first.t_star, first.lambda, config.reg);
    json report;
    report["kind"] = "report";
    report["ground_truth"] = to_json(config.ground_truth);
    report["epsilon"] = config.epsilon;
    report["trials"] = config.trials;
    report["criterion"] = to_string(config.design_criterion);
    report["criterion_ratio"] = out.design.result.objective_value / initial_value;
    report["designs"] = {stage_report(out.initial, config.ground_truth, initial_value),
                         stage_report(out.optimal, config.ground_truth, out.design.result.objective_value)};
    out.report = report;
    write_json(dir / "report.json", report);
    const std::string text = report_text(report);
    write_text(dir / "report.txt", text);
    log << "\n" << text;

    if (config.emit_svg) {
        const std::string svg = boxplots_from_csv(
            {{out.initial.label, read_text(dir / ("mc_" + out.initial.label + ".csv"))},
             {out.optimal.label, read_text(dir / ("mc_" + out.optimal.label + ".csv"))}},
            config.ground_truth);
        write_text(dir / "boxplots.svg", svg);
    }
    return out;
}

OracleDiagnostic cmd_diag_oracle(const RunConfig& config, std::ostream& log) {
    validate(config);
    const OracleDiagnostic d = oracle_diagnostic(config.ground_truth, config.electrodes, {1e-2, 1e-3, 1e-4});
    log << "oracle comparison at " << to_string(config.ground_truth) << " with area scaled by s\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-6s %16s %16s %12s\n", "s", "pair", "forward", "oracle", "rel.diff");
    log << line;
    for (const OracleRow& row : d.rows) {
        for (std::size_t m = 0; m < kNumMeasurements; ++m) {
            const std::string pair = std::to_string(kPairs[m].first + 1) + "-" + std::to_string(kPairs[m].second + 1);
            std::snprintf(line, sizeof line, "%-8.0e %-6s %16.9e %16.9e %12.3e\n", row.scale, pair.c_str(),
                          row.forward[m], row.oracle[m],
                          std::abs(row.forward[m] - row.oracle[m]) / std::abs(row.oracle[m]));
            log << line;
        }
    }
    log << "\n";
    std::snprintf(line, sizeof line, "%-8s %14s %18s\n", "s", "|F - oracle|", "quadratic ratio");
    log << line;
    for (const OracleRow& row : d.rows) {
        std::snprintf(line, sizeof line, "%-8.0e %14.6e %18.6f\n", row.scale, row.difference, row.quadratic_ratio);
        log << line;
    }
    log << "log-log slope of |F - oracle| against s: " << fmt("%.4f", d.slope) << "\n";
    log << "quadratic ratio (expanded / quadrature second-order term): "
        << fmt("%.4f", d.rows.front().quadratic_ratio) << "\n";
    return d;
}

} // namespace eit::app
