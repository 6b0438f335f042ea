#include "eit/app/serialization.hpp"

#include "eit/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace eit::app {
namespace {

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return j.at(key).get<T>();
}

void expect_kind(const json& j, const char* kind) {
    if (!j.is_object() || j.value("kind", "") != kind)
        throw ConfigError(std::string("expected a '") + kind + "' file");
}

json pairs_json() {
    json pairs = json::array();
    for (const auto& [a, b] : kPairs) pairs.push_back({a + 1, b + 1});
    return pairs;
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json to_json(const EllipseParams& t) {
    return {{"b1", t.center_x}, {"b2", t.center_y}, {"A", t.area}, {"r", t.aspect_ratio}, {"xi", t.orientation}};
}

EllipseParams ellipse_from_json(const json& j) {
    return {get<double>(j, "b1"), get<double>(j, "b2"), get<double>(j, "A"), get<double>(j, "r"),
            get<double>(j, "xi")};
}

json to_json(const ElectrodeConfig& cfg) { return cfg.phi; }

ElectrodeConfig electrodes_from_json(const json& j) {
    if (!j.is_array() || j.size() != kNumElectrodes) throw ConfigError("electrodes must be an array of 4 angles");
    ElectrodeConfig cfg;
    for (std::size_t i = 0; i < kNumElectrodes; ++i) cfg.phi[i] = j.at(i).get<double>();
    return cfg;
}

json to_json(const DataFile& f) {
    json j;
    j["kind"] = "data";
    j["electrodes"] = to_json(f.electrodes);
    j["pairs"] = pairs_json();
    j["values"] = f.data.values;
    j["epsilon"] = f.data.epsilon;
    if (f.ground_truth) j["ground_truth"] = to_json(*f.ground_truth);
    if (f.seed) j["seed"] = *f.seed;
    return j;
}

DataFile data_file_from_json(const json& j) {
    expect_kind(j, "data");
    DataFile f;
    f.electrodes = electrodes_from_json(j.at("electrodes"));
    const json& v = j.at("values");
    if (!v.is_array() || v.size() != kNumMeasurements) throw ConfigError("values must hold 6 numbers");
    for (std::size_t i = 0; i < kNumMeasurements; ++i) f.data.values[i] = v[i].get<double>();
    f.data.epsilon = get<double>(j, "epsilon");
    if (j.contains("ground_truth")) f.ground_truth = ellipse_from_json(j["ground_truth"]);
    if (j.contains("seed")) f.seed = j["seed"].get<std::uint64_t>();
    return f;
}

json to_json(const InversionFile& f) {
    const InversionResult& r = f.result;
    json j;
    j["kind"] = "inversion";
    j["electrodes"] = to_json(f.electrodes);
    j["method"] = f.method;
    j["epsilon"] = f.epsilon;
    j["lambda"] = r.lambda;
    j["target_residual"] = f.target_residual;
    j["t_star"] = to_json(r.t_star);
    j["t_raw"] = to_json(r.t_raw);
    j["residual_norm"] = r.residual_norm;
    j["objective_value"] = r.objective_value;
    j["gradient_norm"] = r.gradient_norm;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["starts_used"] = r.starts_used;
    json trace = json::array();
    for (const BisectionStep& s : f.trace) trace.push_back({{"lambda", s.lambda}, {"residual_norm", s.residual_norm}});
    j["trace"] = trace;
    return j;
}

InversionFile inversion_file_from_json(const json& j) {
    expect_kind(j, "inversion");
    InversionFile f;
    f.electrodes = electrodes_from_json(j.at("electrodes"));
    f.method = get<std::string>(j, "method");
    f.epsilon = get<double>(j, "epsilon");
    f.target_residual = get<double>(j, "target_residual");
    InversionResult& r = f.result;
    r.lambda = get<double>(j, "lambda");
    r.t_star = ellipse_from_json(j.at("t_star"));
    r.t_raw = ellipse_from_json(j.at("t_raw"));
    r.residual_norm = get<double>(j, "residual_norm");
    r.objective_value = get<double>(j, "objective_value");
    r.gradient_norm = get<double>(j, "gradient_norm");
    r.iterations = get<int>(j, "iterations");
    r.converged = get<bool>(j, "converged");
    r.starts_used = get<int>(j, "starts_used");
    for (const json& s : j.at("trace")) f.trace.push_back({get<double>(s, "lambda"), get<double>(s, "residual_norm")});
    return f;
}

json to_json(const DesignFile& f) {
    const DesignResult& r = f.result;
    json j;
    j["kind"] = "design";
    j["criterion"] = to_string(r.criterion);
    j["seed"] = r.seed;
    j["budget"] = f.budget;
    j["lambda"] = f.lambda;
    j["t_star"] = to_json(f.t_star);
    j["phi_opt"] = to_json(r.phi_opt);
    j["objective_value"] = r.objective_value;
    j["uniform_value"] = f.uniform_value;
    j["ratio_to_uniform"] = f.uniform_value != 0.0 ? json(r.objective_value / f.uniform_value) : json(nullptr);
    j["e_criterion"] = f.e_value;
    json trace = json::array();
    for (const DesignEvaluation& e : r.trace) trace.push_back({{"phi", e.phi.phi}, {"value", e.value}});
    j["trace"] = trace;
    return j;
}

DesignFile design_file_from_json(const json& j) {
    expect_kind(j, "design");
    DesignFile f;
    DesignResult& r = f.result;
    const std::string c = get<std::string>(j, "criterion");
    if (c != "D" && c != "E") throw ConfigError("criterion must be D or E");
    r.criterion = c == "D" ? Criterion::DOptimal : Criterion::EOptimal;
    r.seed = get<std::uint64_t>(j, "seed");
    f.budget = get<int>(j, "budget");
    f.lambda = get<double>(j, "lambda");
    f.t_star = ellipse_from_json(j.at("t_star"));
    r.phi_opt = electrodes_from_json(j.at("phi_opt"));
    r.objective_value = get<double>(j, "objective_value");
    f.uniform_value = get<double>(j, "uniform_value");
    f.e_value = get<double>(j, "e_criterion");
    for (const json& e : j.at("trace")) r.trace.push_back({electrodes_from_json(e.at("phi")), get<double>(e, "value")});
    return f;
}

json to_json(const ParamStats& s) {
    return {{"mean", s.mean},     {"stddev", s.stddev}, {"median", s.median}, {"q1", s.q1},
            {"q3", s.q3},         {"min", s.min},       {"max", s.max}};
}

ParamStats param_stats_from_json(const json& j) {
    ParamStats s;
    s.mean = get<double>(j, "mean");
    s.stddev = get<double>(j, "stddev");
    s.median = get<double>(j, "median");
    s.q1 = get<double>(j, "q1");
    s.q3 = get<double>(j, "q3");
    s.min = get<double>(j, "min");
    s.max = get<double>(j, "max");
    return s;
}

json to_json(const TrialSummary& s) {
    json j;
    j["kind"] = "summary";
    j["label"] = s.label;
    j["n_trials"] = s.n_trials;
    j["n_converged"] = s.n_converged;
    j["degraded"] = s.degraded;
    j["reference"] = to_json(s.reference);
    j["reference_is_truth"] = s.reference_is_truth;
    json stats;
    for (std::size_t k = 0; k < kNumParams; ++k) stats[kParamNames[k]] = to_json(s.stats[k]);
    j["stats"] = stats;
    j["mean_residual"] = s.mean_residual;
    return j;
}

TrialSummary trial_summary_from_json(const json& j) {
    expect_kind(j, "summary");
    TrialSummary s;
    s.label = get<std::string>(j, "label");
    s.n_trials = get<int>(j, "n_trials");
    s.n_converged = get<int>(j, "n_converged");
    s.degraded = get<bool>(j, "degraded");
    s.reference = ellipse_from_json(j.at("reference"));
    s.reference_is_truth = get<bool>(j, "reference_is_truth");
    for (std::size_t k = 0; k < kNumParams; ++k) s.stats[k] = param_stats_from_json(j.at("stats").at(kParamNames[k]));
    s.mean_residual = get<double>(j, "mean_residual");
    return s;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
    std::string out = "trial,seed,b1,b2,A,r,xi,residual,converged\n";
    for (const TrialRecord& rec : records) {
        out += std::to_string(rec.trial_index) + ',' + std::to_string(rec.seed);
        for (double v : rec.t_hat.to_array()) out += ',' + format_double(v);
        out += ',' + format_double(rec.residual_norm) + ',' + (rec.converged ? "1" : "0") + '\n';
    }
    return out;
}

std::vector<TrialRecord> parse_trials_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "trial,seed,b1,b2,A,r,xi,residual,converged")
        throw ConfigError("trial CSV has an unexpected header");
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 9) throw ConfigError("trial CSV row with " + std::to_string(cells.size()) + " columns");
        try {
            TrialRecord rec;
            rec.trial_index = std::stoi(cells[0]);
            rec.seed = std::stoull(cells[1]);
            ParamVector v{};
            for (std::size_t k = 0; k < kNumParams; ++k) v[k] = std::stod(cells[2 + k]);
            rec.t_hat = EllipseParams::from_array(v);
            rec.residual_norm = std::stod(cells[7]);
            rec.converged = cells[8] == "1";
            records.push_back(rec);
        } catch (const std::logic_error&) {
            throw ConfigError("trial CSV row is not numeric: " + line);
        }
    }
    return records;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace eit::app
