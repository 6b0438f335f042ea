#include "eit/app/config.hpp"

#include "eit/app/serialization.hpp"
#include "eit/errors.hpp"

#include <cmath>
#include <set>

namespace eit::app {
namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

ParamVector vector5(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != kNumParams) throw ConfigError(what + " must be an array of 5 numbers");
    ParamVector v{};
    for (std::size_t k = 0; k < kNumParams; ++k) v[k] = j.at(k).get<double>();
    return v;
}

SearchStrategy strategy_from_string(const std::string& s) {
    if (s == "pattern") return SearchStrategy::MultistartPattern;
    if (s == "bo") return SearchStrategy::BayesianOptimization;
    throw ConfigError("design.strategy must be 'pattern' or 'bo', got '" + s + "'");
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "D") return Criterion::DOptimal;
    if (s == "E") return Criterion::EOptimal;
    throw ConfigError("design.criterion must be 'D' or 'E', got '" + s + "'");
}

} // namespace

void validate(const RunConfig& c) {
    try {
        validate(c.ground_truth);
        validate(c.electrodes);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!std::isfinite(c.epsilon) || c.epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
    for (std::size_t k = 0; k < kNumParams; ++k) {
        if (!std::isfinite(c.reg.weights[k]) || !std::isfinite(c.reg.prior[k]))
            throw ConfigError("regularization entries must be finite");
    }
    if (c.max_iterations < 1) throw ConfigError("budgets.max_iterations must be >= 1");
    if (c.design_evaluations < 1) throw ConfigError("budgets.design_evaluations must be >= 1");
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    if (c.lambda && (!std::isfinite(*c.lambda) || *c.lambda < 0.0)) throw ConfigError("lambda must be >= 0");
    if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    try {
        reject_unknown(j,
                       {"ground_truth", "electrodes", "epsilon", "regularization", "seeds", "budgets", "trials",
                        "lambda", "design", "output_dir", "emit_svg"},
                       "config");
        if (j.contains("ground_truth")) {
            reject_unknown(j["ground_truth"], {"b1", "b2", "A", "r", "xi"}, "ground_truth");
            c.ground_truth = ellipse_from_json(j["ground_truth"]);
        }
        if (j.contains("electrodes")) c.electrodes = electrodes_from_json(j["electrodes"]);
        if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
        if (j.contains("regularization")) {
            const json& r = j["regularization"];
            reject_unknown(r, {"weights", "prior"}, "regularization");
            if (r.contains("weights")) c.reg.weights = vector5(r["weights"], "regularization.weights");
            if (r.contains("prior")) c.reg.prior = vector5(r["prior"], "regularization.prior");
        }
        if (j.contains("seeds")) {
            const json& s = j["seeds"];
            reject_unknown(s, {"base", "design"}, "seeds");
            if (s.contains("base")) c.base_seed = s["base"].get<std::uint64_t>();
            if (s.contains("design")) c.design_seed = s["design"].get<std::uint64_t>();
        }
        if (j.contains("budgets")) {
            const json& b = j["budgets"];
            reject_unknown(b, {"max_iterations", "design_evaluations"}, "budgets");
            if (b.contains("max_iterations")) c.max_iterations = b["max_iterations"].get<int>();
            if (b.contains("design_evaluations")) c.design_evaluations = b["design_evaluations"].get<int>();
        }
        if (j.contains("trials")) c.trials = j["trials"].get<int>();
        if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = j["lambda"].get<double>();
        if (j.contains("design")) {
            const json& d = j["design"];
            reject_unknown(d, {"strategy", "criterion"}, "design");
            if (d.contains("strategy")) c.design_strategy = strategy_from_string(d["strategy"].get<std::string>());
            if (d.contains("criterion")) c.design_criterion = criterion_from_string(d["criterion"].get<std::string>());
        }
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("emit_svg")) c.emit_svg = j["emit_svg"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    validate(c);
    return c;
}

json to_json(const RunConfig& c) {
    json j;
    j["ground_truth"] = to_json(c.ground_truth);
    j["electrodes"] = to_json(c.electrodes);
    j["epsilon"] = c.epsilon;
    j["regularization"] = {{"weights", c.reg.weights}, {"prior", c.reg.prior}};
    j["seeds"] = {{"base", c.base_seed}, {"design", c.design_seed}};
    j["budgets"] = {{"max_iterations", c.max_iterations}, {"design_evaluations", c.design_evaluations}};
    j["trials"] = c.trials;
    j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
    j["design"] = {{"strategy", c.design_strategy == SearchStrategy::MultistartPattern ? "pattern" : "bo"},
                   {"criterion", to_string(c.design_criterion)}};
    j["output_dir"] = c.output_dir.string();
    j["emit_svg"] = c.emit_svg;
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

MinimizeOptions minimize_options(const RunConfig& c) {
    MinimizeOptions o;
    o.max_iterations = c.max_iterations;
    return o;
}

DesignOptions design_options(const RunConfig& c) {
    DesignOptions o;
    o.strategy = c.design_strategy;
    o.criterion = c.design_criterion;
    return o;
}

} // namespace eit::app
