#include "neb/plan_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace neb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
    throw std::invalid_argument("plan " + where + ": " + message);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : object.items())
        if (!known.contains(key)) fail(where, "unknown key '" + key + "'");
}

const json& require(const json& object, const std::string& key, const std::string& where) {
    if (!object.contains(key)) fail(where, "missing key '" + key + "'");
    return object.at(key);
}

std::uint64_t require_uint(const json& object, const std::string& key, const std::string& where) {
    const json& v = require(object, key, where);
    if (!v.is_number_unsigned()) fail(where, "'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string require_string(const json& object, const std::string& key, const std::string& where) {
    const json& v = require(object, key, where);
    if (!v.is_string()) fail(where, "'" + key + "' must be a string");
    return v.get<std::string>();
}

ProblemSpec parse_problem(const json& object, const std::string& where) {
    if (!object.is_object()) fail(where, "must be an object");
    reject_unknown_keys(object, {"kind", "n", "k"}, where);
    const std::string kind = require_string(object, "kind", where);
    const auto n = static_cast<std::size_t>(require_uint(object, "n", where));
    if (kind == "jump") {
        const auto k = static_cast<std::size_t>(require_uint(object, "k", where));
        return ProblemSpec::jump(n, k);
    }
    if (object.contains("k")) fail(where, "'k' applies to jump problems only");
    if (kind == "one_max") return ProblemSpec::one_max(n);
    if (kind == "leading_ones") return ProblemSpec::leading_ones(n);
    fail(where, "unknown problem kind '" + kind + "'");
}

LambdaRule parse_lambda_rule(const json& value, const std::string& where) {
    if (value.is_number_unsigned()) {
        const auto v = value.get<std::uint64_t>();
        if (v < 1) fail(where, "constant lambda must be >= 1");
        return LambdaRule::constant(static_cast<std::uint32_t>(v));
    }
    if (!value.is_string()) fail(where, "'lambda_rule' must be an integer or a rule name");
    const auto name = value.get<std::string>();
    using Kind = LambdaRule::Kind;
    if (name == "ln_n") return LambdaRule::named(Kind::ln_n);
    if (name == "half_ln_n") return LambdaRule::named(Kind::half_ln_n);
    if (name == "sqrt_n") return LambdaRule::named(Kind::sqrt_n);
    if (name == "half_n") return LambdaRule::named(Kind::half_n);
    if (name == "jump_heavy") return LambdaRule::named(Kind::jump_heavy);
    fail(where, "unknown lambda rule '" + name + "'");
}

AlgorithmTemplate::RateRule parse_rate_rule(const json& value, const std::string& where,
                                            const char* key) {
    if (!value.is_string()) fail(where, std::string("'") + key + "' must be a string");
    const auto name = value.get<std::string>();
    if (name == "standard") return AlgorithmTemplate::RateRule::standard;
    if (name == "sqrt_k_over_n") return AlgorithmTemplate::RateRule::sqrt_k_over_n;
    fail(where, std::string("unknown ") + key + " '" + name + "'");
}

AlgorithmTemplate parse_algorithm(const json& object, const std::string& where) {
    if (!object.is_object()) fail(where, "must be an object");
    reject_unknown_keys(object, {"kind", "lambda_rule", "p_rule", "c_rule"}, where);
    AlgorithmTemplate tmpl;
    const std::string kind = require_string(object, "kind", where);
    try {
        tmpl.kind = algorithm_kind_from(kind);
    } catch (const std::exception&) {
        fail(where, "unknown algorithm kind '" + kind + "'");
    }
    if (tmpl.kind == AlgorithmKind::one_plus_one_ea) {
        if (object.contains("lambda_rule")) {
            const LambdaRule rule = parse_lambda_rule(object.at("lambda_rule"), where);
            if (rule != LambdaRule::constant(1))
                fail(where, "the (1+1) EA fixes lambda_rule at 1");
        }
    } else {
        tmpl.lambda_rule = parse_lambda_rule(require(object, "lambda_rule", where), where);
    }
    if (tmpl.kind != AlgorithmKind::one_ll_ga &&
        (object.contains("p_rule") || object.contains("c_rule")))
        fail(where, "p_rule/c_rule apply to the GA only");
    if (object.contains("p_rule")) tmpl.p_rule = parse_rate_rule(object.at("p_rule"), where, "p_rule");
    if (object.contains("c_rule")) tmpl.c_rule = parse_rate_rule(object.at("c_rule"), where, "c_rule");
    return tmpl;
}

NoiseSetting parse_noise(const json& object, const std::string& where) {
    if (!object.is_object()) fail(where, "must be an object");
    reject_unknown_keys(object, {"kind", "q"}, where);
    NoiseSetting setting;
    const std::string kind = require_string(object, "kind", where);
    try {
        setting.kind = noise_kind_from(kind);
    } catch (const std::exception&) {
        fail(where, "unknown noise kind '" + kind + "'");
    }
    const json& q = require(object, "q", where);
    if (q.is_number()) {
        const double v = q.get<double>();
        if (v < 0.0) fail(where, "'q' must be >= 0");
        setting.rate = NoiseRate::numeric(v);
    } else if (q.is_string()) {
        const auto name = q.get<std::string>();
        if (name == "ln_n_over_n") setting.rate = NoiseRate::ln_n_over_n();
        else if (name == "one_over_6e") setting.rate = NoiseRate::one_over_6e();
        else {
            // numeric strings "0" and "1" are accepted spellings
            try {
                std::size_t used = 0;
                const double v = std::stod(name, &used);
                if (used != name.size() || v < 0.0) throw std::invalid_argument(name);
                setting.rate = NoiseRate::numeric(v);
            } catch (const std::exception&) {
                fail(where, "unknown q rate '" + name + "'");
            }
        }
    } else {
        fail(where, "'q' must be a number or a rate name");
    }
    return setting;
}

}  // namespace

ExperimentPlan parse_plan_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("plan: invalid JSON: ") + err.what());
    }
    if (!root.is_object()) fail("document", "must be a JSON object");
    reject_unknown_keys(root,
                        {"id", "problems", "algorithms", "noise", "replications", "master_seed",
                         "budget", "normalization", "count_parent_reeval"},
                        "document");

    ExperimentPlan plan;
    plan.id = require_string(root, "id", "document");

    const json& problems = require(root, "problems", "document");
    if (!problems.is_array() || problems.empty()) fail("problems", "must be a non-empty array");
    for (std::size_t i = 0; i < problems.size(); ++i)
        plan.problems.push_back(parse_problem(problems[i], "problems[" + std::to_string(i) + "]"));

    const json& algorithms = require(root, "algorithms", "document");
    if (!algorithms.is_array() || algorithms.empty())
        fail("algorithms", "must be a non-empty array");
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        plan.algorithms.push_back(
            parse_algorithm(algorithms[i], "algorithms[" + std::to_string(i) + "]"));

    const json& noise = require(root, "noise", "document");
    if (!noise.is_array() || noise.empty()) fail("noise", "must be a non-empty array");
    for (std::size_t i = 0; i < noise.size(); ++i)
        plan.noise.push_back(parse_noise(noise[i], "noise[" + std::to_string(i) + "]"));

    plan.replications = static_cast<std::uint32_t>(require_uint(root, "replications", "document"));
    plan.master_seed = require_uint(root, "master_seed", "document");
    plan.budget = require_uint(root, "budget", "document");
    const std::string norm = require_string(root, "normalization", "document");
    try {
        plan.normalization = normalization_from(norm);
    } catch (const std::exception&) {
        fail("normalization", "unknown value '" + norm + "'");
    }
    const json& reeval = require(root, "count_parent_reeval", "document");
    if (!reeval.is_boolean()) fail("count_parent_reeval", "must be a boolean");
    plan.count_parent_reeval = reeval.get<bool>();

    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_plan_json(buffer.str());
}

std::string emit_plan_json(const ExperimentPlan& plan) {
    json root;
    root["id"] = plan.id;
    root["problems"] = json::array();
    for (const ProblemSpec& problem : plan.problems) {
        json object;
        object["kind"] = std::string(to_string(problem.kind));
        object["n"] = problem.n;
        if (problem.kind == ProblemKind::jump) object["k"] = problem.k;
        root["problems"].push_back(object);
    }
    root["algorithms"] = json::array();
    for (const AlgorithmTemplate& tmpl : plan.algorithms) {
        json object;
        object["kind"] = std::string(to_string(tmpl.kind));
        if (tmpl.kind != AlgorithmKind::one_plus_one_ea) {
            if (tmpl.lambda_rule.kind == LambdaRule::Kind::constant)
                object["lambda_rule"] = tmpl.lambda_rule.value;
            else
                object["lambda_rule"] = tmpl.lambda_rule.label();
        }
        if (tmpl.kind == AlgorithmKind::one_ll_ga) {
            if (tmpl.p_rule != AlgorithmTemplate::RateRule::standard)
                object["p_rule"] = "sqrt_k_over_n";
            if (tmpl.c_rule != AlgorithmTemplate::RateRule::standard)
                object["c_rule"] = "sqrt_k_over_n";
        }
        root["algorithms"].push_back(object);
    }
    root["noise"] = json::array();
    for (const NoiseSetting& setting : plan.noise) {
        json object;
        object["kind"] = std::string(to_string(setting.kind));
        if (setting.rate.kind == NoiseRate::Kind::numeric)
            object["q"] = setting.rate.value;
        else
            object["q"] = setting.rate.label();
        root["noise"].push_back(object);
    }
    root["replications"] = plan.replications;
    root["master_seed"] = plan.master_seed;
    root["budget"] = plan.budget;
    root["normalization"] = std::string(to_string(plan.normalization));
    root["count_parent_reeval"] = plan.count_parent_reeval;
    return root.dump(2) + "\n";
}

}  // namespace neb
