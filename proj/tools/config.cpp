#include "config.hpp"

#include <fstream>
#include <sstream>

namespace sqrs::cli {

Section::Section(const nlohmann::json &node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
}

bool Section::has(const std::string &key) const { return node_.contains(key) && !node_.at(key).is_null(); }

const nlohmann::json &Section::at(const std::string &key) {
    used_.insert(key);
    if (!has(key)) fail(key, "missing required field");
    return node_.at(key);
}

Section Section::child(const std::string &key) {
    const auto &n = at(key);
    if (!n.is_object()) fail(key, "expected an object");
    return Section(n, path_ + "." + key);
}

std::vector<Section> Section::objects(const std::string &key) {
    const auto &node = at(key);
    if (!node.is_array()) fail(key, "expected an array");
    std::vector<Section> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_object()) fail(key + "[" + std::to_string(i) + "]", "expected an object");
        out.emplace_back(node[i], path_ + "." + key + "[" + std::to_string(i) + "]");
    }
    return out;
}

double Section::probability(const std::string &key) {
    double v = get<double>(key);
    if (!(v >= 0.0 && v <= 1.0)) fail(key, "must lie in [0, 1]");
    return v;
}

int Section::positive_int(const std::string &key) {
    int v = get<int>(key);
    if (v < 1) fail(key, "must be a positive integer");
    return v;
}

void Section::finish() const {
    for (const auto &[k, v] : node_.items())
        if (!used_.count(k)) fail(k, "unknown field");
}

void Section::fail(const std::string &key, const std::string &message) const {
    throw ConfigError(path_ + "." + key + ": " + message);
}

nlohmann::json load_config_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

ProtocolParams read_protocol(Section s) {
    ProtocolParams p;
    p.n_bobs = s.positive_int("n_bobs");
    p.n_rounds = s.positive_int("n_rounds");
    p.p_separable = s.probability("p_separable");
    p.p_fidelity = s.probability("p_fidelity");
    s.finish();
    return p;
}

AttackStrategy read_attack(Section s) {
    AttackStrategy a;
    try {
        a.kind = parse_attack(s.get<std::string>("strategy"));
    } catch (const std::invalid_argument &e) {
        s.fail("strategy", e.what());
    }
    a.attack_probability = s.has("attack_probability") ? s.probability("attack_probability") : 1.0;
    s.finish();
    return a;
}

void read_search_settings(Section &s, SearchConfig &c) {
    c.initial_points = s.get<int>("initial_points");
    if (c.initial_points < 2) s.fail("initial_points", "must be at least 2");
    c.refinements = s.get<int>("refinements");
    if (c.refinements < 0 || c.refinements > 16) s.fail("refinements", "must lie in [0, 16]");
    c.repetitions_per_point = s.positive_int("repetitions_per_point");
    c.truth_sets = s.positive_int("truth_sets");
    c.lambda_e_threshold = s.get<double>("lambda_e_threshold");
    if (!(c.lambda_e_threshold >= 0.0 && c.lambda_e_threshold <= 2.0)) s.fail("lambda_e_threshold", "must lie in [0, 2]");
    if (s.has("fixed_p_f")) c.fixed_p_f = s.probability("fixed_p_f");
    c.report_bound = s.get_or<bool>("report_bound", false);
    if (s.has("curve_repetitions")) c.curve.repetitions = s.positive_int("curve_repetitions");
}

}  // namespace sqrs::cli
