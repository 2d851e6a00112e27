#include "mdp/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace mdp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double to_double(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error("bad numeric value for " + key + ": '" + s + "'", 0);
    }
}

long to_long(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error("bad integer value for " + key + ": '" + s + "'", 0);
    }
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap out;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw parse_error("unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw parse_error("empty section name", lineno);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected key = value", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", lineno);
        if (section.empty())
            throw parse_error("key outside any [section]", lineno);
        out[section + "." + key] = val;
    }
    return out;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file: " + path, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_hash(const ConfigMap& cfg) {
    // FNV-1a over the sorted canonical pairs (std::map iterates sorted).
    uint64_t h = 1469598103934665603ull;
    auto eat = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : cfg) {
        eat(k);
        eat("=");
        eat(v);
        eat("\n");
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string config_hash(const ExperimentSpec& spec) {
    return config_hash(parse_config_text(spec.to_config_text()));
}

std::string ExperimentSpec::to_config_text() const {
    std::ostringstream os;
    os << "[family]\n";
    os << "kind = " << family_name(family) << "\n";
    if (!theta.empty()) {
        os << "theta = ";
        for (size_t i = 0; i < theta.size(); ++i)
            os << (i ? "," : "") << fmt(theta[i]);
        os << "\n";
    }
    if (!param_box.empty()) {
        os << "box = ";
        for (size_t i = 0; i < param_box.size(); ++i)
            os << (i ? "," : "") << fmt(param_box[i].lo) << ","
               << fmt(param_box[i].hi);
        os << "\n";
    }
    if (c2_override > 0) os << "c2 = " << fmt(c2_override) << "\n";
    if (c_star_override > 0) os << "c_star = " << fmt(c_star_override) << "\n";
    os << "k = " << k << "\n";
    os << "s = " << s << "\n";
    os << "[noise]\n";
    os << "kind = " << noise_name(noise.kind) << "\n";
    os << "sigma = " << fmt(noise.sigma) << "\n";
    os << "[run]\n";
    os << "policy = ";
    for (size_t i = 0; i < policies.size(); ++i)
        os << (i ? "," : "") << policies[i];
    os << "\n";
    os << "n = ";
    for (size_t i = 0; i < n_grid.size(); ++i) os << (i ? "," : "") << n_grid[i];
    os << "\n";
    os << "replications = " << replications << "\n";
    os << "seed = " << master_seed << "\n";
    os << "output_dir = " << output_dir << "\n";
    os << "study = " << study << "\n";
    return os.str();
}

ExperimentSpec spec_from_config(const ConfigMap& cfg) {
    ExperimentSpec spec;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("family.kind")) spec.family = family_from_name(*v);
    if (const auto* v = get("family.theta"))
        for (const auto& t : split(*v, ','))
            spec.theta.push_back(to_double(t, "family.theta"));
    if (const auto* v = get("family.box")) {
        auto parts = split(*v, ',');
        if (parts.size() % 2 != 0)
            throw parse_error("family.box needs lo,hi pairs", 0);
        for (size_t i = 0; i < parts.size(); i += 2)
            spec.param_box.push_back({to_double(parts[i], "family.box"),
                                      to_double(parts[i + 1], "family.box")});
    }
    if (const auto* v = get("family.c2"))
        spec.c2_override = to_double(*v, "family.c2");
    if (const auto* v = get("family.c_star"))
        spec.c_star_override = to_double(*v, "family.c_star");
    if (const auto* v = get("family.k"))
        spec.k = static_cast<int>(to_long(*v, "family.k"));
    if (const auto* v = get("family.s"))
        spec.s = static_cast<int>(to_long(*v, "family.s"));
    if (const auto* v = get("noise.kind")) spec.noise.kind = noise_from_name(*v);
    if (const auto* v = get("noise.sigma"))
        spec.noise.sigma = to_double(*v, "noise.sigma");
    spec.noise = make_noise(spec.noise.kind, spec.noise.sigma);
    if (const auto* v = get("run.policy")) spec.policies = split(*v, ',');
    if (const auto* v = get("run.n"))
        for (const auto& t : split(*v, ','))
            spec.n_grid.push_back(to_long(t, "run.n"));
    if (const auto* v = get("run.replications"))
        spec.replications = static_cast<int>(to_long(*v, "run.replications"));
    if (const auto* v = get("run.seed"))
        spec.master_seed = static_cast<uint64_t>(to_long(*v, "run.seed"));
    if (const auto* v = get("run.output_dir")) spec.output_dir = *v;
    if (const auto* v = get("run.study")) spec.study = *v;
    return spec;
}

DemandModel model_from_spec(const ExperimentSpec& spec) {
    if (spec.theta.empty())
        throw parse_error("model_from_spec: family.theta required", 0);
    DemandModel m;
    switch (spec.family) {
        case Family::linear: m = make_linear(spec.theta[0]); break;
        case Family::exponential: m = make_exponential(spec.theta[0]); break;
        case Family::logit: m = make_logit(spec.theta[0]); break;
        case Family::polynomial:
            m = spec.param_box.empty()
                    ? make_polynomial(spec.theta)
                    : make_polynomial(spec.theta, spec.param_box);
            break;
    }
    if (spec.s > 0) m.sensitivity_s = spec.s;
    if (spec.c2_override > 0) m.constants.c2 = spec.c2_override;
    if (spec.c_star_override > 0) m.constants.c_star = spec.c_star_override;
    return m;
}

}  // namespace mdp
