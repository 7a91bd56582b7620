#include "wpsdo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wpsdo {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("config: bad value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) bad_value(key, v);
        return d;
    } catch (const std::logic_error&) {
        bad_value(key, v);
    }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v);
}

// Round-trippable text for doubles.
std::string fmt(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

struct Field {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number(T ExperimentConfig::*member, const char* key) {
    return {[member, key](ExperimentConfig& c, const std::string& v) {
                if constexpr (std::is_floating_point_v<T>)
                    c.*member = to_double(key, v);
                else
                    c.*member = to_int<T>(key, v);
            },
            [member](const ExperimentConfig& c) {
                if constexpr (std::is_floating_point_v<T>)
                    return fmt(c.*member);
                else
                    return std::to_string(c.*member);
            }};
}

Field text(std::string ExperimentConfig::*member) {
    return {[member](ExperimentConfig& c, const std::string& v) { c.*member = v; },
            [member](const ExperimentConfig& c) { return c.*member; }};
}

Field flag(bool ExperimentConfig::*member, const char* key) {
    return {[member, key](ExperimentConfig& c, const std::string& v) { c.*member = to_bool(key, v); },
            [member](const ExperimentConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = [] {
        using C = ExperimentConfig;
        std::map<std::string, Field> t;
        t["grid.dim"] = number(&C::dim, "grid.dim");
        t["grid.n"] = number(&C::grid_n, "grid.n");
        t["grid.l"] = number(&C::grid_l, "grid.l");
        t["symbol.name"] = text(&C::symbol);
        t["symbol.m"] = number(&C::symbol_m, "symbol.m");
        t["symbol.rho"] = number(&C::symbol_rho, "symbol.rho");
        t["symbol.delta"] = number(&C::symbol_delta, "symbol.delta");
        t["symbol.width"] = number(&C::symbol_width, "symbol.width");
        t["weight.name"] = text(&C::weight);
        t["weight.exponent"] = number(&C::weight_exponent, "weight.exponent");
        t["weight.p"] = number(&C::p, "weight.p");
        t["weight.theta"] = number(&C::theta, "weight.theta");
        t["weight.radius_cap"] = number(&C::radius_cap, "weight.radius_cap");
        t["bmo.name"] = text(&C::bmo);
        t["bmo.theta"] = number(&C::bmo_theta, "bmo.theta");
        t["bmo.jn_s"] = number(&C::jn_s, "bmo.jn_s");
        t["corpus.count"] = number(&C::corpus_count, "corpus.count");
        t["corpus.modulated"] = flag(&C::corpus_modulated, "corpus.modulated");
        t["fs.count"] = number(&C::fs_count, "fs.count");
        t["fs.beta"] = number(&C::fs_beta, "fs.beta");
        t["lemma.count"] = number(&C::lemma_count, "lemma.count");
        t["lemma.near"] = number(&C::lemma_near, "lemma.near");
        t["maximal.s"] = number(&C::s, "maximal.s");
        t["maximal.kappa"] = number(&C::kappa, "maximal.kappa");
        t["maximal.n_big"] = number(&C::n_big, "maximal.n_big");
        t["kernel.k_lo"] = number(&C::kernel_k_lo, "kernel.k_lo");
        t["kernel.k_hi"] = number(&C::kernel_k_hi, "kernel.k_hi");
        t["kernel.ells"] = {[](C& c, const std::string& v) {
                                c.kernel_ells.clear();
                                std::stringstream ss(v);
                                std::string item;
                                while (std::getline(ss, item, ','))
                                    c.kernel_ells.push_back(to_int<int>("kernel.ells", trim(item)));
                                if (c.kernel_ells.empty()) bad_value("kernel.ells", v);
                            },
                            [](const C& c) {
                                std::string out;
                                for (std::size_t i = 0; i < c.kernel_ells.size(); ++i)
                                    out += (i ? "," : "") + std::to_string(c.kernel_ells[i]);
                                return out;
                            }};
        t["stats.factor"] = number(&C::ratio_factor, "stats.factor");
        t["stats.slope_tol"] = number(&C::slope_tol, "stats.slope_tol");
        t["run.counterexample"] = flag(&C::counterexample, "run.counterexample");
        t["run.seed"] = number(&C::seed, "run.seed");
        t["output.dir"] = text(&C::out_dir);
        return t;
    }();
    return table;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw std::invalid_argument("config: unknown key " + key);
    it->second.set(*this, value);
}

std::string ExperimentConfig::canonical() const {
    std::string out;
    for (const auto& [key, field] : fields()) {
        if (key == "run.seed" || key == "output.dir") continue;
        out += key + "=" + field.get(*this) + "\n";
    }
    return out;
}

std::string ExperimentConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
        cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace wpsdo
