#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <hitchin/io.hpp>

namespace hitchin::cli {

namespace {

std::vector<KeySpec> common_keys(const std::string &tol) {
    return {
        {"seed", KeyType::UInt, "1", false, "64-bit run seed"},
        {"out", KeyType::Text, "out", false, "output directory"},
        {"tol", KeyType::Real, tol, false, "primary residual tolerance"},
        {"threads", KeyType::Int, "0", false, "worker threads, 0 = hardware"},
    };
}

std::vector<KeySpec> with_common(const std::string &tol, std::vector<KeySpec> keys) {
    auto all = common_keys(tol);
    all.insert(all.end(), keys.begin(), keys.end());
    return all;
}

const std::map<std::string, std::vector<KeySpec>> &schemas() {
    static const std::map<std::string, std::vector<KeySpec>> table{
        {"theta-check",
         with_common("1e-10", {
             {"q", KeyType::ComplexList, "", true, "nome values"},
             {"points", KeyType::Int, "100", false, "random points per q"},
             {"fd_step", KeyType::Real, "0.02", false, "coarse step of the Euler-derivative order study"},
             {"order_min", KeyType::Real, "1.9", false, "minimal observed difference order"},
         })},
        {"rational-classical",
         with_common("1e-8", {
             {"systems", KeyType::PairList, "2:3,2:4,3:3", false, "n:N pairs"},
             {"points", KeyType::Int, "20", false, "random phase points per system"},
             {"fd_points", KeyType::Int, "3", false, "points with finite-difference gradients"},
             {"tol_fd", KeyType::Real, "1e-6", false, "gradient cross-check tolerance"},
             {"tol_tensor", KeyType::Real, "1e-9", false, "Lax bracket tensor tolerance"},
             {"flow_n", KeyType::Int, "2", false, "rank of the flow system"},
             {"flow_N", KeyType::Int, "3", false, "sites of the flow system"},
             {"flow_nilpotent", KeyType::Bool, "true", false, "nilpotent flow residues"},
             {"flow_T", KeyType::Real, "1", false, "flow time"},
             {"flow_dt", KeyType::Real, "1e-3", false, "RK4 step"},
             {"tol_flow", KeyType::Real, "1e-8", false, "invariant drift tolerance"},
             {"tol_eigen", KeyType::Real, "1e-7", false, "eigenvalue drift tolerance"},
             {"order_dt", KeyType::Real, "0.1", false, "coarse step of the order study"},
             {"order_min", KeyType::Real, "3.7", false, "minimal observed RK order"},
         })},
        {"rational-quantum",
         with_common("1e-12", {
             {"n", KeyType::Int, "2", false, "rank (2: sl2 weights, >2: copies of C^n)"},
             {"weights", KeyType::WeightSets, "1,1,1;2,1,1;1,1,1,1", false, "weight sets separated by ';'"},
             {"sites", KeyType::RationalList, "", false, "rational sites; random when empty"},
             {"p_max", KeyType::Int, "20", false, "s_p table length"},
             {"n_max", KeyType::Int, "6", false, "largest n of the s_p table"},
             {"higher", KeyType::Bool, "true", false, "run the Haar higher-operator study"},
             {"mc_samples", KeyType::Int, "100000", false, "Monte Carlo samples"},
             {"se_factor", KeyType::Real, "3", false, "standard-error multiple"},
             {"quad_polar", KeyType::Int, "20", false, "Gauss nodes in cos(polar angle)"},
             {"quad_azimuth", KeyType::Int, "32", false, "trapezoid nodes in azimuth"},
         })},
        {"elliptic-classical",
         with_common("1e-9", {
             {"q", KeyType::ComplexList, "", true, "nome values"},
             {"n", KeyType::IntList, "2,3", false, "ranks"},
             {"N", KeyType::IntList, "1,2,3", false, "site counts"},
             {"points", KeyType::Int, "50", false, "random phase points in total"},
             {"tol_bracket", KeyType::Real, "1e-8", false, "relative bracket tolerance on C = 0"},
             {"tol_trace", KeyType::Real, "1e-9", false, "trace expansion tolerance"},
             {"tol_quasi", KeyType::Real, "1e-10", false, "quasi-periodicity tolerance"},
             {"degeneration_q", KeyType::RealList, "0.1,0.03,0.01,0.003,0.001", false, "q -> 0 family"},
         })},
        {"elliptic-quantum",
         with_common("1e-8", {
             {"q", KeyType::ComplexList, "", true, "nome values"},
             {"k", KeyType::IntList, "0,2", false, "twist levels"},
             {"weights", KeyType::WeightSets, "2;1,1", false, "weight sets separated by ';'"},
             {"sites", KeyType::ComplexList, "", false, "sites (first N used); random when empty"},
             {"t_samples", KeyType::Int, "10", false, "random torus points"},
             {"m_min", KeyType::Int, "-2", false, "lowest trial exponent"},
             {"m_max", KeyType::Int, "2", false, "highest trial exponent"},
             {"symbol_points", KeyType::Int, "20", false, "phase points of the symbol check"},
             {"tol_symbol", KeyType::Real, "1e-9", false, "symbol tolerance"},
             {"invariance_points", KeyType::Int, "10", false, "points of the invariance checks"},
             {"tol_invariance", KeyType::Real, "1e-10", false, "S2 and lattice tolerance"},
         })},
    };
    return table;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

template <class T> T parse_number(const std::string &s, const std::string &key) {
    T v{};
    const std::string t = trim(s);
    const char *b = t.data();
    if (!t.empty() && *b == '+') ++b;
    auto res = std::from_chars(b, t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("key '" + key + "': cannot parse '" + s + "'");
    return v;
}

bool parse_bool(const std::string &s, const std::string &key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + s + "'");
}

std::pair<long long, long long> parse_rational(const std::string &s, const std::string &key) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return {parse_number<long long>(s, key), 1};
    long long den = parse_number<long long>(s.substr(slash + 1), key);
    if (den == 0) throw ConfigError("key '" + key + "': zero denominator in '" + s + "'");
    return {parse_number<long long>(s.substr(0, slash), key), den};
}

// empty text is an empty list
template <class F> auto parse_list(const std::string &s, char sep, F item) {
    using T = decltype(item(std::string()));
    std::vector<T> out;
    if (trim(s).empty()) return out;
    for (const auto &part : split(s, sep)) out.push_back(item(part));
    return out;
}

void validate(const KeySpec &spec, const std::string &v) {
    const std::string &k = spec.name;
    switch (spec.type) {
    case KeyType::Int: parse_number<long long>(v, k); break;
    case KeyType::UInt: parse_number<std::uint64_t>(v, k); break;
    case KeyType::Real: parse_number<double>(v, k); break;
    case KeyType::Text: break;
    case KeyType::Bool: parse_bool(v, k); break;
    case KeyType::IntList: parse_list(v, ',', [&](const std::string &x) { return parse_number<int>(x, k); }); break;
    case KeyType::RealList: parse_list(v, ',', [&](const std::string &x) { return parse_number<double>(x, k); }); break;
    case KeyType::ComplexList:
        parse_list(v, ',', [&](const std::string &x) {
            try {
                return parse_complex(x);
            } catch (const DomainError &e) {
                throw ConfigError("key '" + k + "': " + e.what());
            }
        });
        break;
    case KeyType::PairList:
        parse_list(v, ',', [&](const std::string &x) {
            auto parts = split(x, ':');
            if (parts.size() != 2) throw ConfigError("key '" + k + "': expected n:N, got '" + x + "'");
            return std::make_pair(parse_number<int>(parts[0], k), parse_number<int>(parts[1], k));
        });
        break;
    case KeyType::WeightSets:
        parse_list(v, ';', [&](const std::string &set) {
            auto w = parse_list(set, ',', [&](const std::string &x) { return parse_number<int>(x, k); });
            if (w.empty()) throw ConfigError("key '" + k + "': empty weight set");
            return w;
        });
        break;
    case KeyType::RationalList: parse_list(v, ',', [&](const std::string &x) { return parse_rational(x, k); }); break;
    }
}

} // namespace

const std::vector<KeySpec> &schema(const std::string &experiment) {
    auto it = schemas().find(experiment);
    if (it == schemas().end()) throw ConfigError("unknown experiment '" + experiment + "'");
    return it->second;
}

const std::vector<std::string> &experiments() {
    static const std::vector<std::string> names{"theta-check", "rational-classical", "rational-quantum",
                                                "elliptic-classical", "elliptic-quantum"};
    return names;
}

ExperimentConfig::ExperimentConfig(std::string experiment)
  : experiment_(std::move(experiment)) {
    schema(experiment_);
}

const KeySpec &ExperimentConfig::spec(const std::string &key) const {
    for (const auto &s : schema(experiment_))
        if (s.name == key) return s;
    throw ConfigError("unknown key '" + key + "' for experiment '" + experiment_ + "'");
}

void ExperimentConfig::set(const std::string &key, const std::string &value) {
    const std::string v = trim(value);
    validate(spec(key), v);
    values_[key] = v;
}

ExperimentConfig ExperimentConfig::parse(const std::string &text, const std::string &experiment) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string name = experiment;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (key == "experiment") {
            if (!name.empty() && name != value)
                throw ConfigError("config is for experiment '" + value + "', not '" + name + "'");
            name = value;
            continue;
        }
        for (const auto &e : entries)
            if (e.first == key) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        entries.emplace_back(std::move(key), std::move(value));
    }
    if (name.empty()) throw ConfigError("experiment name missing");
    ExperimentConfig cfg(name);
    for (const auto &[k, v] : entries) cfg.set(k, v);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string &path, const std::string &experiment) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), experiment);
}

std::string ExperimentConfig::to_text() const {
    std::string out = "experiment = " + experiment_ + "\n";
    for (const auto &[k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

void ExperimentConfig::finalize() {
    for (const auto &s : schema(experiment_)) {
        if (values_.count(s.name)) continue;
        if (s.required) throw ConfigError("missing required key '" + s.name + "' for experiment '" + experiment_ + "'");
        values_[s.name] = s.fallback;
    }
}

const std::string &ExperimentConfig::raw(const std::string &key) const {
    spec(key);
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::text(const std::string &key) const { return raw(key); }

long long ExperimentConfig::integer(const std::string &key) const { return parse_number<long long>(raw(key), key); }

std::uint64_t ExperimentConfig::unsigned_integer(const std::string &key) const {
    return parse_number<std::uint64_t>(raw(key), key);
}

double ExperimentConfig::real(const std::string &key) const { return parse_number<double>(raw(key), key); }

bool ExperimentConfig::boolean(const std::string &key) const { return parse_bool(raw(key), key); }

std::vector<int> ExperimentConfig::int_list(const std::string &key) const {
    return parse_list(raw(key), ',', [&](const std::string &x) { return parse_number<int>(x, key); });
}

std::vector<double> ExperimentConfig::real_list(const std::string &key) const {
    return parse_list(raw(key), ',', [&](const std::string &x) { return parse_number<double>(x, key); });
}

std::vector<cplx> ExperimentConfig::complex_list(const std::string &key) const {
    return parse_list(raw(key), ',', [](const std::string &x) { return parse_complex(x); });
}

std::vector<std::pair<int, int>> ExperimentConfig::pair_list(const std::string &key) const {
    return parse_list(raw(key), ',', [&](const std::string &x) {
        auto parts = split(x, ':');
        return std::make_pair(parse_number<int>(parts.at(0), key), parse_number<int>(parts.at(1), key));
    });
}

std::vector<std::vector<int>> ExperimentConfig::weight_sets(const std::string &key) const {
    return parse_list(raw(key), ';', [&](const std::string &set) {
        return parse_list(set, ',', [&](const std::string &x) { return parse_number<int>(x, key); });
    });
}

std::vector<std::pair<long long, long long>> ExperimentConfig::rational_list(const std::string &key) const {
    return parse_list(raw(key), ',', [&](const std::string &x) { return parse_rational(x, key); });
}

} // namespace hitchin::cli
