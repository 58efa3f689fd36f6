#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <hitchin/common.hpp>

namespace hitchin::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class KeyType { Int, UInt, Real, Text, Bool, IntList, RealList, ComplexList, PairList, WeightSets, RationalList };

struct KeySpec {
    std::string name;
    KeyType type;
    std::string fallback; // default value; ignored when required
    bool required = false;
    std::string help;
};

// Keys accepted by a subcommand, common keys included.
const std::vector<KeySpec> &schema(const std::string &experiment);
const std::vector<std::string> &experiments();

// Flat key = value configuration. Values are kept as written so that
// to_text() and parse() round-trip exactly.
class ExperimentConfig {
public:
    ExperimentConfig() = default;
    explicit ExperimentConfig(std::string experiment);

    // '#' starts a comment; blank lines ignored; "experiment = name" optional
    static ExperimentConfig parse(const std::string &text, const std::string &experiment = "");
    static ExperimentConfig load(const std::string &path, const std::string &experiment = "");
    std::string to_text() const;

    const std::string &experiment() const { return experiment_; }
    // throws ConfigError naming an unknown key or a malformed value
    void set(const std::string &key, const std::string &value);
    bool has(const std::string &key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string> &values() const { return values_; }

    // fills defaults, then reports the first missing required key
    void finalize();

    std::string text(const std::string &key) const;
    long long integer(const std::string &key) const;
    std::uint64_t unsigned_integer(const std::string &key) const;
    double real(const std::string &key) const;
    bool boolean(const std::string &key) const;
    std::vector<int> int_list(const std::string &key) const;
    std::vector<double> real_list(const std::string &key) const;
    std::vector<cplx> complex_list(const std::string &key) const;
    std::vector<std::pair<int, int>> pair_list(const std::string &key) const;
    std::vector<std::vector<int>> weight_sets(const std::string &key) const;
    // "p/q" or integers
    std::vector<std::pair<long long, long long>> rational_list(const std::string &key) const;

    friend bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
        return a.experiment_ == b.experiment_ && a.values_ == b.values_;
    }

private:
    std::string experiment_;
    std::map<std::string, std::string> values_;
    const KeySpec &spec(const std::string &key) const;
    const std::string &raw(const std::string &key) const;
};

} // namespace hitchin::cli
