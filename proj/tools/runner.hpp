#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <hitchin/io.hpp>

#include "config.hpp"

namespace hitchin::cli {

enum ExitCode { Ok = 0, ToleranceFailure = 1, ConfigFailure = 2, DomainFailure = 3 };

struct Check {
    std::string group; // acceptance group, e.g. "theta"
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool lower_bound = false;   // pass when value >= tol
    bool informational = false; // reported, never fails the run
    bool pass() const { return informational || (lower_bound ? value >= tol : value <= tol); }
};

struct Report {
    std::string experiment;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, CsvWriter>> tables; // file stem -> table
    std::map<std::string, double> group_seconds;
    std::map<std::string, std::string> metadata; // extra JSON fields, values already JSON-encoded

    bool ok() const;
    void add(Check c) { checks.push_back(std::move(c)); }
    const Check *find(const std::string &name) const;
    CsvWriter checks_table() const;
};

// runs the experiment of a finalized config; throws PoleError/DomainError on bad input
Report run_experiment(const ExperimentConfig &cfg);

// writes <out>/<stem>.csv for each table, <experiment>_checks.csv and <experiment>_meta.json
void write_report(const Report &report, const ExperimentConfig &cfg);

// human-readable per-check table
std::string format_checks(const Report &report);

} // namespace hitchin::cli
