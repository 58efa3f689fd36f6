#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace hitchin;
using namespace hitchin::cli;

int main(int argc, char **argv) {
    CLI::App app{"Numerical checks for Hitchin, Gaudin and elliptic Calogero systems"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App *app;
        std::string config_path;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Sub> subs;
    for (const auto &name : experiments()) {
        Sub &s = subs[name];
        s.app = app.add_subcommand(name, "run the " + name + " experiment");
        s.app->add_option("--config", s.config_path, "key = value configuration file");
        for (const auto &key : schema(name)) {
            std::string help = key.help + (key.required ? " (required)" : " [" + key.fallback + "]");
            s.app->add_option("--" + key.name, s.flags[key.name], help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ConfigFailure;
    }

    for (auto &[name, s] : subs) {
        if (!s.app->parsed()) continue;
        ExperimentConfig cfg(name);
        try {
            if (!s.config_path.empty()) cfg = ExperimentConfig::load(s.config_path, name);
            for (const auto &key : schema(name))
                if (s.app->count("--" + key.name) > 0) cfg.set(key.name, s.flags[key.name]);
            cfg.finalize();
        } catch (const ConfigError &e) {
            std::cerr << "config error: " << e.what() << "\n";
            return ConfigFailure;
        }

        try {
            const Report report = run_experiment(cfg);
            write_report(report, cfg);
            std::cout << format_checks(report);
            std::cout << (report.ok() ? "all checks passed" : "tolerance failure") << "\n";
            return report.ok() ? Ok : ToleranceFailure;
        } catch (const ConfigError &e) {
            std::cerr << "config error: " << e.what() << "\n";
            return ConfigFailure;
        } catch (const PoleError &e) {
            std::cerr << "pole guard: " << e.what() << " (lattice point " << format_complex(e.lattice_point())
                      << ")\n";
            return DomainFailure;
        } catch (const DomainError &e) {
            std::cerr << "domain error: " << e.what() << "\n";
            return DomainFailure;
        } catch (const TruncationError &e) {
            std::cerr << "truncation error: " << e.what() << "\n";
            return DomainFailure;
        }
    }
    return ConfigFailure;
}
