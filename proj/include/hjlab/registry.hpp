// Self-contained experiment registry: each entry assembles its problem from
// closed forms, runs its solvers and checks, and writes CSV/plot artifacts
// plus a pass/fail summary. Entries touch no network and read no external
// data.
#pragma once
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hjlab/config.hpp"

namespace hjlab {

struct ExperimentSpec {
    std::string id;
    std::string section; // family label shown by `list`
    std::vector<std::string> tags;
    std::string description;
    RunConfig defaults;
};

const std::vector<ExperimentSpec>& experiment_registry(bool empty = false);
const ExperimentSpec* find_experiment(const std::string& id);
std::vector<ExperimentSpec> experiments_with_tag(const std::string& tag);

struct OutcomeLine {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail; // the bound the value was held to
};

struct ExperimentResult {
    std::string id;
    bool all_pass = false;
    std::vector<OutcomeLine> outcomes;
    std::map<std::string, double> metrics;
    std::filesystem::path artifact_dir;

    double metric(const std::string& name) const;
    std::string summary_text() const;
};

// Honors HJLAB_ARTIFACTS; falls back to ./artifacts.
std::filesystem::path default_artifact_root();

ExperimentResult run_experiment(const std::string& id, const RunConfig& overrides,
                                const std::filesystem::path& artifact_root);

} // namespace hjlab
