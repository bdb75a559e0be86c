#pragma once

// Named, reproducible experiments binding the library's constructions to
// quantitative claims. Each run returns a pass/fail summary (JSON, schema 1)
// plus deterministic text artifacts; identical options produce byte-identical
// artifacts regardless of thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolin/space.hpp"

namespace ergolin {

struct RunOptions {
    std::optional<std::string> experiment;
    std::optional<json> op;           // operator override (where documented)
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> radii;
    std::optional<std::string> out;   // artifact directory (consumed by the CLI)
    std::optional<double> tolerance;  // experiment's headline bound
    int threads = 0;                  // 0 = ERGOLIN_THREADS or hardware
};

// Parses the config file tree; unknown keys and wrongly typed values are
// rejected with ValidationError.
RunOptions options_from_json(const json& j);

// Later fields win where set: flags override the file, the file overrides
// defaults.
RunOptions merge_options(RunOptions base, const RunOptions& over);

struct ExperimentInfo {
    std::string name;
    std::string anchor;     // one-line statement of the claim the run checks
    std::string tolerance;  // headline tolerances
    std::string knobs;      // options the experiment honors
    std::string artifacts;  // files the run emits
};

// Stable-ordered registry of the nine experiments.
const std::vector<ExperimentInfo>& experiment_catalog();

struct Artifact {
    std::string name;   // file name relative to the output directory
    std::string bytes;  // full text content, deterministic
};

struct Outcome {
    bool pass = false;
    json summary;  // schema 1: anchor, tolerance, measured values, pass
    std::vector<Artifact> artifacts;
};

Outcome run_experiment(const std::string& name, const RunOptions& opts);

}  // namespace ergolin
