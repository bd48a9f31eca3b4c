#pragma once

// Named, reproducible experiment drivers: each run_* function wires the
// library modules into one study, writes plot-ready CSV files plus a JSON
// summary into the configured output directory, and returns the scalar
// results in memory.  Identical config + seed produces byte-identical files.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "beurlab/geometry.hpp"

// vendored single-header JSON (order-preserving variant keeps output stable)
#include "json.hpp"

namespace beurlab {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string id;            // one of the experiment names below
    std::string out_dir = "."; // CSV / JSON destination, created if missing
    std::uint64_t seed = 1;
    int depth = 0;             // resolution knob; 0 keeps per-experiment defaults
    int threads = 1;           // accepted for CLI compatibility; runs are serial
    json params;               // per-experiment numeric parameters (may be empty)

    // Parses a JSON config file {"id": ..., "out": ..., "seed": ...,
    // "depth": ..., "threads": ..., "params": {...}}.
    static ExperimentConfig from_file(const std::string& path);

    // Throws std::invalid_argument on out-of-range fields, non-positive
    // tolerances anywhere in params, or referenced files that do not exist.
    void validate() const;

    // FNV-1a hash of the canonical serialized config; stamped into outputs.
    std::uint64_t hash() const;
};

struct ScalarRow {
    std::string name;
    double value = 0.0;
    std::string method;   // how the number was produced
    double error = 0.0;   // error estimate, same units as value
    bool flagged = false; // error > 10% of |value|
};

struct ExperimentReport {
    std::string id;
    std::uint64_t config_hash = 0;
    std::vector<ScalarRow> scalars;
    std::vector<std::string> csv_paths;
    json summary; // the JSON object written to <out>/<id>_summary.json

    const ScalarRow& scalar(const std::string& name) const; // throws if absent
    bool has_scalar(const std::string& name) const;
};

// Domain described by config parameters; throws std::invalid_argument on an
// unknown spec.  {"type": "disk"|"square"|"half_plane"|"graph"|"poly_graph",
// ...} with graph kinds "sine_bump" (C^{0,1}) and "poly_bump" (C^{n-1,1}).
Domain domain_from_json(const json& spec);

// Compactly supported certified graph bumps with A(0) = 0.
DefiningFunction sine_bump(double eps, double R);
DefiningFunction poly_bump(double eps, double R, int n);

// Named 1-D test functions shared by the approximation and seminorm studies;
// the first ten (smooth through kinked) form the seminorm-comparison corpus.
std::vector<std::pair<std::string, std::function<double(double)>>> function_corpus();

ExperimentReport run_whitney(const ExperimentConfig& cfg);
ExperimentReport run_beta(const ExperimentConfig& cfg);
ExperimentReport run_besov(const ExperimentConfig& cfg);
ExperimentReport run_transform(const ExperimentConfig& cfg);
ExperimentReport run_theorem1(const ExperimentConfig& cfg);
ExperimentReport run_claim_interstitial(const ExperimentConfig& cfg);
ExperimentReport run_flat_poly(const ExperimentConfig& cfg);
ExperimentReport run_iterates(const ExperimentConfig& cfg);
ExperimentReport run_corner(const ExperimentConfig& cfg);
ExperimentReport run_beltrami(const ExperimentConfig& cfg);
ExperimentReport run_lemma_appendix(const ExperimentConfig& cfg);

// Dispatch on cfg.id: whitney | beta | besov | transform | theorem1 |
// interstitial | flatpoly | iterates | corner | beltrami | appendix.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::string> experiment_ids();

}  // namespace beurlab
