#ifndef EWNMF_EXPERIMENT_HPP
#define EWNMF_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ewnmf/data.hpp"
#include "ewnmf/factorization.hpp"
#include "ewnmf/objectives.hpp"

namespace ewnmf {

// Declarative description of one experiment run. Populated from a flat
// key=value config file, CLI flags, or both (flags win).
struct ExperimentConfig {
    std::string dataset;          // CSV path or "synthetic:key=value,..." spec
    std::string labels_path;      // required when dataset is a CSV path
    ObjectiveSpec objective = ObjectiveSpec::weighted_frobenius(1.0);
    std::vector<double> gamma_grid;   // defaults to {10^i : i = -8..8}
    std::vector<int> cluster_counts;  // defaults to 2..10
    int repeats = 10;
    int iters = 300;
    std::uint64_t seed = 0;
    int restarts = 10;
    bool normalize = true;        // per-column min-max before factorizing
    std::string output_dir = ".";
};

struct RunRecord {
    std::string method; // "nmf" or "ewnmf"
    double gamma = 0.0; // 0 for the unweighted baseline
    int k = 0;
    std::uint64_t seed = 0;
    double acc = 0.0;
    double nmi = 0.0;
    double final_cost = 0.0;
};

struct AggregateRecord {
    std::string method;
    double gamma = 0.0;
    int k = 0;
    int runs = 0;
    double mean_acc = 0.0;
    double mean_nmi = 0.0;
    double mean_final_cost = 0.0;
};

struct MetricReport {
    std::vector<RunRecord> runs;
    std::vector<AggregateRecord> aggregates;
};

struct UnmixOptions {
    std::size_t length = 400;
    double corrupt_fraction = 0.2;
    double gamma = 0.05;
    std::size_t iters = 300;
    std::uint64_t seed = 0;
    std::string output_dir; // empty = no files written
};

// Median attribute weight over the corrupted leading window of the first
// mixed signal versus over the rest of it. A zero corrupt_fraction run still
// measures a nominal 20% leading window so the null control has a ratio.
struct UnmixReport {
    std::size_t corrupt_len = 0;
    double corrupted_median = 0.0;
    double clean_median = 0.0;
    double ratio = 0.0;
};

std::vector<double> default_gamma_grid(); // {1e-8, ..., 1e8}
std::vector<int> default_cluster_counts(); // {2, ..., 10}

// Maps an objective name ("frobenius", "weighted-frobenius", "weighted-kl",
// "weighted-alpha", "hard-weight") onto a spec with the given hyperparameters.
ObjectiveSpec objective_from_name(const std::string& name, double gamma, double alpha);

// Flat key=value file, '#' comments; unknown keys are errors.
ExperimentConfig parse_config_file(const std::string& path);

// Applies a "key=value,..." synthetic spec or loads CSV + labels.
LabeledDataset resolve_dataset(const ExperimentConfig& config);

// For each gamma in the grid and each repeat: factorize with the rank equal
// to the class count, cluster the columns of H, score ACC/NMI. A plain NMF
// baseline (one run per repeat) is recorded alongside.
MetricReport run_gamma_sweep(const ExperimentConfig& config, const LabeledDataset& ds);

// Cluster-count protocol: per k and repeat, sample a k-class subset, then
// factorize and score the baseline and every grid gamma on that subset.
MetricReport run_cluster_count_experiment(const ExperimentConfig& config,
                                          const LabeledDataset& ds);

std::vector<AggregateRecord> compute_aggregates(const std::vector<RunRecord>& runs);

// Highest mean ACC among aggregates of `method`; ties broken by NMI, then by
// the smaller gamma.
const AggregateRecord* best_by_acc(const MetricReport& report, const std::string& method,
                                   int k);

// runs.csv (one row per run) and aggregates.csv (means), fixed formatting.
void write_report_csv(const MetricReport& report, const std::string& dir);

// One (iteration, cost) row per recorded iteration, headerless.
void export_cost_trace(const FactorModel& model, const std::string& path);

// W with each column rescaled to sum 1 (zero columns stay zero), headerless.
void export_basis(const FactorModel& model, const std::string& path);

UnmixReport run_unmix_demo(const UnmixOptions& options);

} // namespace ewnmf

#endif
