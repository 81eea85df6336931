#include "ewnmf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ewnmf/clustering.hpp"
#include "ewnmf/rng.hpp"

namespace ewnmf {

namespace {

constexpr std::uint64_t kTagNmfBaseline = 0x6e6d66ull;
constexpr std::uint64_t kTagEntropy = 0x657766ull;
constexpr std::uint64_t kTagKmeans = 0x6b6dull;
constexpr std::uint64_t kTagSubset = 0x737562ull;
constexpr std::uint64_t kTagUnmix = 0x756e6dull;
constexpr std::uint64_t kTagSynthetic = 0x73796eull;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size()) throw ConfigError(what + ": not a number: '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size()) throw ConfigError(what + ": not an integer: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

void validate_config(const ExperimentConfig& config) {
    if (config.repeats < 1) throw ConfigError("config: repeats must be at least 1");
    if (config.iters < 1) throw ConfigError("config: iters must be at least 1");
    if (config.restarts < 1) throw ConfigError("config: restarts must be at least 1");
    for (double g : config.gamma_grid) {
        if (!(g > 0.0)) throw ConfigError("config: gamma grid values must be positive");
    }
}

std::vector<double> effective_gamma_grid(const ExperimentConfig& config) {
    return config.gamma_grid.empty() ? default_gamma_grid() : config.gamma_grid;
}

std::vector<int> effective_cluster_counts(const ExperimentConfig& config) {
    return config.cluster_counts.empty() ? default_cluster_counts() : config.cluster_counts;
}

RunRecord score_cell(const DenseMatrix& x, const std::vector<int>& labels,
                     const ObjectiveSpec& spec, const std::string& method, double gamma_field,
                     int k_clusters, const ExperimentConfig& config, std::uint64_t cell_seed) {
    const FactorModel model = run_factorization(x, spec, static_cast<std::size_t>(k_clusters),
                                                static_cast<std::size_t>(config.iters),
                                                cell_seed);
    const ClusteringResult clusters =
        kmeans(model.h, static_cast<std::size_t>(k_clusters), mix_seed({cell_seed, kTagKmeans}),
               static_cast<std::size_t>(config.restarts));
    RunRecord rec;
    rec.method = method;
    rec.gamma = gamma_field;
    rec.k = k_clusters;
    rec.seed = cell_seed;
    rec.acc = accuracy(labels, clusters.assignments);
    rec.nmi = nmi(labels, clusters.assignments);
    rec.final_cost = model.cost_trace.back();
    return rec;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

ObjectiveSpec objective_from_name(const std::string& name, double gamma, double alpha) {
    if (name == "frobenius") return ObjectiveSpec::frobenius();
    if (name == "weighted-frobenius") return ObjectiveSpec::weighted_frobenius(gamma);
    if (name == "weighted-kl") return ObjectiveSpec::weighted_kl(gamma);
    if (name == "weighted-alpha") return ObjectiveSpec::weighted_alpha(alpha, gamma);
    if (name == "hard-weight") return ObjectiveSpec::hard_weight();
    throw ConfigError("unknown objective '" + name + "'");
}

std::vector<double> default_gamma_grid() {
    std::vector<double> grid;
    for (int i = -8; i <= 8; ++i) grid.push_back(std::pow(10.0, i));
    return grid;
}

std::vector<int> default_cluster_counts() {
    std::vector<int> counts;
    for (int k = 2; k <= 10; ++k) counts.push_back(k);
    return counts;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    ExperimentConfig config;
    std::string objective_name = "weighted-frobenius";
    double gamma = 1.0;
    double alpha = 2.0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));

        if (key == "dataset") {
            config.dataset = value;
        } else if (key == "labels") {
            config.labels_path = value;
        } else if (key == "objective") {
            objective_name = value;
        } else if (key == "gamma") {
            gamma = parse_double(value, key);
        } else if (key == "alpha") {
            alpha = parse_double(value, key);
        } else if (key == "gamma_grid") {
            config.gamma_grid.clear();
            for (const auto& item : split(value, ','))
                config.gamma_grid.push_back(parse_double(item, key));
        } else if (key == "cluster_counts") {
            config.cluster_counts.clear();
            for (const auto& item : split(value, ','))
                config.cluster_counts.push_back(static_cast<int>(parse_long(item, key)));
        } else if (key == "repeats") {
            config.repeats = static_cast<int>(parse_long(value, key));
        } else if (key == "iters") {
            config.iters = static_cast<int>(parse_long(value, key));
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_long(value, key));
        } else if (key == "restarts") {
            config.restarts = static_cast<int>(parse_long(value, key));
        } else if (key == "normalize") {
            if (value == "true" || value == "1") config.normalize = true;
            else if (value == "false" || value == "0") config.normalize = false;
            else throw ConfigError(key + ": expected true/false, got '" + value + "'");
        } else if (key == "output_dir") {
            config.output_dir = value;
        } else {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    config.objective = objective_from_name(objective_name, gamma, alpha);
    return config;
}

LabeledDataset resolve_dataset(const ExperimentConfig& config) {
    if (config.dataset.empty()) throw ConfigError("config: no dataset given");

    if (config.dataset.rfind("synthetic:", 0) == 0 || config.dataset == "synthetic") {
        std::size_t classes = 5, per_class = 40, attrs = 100;
        double corrupt = 0.15;
        if (config.dataset != "synthetic") {
            for (const auto& item : split(config.dataset.substr(10), ',')) {
                if (item.empty()) continue;
                const auto eq = item.find('=');
                if (eq == std::string::npos) {
                    throw ConfigError("synthetic spec: expected key=value, got '" + item + "'");
                }
                const std::string key = trim(item.substr(0, eq));
                const std::string value = trim(item.substr(eq + 1));
                if (key == "classes") classes = static_cast<std::size_t>(parse_long(value, key));
                else if (key == "per_class") per_class = static_cast<std::size_t>(parse_long(value, key));
                else if (key == "attrs") attrs = static_cast<std::size_t>(parse_long(value, key));
                else if (key == "corrupt") corrupt = parse_double(value, key);
                else throw ConfigError("synthetic spec: unknown key '" + key + "'");
            }
        }
        return gen_clustered_synthetic(classes, per_class, attrs, corrupt,
                                       mix_seed({config.seed, kTagSynthetic}));
    }

    LabeledDataset ds;
    ds.x = load_matrix_csv(config.dataset);
    ds.name = std::filesystem::path(config.dataset).stem().string();
    if (!config.labels_path.empty()) {
        ds.labels = load_labels(config.labels_path);
        if (ds.labels.size() != ds.x.cols()) {
            throw ConfigError("labels: " + std::to_string(ds.labels.size()) +
                              " entries for " + std::to_string(ds.x.cols()) + " columns");
        }
    }
    return ds;
}

MetricReport run_gamma_sweep(const ExperimentConfig& config, const LabeledDataset& ds) {
    validate_config(config);
    if (ds.labels.empty()) throw ConfigError("gamma sweep: dataset has no labels");
    if (config.objective.family != DivergenceFamily::WeightedFrobenius) {
        throw ConfigError("gamma sweep: objective must be weighted-frobenius");
    }
    const auto grid = effective_gamma_grid(config);
    const int k = static_cast<int>(count_classes(ds.labels));
    const DenseMatrix x = config.normalize ? minmax_normalize_columns(ds.x) : ds.x;

    MetricReport report;
    for (int rep = 0; rep < config.repeats; ++rep) {
        const std::uint64_t cell =
            mix_seed({config.seed, kTagNmfBaseline, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(rep)});
        report.runs.push_back(
            score_cell(x, ds.labels, ObjectiveSpec::frobenius(), "nmf", 0.0, k, config, cell));
    }
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        for (int rep = 0; rep < config.repeats; ++rep) {
            const std::uint64_t cell =
                mix_seed({config.seed, kTagEntropy, gi, static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(rep)});
            report.runs.push_back(score_cell(x, ds.labels,
                                             ObjectiveSpec::weighted_frobenius(grid[gi]),
                                             "ewnmf", grid[gi], k, config, cell));
        }
    }
    report.aggregates = compute_aggregates(report.runs);
    return report;
}

MetricReport run_cluster_count_experiment(const ExperimentConfig& config,
                                          const LabeledDataset& ds) {
    validate_config(config);
    if (ds.labels.empty()) throw ConfigError("cluster-count experiment: dataset has no labels");
    if (config.objective.family != DivergenceFamily::WeightedFrobenius) {
        throw ConfigError("cluster-count experiment: objective must be weighted-frobenius");
    }
    const auto grid = effective_gamma_grid(config);
    const auto counts = effective_cluster_counts(config);
    const std::size_t classes = count_classes(ds.labels);
    for (int k : counts) {
        if (k < 2 || static_cast<std::size_t>(k) > classes) {
            throw ConfigError("cluster-count experiment: k = " + std::to_string(k) +
                              " but dataset has " + std::to_string(classes) + " classes");
        }
    }

    LabeledDataset normalized = ds;
    if (config.normalize) normalized.x = minmax_normalize_columns(ds.x);

    MetricReport report;
    for (int k : counts) {
        for (int rep = 0; rep < config.repeats; ++rep) {
            const std::uint64_t subset_seed =
                mix_seed({config.seed, kTagSubset, static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(rep)});
            const LabeledDataset sub =
                sample_class_subset(normalized, static_cast<std::size_t>(k), subset_seed);

            const std::uint64_t base_cell =
                mix_seed({config.seed, kTagNmfBaseline, static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(rep)});
            report.runs.push_back(score_cell(sub.x, sub.labels, ObjectiveSpec::frobenius(),
                                             "nmf", 0.0, k, config, base_cell));
            for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                const std::uint64_t cell =
                    mix_seed({config.seed, kTagEntropy, gi, static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(rep)});
                report.runs.push_back(score_cell(sub.x, sub.labels,
                                                 ObjectiveSpec::weighted_frobenius(grid[gi]),
                                                 "ewnmf", grid[gi], k, config, cell));
            }
        }
    }
    report.aggregates = compute_aggregates(report.runs);
    return report;
}

std::vector<AggregateRecord> compute_aggregates(const std::vector<RunRecord>& runs) {
    std::vector<AggregateRecord> aggregates;
    for (const RunRecord& run : runs) {
        AggregateRecord* agg = nullptr;
        for (AggregateRecord& a : aggregates) {
            if (a.method == run.method && a.gamma == run.gamma && a.k == run.k) {
                agg = &a;
                break;
            }
        }
        if (agg == nullptr) {
            aggregates.push_back({run.method, run.gamma, run.k, 0, 0.0, 0.0, 0.0});
            agg = &aggregates.back();
        }
        agg->runs += 1;
        agg->mean_acc += run.acc;
        agg->mean_nmi += run.nmi;
        agg->mean_final_cost += run.final_cost;
    }
    for (AggregateRecord& a : aggregates) {
        const double inv = 1.0 / static_cast<double>(a.runs);
        a.mean_acc *= inv;
        a.mean_nmi *= inv;
        a.mean_final_cost *= inv;
    }
    return aggregates;
}

const AggregateRecord* best_by_acc(const MetricReport& report, const std::string& method,
                                   int k) {
    const AggregateRecord* best = nullptr;
    for (const AggregateRecord& a : report.aggregates) {
        if (a.method != method || a.k != k) continue;
        if (best == nullptr || a.mean_acc > best->mean_acc ||
            (a.mean_acc == best->mean_acc &&
             (a.mean_nmi > best->mean_nmi ||
              (a.mean_nmi == best->mean_nmi && a.gamma < best->gamma)))) {
            best = &a;
        }
    }
    return best;
}

void write_report_csv(const MetricReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);

    std::ofstream runs(std::filesystem::path(dir) / "runs.csv");
    if (!runs) throw IoError("cannot write runs.csv under " + dir);
    runs << "method,gamma,k,seed,acc,nmi,final_cost\n";
    for (const RunRecord& r : report.runs) {
        runs << r.method << ',' << format_csv_value(r.gamma) << ',' << r.k << ',' << r.seed
             << ',' << format_csv_value(r.acc) << ',' << format_csv_value(r.nmi) << ','
             << format_csv_value(r.final_cost) << '\n';
    }

    std::ofstream aggs(std::filesystem::path(dir) / "aggregates.csv");
    if (!aggs) throw IoError("cannot write aggregates.csv under " + dir);
    aggs << "method,gamma,k,runs,mean_acc,mean_nmi,mean_final_cost\n";
    for (const AggregateRecord& a : report.aggregates) {
        aggs << a.method << ',' << format_csv_value(a.gamma) << ',' << a.k << ',' << a.runs
             << ',' << format_csv_value(a.mean_acc) << ',' << format_csv_value(a.mean_nmi)
             << ',' << format_csv_value(a.mean_final_cost) << '\n';
    }
}

void export_cost_trace(const FactorModel& model, const std::string& path) {
    if (model.cost_trace.empty()) throw DomainError("export_cost_trace: empty cost trace");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (std::size_t i = 0; i < model.cost_trace.size(); ++i) {
        out << (i + 1) << ',' << format_csv_value(model.cost_trace[i]) << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

void export_basis(const FactorModel& model, const std::string& path) {
    const DenseMatrix& w = model.w;
    DenseMatrix scaled(w.rows(), w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) sum += w(i, j);
        if (sum == 0.0) continue; // zero basis column stays zero
        for (std::size_t i = 0; i < w.rows(); ++i) scaled(i, j) = w(i, j) / sum;
    }
    write_matrix_csv(path, scaled);
}

UnmixReport run_unmix_demo(const UnmixOptions& options) {
    const MixtureDemo demo =
        gen_mixture_demo(options.length, options.corrupt_fraction, options.seed);
    const FactorModel model =
        run_factorization(demo.mixed, ObjectiveSpec::weighted_frobenius(options.gamma), 2,
                          options.iters, mix_seed({options.seed, kTagUnmix}));
    const DenseMatrix& t = *model.t;

    UnmixReport report;
    report.corrupt_len = demo.corrupt_end;
    // The null control still needs a leading window to compare against.
    std::size_t window = demo.corrupt_end;
    if (window == 0) {
        window = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(options.length)));
    }
    std::vector<double> lead, rest;
    for (std::size_t j = 0; j < t.cols(); ++j) {
        (j < window ? lead : rest).push_back(t(0, j));
    }
    report.corrupted_median = median(std::move(lead));
    report.clean_median = median(std::move(rest));
    report.ratio = report.corrupted_median / report.clean_median;

    if (!options.output_dir.empty()) {
        const std::filesystem::path dir(options.output_dir);
        std::filesystem::create_directories(dir);
        write_matrix_csv((dir / "sources.csv").string(), demo.sources);
        write_matrix_csv((dir / "mixing.csv").string(), demo.mixing);
        write_matrix_csv((dir / "mixed.csv").string(), demo.mixed);
        write_matrix_csv((dir / "weights.csv").string(), t);
        export_cost_trace(model, (dir / "cost_trace.csv").string());

        std::ofstream out(dir / "report.csv");
        if (!out) throw IoError("cannot write report.csv under " + options.output_dir);
        out << "corrupt_len,corrupted_median,clean_median,ratio\n";
        out << report.corrupt_len << ',' << format_csv_value(report.corrupted_median) << ','
            << format_csv_value(report.clean_median) << ',' << format_csv_value(report.ratio)
            << '\n';
    }
    return report;
}

} // namespace ewnmf
