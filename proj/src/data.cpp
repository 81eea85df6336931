#include "ewnmf/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ewnmf/rng.hpp"

namespace ewnmf {

std::string format_csv_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    // Trailing whitespace is tolerated, anything else is not.
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0')) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": not a number: '" +
                         field + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

DenseMatrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::size_t this_cols = 0;
        while (std::getline(ss, field, ',')) {
            const double v = parse_field(trim(field), path, line_no);
            if (v < 0.0) {
                throw DomainError(path + ":" + std::to_string(line_no) +
                                  ": negative entry " + field);
            }
            data.push_back(v);
            ++this_cols;
        }
        if (rows == 0) {
            cols = this_cols;
        } else if (this_cols != cols) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(cols) + " fields, got " +
                             std::to_string(this_cols));
        }
        ++rows;
    }
    if (rows == 0) throw ParseError(path + ": empty matrix file");
    return DenseMatrix(rows, cols, std::move(data));
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty()) continue;
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": not an integer label: '" + s + "'");
        }
        labels.push_back(v);
    }
    if (labels.empty()) throw ParseError(path + ": empty label file");
    return labels;
}

void write_matrix_csv(const std::string& path, const DenseMatrix& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << ',';
            out << format_csv_value(a(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int v : labels) out << v << '\n';
    if (!out) throw IoError("write failed for " + path);
}

DenseMatrix minmax_normalize_columns(const DenseMatrix& x) {
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double lo = x(0, j), hi = x(0, j);
        for (std::size_t i = 1; i < x.rows(); ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        const double span = hi - lo;
        if (span == 0.0) continue; // constant column maps to zeros
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = (x(i, j) - lo) / span;
    }
    return out;
}

std::pair<DenseMatrix, DenseMatrix> init_factors(std::size_t m, std::size_t n, std::size_t k,
                                                 std::uint64_t seed) {
    if (k < 1) throw ConfigError("init_factors: rank must be at least 1");
    Rng rng(seed);
    DenseMatrix w(m, k);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(0.1, 1.1);
    DenseMatrix h(k, n);
    for (std::size_t i = 0; i < h.size(); ++i) h.data()[i] = rng.uniform(0.1, 1.1);
    return {std::move(w), std::move(h)};
}

MixtureDemo gen_mixture_demo(std::size_t length, double corrupt_fraction, std::uint64_t seed) {
    if (length < 10) throw ConfigError("gen_mixture_demo: need at least 10 samples");
    if (corrupt_fraction < 0.0 || corrupt_fraction >= 0.5) {
        throw ConfigError("gen_mixture_demo: corrupt_fraction must lie in [0, 0.5)");
    }
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

    MixtureDemo demo;
    demo.sources = DenseMatrix(2, length);
    const double inv_len = 1.0 / static_cast<double>(length);
    for (std::size_t t = 0; t < length; ++t) {
        const double u = (static_cast<double>(t) + 0.5) * inv_len;
        demo.sources(0, t) = std::abs(std::sin(kTwoPi * 3.0 * u));
        demo.sources(1, t) = std::abs(std::sin(kTwoPi * 7.0 * u + 0.9));
    }

    Rng rng(seed);
    demo.mixing = DenseMatrix(2, 2);
    for (std::size_t i = 0; i < 4; ++i) demo.mixing.data()[i] = rng.uniform();

    demo.mixed = matmul(demo.mixing, demo.sources);

    double peak = 0.0;
    for (double v : demo.mixed.values()) peak = std::max(peak, v);

    demo.corrupt_begin = 0;
    demo.corrupt_end = static_cast<std::size_t>(
        std::ceil(corrupt_fraction * static_cast<double>(length)));
    // Noise well above the signal range: a rank-2 nonnegative model with only
    // two channels can otherwise absorb mild corruption exactly, leaving
    // nothing for the weights to flag.
    for (std::size_t t = demo.corrupt_begin; t < demo.corrupt_end; ++t) {
        demo.mixed(0, t) = rng.uniform(0.0, 5.0 * peak);
    }
    return demo;
}

LabeledDataset gen_clustered_synthetic(std::size_t k, std::size_t points_per_class,
                                       std::size_t attributes, double corrupt_attr_fraction,
                                       std::uint64_t seed) {
    if (k < 2) throw ConfigError("gen_clustered_synthetic: need at least 2 classes");
    if (attributes <= k) {
        throw ConfigError("gen_clustered_synthetic: need more attributes than classes");
    }
    if (corrupt_attr_fraction < 0.0 || corrupt_attr_fraction > 1.0) {
        throw ConfigError("gen_clustered_synthetic: corrupt fraction must lie in [0, 1]");
    }

    const std::size_t n = k * points_per_class;
    const double m = static_cast<double>(attributes);
    const double sigma = m / (4.0 * static_cast<double>(k));

    // One Gaussian bump per class, peak 1, centers evenly spaced over rows.
    DenseMatrix prototypes(attributes, k);
    for (std::size_t c = 0; c < k; ++c) {
        const double center = (static_cast<double>(c) + 0.5) * m / static_cast<double>(k);
        for (std::size_t i = 0; i < attributes; ++i) {
            const double d = (static_cast<double>(i) - center) / sigma;
            prototypes(i, c) = std::exp(-0.5 * d * d);
        }
    }

    Rng rng(seed);
    LabeledDataset ds;
    ds.name = "synthetic";
    ds.x = DenseMatrix(attributes, n);
    ds.labels.resize(n);

    const auto n_corrupt = static_cast<std::size_t>(
        std::llround(corrupt_attr_fraction * static_cast<double>(attributes)));
    std::vector<std::size_t> attr_indices(attributes);

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t label = j / points_per_class;
        ds.labels[j] = static_cast<int>(label);
        for (std::size_t i = 0; i < attributes; ++i) {
            ds.x(i, j) = std::max(0.0, prototypes(i, label) + 0.1 * rng.normal());
        }
        if (n_corrupt > 0) {
            // Partial Fisher-Yates picks n_corrupt distinct attributes.
            for (std::size_t i = 0; i < attributes; ++i) attr_indices[i] = i;
            for (std::size_t pick = 0; pick < n_corrupt; ++pick) {
                const std::size_t r = pick + rng.below(attributes - pick);
                std::swap(attr_indices[pick], attr_indices[r]);
                ds.x(attr_indices[pick], j) = rng.uniform(2.0, 4.0);
            }
        }
    }
    return ds;
}

LabeledDataset sample_class_subset(const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
    if (ds.labels.size() != ds.x.cols()) {
        throw DimensionError("sample_class_subset: label count does not match column count");
    }
    std::set<int> distinct(ds.labels.begin(), ds.labels.end());
    std::vector<int> classes(distinct.begin(), distinct.end());
    if (k < 1 || k > classes.size()) {
        throw ConfigError("sample_class_subset: requested " + std::to_string(k) +
                          " classes, dataset has " + std::to_string(classes.size()));
    }

    Rng rng(seed);
    for (std::size_t pick = 0; pick < k; ++pick) {
        const std::size_t r = pick + rng.below(classes.size() - pick);
        std::swap(classes[pick], classes[r]);
    }
    std::vector<int> chosen(classes.begin(), classes.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());

    std::vector<std::size_t> cols;
    std::vector<int> new_labels;
    for (std::size_t j = 0; j < ds.labels.size(); ++j) {
        const auto it = std::lower_bound(chosen.begin(), chosen.end(), ds.labels[j]);
        if (it != chosen.end() && *it == ds.labels[j]) {
            cols.push_back(j);
            new_labels.push_back(static_cast<int>(it - chosen.begin()));
        }
    }

    LabeledDataset out;
    out.name = ds.name;
    out.labels = std::move(new_labels);
    out.x = DenseMatrix(ds.x.rows(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t i = 0; i < ds.x.rows(); ++i) out.x(i, c) = ds.x(i, cols[c]);
    }
    return out;
}

std::size_t count_classes(const std::vector<int>& labels) {
    return std::set<int>(labels.begin(), labels.end()).size();
}

} // namespace ewnmf
