#include "tabsae/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

// The default synthetic schema mirrors the hospital table: 22 continuous
// columns (age + blood work) and 16 binary symptom columns.
const std::vector<std::string> kContinuousNames = {
    "Age", "WBC", "Hematocrit", "Hemoglobin", "Platelets", "Sodium", "LDH", "UricAcid",
    "Creatinine", "ESR", "PT", "PTa", "PTT", "ALP", "BilirubinT", "BilirubinD",
    "SGOT", "SGPT", "MCV", "MCH", "MCHC", "RDW"};

const std::vector<std::string> kBinaryNames = {
    "Gender", "Infection", "InguinalLymph", "FeverNightSweats", "MuscleCramps",
    "LiverSpleenSwelling", "Swoon", "LooseSkin", "Hemorrhage", "BonePain", "Anorexia",
    "WeightLoss", "Nausea", "Cough", "FootNumbness", "LegSwelling"};

} // namespace

void Dataset::validate() const {
    if (n() < 2) throw BadSpec("dataset needs at least 2 samples");
    if (d() < 1) throw BadSpec("dataset needs at least 1 feature");
    if (n_classes() < 2) throw SingleClass("dataset needs at least 2 classes");
    if (int(labels.size()) != n()) throw DimensionMismatch("labels/features row mismatch");
    if (int(feature_names.size()) != d())
        throw DimensionMismatch("feature_names size does not match feature count");
    std::set<std::string> seen(feature_names.begin(), feature_names.end());
    if (int(seen.size()) != d()) throw BadSpec("duplicate feature names");
    std::vector<bool> present(n_classes(), false);
    for (int y : labels) {
        if (y < 0 || y >= n_classes()) throw BadSpec("label out of range");
        present[y] = true;
    }
    if (!std::all_of(present.begin(), present.end(), [](bool b) { return b; }))
        throw BadSpec("every class id must appear at least once");
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
    Dataset out;
    out.features.resize(rows.size(), d());
    out.labels.resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        out.features.row(i) = features.row(rows[i]);
        out.labels[i] = labels[rows[i]];
    }
    out.feature_names = feature_names;
    out.class_names = class_names;
    return out;
}

const char* norm_method_name(NormMethod m) {
    return m == NormMethod::ZScore ? "zscore" : "minmax";
}

NormMethod norm_method_parse(const std::string& name) {
    if (name == "zscore") return NormMethod::ZScore;
    if (name == "minmax") return NormMethod::MinMax;
    throw BadConfig("unknown normalization method: " + name);
}

NormalizationParams normalize_fit(const Matrix& x, NormMethod method) {
    const int n = int(x.rows()), d = int(x.cols());
    if (n < 1) throw BadSpec("normalize_fit: empty matrix");
    NormalizationParams p;
    p.method = method;
    p.a.resize(d);
    p.b.resize(d);
    if (method == NormMethod::ZScore) {
        for (int j = 0; j < d; ++j) {
            double mean = x.col(j).mean();
            double var = (x.col(j).array() - mean).square().sum() / n; // population
            double sd = std::sqrt(var);
            if (!(sd > 0)) throw ConstantFeature(j);
            p.a[j] = mean;
            p.b[j] = sd;
        }
    } else {
        for (int j = 0; j < d; ++j) {
            double lo = x.col(j).minCoeff();
            double hi = x.col(j).maxCoeff();
            if (!(hi > lo)) throw ConstantFeature(j);
            p.a[j] = lo;
            p.b[j] = hi;
        }
    }
    return p;
}

NormalizationParams normalize_fit(const Dataset& ds, NormMethod method) {
    return normalize_fit(ds.features, method);
}

Matrix normalize_apply(const NormalizationParams& params, const Matrix& x) {
    if (int(x.cols()) != params.d())
        throw DimensionMismatch("normalize_apply: column count does not match fitted params");
    Matrix out(x.rows(), x.cols());
    if (params.method == NormMethod::ZScore) {
        for (int j = 0; j < x.cols(); ++j)
            out.col(j) = (x.col(j).array() - params.a[j]) / params.b[j];
    } else {
        for (int j = 0; j < x.cols(); ++j) {
            double range = params.b[j] - params.a[j];
            out.col(j) = ((x.col(j).array() - params.a[j]) / range).cwiseMax(0.0).cwiseMin(1.0);
        }
    }
    return out;
}

std::vector<int> FoldPlan::test_indices(int fold) const {
    std::vector<int> out;
    for (int i = 0; i < int(assignments.size()); ++i)
        if (assignments[i] == fold) out.push_back(i);
    return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
    std::vector<int> out;
    for (int i = 0; i < int(assignments.size()); ++i)
        if (assignments[i] != fold) out.push_back(i);
    return out;
}

FoldPlan kfold_split(int n, int k, uint64_t seed) {
    if (k < 2 || k > n) throw BadFoldCount("kfold_split: need 2 <= k <= n");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (int i = n - 1; i > 0; --i) { // Fisher-Yates
        int j = rng.uniform_int(i + 1);
        std::swap(perm[i], perm[j]);
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.resize(n);
    for (int i = 0; i < n; ++i) plan.assignments[perm[i]] = i % k;
    return plan;
}

void SynthSpec::validate() const {
    if (n_samples < n_classes || n_samples < 2) throw BadSpec("synth: too few samples");
    if (n_continuous < 0 || n_binary < 0 || d() < 1) throw BadSpec("synth: bad feature counts");
    if (n_classes < 2) throw BadSpec("synth: need at least 2 classes");
    if (!(class_separation >= 0)) throw BadSpec("synth: class_separation must be >= 0");
    if (!(noise_std > 0)) throw BadSpec("synth: noise_std must be > 0");
    if (!class_priors.empty()) {
        if (int(class_priors.size()) != n_classes) throw BadSpec("synth: priors size != classes");
        double sum = std::accumulate(class_priors.begin(), class_priors.end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9) throw BadSpec("synth: priors must sum to 1");
        for (double p : class_priors)
            if (!(p > 0)) throw BadSpec("synth: priors must be positive");
    }
}

Dataset synth_generate(const SynthSpec& spec) {
    spec.validate();
    const int n = spec.n_samples, nc = spec.n_continuous, nb = spec.n_binary, c = spec.n_classes;
    Rng rng(spec.seed);

    // class-conditional parameters first, so they depend on the seed only
    Matrix cont_mean(c, nc); // class mean offsets, scaled by separation
    for (int cls = 0; cls < c; ++cls)
        for (int j = 0; j < nc; ++j)
            cont_mean(cls, j) = spec.class_separation * rng.uniform(-1.0, 1.0);

    Matrix bin_rate(c, nb); // per-class Bernoulli rates
    for (int j = 0; j < nb; ++j) {
        double base = rng.uniform(0.2, 0.8);
        double base_logit = std::log(base / (1.0 - base));
        for (int cls = 0; cls < c; ++cls) {
            double shift = 0.5 * spec.class_separation * rng.uniform(-1.0, 1.0);
            double logit = base_logit + shift;
            bin_rate(cls, j) = 1.0 / (1.0 + std::exp(-logit));
        }
    }

    // labels: exact prior proportions (largest remainder), then shuffled
    std::vector<double> priors = spec.class_priors;
    if (priors.empty()) priors.assign(c, 1.0 / c);
    std::vector<int> counts(c);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int cls = 0; cls < c; ++cls) {
        double exact = priors[cls] * n;
        counts[cls] = int(std::floor(exact));
        assigned += counts[cls];
        remainders.push_back({exact - counts[cls], cls});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (int i = 0; i < n - assigned; ++i) counts[remainders[i % c].second]++;
    for (int cls = 0; cls < c; ++cls)
        if (counts[cls] == 0) { // guarantee presence for tiny n
            int donor = int(std::max_element(counts.begin(), counts.end()) - counts.begin());
            counts[donor]--;
            counts[cls]++;
        }

    std::vector<int> labels;
    labels.reserve(n);
    for (int cls = 0; cls < c; ++cls) labels.insert(labels.end(), counts[cls], cls);
    for (int i = n - 1; i > 0; --i) std::swap(labels[i], labels[rng.uniform_int(i + 1)]);

    Dataset ds;
    ds.labels = labels;
    ds.features.resize(n, spec.d());
    for (int i = 0; i < n; ++i) {
        int cls = labels[i];
        for (int j = 0; j < nc; ++j)
            ds.features(i, j) = cont_mean(cls, j) + spec.noise_std * rng.normal();
        for (int j = 0; j < nb; ++j)
            ds.features(i, nc + j) = rng.uniform() < bin_rate(cls, j) ? 1.0 : 0.0;
    }

    // names: hospital-style schema when the shape matches, generic otherwise
    if (nc == int(kContinuousNames.size()) && nb == int(kBinaryNames.size())) {
        ds.feature_names = kContinuousNames;
        ds.feature_names.insert(ds.feature_names.end(), kBinaryNames.begin(), kBinaryNames.end());
    } else {
        for (int j = 0; j < nc; ++j) ds.feature_names.push_back("cont_" + std::to_string(j));
        for (int j = 0; j < nb; ++j) ds.feature_names.push_back("bin_" + std::to_string(j));
    }
    if (c == 2) {
        ds.class_names = {"healthy", "cancer"};
    } else {
        for (int cls = 0; cls < c; ++cls) ds.class_names.push_back("class_" + std::to_string(cls));
    }
    ds.validate();
    return ds;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedRow(1, "empty file");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    int label_idx = -1;
    for (int j = 0; j < int(header.size()); ++j)
        if (header[j] == label_column) label_idx = j;
    if (label_idx < 0) throw UnknownLabelColumn("no column named '" + label_column + "'");

    const int ncols = int(header.size());
    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (int(cells.size()) != ncols)
            throw MalformedRow(line_no, "expected " + std::to_string(ncols) + " cells, got " +
                                            std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(ncols - 1);
        for (int j = 0; j < ncols; ++j) {
            std::string cell = trim(cells[j]);
            if (j == label_idx) {
                if (is_missing(cell)) throw MalformedRow(line_no, "missing label");
                raw_labels.push_back(cell);
                continue;
            }
            if (is_missing(cell))
                throw MalformedRow(line_no, "missing value in column '" + header[j] + "'");
            try {
                size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw MalformedRow(line_no, "cannot parse '" + cell + "' in column '" +
                                                header[j] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw MalformedRow(line_no, "need at least 2 data rows");

    Dataset ds;
    // class ids by first appearance
    for (const auto& s : raw_labels) {
        if (std::find(ds.class_names.begin(), ds.class_names.end(), s) == ds.class_names.end())
            ds.class_names.push_back(s);
    }
    if (ds.class_names.size() < 2) throw SingleClass("label column has fewer than 2 distinct values");
    for (const auto& s : raw_labels) {
        int id = int(std::find(ds.class_names.begin(), ds.class_names.end(), s) -
                     ds.class_names.begin());
        ds.labels.push_back(id);
    }

    for (int j = 0; j < ncols; ++j)
        if (j != label_idx) ds.feature_names.push_back(header[j]);
    ds.features.resize(rows.size(), ncols - 1);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < ncols - 1; ++j) ds.features(i, j) = rows[i][j];
    ds.validate();
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int j = 0; j < ds.d(); ++j) out << ds.feature_names[j] << ',';
    out << label_column << '\n';
    for (int i = 0; i < ds.n(); ++i) {
        for (int j = 0; j < ds.d(); ++j) out << format_g17(ds.features(i, j)) << ',';
        out << ds.class_names[ds.labels[i]] << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

} // namespace tabsae
