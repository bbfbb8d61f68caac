#pragma once

#include <string>
#include <vector>

#include "tabsae/types.hpp"

namespace tabsae {

/// An in-memory tabular classification dataset. Immutable by convention once
/// built; all pipeline inputs are one of these.
struct Dataset {
    Matrix features;                        // N x D
    std::vector<int> labels;                // class ids in 0..C-1
    std::vector<std::string> feature_names; // D entries, unique
    std::vector<std::string> class_names;   // C entries, first-appearance order

    int n() const { return int(features.rows()); }
    int d() const { return int(features.cols()); }
    int n_classes() const { return int(class_names.size()); }

    /// Throws if the invariants do not hold (shape agreement, every class
    /// present, unique feature names).
    void validate() const;

    /// Row subset (copies), preserving names.
    Dataset subset(const std::vector<int>& rows) const;
};

enum class NormMethod { ZScore, MinMax };

const char* norm_method_name(NormMethod m);
NormMethod norm_method_parse(const std::string& name);

/// Per-feature statistics. zscore: (mean, stddev); minmax: (min, max).
struct NormalizationParams {
    NormMethod method = NormMethod::ZScore;
    Vector a; // mean or min
    Vector b; // stddev or max
    int d() const { return int(a.size()); }
};

/// Fit normalization statistics. zscore uses the population (1/N) standard
/// deviation. Throws ConstantFeature for a constant column.
NormalizationParams normalize_fit(const Matrix& x, NormMethod method);
NormalizationParams normalize_fit(const Dataset& ds, NormMethod method);

/// Apply fitted statistics. minmax output is clipped to [0,1] for values
/// outside the fitted range.
Matrix normalize_apply(const NormalizationParams& params, const Matrix& x);

/// Deterministic shuffled k-fold partition.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignments; // length n, values in 0..k-1
    uint64_t seed = 0;

    std::vector<int> test_indices(int fold) const;
    std::vector<int> train_indices(int fold) const;
};

FoldPlan kfold_split(int n, int k, uint64_t seed);

/// Synthetic data stand-in for the hospital tables: per-class Gaussian
/// continuous features and per-class Bernoulli binary features, with class
/// effect scaled by class_separation (0 = label-independent features).
struct SynthSpec {
    int n_samples = 1745;
    int n_continuous = 22;
    int n_binary = 16;
    int n_classes = 2;
    double class_separation = 4.0;
    double noise_std = 1.0;
    std::vector<double> class_priors; // empty = uniform; must sum to 1
    uint64_t seed = 42;

    int d() const { return n_continuous + n_binary; }
    void validate() const; // throws BadSpec
};

Dataset synth_generate(const SynthSpec& spec);

/// CSV interface: UTF-8, comma-separated, header row, '.' decimal point.
/// Missing cells (empty or "NA") are rejected, not imputed.
Dataset load_csv(const std::string& path, const std::string& label_column);
void save_csv(const Dataset& ds, const std::string& path,
              const std::string& label_column = "label");

} // namespace tabsae
