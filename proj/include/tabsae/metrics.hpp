#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tabsae/types.hpp"

namespace tabsae {

/// Binary confusion counts relative to a declared positive class.
struct ConfusionMatrix {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& preds,
                          int positive_class);

/// The evaluation criteria. A metric left unset is "undefined" for its
/// confusion matrix (zero denominator) or was not computable from the inputs
/// given (no probability scores).
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> error_rate;
    std::optional<double> rmse_prob; // RMSE of probability vectors vs one-hot
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> precision;
    std::optional<double> mcc;
    std::optional<double> f1;
    std::optional<double> auc;
};

constexpr int kMetricCount = 9;
extern const std::array<const char*, kMetricCount> kMetricNames;

std::optional<double> metric_value(const MetricsReport& r, int index);
std::optional<double>& metric_ref(MetricsReport& r, int index);
int metric_index(const std::string& name); // -1 when unknown

/// Confusion-derived metrics only.
MetricsReport metrics_report(const ConfusionMatrix& cm);

/// Full report: adds rmse_prob and AUC from an N x C probability matrix.
MetricsReport metrics_report(const ConfusionMatrix& cm, const Matrix& probs,
                             const std::vector<int>& labels, int positive_class);

struct RocPoint {
    double fpr, tpr;
};

struct RocCurve {
    std::vector<RocPoint> points; // threshold sweep, ties grouped
    double auc = 0;
};

/// ROC curve and trapezoid AUC (equals the tie-corrected Mann-Whitney
/// statistic). Throws SingleClass unless both classes appear.
RocCurve roc_auc(const Vector& scores, const std::vector<int>& labels, int positive_class);

struct FoldAggregate {
    MetricsReport mean; // unweighted mean over folds where each metric is defined
    std::array<int, kMetricCount> undefined_counts{};
};

FoldAggregate aggregate_folds(const std::vector<MetricsReport>& reports);

} // namespace tabsae
