#include "tabsae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabsae/errors.hpp"

namespace tabsae {

const std::array<const char*, kMetricCount> kMetricNames = {
    "accuracy", "error_rate", "rmse_prob", "sensitivity", "specificity",
    "precision", "mcc",        "f1",        "auc"};

std::optional<double> metric_value(const MetricsReport& r, int index) {
    switch (index) {
    case 0: return r.accuracy;
    case 1: return r.error_rate;
    case 2: return r.rmse_prob;
    case 3: return r.sensitivity;
    case 4: return r.specificity;
    case 5: return r.precision;
    case 6: return r.mcc;
    case 7: return r.f1;
    case 8: return r.auc;
    }
    throw Error("metric index out of range");
}

std::optional<double>& metric_ref(MetricsReport& r, int index) {
    switch (index) {
    case 0: return r.accuracy;
    case 1: return r.error_rate;
    case 2: return r.rmse_prob;
    case 3: return r.sensitivity;
    case 4: return r.specificity;
    case 5: return r.precision;
    case 6: return r.mcc;
    case 7: return r.f1;
    case 8: return r.auc;
    }
    throw Error("metric index out of range");
}

int metric_index(const std::string& name) {
    for (int i = 0; i < kMetricCount; ++i)
        if (name == kMetricNames[i]) return i;
    return -1;
}

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& preds,
                          int positive_class) {
    if (labels.empty()) throw LengthMismatch("confusion: empty inputs");
    if (labels.size() != preds.size())
        throw LengthMismatch("confusion: labels and predictions differ in length");
    ConfusionMatrix cm;
    for (size_t i = 0; i < labels.size(); ++i) {
        bool actual = labels[i] == positive_class;
        bool predicted = preds[i] == positive_class;
        if (actual && predicted) ++cm.tp;
        else if (actual && !predicted) ++cm.fn;
        else if (!actual && predicted) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

MetricsReport metrics_report(const ConfusionMatrix& cm) {
    MetricsReport r;
    const double tp = double(cm.tp), fp = double(cm.fp), tn = double(cm.tn), fn = double(cm.fn);
    const double total = tp + fp + tn + fn;
    if (total <= 0) throw Error("metrics_report: empty confusion matrix");

    r.accuracy = (tp + tn) / total;
    r.error_rate = 1.0 - *r.accuracy;

    if (tp + fn > 0) r.sensitivity = tp / (tp + fn);
    if (tn + fp > 0) r.specificity = tn / (tn + fp);
    if (tp + fp > 0) r.precision = tp / (tp + fp);

    // F1: 0 when either constituent is undefined or they sum to 0
    if (r.precision && r.sensitivity && (*r.precision + *r.sensitivity) > 0) {
        r.f1 = 2.0 * (*r.precision) * (*r.sensitivity) / (*r.precision + *r.sensitivity);
    } else {
        r.f1 = 0.0;
    }

    // MCC: 0 when the denominator vanishes
    double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    r.mcc = denom > 0 ? (tp * tn - fp * fn) / std::sqrt(denom) : 0.0;
    return r;
}

MetricsReport metrics_report(const ConfusionMatrix& cm, const Matrix& probs,
                             const std::vector<int>& labels, int positive_class) {
    MetricsReport r = metrics_report(cm);
    if (int(labels.size()) != int(probs.rows()))
        throw LengthMismatch("metrics_report: probability rows do not match labels");

    double sq = 0;
    for (int i = 0; i < probs.rows(); ++i) {
        for (int c = 0; c < probs.cols(); ++c) {
            double target = labels[i] == c ? 1.0 : 0.0;
            double diff = probs(i, c) - target;
            sq += diff * diff;
        }
    }
    r.rmse_prob = std::sqrt(sq / double(probs.rows()));

    bool has_pos = false, has_neg = false;
    for (int y : labels) (y == positive_class ? has_pos : has_neg) = true;
    if (has_pos && has_neg && positive_class >= 0 && positive_class < probs.cols()) {
        r.auc = roc_auc(probs.col(positive_class), labels, positive_class).auc;
    }
    return r;
}

RocCurve roc_auc(const Vector& scores, const std::vector<int>& labels, int positive_class) {
    if (int(labels.size()) != int(scores.size()))
        throw LengthMismatch("roc_auc: scores and labels differ in length");
    long p = 0, n = 0;
    for (int y : labels) (y == positive_class ? p : n)++;
    if (p == 0 || n == 0) throw SingleClass("roc_auc: both classes must be present");

    std::vector<int> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    double auc = 0;
    long tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        // group tied scores: the curve moves diagonally across a tie block
        size_t j = i;
        long dtp = 0, dfp = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == positive_class ? dtp : dfp)++;
            ++j;
        }
        double fpr0 = double(fp) / n, tpr0 = double(tp) / p;
        tp += dtp;
        fp += dfp;
        double fpr1 = double(fp) / n, tpr1 = double(tp) / p;
        auc += (fpr1 - fpr0) * (tpr0 + tpr1) / 2.0; // trapezoid
        curve.points.push_back({fpr1, tpr1});
        i = j;
    }
    curve.auc = auc;
    return curve;
}

FoldAggregate aggregate_folds(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw EmptyList("aggregate_folds: no reports");
    FoldAggregate agg;
    for (int m = 0; m < kMetricCount; ++m) {
        double sum = 0;
        int defined = 0;
        for (const auto& r : reports) {
            if (auto v = metric_value(r, m)) {
                sum += *v;
                ++defined;
            }
        }
        agg.undefined_counts[m] = int(reports.size()) - defined;
        if (defined > 0) metric_ref(agg.mean, m) = sum / defined;
    }
    return agg;
}

} // namespace tabsae
