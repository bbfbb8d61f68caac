#include <doctest.h>

#include <cmath>

#include "tabsae/errors.hpp"
#include "tabsae/metrics.hpp"
#include "test_util.hpp"

using namespace tabsae;

TEST_CASE("confusion counts") {
    std::vector<int> labels = {1, 1, 0, 0, 1, 0};
    std::vector<int> preds = {1, 0, 0, 1, 1, 0};
    ConfusionMatrix cm = confusion(labels, preds, 1);
    CHECK(cm.tp == 2);
    CHECK(cm.fn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.tn == 2);

    ConfusionMatrix perfect = confusion(labels, labels, 1);
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);

    CHECK_THROWS_AS(confusion({}, {}, 1), LengthMismatch);
    CHECK_THROWS_AS(confusion({1, 0}, {1}, 1), LengthMismatch);
}

TEST_CASE("metric formulas on a hand-computed matrix") {
    ConfusionMatrix cm{3, 1, 4, 2}; // tp fp tn fn
    MetricsReport r = metrics_report(cm);
    CHECK(*r.accuracy == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(*r.error_rate == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(*r.precision == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(*r.sensitivity == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(*r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(*r.specificity == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("symmetric confusion gives mcc 0; perfect gives all ones") {
    MetricsReport r = metrics_report(ConfusionMatrix{5, 5, 5, 5});
    CHECK(*r.mcc == 0.0);

    MetricsReport p = metrics_report(ConfusionMatrix{7, 0, 9, 0});
    CHECK(*p.accuracy == 1.0);
    CHECK(*p.precision == 1.0);
    CHECK(*p.sensitivity == 1.0);
    CHECK(*p.specificity == 1.0);
    CHECK(*p.f1 == 1.0);
    CHECK(*p.mcc == 1.0);
}

TEST_CASE("zero-denominator conventions") {
    // no predicted positives: precision undefined, f1 falls back to 0
    MetricsReport r = metrics_report(ConfusionMatrix{0, 0, 6, 2});
    CHECK_FALSE(r.precision.has_value());
    CHECK(r.sensitivity.has_value());
    CHECK(*r.f1 == 0.0);
    CHECK(*r.mcc == 0.0);

    // no actual positives: sensitivity undefined
    MetricsReport s = metrics_report(ConfusionMatrix{0, 3, 5, 0});
    CHECK_FALSE(s.sensitivity.has_value());

    // all-negative predictions and labels
    MetricsReport t = metrics_report(ConfusionMatrix{0, 0, 8, 0});
    CHECK(*t.accuracy == 1.0);
    CHECK_FALSE(t.precision.has_value());
    CHECK_FALSE(t.sensitivity.has_value());
}

TEST_CASE("property: mcc stays in [-1,1] with the stated extremes") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        ConfusionMatrix cm{rng.uniform_int(20), rng.uniform_int(20), rng.uniform_int(20),
                           rng.uniform_int(20)};
        if (cm.total() == 0) continue;
        MetricsReport r = metrics_report(cm);
        CHECK(*r.mcc >= -1.0 - 1e-12);
        CHECK(*r.mcc <= 1.0 + 1e-12);
        CHECK(*r.accuracy + *r.error_rate == 1.0);
        if (cm.fp == 0 && cm.fn == 0 && cm.tp > 0 && cm.tn > 0) CHECK(*r.mcc == 1.0);
        if (cm.tp == 0 && cm.tn == 0 && cm.fp > 0 && cm.fn > 0) CHECK(*r.mcc == -1.0);
    }
}

TEST_CASE("property: swapping the positive class swaps sensitivity and specificity") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 10 + rng.uniform_int(50);
        std::vector<int> labels(n), preds(n);
        bool both = false;
        for (int i = 0; i < n; ++i) {
            labels[i] = rng.uniform_int(2);
            preds[i] = rng.uniform_int(2);
        }
        labels[0] = 0;
        labels[1] = 1; // both classes present
        both = true;
        REQUIRE(both);
        MetricsReport a = metrics_report(confusion(labels, preds, 1));
        MetricsReport b = metrics_report(confusion(labels, preds, 0));
        CHECK(*a.accuracy == *b.accuracy);
        CHECK(std::fabs(*a.mcc) == doctest::Approx(std::fabs(*b.mcc)).epsilon(1e-12));
        if (a.sensitivity && b.specificity)
            CHECK(*a.sensitivity == doctest::Approx(*b.specificity).epsilon(1e-12));
        if (a.specificity && b.sensitivity)
            CHECK(*a.specificity == doctest::Approx(*b.sensitivity).epsilon(1e-12));
    }
}

TEST_CASE("roc_auc: perfect ranking and all-ties") {
    std::vector<int> labels = {1, 1, 0, 0};
    Vector hi(4);
    hi << 0.9, 0.8, 0.2, 0.1;
    RocCurve curve = roc_auc(hi, labels, 1);
    CHECK(curve.auc == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.back().tpr == 1.0);

    Vector flat = Vector::Constant(4, 0.5);
    CHECK(roc_auc(flat, labels, 1).auc == doctest::Approx(0.5).epsilon(1e-15));

    std::vector<int> one_class = {1, 1, 1, 1};
    CHECK_THROWS_AS(roc_auc(hi, one_class, 1), SingleClass);
}

TEST_CASE("roc_auc equals the pairwise oracle on random score sets") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 30;
        Vector scores(n);
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i) {
            // quantized scores force plenty of ties
            scores[i] = rng.uniform_int(8) / 8.0;
            labels[i] = rng.uniform_int(2);
        }
        labels[0] = 0;
        labels[1] = 1;
        double oracle = testutil::pairwise_auc(scores, labels, 1);
        double fast = roc_auc(scores, labels, 1).auc;
        CHECK(std::fabs(fast - oracle) <= 1e-12);
    }
}

TEST_CASE("auc is invariant under strictly increasing score transforms") {
    Rng rng(5);
    int n = 50;
    Vector scores(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        scores[i] = rng.normal();
        labels[i] = rng.uniform_int(2);
    }
    labels[0] = 0;
    labels[1] = 1;
    RocCurve base = roc_auc(scores, labels, 1);
    Vector warped = scores.unaryExpr([](double s) { return std::atan(3.0 * s) + 10.0; });
    RocCurve after = roc_auc(warped, labels, 1);
    CHECK(base.auc == doctest::Approx(after.auc).epsilon(1e-14));
    REQUIRE(base.points.size() == after.points.size());
    for (size_t i = 0; i < base.points.size(); ++i) {
        CHECK(base.points[i].fpr == doctest::Approx(after.points[i].fpr).epsilon(1e-14));
        CHECK(base.points[i].tpr == doctest::Approx(after.points[i].tpr).epsilon(1e-14));
    }
}

TEST_CASE("rmse_prob from probability rows") {
    // two samples, perfect one-hot predictions: rmse 0
    Matrix probs(2, 2);
    probs << 1, 0, 0, 1;
    std::vector<int> labels = {0, 1};
    ConfusionMatrix cm = confusion(labels, labels, 1);
    MetricsReport r = metrics_report(cm, probs, labels, 1);
    CHECK(*r.rmse_prob == 0.0);
    CHECK(r.auc.has_value());

    // uniform probabilities on a binary task: per-sample squared error 0.5
    Matrix uniform = Matrix::Constant(2, 2, 0.5);
    MetricsReport u = metrics_report(cm, uniform, labels, 1);
    CHECK(*u.rmse_prob == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("aggregate_folds averages defined metrics and counts undefined ones") {
    MetricsReport a = metrics_report(ConfusionMatrix{4, 1, 4, 1}); // accuracy 0.8
    MetricsReport b = metrics_report(ConfusionMatrix{9, 0, 9, 2}); // accuracy 0.9
    FoldAggregate agg = aggregate_folds({a, b});
    CHECK(*agg.mean.accuracy == doctest::Approx(0.85).epsilon(1e-15));

    FoldAggregate same = aggregate_folds({a, a});
    CHECK(*same.mean.accuracy == *a.accuracy);
    CHECK(*same.mean.mcc == *a.mcc);

    // one fold with undefined precision
    MetricsReport c = metrics_report(ConfusionMatrix{0, 0, 6, 2});
    REQUIRE_FALSE(c.precision.has_value());
    FoldAggregate mixed = aggregate_folds({a, c});
    CHECK(mixed.undefined_counts[metric_index("precision")] == 1);
    CHECK(*mixed.mean.precision == *a.precision); // mean over the defined fold only

    CHECK_THROWS_AS(aggregate_folds({}), EmptyList);
}
