#pragma once

#include <string>
#include <vector>

#include "tabsae/types.hpp"

namespace tabsae {

struct PcaModel {
    Vector mean;               // D
    Matrix components;         // k x D, orthonormal rows, decreasing variance
    Vector explained_variance; // k, nonincreasing

    int k() const { return int(components.rows()); }
    int d() const { return int(components.cols()); }
};

/// Principal components of the sample covariance. k is either explicit_k
/// (when >= 1) or the smallest count whose cumulative explained-variance
/// ratio reaches variance_target. Component signs are fixed so the
/// largest-magnitude entry of each row is positive.
PcaModel pca_fit(const Matrix& x, double variance_target = 0.95, int explicit_k = -1);

/// (x - mean) * components'
Matrix pca_transform(const PcaModel& model, const Matrix& x);

/// Majority-vote k-nearest-neighbors (Euclidean). k must be odd and at most
/// the training count. Vote ties go to the class of the nearest tied-class
/// neighbor; distance ties to the lower training index.
std::vector<int> knn_predict(const Matrix& train_x, const std::vector<int>& train_y,
                             const Matrix& query_x, int k);

/// Same vote, plus the positive-class vote fraction (a score for ROC).
struct KnnResult {
    std::vector<int> labels;
    Vector positive_fraction;
};
KnnResult knn_predict_scored(const Matrix& train_x, const std::vector<int>& train_y,
                             const Matrix& query_x, int k, int positive_class);

enum class SvmKernel { Linear, Rbf };

struct SvmModel {
    SvmKernel kernel = SvmKernel::Linear;
    double gamma = 1.0;      // rbf only
    Matrix support_vectors;  // s x m
    Vector dual_coefs;       // s, equals alpha_i * y_i, in [-C, C]
    double bias = 0;
    double c = 1.0;
    bool converged = true;   // false after hitting the pair-update cap
};

/// Soft-margin SVM trained by sequential minimal optimization with
/// maximal-violating-pair selection; stops when the KKT violation is <= tol
/// or after max_updates pair updates (converged=false). y entries must be
/// +1/-1; the seed only shuffles the training order (tie-breaking).
SvmModel svm_train(const Matrix& x, const std::vector<int>& y, SvmKernel kernel, double c,
                   double gamma, double tol, uint64_t seed, long max_updates = 100000);

Vector svm_decision(const SvmModel& model, const Matrix& x);
std::vector<int> svm_predict(const SvmModel& model, const Matrix& x); // +1/-1

struct KmeansResult {
    Matrix centers; // k x m
    double cost = 0;
    std::vector<double> cost_history; // per accepted Lloyd iteration (best restart)
};

/// Best-of-restarts Lloyd's algorithm; empty clusters are reseeded to the
/// farthest point.
KmeansResult kmeans(const Matrix& x, int k, int restarts, uint64_t seed);

struct RbfNetModel {
    Matrix centers;  // k x m
    double sigma = 1;
    Matrix weights;  // C x k
    Vector bias;     // C
};

/// RBF network: k-means centers (10 restarts), width = median pairwise
/// center distance, Gaussian hidden units, one-vs-all ridge (1e-6) output
/// layer onto +-1 targets.
RbfNetModel rbf_net_train(const Matrix& x, const std::vector<int>& y, int n_classes, int k,
                          uint64_t seed);

Matrix rbf_net_scores(const RbfNetModel& model, const Matrix& x); // N x C
std::vector<int> rbf_net_predict(const RbfNetModel& model, const Matrix& x);

} // namespace tabsae
