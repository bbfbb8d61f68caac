#include "tabsae/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabsae/errors.hpp"

namespace tabsae {

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

PcaModel pca_fit(const Matrix& x, double variance_target, int explicit_k) {
    const int n = int(x.rows()), d = int(x.cols());
    if (n < 2) throw BadSpec("pca_fit: need at least 2 samples");
    if (explicit_k < 1 && !(variance_target > 0 && variance_target <= 1))
        throw BadSpec("pca_fit: variance_target must be in (0,1]");
    if (explicit_k > d) throw BadSpec("pca_fit: k exceeds feature count");

    PcaModel model;
    model.mean = x.colwise().mean();
    Matrix centered = x.rowwise() - model.mean.transpose();
    Matrix cov = (centered.transpose() * centered) / double(n - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) throw DegenerateData("pca_fit: eigendecomposition failed");
    Vector evals = eig.eigenvalues(); // ascending
    Matrix evecs = eig.eigenvectors();

    double total = 0;
    for (int i = 0; i < d; ++i) total += std::max(evals[i], 0.0);
    if (!(total > 0)) throw DegenerateData("pca_fit: zero covariance");

    int k;
    if (explicit_k >= 1) {
        k = explicit_k;
    } else {
        k = 0;
        double cum = 0;
        while (k < d && cum / total < variance_target - 1e-15) {
            cum += std::max(evals[d - 1 - k], 0.0);
            ++k;
        }
        k = std::max(k, 1);
    }

    model.components.resize(k, d);
    model.explained_variance.resize(k);
    for (int i = 0; i < k; ++i) {
        Vector v = evecs.col(d - 1 - i);
        int imax = 0;
        for (int j = 1; j < d; ++j)
            if (std::fabs(v[j]) > std::fabs(v[imax])) imax = j;
        if (v[imax] < 0) v = -v; // deterministic sign
        model.components.row(i) = v.transpose();
        model.explained_variance[i] = std::max(evals[d - 1 - i], 0.0);
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    if (int(x.cols()) != model.d())
        throw DimensionMismatch("pca_transform: width does not match fitted model");
    return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

// ---------------------------------------------------------------------------
// k-nearest-neighbors
// ---------------------------------------------------------------------------

namespace {

struct Neighbor {
    double dist;
    int index;
};

} // namespace

KnnResult knn_predict_scored(const Matrix& train_x, const std::vector<int>& train_y,
                             const Matrix& query_x, int k, int positive_class) {
    const int n = int(train_x.rows());
    if (k < 1 || k > n) throw BadK("knn: need 1 <= k <= training count");
    if (k % 2 == 0) throw BadK("knn: k must be odd");
    if (int(train_y.size()) != n) throw LengthMismatch("knn: labels do not match training rows");
    if (query_x.cols() != train_x.cols())
        throw DimensionMismatch("knn: query width does not match training width");

    KnnResult result;
    result.labels.resize(query_x.rows());
    result.positive_fraction.resize(query_x.rows());

    std::vector<Neighbor> nb(n);
    for (int q = 0; q < query_x.rows(); ++q) {
        for (int i = 0; i < n; ++i)
            nb[i] = {(train_x.row(i) - query_x.row(q)).squaredNorm(), i};
        // distance ties resolved by lower training index
        std::sort(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
        });

        int max_class = *std::max_element(train_y.begin(), train_y.end());
        std::vector<int> votes(max_class + 1, 0);
        int pos_votes = 0;
        for (int i = 0; i < k; ++i) {
            int cls = train_y[nb[i].index];
            votes[cls]++;
            if (cls == positive_class) ++pos_votes;
        }
        int best_count = *std::max_element(votes.begin(), votes.end());
        // among tied classes, take the one with the nearest representative
        int winner = -1;
        for (int i = 0; i < k && winner < 0; ++i) {
            int cls = train_y[nb[i].index];
            if (votes[cls] == best_count) winner = cls;
        }
        result.labels[q] = winner;
        result.positive_fraction[q] = double(pos_votes) / k;
    }
    return result;
}

std::vector<int> knn_predict(const Matrix& train_x, const std::vector<int>& train_y,
                             const Matrix& query_x, int k) {
    return knn_predict_scored(train_x, train_y, query_x, k, /*positive_class=*/-1).labels;
}

// ---------------------------------------------------------------------------
// SVM (SMO with maximal-violating-pair selection)
// ---------------------------------------------------------------------------

namespace {

double kernel_eval(SvmKernel kernel, double gamma, const Eigen::RowVectorXd& a,
                   const Eigen::RowVectorXd& b) {
    if (kernel == SvmKernel::Linear) return a.dot(b);
    return std::exp(-gamma * (a - b).squaredNorm());
}

} // namespace

SvmModel svm_train(const Matrix& x, const std::vector<int>& y, SvmKernel kernel, double c,
                   double gamma, double tol, uint64_t seed, long max_updates) {
    const int n = int(x.rows());
    if (int(y.size()) != n) throw LengthMismatch("svm_train: labels do not match rows");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw BadSpec("svm_train: labels must be +1/-1");
    }
    if (!has_pos || !has_neg) throw SingleClass("svm_train: both classes must be present");
    if (!(c > 0) || !(tol > 0)) throw BadSpec("svm_train: C and tol must be positive");

    // seeded shuffle: affects only tie-breaking in the pair selection
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(i + 1)]);

    Matrix data(n, x.cols());
    std::vector<double> yy(n);
    for (int i = 0; i < n; ++i) {
        data.row(i) = x.row(order[i]);
        yy[i] = double(y[order[i]]);
    }

    Matrix k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            k(i, j) = k(j, i) = kernel_eval(kernel, gamma, data.row(i), data.row(j));

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // gradient of 1/2 a'Qa - e'a at a=0

    auto q = [&](int i, int j) { return yy[i] * yy[j] * k(i, j); };

    bool converged = false;
    for (long updates = 0; updates < max_updates; ++updates) {
        // maximal violating pair
        int i = -1, j = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t) {
            bool in_up = (yy[t] > 0 && alpha[t] < c) || (yy[t] < 0 && alpha[t] > 0);
            bool in_low = (yy[t] < 0 && alpha[t] < c) || (yy[t] > 0 && alpha[t] > 0);
            double v = -yy[t] * grad[t];
            if (in_up && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || gmax - gmin <= tol) {
            converged = true;
            break;
        }

        double old_ai = alpha[i], old_aj = alpha[j];
        if (yy[i] != yy[j]) {
            // the pair moves along alpha_i - alpha_j = const
            double quad = std::max(q(i, i) + q(j, j) + 2.0 * q(i, j), 1e-12);
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else {
                if (alpha[i] < 0) {
                    alpha[i] = 0;
                    alpha[j] = -diff;
                }
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            }
        } else {
            // the pair moves along alpha_i + alpha_j = const
            double quad = std::max(q(i, i) + q(j, j) - 2.0 * q(i, j), 1e-12);
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = sum;
                }
                if (alpha[i] < 0) {
                    alpha[i] = 0;
                    alpha[j] = sum;
                }
            }
        }

        double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        if (dai == 0 && daj == 0) {
            converged = true; // numerically stuck at the optimum
            break;
        }
        for (int t = 0; t < n; ++t) grad[t] += q(t, i) * dai + q(t, j) * daj;
    }

    // bias from the KKT conditions
    double free_sum = 0;
    int free_count = 0;
    double lb = -std::numeric_limits<double>::infinity();
    double ub = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
        double u = yy[t] * (grad[t] + 1.0); // decision value without bias
        double bt = yy[t] - u;
        bool at_lower = alpha[t] <= 0;
        bool at_upper = alpha[t] >= c;
        if (!at_lower && !at_upper) {
            free_sum += bt;
            ++free_count;
        } else if ((at_lower && yy[t] > 0) || (at_upper && yy[t] < 0)) {
            lb = std::max(lb, bt);
        } else {
            ub = std::min(ub, bt);
        }
    }
    double bias = free_count > 0 ? free_sum / free_count : (lb + ub) / 2.0;

    SvmModel model;
    model.kernel = kernel;
    model.gamma = gamma;
    model.c = c;
    model.bias = bias;
    model.converged = converged;
    std::vector<int> sv;
    for (int t = 0; t < n; ++t)
        if (alpha[t] > 1e-12) sv.push_back(t);
    model.support_vectors.resize(sv.size(), x.cols());
    model.dual_coefs.resize(sv.size());
    for (size_t s = 0; s < sv.size(); ++s) {
        model.support_vectors.row(s) = data.row(sv[s]);
        model.dual_coefs[s] = alpha[sv[s]] * yy[sv[s]];
    }
    return model;
}

Vector svm_decision(const SvmModel& model, const Matrix& x) {
    if (x.cols() != model.support_vectors.cols())
        throw DimensionMismatch("svm_decision: width does not match model");
    Vector out(x.rows());
    for (int i = 0; i < x.rows(); ++i) {
        double v = model.bias;
        for (int s = 0; s < model.support_vectors.rows(); ++s)
            v += model.dual_coefs[s] *
                 kernel_eval(model.kernel, model.gamma, model.support_vectors.row(s), x.row(i));
        out[i] = v;
    }
    return out;
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& x) {
    Vector d = svm_decision(model, x);
    std::vector<int> labels(d.size());
    for (int i = 0; i < d.size(); ++i) labels[i] = d[i] >= 0 ? 1 : -1;
    return labels;
}

// ---------------------------------------------------------------------------
// k-means and the RBF network
// ---------------------------------------------------------------------------

KmeansResult kmeans(const Matrix& x, int k, int restarts, uint64_t seed) {
    const int n = int(x.rows());
    if (k < 1 || k > n) throw BadK("kmeans: need 1 <= k <= n");
    if (restarts < 1) throw BadSpec("kmeans: restarts must be >= 1");

    KmeansResult best;
    best.cost = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, r));
        // distinct seeds for the initial centers
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(pool[i], pool[rng.uniform_int(i + 1)]);
        Matrix centers(k, x.cols());
        for (int i = 0; i < k; ++i) centers.row(i) = x.row(pool[i]);

        std::vector<int> assign(n, 0);
        std::vector<double> history;
        double cost = 0;
        for (int it = 0; it < 100; ++it) {
            cost = 0;
            std::vector<int> count(k, 0);
            for (int i = 0; i < n; ++i) {
                int bestc = 0;
                double bestd = (x.row(i) - centers.row(0)).squaredNorm();
                for (int cidx = 1; cidx < k; ++cidx) {
                    double d = (x.row(i) - centers.row(cidx)).squaredNorm();
                    if (d < bestd) {
                        bestd = d;
                        bestc = cidx;
                    }
                }
                assign[i] = bestc;
                count[bestc]++;
                cost += bestd;
            }
            history.push_back(cost);

            Matrix next = Matrix::Zero(k, x.cols());
            for (int i = 0; i < n; ++i) next.row(assign[i]) += x.row(i);
            double max_shift = 0;
            for (int cidx = 0; cidx < k; ++cidx) {
                if (count[cidx] == 0) {
                    // reseed to the farthest point from its center
                    int far = 0;
                    double fard = -1;
                    for (int i = 0; i < n; ++i) {
                        double d = (x.row(i) - centers.row(assign[i])).squaredNorm();
                        if (d > fard) {
                            fard = d;
                            far = i;
                        }
                    }
                    next.row(cidx) = x.row(far);
                } else {
                    next.row(cidx) /= double(count[cidx]);
                }
                max_shift = std::max(max_shift, (next.row(cidx) - centers.row(cidx)).norm());
            }
            centers = next;
            if (max_shift <= 1e-6) break;
        }
        if (cost < best.cost) {
            best.cost = cost;
            best.centers = centers;
            best.cost_history = history;
        }
    }
    return best;
}

RbfNetModel rbf_net_train(const Matrix& x, const std::vector<int>& y, int n_classes, int k,
                          uint64_t seed) {
    const int n = int(x.rows());
    if (k < 1 || k > n) throw BadK("rbf_net_train: need 1 <= k <= n");
    if (int(y.size()) != n) throw LengthMismatch("rbf_net_train: labels do not match rows");

    RbfNetModel model;
    model.centers = kmeans(x, k, 10, seed).centers;

    // width: median pairwise center distance (RMS point spread when k == 1)
    if (k >= 2) {
        std::vector<double> dists;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                dists.push_back((model.centers.row(i) - model.centers.row(j)).norm());
        std::sort(dists.begin(), dists.end());
        size_t m = dists.size();
        model.sigma = m % 2 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
    } else {
        double ms = 0;
        for (int i = 0; i < n; ++i) ms += (x.row(i) - model.centers.row(0)).squaredNorm();
        model.sigma = std::sqrt(ms / n);
    }
    if (!(model.sigma > 0)) throw DegenerateData("rbf_net_train: zero width (identical inputs)");

    Matrix phi(n, k + 1); // hidden features plus bias column
    double denom = 2.0 * model.sigma * model.sigma;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j)
            phi(i, j) = std::exp(-(x.row(i) - model.centers.row(j)).squaredNorm() / denom);
        phi(i, k) = 1.0;
    }

    Matrix targets = Matrix::Constant(n, n_classes, -1.0);
    for (int i = 0; i < n; ++i) targets(i, y[i]) = 1.0;

    Matrix gram = phi.transpose() * phi;
    for (int j = 0; j < k; ++j) gram(j, j) += 1e-6; // ridge on weights, not the bias
    Matrix sol = gram.ldlt().solve(phi.transpose() * targets); // (k+1) x C

    model.weights = sol.topRows(k).transpose();
    model.bias = sol.row(k).transpose();
    return model;
}

Matrix rbf_net_scores(const RbfNetModel& model, const Matrix& x) {
    if (x.cols() != model.centers.cols())
        throw DimensionMismatch("rbf_net_scores: width does not match model");
    const int k = int(model.centers.rows());
    Matrix phi(x.rows(), k);
    double denom = 2.0 * model.sigma * model.sigma;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < k; ++j)
            phi(i, j) = std::exp(-(x.row(i) - model.centers.row(j)).squaredNorm() / denom);
    return (phi * model.weights.transpose()).rowwise() + model.bias.transpose();
}

std::vector<int> rbf_net_predict(const RbfNetModel& model, const Matrix& x) {
    Matrix scores = rbf_net_scores(model, x);
    std::vector<int> labels(scores.rows());
    for (int i = 0; i < scores.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < scores.cols(); ++c)
            if (scores(i, c) > scores(i, best)) best = c;
        labels[i] = best;
    }
    return labels;
}

} // namespace tabsae
