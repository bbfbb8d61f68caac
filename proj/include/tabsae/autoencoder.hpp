#pragma once

#include <iosfwd>
#include <string>

#include "tabsae/activations.hpp"
#include "tabsae/optimizers.hpp"
#include "tabsae/types.hpp"

namespace tabsae {

/// One sparse autoencoder: encoder act(x W1' + b1), linear decoder
/// a W2' + b2. The decoder is untied and only used during unsupervised
/// training.
struct AutoencoderLayer {
    Matrix w1; // h x d
    Vector b1; // h
    Matrix w2; // d x h
    Vector b2; // d
    Activation activation;
    double lambda = 1e-4; // L2 weight coefficient
    double rho = 0.05;    // sparsity proportion
    double beta = 1.0;    // sparsity weight

    int hidden() const { return int(w1.rows()); }
    int input() const { return int(w1.cols()); }
};

struct AeLossTerms {
    double reconstruction = 0;
    double weight_penalty = 0;
    double sparsity_penalty = 0;
    double total() const { return reconstruction + weight_penalty + sparsity_penalty; }
};

struct AeGradients {
    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;
};

/// Loss J = mean 0.5|x_hat - x|^2 + (lambda/2)(|W1|^2 + |W2|^2)
///        + beta * sum_j KL(rho || rho_hat_j),
/// rho_hat_j = mean logistic(hidden activation j), clamped to
/// [1e-8, 1-1e-8]. Gradients are exact. Throws DimensionMismatch /
/// NonFiniteLoss.
double ae_loss_grad(const AutoencoderLayer& layer, const Matrix& x,
                    AeGradients* grads = nullptr, AeLossTerms* terms = nullptr);

/// Flat parameter vector [W1 rows; b1; W2 rows; b2] and its inverse.
Vector ae_pack(const AutoencoderLayer& layer);
void ae_unpack(const Vector& theta, AutoencoderLayer& layer);

/// Objective over the packed parameters (non-finite losses become +inf so
/// line searches back off instead of aborting). Not safe for concurrent
/// evaluation of the same instance.
Objective ae_objective(const AutoencoderLayer& proto, const Matrix& x);

struct AeTrainReport {
    AeLossTerms terms;
    double reconstruction_rmse = 0;
    OptimizerTrace trace;
};

/// Unsupervised training: seeded uniform(-1/sqrt(d), 1/sqrt(d)) weights, zero
/// biases, then full-batch minimization of ae_loss_grad.
AutoencoderLayer ae_train(const Matrix& x, int hidden, Activation activation,
                          OptimizerKind optimizer, const OptimizerOptions& options,
                          double lambda, double rho, double beta, uint64_t seed,
                          AeTrainReport* report = nullptr);

/// act(x W1' + b1)
Matrix encode(const AutoencoderLayer& layer, const Matrix& x);

/// sqrt(mean squared entrywise reconstruction error)
double reconstruction_rmse(const AutoencoderLayer& layer, const Matrix& x);

/// Flat text serialization: header line (shapes, activation, hyperparameters,
/// activation parameters), then row-major blocks at 17 significant digits.
void save_layer(std::ostream& out, const AutoencoderLayer& layer);
AutoencoderLayer load_layer(std::istream& in);

} // namespace tabsae
