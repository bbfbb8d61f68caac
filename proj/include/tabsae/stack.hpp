#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tabsae/autoencoder.hpp"
#include "tabsae/dataset.hpp"
#include "tabsae/optimizers.hpp"

namespace tabsae {

struct SoftmaxClassifier {
    Matrix w; // C x m
    Vector b; // C
    double lambda = 1e-4;

    int classes() const { return int(w.rows()); }
    int inputs() const { return int(w.cols()); }
};

struct SoftmaxGradients {
    Matrix w;
    Vector b;
};

/// Cross-entropy with L2 penalty on W:
/// J = -(1/N) sum ln p(y_n | h_n) + (lambda/2)|W|_F^2, p = row softmax.
double softmax_loss_grad(const SoftmaxClassifier& clf, const Matrix& h,
                         const std::vector<int>& y, SoftmaxGradients* grads = nullptr);

/// Row-softmax probabilities of h W' + b.
Matrix softmax_probs(const SoftmaxClassifier& clf, const Matrix& h);

SoftmaxClassifier softmax_train(const Matrix& h, const std::vector<int>& y, int n_classes,
                                OptimizerKind optimizer, const OptimizerOptions& options,
                                double lambda, uint64_t seed,
                                OptimizerTrace* trace = nullptr);

/// Encoder chain + softmax head. Decoders are dropped after pretraining;
/// input_norm (when present) is applied inside predict so the model accepts
/// raw feature rows.
struct StackedModel {
    std::vector<AutoencoderLayer> encoders;
    SoftmaxClassifier head;
    double lambda_stack = 1e-4;
    std::optional<NormalizationParams> input_norm;

    int input_dim() const { return encoders.empty() ? head.inputs() : encoders.front().input(); }
    void check_shapes() const; // throws DimensionMismatch on broken chaining
};

/// Greedy layer-wise pretraining: AE_1 on x, AE_2 on encode(AE_1, x), ...
/// Each layer gets the full optimizer budget in `options`.
std::vector<AutoencoderLayer> stack_pretrain(const Matrix& x, const std::vector<int>& layer_sizes,
                                             Activation activation, OptimizerKind optimizer,
                                             const OptimizerOptions& options, double lambda,
                                             double rho, double beta, uint64_t seed,
                                             std::vector<AeTrainReport>* reports = nullptr);

/// Supervised loss through the whole stack: cross-entropy plus
/// (lambda_stack/2) * (sum of squared encoder weights + |W|_F^2); biases and
/// decoders excluded. grad (when non-null) is the packed gradient in
/// stack_pack order.
double stack_loss_grad(const StackedModel& model, const Matrix& x, const std::vector<int>& y,
                       Vector* grad = nullptr);

/// Packed fine-tune parameters: [W1_1 rows; b1_1; ...; W rows; b].
Vector stack_pack(const StackedModel& model);
void stack_unpack(const Vector& theta, StackedModel& model);

/// Joint supervised training of encoders + head. x must already be in the
/// model's input feature space (normalized when input_norm is set).
/// max_iter == 0 returns the model unchanged.
StackedModel fine_tune(StackedModel model, const Matrix& x, const std::vector<int>& y,
                       OptimizerKind optimizer, const OptimizerOptions& options,
                       double lambda_stack, uint64_t seed, OptimizerTrace* trace = nullptr);

struct Prediction {
    std::vector<int> labels;
    Matrix probs; // N x C, rows sum to 1
};

/// Applies input_norm (when present), the encoder chain, and the head.
/// Ties in argmax go to the smaller class id.
Prediction predict(const StackedModel& model, const Matrix& x);

/// Stack serialization: header, optional normalization block, autoencoder
/// layer blocks, softmax block.
void save_stack(std::ostream& out, const StackedModel& model);
StackedModel load_stack(std::istream& in);
void save_stack_file(const StackedModel& model, const std::string& path);
StackedModel load_stack_file(const std::string& path);

} // namespace tabsae
