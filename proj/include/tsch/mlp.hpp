#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tsch/window.hpp"

namespace tsch {

// Two-layer perceptron: ReLU hidden layer, sigmoid output scalar. Columns of
// a batch matrix are samples.
struct MlpModel {
    Eigen::MatrixXd hidden_weights; // hidden x input
    Eigen::VectorXd hidden_bias;    // hidden
    Eigen::VectorXd output_weights; // hidden
    double output_bias = 0.0;

    Eigen::Index input_size() const { return hidden_weights.cols(); }
    Eigen::Index hidden_size() const { return hidden_weights.rows(); }
    Eigen::Index parameter_count() const {
        return hidden_weights.size() + hidden_bias.size() + output_weights.size() + 1;
    }

    // Glorot-uniform weights from the seeded counter generator, zero biases.
    static MlpModel init(Eigen::Index input, Eigen::Index hidden, std::uint64_t seed);
};

struct TrainConfig {
    int epochs = 20;
    int batch_size = 32;
    double learning_rate = 0.01; // halved at each epoch: lr_e = lr * decay^e
    double lr_decay = 0.5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int hidden = 8;
    std::uint64_t seed = 1;
    bool log_train_mse = false; // extra full pass per epoch for the log
};

struct EpochStats {
    int epoch = 0;
    double learning_rate = 0.0;
    double mean_batch_loss = 0.0;
    double train_mse = std::numeric_limits<double>::quiet_NaN(); // when logged
};

struct TrainLog {
    std::size_t window_count = 0;
    std::vector<EpochStats> epochs;
};

// Adam on the mean squared error, windows reshuffled each epoch with the
// seeded generator, last partial batch kept. Deterministic for a given
// (seed, data). TrainingDiverged on non-finite loss.
MlpModel train(const WindowDataset& data, const TrainConfig& cfg, TrainLog* log = nullptr);

// Strictly inside (0,1) for any finite weights.
double predict(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd predict_batch(const MlpModel& model,
                              const Eigen::Ref<const Eigen::MatrixXd>& X);

// Scores for every window of the dataset, in window order.
Eigen::VectorXd scores(const MlpModel& model, const WindowDataset& data);

// Mean squared error of the model over the whole dataset.
double dataset_mse(const MlpModel& model, const WindowDataset& data);

inline bool classify(double score, double threshold) { return score >= threshold; }

// Max relative disagreement between analytic gradients of the batch MSE loss
// and central finite differences, across every parameter.
double gradient_check(MlpModel model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y, double epsilon);

// Checkpoint file: little-endian u32 JSON-header length, the JSON header
// (layer sizes, activation tags, training config, seed), then the weights as
// little-endian f64 in row-major layer order (hidden weights, hidden bias,
// output weights, output bias).
struct Checkpoint {
    MlpModel model;
    TrainConfig config;
};

void save_checkpoint(const MlpModel& model, const TrainConfig& cfg, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace tsch
