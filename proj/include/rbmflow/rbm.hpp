// Binary +-1 restricted Boltzmann machine: conditional expectations,
// stochastic reconstruction, CD-1 training with SGD + momentum, and exact
// enumeration oracles for machines small enough to sum over.
//
// Energy of a joint state: phi(v,h) = -v'Wh - b_v.v - b_h.h, all units +-1.
// Conditionals factorize, so <h_a|v> = tanh((W'v + b_h)_a) and likewise for
// the visible side. Reconstruction binarizes an expectation e by drawing +1
// with probability (1+e)/2, which keeps the expectation unchanged.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rbmflow/rng.hpp"
#include "rbmflow/sampler.hpp"

namespace rbmflow {

struct RbmModel {
    int n_visible = 0;
    int n_hidden = 0;
    Eigen::MatrixXd weights;        // N_v x N_h
    Eigen::VectorXd visible_bias;   // N_v
    Eigen::VectorXd hidden_bias;    // N_h
};

// W ~ N(0, 0.01/sqrt(N_v)), biases zero.
RbmModel init_model(int n_visible, int n_hidden, std::uint64_t seed);

void validate(const RbmModel& model);

Eigen::VectorXd hidden_expectation(const RbmModel& model, const Eigen::VectorXd& v);
Eigen::VectorXd visible_expectation(const RbmModel& model, const Eigen::VectorXd& h);

// Each component independently +1 with probability (1+e)/2; components must
// lie in [-1, 1]. Draw order is element order.
Eigen::VectorXd sample_binary(const Eigen::VectorXd& expectations, Xoshiro256pp& rng);

// One stochastic v -> h -> v~ pass.
// Draw order: hidden units 0..N_h-1, then visible units 0..N_v-1.
Eigen::VectorXd reconstruct(const RbmModel& model, const Eigen::VectorXd& v,
                            Xoshiro256pp& rng);

struct TrainConfig {
    double learning_rate = 1e-3;
    double momentum = 0.5;
    long epochs = 100000;
    int minibatch = 100;
    std::uint64_t seed = 0;
    // Test-half reconstruction error is tracked on an evenly strided subset of
    // at most this many configurations per epoch (0 = the whole half).
    int eval_subsample = 2000;
};

struct MomentumState {
    Eigen::MatrixXd weights;
    Eigen::VectorXd visible_bias;
    Eigen::VectorXd hidden_bias;
};

MomentumState zero_momentum(const RbmModel& model);

// One CD-1 update on a +-1 minibatch (columns are samples). Positive phase
// uses tanh hidden expectations at the data; negative phase samples h, then
// v~, and closes with tanh expectations at v~. Heavy-ball momentum:
// vel = mu*vel + eps*grad, params += vel.
// Draw order per phase: for each column, units in order (hidden phase first).
// Returns the mean per-site mismatch between the batch and its reconstruction.
double cd1_update(RbmModel& model, const Eigen::MatrixXd& batch,
                  const TrainConfig& config, MomentumState& momentum,
                  Xoshiro256pp& rng);

struct RbmGradient {
    Eigen::MatrixXd weights;
    Eigen::VectorXd visible_bias;
    Eigen::VectorXd hidden_bias;
};

// Exact gradient of the mean log-likelihood of `data` (equivalently, minus
// the gradient of KL(data || model)). Enumeration over all visible states
// with the hidden layer summed analytically; requires N_v + N_h <= 20.
RbmGradient exact_loglik_gradient(const RbmModel& model, const Eigen::MatrixXd& data);

// Exact KL(q_empirical || p~_model), same size guard.
double exact_kl(const RbmModel& model, const Eigen::MatrixXd& data);

struct EpochError {
    long epoch = 0;
    double train_error = 0.0;
    double test_error = 0.0;
};

struct TrainReport {
    RbmModel model;
    std::vector<EpochError> errors;
    bool overfit_suspected = false;
    int n_train = 0;
    int n_test = 0;
    int eval_test_size = 0;
    double seconds = 0.0;
};

// Even/odd per-temperature split into equal train/test halves, then
// config.epochs full passes of shuffled minibatch CD-1.
TrainReport train(const Dataset& dataset, int n_hidden, const TrainConfig& config);

std::string train_report_to_csv(const TrainReport& report);

// SpinConfig <-> Eigen bridges (columns are samples).
Eigen::VectorXd to_vector(const SpinConfig& config);
SpinConfig to_config(const Eigen::VectorXd& v, int side);
Eigen::MatrixXd to_matrix(const std::vector<SpinConfig>& configs);

// Model checkpoint: "RBMW" | u32 version | u32 N_v | u32 N_h | W row-major
// f64 LE | visible bias | hidden bias.
inline constexpr std::uint32_t kModelFormatVersion = 1;
std::string serialize_model(const RbmModel& model);
RbmModel deserialize_model(const std::string& bytes);
void save_model(const std::string& path, const RbmModel& model);
RbmModel load_model(const std::string& path);

}  // namespace rbmflow
