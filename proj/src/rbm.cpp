#include "rbmflow/rbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "rbmflow/csv.hpp"

namespace rbmflow {

namespace {

// tanh via the vectorized exp kernel: (e^2x - 1)/(e^2x + 1) with the input
// clamped to +-20 (tanh saturates to +-1 well before that in double).
// Roughly 4x faster than elementwise std::tanh on the training hot path.
template <typename Derived>
auto fast_tanh(const Eigen::ArrayBase<Derived>& x) {
    auto e = (2.0 * x.min(20.0).max(-20.0)).exp();
    return (e - 1.0) / (e + 1.0);
}

// Box-Muller on our own stream; std::normal_distribution is
// implementation-defined and would break seed reproducibility guarantees.
double gaussian(Xoshiro256pp& rng) {
    double u1 = rng.uniform01();
    while (u1 == 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void check_dims(const RbmModel& model) {
    if (model.n_visible < 1 || model.n_hidden < 1 ||
        model.weights.rows() != model.n_visible ||
        model.weights.cols() != model.n_hidden ||
        model.visible_bias.size() != model.n_visible ||
        model.hidden_bias.size() != model.n_hidden)
        throw std::invalid_argument("RbmModel: inconsistent dimensions");
}

// +-1 sample of a matrix of expectations, column-major draw order.
void sample_pm1_inplace(Eigen::MatrixXd& expectations, Xoshiro256pp& rng) {
    double* data = expectations.data();
    const Eigen::Index n = expectations.size();
    for (Eigen::Index i = 0; i < n; ++i)
        data[i] = rng.uniform01() < 0.5 * (1.0 + data[i]) ? 1.0 : -1.0;
}

void enumeration_guard(const RbmModel& model) {
    if (model.n_visible + model.n_hidden > 20)
        throw std::invalid_argument(
            "exact enumeration limited to n_visible + n_hidden <= 20");
}

Eigen::VectorXd state_from_bits(std::uint32_t bits, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = (bits >> i) & 1u ? 1.0 : -1.0;
    return v;
}

// log p~(v) + log Z = b_v.v + sum_a log(2 cosh theta_a(v))
double log_unnormalized(const RbmModel& model, const Eigen::VectorXd& v) {
    const Eigen::VectorXd theta = model.weights.transpose() * v + model.hidden_bias;
    double acc = model.visible_bias.dot(v);
    for (Eigen::Index a = 0; a < theta.size(); ++a)
        acc += std::log(2.0 * std::cosh(theta[a]));
    return acc;
}

}  // namespace

RbmModel init_model(int n_visible, int n_hidden, std::uint64_t seed) {
    if (n_visible < 1 || n_hidden < 1)
        throw std::invalid_argument("init_model: layer sizes must be >= 1");
    RbmModel model;
    model.n_visible = n_visible;
    model.n_hidden = n_hidden;
    Xoshiro256pp rng(seed);
    const double sigma = 0.01 / std::sqrt(static_cast<double>(n_visible));
    model.weights.resize(n_visible, n_hidden);
    for (int a = 0; a < n_hidden; ++a)
        for (int i = 0; i < n_visible; ++i) model.weights(i, a) = sigma * gaussian(rng);
    model.visible_bias = Eigen::VectorXd::Zero(n_visible);
    model.hidden_bias = Eigen::VectorXd::Zero(n_hidden);
    return model;
}

void validate(const RbmModel& model) {
    check_dims(model);
    if (!model.weights.allFinite() || !model.visible_bias.allFinite() ||
        !model.hidden_bias.allFinite())
        throw std::invalid_argument("RbmModel: non-finite parameters");
}

Eigen::VectorXd hidden_expectation(const RbmModel& model, const Eigen::VectorXd& v) {
    check_dims(model);
    if (v.size() != model.n_visible)
        throw std::invalid_argument("hidden_expectation: dimension mismatch");
    return fast_tanh((model.weights.transpose() * v + model.hidden_bias).array()).matrix();
}

Eigen::VectorXd visible_expectation(const RbmModel& model, const Eigen::VectorXd& h) {
    check_dims(model);
    if (h.size() != model.n_hidden)
        throw std::invalid_argument("visible_expectation: dimension mismatch");
    return fast_tanh((model.weights * h + model.visible_bias).array()).matrix();
}

Eigen::VectorXd sample_binary(const Eigen::VectorXd& expectations, Xoshiro256pp& rng) {
    Eigen::VectorXd out(expectations.size());
    for (Eigen::Index i = 0; i < expectations.size(); ++i) {
        const double e = expectations[i];
        if (!(e >= -1.0 && e <= 1.0))
            throw std::invalid_argument("sample_binary: expectation outside [-1, 1]");
        out[i] = rng.uniform01() < 0.5 * (1.0 + e) ? 1.0 : -1.0;
    }
    return out;
}

Eigen::VectorXd reconstruct(const RbmModel& model, const Eigen::VectorXd& v,
                            Xoshiro256pp& rng) {
    const Eigen::VectorXd h = sample_binary(hidden_expectation(model, v), rng);
    return sample_binary(visible_expectation(model, h), rng);
}

MomentumState zero_momentum(const RbmModel& model) {
    MomentumState state;
    state.weights = Eigen::MatrixXd::Zero(model.n_visible, model.n_hidden);
    state.visible_bias = Eigen::VectorXd::Zero(model.n_visible);
    state.hidden_bias = Eigen::VectorXd::Zero(model.n_hidden);
    return state;
}

double cd1_update(RbmModel& model, const Eigen::MatrixXd& batch,
                  const TrainConfig& config, MomentumState& momentum,
                  Xoshiro256pp& rng) {
    check_dims(model);
    if (batch.rows() != model.n_visible || batch.cols() == 0)
        throw std::invalid_argument("cd1_update: bad minibatch shape");
    const double n = static_cast<double>(batch.cols());

    Eigen::MatrixXd hidden_mean = fast_tanh(
        ((model.weights.transpose() * batch).colwise() + model.hidden_bias).array());
    Eigen::MatrixXd hidden_sample = hidden_mean;
    sample_pm1_inplace(hidden_sample, rng);

    Eigen::MatrixXd visible_recon = fast_tanh(
        ((model.weights * hidden_sample).colwise() + model.visible_bias).array());
    sample_pm1_inplace(visible_recon, rng);

    const Eigen::MatrixXd hidden_recon_mean = fast_tanh(
        ((model.weights.transpose() * visible_recon).colwise() + model.hidden_bias)
            .array());

    const double inv_n = 1.0 / n;
    const Eigen::MatrixXd grad_w =
        (batch * hidden_mean.transpose() - visible_recon * hidden_recon_mean.transpose()) *
        inv_n;
    const Eigen::VectorXd grad_bv = (batch - visible_recon).rowwise().sum() * inv_n;
    const Eigen::VectorXd grad_bh =
        (hidden_mean - hidden_recon_mean).rowwise().sum() * inv_n;

    momentum.weights = config.momentum * momentum.weights + config.learning_rate * grad_w;
    momentum.visible_bias =
        config.momentum * momentum.visible_bias + config.learning_rate * grad_bv;
    momentum.hidden_bias =
        config.momentum * momentum.hidden_bias + config.learning_rate * grad_bh;
    model.weights += momentum.weights;
    model.visible_bias += momentum.visible_bias;
    model.hidden_bias += momentum.hidden_bias;

    // mismatch fraction between data and the sampled reconstruction
    return (batch - visible_recon).cwiseAbs().sum() / (2.0 * batch.size());
}

RbmGradient exact_loglik_gradient(const RbmModel& model, const Eigen::MatrixXd& data) {
    check_dims(model);
    enumeration_guard(model);
    if (data.rows() != model.n_visible || data.cols() == 0)
        throw std::invalid_argument("exact_loglik_gradient: bad data shape");

    const int n_v = model.n_visible;
    const int n_h = model.n_hidden;
    const double n = static_cast<double>(data.cols());

    RbmGradient grad;
    grad.weights = Eigen::MatrixXd::Zero(n_v, n_h);
    grad.visible_bias = Eigen::VectorXd::Zero(n_v);
    grad.hidden_bias = Eigen::VectorXd::Zero(n_h);

    // data phase
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const Eigen::VectorXd v = data.col(c);
        const Eigen::VectorXd h_mean = hidden_expectation(model, v);
        grad.weights += v * h_mean.transpose() / n;
        grad.visible_bias += v / n;
        grad.hidden_bias += h_mean / n;
    }

    // model phase via full enumeration of the visible layer
    const std::uint32_t n_states = 1u << n_v;
    double log_z_max = -std::numeric_limits<double>::infinity();
    std::vector<double> log_weight(n_states);
    for (std::uint32_t bits = 0; bits < n_states; ++bits) {
        log_weight[bits] = log_unnormalized(model, state_from_bits(bits, n_v));
        log_z_max = std::max(log_z_max, log_weight[bits]);
    }
    double z_scaled = 0.0;
    for (std::uint32_t bits = 0; bits < n_states; ++bits)
        z_scaled += std::exp(log_weight[bits] - log_z_max);

    for (std::uint32_t bits = 0; bits < n_states; ++bits) {
        const double p = std::exp(log_weight[bits] - log_z_max) / z_scaled;
        const Eigen::VectorXd v = state_from_bits(bits, n_v);
        const Eigen::VectorXd h_mean = hidden_expectation(model, v);
        grad.weights -= p * v * h_mean.transpose();
        grad.visible_bias -= p * v;
        grad.hidden_bias -= p * h_mean;
    }
    return grad;
}

double exact_kl(const RbmModel& model, const Eigen::MatrixXd& data) {
    check_dims(model);
    enumeration_guard(model);
    if (data.rows() != model.n_visible || data.cols() == 0)
        throw std::invalid_argument("exact_kl: bad data shape");

    const int n_v = model.n_visible;
    const std::uint32_t n_states = 1u << n_v;
    std::vector<double> log_weight(n_states);
    double log_z_max = -std::numeric_limits<double>::infinity();
    for (std::uint32_t bits = 0; bits < n_states; ++bits) {
        log_weight[bits] = log_unnormalized(model, state_from_bits(bits, n_v));
        log_z_max = std::max(log_z_max, log_weight[bits]);
    }
    double z_scaled = 0.0;
    for (std::uint32_t bits = 0; bits < n_states; ++bits)
        z_scaled += std::exp(log_weight[bits] - log_z_max);
    const double log_z = log_z_max + std::log(z_scaled);

    std::map<std::uint32_t, int> counts;
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        std::uint32_t bits = 0;
        for (int i = 0; i < n_v; ++i)
            if (data(i, c) > 0) bits |= 1u << i;
        ++counts[bits];
    }
    double kl = 0.0;
    const double n = static_cast<double>(data.cols());
    for (const auto& [bits, count] : counts) {
        const double q = count / n;
        kl += q * (std::log(q) - (log_weight[bits] - log_z));
    }
    return kl;
}

namespace {

double eval_mismatch(const RbmModel& model, const Eigen::MatrixXd& data,
                     Xoshiro256pp& rng) {
    Eigen::MatrixXd hidden = fast_tanh(
        ((model.weights.transpose() * data).colwise() + model.hidden_bias).array());
    sample_pm1_inplace(hidden, rng);
    Eigen::MatrixXd recon = fast_tanh(
        ((model.weights * hidden).colwise() + model.visible_bias).array());
    sample_pm1_inplace(recon, rng);
    return (data - recon).cwiseAbs().sum() / (2.0 * data.size());
}

}  // namespace

TrainReport train(const Dataset& dataset, int n_hidden, const TrainConfig& config) {
    if (n_hidden < 1) throw std::invalid_argument("train: n_hidden must be >= 1");
    if (config.learning_rate <= 0.0)
        throw std::invalid_argument("train: learning rate must be > 0");
    if (config.momentum < 0.0 || config.momentum >= 1.0)
        throw std::invalid_argument("train: momentum must be in [0, 1)");
    if (config.epochs < 1 || config.minibatch < 1)
        throw std::invalid_argument("train: epochs and minibatch must be >= 1");

    const auto start = std::chrono::steady_clock::now();
    const Eigen::MatrixXd train_data = to_matrix(dataset_half(dataset, false));
    const Eigen::MatrixXd test_data = to_matrix(dataset_half(dataset, true));
    const int n_train = static_cast<int>(train_data.cols());
    const int n_test = static_cast<int>(test_data.cols());
    if (n_train == 0 || n_test == 0)
        throw std::invalid_argument("train: dataset halves are empty");

    // evenly strided test subset for the per-epoch error curve
    Eigen::MatrixXd eval_data;
    if (config.eval_subsample > 0 && n_test > config.eval_subsample) {
        eval_data.resize(test_data.rows(), config.eval_subsample);
        const double stride = static_cast<double>(n_test) / config.eval_subsample;
        for (int k = 0; k < config.eval_subsample; ++k)
            eval_data.col(k) = test_data.col(static_cast<int>(k * stride));
    } else {
        eval_data = test_data;
    }

    TrainReport report;
    report.n_train = n_train;
    report.n_test = n_test;
    report.eval_test_size = static_cast<int>(eval_data.cols());
    report.model = init_model(dataset.side * dataset.side, n_hidden, config.seed);
    MomentumState momentum = zero_momentum(report.model);
    Xoshiro256pp train_rng(derive_seed(config.seed, {seed_tag::train, 1}));

    std::vector<int> order(static_cast<std::size_t>(n_train));
    std::iota(order.begin(), order.end(), 0);
    Eigen::MatrixXd batch(train_data.rows(), config.minibatch);
    report.errors.reserve(static_cast<std::size_t>(config.epochs));

    for (long epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the training stream
        for (int i = n_train - 1; i > 0; --i) {
            const int j = static_cast<int>(train_rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }
        double mismatch_sum = 0.0;
        long n_batches = 0;
        for (int begin = 0; begin < n_train; begin += config.minibatch) {
            const int size = std::min(config.minibatch, n_train - begin);
            batch.resize(train_data.rows(), size);
            for (int k = 0; k < size; ++k) batch.col(k) = train_data.col(order[begin + k]);
            mismatch_sum += cd1_update(report.model, batch, config, momentum, train_rng);
            ++n_batches;
        }
        Xoshiro256pp eval_rng(
            derive_seed(config.seed, {seed_tag::train, 2, static_cast<std::uint64_t>(epoch)}));
        EpochError entry;
        entry.epoch = epoch;
        entry.train_error = mismatch_sum / static_cast<double>(n_batches);
        entry.test_error = eval_mismatch(report.model, eval_data, eval_rng);
        report.errors.push_back(entry);
    }

    // overfit guard: sustained test-error rise above its best smoothed level
    const std::size_t n_epochs = report.errors.size();
    const std::size_t window = std::max<std::size_t>(1, n_epochs / 10);
    double best_window = std::numeric_limits<double>::infinity();
    double last_window = 0.0;
    for (std::size_t begin = 0; begin < n_epochs; begin += window) {
        const std::size_t end = std::min(begin + window, n_epochs);
        double mean = 0.0;
        for (std::size_t i = begin; i < end; ++i) mean += report.errors[i].test_error;
        mean /= static_cast<double>(end - begin);
        best_window = std::min(best_window, mean);
        last_window = mean;
    }
    report.overfit_suspected = last_window > best_window + 0.02;

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string train_report_to_csv(const TrainReport& report) {
    CsvTable table;
    table.header = {"epoch", "train_err", "test_err"};
    for (const auto& e : report.errors)
        table.rows.push_back({std::to_string(e.epoch), format_double(e.train_error),
                              format_double(e.test_error)});
    return table.to_string();
}

Eigen::VectorXd to_vector(const SpinConfig& config) {
    Eigen::VectorXd v(config.spins.size());
    for (std::size_t i = 0; i < config.spins.size(); ++i) v[i] = config.spins[i];
    return v;
}

SpinConfig to_config(const Eigen::VectorXd& v, int side) {
    SpinConfig config;
    config.side = side;
    config.spins.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        config.spins[static_cast<std::size_t>(i)] = v[i] > 0 ? std::int8_t{1} : std::int8_t{-1};
    validate(config);
    return config;
}

Eigen::MatrixXd to_matrix(const std::vector<SpinConfig>& configs) {
    if (configs.empty()) return {};
    Eigen::MatrixXd data(configs.front().spins.size(), configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        if (configs[c].spins.size() != static_cast<std::size_t>(data.rows()))
            throw std::invalid_argument("to_matrix: mixed configuration sizes");
        for (std::size_t i = 0; i < configs[c].spins.size(); ++i)
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                configs[c].spins[i];
    }
    return data;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double value) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(value));
    std::memcpy(&bits, &value, sizeof(bits));
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& bytes, std::size_t& pos) {
    if (pos + 4 > bytes.size()) throw std::runtime_error("model file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    pos += 4;
    return v;
}

double get_f64(const std::string& bytes, std::size_t& pos) {
    if (pos + 8 > bytes.size()) throw std::runtime_error("model file truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i]))
                << (8 * i);
    pos += 8;
    double value;
    std::memcpy(&value, &bits, sizeof(value));
    return value;
}

}  // namespace

std::string serialize_model(const RbmModel& model) {
    validate(model);
    std::string out;
    out.append("RBMW");
    put_u32(out, kModelFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(model.n_visible));
    put_u32(out, static_cast<std::uint32_t>(model.n_hidden));
    for (int i = 0; i < model.n_visible; ++i)
        for (int a = 0; a < model.n_hidden; ++a) put_f64(out, model.weights(i, a));
    for (int i = 0; i < model.n_visible; ++i) put_f64(out, model.visible_bias[i]);
    for (int a = 0; a < model.n_hidden; ++a) put_f64(out, model.hidden_bias[a]);
    return out;
}

RbmModel deserialize_model(const std::string& bytes) {
    if (bytes.size() < 4 || bytes.substr(0, 4) != "RBMW")
        throw std::runtime_error("model file: bad magic");
    std::size_t pos = 4;
    const std::uint32_t version = get_u32(bytes, pos);
    if (version != kModelFormatVersion)
        throw std::runtime_error("model file: unsupported version");
    RbmModel model;
    model.n_visible = static_cast<int>(get_u32(bytes, pos));
    model.n_hidden = static_cast<int>(get_u32(bytes, pos));
    if (model.n_visible < 1 || model.n_hidden < 1)
        throw std::runtime_error("model file: bad layer sizes");
    model.weights.resize(model.n_visible, model.n_hidden);
    for (int i = 0; i < model.n_visible; ++i)
        for (int a = 0; a < model.n_hidden; ++a) model.weights(i, a) = get_f64(bytes, pos);
    model.visible_bias.resize(model.n_visible);
    for (int i = 0; i < model.n_visible; ++i) model.visible_bias[i] = get_f64(bytes, pos);
    model.hidden_bias.resize(model.n_hidden);
    for (int a = 0; a < model.n_hidden; ++a) model.hidden_bias[a] = get_f64(bytes, pos);
    if (pos != bytes.size()) throw std::runtime_error("model file: trailing bytes");
    return model;
}

void save_model(const std::string& path, const RbmModel& model) {
    write_file_atomic(path, serialize_model(model));
}

RbmModel load_model(const std::string& path) { return deserialize_model(read_file(path)); }

}  // namespace rbmflow
