#include "tsch/mlp.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "tsch/binio.hpp"
#include "tsch/errors.hpp"
#include "tsch/rng.hpp"

namespace tsch {

namespace {

// Sigmoid clamped to the largest representable open interval so scores never
// collapse to exactly 0 or 1.
double sigmoid(double z) {
    double s;
    if (z >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double e = std::exp(z);
        s = e / (1.0 + e);
    }
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::min(std::max(s, lo), hi);
}

struct Gradients {
    Eigen::MatrixXd hidden_weights;
    Eigen::VectorXd hidden_bias;
    Eigen::VectorXd output_weights;
    double output_bias = 0.0;
};

struct Workspace {
    Eigen::MatrixXd z1, h, dh;
    Eigen::VectorXd z2, s, dz2;
};

// Forward pass; returns the scores for the batch (columns of X).
Eigen::VectorXd forward(const MlpModel& m, const Eigen::Ref<const Eigen::MatrixXd>& X,
                        Workspace* ws = nullptr) {
    Workspace local;
    Workspace& w = ws ? *ws : local;
    w.z1.noalias() = m.hidden_weights * X;
    w.z1.colwise() += m.hidden_bias;
    w.h = w.z1.cwiseMax(0.0);
    w.z2.noalias() = w.h.transpose() * m.output_weights;
    w.z2.array() += m.output_bias;
    w.s = w.z2.unaryExpr([](double z) { return sigmoid(z); });
    return w.s;
}

// Mean-over-batch squared error and its gradients.
double backward(const MlpModel& m, const Eigen::Ref<const Eigen::MatrixXd>& X,
                const Eigen::Ref<const Eigen::VectorXd>& y, Workspace& w, Gradients& g) {
    forward(m, X, &w);
    const auto batch = static_cast<double>(X.cols());
    const Eigen::VectorXd diff = w.s - y;
    const double loss = diff.squaredNorm() / batch;

    w.dz2 = (2.0 / batch) * diff.array() * w.s.array() * (1.0 - w.s.array());
    g.output_bias = w.dz2.sum();
    g.output_weights.noalias() = w.h * w.dz2;
    w.dh.noalias() = m.output_weights * w.dz2.transpose();
    w.dh = w.dh.array() * (w.z1.array() > 0.0).cast<double>();
    g.hidden_weights.noalias() = w.dh * X.transpose();
    g.hidden_bias = w.dh.rowwise().sum();
    return loss;
}

struct AdamState {
    Gradients m, v;
    long step = 0;

    explicit AdamState(const MlpModel& model) {
        m.hidden_weights = Eigen::MatrixXd::Zero(model.hidden_size(), model.input_size());
        m.hidden_bias = Eigen::VectorXd::Zero(model.hidden_size());
        m.output_weights = Eigen::VectorXd::Zero(model.hidden_size());
        v = m;
    }

    template <typename P, typename G, typename M>
    static void update_block(P&& param, const G& grad, M& m1, M& m2, double lr, double b1,
                             double b2, double c1, double c2, double eps) {
        m1 = b1 * m1 + (1.0 - b1) * grad;
        m2 = (b2 * m2.array() + (1.0 - b2) * grad.array().square()).matrix();
        param.array() -= lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + eps);
    }

    void apply(MlpModel& model, const Gradients& g, const TrainConfig& cfg, double lr) {
        ++step;
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        update_block(model.hidden_weights, g.hidden_weights, m.hidden_weights, v.hidden_weights,
                     lr, cfg.beta1, cfg.beta2, c1, c2, cfg.adam_epsilon);
        update_block(model.hidden_bias, g.hidden_bias, m.hidden_bias, v.hidden_bias, lr,
                     cfg.beta1, cfg.beta2, c1, c2, cfg.adam_epsilon);
        update_block(model.output_weights, g.output_weights, m.output_weights, v.output_weights,
                     lr, cfg.beta1, cfg.beta2, c1, c2, cfg.adam_epsilon);
        m.output_bias = cfg.beta1 * m.output_bias + (1.0 - cfg.beta1) * g.output_bias;
        v.output_bias = cfg.beta2 * v.output_bias + (1.0 - cfg.beta2) * g.output_bias * g.output_bias;
        model.output_bias -= lr * (m.output_bias / c1) /
                             (std::sqrt(v.output_bias / c2) + cfg.adam_epsilon);
    }
};

void shuffle_indices(std::vector<std::uint32_t>& idx, std::uint64_t seed, std::uint64_t epoch) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::uint64_t j =
            rng::draw_below(seed, rng::kStreamShuffle | epoch, i - 1, 0, i);
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(j)]);
    }
}

} // namespace

MlpModel MlpModel::init(Eigen::Index input, Eigen::Index hidden, std::uint64_t seed) {
    if (input < 1 || hidden < 1) throw DomainError("mlp layer sizes must be >= 1");
    MlpModel m;
    m.hidden_weights.resize(hidden, input);
    m.hidden_bias = Eigen::VectorXd::Zero(hidden);
    m.output_weights.resize(hidden);
    m.output_bias = 0.0;

    const double a1 = std::sqrt(6.0 / static_cast<double>(input + hidden));
    std::uint64_t p = 0;
    for (Eigen::Index h = 0; h < hidden; ++h)
        for (Eigen::Index i = 0; i < input; ++i)
            m.hidden_weights(h, i) =
                a1 * (2.0 * rng::draw_unit(seed, rng::kStreamInit, p++, 0) - 1.0);
    const double a2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    for (Eigen::Index h = 0; h < hidden; ++h)
        m.output_weights(h) = a2 * (2.0 * rng::draw_unit(seed, rng::kStreamInit, p++, 0) - 1.0);
    return m;
}

MlpModel train(const WindowDataset& data, const TrainConfig& cfg, TrainLog* log) {
    if (cfg.epochs < 1) throw DomainError("epochs must be >= 1");
    if (cfg.batch_size < 1) throw DomainError("batch size must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw DomainError("learning rate must be > 0");

    const std::size_t count = data.count();
    MlpModel model = MlpModel::init(data.window_len(), cfg.hidden, cfg.seed);
    AdamState adam(model);
    Gradients grads;
    Workspace ws;

    std::vector<std::uint32_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<std::uint32_t>(i);

    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    Eigen::MatrixXd X(data.window_len(), static_cast<Eigen::Index>(batch));
    Eigen::VectorXd y(static_cast<Eigen::Index>(batch));

    if (log) {
        log->window_count = count;
        log->epochs.clear();
    }

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cfg.learning_rate * std::pow(cfg.lr_decay, epoch);
        shuffle_indices(order, cfg.seed, static_cast<std::uint64_t>(epoch));

        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < count; start += batch) {
            const auto n = static_cast<Eigen::Index>(std::min(batch, count - start));
            auto Xb = X.leftCols(n);
            auto yb = y.head(n);
            data.fill_batch(std::span(order).subspan(start, static_cast<std::size_t>(n)), Xb, yb);
            loss_sum += backward(model, Xb, yb, ws, grads);
            adam.apply(model, grads, cfg, lr);
            ++batches;
        }
        const double mean_loss = loss_sum / static_cast<double>(batches);
        if (!std::isfinite(mean_loss))
            throw TrainingDiverged("non-finite loss at epoch " + std::to_string(epoch));
        if (log) {
            EpochStats st;
            st.epoch = epoch;
            st.learning_rate = lr;
            st.mean_batch_loss = mean_loss;
            if (cfg.log_train_mse) st.train_mse = dataset_mse(model, data);
            log->epochs.push_back(st);
        }
    }
    return model;
}

double predict(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != model.input_size())
        throw DomainError("input of size " + std::to_string(x.size()) +
                          " does not match model input size " +
                          std::to_string(model.input_size()));
    const Eigen::VectorXd z1 = model.hidden_weights * x + model.hidden_bias;
    const double z2 = model.output_weights.dot(z1.cwiseMax(0.0)) + model.output_bias;
    return sigmoid(z2);
}

Eigen::VectorXd predict_batch(const MlpModel& model,
                              const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (X.rows() != model.input_size())
        throw DomainError("batch row count does not match model input size");
    return forward(model, X);
}

Eigen::VectorXd scores(const MlpModel& model, const WindowDataset& data) {
    const std::size_t count = data.count();
    Eigen::VectorXd out(static_cast<Eigen::Index>(count));
    constexpr std::size_t chunk = 4096;
    Eigen::MatrixXd X(data.window_len(), static_cast<Eigen::Index>(chunk));
    Eigen::VectorXd y(static_cast<Eigen::Index>(chunk));
    std::vector<std::uint32_t> idx(chunk);
    Workspace ws;
    for (std::size_t start = 0; start < count; start += chunk) {
        const std::size_t n = std::min(chunk, count - start);
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(start + i);
        auto Xb = X.leftCols(static_cast<Eigen::Index>(n));
        auto yb = y.head(static_cast<Eigen::Index>(n));
        data.fill_batch(idx, Xb, yb);
        out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n)) =
            forward(model, Xb, &ws);
    }
    return out;
}

double dataset_mse(const MlpModel& model, const WindowDataset& data) {
    const std::size_t count = data.count();
    constexpr std::size_t chunk = 4096;
    Eigen::MatrixXd X(data.window_len(), static_cast<Eigen::Index>(chunk));
    Eigen::VectorXd y(static_cast<Eigen::Index>(chunk));
    std::vector<std::uint32_t> idx(chunk);
    Workspace ws;
    double sum = 0.0;
    for (std::size_t start = 0; start < count; start += chunk) {
        const std::size_t n = std::min(chunk, count - start);
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(start + i);
        auto Xb = X.leftCols(static_cast<Eigen::Index>(n));
        auto yb = y.head(static_cast<Eigen::Index>(n));
        data.fill_batch(idx, Xb, yb);
        sum += (forward(model, Xb, &ws) - yb).squaredNorm();
    }
    return sum / static_cast<double>(count);
}

namespace {

double batch_loss(const MlpModel& m, const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y) {
    Eigen::VectorXd s = forward(m, X);
    return (s - y).squaredNorm() / static_cast<double>(X.cols());
}

} // namespace

double gradient_check(MlpModel model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    Workspace ws;
    Gradients g;
    backward(model, X, y, ws, g);

    double worst = 0.0;
    auto probe = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + epsilon;
        const double up = batch_loss(model, X, y);
        param = saved - epsilon;
        const double down = batch_loss(model, X, y);
        param = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double scale = std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };

    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        for (Eigen::Index i = 0; i < model.input_size(); ++i)
            probe(model.hidden_weights(h, i), g.hidden_weights(h, i));
    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        probe(model.hidden_bias(h), g.hidden_bias(h));
    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        probe(model.output_weights(h), g.output_weights(h));
    probe(model.output_bias, g.output_bias);
    return worst;
}

void save_checkpoint(const MlpModel& model, const TrainConfig& cfg, const std::string& path) {
    nlohmann::json header;
    header["format"] = "tschsleep-mlp";
    header["version"] = 1;
    header["layers"] = {model.input_size(), model.hidden_size(), 1};
    header["activations"] = {"relu", "sigmoid"};
    header["seed"] = cfg.seed;
    header["train"] = {{"epochs", cfg.epochs},
                       {"batch_size", cfg.batch_size},
                       {"learning_rate", cfg.learning_rate},
                       {"lr_decay", cfg.lr_decay},
                       {"beta1", cfg.beta1},
                       {"beta2", cfg.beta2},
                       {"adam_epsilon", cfg.adam_epsilon}};
    const std::string text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    binio::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        for (Eigen::Index i = 0; i < model.input_size(); ++i)
            binio::write_le<double>(out, model.hidden_weights(h, i));
    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        binio::write_le<double>(out, model.hidden_bias(h));
    for (Eigen::Index h = 0; h < model.hidden_size(); ++h)
        binio::write_le<double>(out, model.output_weights(h));
    binio::write_le<double>(out, model.output_bias);
    if (!out) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    const auto len = binio::read_le<std::uint32_t>(in);
    std::string text(len, '\0');
    in.read(text.data(), len);
    if (!in) throw IoError("checkpoint truncated: " + path);

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad checkpoint header: " + std::string(e.what()));
    }
    if (header.value("format", "") != "tschsleep-mlp")
        throw IoError("not a model checkpoint: " + path);

    Checkpoint ck;
    const auto layers = header.at("layers").get<std::vector<Eigen::Index>>();
    if (layers.size() != 3 || layers[2] != 1) throw IoError("unsupported layer shape");
    const Eigen::Index input = layers[0], hidden = layers[1];
    ck.config.seed = header.value("seed", std::uint64_t{0});
    if (header.contains("train")) {
        const auto& t = header.at("train");
        ck.config.epochs = t.value("epochs", ck.config.epochs);
        ck.config.batch_size = t.value("batch_size", ck.config.batch_size);
        ck.config.learning_rate = t.value("learning_rate", ck.config.learning_rate);
        ck.config.lr_decay = t.value("lr_decay", ck.config.lr_decay);
        ck.config.beta1 = t.value("beta1", ck.config.beta1);
        ck.config.beta2 = t.value("beta2", ck.config.beta2);
        ck.config.adam_epsilon = t.value("adam_epsilon", ck.config.adam_epsilon);
    }
    ck.config.hidden = static_cast<int>(hidden);

    ck.model.hidden_weights.resize(hidden, input);
    ck.model.hidden_bias.resize(hidden);
    ck.model.output_weights.resize(hidden);
    for (Eigen::Index h = 0; h < hidden; ++h)
        for (Eigen::Index i = 0; i < input; ++i)
            ck.model.hidden_weights(h, i) = binio::read_le<double>(in);
    for (Eigen::Index h = 0; h < hidden; ++h) ck.model.hidden_bias(h) = binio::read_le<double>(in);
    for (Eigen::Index h = 0; h < hidden; ++h)
        ck.model.output_weights(h) = binio::read_le<double>(in);
    ck.model.output_bias = binio::read_le<double>(in);
    return ck;
}

} // namespace tsch
