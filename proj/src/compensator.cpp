#include "rovctl/compensator.hpp"

#include <random>
#include <string>

#include "rovctl/errors.hpp"

namespace rovctl {

namespace {

Eigen::VectorXd augmented_input(const Eigen::VectorXd& theta, const NetworkWeights& w) {
  if (theta.size() != w.input_dim())
    throw InvalidParameter("network input has length " + std::to_string(theta.size()) +
                           ", expected " + std::to_string(w.input_dim()));
  Eigen::VectorXd bar(theta.size() + 1);
  bar.head(theta.size()) = theta;
  bar[theta.size()] = w.use_bias ? 1.0 : 0.0;
  return bar;
}

// Portable uniform draw in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void NetworkConfig::validate() const {
  if (input_dim < 1) throw InvalidParameter("network input_dim must be >= 1");
  if (hidden_dim < 1) throw InvalidParameter("network hidden_dim must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw InvalidParameter("learning_rate must be positive");
  if (!(start_time >= 0.0)) throw InvalidParameter("start_time must be >= 0");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
    throw InvalidParameter("init_scale must be >= 0");
}

NetworkWeights NetworkWeights::zeros(int input_dim, int hidden_dim, bool use_bias) {
  if (input_dim < 1 || hidden_dim < 1) throw InvalidParameter("network dimensions must be >= 1");
  NetworkWeights w;
  w.V = Eigen::MatrixXd::Zero(input_dim + 1, hidden_dim);
  w.W = Eigen::VectorXd::Zero(hidden_dim + 1);
  w.use_bias = use_bias;
  return w;
}

NetworkWeights NetworkWeights::initialize(const NetworkConfig& cfg) {
  cfg.validate();
  NetworkWeights w = zeros(cfg.input_dim, cfg.hidden_dim, cfg.use_bias);
  std::mt19937_64 rng(cfg.seed);
  auto draw = [&] { return cfg.init_scale * (2.0 * unit_uniform(rng) - 1.0); };
  for (Eigen::Index i = 0; i < w.V.rows(); ++i)
    for (Eigen::Index j = 0; j < w.V.cols(); ++j) w.V(i, j) = draw();
  for (Eigen::Index j = 0; j < w.W.size(); ++j) w.W[j] = draw();
  return w;
}

bool NetworkWeights::all_finite() const { return V.allFinite() && W.allFinite(); }

std::vector<double> NetworkWeights::flatten() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(V.size() + W.size()));
  for (Eigen::Index i = 0; i < V.rows(); ++i)
    for (Eigen::Index j = 0; j < V.cols(); ++j) out.push_back(V(i, j));
  for (Eigen::Index j = 0; j < W.size(); ++j) out.push_back(W[j]);
  return out;
}

Eigen::VectorXd hidden_activations(const Eigen::VectorXd& theta, const NetworkWeights& w) {
  const Eigen::VectorXd bar = augmented_input(theta, w);
  const Eigen::VectorXd z = w.V.transpose() * bar;
  Eigen::VectorXd a(z.size() + 1);
  for (Eigen::Index j = 0; j < z.size(); ++j) a[j] = sigmoid(z[j]);
  a[z.size()] = w.use_bias ? 1.0 : 0.0;
  return a;
}

double forward(const Eigen::VectorXd& theta, const NetworkWeights& w) {
  return w.W.dot(hidden_activations(theta, w));
}

WeightGradient gradient(const Eigen::VectorXd& theta, const NetworkWeights& w) {
  const Eigen::VectorXd bar = augmented_input(theta, w);
  const Eigen::VectorXd a = hidden_activations(theta, w);
  const Eigen::Index h = w.hidden_dim();
  Eigen::VectorXd back(h);
  for (Eigen::Index j = 0; j < h; ++j) back[j] = w.W[j] * a[j] * (1.0 - a[j]);
  return {bar * back.transpose(), a};
}

UpdateResult update(const Eigen::VectorXd& theta, double error, const NetworkWeights& w,
                    const NetworkConfig& cfg) {
  if (!std::isfinite(error) || !theta.allFinite()) return {w, false};
  const WeightGradient g = gradient(theta, w);
  NetworkWeights next = w;
  const double step = cfg.learning_rate * error;
  next.W += step * g.dW;
  next.V += step * g.dV;
  if (!next.all_finite()) return {w, false};
  return {std::move(next), true};
}

double gated_estimate(double t, const Eigen::VectorXd& theta, const NetworkWeights& w,
                      const NetworkConfig& cfg) {
  if (t < cfg.start_time) return 0.0;
  return forward(theta, w);
}

Compensator::Compensator(NetworkConfig cfg)
    : cfg_(cfg), weights_(NetworkWeights::initialize(cfg_)) {}

double Compensator::estimate(double t, const Eigen::VectorXd& theta) const {
  return gated_estimate(t, theta, weights_, cfg_);
}

void Compensator::train(double t, const Eigen::VectorXd& theta, double error) {
  if (!active(t)) return;
  UpdateResult r = update(theta, error, weights_, cfg_);
  if (!r.accepted) {
    ++faults_;
    return;
  }
  weights_ = std::move(r.weights);
}

}  // namespace rovctl
