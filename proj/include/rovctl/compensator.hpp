#pragma once

// Three-layer feedforward network d_hat = W^T [sigma(V^T [theta; 1]); 1]
// with sigmoid hidden units and a linear output, trained online.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rovctl {

struct NetworkConfig {
  int input_dim = 3;
  int hidden_dim = 5;
  double learning_rate = 0.1;  // per update step
  double start_time = 0.0;     // s; output and training gated before this
  double init_scale = 0.1;     // uniform init half-range
  std::uint64_t seed = 1;
  bool use_bias = true;  // false: bias inputs are held at 0 (strict W^T sigma(V^T theta))

  /// Throws InvalidParameter on non-positive sizes or rate, negative start.
  void validate() const;
};

struct NetworkWeights {
  Eigen::MatrixXd V;  // (input_dim + 1) x hidden_dim, last row is the bias row
  Eigen::VectorXd W;  // hidden_dim + 1, last entry is the output bias
  bool use_bias = true;

  static NetworkWeights zeros(int input_dim, int hidden_dim, bool use_bias = true);
  /// Uniform in [-init_scale, init_scale] drawn from cfg.seed.
  static NetworkWeights initialize(const NetworkConfig& cfg);

  int input_dim() const noexcept { return static_cast<int>(V.rows()) - 1; }
  int hidden_dim() const noexcept { return static_cast<int>(V.cols()); }
  bool all_finite() const;

  /// V row-major followed by W.
  std::vector<double> flatten() const;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Augmented hidden activations [sigma(V^T theta_bar); bias].
Eigen::VectorXd hidden_activations(const Eigen::VectorXd& theta, const NetworkWeights& w);

/// d_hat. Throws InvalidParameter when theta has the wrong length.
double forward(const Eigen::VectorXd& theta, const NetworkWeights& w);

struct WeightGradient {
  Eigen::MatrixXd dV;
  Eigen::VectorXd dW;
};

/// Analytic d(d_hat)/dV and d(d_hat)/dW.
WeightGradient gradient(const Eigen::VectorXd& theta, const NetworkWeights& w);

struct UpdateResult {
  NetworkWeights weights;
  bool accepted = true;  // false: non-finite input or result, weights unchanged
};

/// One backpropagation step on J = 1/2 e^2 where `error` is the output error
/// e = target - d_hat (dJ/dd_hat = -e):
///   W <- W + eta e [sigma; 1],   V <- V + eta e theta_bar (W_hidden .* sigma')^T.
UpdateResult update(const Eigen::VectorXd& theta, double error, const NetworkWeights& w,
                    const NetworkConfig& cfg);

/// 0 before cfg.start_time, forward(theta, w) from start_time on (inclusive).
double gated_estimate(double t, const Eigen::VectorXd& theta, const NetworkWeights& w,
                      const NetworkConfig& cfg);

/// A network instance owned by one simulation run.
class Compensator {
 public:
  explicit Compensator(NetworkConfig cfg);

  double estimate(double t, const Eigen::VectorXd& theta) const;
  /// No-op before start_time. Rejected updates bump fault_count().
  void train(double t, const Eigen::VectorXd& theta, double error);

  bool active(double t) const noexcept { return t >= cfg_.start_time; }
  const NetworkWeights& weights() const noexcept { return weights_; }
  const NetworkConfig& config() const noexcept { return cfg_; }
  std::uint64_t fault_count() const noexcept { return faults_; }

 private:
  NetworkConfig cfg_;
  NetworkWeights weights_;
  std::uint64_t faults_ = 0;
};

}  // namespace rovctl
