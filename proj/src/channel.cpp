#include "wpt/channel.hpp"

#include "wpt/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpt {

namespace {
constexpr std::uint64_t kLosStream = 0x4c4f53;
constexpr std::uint64_t kScatterStream = 0x4e4c4f53;
}  // namespace

void ChannelConfig::validate() const {
  if (n_t < 1) throw std::invalid_argument("ChannelConfig: n_t must be at least 1");
  if (!(d1 > 0.0 && d2 > 0.0)) throw std::invalid_argument("ChannelConfig: distances must be positive");
  if (!(rician_k >= 0.0)) throw std::invalid_argument("ChannelConfig: Rician factor must be nonnegative");
}

double path_loss_linear(double d) {
  if (!(d > 0.0)) throw std::domain_error("path_loss_linear: distance must be positive");
  return std::pow(10.0, -(35.3 + 37.6 * std::log10(d)) / 10.0);
}

Eigen::RowVectorXcd draw_channel(const ChannelConfig& config, std::uint64_t realization, int m) {
  config.validate();
  const Eigen::Index n = config.n_t;
  const double amplitude = std::sqrt(path_loss_linear(config.distance(m)));

  double los_weight = 1.0;
  double scatter_weight = 0.0;
  if (!std::isinf(config.rician_k)) {
    los_weight = std::sqrt(config.rician_k / (config.rician_k + 1.0));
    scatter_weight = std::sqrt(1.0 / (config.rician_k + 1.0));
  }

  KeyedStream angle_stream(mix_seed(config.seed, kLosStream, static_cast<std::uint64_t>(m)));
  const double theta = std::numbers::pi * (angle_stream.uniform() - 0.5);
  const double phase_step = std::numbers::pi * std::sin(theta);

  Eigen::RowVectorXcd g(n);
  for (Eigen::Index k = 0; k < n; ++k) g[k] = los_weight * std::polar(1.0, phase_step * static_cast<double>(k));
  if (scatter_weight > 0.0) {
    KeyedStream scatter(mix_seed(config.seed, kScatterStream, realization, static_cast<std::uint64_t>(m)));
    g += scatter_weight * scatter.complex_normal_vector(n).transpose();
  }
  return amplitude * g;
}

ChannelPair draw_channel_pair(const ChannelConfig& config, std::uint64_t realization) {
  return {draw_channel(config, realization, 0), draw_channel(config, realization, 1)};
}

}  // namespace wpt
