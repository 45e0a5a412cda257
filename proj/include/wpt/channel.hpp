#pragma once

#include "wpt/types.hpp"

#include <cstdint>

namespace wpt {

struct ChannelConfig {
  int n_t = 1;
  double d1 = 10.0;        // meters
  double d2 = 25.0;        // meters
  double rician_k = 1.0;   // linear; +infinity gives a pure line-of-sight channel
  std::uint64_t seed = 1;

  double distance(int m) const { return m == 0 ? d1 : d2; }
  void validate() const;
};

// 10^(-(35.3 + 37.6 log10 d) / 10).
double path_loss_linear(double d);

// g_m = sqrt(PL(d_m)) (sqrt(K/(K+1)) a(theta_m) + sqrt(1/(K+1)) h), with a(theta)
// the half-wavelength ULA steering vector exp(j pi k sin theta) and h i.i.d.
// CN(0,1). theta_m depends on (seed, m) only; h on (seed, realization, m).
Eigen::RowVectorXcd draw_channel(const ChannelConfig& config, std::uint64_t realization, int m);
ChannelPair draw_channel_pair(const ChannelConfig& config, std::uint64_t realization);

}  // namespace wpt
