#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace wpt {

// Raised when a caller breaks a documented precondition (non-Hermitian
// input, non-monotone curve, malformed weights).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Row channel vectors g1, g2 (amplitude gains, sqrt(W)-normalized), so
// |g_m w|^2 is the received power in watts for a beamformer w in sqrt(W).
struct ChannelPair {
  Eigen::RowVectorXcd g1;
  Eigen::RowVectorXcd g2;

  int n_t() const { return static_cast<int>(g1.size()); }
  const Eigen::RowVectorXcd& g(int m) const { return m == 0 ? g1 : g2; }
  void validate() const;
};

struct Weights {
  double xi1 = 0.5;
  double xi2 = 0.5;

  static Weights from_xi1(double xi1);
  double operator[](int m) const { return m == 0 ? xi1 : xi2; }
  void validate() const;
};

}  // namespace wpt
