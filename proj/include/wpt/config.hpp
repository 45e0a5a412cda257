#pragma once

#include "wpt/channel.hpp"
#include "wpt/eh_model.hpp"
#include "wpt/region.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wpt {

enum class Profile { paper, desk };
Profile profile_from_name(const std::string& name);
std::string profile_name(Profile profile);

struct WeightGrid {
  // Either an explicit list or start/stop/step.
  std::vector<double> list;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;
  bool explicit_list = false;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  Profile profile = Profile::paper;
  RectennaParams rectenna;
  ChannelConfig channel;  // channel.seed mirrors seed
  double p_x = 5.0;
  GridSpec grid;
  double sca_epsilon = 1e-3;
  int sca_max_iterations = 100;
  WeightGrid weights;
  int n_realizations = 100;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;

  static ExperimentConfig defaults(Profile profile);
  void validate() const;  // throws std::invalid_argument
  SweepConfig sweep() const;
  ScaOptions sca() const;
};

// Overlays key = value settings from INI text onto config. Unknown sections
// or keys are errors. A [profile] name key, if present, is applied first.
void apply_ini(ExperimentConfig& config, const std::string& text);
ExperimentConfig load_config_file(const std::string& path, Profile profile);

// INI text that apply_ini reads back to the same configuration.
std::string to_ini(const ExperimentConfig& config);

}  // namespace wpt
