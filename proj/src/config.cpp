#include "wpt/config.hpp"

#include "wpt/format.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wpt {

Profile profile_from_name(const std::string& name) {
  if (name == "paper") return Profile::paper;
  if (name == "desk") return Profile::desk;
  throw std::invalid_argument("unknown profile: " + name + " (expected paper or desk)");
}

std::string profile_name(Profile profile) { return profile == Profile::paper ? "paper" : "desk"; }

std::vector<double> WeightGrid::values() const {
  if (explicit_list) return list;
  if (!(step > 0.0)) throw std::invalid_argument("weights.step must be positive");
  if (stop < start) throw std::invalid_argument("weights.stop must not be below weights.start");
  const long n = std::lround(std::floor((stop - start) / step + 1e-9));
  std::vector<double> v;
  for (long k = 0; k <= n; ++k) {
    // Rounding to 12 decimals keeps 0.15 from printing as 0.15000000000000002.
    const double x = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
    v.push_back(std::min(x, stop));
  }
  return v;
}

ExperimentConfig ExperimentConfig::defaults(Profile profile) {
  ExperimentConfig c;
  c.profile = profile;
  if (profile == Profile::desk) {
    c.grid.delta_rho = 0.25;
    c.grid.n_rho = 200;
    c.n_realizations = 10;
    c.weights.step = 0.25;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(rectenna.a, "rectenna.a");
  positive(rectenna.b, "rectenna.b");
  positive(rectenna.i_s, "rectenna.i_s");
  positive(rectenna.r_l, "rectenna.r_l");
  positive(rectenna.p_sat, "rectenna.p_sat");
  positive(channel.d1, "channel.d1");
  positive(channel.d2, "channel.d2");
  if (!(channel.rician_k >= 0.0)) throw std::invalid_argument("channel.rician_k must be non-negative");
  if (channel.n_t < 1) throw std::invalid_argument("channel.n_t must be at least 1");
  positive(p_x, "experiment.p_x");
  positive(grid.delta_rho, "grid.delta_rho");
  if (grid.n_rho < 1) throw std::invalid_argument("grid.n_rho must be at least 1");
  positive(sca_epsilon, "sca.epsilon");
  if (sca_max_iterations < 1) throw std::invalid_argument("sca.max_iterations must be at least 1");
  if (n_realizations < 1) throw std::invalid_argument("experiment.n_realizations must be at least 1");
  if (threads < 0) throw std::invalid_argument("experiment.threads must be non-negative");
  for (double w : weights.values())
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weights must lie in [0, 1]");
}

ScaOptions ExperimentConfig::sca() const {
  ScaOptions o;
  o.epsilon = sca_epsilon;
  o.max_iterations = sca_max_iterations;
  return o;
}

SweepConfig ExperimentConfig::sweep() const {
  SweepConfig s;
  s.rectenna = rectenna;
  s.channel = channel;
  s.channel.seed = seed;
  s.grid = grid;
  s.sca = sca();
  s.weights = weights.values();
  s.p_x = {p_x};
  s.n_realizations = n_realizations;
  s.seed = seed;
  s.threads = threads;
  return s;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  std::string t = v;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad seed for " + key + ": '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  return out;
}

}  // namespace

void apply_ini(ExperimentConfig& c, const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }

  if (auto prof = tree.get_child_optional("profile")) {
    for (const auto& [key, node] : *prof) {
      if (key != "name") throw std::invalid_argument("unknown key profile." + key);
      c = ExperimentConfig::defaults(profile_from_name(node.data()));
    }
  }

  bool saw_list = false, saw_range = false;
  for (const auto& [section, body] : tree) {
    if (section == "profile") continue;
    if (body.empty() && !body.data().empty())
      throw std::invalid_argument("key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string k = section + "." + key;
      const std::string& v = node.data();
      if (section == "rectenna") {
        if (key == "a") c.rectenna.a = parse_double(k, v);
        else if (key == "b") c.rectenna.b = parse_double(k, v);
        else if (key == "i_s") c.rectenna.i_s = parse_double(k, v);
        else if (key == "r_l") c.rectenna.r_l = parse_double(k, v);
        else if (key == "p_sat") c.rectenna.p_sat = parse_double(k, v);
        else throw std::invalid_argument("unknown key " + k);
      } else if (section == "channel") {
        if (key == "n_t") c.channel.n_t = static_cast<int>(parse_int(k, v));
        else if (key == "d1") c.channel.d1 = parse_double(k, v);
        else if (key == "d2") c.channel.d2 = parse_double(k, v);
        else if (key == "rician_k") c.channel.rician_k = parse_double(k, v);
        else throw std::invalid_argument("unknown key " + k);
      } else if (section == "experiment") {
        if (key == "p_x") c.p_x = parse_double(k, v);
        else if (key == "n_realizations") c.n_realizations = static_cast<int>(parse_int(k, v));
        else if (key == "seed") c.seed = parse_u64(k, v);
        else if (key == "output_dir") c.output_dir = v;
        else if (key == "threads") c.threads = static_cast<int>(parse_int(k, v));
        else throw std::invalid_argument("unknown key " + k);
      } else if (section == "grid") {
        if (key == "delta_rho") c.grid.delta_rho = parse_double(k, v);
        else if (key == "n_rho") c.grid.n_rho = static_cast<int>(parse_int(k, v));
        else throw std::invalid_argument("unknown key " + k);
      } else if (section == "sca") {
        if (key == "epsilon") c.sca_epsilon = parse_double(k, v);
        else if (key == "max_iterations") c.sca_max_iterations = static_cast<int>(parse_int(k, v));
        else throw std::invalid_argument("unknown key " + k);
      } else if (section == "weights") {
        if (key == "list") {
          c.weights.list = parse_list(k, v);
          c.weights.explicit_list = true;
          saw_list = true;
        } else if (key == "start" || key == "stop" || key == "step") {
          const double x = parse_double(k, v);
          (key == "start" ? c.weights.start : key == "stop" ? c.weights.stop : c.weights.step) = x;
          c.weights.explicit_list = false;
          saw_range = true;
        } else {
          throw std::invalid_argument("unknown key " + k);
        }
      } else {
        throw std::invalid_argument("unknown section [" + section + "]");
      }
    }
  }
  if (saw_list && saw_range)
    throw std::invalid_argument("weights: give either list or start/stop/step, not both");
  c.channel.seed = c.seed;
}

ExperimentConfig load_config_file(const std::string& path, Profile profile) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = ExperimentConfig::defaults(profile);
  apply_ini(c, ss.str());
  return c;
}

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[profile]\nname = " << profile_name(c.profile) << "\n\n";
  o << "[rectenna]\n"
    << "a = " << format_double(c.rectenna.a) << "\n"
    << "b = " << format_double(c.rectenna.b) << "\n"
    << "i_s = " << format_double(c.rectenna.i_s) << "\n"
    << "r_l = " << format_double(c.rectenna.r_l) << "\n"
    << "p_sat = " << format_double(c.rectenna.p_sat) << "\n\n";
  o << "[channel]\n"
    << "n_t = " << c.channel.n_t << "\n"
    << "d1 = " << format_double(c.channel.d1) << "\n"
    << "d2 = " << format_double(c.channel.d2) << "\n"
    << "rician_k = " << format_double(c.channel.rician_k) << "\n\n";
  o << "[experiment]\n"
    << "p_x = " << format_double(c.p_x) << "\n"
    << "n_realizations = " << c.n_realizations << "\n"
    << "seed = " << c.seed << "\n"
    << "output_dir = " << c.output_dir << "\n"
    << "threads = " << c.threads << "\n\n";
  o << "[grid]\n"
    << "delta_rho = " << format_double(c.grid.delta_rho) << "\n"
    << "n_rho = " << c.grid.n_rho << "\n\n";
  o << "[sca]\n"
    << "epsilon = " << format_double(c.sca_epsilon) << "\n"
    << "max_iterations = " << c.sca_max_iterations << "\n\n";
  o << "[weights]\n";
  if (c.weights.explicit_list) {
    o << "list = ";
    for (std::size_t i = 0; i < c.weights.list.size(); ++i)
      o << (i ? ", " : "") << format_double(c.weights.list[i]);
    o << "\n";
  } else {
    o << "start = " << format_double(c.weights.start) << "\n"
      << "stop = " << format_double(c.weights.stop) << "\n"
      << "step = " << format_double(c.weights.step) << "\n";
  }
  return o.str();
}

}  // namespace wpt
