#include "wpt/cli.hpp"

#include "wpt/config.hpp"
#include "wpt/format.hpp"
#include "wpt/outputs.hpp"
#include "wpt/region.hpp"
#include "wpt/rng.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#ifndef WPT_VERSION
#define WPT_VERSION "unknown"
#endif

namespace wpt::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string profile = "paper";
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> px;
  std::optional<int> nt;
  std::optional<int> threads;
  std::optional<int> realizations;
  // per-subcommand
  std::optional<double> xi1;
  std::optional<std::uint64_t> realization;
  std::optional<std::string> channels_path;
  std::optional<double> p_min;
  std::optional<double> p_max;
  std::optional<int> points;
};

// Settings a manifest carries besides the config itself.
struct RunOptions {
  double xi1 = 0.5;
  std::uint64_t realization = 0;
  std::string channels_path;
  double p_min = 0.0;
  double p_max = 50e-6;
  int points = 101;
};

bool looks_like_json(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

json run_options_json(const RunOptions& o) {
  return {{"xi1", o.xi1},           {"realization", o.realization}, {"channels", o.channels_path},
          {"p_min", o.p_min},       {"p_max", o.p_max},             {"points", o.points}};
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const ExperimentConfig& c,
                    const RunOptions& o, const std::vector<std::string>& files) {
  json m = {{"tool", "wptregion"},
            {"version", WPT_VERSION},
            {"subcommand", subcommand},
            {"seed", c.seed},
            {"profile", profile_name(c.profile)},
            {"config_ini", to_ini(c)},
            {"options", run_options_json(o)},
            {"outputs", files}};
  write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");
}

ChannelPair load_channels(const ExperimentConfig& c, const RunOptions& o) {
  if (!o.channels_path.empty())
    return channels_from_file(json::parse(read_text_file(o.channels_path)), o.realization);
  ChannelConfig cc = c.channel;
  cc.seed = c.seed;
  return draw_channel_pair(cc, o.realization);
}

int cmd_eh_curve(const ExperimentConfig& c, const RunOptions& o, const fs::path& dir) {
  if (!(o.p_min >= 0.0) || !(o.p_max > o.p_min) || o.points < 2)
    throw std::invalid_argument("eh-curve needs 0 <= p-min < p-max and at least 2 points");
  std::string csv = "p_watts,varphi_watts,phi_watts,phi_prime\n";
  for (int k = 0; k < o.points; ++k) {
    const double p = k == o.points - 1 ? o.p_max
                                        : o.p_min + (o.p_max - o.p_min) * k / (o.points - 1);
    csv += format_double(p) + "," + format_double(varphi(p, c.rectenna)) + "," +
           format_double(phi(p, c.rectenna)) + "," + format_double(phi_prime(p, c.rectenna)) + "\n";
  }
  write_text_file((dir / "eh_curve.csv").string(), csv);
  write_manifest(dir, "eh-curve", c, o, {"eh_curve.csv"});
  return kOk;
}

int cmd_phi_curve(const ExperimentConfig& c, const RunOptions& o, const fs::path& dir,
                  std::ostream& err) {
  const ChannelPair ch = load_channels(c, o);
  const Weights w = Weights::from_xi1(o.xi1);
  const PhiCurve curve = build_phi_curve(ch, w, c.rectenna, c.grid,
                                         cell_seed(c.seed, o.realization, o.xi1), c.sca());
  if (!curve.saturated) err << "warning: phi curve did not reach saturation\n";
  std::string csv = "nu_watts,phi_watts,relaxed_watts,region,eig_ratio,sca_iterations\n";
  for (const PhiPoint& p : curve.points) {
    csv += format_double(p.nu) + "," + format_double(p.value) + "," + format_double(p.relaxed_value) +
           ",\"" + p.region.label() + "\"," + format_double(p.eig_ratio) + "," +
           std::to_string(p.sca_iterations) + "\n";
  }
  json j = phi_curve_to_json(curve);
  j["xi1"] = o.xi1;
  j["realization"] = o.realization;
  j["channels"] = channel_pair_to_json(ch);
  write_text_file((dir / "phi_curve.csv").string(), csv);
  write_text_file((dir / "phi_curve.json").string(), j.dump(2) + "\n");
  write_manifest(dir, "phi-curve", c, o, {"phi_curve.csv", "phi_curve.json"});
  return kOk;
}

int cmd_point(const ExperimentConfig& c, const RunOptions& o, const fs::path& dir, std::ostream& out,
              std::ostream& err) {
  const ChannelPair ch = load_channels(c, o);
  const Weights w = Weights::from_xi1(o.xi1);
  const std::uint64_t s = cell_seed(c.seed, o.realization, o.xi1);
  const PhiCurve curve = build_phi_curve(ch, w, c.rectenna, c.grid, s, c.sca());
  if (!curve.saturated) err << "warning: phi curve did not reach saturation\n";
  const RegionPoint pts[] = {
      proposed_point(curve, ch, w, c.rectenna, c.p_x),
      baseline_linear_eh(ch, w, c.rectenna, c.p_x),
      baseline_single_beam(curve, ch, w, c.rectenna, c.p_x, mix_seed(s, 0xb2), c.sca())};
  json schemes = json::object();
  for (std::size_t k = 0; k < std::size(kAllSchemes); ++k)
    schemes[scheme_name(kAllSchemes[k])] = region_point_to_json(pts[k]);
  const json j = {{"xi1", o.xi1},
                  {"realization", o.realization},
                  {"p_x", c.p_x},
                  {"channels", channel_pair_to_json(ch)},
                  {"curve_saturated", curve.saturated},
                  {"schemes", schemes}};
  const std::string text = j.dump(2) + "\n";
  out << text;
  write_text_file((dir / "point.json").string(), text);
  write_manifest(dir, "point", c, o, {"point.json"});
  err << "point xi1=" << o.xi1 << " realization=" << o.realization << " proposed regions "
      << pts[0].policy.region1.label() << "/" << pts[0].policy.region2.label()
      << " beta=" << pts[0].policy.beta << "\n";
  return kOk;
}

int cmd_region(const ExperimentConfig& c, const RunOptions& o, const fs::path& dir, std::ostream& err) {
  SweepConfig sc = c.sweep();
  sc.log = &err;
  SweepResult r;
  if (sc.weights.empty()) {
    r.p_x = sc.p_x;
    r.rows.emplace_back();
  } else {
    r = sweep_region(sc);
  }
  int failures = 0;
  for (const CellResult& cell : r.cells) failures += cell.ok ? 0 : 1;
  write_text_file((dir / "region.csv").string(), region_csv(r.rows.at(0)));
  write_text_file((dir / "policies.json").string(), policies_json(r, 0).dump(2) + "\n");
  write_manifest(dir, "region", c, o, {"region.csv", "policies.json"});
  if (failures > 0)
    err << "warning: " << failures << " of " << r.cells.size()
        << " cells failed and were excluded from the averages\n";
  if (!r.cells.empty() && failures == static_cast<int>(r.cells.size())) {
    err << "error: every cell failed\n";
    return kRuntimeError;
  }
  return kOk;
}

int cmd_channels(const ExperimentConfig& c, const RunOptions& o, const fs::path& dir) {
  ChannelConfig cc = c.channel;
  cc.seed = c.seed;
  write_text_file((dir / "channels.json").string(), channels_file(cc, c.n_realizations).dump(2) + "\n");
  write_manifest(dir, "channels", c, o, {"channels.json"});
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harvested-power region of a two-node MISO wireless power transfer system", "wptregion"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(WPT_VERSION));

  Options opt;
  app.add_option("--config", opt.config_path, "INI config file, or a manifest.json to replay");
  app.add_option("--profile", opt.profile, "default parameter set")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--px", opt.px, "transmit power budget in watts")->check(CLI::PositiveNumber);
  app.add_option("--nt", opt.nt, "number of transmit antennas")->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--realizations", opt.realizations, "number of channel realizations")
      ->check(CLI::PositiveNumber);

  auto* eh = app.add_subcommand("eh-curve", "sample the rectenna transfer function");
  eh->add_option("--p-min", opt.p_min, "first input power, watts");
  eh->add_option("--p-max", opt.p_max, "last input power, watts");
  eh->add_option("--points", opt.points, "number of samples");

  auto* pc = app.add_subcommand("phi-curve", "Phi over the power grid for one channel realization");
  auto* pt = app.add_subcommand("point", "solve one (weights, realization) cell");
  for (auto* sub : {pc, pt}) {
    sub->add_option("--xi1", opt.xi1, "weight of node 1")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--realization", opt.realization, "channel realization index");
    sub->add_option("--channels", opt.channels_path, "read channels from a channels.json");
  }
  app.add_subcommand("region", "sweep weights and realizations, write region.csv");
  app.add_subcommand("channels", "dump generated channels");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << WPT_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  RunOptions ro;
  try {
    config = ExperimentConfig::defaults(profile_from_name(opt.profile));
    if (!opt.config_path.empty()) {
      const std::string text = read_text_file(opt.config_path);
      if (looks_like_json(text)) {
        const json m = json::parse(text);
        apply_ini(config, m.at("config_ini").get<std::string>());
        if (m.contains("options")) {
          const json& o = m["options"];
          ro.xi1 = o.value("xi1", ro.xi1);
          ro.realization = o.value("realization", ro.realization);
          ro.channels_path = o.value("channels", ro.channels_path);
          ro.p_min = o.value("p_min", ro.p_min);
          ro.p_max = o.value("p_max", ro.p_max);
          ro.points = o.value("points", ro.points);
        }
      } else {
        apply_ini(config, text);
      }
    }
    if (opt.out) config.output_dir = *opt.out;
    if (opt.seed) config.seed = *opt.seed;
    if (opt.px) config.p_x = *opt.px;
    if (opt.nt) config.channel.n_t = *opt.nt;
    if (opt.threads) config.threads = *opt.threads;
    if (opt.realizations) config.n_realizations = *opt.realizations;
    config.channel.seed = config.seed;
    if (opt.xi1) ro.xi1 = *opt.xi1;
    if (opt.realization) ro.realization = *opt.realization;
    if (opt.channels_path) ro.channels_path = *opt.channels_path;
    if (opt.p_min) ro.p_min = *opt.p_min;
    if (opt.p_max) ro.p_max = *opt.p_max;
    if (opt.points) ro.points = *opt.points;
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    if (sub == "eh-curve") return cmd_eh_curve(config, ro, dir);
    if (sub == "phi-curve") return cmd_phi_curve(config, ro, dir, err);
    if (sub == "point") return cmd_point(config, ro, dir, out, err);
    if (sub == "region") return cmd_region(config, ro, dir, err);
    if (sub == "channels") return cmd_channels(config, ro, dir);
  } catch (const std::out_of_range& e) {
    err << "error: out of range: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  err << "error: unknown subcommand " << sub << "\n";
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace wpt::cli
