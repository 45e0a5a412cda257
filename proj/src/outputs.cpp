#include "wpt/outputs.hpp"

#include "wpt/format.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wpt {

json complex_vector_to_json(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back({v[k].real(), v[k].imag()});
  return a;
}

Eigen::VectorXcd complex_vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("complex vector must be an array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& e = j[k];
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("complex entry must be [re, im]");
    v[static_cast<Eigen::Index>(k)] = {e[0].get<double>(), e[1].get<double>()};
  }
  return v;
}

SaturationRegion region_from_label(const std::string& label) {
  if (label.size() != 5 || label[0] != '(' || label[2] != ',' || label[4] != ')' ||
      (label[1] != '0' && label[1] != '1') || (label[3] != '0' && label[3] != '1'))
    throw std::invalid_argument("bad region label: " + label);
  return {label[1] - '0', label[3] - '0'};
}

json policy_to_json(const TwoPointPolicy& p) {
  return {{"w1", complex_vector_to_json(p.w1)},
          {"w2", complex_vector_to_json(p.w2)},
          {"beta", p.beta},
          {"nu1", p.nu1},
          {"nu2", p.nu2},
          {"region1", p.region1.label()},
          {"region2", p.region2.label()},
          {"eig_ratio1", p.eig_ratio1},
          {"eig_ratio2", p.eig_ratio2}};
}

TwoPointPolicy policy_from_json(const json& j) {
  TwoPointPolicy p;
  p.w1 = complex_vector_from_json(j.at("w1"));
  p.w2 = complex_vector_from_json(j.at("w2"));
  p.beta = j.at("beta").get<double>();
  p.nu1 = j.at("nu1").get<double>();
  p.nu2 = j.at("nu2").get<double>();
  p.region1 = region_from_label(j.at("region1").get<std::string>());
  p.region2 = region_from_label(j.at("region2").get<std::string>());
  p.eig_ratio1 = j.at("eig_ratio1").get<double>();
  p.eig_ratio2 = j.at("eig_ratio2").get<double>();
  return p;
}

json region_point_to_json(const RegionPoint& r) {
  json j = policy_to_json(r.policy);
  j["xi1"] = r.xi1;
  j["e1"] = r.e1;
  j["e2"] = r.e2;
  return j;
}

json channel_pair_to_json(const ChannelPair& c) {
  return {{"g1", complex_vector_to_json(c.g1.transpose())},
          {"g2", complex_vector_to_json(c.g2.transpose())}};
}

ChannelPair channel_pair_from_json(const json& j) {
  ChannelPair c;
  c.g1 = complex_vector_from_json(j.at("g1")).transpose();
  c.g2 = complex_vector_from_json(j.at("g2")).transpose();
  c.validate();
  return c;
}

json channels_file(const ChannelConfig& config, int n_realizations) {
  json file;
  file["config"] = {{"n_t", config.n_t},
                    {"d1", config.d1},
                    {"d2", config.d2},
                    {"rician_k", format_double(config.rician_k)},
                    {"seed", config.seed}};
  json list = json::array();
  for (int r = 0; r < n_realizations; ++r) {
    json e = channel_pair_to_json(draw_channel_pair(config, static_cast<std::uint64_t>(r)));
    e["index"] = r;
    list.push_back(std::move(e));
  }
  file["realizations"] = std::move(list);
  return file;
}

ChannelPair channels_from_file(const json& file, std::uint64_t realization) {
  for (const json& e : file.at("realizations"))
    if (e.at("index").get<std::uint64_t>() == realization) return channel_pair_from_json(e);
  throw std::out_of_range("channel file has no realization " + std::to_string(realization));
}

std::string region_csv(std::vector<SweepRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    const std::string a = scheme_name(x.scheme), b = scheme_name(y.scheme);
    if (a != b) return a < b;
    return x.xi1 < y.xi1;
  });
  std::string out = std::string(kRegionCsvHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += scheme_name(r.scheme) + "," + format_double(r.xi1) + "," + format_double(r.e1) + "," +
           format_double(r.e2) + "," + std::to_string(r.n_ok) + "\n";
  }
  return out;
}

std::vector<SweepRow> parse_region_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRegionCsvHeader)
    throw std::invalid_argument("region.csv header mismatch: '" + line + "'");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw std::invalid_argument("region.csv row needs 5 fields: " + line);
    SweepRow r;
    r.scheme = scheme_from_name(f[0]);
    r.xi1 = std::stod(f[1]);
    r.e1 = std::stod(f[2]);
    r.e2 = std::stod(f[3]);
    r.n_ok = std::stoi(f[4]);
    rows.push_back(r);
  }
  return rows;
}

json policies_json(const SweepResult& result, std::size_t budget) {
  json cells = json::array();
  int failures = 0;
  for (const CellResult& c : result.cells) {
    json e = {{"xi1", c.xi1}, {"realization", c.realization}, {"ok", c.ok}};
    if (!c.ok) {
      e["error"] = c.error;
      ++failures;
    } else {
      e["curve_points"] = c.curve_points;
      e["curve_saturated"] = c.curve_saturated;
      json schemes = json::object();
      for (std::size_t s = 0; s < std::size(kAllSchemes); ++s)
        schemes[scheme_name(kAllSchemes[s])] = region_point_to_json(c.points.at(budget).at(s));
      e["schemes"] = std::move(schemes);
    }
    cells.push_back(std::move(e));
  }
  return {{"p_x", result.p_x.at(budget)}, {"failures", failures}, {"cells", std::move(cells)}};
}

json phi_curve_to_json(const PhiCurve& curve) {
  json pts = json::array();
  for (const PhiPoint& p : curve.points) {
    pts.push_back({{"nu", p.nu},
                   {"value", p.value},
                   {"relaxed_value", p.relaxed_value},
                   {"w", complex_vector_to_json(p.w)},
                   {"region", p.region.label()},
                   {"eig_ratio", p.eig_ratio},
                   {"sca_iterations", p.sca_iterations}});
  }
  return {{"saturated", curve.saturated},
          {"extended_points", curve.extended_points},
          {"repaired_points", curve.repaired_points},
          {"points", std::move(pts)}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wpt
