#include "exsets/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "exsets/error.hpp"

namespace exsets::io {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

Json to_json(const ForbiddenFamily& family) {
  Json j;
  j["alphabet_size"] = family.alphabet_size();
  Json words = Json::array();
  for (const auto& w : family.words()) words.push_back(w.str());
  j["words"] = std::move(words);
  return j;
}

ForbiddenFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alphabet_size") || !j.contains("words")) {
    throw Error("family record needs alphabet_size and words");
  }
  std::vector<Word> words;
  for (const auto& w : j.at("words")) words.push_back(Word::parse(w.get<std::string>()));
  return ForbiddenFamily(j.at("alphabet_size").get<int>(), std::move(words));
}

Json to_json(const LocallyConstantPotential& phi) {
  Json j;
  j["alphabet_size"] = phi.alphabet_size();
  j["depth"] = phi.depth();
  Json values = Json::object();
  for (const auto& [block, v] : phi.table()) values[block.str()] = real(v);
  j["values"] = std::move(values);
  return j;
}

LocallyConstantPotential potential_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alphabet_size") || !j.contains("depth") || !j.contains("values")) {
    throw Error("potential record needs alphabet_size, depth and values");
  }
  std::map<Word, double> table;
  for (const auto& [key, v] : j.at("values").items()) table.emplace(Word::parse(key), v.get<double>());
  return LocallyConstantPotential::from_table(j.at("alphabet_size").get<int>(), j.at("depth").get<int>(), table);
}

Json to_json(const DimEstimate& est) {
  Json j;
  j["value"] = real(est.value);
  j["stderr"] = real(est.std_error);
  j["residual"] = real(est.residual);
  Json scales = Json::array();
  for (double s : est.scales) scales.push_back(s);
  j["scales_used"] = std::move(scales);
  j["counts"] = est.counts;
  return j;
}

Json to_json(const HyperbolicSpectrum& spectrum) {
  Json j;
  j["h"] = real(spectrum.entropy);
  j["chi_s"] = real(spectrum.chi_s);
  j["chi_u"] = real(spectrum.chi_u);
  return j;
}

Json to_json(const BoundCheck& bound) {
  Json j;
  j["name"] = bound.name;
  j["formula"] = bound.formula;
  j["bound"] = real(bound.bound);
  j["estimate"] = real(bound.estimate);
  j["tolerance"] = real(bound.tolerance);
  j["margin"] = real(bound.margin);
  j["verdict"] = to_string(bound.verdict);
  j["hypothesis"] = bound.hypothesis;
  Json inputs = Json::object();
  for (const auto& [k, v] : bound.inputs) inputs[k] = real(v);
  j["inputs"] = std::move(inputs);
  return j;
}

Json to_json(const DimensionReport& r) {
  Json j;
  j["model"] = r.model_id;
  j["target"] = r.target;
  j["measure"] = r.measure;
  j["depth"] = r.depth;
  Json family = Json::array();
  for (const auto& w : r.family) family.push_back(w.str());
  j["family"] = std::move(family);
  j["survivor"] = {{"states", r.survivor_states}, {"edges", r.survivor_edges}, {"empty", r.survivor_empty}};
  j["ambient_entropy"] = real(r.ambient_entropy);
  j["survivor_entropy"] = real(r.survivor_entropy);
  j["d_u_ambient"] = real(r.d_u_ambient);
  j["d_u_survivor"] = real(r.d_u_survivor);
  j["d_s_ambient"] = real(r.d_s_ambient);
  j["dimension_estimate"] = real(r.dimension_estimate);
  j["spectrum"] = to_json(r.spectrum);
  j["dynamical_dimension"] = real(r.dynamical_dimension);
  if (r.box) j["box_dimension"] = to_json(*r.box);
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(to_json(b));
  j["bounds"] = std::move(bounds);
  j["diagnostics"] = r.diagnostics;
  j["phase_convention"] = r.phase_convention;
  return j;
}

std::string reports_to_csv(const std::vector<DimensionReport>& reports) {
  std::ostringstream os;
  os << "depth,entropy,d_u,bound_name,bound,margin\n";
  for (const auto& r : reports) {
    for (const auto& b : r.bounds) {
      os << r.depth << ',' << format_real(r.survivor_entropy) << ',' << format_real(r.d_u_survivor) << ','
         << b.name << ',' << format_real(b.bound) << ',' << format_real(b.margin) << '\n';
    }
  }
  return os.str();
}

void write_point_cloud(std::ostream& os, const PointCloud& cloud) {
  os << "# dimension=" << cloud.dimension << '\n';
  for (const auto& [k, v] : cloud.metadata) os << "# " << k << '=' << v << '\n';
  os << (cloud.dimension == 1 ? "x\n" : "x,y\n");
  for (const auto& p : cloud.points) {
    os << format_real(p[0]);
    if (cloud.dimension == 2) os << ',' << format_real(p[1]);
    os << '\n';
  }
}

PointCloud read_point_cloud(std::istream& is) {
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  auto parse = [&](std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw Error("point cloud line " + std::to_string(lineno) + ": bad number '" + std::string(text) + "'");
    }
    if (v < 0.0 || v > 1.0) throw Error("point cloud line " + std::to_string(lineno) + ": coordinate outside [0, 1]");
    return v;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const auto value = line.substr(eq + 1);
      if (key == "dimension") {
        cloud.dimension = std::stoi(value);
      } else {
        cloud.metadata[key] = value;
      }
      continue;
    }
    if (!header) {
      header = true;
      if (line == "x,y" || line == "x") continue;
    }
    const auto comma = line.find(',');
    if (cloud.dimension == 1) {
      cloud.points.push_back({parse(line), 0.0});
    } else {
      if (comma == std::string::npos) throw Error("point cloud line " + std::to_string(lineno) + ": expected x,y");
      cloud.points.push_back({parse(std::string_view(line).substr(0, comma)),
                              parse(std::string_view(line).substr(comma + 1))});
    }
  }
  return cloud;
}

}  // namespace exsets::io
