#include "exsets/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <set>

#include "exsets/error.hpp"
#include "exsets/systems.hpp"

namespace exsets::config {

namespace {

namespace fs = std::filesystem;

class Reader {
 public:
  explicit Reader(fs::path file) : file_(std::move(file)) {}

  YAML::Node load() const {
    if (!fs::exists(file_)) throw ConfigError(file_.string(), 0, "file does not exist");
    try {
      auto root = YAML::LoadFile(file_.string());
      if (!root.IsMap()) throw ConfigError(file_.string(), line(root), "top level must be a mapping");
      return root;
    } catch (const YAML::ParserException& e) {
      throw ConfigError(file_.string(), static_cast<std::size_t>(e.mark.line + 1), e.msg);
    } catch (const YAML::BadFile&) {
      throw ConfigError(file_.string(), 0, "cannot read file");
    }
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    throw ConfigError(file_.string(), line(node), msg);
  }

  static std::size_t line(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.line < 0 ? 0 : static_cast<std::size_t>(mark.line + 1);
  }

  void keys(const YAML::Node& map, const std::set<std::string>& allowed) const {
    if (!map.IsMap()) fail(map, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  YAML::Node need(const YAML::Node& map, const std::string& key) const {
    const auto node = map[key];
    if (!node) fail(map, "missing required key '" + key + "'");
    return node;
  }

  double real(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a number");
    const auto text = node.Scalar();
    const auto slash = text.find('/');
    auto parse = [&](std::string_view part) {
      double v = 0.0;
      const auto* begin = part.data();
      const auto* end = part.data() + part.size();
      while (begin < end && *begin == ' ') ++begin;
      while (end > begin && end[-1] == ' ') --end;
      const auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc() || res.ptr != end) fail(node, "expected a number, got '" + text + "'");
      return v;
    };
    double v = 0.0;
    if (slash == std::string::npos) {
      v = parse(text);
    } else {
      const double den = parse(std::string_view(text).substr(slash + 1));
      if (den == 0.0) fail(node, "zero denominator in '" + text + "'");
      v = parse(std::string_view(text).substr(0, slash)) / den;
    }
    if (!std::isfinite(v)) fail(node, "number must be finite");
    return v;
  }

  long long integer(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected an integer");
    long long v = 0;
    const auto& text = node.Scalar();
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) fail(node, "expected an integer, got '" + text + "'");
    return v;
  }

  std::string string(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a string");
    return node.Scalar();
  }

  std::vector<double> reals(const YAML::Node& node) const {
    if (!node.IsSequence()) fail(node, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& v : node) out.push_back(real(v));
    return out;
  }

  std::array<double, 2> point(const YAML::Node& node) const {
    const auto v = reals(node);
    if (v.size() != 2) fail(node, "a point needs two coordinates");
    return {v[0], v[1]};
  }

  Word word(const YAML::Node& node) const {
    try {
      return Word::parse(string(node));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(node, e.what());
    }
  }

  fs::path relative(const YAML::Node& node) const {
    fs::path p = string(node);
    if (p.is_relative()) p = file_.parent_path() / p;
    if (!fs::exists(p)) fail(node, "referenced file '" + p.string() + "' does not exist");
    return p;
  }

  void version(const YAML::Node& root) const {
    const auto v = need(root, "schema_version");
    if (integer(v) != kSchemaVersion) fail(v, "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }

  const fs::path& file() const { return file_; }

 private:
  fs::path file_;
};

Tolerances read_tolerances(const Reader& rd, const YAML::Node& map) {
  rd.keys(map, {"schema_version", "thmA", "thmB", "thmC", "thmD", "thmE"});
  Tolerances t;
  t.thmA = rd.real(rd.need(map, "thmA"));
  t.thmB = rd.real(rd.need(map, "thmB"));
  t.thmC = rd.real(rd.need(map, "thmC"));
  t.thmD = rd.real(rd.need(map, "thmD"));
  t.thmE = rd.real(rd.need(map, "thmE"));
  for (double v : {t.thmA, t.thmB, t.thmC, t.thmD, t.thmE}) {
    if (v < 0.0) rd.fail(map, "tolerances must be nonnegative");
  }
  return t;
}

TargetSet read_target(const Reader& rd, const YAML::Node& node, const std::optional<HyperbolicModel>& model) {
  rd.keys(node, {"kind", "points", "words", "cylinders", "centres", "radius", "label"});
  TargetSet t;
  const auto kind_node = rd.need(node, "kind");
  const auto kind = rd.string(kind_node);
  if (node["label"]) t.label = rd.string(node["label"]);
  if (kind == "empty") {
    t.kind = TargetSet::Kind::empty;
  } else if (kind == "points") {
    t.kind = TargetSet::Kind::points;
    const auto pts = rd.need(node, "points");
    if (!pts.IsSequence() || pts.size() == 0) rd.fail(pts, "points must be a nonempty list");
    for (const auto& p : pts) t.points.push_back(rd.point(p));
  } else if (kind == "periodic") {
    t.kind = TargetSet::Kind::points;
    if (!model || !model->is_horseshoe()) rd.fail(kind_node, "periodic targets need a horseshoe model");
    const auto words = rd.need(node, "words");
    if (!words.IsSequence() || words.size() == 0) rd.fail(words, "words must be a nonempty list");
    for (const auto& w : words) {
      const auto word = rd.word(w);
      if (word.max_symbol() >= model->horseshoe().branches()) rd.fail(w, "symbol outside the model alphabet");
      t.points.push_back(periodic_point(model->horseshoe(), word));
    }
    std::string lab = "periodic";
    for (const auto& w : words) lab += " " + w.Scalar();
    t.label = node["label"] ? rd.string(node["label"]) : lab;
  } else if (kind == "cylinders") {
    t.kind = TargetSet::Kind::cylinders;
    const auto cyl = rd.need(node, "cylinders");
    if (!cyl.IsSequence() || cyl.size() == 0) rd.fail(cyl, "cylinders must be a nonempty list");
    for (const auto& w : cyl) t.cylinders.push_back(rd.word(w));
  } else if (kind == "ball") {
    t.kind = TargetSet::Kind::ball;
    const auto centres = rd.need(node, "centres");
    if (!centres.IsSequence() || centres.size() == 0) rd.fail(centres, "centres must be a nonempty list");
    for (const auto& p : centres) t.points.push_back(rd.point(p));
    const auto radius = rd.need(node, "radius");
    t.radius = rd.real(radius);
    if (t.radius < 0.0) rd.fail(radius, "radius must be nonnegative");
  } else {
    rd.fail(kind_node, "unknown target kind '" + kind + "' (expected empty, points, periodic, cylinders or ball)");
  }
  for (const auto& p : t.points) {
    if (p[0] < 0.0 || p[0] > 1.0 || p[1] < 0.0 || p[1] > 1.0) rd.fail(node, "target points must lie in the unit square");
  }
  return t;
}

MeasureSpec read_measure(const Reader& rd, const YAML::Node& node) {
  rd.keys(node, {"kind", "weights", "block", "rows"});
  MeasureSpec m;
  const auto kind_node = rd.need(node, "kind");
  m.kind = rd.string(kind_node);
  if (m.kind == "bernoulli") {
    m.weights = rd.reals(rd.need(node, "weights"));
  } else if (m.kind == "markov") {
    m.block = node["block"] ? static_cast<int>(rd.integer(node["block"])) : 1;
    const auto rows = rd.need(node, "rows");
    if (!rows.IsSequence()) rd.fail(rows, "rows must be a list of lists");
    for (const auto& r : rows) m.rows.push_back(rd.reals(r));
  } else if (m.kind != "parry" && m.kind != "haar") {
    rd.fail(kind_node, "unknown measure kind '" + m.kind + "' (expected bernoulli, markov, parry or haar)");
  }
  return m;
}

}  // namespace

HyperbolicModel load_model(const fs::path& path) {
  const Reader rd(path);
  const auto root = rd.load();
  rd.keys(root, {"schema_version", "id", "type", "branches", "placement", "matrix"});
  rd.version(root);
  HyperbolicModel model{rd.string(rd.need(root, "id")), ToralAutomorphism({{{2, 1}, {1, 1}}})};
  const auto type_node = rd.need(root, "type");
  const auto type = rd.string(type_node);
  if (type == "horseshoe") {
    const auto branches = rd.need(root, "branches");
    if (!branches.IsSequence() || branches.size() < 2) rd.fail(branches, "a horseshoe needs at least two branches");
    const std::string placement = root["placement"] ? rd.string(root["placement"]) : "standard";
    if (placement != "standard" && placement != "explicit") rd.fail(root["placement"], "placement must be standard or explicit");
    std::vector<double> u, s;
    std::vector<Branch> explicit_branches;
    for (const auto& b : branches) {
      rd.keys(b, {"u", "s", "a", "b"});
      const auto un = rd.need(b, "u");
      const auto sn = rd.need(b, "s");
      u.push_back(rd.real(un));
      s.push_back(rd.real(sn));
      if (!(u.back() > 1.0)) rd.fail(un, "expansion rate u must exceed 1");
      if (!(s.back() > 0.0 && s.back() < 1.0)) rd.fail(sn, "contraction rate s must lie in (0, 1)");
      if (placement == "explicit") {
        explicit_branches.push_back({u.back(), s.back(), rd.real(rd.need(b, "a")), rd.real(rd.need(b, "b"))});
      } else if (b["a"] || b["b"]) {
        rd.fail(b, "offsets a, b need placement: explicit");
      }
    }
    try {
      if (placement == "explicit") {
        model.system = AffineHorseshoe(std::move(explicit_branches));
      } else {
        model.system = AffineHorseshoe(u, s);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      rd.fail(branches, e.what());
    }
  } else if (type == "toral") {
    const auto m = rd.need(root, "matrix");
    if (!m.IsSequence() || m.size() != 2) rd.fail(m, "matrix must be 2x2");
    ToralAutomorphism::Matrix a{};
    for (std::size_t i = 0; i < 2; ++i) {
      if (!m[i].IsSequence() || m[i].size() != 2) rd.fail(m[i], "matrix must be 2x2");
      for (std::size_t j = 0; j < 2; ++j) a[i][j] = rd.integer(m[i][j]);
    }
    try {
      model.system = ToralAutomorphism(a);
    } catch (const Error& e) {
      rd.fail(m, e.what());
    }
  } else {
    rd.fail(type_node, "unknown model type '" + type + "' (expected horseshoe or toral)");
  }
  return model;
}

Tolerances load_tolerances(const fs::path& path) {
  const Reader rd(path);
  const auto root = rd.load();
  rd.version(root);
  return read_tolerances(rd, root);
}

MarkovMeasure make_measure(const MeasureSpec& spec, int alphabet_size) {
  const auto full = Sft::full_shift(alphabet_size);
  if (spec.kind == "bernoulli") return bernoulli_measure(full, spec.weights);
  if (spec.kind == "parry") return parry_measure(full);
  if (spec.kind == "markov") {
    if (spec.block < 1) throw Error("markov block must be at least 1");
    return MarkovMeasure(full.reblocked(spec.block), spec.rows);
  }
  throw Error("measure kind '" + spec.kind + "' has no Markov representation");
}

ExperimentConfig load_config(const fs::path& path) {
  const Reader rd(path);
  const auto root = rd.load();
  rd.keys(root, {"schema_version", "name", "model", "target", "depths", "measure", "tolerances", "seed", "out",
                 "family", "potential", "memory", "sample_depth", "toral"});
  rd.version(root);
  ExperimentConfig cfg;
  cfg.source = path;
  cfg.name = root["name"] ? rd.string(root["name"]) : path.stem().string();
  if (root["model"]) {
    cfg.model_path = rd.relative(root["model"]);
    cfg.model = load_model(cfg.model_path);
  }
  if (root["target"]) {
    cfg.target = read_target(rd, root["target"], cfg.model);
    if (cfg.model && !cfg.model->is_horseshoe() && cfg.target.kind != TargetSet::Kind::empty &&
        cfg.target.kind != TargetSet::Kind::ball) {
      rd.fail(root["target"], "toral models take ball targets only");
    }
  }
  if (root["depths"]) {
    const auto d = root["depths"];
    if (!d.IsSequence() || d.size() == 0) rd.fail(d, "depths must be a nonempty list");
    for (const auto& v : d) {
      const auto n = rd.integer(v);
      if (n < 1 || n > 24) rd.fail(v, "depths must lie in [1, 24]");
      if (!cfg.depths.empty() && n < cfg.depths.back()) rd.fail(v, "depths must be nondecreasing");
      cfg.depths.push_back(static_cast<int>(n));
    }
  }
  if (root["measure"]) {
    cfg.measure = read_measure(rd, root["measure"]);
    if (cfg.model) {
      const bool toral = !cfg.model->is_horseshoe();
      if (toral != (cfg.measure.kind == "haar")) rd.fail(root["measure"], "haar measures go with toral models only");
      if (!toral) {
        try {
          (void)make_measure(cfg.measure, cfg.model->horseshoe().branches());
        } catch (const Error& e) {
          rd.fail(root["measure"], e.what());
        }
      }
    }
  }
  if (root["tolerances"]) {
    const auto t = root["tolerances"];
    cfg.tolerances = t.IsScalar() ? load_tolerances(rd.relative(t)) : read_tolerances(rd, t);
  }
  if (root["seed"]) {
    const auto s = rd.integer(root["seed"]);
    if (s < 0) rd.fail(root["seed"], "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (root["out"]) cfg.out = rd.string(root["out"]);
  if (root["family"]) {
    const auto f = root["family"];
    rd.keys(f, {"alphabet_size", "words"});
    const auto m = rd.integer(rd.need(f, "alphabet_size"));
    const auto words_node = rd.need(f, "words");
    if (!words_node.IsSequence()) rd.fail(words_node, "words must be a list");
    std::vector<Word> words;
    for (const auto& w : words_node) {
      words.push_back(rd.word(w));
      if (words.back().empty()) rd.fail(w, "forbidden words must be nonempty");
      if (words.back().max_symbol() >= m) {
        rd.fail(w, "word '" + w.Scalar() + "' uses a symbol >= alphabet_size " + std::to_string(m));
      }
    }
    try {
      cfg.family = ForbiddenFamily(static_cast<int>(m), std::move(words));
    } catch (const Error& e) {
      rd.fail(f, e.what());
    }
  }
  if (root["potential"]) {
    const auto p = root["potential"];
    rd.keys(p, {"alphabet_size", "depth", "values", "constant"});
    int m = 0;
    if (p["alphabet_size"]) {
      m = static_cast<int>(rd.integer(p["alphabet_size"]));
    } else if (cfg.family) {
      m = cfg.family->alphabet_size();
    } else {
      rd.fail(p, "potential needs alphabet_size (or a family)");
    }
    try {
      if (p["constant"]) {
        cfg.potential = LocallyConstantPotential::constant(m, rd.real(p["constant"]));
      } else {
        const auto depth = static_cast<int>(rd.integer(rd.need(p, "depth")));
        const auto values = rd.need(p, "values");
        if (!values.IsMap()) rd.fail(values, "values must map blocks to numbers");
        std::map<Word, double> table;
        for (const auto& kv : values) table.emplace(rd.word(kv.first), rd.real(kv.second));
        cfg.potential = LocallyConstantPotential::from_table(m, depth, table);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      rd.fail(p, e.what());
    }
  }
  if (root["memory"]) {
    cfg.memory = static_cast<int>(rd.integer(root["memory"]));
    if (cfg.memory < 1 || cfg.memory > 4) rd.fail(root["memory"], "memory must lie in [1, 4]");
  }
  if (root["sample_depth"]) {
    const auto n = rd.integer(root["sample_depth"]);
    if (n < 0 || n > 11) rd.fail(root["sample_depth"], "sample_depth must lie in [0, 11]");
    cfg.sample_depth = static_cast<int>(n);
  }
  if (root["toral"]) {
    const auto t = root["toral"];
    rd.keys(t, {"grid", "steps", "scales"});
    if (t["grid"]) cfg.toral.grid = rd.integer(t["grid"]);
    if (t["steps"]) cfg.toral.steps = static_cast<std::size_t>(rd.integer(t["steps"]));
    if (t["scales"]) {
      const auto s = t["scales"];
      if (s.IsSequence()) {
        cfg.toral.scales = rd.reals(s);
      } else {
        rd.keys(s, {"base", "from", "to"});
        try {
          cfg.toral.scales = power_scales(rd.real(rd.need(s, "base")), static_cast<int>(rd.integer(rd.need(s, "from"))),
                                          static_cast<int>(rd.integer(rd.need(s, "to"))));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          rd.fail(s, e.what());
        }
      }
    }
  }
  return cfg;
}

}  // namespace exsets::config
