// exsets: entropy, pressure, dim, exceptional, sweep and verify commands.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "exsets/config.hpp"
#include "exsets/error.hpp"
#include "exsets/exceptional.hpp"
#include "exsets/fractal.hpp"
#include "exsets/io.hpp"
#include "exsets/systems.hpp"
#include "exsets/thermo.hpp"
#include "exsets/verify.hpp"

#ifndef EXSETS_SCENARIOS_DIR
#define EXSETS_SCENARIOS_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using exsets::io::Json;
using exsets::io::real;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string filter;
  std::string tolerance_table;
};

struct Violated {};

class Run {
 public:
  Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {}

  exsets::config::ExperimentConfig load() {
    if (opt_.config.empty()) throw exsets::ConfigError("<command line>", 0, "--config is required");
    auto cfg = exsets::config::load_config(opt_.config);
    if (opt_.seed) cfg.seed = *opt_.seed;
    if (!opt_.tolerance_table.empty()) cfg.tolerances = exsets::config::load_tolerances(opt_.tolerance_table);
    out_dir_ = resolve_out(cfg.out);
    seed_ = cfg.seed;
    return cfg;
  }

  // --out, then EXSETS_OUT_DIR, then the config's out key, then the working directory.
  fs::path resolve_out(const std::string& from_config) const {
    if (!opt_.out.empty()) return opt_.out;
    if (const char* env = std::getenv("EXSETS_OUT_DIR"); env && *env) return env;
    if (!from_config.empty()) {
      fs::path p = from_config;
      return p.is_relative() ? fs::path(opt_.config).parent_path() / p : p;
    }
    return ".";
  }

  void set_out(fs::path dir) { out_dir_ = std::move(dir); }

  Json header(const exsets::config::ExperimentConfig* cfg) const {
    Json j;
    j["command"] = command_;
    if (cfg) j["config"] = cfg->name;
    j["seed"] = seed_;
    return j;
  }

  void write(const std::string& name, const std::string& text) {
    fs::create_directories(out_dir_);
    const auto path = out_dir_ / name;
    std::ofstream os(path);
    if (!os) throw exsets::Error("cannot write " + path.string());
    os << text;
    written_.push_back(path.string());
  }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  void finish(Json extra = Json::object()) {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    Json meta = extra;
    meta["timestamp"] = ts.str();
    meta["elapsed_seconds"] = elapsed;
    write_json(command_ + ".meta.json", meta);
    for (const auto& p : written_) std::cerr << "wrote " << p << '\n';
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::string command_;
  Options opt_;
  fs::path out_dir_ = ".";
  std::uint64_t seed_ = 20240611;
  std::vector<std::string> written_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string measure_label(const exsets::config::MeasureSpec& m) {
  std::ostringstream os;
  os << m.kind;
  if (m.kind == "bernoulli") {
    os << '(';
    for (std::size_t i = 0; i < m.weights.size(); ++i) os << (i ? "," : "") << exsets::io::format_real(m.weights[i]);
    os << ')';
  } else if (m.kind == "markov") {
    os << "(block " << m.block << ')';
  }
  return os.str();
}

exsets::MarkovMeasure measure_for(const exsets::config::ExperimentConfig& cfg) {
  const int m = cfg.model->horseshoe().branches();
  auto spec = cfg.measure;
  if (spec.kind == "bernoulli" && spec.weights.empty()) spec.weights.assign(static_cast<std::size_t>(m), 1.0 / m);
  return exsets::config::make_measure(spec, m);
}

const exsets::HyperbolicModel& need_model(const exsets::config::ExperimentConfig& cfg) {
  if (!cfg.model) throw exsets::ConfigError(cfg.source.string(), 0, "this command needs a model");
  return *cfg.model;
}

int need_depth(const exsets::config::ExperimentConfig& cfg) {
  if (cfg.depths.empty()) throw exsets::ConfigError(cfg.source.string(), 0, "this command needs depths");
  return cfg.depths.back();
}

exsets::ReportOptions report_options(const exsets::config::ExperimentConfig& cfg) {
  exsets::ReportOptions o;
  o.tolerances = cfg.tolerances;
  o.dd_memory = cfg.memory;
  o.dd.seed = cfg.seed;
  return o;
}

// ------------------------------------------------------------------ commands

void cmd_entropy(const Options& opt) {
  Run run("entropy", opt);
  const auto cfg = run.load();
  auto j = run.header(&cfg);
  exsets::ForbiddenFamily family(2, {});
  if (cfg.family) {
    family = *cfg.family;
  } else if (cfg.model && cfg.model->is_horseshoe()) {
    family = exsets::cover_target(cfg.model->horseshoe(), cfg.target, need_depth(cfg));
    j["target"] = cfg.target.description();
    j["depth"] = need_depth(cfg);
  } else {
    throw exsets::ConfigError(cfg.source.string(), 0, "entropy needs a family or a horseshoe model with a target");
  }
  j["family"] = exsets::io::to_json(family);
  j["ambient_entropy"] = real(std::log(static_cast<double>(family.alphabet_size())));
  if (family.empty()) {
    j["survivor_entropy"] = real(std::log(static_cast<double>(family.alphabet_size())));
    j["survivor"] = {{"states", family.alphabet_size()}, {"empty", false}};
  } else {
    const auto survivor = exsets::build_survivor(family);
    const double h = exsets::sft_entropy(survivor.sft);
    j["survivor_entropy"] = real(h);
    j["survivor"] = {{"states", survivor.sft.num_states()},
                     {"edges", survivor.sft.num_edges()},
                     {"block_length", survivor.sft.block_length()},
                     {"empty", survivor.empty}};
    Json counts = Json::array();
    for (std::size_t n = 1; n <= 20; ++n) counts.push_back(exsets::to_string(exsets::word_count(survivor.sft, n)));
    j["word_counts"] = std::move(counts);
  }
  std::cout << "survivor entropy " << exsets::io::format_real(j["survivor_entropy"].is_number()
                                                                   ? j["survivor_entropy"].get<double>()
                                                                   : -INFINITY)
            << '\n';
  run.write_json("entropy.json", j);
  run.finish();
}

void cmd_pressure(const Options& opt) {
  Run run("pressure", opt);
  const auto cfg = run.load();
  if (!cfg.potential) throw exsets::ConfigError(cfg.source.string(), 0, "pressure needs a potential");
  const auto& phi = *cfg.potential;
  const exsets::Sft sft = cfg.family && !cfg.family->empty() ? exsets::build_survivor(*cfg.family).sft
                                                              : exsets::Sft::full_shift(phi.alphabet_size());
  auto j = run.header(&cfg);
  if (cfg.family) j["family"] = exsets::io::to_json(*cfg.family);
  j["potential"] = exsets::io::to_json(phi);
  const double p = exsets::pressure(sft, phi);
  j["pressure"] = real(p);
  if (!sft.empty()) {
    const auto mu = exsets::equilibrium_measure(sft.reblocked(std::max(sft.block_length(), phi.depth() - 1)), phi);
    j["equilibrium"] = {{"entropy", real(exsets::measure_entropy(mu))}, {"integral", real(exsets::lyapunov(mu, phi))}};
  }
  if (phi.strictly_negative() && !sft.empty()) j["bowen_root"] = real(exsets::bowen_root(sft, phi));
  std::cout << "pressure " << exsets::io::format_real(p) << '\n';
  run.write_json("pressure.json", j);
  run.finish();
}

void cmd_dim(const Options& opt) {
  Run run("dim", opt);
  const auto cfg = run.load();
  const auto& model = need_model(cfg);
  auto j = run.header(&cfg);
  j["model"] = model.id;
  if (!model.is_horseshoe()) {
    const auto& a = model.toral();
    const double h = std::log(a.lambda());
    j["entropy"] = real(h);
    j["periodic_entropy"] = real(exsets::periodic_entropy(a));
    j["expansion_rate"] = real(exsets::expansion_rate(a));
    j["haar_dimension"] = 2.0;
    std::cout << "entropy " << exsets::io::format_real(h) << '\n';
    run.write_json("dim.json", j);
    run.finish();
    return;
  }
  const auto& hs = model.horseshoe();
  const auto full = exsets::Sft::full_shift(hs.branches());
  const auto [phi_s, phi_u] = exsets::horseshoe_potentials(hs);
  const auto mu = measure_for(cfg);
  const auto spectrum = exsets::spectrum_of(mu, phi_s, phi_u);
  j["measure"] = measure_label(cfg.measure);
  j["spectrum"] = exsets::io::to_json(spectrum);
  j["young_dimension"] = real(exsets::young_dimension(spectrum));
  j["d_s"] = real(exsets::bowen_root(full, phi_s));
  j["d_u"] = real(exsets::bowen_root(full, phi_u));
  exsets::DynamicalDimensionOptions dd;
  dd.seed = cfg.seed;
  j["dynamical_dimension"] = {{"memory", cfg.memory},
                              {"value", real(exsets::dynamical_dimension(full, phi_s, phi_u, cfg.memory, dd).value)}};

  const int depth = cfg.sample_depth.value_or(10);
  const auto cloud = exsets::sample_invariant_set(hs, static_cast<std::size_t>(depth), std::size_t{1} << 20, cfg.seed);
  // Base min u; the finest scale stays above the largest depth-n cell and
  // keeps the cloud sampled.
  double base = INFINITY, cell = 0.0;
  for (const auto& b : hs.all_branches()) {
    base = std::min(base, b.u);
    cell = std::max({cell, std::pow(1.0 / b.u, depth), std::pow(b.s, depth)});
  }
  std::optional<exsets::DimEstimate> box;
  std::string why = "no admissible scales";
  for (int top = 12; top >= 5 && !box; --top) {
    if (std::pow(base, -top) < cell) continue;
    try {
      box = exsets::box_dimension(cloud, exsets::power_scales(base, 2, top));
    } catch (const exsets::Error& e) {
      why = e.what();
    }
  }
  if (box) {
    j["box_dimension"] = exsets::io::to_json(*box);
  } else {
    j["box_dimension"] = nullptr;
    j["diagnostics"] = Json::array({"box dimension: " + why});
  }
  std::ostringstream csv;
  exsets::io::write_point_cloud(csv, cloud);
  run.write("dim-points.csv", csv.str());
  std::cout << "young dimension " << exsets::io::format_real(exsets::young_dimension(spectrum)) << '\n';
  run.write_json("dim.json", j);
  run.finish();
}

void emit_reports(Run& run, const std::string& command, const exsets::config::ExperimentConfig& cfg,
                  const std::vector<exsets::DimensionReport>& reports) {
  auto j = run.header(&cfg);
  Json arr = Json::array();
  bool violated = false;
  for (const auto& r : reports) {
    arr.push_back(exsets::io::to_json(r));
    violated = violated || r.any_violated();
    for (const auto& b : r.bounds) {
      std::cout << "depth " << std::setw(2) << r.depth << "  " << std::left << std::setw(16) << b.name << std::right
                << " bound " << std::setw(10) << exsets::io::format_real(b.bound) << "  margin "
                << exsets::io::format_real(b.margin) << "  " << exsets::to_string(b.verdict) << '\n';
    }
  }
  j["reports"] = std::move(arr);
  run.write_json(command + ".json", j);
  run.write(command + ".csv", exsets::io::reports_to_csv(reports));
  run.finish();
  if (violated) throw Violated{};
}

std::vector<exsets::DimensionReport> reports_for(const exsets::config::ExperimentConfig& cfg,
                                                 const std::vector<int>& depths) {
  const auto& model = need_model(cfg);
  if (!model.is_horseshoe()) {
    std::vector<exsets::DimensionReport> out;
    out.push_back(exsets::toral_report(model, cfg.target, cfg.toral, cfg.tolerances));
    return out;
  }
  return exsets::sweep_depth(model, cfg.target, depths, measure_for(cfg), measure_label(cfg.measure),
                             report_options(cfg));
}

void cmd_exceptional(const Options& opt) {
  Run run("exceptional", opt);
  const auto cfg = run.load();
  const auto& model = need_model(cfg);
  const std::vector<int> depths = model.is_horseshoe() ? std::vector<int>{need_depth(cfg)} : std::vector<int>{};
  emit_reports(run, "exceptional", cfg, reports_for(cfg, depths));
}

void cmd_sweep(const Options& opt) {
  Run run("sweep", opt);
  const auto cfg = run.load();
  need_depth(cfg);
  emit_reports(run, "sweep", cfg, reports_for(cfg, cfg.depths));
}

bool cmd_verify(const Options& opt) {
  Run run("verify", opt);
  const fs::path dir = opt.config.empty() ? fs::path(EXSETS_SCENARIOS_DIR) : fs::path(opt.config);
  run.set_out(run.resolve_out(""));
  const auto ctx = exsets::verify::load_context(dir, opt.seed.value_or(20240611));
  const auto results = exsets::verify::run_all(ctx, opt.filter);
  std::cout << exsets::verify::table(results);
  bool ok = !results.empty();
  for (const auto& r : results) ok = ok && r.passed;
  Json j = run.header(nullptr);
  j["seed"] = ctx.seed;
  j["filter"] = opt.filter;
  j["results"] = exsets::verify::results_json(results);
  run.write_json("verify.json", j);
  run.finish({{"timings", exsets::verify::timings_json(results)}});
  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exceptional sets of hyperbolic model systems: entropy, dimension and bound checks"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub, bool config_is_dir) {
    sub->add_option("--config", opt.config, config_is_dir ? "scenario directory" : "experiment file");
    sub->add_option("--out", opt.out, "output directory (overrides EXSETS_OUT_DIR and the config)");
    sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) { opt.seed = seed; });
    sub->add_option("--tolerance-table", opt.tolerance_table, "tolerance table file");
  };
  auto* entropy = app.add_subcommand("entropy", "survivor and ambient entropy");
  auto* pressure = app.add_subcommand("pressure", "pressure and Bowen root of a potential");
  auto* dim = app.add_subcommand("dim", "dimension spectrum of a model and measure");
  auto* exceptional = app.add_subcommand("exceptional", "bound checks at the last configured depth");
  auto* sweep = app.add_subcommand("sweep", "bound checks over every configured depth");
  auto* verify = app.add_subcommand("verify", "acceptance suite");
  for (auto* s : {entropy, pressure, dim, exceptional, sweep}) common(s, false);
  common(verify, true);
  verify->add_option("--filter", opt.filter, "tag, key or number of the criteria to run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*entropy) cmd_entropy(opt);
    if (*pressure) cmd_pressure(opt);
    if (*dim) cmd_dim(opt);
    if (*exceptional) cmd_exceptional(opt);
    if (*sweep) cmd_sweep(opt);
    if (*verify) return cmd_verify(opt) ? 0 : 1;
  } catch (const Violated&) {
    std::cerr << "at least one bound is violated\n";
    return 1;
  } catch (const exsets::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const exsets::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
