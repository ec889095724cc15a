#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "exsets/config.hpp"
#include "exsets/error.hpp"
#include "exsets/verify.hpp"

using namespace exsets;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = EXSETS_SCENARIOS_DIR;

fs::path scratch(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "exsets-config-test";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::size_t error_line(const fs::path& p) {
  try {
    (void)config::load_config(p);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("shipped models") {
  const auto sym = config::load_model(kScenarios / "symmetric.yaml");
  REQUIRE(sym.is_horseshoe());
  CHECK(sym.horseshoe().branch(0).s == doctest::Approx(1.0 / 3));
  const auto cat = config::load_model(kScenarios / "catmap.yaml");
  CHECK(!cat.is_horseshoe());
  CHECK(cat.toral().trace() == 3);
  const auto t = config::load_tolerances(kScenarios / "tolerances.yaml");
  CHECK(t.thmA == 0.03);
  CHECK(t.thmE == 0.1);
}

TEST_CASE("shipped experiments load") {
  for (const auto& e : fs::directory_iterator(kScenarios / "experiments")) {
    if (e.path().stem() == "malformed") continue;
    CHECK_NOTHROW(config::load_config(e.path()));
  }
  const auto cfg = config::load_config(kScenarios / "experiments" / "symmetric-fixedpoint.yaml");
  CHECK(cfg.depths == std::vector<int>{6});
  CHECK(cfg.target.kind == TargetSet::Kind::points);
  CHECK(cfg.seed == 20240611);
  const auto cat = config::load_config(kScenarios / "experiments" / "catmap-ball.yaml");
  CHECK(cat.toral.scales.size() == 8);
}

TEST_CASE("malformed family pinpoints the line") {
  CHECK_THROWS_WITH_AS(config::load_config(kScenarios / "experiments" / "malformed.yaml"),
                       doctest::Contains("malformed.yaml:5: word '121' uses a symbol >= alphabet_size 2"),
                       ConfigError);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line(scratch("a.yaml", "schema_version: 1\nname: x\nbogus: 3\n")) == 3);
  CHECK(error_line(scratch("b.yaml", "schema_version: 2\n")) == 1);
  CHECK(error_line(scratch("c.yaml", "schema_version: 1\ndepths: [3, 2]\n")) == 2);
  CHECK(error_line(scratch("d.yaml", "schema_version: 1\nmodel: nowhere.yaml\n")) == 2);
  CHECK(error_line(scratch("e.yaml", "schema_version: 1\nseed: [1\n")) >= 2);
  CHECK_THROWS_AS(config::load_model(scratch("m.yaml", "schema_version: 1\nid: m\ntype: horseshoe\nbranches:\n  - {u: 3, s: 1/3}\n  - {u: 0.5, s: 1/3}\n")),
                  ConfigError);
  CHECK_THROWS_AS(config::load_tolerances(scratch("t.yaml", "schema_version: 1\nthmA: 0.1\n")), ConfigError);
}

TEST_CASE("measures") {
  const auto b = config::make_measure({"bernoulli", {0.25, 0.75}, 1, {}}, 2);
  CHECK(b.rows()[0][1] == doctest::Approx(0.75));
  const auto p = config::make_measure({"parry", {}, 1, {}}, 3);
  CHECK(p.rows()[0][0] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(config::make_measure({"bernoulli", {0.5, 0.6}, 1, {}}, 2), Error);
  CHECK_THROWS_AS(config::make_measure({"haar", {}, 1, {}}, 2), Error);
}

TEST_CASE("verify filters") {
  const auto& all = verify::criteria();
  CHECK(all.size() == 12);
  int thermo = 0;
  for (const auto& c : all) thermo += verify::matches(c, "thermo");
  CHECK(thermo == 4);
  CHECK(verify::matches(all[0], "golden-mean"));
  CHECK(verify::matches(all[0], "1"));
  CHECK(!verify::matches(all[0], "cli"));
  const auto ctx = verify::load_context(kScenarios);
  const auto r = verify::run_all(ctx, "bowen-root");
  REQUIRE(r.size() == 1);
  CHECK(r[0].passed);
  CHECK_THROWS_AS(verify::load_context(fs::path(EXSETS_SCENARIOS_DIR) / ".." / "tests" / "data" / "corrupt"), ConfigError);
}
