#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exsets/error.hpp"
#include "exsets/exceptional.hpp"
#include "exsets/fractal.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/systems.hpp"
#include "exsets/thermo.hpp"

namespace py = pybind11;
using namespace exsets;

namespace {

ForbiddenFamily family(int m, const std::vector<std::string>& words) {
  std::vector<Word> w;
  for (const auto& s : words) w.push_back(Word::parse(s));
  return ForbiddenFamily(m, std::move(w));
}

Sft shift(int m, const std::vector<std::string>& words) {
  return words.empty() ? Sft::full_shift(m) : build_survivor(family(m, words)).sft;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Entropy and dimension of exceptional sets on symbolic and hyperbolic models";
  py::register_exception<Error>(mod, "Error", PyExc_ValueError);

  mod.def(
      "survivor_entropy", [](int m, const std::vector<std::string>& words) { return sft_entropy(shift(m, words)); },
      py::arg("alphabet_size"), py::arg("words"), "Topological entropy (nats) of the shift avoiding `words`.");
  mod.def(
      "word_count",
      [](int m, const std::vector<std::string>& words, std::size_t n) {
        return to_string(word_count(shift(m, words), n));
      },
      py::arg("alphabet_size"), py::arg("words"), py::arg("n"), "Number of legal words of length n, as a string.");
  mod.def(
      "pressure",
      [](int m, const std::vector<std::string>& words, const std::vector<double>& phi) {
        return pressure(shift(m, words), LocallyConstantPotential::per_symbol(phi));
      },
      py::arg("alphabet_size"), py::arg("words"), py::arg("phi"));
  mod.def(
      "bowen_root",
      [](int m, const std::vector<std::string>& words, const std::vector<double>& phi) {
        return bowen_root(shift(m, words), LocallyConstantPotential::per_symbol(phi));
      },
      py::arg("alphabet_size"), py::arg("words"), py::arg("phi"));
  mod.def(
      "young_dimension",
      [](double h, double chi_s, double chi_u) { return young_dimension({chi_s, chi_u, h}); }, py::arg("h"),
      py::arg("chi_s"), py::arg("chi_u"));
  mod.def(
      "box_dimension",
      [](const std::vector<std::array<double, 2>>& points, const std::vector<double>& scales) {
        PointCloud c;
        c.points = points;
        return box_dimension(c, scales).value;
      },
      py::arg("points"), py::arg("scales"));
  mod.def(
      "horseshoe_sample",
      [](const std::vector<double>& u, const std::vector<double>& s, std::size_t depth, std::size_t max_points,
         std::uint64_t seed) {
        return sample_invariant_set(AffineHorseshoe(u, s), depth, max_points, seed).points;
      },
      py::arg("u"), py::arg("s"), py::arg("depth"), py::arg("max_points") = std::size_t{1} << 20,
      py::arg("seed") = 20240611);
  mod.def(
      "fixed_point_report",
      [](const std::vector<double>& u, const std::vector<double>& s, int depth) {
        const HyperbolicModel model{"python", AffineHorseshoe(u, s)};
        const auto& hs = model.horseshoe();
        const TargetSet t{TargetSet::Kind::points, {periodic_point(hs, Word{0})}, {}, 0.0, "fixed point"};
        const std::vector<double> w(u.size(), 1.0 / static_cast<double>(u.size()));
        const auto r = exceptional_report(model, t, depth, bernoulli_measure(Sft::full_shift(hs.branches()), w), "uniform");
        py::dict d;
        d["survivor_entropy"] = r.survivor_entropy;
        d["dimension_estimate"] = r.dimension_estimate;
        for (const auto& b : r.bounds) d[py::str(b.name)] = to_string(b.verdict);
        return d;
      },
      py::arg("u"), py::arg("s"), py::arg("depth"));
}
