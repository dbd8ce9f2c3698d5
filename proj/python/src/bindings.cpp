#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "morpho/dynamics.hpp"
#include "morpho/evolve.hpp"
#include "morpho/hover.hpp"
#include "morpho/io.hpp"
#include "morpho/objectives.hpp"
#include "morpho/phenotype.hpp"

namespace py = pybind11;
using namespace morpho;

namespace {

Genotype to_genotype(const std::vector<double>& genes) {
  if (genes.size() != kGenotypeLength) {
    throw std::invalid_argument("genotype must hold " + std::to_string(kGenotypeLength) + " genes");
  }
  Genotype g;
  std::copy(genes.begin(), genes.end(), g.genes.begin());
  if (!is_valid(g)) throw std::invalid_argument("genes must be finite and lie in [-1, 1]");
  return g;
}

std::vector<double> from_genotype(const Genotype& g) {
  return {g.genes.begin(), g.genes.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multicopter morphology evaluation and multi-objective evolution";

  m.attr("GENOTYPE_LENGTH") = kGenotypeLength;

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("k_f", &PhysicalParams::k_f)
      .def_readwrite("k_m", &PhysicalParams::k_m)
      .def_readwrite("omega_max", &PhysicalParams::omega_max)
      .def_readwrite("m_motor", &PhysicalParams::m_motor)
      .def_readwrite("mu_arm", &PhysicalParams::mu_arm)
      .def_readwrite("m_fc", &PhysicalParams::m_fc)
      .def_readwrite("fc_dims", &PhysicalParams::fc_dims)
      .def_readwrite("prop_radius", &PhysicalParams::prop_radius)
      .def_readwrite("clearance_margin", &PhysicalParams::clearance_margin)
      .def_readwrite("g", &PhysicalParams::g)
      .def("max_thrust", &PhysicalParams::max_thrust)
      .def("max_torque", &PhysicalParams::max_torque)
      .def("validate", [](const PhysicalParams& p) { validate(p); });

  py::enum_<SpinDirection>(m, "SpinDirection")
      .value("CCW", SpinDirection::CCW)
      .value("CW", SpinDirection::CW);

  py::class_<PropellerSpec>(m, "PropellerSpec")
      .def(py::init<>())
      .def_readwrite("arm_length", &PropellerSpec::arm_length)
      .def_readwrite("arm_angle", &PropellerSpec::arm_angle)
      .def_readwrite("inclination", &PropellerSpec::inclination)
      .def_readwrite("azimuth", &PropellerSpec::azimuth)
      .def_readwrite("direction", &PropellerSpec::direction)
      .def("position", [](const PropellerSpec& p) { return position(p); })
      .def("thrust_axis", [](const PropellerSpec& p) { return thrust_axis(p); })
      .def("__eq__", [](const PropellerSpec& a, const PropellerSpec& b) { return a == b; });

  py::class_<Phenotype>(m, "Phenotype")
      .def(py::init<>())
      .def_readwrite("props", &Phenotype::props)
      .def_readwrite("scale_applied", &Phenotype::scale_applied)
      .def_readwrite("invalid_layout", &Phenotype::invalid_layout)
      .def_property_readonly("count", &Phenotype::count)
      .def("to_json", [](const Phenotype& ph) { return to_json(ph).dump(); })
      .def_static("from_json", [](const std::string& text) { return phenotype_from_json(json::parse(text)); })
      .def("__eq__", [](const Phenotype& a, const Phenotype& b) { return a == b; });

  py::class_<MassProperties>(m, "MassProperties")
      .def_readonly("total_mass", &MassProperties::total_mass)
      .def_readonly("cg", &MassProperties::cg)
      .def_readonly("inertia", &MassProperties::inertia);

  py::class_<ActuatorMatrices>(m, "ActuatorMatrices")
      .def(py::init([](const Eigen::Matrix3Xd& force, const Eigen::Matrix3Xd& moment) {
             return ActuatorMatrices{force, moment};
           }),
           py::arg("force"), py::arg("moment"))
      .def_readwrite("force", &ActuatorMatrices::force)
      .def_readwrite("moment", &ActuatorMatrices::moment)
      .def_property_readonly("count", &ActuatorMatrices::count);

  py::enum_<HoverClass>(m, "HoverClass")
      .value("STATIC", HoverClass::Static)
      .value("SPINNING", HoverClass::Spinning)
      .value("NONE", HoverClass::None)
      .def("__str__", [](HoverClass c) { return std::string(to_string(c)); });

  py::class_<HoverOptions>(m, "HoverOptions")
      .def(py::init<>())
      .def_readwrite("tol_eq", &HoverOptions::tol_eq)
      .def_readwrite("starts", &HoverOptions::starts)
      .def_readwrite("max_iterations", &HoverOptions::max_iterations)
      .def_readwrite("seed", &HoverOptions::seed);

  py::class_<HoverSolution>(m, "HoverSolution")
      .def_readonly("eta_hat", &HoverSolution::eta_hat)
      .def_readonly("cost", &HoverSolution::cost)
      .def_readonly("hover_class", &HoverSolution::hover_class)
      .def_readonly("feasible", &HoverSolution::feasible)
      .def_readonly("thrust_residual", &HoverSolution::thrust_residual)
      .def_readonly("moment_residual", &HoverSolution::moment_residual)
      .def("residual", &HoverSolution::residual);

  py::class_<ObjectiveVector>(m, "ObjectiveVector")
      .def(py::init<>())
      .def_readwrite("alpha", &ObjectiveVector::alpha)
      .def_readwrite("lambda_", &ObjectiveVector::lambda)
      .def_readwrite("size", &ObjectiveVector::size)
      .def_readwrite("hover_class", &ObjectiveVector::hover_class)
      .def_readwrite("invalid", &ObjectiveVector::invalid)
      .def_readwrite("hover_residual", &ObjectiveVector::hover_residual)
      .def("__repr__", [](const ObjectiveVector& o) { return to_json(o).dump(); });

  py::class_<Evaluation>(m, "Evaluation")
      .def_readonly("phenotype", &Evaluation::phenotype)
      .def_readonly("mass", &Evaluation::mass)
      .def_readonly("matrices", &Evaluation::matrices)
      .def_readonly("hover", &Evaluation::hover)
      .def_readonly("objectives", &Evaluation::objectives)
      .def("report", [](const Evaluation& ev) { return evaluation_report(ev).dump(); },
           "Evaluation report as JSON text.");

  m.def("decode", [](const std::vector<double>& genes, const PhysicalParams& params) {
          return decode(to_genotype(genes), params);
        },
        py::arg("genotype"), py::arg("params") = PhysicalParams{});
  m.def("quadcopter_baseline", &quadcopter_baseline, py::arg("params") = PhysicalParams{});
  m.def("quadcopter_baseline_genotype", [] { return from_genotype(quadcopter_baseline_genotype()); });
  m.def("rotated", &rotated, py::arg("phenotype"), py::arg("delta_deg"));
  m.def("mass_properties", &mass_properties, py::arg("phenotype"), py::arg("params") = PhysicalParams{});
  m.def("effectiveness", &effectiveness, py::arg("phenotype"), py::arg("mass"),
        py::arg("params") = PhysicalParams{});

  m.def("solve_static_hover", &solve_static_hover, py::arg("matrices"), py::arg("g"),
        py::arg("options") = HoverOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("solve_spinning_hover", &solve_spinning_hover, py::arg("matrices"), py::arg("g"),
        py::arg("options") = HoverOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("classify_hover", &classify_hover, py::arg("matrices"), py::arg("g"),
        py::arg("options") = HoverOptions{}, py::call_guard<py::gil_scoped_release>());

  m.def("thrust_to_weight", &thrust_to_weight, py::arg("force"), py::arg("eta_hat"), py::arg("g"));
  m.def("maneuverability", &maneuverability, py::arg("moment"));
  m.def("planform_size", &planform_size, py::arg("phenotype"));
  m.def("evaluate_phenotype", &evaluate_phenotype, py::arg("phenotype"),
        py::arg("params") = PhysicalParams{}, py::arg("options") = HoverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("evaluate",
        [](const std::vector<double>& genes, const PhysicalParams& params, const HoverOptions& options) {
          const Genotype g = to_genotype(genes);
          py::gil_scoped_release release;
          return evaluate(g, params, options);
        },
        py::arg("genotype"), py::arg("params") = PhysicalParams{}, py::arg("options") = HoverOptions{});
  m.def("hypervolume",
        [](const std::vector<ObjectiveVector>& points, double reference_size) {
          return hypervolume(points, reference_size);
        },
        py::arg("points"), py::arg("reference_size") = 1.0);

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("pop_size", &EvolutionConfig::pop_size)
      .def_readwrite("generations", &EvolutionConfig::generations)
      .def_readwrite("mutation_rate", &EvolutionConfig::mutation_rate)
      .def_readwrite("mutation_sigma", &EvolutionConfig::mutation_sigma)
      .def_readwrite("crossover_rate", &EvolutionConfig::crossover_rate)
      .def_readwrite("seed", &EvolutionConfig::seed)
      .def_readwrite("params", &EvolutionConfig::params)
      .def_readwrite("hover", &EvolutionConfig::hover)
      .def_readwrite("threads", &EvolutionConfig::threads)
      .def_readwrite("hv_reference_size", &EvolutionConfig::hv_reference_size)
      .def("validate", [](const EvolutionConfig& c) { validate(c); })
      .def_static("from_json", [](const std::string& text) { return config_from_json(json::parse(text)); });

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("generation", &GenerationStats::generation)
      .def_readonly("front0_size", &GenerationStats::front0_size)
      .def_readonly("hypervolume", &GenerationStats::hypervolume)
      .def_readonly("alpha_min", &GenerationStats::alpha_min)
      .def_readonly("alpha_max", &GenerationStats::alpha_max)
      .def_readonly("lambda_min", &GenerationStats::lambda_min)
      .def_readonly("lambda_max", &GenerationStats::lambda_max)
      .def_readonly("size_min", &GenerationStats::size_min)
      .def_readonly("size_max", &GenerationStats::size_max)
      .def_readonly("prop_histogram", &GenerationStats::prop_histogram)
      .def_readonly("tier_counts", &GenerationStats::tier_counts);

  py::class_<Individual>(m, "Individual")
      .def_property_readonly("genotype", [](const Individual& i) { return from_genotype(i.genotype); })
      .def_readonly("objectives", &Individual::objectives)
      .def_readonly("rank", &Individual::rank)
      .def_readonly("crowding", &Individual::crowding);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("config", &RunRecord::config)
      .def_readonly("initial", &RunRecord::initial)
      .def_readonly("generations", &RunRecord::generations)
      .def_readonly("population", &RunRecord::population)
      .def_readonly("front", &RunRecord::front)
      .def("write", [](const RunRecord& r, const std::string& dir) { write_run(dir, r, 0.0); },
           py::arg("directory"));

  m.def("evolve",
        [](const EvolutionConfig& config, const std::function<void(const GenerationStats&)>& progress) {
          ProgressFn fn;
          if (progress) {
            fn = [&progress](const GenerationStats& s) {
              py::gil_scoped_acquire acquire;
              progress(s);
            };
          }
          py::gil_scoped_release release;
          return evolve(config, fn);
        },
        py::arg("config"), py::arg("progress") = nullptr);

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
}
