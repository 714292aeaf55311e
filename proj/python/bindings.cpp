// Python bindings for the core operations: channel model, achievable rate,
// attenuation solvers, error analysis, and the Monte Carlo simulator.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spadaac/aac.hpp"
#include "spadaac/count_model.hpp"
#include "spadaac/error_rate.hpp"
#include "spadaac/rate.hpp"
#include "spadaac/simulator.hpp"
#include "spadaac/version.hpp"

namespace py = pybind11;
using namespace spadaac;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-counting SPAD receiver model with automatic attenuation control";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "SpadaacError", PyExc_RuntimeError);

  py::class_<ReceiverConfig>(m, "ReceiverConfig")
      .def(py::init([](double pde, int array_size, double symbol_duration_ns,
                       double dead_time_ns, double gate_duration_ns,
                       double dark_rate_cpns, bool attenuate_dark_counts) {
             ReceiverConfig c{pde, array_size, symbol_duration_ns, dead_time_ns,
                              gate_duration_ns, dark_rate_cpns, attenuate_dark_counts};
             c.validate();
             return c;
           }),
           py::arg("pde") = 0.2, py::arg("array_size") = 1,
           py::arg("symbol_duration_ns") = 1000.0, py::arg("dead_time_ns") = 9.0,
           py::arg("gate_duration_ns") = 1.0, py::arg("dark_rate_cpns") = 0.01,
           py::arg("attenuate_dark_counts") = true)
      .def_readwrite("pde", &ReceiverConfig::pde)
      .def_readwrite("array_size", &ReceiverConfig::array_size)
      .def_readwrite("symbol_duration_ns", &ReceiverConfig::symbol_duration_ns)
      .def_readwrite("dead_time_ns", &ReceiverConfig::dead_time_ns)
      .def_readwrite("gate_duration_ns", &ReceiverConfig::gate_duration_ns)
      .def_readwrite("dark_rate_cpns", &ReceiverConfig::dark_rate_cpns)
      .def_readwrite("attenuate_dark_counts", &ReceiverConfig::attenuate_dark_counts);

  py::class_<ChannelEstimate>(m, "ChannelEstimate")
      .def(py::init<double, double>(), py::arg("signal_rate_cpns"),
           py::arg("background_rate_cpns"))
      .def_readwrite("signal_rate_cpns", &ChannelEstimate::signal_rate_cpns)
      .def_readwrite("background_rate_cpns", &ChannelEstimate::background_rate_cpns)
      .def("sbr", &ChannelEstimate::sbr);

  py::class_<Constellation>(m, "Constellation")
      .def(py::init<std::vector<double>>(), py::arg("levels_cpns"))
      .def_readonly("levels_cpns", &Constellation::levels_cpns)
      .def("order", &Constellation::order);

  py::class_<CountModel>(m, "CountModel")
      .def_readonly("attenuation", &CountModel::attenuation)
      .def_readonly("k_max", &CountModel::k_max)
      .def_readonly("total_exponents", &CountModel::total_exponents)
      .def_readonly("trigger_probs", &CountModel::trigger_probs)
      .def_readonly("pmfs", &CountModel::pmfs)
      .def_static("from_trigger_probs", &CountModel::from_trigger_probs,
                  py::arg("k_max"), py::arg("trigger_probs"),
                  py::arg("attenuation") = 1.0);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("rate_bits", &RateReport::rate_bits)
      .def_readonly("d1", &RateReport::d1)
      .def_readonly("d2", &RateReport::d2);

  py::enum_<AacAlgorithm>(m, "AacAlgorithm")
      .value("NONE", AacAlgorithm::None)
      .value("RATE_MAX", AacAlgorithm::RateMax)
      .value("TRIGGER_CRITERION", AacAlgorithm::TriggerCriterion);

  py::class_<SolverSettings>(m, "SolverSettings")
      .def(py::init([](double epsilon, int t_max, double alpha_floor,
                       double trigger_target) {
             SolverSettings s{epsilon, t_max, alpha_floor, trigger_target};
             s.validate();
             return s;
           }),
           py::arg("epsilon") = 1e-9, py::arg("t_max") = 100,
           py::arg("alpha_floor") = 1e-12, py::arg("trigger_target") = 0.7)
      .def_readwrite("epsilon", &SolverSettings::epsilon)
      .def_readwrite("t_max", &SolverSettings::t_max)
      .def_readwrite("alpha_floor", &SolverSettings::alpha_floor)
      .def_readwrite("trigger_target", &SolverSettings::trigger_target);

  py::class_<AacSolution>(m, "AacSolution")
      .def_readonly("alpha_opt", &AacSolution::alpha_opt)
      .def_readonly("rate_bits", &AacSolution::rate_bits)
      .def_readonly("avg_trigger", &AacSolution::avg_trigger)
      .def_readonly("effective_signal_rate", &AacSolution::effective_signal_rate)
      .def_readonly("effective_background_rate", &AacSolution::effective_background_rate)
      .def_readonly("iterations", &AacSolution::iterations)
      .def_readonly("converged", &AacSolution::converged)
      .def_readonly("algorithm", &AacSolution::algorithm);

  py::class_<DecisionRule>(m, "DecisionRule")
      .def(py::init<std::vector<double>>(), py::arg("thresholds"))
      .def_readonly("thresholds", &DecisionRule::thresholds)
      .def("classify", &DecisionRule::classify, py::arg("count"));

  py::class_<SerReport>(m, "SerReport")
      .def_readonly("ser", &SerReport::ser)
      .def_readonly("per_symbol_error", &SerReport::per_symbol_error);

  py::enum_<SimulationMode>(m, "SimulationMode")
      .value("PER_GATE_BERNOULLI", SimulationMode::PerGateBernoulli)
      .value("ARRIVAL_PROCESS", SimulationMode::ArrivalProcess);

  py::class_<SimulationPlan>(m, "SimulationPlan")
      .def(py::init([](std::uint64_t trials, std::uint64_t seed, SimulationMode mode,
                       int threads) {
             return SimulationPlan{trials, seed, mode, threads};
           }),
           py::arg("trials") = 100000, py::arg("seed") = 1,
           py::arg("mode") = SimulationMode::PerGateBernoulli, py::arg("threads") = 0)
      .def_readwrite("trials", &SimulationPlan::trials)
      .def_readwrite("seed", &SimulationPlan::seed)
      .def_readwrite("mode", &SimulationPlan::mode)
      .def_readwrite("threads", &SimulationPlan::threads);

  py::class_<EmpiricalCounts>(m, "EmpiricalCounts")
      .def_readonly("histograms", &EmpiricalCounts::histograms)
      .def_readonly("trials", &EmpiricalCounts::trials)
      .def("tv_distance", &EmpiricalCounts::tv_distance, py::arg("symbol"),
           py::arg("pmf"));

  py::class_<EmpiricalSer>(m, "EmpiricalSer")
      .def_readonly("errors", &EmpiricalSer::errors)
      .def_readonly("trials", &EmpiricalSer::trials)
      .def("ser", &EmpiricalSer::ser)
      .def("std_error", &EmpiricalSer::std_error);

  m.def("k_max", &k_max, py::arg("receiver"));
  m.def("gates_per_pixel", &gates_per_pixel, py::arg("receiver"));
  m.def("square_root_constellation", &square_root_constellation, py::arg("peak"),
        py::arg("order"));
  m.def("trigger_probability", &trigger_probability, py::arg("receiver"),
        py::arg("channel"), py::arg("constellation"), py::arg("symbol"),
        py::arg("alpha"));
  m.def("average_trigger_probability", &average_trigger_probability,
        py::arg("receiver"), py::arg("channel"), py::arg("constellation"),
        py::arg("alpha"));
  m.def("count_pmf", &count_pmf, py::arg("receiver"), py::arg("channel"),
        py::arg("constellation"), py::arg("alpha"));
  m.def("achievable_rate", &achievable_rate, py::arg("model"));
  m.def("rate_report", &rate_report, py::arg("receiver"), py::arg("channel"),
        py::arg("constellation"), py::arg("alpha"));
  m.def("rate_second_derivative", &rate_second_derivative, py::arg("receiver"),
        py::arg("channel"), py::arg("constellation"), py::arg("alpha"));
  m.def("solve_rate_max", &solve_rate_max, py::arg("receiver"), py::arg("channel"),
        py::arg("constellation"), py::arg("settings") = SolverSettings{});
  m.def("solve_trigger_criterion", &solve_trigger_criterion, py::arg("receiver"),
        py::arg("channel"), py::arg("constellation"),
        py::arg("settings") = SolverSettings{});
  m.def("attenuation_from_targets", &attenuation_from_targets, py::arg("channel"),
        py::arg("target_signal_rate"), py::arg("target_background_rate"));
  m.def("ml_thresholds", &ml_thresholds, py::arg("model"));
  m.def("symbol_error_rate", &symbol_error_rate, py::arg("model"), py::arg("rule"));
  m.def("simulate_counts", &simulate_counts, py::arg("receiver"), py::arg("channel"),
        py::arg("constellation"), py::arg("alpha"), py::arg("plan"));
  m.def("simulate_ser", &simulate_ser, py::arg("receiver"), py::arg("channel"),
        py::arg("constellation"), py::arg("alpha"), py::arg("rule"), py::arg("plan"));
}
