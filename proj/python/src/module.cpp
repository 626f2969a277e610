#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ndsid/circuit.hpp"
#include "ndsid/distance.hpp"
#include "ndsid/io.hpp"
#include "ndsid/polymat.hpp"

namespace py = pybind11;
using namespace ndsid;

namespace {

std::vector<std::vector<std::string>> rat_strings(const RatMatrix& g) {
  std::vector<std::vector<std::string>> out(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out[i].push_back(g(i, j).to_string());
  return out;
}

std::vector<std::vector<double>> rows_of(const MatrixXd& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

const RatMatrix& pick_tfm(const TfmBundle& b, const std::string& which) {
  if (which == "yv") return b.G_yv;
  if (which == "zu") return b.G_zu;
  if (which == "zv") return b.G_zv;
  if (which == "yu") return b.G_yu;
  throw InvalidParam("tfm must be one of yv, zu, zv, yu");
}

TfmBundle tfms_of(const NdsModel& m, std::size_t i) {
  if (i >= m.subsystems.size()) throw InvalidIndex("subsystem index out of range");
  return subsystem_tfms(realize(m.subsystems[i]));
}

}  // namespace

PYBIND11_MODULE(_ndsid, mod) {
  mod.doc() = "Exact structural identifiability checks and distance estimates for networked dynamic systems";

  py::register_exception<Error>(mod, "NdsidError");

  py::class_<NdsModel>(mod, "Model")
      .def_property_readonly("subsystem_count", [](const NdsModel& m) { return m.subsystems.size(); })
      .def_property_readonly("total_v", &NdsModel::total_v)
      .def_property_readonly("total_z", &NdsModel::total_z)
      .def_property_readonly("total_u", &NdsModel::total_u)
      .def_property_readonly("total_y", &NdsModel::total_y)
      .def("dump", &dump_model)
      .def("__eq__", [](const NdsModel& a, const NdsModel& b) { return a == b; });

  mod.def("parse_model", [](const std::string& text) { return parse_model(text); });
  mod.def("load_model", [](const std::string& path) { return load_model(path); });
  mod.def(
      "circuit_model",
      [](const std::string& t, const std::string& k1, const std::string& k2) {
        CircuitParams p{parse_rat(t), parse_rat(k1), parse_rat(k2)};
        return circuit_nds(p, p);
      },
      py::arg("T") = "1", py::arg("k1") = "1/2", py::arg("k2") = "1/2");
  mod.def("circuit_sweep_model", [](const std::string& k1) { return circuit_sweep_model(parse_rat(k1)); });

  mod.def(
      "check_json", [](const NdsModel& m, const std::string& method) { return report_json(check(m, parse_method(method)), 0); },
      py::arg("model"), py::arg("method") = "auto");
  mod.def(
      "tfm",
      [](const NdsModel& m, std::size_t i, const std::string& which) { return rat_strings(pick_tfm(tfms_of(m, i), which)); },
      py::arg("model"), py::arg("subsystem"), py::arg("which"));
  mod.def(
      "tfm_det",
      [](const NdsModel& m, std::size_t i, const std::string& which) {
        return rat_det(pick_tfm(tfms_of(m, i), which)).to_string();
      },
      py::arg("model"), py::arg("subsystem"), py::arg("which"));
  mod.def(
      "normal_rank",
      [](const NdsModel& m, std::size_t i, const std::string& which) {
        return normal_rank(pick_tfm(tfms_of(m, i), which));
      },
      py::arg("model"), py::arg("subsystem"), py::arg("which"));

  mod.def(
      "dsid_freq",
      [](const NdsModel& m, std::size_t n1, std::size_t n2, std::uint64_t seed, unsigned threads) {
        DistanceConfig cfg;
        cfg.n1 = n1;
        cfg.n2 = n2;
        cfg.seed = seed;
        cfg.threads = threads;
        DistanceEstimate e;
        {
          py::gil_scoped_release release;
          e = dsid_freq(m, cfg);
        }
        py::dict d;
        d["d_freq"] = e.d_freq;
        d["d_scm"] = e.d_scm;
        d["phi1"] = rows_of(e.phi1);
        d["phi2"] = rows_of(e.phi2);
        d["outer"] = e.outer;
        d["inner"] = e.inner;
        return d;
      },
      py::arg("model"), py::arg("n1"), py::arg("n2"), py::arg("seed") = 1, py::arg("threads") = 0);
  mod.def(
      "sweep_csv",
      [](std::size_t n1, std::size_t n2, std::uint64_t seed) {
        DistanceConfig cfg;
        cfg.n1 = n1;
        cfg.n2 = n2;
        cfg.seed = seed;
        SimConfig sim;
        sim.prbs_seed = seed;
        py::gil_scoped_release release;
        return sweep_csv(circuit_sweep(default_k1_grid(), cfg, sim), cfg);
      },
      py::arg("n1"), py::arg("n2"), py::arg("seed") = 20260101);
  mod.def("philox4x32_10", [](PhiloxCounter ctr, PhiloxKey key) { return philox4x32_10(ctr, key); });
}
