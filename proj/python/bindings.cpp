#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphonlab/density.hpp"
#include "graphonlab/drift.hpp"
#include "graphonlab/gaussian.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/harness.hpp"
#include "graphonlab/hierarchy.hpp"
#include "graphonlab/quadrature.hpp"
#include "graphonlab/simulate.hpp"

namespace py = pybind11;
using namespace graphonlab;

namespace {

// Experiment configs cross the boundary as JSON text; results come back the
// same way so the python side stays schema-free.
std::string run_experiment_json(const std::string& config_json) {
    ExperimentConfig cfg = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
    cfg.validate();
    const ExperimentResult result = run_experiment(cfg);
    nlohmann::json out;
    out["summary"] = result.summary;
    out["gates_pass"] = result.gates_pass;
    out["records"] = result.records.rows;
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interacting-diffusion laboratory: graphon coupling, exact Gaussian laws, "
              "grid Fokker-Planck solver, entropy/Fisher functionals";

    py::class_<Graphon>(m, "Graphon")
        .def(py::init<Matrix>(), py::arg("values"))
        .def_static("constant", &Graphon::constant, py::arg("value"), py::arg("blocks") = 1)
        .def_static("load_json", &Graphon::load_json)
        .def("save_json", &Graphon::save_json)
        .def_property_readonly("block_count", &Graphon::block_count)
        .def_property_readonly("values", &Graphon::values)
        .def("__call__", &Graphon::operator())
        .def("refined", &Graphon::refined)
        .def("max_row_mean", &Graphon::max_row_mean);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<Vector>())
        .def_static("constant", &GridFunction::constant)
        .def_readonly("samples", &GridFunction::samples);

    py::class_<InteractionMatrix>(m, "InteractionMatrix")
        .def(py::init<int, Matrix>(), py::arg("n"), py::arg("xi"))
        .def_property_readonly("n", &InteractionMatrix::size)
        .def_property_readonly("xi", &InteractionMatrix::xi)
        .def("max_entry", &InteractionMatrix::max_entry)
        .def("row_sums", &InteractionMatrix::row_sums);

    m.def("interaction_from_graphon", &interaction_from_graphon, py::arg("g"), py::arg("n"));
    m.def("sample_bernoulli_matrix", &sample_bernoulli_matrix, py::arg("g"), py::arg("n"),
          py::arg("seed"));
    m.def("dist_sup_l1", &dist_sup_l1, py::arg("g1"), py::arg("g2"),
          py::arg("resolution_cap") = kDefaultResolutionCap);
    m.def("cut_norm_exact", py::overload_cast<const Matrix&>(&cut_norm_exact));
    m.def("cut_norm_exact", py::overload_cast<const Graphon&>(&cut_norm_exact));
    m.def("cut_norm_lower_bound",
          py::overload_cast<const Matrix&, int, std::uint64_t>(&cut_norm_lower_bound));
    m.def("kernel_apply", &kernel_apply, py::arg("g"), py::arg("f"),
          py::arg("resolution_cap") = kDefaultResolutionCap);
    m.def("kernel_exponential_apply", &kernel_exponential_apply, py::arg("g"), py::arg("f"),
          py::arg("t"), py::arg("resolution_cap") = kDefaultResolutionCap);
    m.def("matrix_exponential", &matrix_exponential);

    py::class_<Domain>(m, "Domain")
        .def_static("torus", &Domain::torus)
        .def_static("euclidean", &Domain::euclidean)
        .def("wrap", &Domain::wrap)
        .def("diff", &Domain::diff);

    py::class_<DriftKernel>(m, "DriftKernel")
        .def_static("zero", &DriftKernel::zero, py::arg("domain") = Domain::euclidean(1))
        .def_static("linear_difference", &DriftKernel::linear_difference, py::arg("rate"),
                    py::arg("dim") = 1)
        .def_static("sine_torus", &DriftKernel::sine_torus, py::arg("amplitude"),
                    py::arg("frequency"), py::arg("period"))
        .def_static("custom_tabulated", &DriftKernel::custom_tabulated, py::arg("table"),
                    py::arg("period"))
        .def("eval", py::overload_cast<double, double>(&DriftKernel::eval, py::const_))
        .def("eval_grad", py::overload_cast<double, double>(&DriftKernel::eval_grad, py::const_))
        .def_property_readonly("sup_b", &DriftKernel::sup_b)
        .def_property_readonly("sup_grad_b", &DriftKernel::sup_grad_b)
        .def_property_readonly("gradient_form", &DriftKernel::gradient_form)
        .def_property_readonly("kind", &DriftKernel::kind_name);

    py::class_<GaussianLaw>(m, "GaussianLaw")
        .def(py::init<Vector, Matrix>(), py::arg("mean"), py::arg("cov"))
        .def_static("standard", &GaussianLaw::standard)
        .def_readonly("mean", &GaussianLaw::mean)
        .def_readonly("cov", &GaussianLaw::cov);

    py::class_<JointGaussianState>(m, "JointGaussianState")
        .def(py::init<int, int, Vector, Matrix, double>(), py::arg("particles"), py::arg("dim"),
             py::arg("mean"), py::arg("cov"), py::arg("time") = 0.0)
        .def_static("isotropic", &JointGaussianState::isotropic, py::arg("particles"),
                    py::arg("dim"), py::arg("variance"), py::arg("mean_value") = 0.0)
        .def_readonly("particles", &JointGaussianState::particles)
        .def_readonly("dim", &JointGaussianState::dim)
        .def_readonly("mean", &JointGaussianState::mean)
        .def_readonly("cov", &JointGaussianState::cov)
        .def_readonly("time", &JointGaussianState::time);

    m.def("evolve_interacting_gaussian", &evolve_interacting_gaussian, py::arg("xi"),
          py::arg("rate"), py::arg("init"), py::arg("T"), py::arg("dt"));
    m.def("evolve_projection_gaussian", &evolve_projection_gaussian, py::arg("xi"),
          py::arg("rate"), py::arg("init"), py::arg("T"), py::arg("dt"));
    m.def("evolve_block_meanfield_gaussian", &evolve_block_meanfield_gaussian, py::arg("g"),
          py::arg("rate"), py::arg("init"), py::arg("T"), py::arg("dt"));
    m.def("marginal_subset", &marginal_subset);
    m.def("relative_entropy_gaussian", &relative_entropy_gaussian);
    m.def("relative_fisher_gaussian", &relative_fisher_gaussian);
    m.def("subset_info", &subset_info);
    m.def("conditional_gaussian", &conditional_gaussian);
    m.def("gaussian_entropy_quadrature", &gaussian_entropy_quadrature, py::arg("p"), py::arg("q"),
          py::arg("points_per_dim") = 2001);
    m.def("gaussian_fisher_quadrature", &gaussian_fisher_quadrature, py::arg("p"), py::arg("q"),
          py::arg("points_per_dim") = 2001);

    py::class_<TorusGrid1D>(m, "TorusGrid1D")
        .def(py::init<int, double>(), py::arg("n"), py::arg("length"))
        .def_readonly("n", &TorusGrid1D::n)
        .def_readonly("length", &TorusGrid1D::length)
        .def_property_readonly("h", &TorusGrid1D::h);

    py::class_<DensityGrid>(m, "DensityGrid")
        .def(py::init<TorusGrid1D, Vector>(), py::arg("grid"), py::arg("values"))
        .def_static("wrapped_gaussian", &DensityGrid::wrapped_gaussian)
        .def_static("uniform", &DensityGrid::uniform)
        .def_readonly("grid", &DensityGrid::grid)
        .def_readonly("values", &DensityGrid::values)
        .def("mass", &DensityGrid::mass);

    m.def("fp_stable_dt", &fp_stable_dt);
    m.def("fp_step", &fp_step, py::arg("p"), py::arg("drift"), py::arg("dt"));
    m.def("solve_coupled_block_fp", &solve_coupled_block_fp, py::arg("g"), py::arg("kernel"),
          py::arg("init"), py::arg("T"), py::arg("dt") = 0.0);
    m.def("entropy_grid", &entropy_grid);
    m.def("fisher_grid", &fisher_grid);
    m.def("tv_grid", &tv_grid);
    m.def("kde_auto_bandwidth", &kde_auto_bandwidth, py::arg("samples"), py::arg("grid"));
    m.def("kde_density", &kde_density, py::arg("samples"), py::arg("grid"),
          py::arg("bandwidth") = 0.0);
    m.def("hessian_log_sup", &hessian_log_sup);

    py::class_<SubsetFunction>(m, "SubsetFunction")
        .def(py::init<int, double>(), py::arg("n"), py::arg("fill") = 0.0)
        .def("__getitem__", [](const SubsetFunction& f, std::uint32_t v) { return f(v); })
        .def("__setitem__",
             [](SubsetFunction& f, std::uint32_t v, double value) { f.at(v) = value; })
        .def("family", &SubsetFunction::family);

    m.def("subset_generator_apply", &subset_generator_apply);
    m.def("source_term", py::overload_cast<const InteractionMatrix&, std::uint32_t>(&source_term));
    m.def("interaction_bound",
          py::overload_cast<const InteractionMatrix&, std::uint32_t>(&interaction_bound));
    m.def("interaction_bound",
          py::overload_cast<const InteractionMatrix&, const std::vector<int>&>(
              &interaction_bound));
    m.def("solve_hierarchy_ode", &solve_hierarchy_ode, py::arg("xi"), py::arg("z0"),
          py::arg("c_scale"), py::arg("T"), py::arg("dt") = 1e-3);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](double dt, double T, std::uint64_t seed) {
                 return SimConfig{dt, T, seed, Scheme::euler_maruyama};
             }),
             py::arg("dt"), py::arg("T"), py::arg("seed"));

    py::class_<EnsembleState>(m, "EnsembleState")
        .def_static("at_point", &EnsembleState::at_point)
        .def_static("gaussian", &EnsembleState::gaussian)
        .def_readonly("replicas", &EnsembleState::replicas)
        .def_readonly("particles", &EnsembleState::particles)
        .def_readonly("dim", &EnsembleState::dim)
        .def_readonly("time", &EnsembleState::time)
        .def_readonly("positions", &EnsembleState::positions);

    m.def("simulate_particle_system", &simulate_particle_system);
    m.def("simulate_independent_projection", &simulate_independent_projection);
    m.def("empirical_moments", [](const EnsembleState& e) {
        const EnsembleMoments mom = empirical_moments(e);
        return py::make_tuple(mom.means, mom.particle_cov, mom.joint_cov);
    });
    m.def("brownian_increment", &brownian_increment);

    m.def("run_experiment", &run_experiment_json, py::arg("config_json"),
          "Run an experiment from a JSON config string; returns a JSON string with "
          "summary and records.");
}
