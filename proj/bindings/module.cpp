// Python bindings for the core operations: spline nonlinearities, problem
// setup, unrolled forward/backward passes, training, baselines, and data
// generation.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <variant>

#include "shrinklearn/backprop.hpp"
#include "shrinklearn/baselines.hpp"
#include "shrinklearn/bench.hpp"
#include "shrinklearn/datagen.hpp"
#include "shrinklearn/dataset_io.hpp"
#include "shrinklearn/model_io.hpp"
#include "shrinklearn/trainer.hpp"
#include "shrinklearn/version.hpp"

namespace py = pybind11;
using namespace shrinklearn;

namespace {

ConstraintSet constraint_from_string(const std::string& name, double lo,
                                     double hi) {
  if (name == "none") return Unconstrained{};
  if (name == "odd") return OddSymmetric{};
  if (name == "box") return Box{lo, hi};
  throw std::invalid_argument("constraint must be none, odd, or box");
}

GammaPolicy gamma_from_optional(std::optional<double> gamma) {
  if (gamma) return FixedGamma{*gamma};
  return AutoGamma{};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Learned shrinkage functions for unrolled ISTA";
  m.attr("__version__") = kVersion;

  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<NumericalError>(m, "NumericalError");

  // spline ------------------------------------------------------------
  m.def("bspline3", py::vectorize(bspline3), py::arg("z"),
        "Cardinal cubic B-spline");
  m.def("bspline2", py::vectorize(bspline2), py::arg("z"),
        "Cardinal quadratic B-spline");

  py::class_<SplineNonlinearity>(m, "SplineNonlinearity")
      .def(py::init([](Vector coefficients, double delta) {
             const Index n = coefficients.size();
             if (n < 5 || n % 2 == 0)
               throw std::invalid_argument(
                   "coefficients length must be odd and at least 5");
             SplineNonlinearity nl;
             nl.coefficients = std::move(coefficients);
             nl.delta = delta;
             nl.grid_halfwidth = static_cast<int>((n - 1) / 2);
             if (!(delta > 0.0))
               throw std::invalid_argument("delta must be positive");
             return nl;
           }),
           py::arg("coefficients"), py::arg("delta"))
      .def_readonly("coefficients", &SplineNonlinearity::coefficients)
      .def_readonly("delta", &SplineNonlinearity::delta)
      .def_readonly("degree", &SplineNonlinearity::degree)
      .def_readonly("grid_halfwidth", &SplineNonlinearity::grid_halfwidth)
      .def_property_readonly("clamp_range", &SplineNonlinearity::clamp_range)
      .def("__call__",
           [](const SplineNonlinearity& nl, const Vector& z) {
             Vector out(z.size());
             for (Index i = 0; i < z.size(); ++i) out[i] = eval_phi(nl, z[i]);
             return out;
           },
           py::arg("z"))
      .def("prime",
           [](const SplineNonlinearity& nl, const Vector& z) {
             Vector out(z.size());
             for (Index i = 0; i < z.size(); ++i)
               out[i] = eval_phi_prime(nl, z[i]);
             return out;
           },
           py::arg("z"));

  m.def("eval_phi", [](const SplineNonlinearity& nl, double z) {
    return eval_phi(nl, z);
  });
  m.def("eval_phi_prime", [](const SplineNonlinearity& nl, double z) {
    return eval_phi_prime(nl, z);
  });
  m.def("fit_soft_threshold", &fit_soft_threshold, py::arg("grid_halfwidth"),
        py::arg("delta"), py::arg("threshold"),
        "Spline coefficients interpolating the soft-threshold at the knots");
  m.def("soft_threshold", py::vectorize(soft_threshold), py::arg("z"),
        py::arg("threshold"));
  m.def(
      "project_coefficients",
      [](const Vector& c, const std::string& constraint, double lo, double hi) {
        return project_coefficients(c, constraint_from_string(constraint, lo, hi));
      },
      py::arg("c"), py::arg("constraint") = "none", py::arg("lo") = 0.0,
      py::arg("hi") = 0.0);

  // problems and forward passes ----------------------------------------
  py::class_<Problem>(m, "Problem")
      .def_readonly("H", &Problem::H)
      .def_readonly("y", &Problem::y)
      .def_readonly("gamma", &Problem::gamma)
      .def_readonly("lambda_max", &Problem::lambda_max)
      .def_readonly("b", &Problem::b)
      .def_property_readonly("n", &Problem::n)
      .def_property_readonly("m", &Problem::m)
      .def("apply_S", &Problem::apply_S, py::arg("v"))
      .def("consistency_error", &Problem::consistency_error);

  m.def(
      "build_problem",
      [](const Matrix& H, const Vector& y, std::optional<double> gamma,
         bool dense) {
        return build_problem(H, y, gamma_from_optional(gamma),
                             dense ? SForm::Dense : SForm::Operator);
      },
      py::arg("H"), py::arg("y"), py::arg("gamma") = std::nullopt,
      py::arg("dense") = true,
      "Problem setup; gamma defaults to 1/lambda_max(H^T H)");

  py::class_<IterateTrace>(m, "IterateTrace")
      .def_readonly("x_final", &IterateTrace::x_final)
      .def_readonly("depth", &IterateTrace::depth)
      .def_property_readonly("z_history", [](const IterateTrace& t) {
        return t.z_history;
      });

  m.def("ista_forward", &ista_forward, py::arg("problem"),
        py::arg("nonlinearity"), py::arg("x0"), py::arg("depth"),
        "Unrolled ISTA pass recording the pre-activations");
  m.def(
      "soft_threshold_ista",
      [](const Problem& p, double lambda, const Vector& x0, int max_iter,
         double tol) {
        const SoftIstaResult res =
            soft_threshold_ista(p, lambda, x0, max_iter, tol);
        return py::make_tuple(res.x, res.iterations_used, res.converged);
      },
      py::arg("problem"), py::arg("lambda_"), py::arg("x0"),
      py::arg("max_iter"), py::arg("tol") = 1e-4,
      "Returns (x, iterations_used, converged)");
  m.def("lasso_objective", &lasso_objective, py::arg("problem"),
        py::arg("lambda_"), py::arg("x"));

  // gradients -----------------------------------------------------------
  m.def("cost", &cost, py::arg("x_true"), py::arg("x_est"));
  m.def("gradient", &gradient, py::arg("problem"), py::arg("nonlinearity"),
        py::arg("trace"), py::arg("x_true"),
        "Gradient of the cost with respect to the spline coefficients");
  m.def("finite_difference_gradient", &finite_difference_gradient,
        py::arg("problem"), py::arg("nonlinearity"), py::arg("x_true"),
        py::arg("depth"), py::arg("step") = 1e-6);
  m.def("max_relative_error", &max_relative_error, py::arg("a"), py::arg("b"));

  // data ---------------------------------------------------------------
  py::class_<Instance>(m, "Instance")
      .def_readonly("x_true", &Instance::x_true)
      .def_readonly("H", &Instance::H)
      .def_readonly("y", &Instance::y)
      .def_readonly("noise_var", &Instance::noise_var)
      .def_readonly("seed", &Instance::seed);

  m.def(
      "generate_dataset",
      [](Index n, Index m, Index count, double rho, double snr_db,
         std::uint64_t seed, bool fixed_h) {
        DatasetOptions opt;
        opt.n = n;
        opt.m = m;
        opt.count = count;
        opt.rho = rho;
        opt.snr_db = snr_db;
        opt.master_seed = seed;
        opt.fixed_h = fixed_h;
        return generate_dataset(opt);
      },
      py::arg("n"), py::arg("m"), py::arg("count"), py::arg("rho") = 0.2,
      py::arg("snr_db") = 30.0, py::arg("seed") = 0,
      py::arg("fixed_h") = false);
  m.def(
      "save_dataset",
      [](const std::string& path, const std::vector<Instance>& instances,
         std::uint64_t seed) {
        if (instances.empty())
          throw std::invalid_argument("empty instance list");
        DatasetHeader header;
        header.n = static_cast<std::uint32_t>(instances[0].x_true.size());
        header.m = static_cast<std::uint32_t>(instances[0].y.size());
        header.count = static_cast<std::uint32_t>(instances.size());
        header.master_seed = seed;
        save_dataset(path, header, instances);
      },
      py::arg("path"), py::arg("instances"), py::arg("seed") = 0);
  m.def("load_dataset", [](const std::string& path) {
    return load_dataset(path).instances;
  });

  // baselines ------------------------------------------------------------
  m.def(
      "fista_lasso",
      [](const Problem& p, double lambda, int max_iter, double tol) {
        const EstimatorResult res = fista_lasso(p, lambda, max_iter, tol);
        return py::make_tuple(res.x_hat, res.iterations_used, res.converged);
      },
      py::arg("problem"), py::arg("lambda_"), py::arg("max_iter") = 1000,
      py::arg("tol") = 1e-4, "Returns (x_hat, iterations_used, converged)");
  m.def(
      "genie_mmse",
      [](const Instance& inst) { return genie_mmse(inst).x_hat; },
      py::arg("instance"), "Support-aware MMSE estimate");

  // training ---------------------------------------------------------------
  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("learned", &TrainReport::learned)
      .def_readonly("snr_per_iteration", &TrainReport::snr_per_iteration)
      .def_readonly("final_train_mse", &TrainReport::final_train_mse)
      .def_readonly("mean_gamma", &TrainReport::mean_gamma)
      .def_readonly("effective_init_threshold",
                    &TrainReport::effective_init_threshold)
      .def_property_readonly("probe_snr", [](const TrainReport& r) {
        std::vector<std::pair<int, double>> out;
        for (const ProbePoint& pt : r.probe_snr)
          out.emplace_back(pt.iteration, pt.snr_db);
        return out;
      })
      .def_property_readonly("grid_delta",
                             [](const TrainReport& r) { return r.grid.delta; })
      .def_property_readonly("grid_half_range", [](const TrainReport& r) {
        return r.grid.half_range;
      });

  m.def(
      "train",
      [](const std::vector<Instance>& dataset, int depth, double mu,
         int batch_size, int iterations, int grid_k, double init_lambda,
         std::uint64_t seed, const std::string& constraint, double lo,
         double hi, std::optional<std::pair<double, double>> grid_range,
         double safety, int probe_size, int probe_interval, int threads) {
        TrainConfig cfg;
        cfg.depth_T = depth;
        cfg.learning_rate_mu = mu;
        cfg.batch_size = batch_size;
        cfg.iterations = iterations;
        cfg.grid_K = grid_k;
        cfg.init_threshold = init_lambda;
        cfg.seed = seed;
        cfg.constraint = constraint_from_string(constraint, lo, hi);
        if (grid_range) {
          cfg.grid_range = GridFixed{grid_range->first, grid_range->second};
        } else {
          cfg.grid_range = GridCalibrated{safety};
        }
        cfg.probe_size = probe_size;
        cfg.probe_interval = probe_interval;
        cfg.threads = threads;
        return train(dataset, cfg);
      },
      py::arg("dataset"), py::arg("depth") = 200, py::arg("mu") = 1e-4,
      py::arg("batch_size") = 1, py::arg("iterations") = 1000,
      py::arg("grid_k") = 200, py::arg("init_lambda") = 0.1,
      py::arg("seed") = 0, py::arg("constraint") = "none", py::arg("lo") = 0.0,
      py::arg("hi") = 0.0, py::arg("grid_range") = std::nullopt,
      py::arg("safety") = 1.5, py::arg("probe_size") = 32,
      py::arg("probe_interval") = 50, py::arg("threads") = 1,
      "Online projected-gradient learning of the nonlinearity");

  m.def(
      "tune_lasso_lambda",
      [](const std::vector<Instance>& dataset,
         const std::vector<double>& candidates, int max_iter, double tol) {
        return tune_lasso_lambda(build_examples(dataset), candidates, max_iter,
                                 tol);
      },
      py::arg("dataset"), py::arg("candidates"), py::arg("max_iter") = 1000,
      py::arg("tol") = 1e-4);

  // metrics and model io -----------------------------------------------
  m.def("snr_db", &snr_db, py::arg("x_true"), py::arg("x_hat"));
  m.def(
      "save_model",
      [](const std::string& path, const SplineNonlinearity& nl,
         double init_threshold) {
        save_model(path, Model{nl, init_threshold});
      },
      py::arg("path"), py::arg("nonlinearity"), py::arg("init_threshold") = 0.0);
  m.def(
      "load_model",
      [](const std::string& path) {
        const Model model = load_model(path);
        return py::make_tuple(model.nonlinearity, model.init_threshold);
      },
      py::arg("path"), "Returns (nonlinearity, init_threshold)");
}
