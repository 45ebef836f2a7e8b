#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "syncbandit/harness.hpp"

namespace py = pybind11;
namespace sb = syncbandit;

namespace {

sb::ProblemInstance load_from_string(const std::string& text) {
    std::istringstream in(text);
    return sb::load_instance(in);
}

std::string save_to_string(const sb::ProblemInstance& instance) {
    std::ostringstream out;
    sb::save_instance(instance, out);
    return out.str();
}

py::dict trial_to_dict(const sb::TrialResult& result) {
    py::list indices, times, costs;
    for (const auto& point : result.points) {
        indices.append(point.update_index);
        times.append(point.sim_time);
        costs.append(point.cost);
    }
    py::dict out;
    out["update_index"] = indices;
    out["sim_time"] = times;
    out["J"] = costs;
    out["final_rates"] = result.final_rates;
    out["seed"] = result.seed;
    return out;
}

}  // namespace

PYBIND11_MODULE(_syncbandit, m) {
    m.doc() = "Synchronization-bandit simulation core";

    py::class_<sb::ProblemInstance>(m, "ProblemInstance")
        .def_property_readonly("num_arms", &sb::ProblemInstance::num_arms)
        .def_readonly("r_min", &sb::ProblemInstance::r_min)
        .def_readonly("r_max", &sb::ProblemInstance::r_max)
        .def_readonly("budget", &sb::ProblemInstance::budget)
        .def_readonly("cost_cap", &sb::ProblemInstance::cost_cap)
        .def("constraint_set", &sb::ProblemInstance::constraint_set, py::arg("epsilon"));

    py::class_<sb::ConstraintSet>(m, "ConstraintSet")
        .def(py::init([](double lo, double hi, double budget, std::size_t dim) {
                 sb::ConstraintSet set{lo, hi, budget, dim};
                 set.validate();
                 return set;
             }),
             py::arg("lo"), py::arg("hi"), py::arg("budget"), py::arg("dim"))
        .def_readonly("lo", &sb::ConstraintSet::lo)
        .def_readonly("hi", &sb::ConstraintSet::hi)
        .def_readonly("budget", &sb::ConstraintSet::budget)
        .def_readonly("dim", &sb::ConstraintSet::dim);

    m.def("generate_polynomial_instance",
          [](std::size_t arms, double r_min, double r_max, double budget, double noise,
             double scaling, double cost_cap, std::uint64_t seed) {
              sb::PolynomialGenParams params{arms, r_min, r_max, budget, noise, scaling, cost_cap};
              return sb::generate_polynomial_instance(params, seed);
          },
          py::arg("arms") = 100, py::arg("r_min") = 0.025, py::arg("r_max") = 3.0,
          py::arg("budget") = 40.0, py::arg("noise") = 0.1, py::arg("scaling") = 5.0,
          py::arg("cost_cap") = 40.0, py::arg("seed") = 0);
    m.def("generate_poisson_instance",
          [](std::size_t arms, double r_min, double r_max, double budget, double lambda_lo,
             double lambda_hi, std::uint64_t seed) {
              sb::PoissonGenParams params{arms, r_min, r_max, budget, lambda_lo, lambda_hi};
              return sb::generate_poisson_instance(params, seed);
          },
          py::arg("arms") = 100, py::arg("r_min") = 0.025, py::arg("r_max") = 6.0,
          py::arg("budget") = 40.0, py::arg("lambda_lo") = 0.005, py::arg("lambda_hi") = 5.0,
          py::arg("seed") = 0);
    m.def("load_instance", &load_from_string, py::arg("text"));
    m.def("save_instance", &save_to_string, py::arg("instance"));

    m.def("policy_cost", &sb::policy_cost, py::arg("instance"), py::arg("rates"));
    m.def("analytic_gradient", &sb::analytic_gradient, py::arg("instance"), py::arg("rates"));
    m.def("oracle_optimal_rates", &sb::oracle_optimal_rates, py::arg("instance"),
          py::arg("constraints"));
    m.def("div_f", &sb::div_f, py::arg("x"), py::arg("r"));
    m.def("barrier_init", &sb::barrier_init, py::arg("constraints"));
    m.def("mirror_descent_step",
          [](double eta, const sb::RateVector& gradient, const sb::RateVector& current,
             const sb::ConstraintSet& constraints) {
              return sb::mirror_descent_step({eta, gradient, current, constraints});
          },
          py::arg("eta"), py::arg("gradient"), py::arg("current"), py::arg("constraints"));
    m.def("euclidean_projection_step",
          [](double eta, const sb::RateVector& gradient, const sb::RateVector& current,
             const sb::ConstraintSet& constraints) {
              return sb::euclidean_projection_step({eta, gradient, current, constraints});
          },
          py::arg("eta"), py::arg("gradient"), py::arg("current"), py::arg("constraints"));
    m.def("grad_j_sample",
          [](py::object probe_cost, double sync_cost, double r_k, double epsilon) {
              std::optional<double> probe;
              if (!probe_cost.is_none()) probe = probe_cost.cast<double>();
              return sb::grad_j_sample(probe, sync_cost, r_k, epsilon);
          },
          py::arg("probe_cost"), py::arg("sync_cost"), py::arg("r_k"), py::arg("epsilon"));
    m.def("corollary_hyperparams",
          [](double budget, double r_min, std::size_t arms, double cost_cap, std::size_t t_max) {
              sb::CorollaryParams params =
                  sb::corollary_hyperparams(budget, r_min, arms, cost_cap, t_max);
              return py::make_tuple(params.eta, params.epsilon, params.regret_bound);
          },
          py::arg("budget"), py::arg("r_min"), py::arg("arms"), py::arg("cost_cap"),
          py::arg("t_max"));

    m.def("run_mirrorsync",
          [](const sb::ProblemInstance& instance, double eta, double epsilon,
             std::size_t rounds, std::uint64_t seed) {
              return trial_to_dict(
                  sb::run_mirrorsync(instance, {eta, epsilon, rounds}, seed));
          },
          py::arg("instance"), py::arg("eta"), py::arg("epsilon"), py::arg("rounds"),
          py::arg("seed") = 0);
    auto run_async = [](const sb::ProblemInstance& instance, double eta, double epsilon,
                        double upd_period, double horizon, std::uint64_t seed, bool psgd,
                        const std::string& local_budget) {
        sb::AsyncParams params;
        params.eta = eta;
        params.epsilon = epsilon;
        params.horizon = horizon;
        params.updates = sb::UpdateSchedule::periodic(upd_period, horizon);
        if (local_budget == "literal")
            params.budget_rule = sb::LocalBudgetRule::Literal;
        else if (local_budget != "conserving")
            throw std::invalid_argument("local_budget must be 'literal' or 'conserving'");
        return trial_to_dict(psgd ? sb::run_async_psgd(instance, params, seed)
                                  : sb::run_async_mirrorsync(instance, params, seed));
    };
    m.def("run_async_mirrorsync",
          [run_async](const sb::ProblemInstance& instance, double eta, double epsilon,
                      double upd_period, double horizon, std::uint64_t seed,
                      const std::string& local_budget) {
              return run_async(instance, eta, epsilon, upd_period, horizon, seed, false,
                               local_budget);
          },
          py::arg("instance"), py::arg("eta"), py::arg("epsilon"), py::arg("upd_period"),
          py::arg("horizon"), py::arg("seed") = 0, py::arg("local_budget") = "conserving");
    m.def("run_async_psgd",
          [run_async](const sb::ProblemInstance& instance, double eta, double epsilon,
                      double upd_period, double horizon, std::uint64_t seed,
                      const std::string& local_budget) {
              return run_async(instance, eta, epsilon, upd_period, horizon, seed, true,
                               local_budget);
          },
          py::arg("instance"), py::arg("eta"), py::arg("epsilon"), py::arg("upd_period"),
          py::arg("horizon"), py::arg("seed") = 0, py::arg("local_budget") = "conserving");
}
