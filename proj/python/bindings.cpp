#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "ksat/bounds.hpp"
#include "ksat/census.hpp"
#include "ksat/error.hpp"
#include "ksat/experiments.hpp"
#include "ksat/gen.hpp"
#include "ksat/io.hpp"
#include "ksat/marginals.hpp"
#include "ksat/moments.hpp"
#include "ksat/saddle.hpp"

namespace py = pybind11;
using namespace ksat;

namespace {

std::vector<std::vector<int>> clauses_of(const Formula& f)
{
    std::vector<std::vector<int>> out(f.m());
    for (std::size_t i = 0; i < f.m(); ++i)
        for (const Literal& l : f.clause(i)) out[i].push_back(static_cast<int>(l.var + 1) * l.sign);
    return out;
}

Formula formula_of(std::uint32_t n, std::uint32_t k, const std::vector<std::vector<int>>& clauses)
{
    Formula f(n, k);
    std::vector<Literal> c;
    for (const auto& cl : clauses) {
        c.clear();
        for (int v : cl) {
            if (v == 0 || static_cast<std::uint32_t>(std::abs(v)) > n)
                throw std::invalid_argument("literal out of range: " + std::to_string(v));
            const auto var = static_cast<std::uint32_t>(std::abs(v) - 1);
            c.push_back(v > 0 ? Literal::pos(var) : Literal::neg(var));
        }
        f.add_clause(c);
    }
    return f;
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::int_ big_to_py(const BigInt& x) { return py::int_(py::str(x.get_str())); }

std::vector<DegreePair> pairs_of(const std::vector<std::pair<std::int64_t, std::int64_t>>& v) { return v; }

CensusOptions census_options(std::uint32_t cap, unsigned threads)
{
    CensusOptions o;
    o.max_vars = cap;
    o.threads = threads;
    return o;
}

ExperimentConfig experiment_config(std::uint32_t k, std::uint32_t n, std::uint64_t m, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads)
{
    ExperimentConfig c;
    c.k = k;
    c.n = n;
    c.m = m;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "Random k-SAT laboratory core";
    mod.attr("__version__") = "0.1.0";
    py::register_exception<InfeasibleError>(mod, "InfeasibleError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(mod, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<CapExceeded>(mod, "CapExceeded", PyExc_ValueError);
    mod.def("build_id", &build_id);

    py::class_<Formula>(mod, "Formula")
        .def(py::init(&formula_of), py::arg("n"), py::arg("k"), py::arg("clauses"),
             "Build from DIMACS-style clauses (1-based, negative for negation).")
        .def_property_readonly("n", &Formula::n)
        .def_property_readonly("k", &Formula::k)
        .def_property_readonly("m", &Formula::m)
        .def_property_readonly("clauses", &clauses_of)
        .def("negated", &Formula::negated)
        .def("to_dimacs", [](const Formula& f) { return to_dimacs(f); })
        .def_static("from_dimacs", [](const std::string& s) { return from_dimacs(s); })
        .def("degrees", [](const Formula& f) {
            const SignedDegreeSequence d = degree_sequence_of(f);
            std::vector<std::pair<std::int64_t, std::int64_t>> out(d.n());
            for (std::size_t x = 0; x < d.n(); ++x) out[x] = {d.pos(x), d.neg(x)};
            return out;
        })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
        .def("__repr__", [](const Formula& f) {
            return "<Formula n=" + std::to_string(f.n()) + " k=" + std::to_string(f.k()) + " m=" + std::to_string(f.m()) + ">";
        });

    mod.def("clauses_for_density", &clauses_for_density, py::arg("r"), py::arg("n"));
    mod.def("sample_uniform", &sample_uniform, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"));
    mod.def("sample_two_step", &sample_two_step, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"));
    mod.def(
        "sample_planted",
        [](std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed) {
            auto [f, sigma] = sample_planted_pair(n, m, k, seed);
            std::vector<bool> bits(n);
            for (std::uint32_t x = 0; x < n; ++x) bits[x] = sigma[x];
            return py::make_tuple(std::move(f), bits);
        },
        py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"));

    mod.def("majority_weight", [](const Formula& f) { return majority_weight(degree_sequence_of(f)); });
    mod.def(
        "count_satisfying",
        [](const Formula& f, std::uint32_t cap, unsigned threads) { return count_satisfying(f, census_options(cap, threads)); },
        py::arg("formula"), py::arg("cap") = 24, py::arg("threads") = 0);
    mod.def(
        "count_satisfying_backtrack",
        [](const Formula& f, std::uint32_t cap) { return count_satisfying_backtrack(f, census_options(cap, 1)); },
        py::arg("formula"), py::arg("cap") = 24);
    mod.def(
        "empirical_marginals",
        [](const Formula& f, std::uint32_t cap, unsigned threads) { return empirical_marginals(f, census_options(cap, threads)); },
        py::arg("formula"), py::arg("cap") = 24, py::arg("threads") = 0);
    mod.def(
        "mean_distance_to_majority",
        [](const Formula& f, std::uint32_t cap, unsigned threads) {
            return mean_distance_to_majority(f, census_options(cap, threads));
        },
        py::arg("formula"), py::arg("cap") = 24, py::arg("threads") = 0);
    mod.def("bp_conjectured_marginal", &bp_conjectured_marginal, py::arg("d_pos"), py::arg("d_neg"), py::arg("k"));

    mod.def(
        "threshold_bounds",
        [](std::uint32_t k) {
            const ThresholdBounds b = threshold_bounds(k);
            py::dict d;
            d["k"] = b.k;
            d["r_upper"] = b.r_upper;
            d["r_bal"] = b.r_bal;
            d["r_bp"] = b.r_bp;
            d["gap_upper_bp"] = b.gap_upper_bp();
            return d;
        },
        py::arg("k"));
    mod.def("expected_majority_weight", &expected_majority_weight, py::arg("k"), py::arg("r"));
    mod.def("poisson_majority_weight", &poisson_majority_weight, py::arg("k"), py::arg("r"));

    mod.def("entropy", &entropy);
    mod.def("binom_rate", &binom_rate);
    mod.def(
        "solve_first_moment_q", [](const std::vector<double>& ell) { return solve_first_moment_q(ell).q; },
        py::arg("ell"));
    mod.def(
        "solve_pair_q",
        [](const std::vector<double>& ell, const std::vector<double>& omega) {
            const PairMomentSolution s = solve_pair_q(ell, omega);
            return py::make_tuple(s.q, s.q11);
        },
        py::arg("ell"), py::arg("omega"));
    mod.def(
        "pair_exponent",
        [](const std::vector<double>& ell, const std::vector<double>& omega) { return pair_exponent(ell, omega); },
        py::arg("ell"), py::arg("omega"));
    mod.def(
        "verify_offdiag",
        [](std::uint32_t k, double r, std::size_t grid) {
            const OffdiagReport rep = verify_offdiag(k, r, grid);
            py::dict d;
            d["ok"] = rep.ok;
            d["points"] = rep.points;
            d["max_value"] = rep.max_value;
            d["xi"] = rep.xi;
            return d;
        },
        py::arg("k"), py::arg("r"), py::arg("grid") = 100000);

    mod.def(
        "exact_coefficient",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& p, std::int64_t target) {
            return big_to_py(exact_coefficient(pairs_of(p), target));
        },
        py::arg("pairs"), py::arg("target"));
    mod.def(
        "coeff_simple_asymptotic",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& p) { return coeff_simple_asymptotic(pairs_of(p)).log_value; },
        py::arg("pairs"), "Natural log of the central-coefficient approximation.");
    mod.def(
        "solve_rho",
        [](const std::vector<std::pair<std::int64_t, std::int64_t>>& p, double eps) { return solve_rho(pairs_of(p), eps); },
        py::arg("pairs"), py::arg("eps"));
    mod.def(
        "local_limit_bernoulli",
        [](double p, double alpha, std::uint64_t n) { return local_limit(Pgf::bernoulli(p), alpha, n).probability; },
        py::arg("p"), py::arg("alpha"), py::arg("n"));
    mod.def(
        "local_limit_poisson",
        [](double lambda, double alpha, std::uint64_t n) { return local_limit(Pgf::poisson(lambda), alpha, n).probability; },
        py::arg("lam"), py::arg("alpha"), py::arg("n"));

    mod.def(
        "run_majority_skew",
        [](std::uint32_t k, std::uint32_t n, std::uint64_t m, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            return json_to_py(run_majority_skew(experiment_config(k, n, m, trials, seed, threads)).to_json());
        },
        py::arg("k") = 3, py::arg("n") = 20, py::arg("m") = 70, py::arg("trials") = 200, py::arg("seed") = 0,
        py::arg("threads") = 0);
    mod.def(
        "run_marginal_correlation",
        [](std::uint32_t k, std::uint32_t n, std::uint64_t m, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            return json_to_py(run_marginal_correlation(experiment_config(k, n, m, trials, seed, threads)).to_json());
        },
        py::arg("k") = 3, py::arg("n") = 20, py::arg("m") = 60, py::arg("trials") = 300, py::arg("seed") = 0,
        py::arg("threads") = 0);
    mod.def(
        "run_wmaj_fluctuation",
        [](std::uint32_t k, std::uint32_t n, std::uint64_t m, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            return json_to_py(run_wmaj_fluctuation(experiment_config(k, n, m, trials, seed, threads)).to_json());
        },
        py::arg("k") = 3, py::arg("n") = 10000, py::arg("m") = 30000, py::arg("trials") = 1000, py::arg("seed") = 0,
        py::arg("threads") = 0);
}
