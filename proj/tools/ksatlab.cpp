// ksatlab: command-line front end for the ksat library.
// Exit codes: 0 success, 1 verification or numerical failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksat/bounds.hpp"
#include "ksat/census.hpp"
#include "ksat/core.hpp"
#include "ksat/error.hpp"
#include "ksat/experiments.hpp"
#include "ksat/gen.hpp"
#include "ksat/io.hpp"
#include "ksat/marginals.hpp"
#include "ksat/moments.hpp"
#include "ksat/saddle.hpp"

using namespace ksat;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint32_t k = 3;
    std::uint32_t n = 20;
    std::uint64_t m = 0;
    double r = 0;
    std::uint64_t seed = 0;
    std::uint32_t cap = 24;
    unsigned threads = 0;
    std::string out;
    std::string format = "text";

    CLI::Option* k_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* r_opt = nullptr;

    bool json() const { return format == "json"; }
    bool has_density() const { return m_opt->count() || r_opt->count(); }

    std::uint64_t clauses() const
    {
        if (m_opt->count()) return m;
        if (r_opt->count()) return clauses_for_density(r, n);
        throw UsageError("one of --m or --r is required");
    }
};

void add_common(CLI::App* sub, RunConfig& c, bool instance_flags)
{
    if (instance_flags) {
        c.k_opt = sub->add_option("--k", c.k, "clause width")->check(CLI::Range(1u, 61u));
        c.n_opt = sub->add_option("--n", c.n, "number of variables")->check(CLI::PositiveNumber);
        c.m_opt = sub->add_option("--m", c.m, "number of clauses");
        c.r_opt = sub->add_option("--r", c.r, "clause density; m = floor(r n + 1/2)")->check(CLI::NonNegativeNumber);
        c.m_opt->excludes(c.r_opt);
        sub->add_option("--seed", c.seed, "random seed (default 0)");
    }
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--threads", c.threads, "worker threads (default: all cores)");
}

class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot open output file: " + path);
        }
    }
    std::ostream& operator()() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file: " + path);
    return in;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    return v;
}

Json big_json(const BigInt& x) { return x.get_str(); }

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string model = "uniform";
    std::string degrees;
    std::string meta;
};

void run_gen(RunConfig& c, const GenArgs& g)
{
    Json meta;
    meta["model"] = g.model;
    meta["seed"] = c.seed;
    meta["build"] = build_id();
    Sink sink(c.out);

    if (g.model == "given-degrees") {
        if (g.degrees.empty()) throw UsageError("--degrees is required for model given-degrees");
        auto in = open_input(g.degrees);
        const SignedDegreeSequence d = parse_degrees(in);
        const Formula f = sample_formula_given_degrees(d, c.seed);
        write_dimacs(sink(), f);
        meta["k"] = f.k();
        meta["n"] = f.n();
        meta["m"] = f.m();
    } else {
        const std::uint64_t m = c.clauses();
        meta["k"] = c.k;
        meta["n"] = c.n;
        meta["m"] = m;
        if (c.r_opt->count()) meta["r"] = c.r;
        if (g.model == "uniform") {
            write_dimacs(sink(), sample_uniform(c.n, m, c.k, c.seed));
        } else if (g.model == "two-step") {
            write_dimacs(sink(), sample_two_step(c.n, m, c.k, c.seed));
        } else if (g.model == "degrees") {
            write_degrees(sink(), sample_degree_sequence(c.n, m, c.k, c.seed));
        } else if (g.model == "planted") {
            const auto [f, sigma] = sample_planted_pair(c.n, m, c.k, c.seed);
            write_dimacs(sink(), f);
            std::string bits;
            for (std::size_t x = 0; x < sigma.size(); ++x) bits += sigma[x] ? '1' : '0';
            meta["planted"] = bits;
        }
    }
    if (!g.meta.empty()) {
        std::ofstream mo(g.meta, std::ios::binary);
        if (!mo) throw UsageError("cannot open metadata file: " + g.meta);
        mo << meta.dump() << '\n';
    }
}

// ---------------------------------------------------------------- instance input

Formula load_or_sample(RunConfig& c, const std::string& in_path)
{
    if (!in_path.empty()) {
        auto in = open_input(in_path);
        return parse_dimacs(in, c.k_opt->count() ? std::optional<std::uint32_t>(c.k) : std::nullopt);
    }
    if (!c.has_density()) throw UsageError("give --in or an instance via --n and --m/--r");
    return sample_uniform(c.n, c.clauses(), c.k, c.seed);
}

// ---------------------------------------------------------------- census

void run_census(RunConfig& c, const std::string& in_path, bool spectrum)
{
    const Formula f = load_or_sample(c, in_path);
    CensusOptions opt;
    opt.max_vars = c.cap;
    opt.threads = c.threads;
    if (f.n() > c.cap)
        throw CapExceeded("instance has n = " + std::to_string(f.n()) + " variables, above --cap " +
                          std::to_string(c.cap));
    const CensusSummary s = census(f, opt);
    std::vector<double> marg(f.n(), 0.0);
    for (std::uint32_t x = 0; x < f.n(); ++x)
        if (s.count) marg[x] = static_cast<double>(s.true_counts[x]) / static_cast<double>(s.count);
    const double skew = s.count ? mean_distance_to_majority(f, opt) : NAN;
    std::vector<std::uint64_t> spec;
    if (spectrum) spec = pair_distance_spectrum(f, opt);

    Sink sink(c.out);
    auto& os = sink();
    if (c.json()) {
        Json j;
        j["k"] = f.k();
        j["n"] = f.n();
        j["m"] = f.m();
        j["count"] = s.count;
        j["marginals"] = marg;
        j["mean_distance_to_majority"] = nullable(skew);
        if (spectrum) j["pair_distance_spectrum"] = spec;
        os << j.dump() << '\n';
        return;
    }
    os << "k " << f.k() << "\nn " << f.n() << "\nm " << f.m() << "\ncount " << s.count << '\n';
    os << std::setprecision(17);
    if (s.count) os << "mean_distance_to_majority " << skew << '\n';
    for (std::uint32_t x = 0; x < f.n(); ++x) os << "marginal " << x + 1 << ' ' << marg[x] << '\n';
    for (std::size_t t = 0; t < spec.size(); ++t) os << "spectrum " << t << ' ' << spec[t] << '\n';
}

// ---------------------------------------------------------------- marginals

void run_marginals(RunConfig& c, const std::string& in_path, const std::string& degrees_path)
{
    std::optional<SignedDegreeSequence> d;
    if (!degrees_path.empty()) {
        auto in = open_input(degrees_path);
        d = parse_degrees(in);
    } else {
        d = degree_sequence_of(load_or_sample(c, in_path));
    }
    const TypeTable table(*d);
    const Assignment maj = majority_vote(*d);
    Sink sink(c.out);
    auto& os = sink();
    if (!c.json()) os << "# x d_pos d_neg p_d good sigma_maj\n" << std::setprecision(17);
    for (std::size_t x = 0; x < d->n(); ++x) {
        const double p = table.value(table.var_type(x));
        if (c.json()) {
            Json j;
            j["x"] = x + 1;
            j["d_pos"] = d->pos(x);
            j["d_neg"] = d->neg(x);
            j["p_d"] = p;
            j["good"] = table.good(x);
            j["sigma_maj"] = maj[x];
            os << j.dump() << '\n';
        } else {
            os << x + 1 << ' ' << d->pos(x) << ' ' << d->neg(x) << ' ' << p << ' ' << table.good(x) << ' '
               << maj[x] << '\n';
        }
    }
}

// ---------------------------------------------------------------- moments

struct MomentArgs {
    std::string type_spec;
    std::string omega;
    std::size_t grid = 100000;
};

void run_moments(RunConfig& c, const MomentArgs& a)
{
    if (c.k < 2) throw UsageError("moments needs --k >= 2");
    const double r = c.r_opt->count() ? c.r : threshold_bounds(std::max<std::uint32_t>(c.k, 3)).r_bp;
    std::vector<double> ell = a.type_spec.empty() ? std::vector<double>(c.k, 0.5) : parse_list(a.type_spec);
    if (ell.size() != c.k) throw UsageError("--type-spec needs exactly k entries");
    for (double t : ell)
        if (!(t > 0 && t < 1)) throw UsageError("--type-spec entries must lie in (0,1)");

    Json j;
    j["k"] = c.k;
    j["r"] = r;
    j["type"] = ell;

    const FirstMomentSolution fm = solve_first_moment_q(ell);
    j["first_moment"] = {{"q", fm.q}, {"residual", fm.residual}, {"clause_term", first_moment_clause_term(fm)}};

    const std::vector<double> star = omega_star(ell);
    const std::vector<double> omega = a.omega.empty() ? star : parse_list(a.omega);
    if (omega.size() != c.k) throw UsageError("--omega needs exactly k entries");
    const PairMomentSolution pm = solve_pair_q(ell, omega);
    j["pair"] = {{"omega", omega},
                 {"q", pm.q},
                 {"q11", pm.q11},
                 {"residual", pm.residual},
                 {"exponent", pair_exponent(pm)}};

    const std::vector<double> grad = pair_gradient_at_star(ell);
    double gnorm = 0;
    for (double g : grad) gnorm = std::max(gnorm, std::fabs(g));
    const HessianReport h = check_hessian_bound(ell);
    const double bound = std::pow(static_cast<double>(c.k), 6) * std::pow(4.0, -static_cast<double>(c.k));
    j["stationarity"] = {{"gradient_max_norm", gnorm},
                         {"hessian_max_abs", h.max_abs},
                         {"hessian_bound_k6_4mk", bound},
                         {"hessian_within_bound", h.max_abs <= bound}};

    OffdiagReport od;
    if (c.k >= 3) {
        od = verify_offdiag(c.k, r, a.grid);
        j["offdiag"] = {{"xi", od.xi},
                        {"points", od.points},
                        {"max_value", nullable(od.max_value)},
                        {"argmax", od.argmax},
                        {"ok", od.ok}};
    }
    j["caveat"] = "polylog factors in the tolerances are fixed to k^3 (vectors) and k^6 (Hessian)";

    Sink sink(c.out);
    auto& os = sink();
    if (c.json())
        os << j.dump() << '\n';
    else
        os << j.dump(2) << '\n';
    if (!od.ok) throw VerificationFailure("off-diagonal exponent non-negative at x = " + std::to_string(od.first_failure));
}

// ---------------------------------------------------------------- saddle

void run_saddle(RunConfig& c, const std::string& degrees_path, std::optional<double> eps)
{
    std::optional<SignedDegreeSequence> d;
    if (!degrees_path.empty()) {
        auto in = open_input(degrees_path);
        d = parse_degrees(in);
    } else {
        if (!c.has_density()) throw UsageError("give --degrees or --n with --m/--r");
        d = sample_degree_sequence(c.n, c.clauses(), c.k, c.seed);
    }
    const std::vector<DegreePair> pairs = degree_pairs(*d);
    const std::int64_t M = total_degree(pairs);
    if (M % 2) throw UsageError("total degree M must be even");

    Json j;
    j["N"] = pairs.size();
    j["M"] = M;
    if (!eps) {
        const BigInt exact = exact_coefficient(pairs, M / 2);
        const Asymptotic a = coeff_simple_asymptotic(pairs);
        j["kind"] = "simple";
        j["exact"] = big_json(exact);
        j["log_exact"] = log_big(exact);
        j["asymptotic"] = a.value();
        j["log_asymptotic"] = a.log_value;
        j["ratio"] = std::exp(log_big(exact) - a.log_value);
    } else {
        const double rho = solve_rho(pairs, *eps);
        const Asymptotic a = coeff_triple_asymptotic(pairs, *eps);
        j["kind"] = "triple";
        j["eps"] = *eps;
        j["rho"] = rho;
        j["rho_expansion"] = rho_expansion(pairs, *eps);
        j["asymptotic"] = a.value();
        j["log_asymptotic"] = a.log_value;
        try {
            const BigInt exact = exact_triple_coefficient(pairs, *eps);
            j["exact"] = big_json(exact);
            j["log_exact"] = log_big(exact);
            j["ratio"] = std::exp(log_big(exact) - a.log_value);
        } catch (const std::invalid_argument& e) {
            j["exact"] = nullptr;
            j["ratio"] = nullptr;
            j["exact_skipped"] = e.what();
        }
    }
    Sink sink(c.out);
    sink() << (c.json() ? j.dump() : j.dump(2)) << '\n';
}

// ---------------------------------------------------------------- bounds

void run_bounds(RunConfig& c, std::uint32_t k, std::optional<std::uint32_t> k_max)
{
    const std::uint32_t last = k_max.value_or(k);
    if (last < k) throw UsageError("--k-max must be at least --k");
    Sink sink(c.out);
    auto& os = sink();
    Json rows = Json::array();
    for (std::uint32_t q = k; q <= last; ++q) {
        const ThresholdBounds b = threshold_bounds(q);
        Json row;
        row["k"] = q;
        row["r_upper"] = b.r_upper;
        row["r_bal"] = b.r_bal;
        row["r_bp"] = b.r_bp;
        row["gap_upper_bp"] = b.gap_upper_bp();
        rows.push_back(std::move(row));
    }
    if (c.json()) {
        Json j = k_max ? Json{{"bounds", rows}} : rows[0];
        j["caveat"] = "leading order only; o_k(1) and eps_k = O(1/k) corrections omitted";
        os << j.dump() << '\n';
        return;
    }
    os << std::fixed << std::setprecision(4);
    os << std::setw(4) << "k" << std::setw(16) << "r_upper" << std::setw(16) << "r_bal" << std::setw(16) << "r_bp"
       << '\n';
    for (const auto& row : rows)
        os << std::setw(4) << row["k"].get<std::uint32_t>() << std::setw(16) << row["r_upper"].get<double>()
           << std::setw(16) << row["r_bal"].get<double>() << std::setw(16) << row["r_bp"].get<double>() << '\n';
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string name;
    std::uint64_t trials = 0;
    std::string json_out;
    std::uint64_t max_attempts = 0;
    CLI::Option* trials_opt = nullptr;
};

void run_experiment(RunConfig& c, const ExperimentArgs& a)
{
    ExperimentConfig cfg;
    // Per-experiment defaults; explicit flags override.
    if (a.name == "wmaj") {
        cfg.k = 3;
        cfg.n = 10000;
        cfg.m = 30000;
        cfg.trials = 1000;
    } else {
        cfg.k = 3;
        cfg.n = 20;
        cfg.m = a.name == "skew" ? 70 : 60;
        cfg.trials = a.name == "skew" ? 200 : 300;
    }
    if (c.k_opt->count()) cfg.k = c.k;
    if (c.n_opt->count()) cfg.n = c.n;
    if (c.has_density()) cfg.m = c.clauses();
    else if (c.n_opt->count())
        throw UsageError("--n given without --m or --r");
    if (a.trials_opt->count()) cfg.trials = a.trials;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.cap = c.cap;
    cfg.max_attempts = a.max_attempts;
    if (a.name != "wmaj" && cfg.n > cfg.cap)
        throw CapExceeded("n = " + std::to_string(cfg.n) + " exceeds --cap " + std::to_string(cfg.cap));

    Json report;
    if (a.name == "skew")
        report = run_majority_skew(cfg).to_json();
    else if (a.name == "correlation")
        report = run_marginal_correlation(cfg).to_json();
    else
        report = run_wmaj_fluctuation(cfg).to_json();

    Json summary;
    summary["experiment"] = report["experiment"];
    summary["config"] = report["config"];
    summary["summary"] = report["summary"];

    const std::string& path = a.json_out.empty() ? c.out : a.json_out;
    {
        Sink lines(path);
        for (const auto& row : report["trials"]) lines() << row.dump() << '\n';
        lines() << summary.dump() << '\n';
    }
    if (!a.json_out.empty()) {
        Sink sink(c.out);
        sink() << (c.json() ? summary.dump() : summary.dump(2)) << '\n';
    }
}

// ---------------------------------------------------------------- errors

bool wants_json(int argc, char** argv)
{
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--format=json") return true;
        if (a == "--format" && i + 1 < argc && std::string(argv[i + 1]) == "json") return true;
    }
    return false;
}

int report_error(bool json, const std::string& kind, const std::string& message, int code)
{
    if (json)
        std::cerr << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    else
        std::cerr << "ksatlab: " << kind << ": " << message << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random k-SAT toolkit: samplers, exhaustive census, moment exponents, saddle-point coefficients"};
    app.require_subcommand(1);
    app.set_version_flag("--version", build_id());

    RunConfig gen_cfg, cen_cfg, mar_cfg, mom_cfg, sad_cfg, bnd_cfg, exp_cfg;

    auto* gen = app.add_subcommand("gen", "sample a formula or degree sequence");
    add_common(gen, gen_cfg, true);
    GenArgs gen_args;
    gen->add_option("--model", gen_args.model, "uniform, two-step, planted, degrees, given-degrees")
        ->check(CLI::IsMember({"uniform", "two-step", "planted", "degrees", "given-degrees"}));
    gen->add_option("--degrees", gen_args.degrees, "degree-sequence file (model given-degrees)");
    gen->add_option("--meta", gen_args.meta, "write JSON metadata to this path");

    auto* cen = app.add_subcommand("census", "exhaustive solution census");
    add_common(cen, cen_cfg, true);
    std::string census_in;
    bool spectrum = false;
    cen->add_option("--in", census_in, "DIMACS input (otherwise a uniform formula is sampled)");
    cen->add_option("--cap", cen_cfg.cap, "refuse instances with more variables (max 30)")->check(CLI::Range(1u, 30u));
    cen->add_flag("--spectrum", spectrum, "include the pair-distance spectrum");

    auto* mar = app.add_subcommand("marginals", "per-variable degrees, BP marginal and majority vote");
    add_common(mar, mar_cfg, true);
    std::string mar_in, mar_degrees;
    mar->add_option("--in", mar_in, "DIMACS input");
    mar->add_option("--degrees", mar_degrees, "degree-sequence input");

    auto* mom = app.add_subcommand("moments", "first/second moment fixed points and exponents");
    add_common(mom, mom_cfg, true);
    MomentArgs mom_args;
    mom->add_option("--type-spec", mom_args.type_spec, "comma-separated clause type l_1,...,l_k (default all 1/2)");
    mom->add_option("--omega", mom_args.omega, "comma-separated overlap omega_1,...,omega_k (default omega*)");
    mom->add_option("--grid", mom_args.grid, "off-diagonal grid size")->check(CLI::PositiveNumber);

    auto* sad = app.add_subcommand("saddle", "central coefficient: exact versus saddle point");
    add_common(sad, sad_cfg, true);
    std::string sad_degrees;
    std::optional<double> eps;
    sad->add_option("--degrees", sad_degrees, "degree-sequence input");
    sad->add_option("--eps", eps, "triple coefficient at u-power (1/4 + eps) M");

    auto* bnd = app.add_subcommand("bounds", "closed-form threshold bounds");
    add_common(bnd, bnd_cfg, false);
    std::uint32_t bk = 0;
    std::optional<std::uint32_t> bk_max;
    bnd->add_option("--k", bk, "clause width")->required()->check(CLI::Range(3u, 1000u));
    bnd->add_option("--k-max", bk_max, "print a table for k..k-max")->check(CLI::Range(3u, 1000u));

    auto* exp = app.add_subcommand("experiment", "simulation campaigns: skew, correlation, wmaj");
    add_common(exp, exp_cfg, true);
    ExperimentArgs exp_args;
    exp->add_option("name", exp_args.name, "skew, correlation or wmaj")
        ->required()
        ->check(CLI::IsMember({"skew", "correlation", "wmaj"}));
    exp_args.trials_opt = exp->add_option("--trials", exp_args.trials, "number of (satisfiable) trials");
    exp->add_option("--json-out", exp_args.json_out, "JSON-lines results path");
    exp->add_option("--cap", exp_cfg.cap, "enumeration cap on n (max 30)")->check(CLI::Range(1u, 30u));
    exp->add_option("--max-attempts", exp_args.max_attempts, "formula draws before giving up (default 50 x trials)");

    const bool json = wants_json(argc, argv);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(json, "usage", e.what(), 2);
    }

    try {
        if (*gen) run_gen(gen_cfg, gen_args);
        else if (*cen) run_census(cen_cfg, census_in, spectrum);
        else if (*mar) run_marginals(mar_cfg, mar_in, mar_degrees);
        else if (*mom) run_moments(mom_cfg, mom_args);
        else if (*sad) run_saddle(sad_cfg, sad_degrees, eps);
        else if (*bnd) run_bounds(bnd_cfg, bk, bk_max);
        else if (*exp) run_experiment(exp_cfg, exp_args);
    } catch (const CapExceeded& e) {
        return report_error(json, "cap_exceeded", e.what(), 2);
    } catch (const InfeasibleError& e) {
        return report_error(json, "infeasible", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return report_error(json, "usage", e.what(), 2);
    } catch (const VerificationFailure& e) {
        return report_error(json, "verification_failed", e.what(), 1);
    } catch (const ConvergenceError& e) {
        return report_error(json, "convergence", e.what(), 1);
    } catch (const std::exception& e) {
        return report_error(json, "error", e.what(), 1);
    }
    return 0;
}
