#include "ksat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

#include "ksat/bounds.hpp"
#include "ksat/census.hpp"
#include "ksat/gen.hpp"
#include "ksat/marginals.hpp"
#include "ksat/rng.hpp"
#include "ksat/stats.hpp"

#ifndef KSAT_BUILD_ID
#define KSAT_BUILD_ID "unknown"
#endif

namespace ksat {

std::string build_id() { return KSAT_BUILD_ID; }

namespace {

unsigned worker_count(unsigned requested)
{
    return std::max(1u, requested ? requested : std::thread::hardware_concurrency());
}

// Runs body(i) for i in [begin, end); results land in caller-owned slots, so order is fixed.
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, const std::function<void(std::uint64_t)>& body)
{
    if (threads <= 1 || end - begin <= 1) {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::uint64_t i = begin + t; i < end; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

// Draws uniform formulas in index order until cfg.trials satisfiable ones are seen.
template <class PerFormula>
void satisfiable_campaign(const ExperimentConfig& cfg, PerFormula&& per_formula)
{
    const std::uint64_t limit = cfg.max_attempts ? cfg.max_attempts : 50 * std::max<std::uint64_t>(cfg.trials, 1);
    const unsigned threads = worker_count(cfg.threads);
    std::uint64_t found = 0;
    for (std::uint64_t start = 0; start < limit && found < cfg.trials;) {
        const std::uint64_t batch = std::min<std::uint64_t>(limit - start, std::max<std::uint64_t>(threads, cfg.trials - found));
        std::vector<std::optional<Formula>> forms(batch);
        std::vector<CensusSummary> sums(batch);
        parallel_for(0, batch, threads, [&](std::uint64_t i) {
            const std::uint64_t s = derive_seed(cfg.seed, start + i);
            Formula f = sample_uniform(cfg.n, cfg.m, cfg.k, s);
            CensusOptions opt;
            opt.max_vars = cfg.cap;
            opt.threads = 1;
            sums[i] = census(f, opt);
            forms[i].emplace(std::move(f));
        });
        for (std::uint64_t i = 0; i < batch && found < cfg.trials; ++i) {
            const bool sat = sums[i].count > 0;
            per_formula(start + i, derive_seed(cfg.seed, start + i), *forms[i], sums[i]);
            found += sat;
        }
        start += batch;
    }
}

WmajSample summarize(std::vector<double> values)
{
    WmajSample s;
    s.mean = mean_of(values);
    s.variance = values.size() > 1 ? variance_of(values) : 0.0;
    s.histogram.assign(50, 0);
    for (double v : values) {
        const auto bin = static_cast<std::size_t>(std::clamp((v - 0.5) / 0.5 * 50.0, 0.0, 49.0));
        ++s.histogram[bin];
    }
    s.values = std::move(values);
    return s;
}

Json sample_json(const WmajSample& s)
{
    Json j;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["histogram"] = s.histogram;
    return j;
}

Json nan_to_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

}  // namespace

Json ExperimentConfig::to_json() const
{
    Json j;
    j["k"] = k;
    j["n"] = n;
    j["m"] = m;
    j["r"] = n ? static_cast<double>(m) / n : 0.0;
    j["trials"] = trials;
    j["seed"] = seed;
    j["cap"] = cap;
    j["build"] = build_id();
    return j;
}

SkewReport run_majority_skew(const ExperimentConfig& cfg)
{
    SkewReport rep;
    rep.config = cfg;
    double sum = 0;
    std::uint64_t below = 0;
    satisfiable_campaign(cfg, [&](std::uint64_t idx, std::uint64_t seed, const Formula& f, const CensusSummary& s) {
        SkewTrial t{idx, seed, s.count, std::numeric_limits<double>::quiet_NaN()};
        if (s.count == 0) {
            ++rep.discarded;
        } else {
            const Assignment maj = majority_vote(degree_sequence_of(f));
            long double acc = 0;
            for (std::uint32_t x = 0; x < f.n(); ++x)
                acc += maj[x] ? static_cast<long double>(s.count - s.true_counts[x])
                              : static_cast<long double>(s.true_counts[x]);
            t.mean_distance = f.n() ? static_cast<double>(acc / (static_cast<long double>(s.count) * f.n())) : 0.0;
            ++rep.satisfiable;
            sum += t.mean_distance;
            below += t.mean_distance < 0.5;
        }
        rep.trials.push_back(t);
    });
    if (rep.satisfiable) {
        rep.mean = sum / static_cast<double>(rep.satisfiable);
        rep.fraction_below_half = static_cast<double>(below) / static_cast<double>(rep.satisfiable);
        rep.delta_hat = 0.5 - rep.mean;
    }
    return rep;
}

Json SkewReport::to_json() const
{
    Json j;
    j["experiment"] = "majority-skew";
    j["config"] = config.to_json();
    Json rows = Json::array();
    for (const auto& t : trials) {
        Json r;
        r["trial"] = t.index;
        r["seed"] = t.seed;
        r["solutions"] = t.solutions;
        r["mean_distance"] = nan_to_null(t.mean_distance);
        rows.push_back(std::move(r));
    }
    j["trials"] = std::move(rows);
    Json s;
    s["satisfiable"] = satisfiable;
    s["discarded_unsatisfiable"] = discarded;
    s["fraction_below_half"] = fraction_below_half;
    s["mean_distance"] = mean;
    s["delta_hat"] = delta_hat;
    j["summary"] = std::move(s);
    return j;
}

CorrelationReport run_marginal_correlation(const ExperimentConfig& cfg)
{
    CorrelationReport rep;
    rep.config = cfg;
    rep.conjectured_slope = std::ldexp(1.0, -static_cast<int>(cfg.k + 1));
    std::vector<double> xs, ys, tied;
    satisfiable_campaign(cfg, [&](std::uint64_t idx, std::uint64_t seed, const Formula& f, const CensusSummary& s) {
        rep.trials.push_back({idx, seed, s.count, std::numeric_limits<double>::quiet_NaN()});
        if (s.count == 0) {
            ++rep.discarded;
            return;
        }
        ++rep.satisfiable;
        const SignedDegreeSequence d = degree_sequence_of(f);
        std::vector<double> rx, ry;
        for (std::uint32_t x = 0; x < f.n(); ++x) {
            const double z = static_cast<double>(d.pos(x) - d.neg(x));
            const double mu = static_cast<double>(s.true_counts[x]) / static_cast<double>(s.count) - 0.5;
            rx.push_back(z);
            ry.push_back(mu);
            if (z == 0.0) tied.push_back(mu);
        }
        if (variance_of(rx) > 0) {
            ++rep.runs_with_slope;
            rep.trials.back().slope = ols_slope(rx, ry);
            rep.runs_with_positive_slope += rep.trials.back().slope > 0;
        }
        xs.insert(xs.end(), rx.begin(), rx.end());
        ys.insert(ys.end(), ry.begin(), ry.end());
    });
    rep.points = xs.size();
    if (xs.size() >= 2) {
        rep.correlation = pearson(xs, ys);
        rep.slope = ols_slope(xs, ys);
    }
    rep.tied_count = tied.size();
    if (!tied.empty()) rep.tied_mean = mean_of(tied);
    if (tied.size() >= 2) rep.tied_std_error = std::sqrt(variance_of(tied) / static_cast<double>(tied.size()));
    return rep;
}

Json CorrelationReport::to_json() const
{
    Json j;
    j["experiment"] = "marginal-correlation";
    j["config"] = config.to_json();
    Json rows = Json::array();
    for (const auto& t : trials) {
        Json r;
        r["trial"] = t.index;
        r["seed"] = t.seed;
        r["solutions"] = t.solutions;
        r["slope"] = nan_to_null(t.slope);
        rows.push_back(std::move(r));
    }
    j["trials"] = std::move(rows);
    Json s;
    s["satisfiable"] = satisfiable;
    s["discarded_unsatisfiable"] = discarded;
    s["points"] = points;
    s["correlation"] = correlation;
    s["slope"] = slope;
    s["conjectured_slope"] = conjectured_slope;
    s["runs_with_positive_slope"] = runs_with_positive_slope;
    s["runs_with_slope"] = runs_with_slope;
    s["tied_mean_offset"] = tied_mean;
    s["tied_std_error"] = tied_std_error;
    s["tied_count"] = tied_count;
    j["summary"] = std::move(s);
    return j;
}

WmajReport run_wmaj_fluctuation(const ExperimentConfig& cfg)
{
    WmajReport rep;
    rep.config = cfg;
    const double r = static_cast<double>(cfg.m) / cfg.n;
    rep.expected = expected_majority_weight(cfg.k, r);
    rep.poisson_expected = poisson_majority_weight(cfg.k, r);
    std::vector<double> uni(cfg.trials), pla(cfg.trials);
    parallel_for(0, cfg.trials, worker_count(cfg.threads), [&](std::uint64_t i) {
        uni[i] = majority_weight(degree_sequence_of(sample_uniform(cfg.n, cfg.m, cfg.k, derive_seed(cfg.seed, 2 * i))));
        pla[i] = majority_weight(
            degree_sequence_of(sample_planted_pair(cfg.n, cfg.m, cfg.k, derive_seed(cfg.seed, 2 * i + 1)).first));
    });
    rep.uniform = summarize(std::move(uni));
    rep.planted = summarize(std::move(pla));
    rep.planted_exceeds_uniform = rep.planted.mean > rep.uniform.mean;
    return rep;
}

Json WmajReport::to_json() const
{
    Json j;
    j["experiment"] = "wmaj-fluctuation";
    j["config"] = config.to_json();
    Json rows = Json::array();
    for (std::size_t i = 0; i < uniform.values.size(); ++i) {
        Json r;
        r["trial"] = i;
        r["uniform"] = uniform.values[i];
        r["planted"] = planted.values[i];
        rows.push_back(std::move(r));
    }
    j["trials"] = std::move(rows);
    Json s;
    s["expected_uniform_mean"] = expected;
    s["poisson_uniform_mean"] = poisson_expected;
    s["uniform"] = sample_json(uniform);
    s["planted"] = sample_json(planted);
    s["planted_exceeds_uniform"] = planted_exceeds_uniform;
    j["summary"] = std::move(s);
    return j;
}

}  // namespace ksat
