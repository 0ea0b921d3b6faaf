#include "pball/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pball/ball_geometry.hpp"
#include "pball/quadrature.hpp"
#include "pball/rng.hpp"

namespace pball {

namespace {

struct IndexRange {
    int lo = 1;
    int hi = 0;  // inclusive; empty when lo > hi
    int length() const { return hi - lo + 1; }
};

// grid indices k in 1..n with k/n inside the interval
IndexRange grid_range(const Interval& iv, int n) {
    IndexRange r;
    r.lo = std::max(1, static_cast<int>(std::ceil(iv.lo * n - 1e-9)));
    r.hi = std::min(n, static_cast<int>(std::floor(iv.hi * n + 1e-9)));
    return r;
}

// Riemann evaluation of the discretized functional on one sampled path
double evaluate_functional(const FunctionalSpec& g, std::span<const double> coords, int n,
                           RandomStream& rng, int pair_budget) {
    const Expr& e = g.integrand();
    const double nd = static_cast<double>(n);
    if (g.arity() == 1) {
        const IndexRange r = grid_range(g.intervals()[0], n);
        if (r.lo > r.hi) return 0.0;
        double xv[1], tv[1];
        const EvalEnv env{.x = {xv, 1}, .t = {tv, 1}};
        CompensatedSum sum;
        for (int k = r.lo; k <= r.hi; ++k) {
            xv[0] = coords[static_cast<std::size_t>(k - 1)];
            tv[0] = k / nd;
            sum.add(eval(e, env));
        }
        return sum.value() / nd;
    }

    const IndexRange r1 = grid_range(g.intervals()[0], n);
    const IndexRange r2 = grid_range(g.intervals()[1], n);
    if (r1.lo > r1.hi || r2.lo > r2.hi) return 0.0;
    const double total = static_cast<double>(r1.length()) * r2.length();
    double xv[2], tv[2];
    const EvalEnv env{.x = {xv, 2}, .t = {tv, 2}};
    CompensatedSum sum;
    if (total <= static_cast<double>(pair_budget)) {
        for (int k1 = r1.lo; k1 <= r1.hi; ++k1) {
            xv[0] = coords[static_cast<std::size_t>(k1 - 1)];
            tv[0] = k1 / nd;
            for (int k2 = r2.lo; k2 <= r2.hi; ++k2) {
                xv[1] = coords[static_cast<std::size_t>(k2 - 1)];
                tv[1] = k2 / nd;
                sum.add(eval(e, env));
            }
        }
        return sum.value() / (nd * nd);
    }
    // unbiased subsampled tuple estimate at bounded cost
    for (int s = 0; s < pair_budget; ++s) {
        const int k1 = r1.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(r1.length())));
        const int k2 = r2.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(r2.length())));
        xv[0] = coords[static_cast<std::size_t>(k1 - 1)];
        tv[0] = k1 / nd;
        xv[1] = coords[static_cast<std::size_t>(k2 - 1)];
        tv[1] = k2 / nd;
        sum.add(eval(e, env));
    }
    return sum.value() * total / (nd * nd * static_cast<double>(pair_budget));
}

struct ChunkAccum {
    CompensatedSum obs_sum;
    CompensatedSum obs_sq;
    std::vector<CompensatedSum> component_sums;
};

struct StageResult {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::vector<double> component_means;
};

bool is_ball(ExperimentRegionKind kind) {
    return kind == ExperimentRegionKind::Full || kind == ExperimentRegionKind::FirstQuadrant;
}

void validate(const ExperimentConfig& config, bool ball) {
    if (config.functionals.empty()) {
        throw std::invalid_argument("experiment needs at least one functional");
    }
    for (const FunctionalSpec& g : config.functionals) {
        if (g.arity() > 2) {
            throw std::invalid_argument(
                "the tuple evaluation path supports functionals of arity <= 2");
        }
    }
    if (config.samples_per_n < 100) {
        throw std::invalid_argument("samples_per_n must be at least 100");
    }
    if (config.chunk_size < 1) throw std::invalid_argument("chunk_size must be positive");
    if (config.pair_subsamples < 1) {
        throw std::invalid_argument("pair_subsamples must be positive");
    }
    if (config.n_grid.empty()) throw std::invalid_argument("n_grid must be nonempty");
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
        if (config.n_grid[i] < 1 || (i > 0 && config.n_grid[i] <= config.n_grid[i - 1])) {
            throw std::invalid_argument("n_grid must be strictly increasing and positive");
        }
    }
    if (ball) {
        if (!is_ball(config.region.kind)) {
            throw std::invalid_argument("run_ball_experiment needs a ball region");
        }
        if (config.region.kind == ExperimentRegionKind::Full && !config.order.even_rational()) {
            throw std::invalid_argument("full-ball experiments require an even-rational order");
        }
        if (config.region.kind == ExperimentRegionKind::FirstQuadrant &&
            config.order.even_rational()) {
            throw std::invalid_argument(
                "first-quadrant experiments require an odd-rational or general-real order");
        }
        if (!(config.order.value() >= 1.0)) {
            throw std::invalid_argument("ball experiments require p >= 1");
        }
    } else {
        if (is_ball(config.region.kind)) {
            throw std::invalid_argument("run_cube_experiment needs a cube region");
        }
        if (!(config.region.a < config.region.b)) {
            throw std::invalid_argument("cube region needs a < b");
        }
    }
}

ExprPtr parse_h(const ExperimentConfig& config) {
    if (!config.h_source) return nullptr;
    ExprPtr h = parse_expression(*config.h_source);
    const ExprInfo info = arity_check(*h);
    if (info.arity > 0 && !info.is_h) {
        throw std::invalid_argument("h must be an expression over y-variables");
    }
    if (info.arity != static_cast<int>(config.functionals.size())) {
        throw std::invalid_argument("h arity must match the number of functionals");
    }
    return h;
}

std::optional<double> analytic_component(const FunctionalSpec& g,
                                         const ExperimentConfig& config) {
    try {
        switch (config.region.kind) {
            case ExperimentRegionKind::Full:
            case ExperimentRegionKind::FirstQuadrant: {
                const Region region = config.region.kind == ExperimentRegionKind::Full
                                          ? Region::Full
                                          : Region::FirstQuadrant;
                if (!g.uses_t() && g.full_intervals()) {
                    return region == Region::Full
                               ? mean_even(g, config.order, config.scale).value
                               : mean_odd(g, config.order, config.scale).value;
                }
                return mean_general(g, config.order, config.scale, region).value;
            }
            case ExperimentRegionKind::Cube:
                return cube_mean(g.integrand(), config.region.a, config.region.b,
                                 CubeMode::Value)
                    .value;
            case ExperimentRegionKind::CubeDerivative: {
                if (config.functional_of == CubeFunctionalOf::Coordinate) {
                    return cube_mean(g.integrand(), config.region.a, config.region.b,
                                     CubeMode::Derivative)
                        .value;
                }
                // path functional: only the running-average identity
                // integral of x(t) = t * E[x'] has a closed limit here,
                //   E (1/n) sum_k x_k -> E[x'] * integral of t dt = E[x']/2
                const auto* var = std::get_if<VariableNode>(&g.integrand().node);
                if (var != nullptr && var->kind == VarKind::X && var->index == 1) {
                    return 0.5 * cube_mean(g.integrand(), config.region.a, config.region.b,
                                           CubeMode::Value)
                                     .value;
                }
                return std::nullopt;
            }
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

// One n-stage: chunked, deterministically merged sampling pass.
StageResult run_stage(const ExperimentConfig& config, const ExprPtr& h, int stage_index, int n) {
    const int samples = config.samples_per_n;
    const int chunk_size = config.chunk_size;
    const int chunks = (samples + chunk_size - 1) / chunk_size;
    const std::size_t n_functionals = config.functionals.size();

    std::optional<PBall> ball;
    if (is_ball(config.region.kind)) {
        const double p = config.order.value();
        const double radius = std::pow(static_cast<double>(n), 1.0 / p) * config.scale;
        ball.emplace(n, config.order, radius,
                     config.region.kind == ExperimentRegionKind::Full ? Region::Full
                                                                      : Region::FirstQuadrant);
    }

    std::vector<ChunkAccum> accums(static_cast<std::size_t>(chunks));
    for (auto& acc : accums) acc.component_sums.resize(n_functionals);

    auto run_chunk = [&](int c) {
        RandomStream rng = RandomStream::derive(config.seed, static_cast<std::uint64_t>(stage_index),
                                                static_cast<std::uint64_t>(c));
        ChunkAccum& acc = accums[static_cast<std::size_t>(c)];
        const int begin = c * chunk_size;
        const int count = std::min(chunk_size, samples - begin);
        std::vector<double> coords(static_cast<std::size_t>(n));
        std::vector<double> path;
        if (config.region.kind == ExperimentRegionKind::CubeDerivative &&
            config.functional_of == CubeFunctionalOf::Path) {
            path.resize(static_cast<std::size_t>(n));
        }
        std::vector<double> ys(n_functionals);
        for (int s = 0; s < count; ++s) {
            std::span<const double> view;
            if (ball) {
                coords = sample_uniform_pball(*ball, rng);
                view = coords;
            } else {
                for (auto& u : coords) u = rng.uniform(config.region.a, config.region.b);
                if (!path.empty()) {
                    CompensatedSum prefix;
                    for (std::size_t k = 0; k < coords.size(); ++k) {
                        prefix.add(coords[k]);
                        path[k] = prefix.value() / static_cast<double>(n);
                    }
                    view = path;
                } else {
                    view = coords;
                }
            }
            for (std::size_t i = 0; i < n_functionals; ++i) {
                ys[i] = evaluate_functional(config.functionals[i], view, n, rng,
                                            config.pair_subsamples);
            }
            const double obs = h ? eval(*h, EvalEnv{.y = ys}) : ys[0];
            acc.obs_sum.add(obs);
            acc.obs_sq.add(obs * obs);
            for (std::size_t i = 0; i < n_functionals; ++i) {
                acc.component_sums[i].add(ys[i]);
            }
        }
    };

    int n_threads = config.threads > 0 ? config.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, chunks));
    if (n_threads == 1) {
        for (int c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const int c = next.fetch_add(1);
                    if (c >= chunks) return;
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // merge in chunk order so the result is independent of scheduling
    CompensatedSum obs_sum, obs_sq;
    std::vector<CompensatedSum> comp(n_functionals);
    for (const ChunkAccum& acc : accums) {
        obs_sum.merge(acc.obs_sum);
        obs_sq.merge(acc.obs_sq);
        for (std::size_t i = 0; i < n_functionals; ++i) comp[i].merge(acc.component_sums[i]);
    }

    StageResult result;
    const double count = static_cast<double>(samples);
    result.mean = obs_sum.value() / count;
    result.variance = (obs_sq.value() - count * result.mean * result.mean) / (count - 1.0);
    if (result.variance < 0.0) result.variance = 0.0;
    result.std_error = std::sqrt(result.variance / count);
    result.component_means.resize(n_functionals);
    for (std::size_t i = 0; i < n_functionals; ++i) {
        result.component_means[i] = comp[i].value() / count;
    }
    return result;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const ExprPtr h = parse_h(config);

    ExperimentReport report;
    for (std::size_t stage = 0; stage < config.n_grid.size(); ++stage) {
        const int n = config.n_grid[stage];
        const StageResult stage_result = run_stage(config, h, static_cast<int>(stage), n);
        report.rows.push_back(
            {n, stage_result.mean, stage_result.variance, stage_result.std_error});
        if (stage + 1 == config.n_grid.size()) {
            report.component_means = stage_result.component_means;
            if (h) {
                ExchangeComparison cmp;
                cmp.empirical_mean = stage_result.mean;
                cmp.empirical_sd = std::sqrt(stage_result.variance);
                cmp.empirical_std_error = stage_result.std_error;
                report.exchange = cmp;
            }
        }
    }

    // analytic side
    std::vector<std::optional<double>> analytic;
    analytic.reserve(config.functionals.size());
    for (const FunctionalSpec& g : config.functionals) {
        analytic.push_back(analytic_component(g, config));
    }
    if (h) {
        const bool complete =
            std::all_of(analytic.begin(), analytic.end(), [](const auto& v) { return v.has_value(); });
        if (complete) {
            std::vector<MeanValueResult> means;
            means.reserve(analytic.size());
            for (const auto& v : analytic) means.push_back({.value = *v});
            report.exchange->h_of_means = pball::exchange(*h, means);
            report.analytic_mean = report.exchange->h_of_means;
        }
    } else {
        report.analytic_mean = analytic[0];
    }

    report.variance_slope = variance_slope(report);
    report.slope_degenerate = !std::isfinite(report.variance_slope);
    const bool all_zero = std::all_of(report.rows.begin(), report.rows.end(),
                                      [](const ReportRow& r) { return r.variance == 0.0; });
    report.slope_pass =
        report.slope_degenerate ? all_zero : report.variance_slope <= -0.8;
    return report;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentReport run_ball_experiment(const ExperimentConfig& config) {
    validate(config, /*ball=*/true);
    return run_experiment(config);
}

ExperimentReport run_cube_experiment(const ExperimentConfig& config) {
    validate(config, /*ball=*/false);
    return run_experiment(config);
}

double variance_slope(const ExperimentReport& report) {
    std::vector<double> lx, ly;
    for (const ReportRow& row : report.rows) {
        if (row.variance > 0.0 && std::isfinite(row.variance)) {
            lx.push_back(std::log(static_cast<double>(row.n)));
            ly.push_back(std::log(row.variance));
        }
    }
    if (lx.size() < 3) return -std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

std::string report_csv(const ExperimentReport& report) {
    std::string out = "n,mean,variance,stderr\n";
    for (const ReportRow& row : report.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += format_double(row.mean);
        out += ',';
        out += format_double(row.variance);
        out += ',';
        out += format_double(row.std_error);
        out += '\n';
    }
    return out;
}

std::string report_json(const ExperimentConfig& config, const ExperimentReport& report) {
    nlohmann::json j;

    nlohmann::json order;
    order["p"] = config.order.value();
    if (config.order.is_rational()) {
        order["p0"] = config.order.p0();
        order["q0"] = config.order.q0();
    }
    order["classification"] = config.order.even_rational()
                                  ? "even-rational"
                                  : (config.order.is_rational() ? "odd-rational" : "general-real");

    nlohmann::json cfg;
    cfg["order"] = order;
    cfg["R"] = config.scale;
    switch (config.region.kind) {
        case ExperimentRegionKind::Full: cfg["region"] = "full"; break;
        case ExperimentRegionKind::FirstQuadrant: cfg["region"] = "first-quadrant"; break;
        case ExperimentRegionKind::Cube: cfg["region"] = "cube"; break;
        case ExperimentRegionKind::CubeDerivative: cfg["region"] = "cube-derivative"; break;
    }
    cfg["a"] = config.region.a;
    cfg["b"] = config.region.b;
    cfg["of"] = config.functional_of == CubeFunctionalOf::Path ? "path" : "coordinate";
    nlohmann::json gs = nlohmann::json::array();
    for (const FunctionalSpec& g : config.functionals) {
        nlohmann::json entry;
        entry["expr"] = g.source();
        nlohmann::json ivs = nlohmann::json::array();
        for (const Interval& iv : g.intervals()) ivs.push_back({iv.lo, iv.hi});
        entry["intervals"] = ivs;
        gs.push_back(entry);
    }
    cfg["g"] = gs;
    cfg["h"] = config.h_source ? nlohmann::json(*config.h_source) : nlohmann::json(nullptr);
    cfg["n_grid"] = config.n_grid;
    cfg["samples_per_n"] = config.samples_per_n;
    cfg["seed"] = config.seed;
    cfg["chunk_size"] = config.chunk_size;
    cfg["threads"] = config.threads;
    cfg["pair_subsamples"] = config.pair_subsamples;
    j["config"] = cfg;

    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& row : report.rows) {
        rows.push_back({{"n", row.n},
                        {"mean", row.mean},
                        {"variance", row.variance},
                        {"stderr", row.std_error}});
    }
    j["rows"] = rows;
    j["analytic_mean"] =
        report.analytic_mean ? nlohmann::json(*report.analytic_mean) : nlohmann::json(nullptr);
    j["variance_slope"] = report.variance_slope;  // -inf serializes as null
    j["slope_degenerate"] = report.slope_degenerate;
    j["slope_pass"] = report.slope_pass;
    j["component_means"] = report.component_means;
    if (report.exchange) {
        nlohmann::json ex;
        ex["empirical_mean"] = report.exchange->empirical_mean;
        ex["empirical_sd"] = report.exchange->empirical_sd;
        ex["empirical_stderr"] = report.exchange->empirical_std_error;
        ex["h_of_means"] = report.exchange->h_of_means
                               ? nlohmann::json(*report.exchange->h_of_means)
                               : nlohmann::json(nullptr);
        j["exchange"] = ex;
    } else {
        j["exchange"] = nullptr;
    }
    return j.dump(2) + "\n";
}

}  // namespace pball
