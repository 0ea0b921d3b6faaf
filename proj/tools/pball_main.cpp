// pball: distribution queries, p-ball geometry, exact mean-values of
// integral functionals, and concentration-of-measure experiments.
//
// Every subcommand accepts --config FILE (JSON whose keys mirror the long
// flag names; explicit flags win) and --format plain|csv|json.  JSON output
// echoes the effective configuration, so any result can be reproduced from
// the output alone.  Data goes to stdout, diagnostics to stderr, and the
// exit status is zero exactly when no error was emitted.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pball/ball_geometry.hpp"
#include "pball/concentration.hpp"
#include "pball/distributions.hpp"
#include "pball/expr.hpp"
#include "pball/meanvalue.hpp"
#include "pball/rng.hpp"

using nlohmann::json;
using namespace pball;

namespace {

// ---------------------------------------------------------------------------
// flag plumbing

struct CommonFlags {
    std::string format = "plain";
    std::string config_path;
};

struct OrderFlags {
    std::optional<long long> p0;
    long long q0 = 1;
    std::optional<double> p;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->set_help_flag("--help", "print help");  // keep --h free for expressions
    cmd->add_option("--format", flags.format, "output format: plain, csv or json")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    cmd->add_option("--config", flags.config_path,
                    "JSON config file; keys mirror long flag names, flags override");
}

void add_order(CLI::App* cmd, OrderFlags& flags) {
    cmd->add_option("--p0", flags.p0, "order numerator (parity-explicit rational order)");
    cmd->add_option("--q0", flags.q0, "order denominator (default 1)");
    cmd->add_option("--p", flags.p, "general real order (no parity semantics)");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
    return j;
}

// config-file values fill in flags the user did not pass
template <typename T>
void overlay(const CLI::App& cmd, const json& config, const std::string& key, T& value) {
    const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) return;
    const auto it = config.find(key);
    if (it == config.end()) return;
    value = it->template get<T>();
}

template <typename T>
void overlay(const CLI::App& cmd, const json& config, const std::string& key,
             std::optional<T>& value) {
    const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) return;
    const auto it = config.find(key);
    if (it == config.end()) return;
    value = it->template get<T>();
}

PNormOrder make_order(const OrderFlags& flags) {
    if (flags.p0 && flags.p) {
        throw std::invalid_argument("give either --p0 [--q0] or --p, not both");
    }
    if (flags.p0) return PNormOrder::rational(*flags.p0, flags.q0);
    if (flags.p) return PNormOrder::real(*flags.p);
    throw std::invalid_argument("an order is required: --p0 [--q0] or --p");
}

json order_json(const OrderFlags& flags) {
    json j = json::object();
    if (flags.p0) {
        j["p0"] = *flags.p0;
        j["q0"] = flags.q0;
    } else if (flags.p) {
        j["p"] = *flags.p;
    }
    return j;
}

std::vector<Interval> parse_intervals(const std::string& text) {
    std::vector<Interval> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(';', pos), text.size());
        const std::string part = text.substr(pos, end - pos);
        const std::size_t comma = part.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("intervals must look like \"lo,hi;lo,hi\"");
        }
        out.push_back({std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1))});
        pos = end + 1;
        if (end == text.size()) break;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        out.push_back(std::stoi(text.substr(pos, end - pos)));
        pos = end + 1;
        if (end == text.size()) break;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        out.push_back(std::stod(text.substr(pos, end - pos)));
        pos = end + 1;
        if (end == text.size()) break;
    }
    return out;
}

std::string plain(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10f", v);
    return buf;
}

// either limit distribution, constructed from parity-explicit flags
struct CoordinateLaw {
    std::optional<GenNormal> gn;
    std::optional<GenExponent> ge;

    static CoordinateLaw make(const OrderFlags& order_flags, std::optional<double> scale,
                              std::optional<double> lambda) {
        const PNormOrder order = make_order(order_flags);
        CoordinateLaw law;
        if (scale && lambda) {
            throw std::invalid_argument("give either --R or --lambda, not both");
        }
        if (order.even_rational()) {
            if (lambda) {
                throw std::invalid_argument(
                    "--lambda parametrizes the half-line family; even-rational orders take --R");
            }
            law.gn.emplace(order, scale.value_or(1.0));
        } else if (lambda) {
            law.ge = GenExponent::from_rate(order, *lambda);
        } else {
            law.ge.emplace(order, scale.value_or(1.0));
        }
        return law;
    }

    double pdf(double x) const { return gn ? gn->pdf(x) : ge->pdf(x); }
    double cdf(double x) const { return gn ? gn->cdf(x) : ge->cdf(x); }
    double quantile(double q) const { return gn ? gn->quantile(q) : ge->quantile(q); }
    double sample(RandomStream& rng) const { return gn ? gn->sample(rng) : ge->sample(rng); }
    double moment(int k) const { return gn ? gn->moment(k) : ge->moment(k); }
};

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
    CommonFlags common;
    OrderFlags order;
    std::optional<double> scale;
    std::optional<double> lambda;
    std::optional<double> x;
    std::optional<double> q;
    std::optional<int> k;
    int count = 1;
    std::uint64_t seed = 0;
};

int run_dist(const std::string& op, const CLI::App& cmd, DistArgs& args) {
    const json config = load_config(args.common.config_path);
    overlay(cmd, config, "p0", args.order.p0);
    overlay(cmd, config, "q0", args.order.q0);
    overlay(cmd, config, "p", args.order.p);
    overlay(cmd, config, "R", args.scale);
    overlay(cmd, config, "lambda", args.lambda);
    overlay(cmd, config, "x", args.x);
    overlay(cmd, config, "q", args.q);
    overlay(cmd, config, "k", args.k);
    overlay(cmd, config, "count", args.count);
    overlay(cmd, config, "seed", args.seed);
    overlay(cmd, config, "format", args.common.format);

    const CoordinateLaw law = CoordinateLaw::make(args.order, args.scale, args.lambda);

    json echo = order_json(args.order);
    echo["command"] = "dist " + op;
    if (args.scale) echo["R"] = *args.scale;
    if (args.lambda) echo["lambda"] = *args.lambda;
    echo["format"] = args.common.format;

    if (op == "sample") {
        echo["count"] = args.count;
        echo["seed"] = args.seed;
        RandomStream rng(args.seed);
        std::vector<double> draws(static_cast<std::size_t>(args.count));
        for (auto& d : draws) d = law.sample(rng);
        if (args.common.format == "json") {
            json out;
            out["config"] = echo;
            out["samples"] = draws;
            std::cout << out.dump(2) << "\n";
        } else {
            for (double d : draws) std::cout << plain(d) << "\n";
        }
        return 0;
    }

    double value = 0.0;
    if (op == "pdf" || op == "cdf") {
        if (!args.x) throw std::invalid_argument("--x is required");
        value = op == "pdf" ? law.pdf(*args.x) : law.cdf(*args.x);
        echo["x"] = *args.x;
    } else if (op == "quantile") {
        if (!args.q) throw std::invalid_argument("--q is required");
        value = law.quantile(*args.q);
        echo["q"] = *args.q;
    } else {  // moment
        if (!args.k) throw std::invalid_argument("--k is required");
        value = law.moment(*args.k);
        echo["k"] = *args.k;
    }

    if (args.common.format == "json") {
        json out;
        out["config"] = echo;
        out["value"] = value;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << plain(value) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// geom

struct GeomArgs {
    CommonFlags common;
    OrderFlags order;
    std::optional<int> n;
    double scale = 1.0;
    std::optional<double> r;
    std::string region = "full";
    std::string exponents;
    int count = 1;
    std::uint64_t seed = 0;
};

Region parse_ball_region(const std::string& name) {
    if (name == "full") return Region::Full;
    if (name == "first-quadrant") return Region::FirstQuadrant;
    throw std::invalid_argument("region must be full or first-quadrant");
}

int run_geom(const std::string& op, const CLI::App& cmd, GeomArgs& args) {
    const json config = load_config(args.common.config_path);
    overlay(cmd, config, "p0", args.order.p0);
    overlay(cmd, config, "q0", args.order.q0);
    overlay(cmd, config, "p", args.order.p);
    overlay(cmd, config, "n", args.n);
    overlay(cmd, config, "R", args.scale);
    overlay(cmd, config, "r", args.r);
    overlay(cmd, config, "region", args.region);
    overlay(cmd, config, "exponents", args.exponents);
    overlay(cmd, config, "count", args.count);
    overlay(cmd, config, "seed", args.seed);
    overlay(cmd, config, "format", args.common.format);

    json echo;
    echo["command"] = "geom " + op;
    echo["format"] = args.common.format;

    if (op == "dirichlet") {
        if (args.exponents.empty()) throw std::invalid_argument("--exponents is required");
        const std::vector<double> exps = parse_double_list(args.exponents);
        const double value = dirichlet_integral(exps);
        echo["exponents"] = exps;
        if (args.common.format == "json") {
            std::cout << json{{"config", echo}, {"value", value}}.dump(2) << "\n";
        } else {
            std::cout << plain(value) << "\n";
        }
        return 0;
    }
    if (op == "shell") {
        if (!args.n || !args.r) throw std::invalid_argument("--n and --r are required");
        const double value = shell_ratio(*args.n, *args.r, args.scale);
        echo["n"] = *args.n;
        echo["r"] = *args.r;
        echo["R"] = args.scale;
        if (args.common.format == "json") {
            std::cout << json{{"config", echo}, {"value", value}}.dump(2) << "\n";
        } else {
            std::cout << plain(value) << "\n";
        }
        return 0;
    }

    if (!args.n) throw std::invalid_argument("--n is required");
    const PBall ball(*args.n, make_order(args.order), args.scale, parse_ball_region(args.region));
    echo.update(order_json(args.order));
    echo["n"] = *args.n;
    echo["R"] = args.scale;
    echo["region"] = args.region;

    if (op == "volume") {
        const double value = pball_volume(ball);
        if (args.common.format == "json") {
            json out{{"config", echo}, {"value", value}};
            out["log_value"] = log_pball_volume(ball);
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << plain(value) << "\n";
        }
        return 0;
    }

    // sample
    echo["count"] = args.count;
    echo["seed"] = args.seed;
    RandomStream rng(args.seed);
    std::vector<std::vector<double>> points(static_cast<std::size_t>(args.count));
    for (auto& pt : points) pt = sample_uniform_pball(ball, rng);
    if (args.common.format == "json") {
        std::cout << json{{"config", echo}, {"points", points}}.dump(2) << "\n";
    } else {
        const char* sep = args.common.format == "csv" ? "," : " ";
        for (const auto& pt : points) {
            for (std::size_t i = 0; i < pt.size(); ++i) {
                if (i) std::cout << sep;
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", pt[i]);
                std::cout << buf;
            }
            std::cout << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// mean

struct MeanArgs {
    CommonFlags common;
    OrderFlags order;
    std::vector<std::string> g;
    std::optional<std::string> h;
    double scale = 1.0;
    std::string region;
    double a = 0.0;
    double b = 1.0;
    std::string mode = "value";
    std::string intervals;
};

const char* method_name(MeanMethod m) {
    return m == MeanMethod::TensorQuadrature ? "tensor-quadrature" : "importance-MC";
}

int run_mean(const CLI::App& cmd, MeanArgs& args) {
    const json config = load_config(args.common.config_path);
    overlay(cmd, config, "p0", args.order.p0);
    overlay(cmd, config, "q0", args.order.q0);
    overlay(cmd, config, "p", args.order.p);
    overlay(cmd, config, "g", args.g);
    overlay(cmd, config, "h", args.h);
    overlay(cmd, config, "R", args.scale);
    overlay(cmd, config, "region", args.region);
    overlay(cmd, config, "a", args.a);
    overlay(cmd, config, "b", args.b);
    overlay(cmd, config, "mode", args.mode);
    overlay(cmd, config, "intervals", args.intervals);
    overlay(cmd, config, "format", args.common.format);

    if (args.g.empty()) throw std::invalid_argument("--g is required");

    json echo;
    echo["command"] = "mean";
    echo["g"] = args.g;
    echo["format"] = args.common.format;
    if (args.h) echo["h"] = *args.h;

    std::vector<MeanValueResult> results;
    if (args.region == "cube") {
        echo["region"] = "cube";
        echo["a"] = args.a;
        echo["b"] = args.b;
        echo["mode"] = args.mode;
        const CubeMode mode = args.mode == "derivative" ? CubeMode::Derivative : CubeMode::Value;
        for (const std::string& text : args.g) {
            results.push_back(cube_mean(*parse_expression(text), args.a, args.b, mode));
        }
    } else {
        const PNormOrder order = make_order(args.order);
        std::string region = args.region;
        if (region.empty()) {
            region = order.even_rational() ? "full" : "first-quadrant";
        }
        const Region ball_region = parse_ball_region(region);
        echo.update(order_json(args.order));
        echo["region"] = region;
        echo["R"] = args.scale;
        if (!args.intervals.empty()) echo["intervals"] = args.intervals;
        const std::vector<Interval> intervals = parse_intervals(args.intervals);
        for (const std::string& text : args.g) {
            const FunctionalSpec spec = intervals.empty()
                                            ? FunctionalSpec::parse(text)
                                            : FunctionalSpec::parse(text, intervals);
            if (spec.uses_t() || !spec.full_intervals()) {
                results.push_back(mean_general(spec, order, args.scale, ball_region));
            } else if (ball_region == Region::Full) {
                results.push_back(mean_even(spec, order, args.scale));
            } else {
                results.push_back(mean_odd(spec, order, args.scale));
            }
        }
    }

    std::optional<double> exchange_value;
    if (args.h) {
        exchange_value = pball::exchange(*parse_expression(*args.h), results);
    }

    if (args.common.format == "json") {
        json out;
        out["config"] = echo;
        json comps = json::array();
        for (const MeanValueResult& r : results) {
            comps.push_back({{"value", r.value},
                             {"method", method_name(r.method)},
                             {"error_estimate", r.error_estimate},
                             {"evaluations", r.evaluations}});
        }
        out["components"] = comps;
        out["value"] = exchange_value ? *exchange_value : results[0].value;
        if (exchange_value) out["exchange"] = *exchange_value;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cout << plain(exchange_value ? *exchange_value : results[0].value) << "\n";
    if (results.size() == 1 && !exchange_value) {
        const MeanValueResult& r = results[0];
        std::cout << "method=" << method_name(r.method) << "\n";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.3e", r.error_estimate);
        std::cout << "error_estimate=" << buf << "\n";
        std::cout << "evaluations=" << r.evaluations << "\n";
    } else {
        for (std::size_t i = 0; i < results.size(); ++i) {
            std::cout << "component" << (i + 1) << "=" << plain(results[i].value)
                      << " method=" << method_name(results[i].method) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// concentrate

struct ConcentrateArgs {
    CommonFlags common;
    OrderFlags order;
    std::vector<std::string> g;
    std::optional<std::string> h;
    double scale = 1.0;
    std::string region = "full";
    double a = 0.0;
    double b = 1.0;
    std::string of = "coordinate";
    std::string intervals;
    std::string n_grid = "16,64,256,1024";
    int samples = 20000;
    std::uint64_t seed = 0;
    int chunk = 1024;
    int threads = 0;
    int pairs = 10000;
    std::string out_path;
};

int run_concentrate(const CLI::App& cmd, ConcentrateArgs& args) {
    const json config = load_config(args.common.config_path);
    overlay(cmd, config, "p0", args.order.p0);
    overlay(cmd, config, "q0", args.order.q0);
    overlay(cmd, config, "p", args.order.p);
    overlay(cmd, config, "g", args.g);
    overlay(cmd, config, "h", args.h);
    overlay(cmd, config, "R", args.scale);
    overlay(cmd, config, "region", args.region);
    overlay(cmd, config, "a", args.a);
    overlay(cmd, config, "b", args.b);
    overlay(cmd, config, "of", args.of);
    overlay(cmd, config, "intervals", args.intervals);
    overlay(cmd, config, "n-grid", args.n_grid);
    overlay(cmd, config, "samples", args.samples);
    overlay(cmd, config, "seed", args.seed);
    overlay(cmd, config, "chunk", args.chunk);
    overlay(cmd, config, "threads", args.threads);
    overlay(cmd, config, "pairs", args.pairs);
    overlay(cmd, config, "out", args.out_path);
    overlay(cmd, config, "format", args.common.format);

    if (args.g.empty()) throw std::invalid_argument("--g is required");

    ExperimentConfig experiment;
    const bool cube_region = args.region == "cube" || args.region == "cube-derivative";
    if (args.region == "full") {
        experiment.region.kind = ExperimentRegionKind::Full;
    } else if (args.region == "first-quadrant") {
        experiment.region.kind = ExperimentRegionKind::FirstQuadrant;
    } else if (args.region == "cube") {
        experiment.region.kind = ExperimentRegionKind::Cube;
    } else if (args.region == "cube-derivative") {
        experiment.region.kind = ExperimentRegionKind::CubeDerivative;
    } else {
        throw std::invalid_argument(
            "region must be full, first-quadrant, cube or cube-derivative");
    }
    if (!cube_region) experiment.order = make_order(args.order);
    experiment.scale = args.scale;
    experiment.region.a = args.a;
    experiment.region.b = args.b;
    experiment.functional_of =
        args.of == "path" ? CubeFunctionalOf::Path : CubeFunctionalOf::Coordinate;
    const std::vector<Interval> intervals = parse_intervals(args.intervals);
    for (const std::string& text : args.g) {
        experiment.functionals.push_back(intervals.empty()
                                             ? FunctionalSpec::parse(text)
                                             : FunctionalSpec::parse(text, intervals));
    }
    experiment.h_source = args.h;
    experiment.n_grid = parse_int_list(args.n_grid);
    experiment.samples_per_n = args.samples;
    experiment.seed = args.seed;
    experiment.chunk_size = args.chunk;
    experiment.threads = args.threads;
    experiment.pair_subsamples = args.pairs;

    const ExperimentReport report =
        cube_region ? run_cube_experiment(experiment) : run_ball_experiment(experiment);

    const std::string csv = report_csv(report);
    const std::string js = report_json(experiment, report);
    if (!args.out_path.empty()) {
        std::ofstream csv_file(args.out_path + ".csv", std::ios::binary);
        std::ofstream json_file(args.out_path + ".json", std::ios::binary);
        if (!csv_file || !json_file) {
            throw std::runtime_error("cannot write output files at " + args.out_path);
        }
        csv_file << csv;
        json_file << js;
    }

    if (args.common.format == "json") {
        std::cout << js;
        return 0;
    }
    if (args.common.format == "csv") {
        std::cout << csv;
        return 0;
    }
    for (const ReportRow& row : report.rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "n=%d mean=%.10f variance=%.6e stderr=%.6e", row.n,
                      row.mean, row.variance, row.std_error);
        std::cout << buf << "\n";
    }
    if (report.analytic_mean) {
        std::cout << "analytic_mean=" << plain(*report.analytic_mean) << "\n";
    }
    if (report.exchange && report.exchange->h_of_means) {
        std::cout << "h_of_means=" << plain(*report.exchange->h_of_means)
                  << " empirical=" << plain(report.exchange->empirical_mean) << "\n";
    }
    std::string degenerate_note;
    if (report.slope_degenerate) {
        const bool all_zero =
            std::all_of(report.rows.begin(), report.rows.end(),
                        [](const ReportRow& row) { return row.variance == 0.0; });
        degenerate_note = all_zero ? " (degenerate: zero variance)"
                                   : " (degenerate: fewer than three positive-variance rows)";
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "variance_slope=%.4f slope_pass=%s%s", report.variance_slope,
                  report.slope_pass ? "true" : "false", degenerate_note.c_str());
    std::cout << buf << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-norm ball distributions, mean-values and concentration experiments"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    // dist ------------------------------------------------------------------
    auto* dist = app.add_subcommand("dist", "coordinate-law distribution queries");
    dist->require_subcommand(1);
    DistArgs dist_args;
    std::vector<std::pair<std::string, CLI::App*>> dist_ops;
    for (const char* op : {"pdf", "cdf", "quantile", "sample", "moment"}) {
        auto* cmd = dist->add_subcommand(op);
        add_common(cmd, dist_args.common);
        add_order(cmd, dist_args.order);
        cmd->add_option("--R", dist_args.scale, "scale parameter");
        cmd->add_option("--lambda", dist_args.lambda, "rate parameter (half-line families)");
        const std::string name = op;
        if (name == "pdf" || name == "cdf") {
            cmd->add_option("--x", dist_args.x, "evaluation point");
        }
        if (name == "quantile") {
            cmd->add_option("--q", dist_args.q, "probability level");
        }
        if (name == "moment") {
            cmd->add_option("--k", dist_args.k, "moment order");
        }
        if (name == "sample") {
            cmd->add_option("--count", dist_args.count, "number of draws");
            cmd->add_option("--seed", dist_args.seed, "random seed");
        }
        dist_ops.emplace_back(op, cmd);
    }

    // geom ------------------------------------------------------------------
    auto* geom = app.add_subcommand("geom", "p-ball geometry queries");
    geom->require_subcommand(1);
    GeomArgs geom_args;
    std::vector<std::pair<std::string, CLI::App*>> geom_ops;
    for (const char* op : {"volume", "dirichlet", "shell", "sample"}) {
        auto* cmd = geom->add_subcommand(op);
        add_common(cmd, geom_args.common);
        const std::string name = op;
        if (name == "dirichlet") {
            cmd->add_option("--exponents", geom_args.exponents, "comma-separated exponent list");
        } else {
            cmd->add_option("--n", geom_args.n, "dimension");
            cmd->add_option("--R", geom_args.scale, "radius");
        }
        if (name == "shell") {
            cmd->add_option("--r", geom_args.r, "inner radius");
        }
        if (name == "volume" || name == "sample") {
            add_order(cmd, geom_args.order);
            cmd->add_option("--region", geom_args.region, "full or first-quadrant");
        }
        if (name == "sample") {
            cmd->add_option("--count", geom_args.count, "number of points");
            cmd->add_option("--seed", geom_args.seed, "random seed");
        }
        geom_ops.emplace_back(op, cmd);
    }

    // mean ------------------------------------------------------------------
    auto* mean = app.add_subcommand("mean", "exact mean-values of integral functionals");
    MeanArgs mean_args;
    add_common(mean, mean_args.common);
    add_order(mean, mean_args.order);
    mean->add_option("--g", mean_args.g, "integrand expression(s)");
    mean->add_option("--h", mean_args.h, "outer y-expression (nonlinear exchange)");
    mean->add_option("--R", mean_args.scale, "scale parameter");
    mean->add_option("--region", mean_args.region,
                     "full, first-quadrant or cube (default from parity)");
    mean->add_option("--a", mean_args.a, "cube lower bound");
    mean->add_option("--b", mean_args.b, "cube upper bound");
    mean->add_option("--mode", mean_args.mode, "cube coordinates: value or derivative")
        ->check(CLI::IsMember({"value", "derivative"}));
    mean->add_option("--intervals", mean_args.intervals,
                     "integration intervals \"lo,hi;lo,hi\" within [0,1]");

    // concentrate -----------------------------------------------------------
    auto* conc = app.add_subcommand("concentrate", "sampling experiments across dimensions");
    ConcentrateArgs conc_args;
    add_common(conc, conc_args.common);
    add_order(conc, conc_args.order);
    conc->add_option("--g", conc_args.g, "integrand expression(s)");
    conc->add_option("--h", conc_args.h, "outer y-expression");
    conc->add_option("--R", conc_args.scale, "scale parameter");
    conc->add_option("--region", conc_args.region,
                     "full, first-quadrant, cube or cube-derivative");
    conc->add_option("--a", conc_args.a, "cube lower bound");
    conc->add_option("--b", conc_args.b, "cube upper bound");
    conc->add_option("--of", conc_args.of, "cube-derivative functional input: coordinate or path")
        ->check(CLI::IsMember({"coordinate", "path"}));
    conc->add_option("--intervals", conc_args.intervals, "integration intervals per axis");
    conc->add_option("--n-grid", conc_args.n_grid, "comma-separated dimension grid");
    conc->add_option("--samples", conc_args.samples, "samples per dimension");
    conc->add_option("--seed", conc_args.seed, "random seed");
    conc->add_option("--chunk", conc_args.chunk, "samples per derived stream");
    conc->add_option("--threads", conc_args.threads, "worker threads (0 = hardware)");
    conc->add_option("--pairs", conc_args.pairs, "tuple budget for arity-2 functionals");
    conc->add_option("--out", conc_args.out_path, "write <out>.csv and <out>.json");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [op, cmd] : dist_ops) {
            if (cmd->parsed()) return run_dist(op, *cmd, dist_args);
        }
        for (const auto& [op, cmd] : geom_ops) {
            if (cmd->parsed()) return run_geom(op, *cmd, geom_args);
        }
        if (mean->parsed()) return run_mean(*mean, mean_args);
        if (conc->parsed()) return run_concentrate(*conc, conc_args);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
