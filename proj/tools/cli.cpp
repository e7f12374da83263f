#include "lpplab_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpplab/brownian.hpp"
#include "lpplab/estimate.hpp"
#include "lpplab/events.hpp"
#include "lpplab/field.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/oracle.hpp"
#include "lpplab/passage.hpp"
#include "lpplab/rng.hpp"
#include "lpplab/scaling.hpp"
#include "lpplab/version.hpp"

namespace lpplab::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kStationarySubStream = 0xC3A5C85C97CB3127ull;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Experiment-defining config only: execution details (thread count, runtime)
// stay out so reruns with different worker counts emit identical bytes.
struct ConfigEcho {
    std::vector<std::pair<std::string, std::string>> items;

    void add(const std::string& key, const std::string& value) { items.emplace_back(key, value); }
    void add(const std::string& key, std::int64_t v) { add(key, std::to_string(v)); }
    void add(const std::string& key, std::uint64_t v) { add(key, std::to_string(v)); }
    void add(const std::string& key, double v) { add(key, fmt_double(v)); }

    std::string line() const {
        std::string out;
        for (const auto& [k, v] : items) {
            if (!out.empty()) out += ' ';
            out += k + '=' + v;
        }
        return out;
    }

    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : items) j[k] = v;
        return j;
    }
};

struct OutputTarget {
    std::string path;  // empty -> stdout

    void write(const std::string& content) const {
        if (path.empty()) {
            std::fwrite(content.data(), 1, content.size(), stdout);
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
};

std::string csv_preamble(const std::string& command, const ConfigEcho& echo) {
    std::string out = "# lpplab " + command + " v" + std::string(kVersion) + "\n";
    out += "# " + echo.line() + "\n";
    return out;
}

json json_report(const std::string& command, const ConfigEcho& echo, std::uint64_t master_seed,
                 int threads, double runtime_seconds) {
    json j;
    j["tool"] = "lpplab";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = echo.to_json();
    j["seeds"] = {{"master", master_seed}};
    j["estimates"] = json::array();
    j["runtime_seconds"] = runtime_seconds;
    j["execution"] = {{"threads", threads}};
    return j;
}

json estimate_json(const std::string& name, const EstimateReport& rep) {
    return json{{"name", name},
                {"estimate", rep.estimate},
                {"stderr", rep.stderr_value},
                {"ci_low", rep.ci_low},
                {"ci_high", rep.ci_high},
                {"n", rep.n_samples}};
}

InitialConditionKind parse_ic(const std::string& name) {
    if (name == "flat") return InitialConditionKind::Flat;
    if (name == "droplet") return InitialConditionKind::Droplet;
    return InitialConditionKind::Stationary;
}

InitialCondition ic_for_replica(InitialConditionKind kind, std::uint64_t replica_seed) {
    switch (kind) {
        case InitialConditionKind::Droplet:
            return InitialCondition::droplet();
        case InitialConditionKind::Stationary:
            return InitialCondition::stationary(mix_seed(replica_seed, kStationarySubStream));
        default:
            return InitialCondition::flat();
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

struct CommonArgs {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& c, const std::string& default_format = "csv") {
    c.format = default_format;
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--threads", c.threads, "worker count (never affects results)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "output path (stdout when absent)");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------------------
// covariance
// ---------------------------------------------------------------------------
struct CovarianceArgs {
    CommonArgs common;
    std::int64_t n = 500;
    std::int64_t r = 250;
    std::string ic = "flat";
    std::int64_t replicas = 100;
    bool weights_only = false;
};

int run_covariance(const CovarianceArgs& a) {
    Timer timer;
    ReplicaPlan plan;
    plan.master_seed = a.common.seed;
    plan.n = a.n;
    plan.r_values = {a.r};
    plan.ic = parse_ic(a.ic);
    plan.replicas = a.replicas;
    plan.geodesics = !a.weights_only;
    plan.umax = !a.weights_only;
    const auto records = run_replicas(plan, a.common.threads);

    ConfigEcho echo;
    echo.add("command", std::string("covariance"));
    echo.add("n", a.n);
    echo.add("r", a.r);
    echo.add("ic", a.ic);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);
    echo.add("stats", std::string(a.weights_only ? "weights" : "full"));

    std::vector<double> xr(records.size()), xn(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        xr[i] = records[i].x_r[0];
        xn[i] = records[i].x_n;
    }
    const EstimateReport cov = covariance(xr, xn);

    if (a.common.format == "csv") {
        std::string out = csv_preamble("covariance", echo);
        out += a.weights_only ? "replica,seed,x_r,x_n\n"
                              : "replica,seed,x_r,x_n,u0_a,umax_a,tf_r,overlap\n";
        for (const auto& rec : records) {
            out += std::to_string(rec.replica) + ',' + std::to_string(rec.seed) + ',' +
                   fmt_double(rec.x_r[0]) + ',' + fmt_double(rec.x_n);
            if (!a.weights_only) {
                out += ',' + std::to_string(rec.u0_a) + ',' + std::to_string(rec.umax_a) + ',' +
                       std::to_string(rec.tf_r) + ',' + std::to_string(rec.overlap_below_r);
            }
            out += '\n';
        }
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("covariance", echo, a.common.seed, a.common.threads, timer.seconds());
        json e = estimate_json("cov_xr_xn", cov);
        e["rho"] = cov.estimate / std::pow(static_cast<double>(a.n), 2.0 / 3.0);
        j["estimates"].push_back(e);
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// exponent
// ---------------------------------------------------------------------------
struct ExponentArgs {
    CommonArgs common;
    std::int64_t n = 1000;
    std::vector<double> tau;
    std::string ic = "flat";
    std::int64_t replicas = 1000;
};

int run_exponent(const ExponentArgs& a) {
    Timer timer;
    std::vector<double> tau = a.tau;
    if (tau.empty()) {
        // geometric default grid over [0.05, 0.3]
        const double ratio = std::pow(6.0, 0.2);
        double t = 0.05;
        for (int i = 0; i < 6; ++i, t *= ratio) tau.push_back(t);
    }
    ReplicaPlan plan;
    plan.master_seed = a.common.seed;
    plan.n = a.n;
    for (const double t : tau) {
        const std::int64_t r = std::llround(t * static_cast<double>(a.n));
        if (r < 1 || r >= a.n) throw std::runtime_error("exponent: tau outside (0, 1)");
        plan.r_values.push_back(r);
    }
    plan.ic = parse_ic(a.ic);
    plan.replicas = a.replicas;
    const auto records = run_replicas(plan, a.common.threads);

    ConfigEcho echo;
    echo.add("command", std::string("exponent"));
    echo.add("n", a.n);
    {
        std::string ts;
        for (const double t : tau) {
            if (!ts.empty()) ts += ',';
            ts += fmt_double(t);
        }
        echo.add("tau", ts);
    }
    echo.add("ic", a.ic);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);

    const double n23 = std::pow(static_cast<double>(a.n), 2.0 / 3.0);
    std::vector<double> xn(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) xn[i] = records[i].x_n;
    std::vector<EstimateReport> covs;
    std::vector<std::pair<double, double>> points;
    for (std::size_t ti = 0; ti < tau.size(); ++ti) {
        std::vector<double> xr(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) xr[i] = records[i].x_r[ti];
        covs.push_back(covariance(xr, xn));
        const double tau_eff = static_cast<double>(plan.r_values[ti]) / static_cast<double>(a.n);
        points.emplace_back(tau_eff, covs.back().estimate / n23);
    }
    const ExponentFit fit = exponent_fit(points);

    if (a.common.format == "csv") {
        std::string out = csv_preamble("exponent", echo);
        out += "tau,r,cov,cov_stderr,rho\n";
        for (std::size_t ti = 0; ti < tau.size(); ++ti) {
            out += fmt_double(points[ti].first) + ',' + std::to_string(plan.r_values[ti]) + ',' +
                   fmt_double(covs[ti].estimate) + ',' + fmt_double(covs[ti].stderr_value) + ',' +
                   fmt_double(points[ti].second) + '\n';
        }
        out += "# slope=" + fmt_double(fit.slope) + " slope_stderr=" + fmt_double(fit.slope_stderr) +
               " r_squared=" + fmt_double(fit.r_squared) + "\n";
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("exponent", echo, a.common.seed, a.common.threads, timer.seconds());
        for (std::size_t ti = 0; ti < tau.size(); ++ti) {
            json e = estimate_json("cov_tau_" + fmt_double(points[ti].first), covs[ti]);
            e["tau"] = points[ti].first;
            e["r"] = plan.r_values[ti];
            e["rho"] = points[ti].second;
            j["estimates"].push_back(e);
        }
        j["fit"] = {{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"slope_stderr", fit.slope_stderr},
                    {"r_squared", fit.r_squared}};
        j["slope"] = fit.slope;
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------
struct ProfileArgs {
    CommonArgs common;
    std::int64_t n = 500;
    std::string kind = "point";
    std::string ic = "flat";
    std::int64_t half_width = -1;
    std::int64_t replicas = 1;
    std::vector<double> inc_x;
    double inc_h = 0.1;
};

int run_profile(const ProfileArgs& a) {
    Timer timer;
    const double c = std::cbrt(2.0 * static_cast<double>(a.n));
    const std::int64_t default_width = static_cast<std::int64_t>(std::ceil(2.0 * c * c));
    const std::int64_t half = a.half_width > 0 ? a.half_width : default_width;
    const InitialConditionKind ic_kind = parse_ic(a.ic);

    ConfigEcho echo;
    echo.add("command", std::string("profile"));
    echo.add("n", a.n);
    echo.add("kind", a.kind);
    if (a.kind == "flat") echo.add("ic", a.ic);
    echo.add("half_width", half);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);

    std::vector<ScaledProfile> profiles(static_cast<std::size_t>(a.replicas));
    parallel_replicas(a.replicas, a.common.threads, [&](std::int64_t k) {
        const std::uint64_t seed = mix_seed(a.common.seed, static_cast<std::uint64_t>(k));
        const FieldSpec field{seed, FieldBounds{}};
        if (a.kind == "point") {
            profiles[static_cast<std::size_t>(k)] =
                rescale_point_profile(solve_backward(field, {a.n, a.n}, 0, half), a.n);
        } else {
            profiles[static_cast<std::size_t>(k)] = rescale_flat_profile(
                solve_line_profile(field, ic_for_replica(ic_kind, seed), a.n, half));
        }
    });

    if (a.common.format == "csv") {
        std::string out = csv_preamble("profile", echo);
        out += "replica,x,value\n";
        for (std::size_t k = 0; k < profiles.size(); ++k) {
            const auto& p = profiles[k];
            for (std::size_t j = 0; j < p.x.size(); ++j) {
                out += std::to_string(k) + ',' + fmt_double(p.x[j]) + ',' +
                       (p.values[j].is_excluded() ? std::string("-inf")
                                                  : fmt_double(p.values[j].value())) +
                       '\n';
            }
        }
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("profile", echo, a.common.seed, a.common.threads, timer.seconds());
        for (const double x : a.inc_x) {
            const auto [est, se] = increment_variance(profiles, x, a.inc_h);
            EstimateReport rep;
            rep.estimate = est;
            rep.stderr_value = se;
            rep.ci_low = est - 1.959963984540054 * se;
            rep.ci_high = est + 1.959963984540054 * se;
            rep.n_samples = a.replicas;
            json e = estimate_json("increment_variance", rep);
            e["x"] = x;
            e["h"] = a.inc_h;
            j["estimates"].push_back(e);
        }
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// geodesic
// ---------------------------------------------------------------------------
struct GeodesicArgs {
    CommonArgs common;
    std::int64_t n = 500;
    std::int64_t r = -1;
    std::string ic = "flat";
    std::int64_t replica = 0;
};

int run_geodesic(const GeodesicArgs& a) {
    Timer timer;
    const std::uint64_t seed = mix_seed(a.common.seed, static_cast<std::uint64_t>(a.replica));
    const FieldSpec field{seed, FieldBounds{}};
    const InitialConditionKind kind = parse_ic(a.ic);
    SolveOptions opts;
    opts.keep_all_rows = false;
    opts.keep_backpointers = true;
    const PassageSolution sol =
        kind == InitialConditionKind::Droplet
            ? solve_from_point(field, {0, 0}, 2 * a.n, RegionPredicate::all(), opts)
            : solve_forward(field, ic_for_replica(kind, seed), 2 * a.n, RegionPredicate::all(),
                            opts);
    const GeodesicPath path = trace_geodesic(sol, {a.n, a.n});

    ConfigEcho echo;
    echo.add("command", std::string("geodesic"));
    echo.add("n", a.n);
    if (a.r >= 0) echo.add("r", a.r);
    echo.add("ic", a.ic);
    echo.add("replica", a.replica);
    echo.add("seed", a.common.seed);

    if (a.common.format == "csv") {
        std::string out = csv_preamble("geodesic", echo);
        out += "v1,v2\n";
        for (const auto& p : path.points) {
            out += std::to_string(p.x) + ',' + std::to_string(p.y) + '\n';
        }
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("geodesic", echo, a.common.seed, a.common.threads, timer.seconds());
        j["weight"] = path.weight;
        j["transversal_fluctuation"] = transversal_fluctuation(path);
        j["start"] = {path.start().x, path.start().y};
        if (a.r >= 0) {
            const LatticePoint u0 = crossing_point(path, a.r);
            j["crossing"] = {u0.x, u0.y};
            j["crossing_a"] = u0.transverse();
        }
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// events
// ---------------------------------------------------------------------------
struct EventsArgs {
    CommonArgs common;
    std::int64_t n = 1000;
    std::int64_t r = 200;
    std::int64_t replicas = 100;
    std::vector<std::string> which = {"e_dec"};
    double theta = 0.5, alpha = 0.5, decay_tau = 0.25, phi = 4.0, barrier_l = 2.0, window_m = 1.0,
           epsilon = 0.02;
    double c1 = 0.05;
    double i_lo = 0.0, i_hi = 0.0;
    bool have_interval = false;
};

int run_events(const EventsArgs& a) {
    Timer timer;
    EventParams params;
    params.theta = a.theta;
    params.alpha = a.alpha;
    params.tau = a.decay_tau;
    params.phi = a.phi;
    params.L = a.barrier_l;
    params.M = a.window_m;
    params.epsilon = a.epsilon;
    params.validate();

    ReplicaPlan plan;
    plan.master_seed = a.common.seed;
    plan.n = a.n;
    plan.r_values = {a.r};
    plan.replicas = a.replicas;
    for (const std::string& name : a.which) {
        IndicatorRequest req;
        req.params = params;
        req.name = name;
        if (name == "e_dec") {
            req.kind = IndicatorKind::EDec;
        } else if (name == "two_peaks") {
            req.kind = IndicatorKind::TwoPeaks;
            req.i_lo = a.have_interval ? a.i_lo : -a.epsilon / 2.0;
            req.i_hi = a.have_interval ? a.i_hi : a.epsilon / 2.0;
        } else if (name == "large_tf") {
            req.kind = IndicatorKind::LargeTF;
            req.threshold_c1 = a.c1;
        } else if (name == "barrier") {
            req.kind = IndicatorKind::Barrier;
        } else if (name == "classify") {
            req.kind = IndicatorKind::Classify;
        } else {
            throw std::runtime_error("events: unknown indicator " + name);
        }
        plan.indicators.push_back(req);
    }
    const auto records = run_replicas(plan, a.common.threads);

    ConfigEcho echo;
    echo.add("command", std::string("events"));
    echo.add("n", a.n);
    echo.add("r", a.r);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);
    {
        std::string ws;
        for (const auto& w : a.which) {
            if (!ws.empty()) ws += ',';
            ws += w;
        }
        echo.add("which", ws);
    }
    echo.add("theta", a.theta);
    echo.add("alpha", a.alpha);
    echo.add("decay_tau", a.decay_tau);
    echo.add("phi", a.phi);
    echo.add("L", a.barrier_l);
    echo.add("M", a.window_m);
    echo.add("epsilon", a.epsilon);
    echo.add("c1", a.c1);

    std::vector<std::string> columns;
    for (const auto& req : plan.indicators) {
        if (req.kind == IndicatorKind::Classify) {
            columns.push_back(req.name + "_j");
            columns.push_back(req.name + "_label");
        } else {
            columns.push_back(req.name);
        }
    }

    if (a.common.format == "csv") {
        std::string out = csv_preamble("events", echo);
        out += "replica,seed";
        for (const auto& c : columns) out += ',' + c;
        out += '\n';
        for (const auto& rec : records) {
            out += std::to_string(rec.replica) + ',' + std::to_string(rec.seed);
            for (const int v : rec.indicator_values) out += ',' + std::to_string(v);
            out += '\n';
        }
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("events", echo, a.common.seed, a.common.threads, timer.seconds());
        std::size_t col = 0;
        for (const auto& req : plan.indicators) {
            if (req.kind == IndicatorKind::Classify) {
                col += 2;
                continue;
            }
            std::vector<std::uint8_t> flags(records.size());
            for (std::size_t i = 0; i < records.size(); ++i) {
                flags[i] = static_cast<std::uint8_t>(records[i].indicator_values[col]);
            }
            j["estimates"].push_back(estimate_json(req.name, event_probability(flags)));
            col += 1;
        }
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// tails
// ---------------------------------------------------------------------------
struct TailsArgs {
    CommonArgs common;
    std::int64_t n = 1000;
    std::int64_t replicas = 1000;
    std::vector<double> thresholds = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    std::string center = "mean";
};

int run_tails(const TailsArgs& a) {
    Timer timer;
    std::vector<double> t(static_cast<std::size_t>(a.replicas));
    parallel_replicas(a.replicas, a.common.threads, [&](std::int64_t k) {
        const FieldSpec field{mix_seed(a.common.seed, static_cast<std::uint64_t>(k)), FieldBounds{}};
        SolveOptions opts;
        opts.keep_all_rows = false;
        const auto sol = solve_from_point(field, {0, 0}, 2 * a.n, RegionPredicate::all(), opts);
        t[static_cast<std::size_t>(k)] = sol.diagonal_value(a.n).value();
    });
    double mean = 0.0;
    for (const double v : t) mean += v;
    mean /= static_cast<double>(t.size());
    const double center = (a.center == "4n") ? 4.0 * static_cast<double>(a.n) : mean;
    const double scale = std::cbrt(static_cast<double>(a.n));
    std::vector<double> samples(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) samples[i] = (t[i] - center) / scale;
    const auto curve = tail_curve(samples, a.thresholds);

    ConfigEcho echo;
    echo.add("command", std::string("tails"));
    echo.add("n", a.n);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);
    echo.add("center", a.center);

    if (a.common.format == "csv") {
        std::string out = csv_preamble("tails", echo);
        out += "x,upper,lower\n";
        for (const auto& p : curve) {
            out += fmt_double(p.x) + ',' + fmt_double(p.upper) + ',' + fmt_double(p.lower) + '\n';
        }
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("tails", echo, a.common.seed, a.common.threads, timer.seconds());
        j["sample_mean"] = mean;
        j["center_value"] = center;
        json pts = json::array();
        for (const auto& p : curve) {
            pts.push_back({{"x", p.x}, {"upper", p.upper}, {"lower", p.lower}});
        }
        j["tails"] = pts;
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// brownian
// ---------------------------------------------------------------------------
struct BrownianArgs {
    CommonArgs common;
    std::string op = "two-peak";
    double bm_m = 1.0;
    double eps = 0.02;
    double interval = -1.0;  // |I| centered at 0; defaults to eps
    double lambda = 0.05, lambda_prime = 0.1, alpha = 0.2, decay_tau = 0.25;
    double step = -1.0;  // defaults to 1e-3 * M
    std::int64_t replicas = 10000;
};

int run_brownian(const BrownianArgs& a) {
    Timer timer;
    const double step = a.step > 0 ? a.step : 1e-3 * a.bm_m;

    ConfigEcho echo;
    echo.add("command", std::string("brownian"));
    echo.add("op", a.op);
    echo.add("M", a.bm_m);
    echo.add("step", step);
    echo.add("replicas", a.replicas);
    echo.add("seed", a.common.seed);

    if (a.op == "sample") {
        const BrownianPath path = sample_bm(a.bm_m, step, a.common.seed);
        if (a.common.format == "csv") {
            std::string out = csv_preamble("brownian", echo);
            out += "x,w\n";
            for (std::size_t i = 0; i < path.values.size(); ++i) {
                out += fmt_double(path.x_of(static_cast<std::int64_t>(i))) + ',' +
                       fmt_double(path.values[i]) + '\n';
            }
            OutputTarget{a.common.out}.write(out);
        } else {
            json j = json_report("brownian", echo, a.common.seed, a.common.threads, timer.seconds());
            j["points"] = path.values.size();
            OutputTarget{a.common.out}.write(j.dump(2) + "\n");
        }
        return 0;
    }

    EstimateReport rep;
    json extra;
    if (a.op == "two-peak") {
        const double m = a.interval > 0 ? a.interval : a.eps;
        echo.add("eps", a.eps);
        echo.add("interval", m);
        rep = two_peak_mc(a.bm_m, -m / 2.0, m / 2.0, a.eps, a.replicas, step, a.common.seed,
                          a.common.threads);
        extra["bound"] = two_peak_bound(a.bm_m, m, a.eps);
    } else {  // c-prime
        echo.add("lambda", a.lambda);
        echo.add("lambda_prime", a.lambda_prime);
        echo.add("alpha", a.alpha);
        echo.add("decay_tau", a.decay_tau);
        rep = c_prime_event_mc(a.bm_m, a.lambda, a.lambda_prime, a.alpha, a.decay_tau, a.replicas,
                               step, a.common.seed, a.common.threads);
        extra["freq_over_lambda"] = rep.estimate / a.lambda;
    }

    if (a.common.format == "csv") {
        std::string out = csv_preamble("brownian", echo);
        out += "estimate,stderr,ci_low,ci_high,n\n";
        out += fmt_double(rep.estimate) + ',' + fmt_double(rep.stderr_value) + ',' +
               fmt_double(rep.ci_low) + ',' + fmt_double(rep.ci_high) + ',' +
               std::to_string(rep.n_samples) + '\n';
        OutputTarget{a.common.out}.write(out);
    } else {
        json j = json_report("brownian", echo, a.common.seed, a.common.threads, timer.seconds());
        json e = estimate_json(a.op, rep);
        for (auto& [k, v] : extra.items()) e[k] = v;
        j["estimates"].push_back(e);
        OutputTarget{a.common.out}.write(j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------
struct OracleArgs {
    std::int64_t max_sum = 8;
    std::int64_t cases = 500;
    std::uint64_t seed = 1;
    std::string out;
};

int run_oracle_check(const OracleArgs& a) {
    Timer timer;
    std::int64_t checked = 0, failed = 0;
    const double tol = 1e-12;

    auto close = [&](const ExtReal& x, const ExtReal& y) {
        if (x.is_excluded() != y.is_excluded()) return false;
        if (x.is_excluded()) return true;
        return std::abs(x.value() - y.value()) <= tol * std::max(1.0, std::abs(y.value()));
    };

    for (std::int64_t c = 0; c < a.cases; ++c) {
        const std::uint64_t case_seed = mix_seed(a.seed, static_cast<std::uint64_t>(c));
        const FieldSpec field{case_seed, FieldBounds{}};
        const auto w = weights_from(field);
        const auto draw = Philox4x32::block64(case_seed, 0xABCDEF, 0);
        const std::int64_t max_sum =
            std::min<std::int64_t>(a.max_sum, 2 + static_cast<std::int64_t>(draw[0] % 4) * 2);

        const std::uint32_t sel = static_cast<std::uint32_t>(draw[1]);
        RegionPredicate region = RegionPredicate::all();
        switch (sel % 4) {
            case 1:
                region = RegionPredicate::strip(1 + static_cast<std::int64_t>((sel >> 4) % 3));
                break;
            case 2:
                region = RegionPredicate::rectangle(0, max_sum, -3, 2);
                break;
            case 3:
                region = RegionPredicate::complement(RegionPredicate::rectangle(1, 3, -1, 1));
                break;
            default:
                break;
        }
        InitialCondition ic = InitialCondition::flat();
        switch ((sel >> 8) % 4) {
            case 1:
                ic = InitialCondition::droplet();
                break;
            case 2:
                ic = InitialCondition::stationary(case_seed + 17);
                break;
            case 3:
                ic = InitialCondition::table({{-1, ExtReal::finite(0.75)},
                                              {0, ExtReal::finite(0.0)},
                                              {2, ExtReal::finite(1.5)}});
                break;
            default:
                break;
        }

        // forward line-to-point over the whole cone
        const auto sol = solve_forward(field, ic, max_sum, region);
        for (std::int64_t s = 0; s <= max_sum; ++s) {
            for (std::int64_t aa = -(max_sum - s); aa <= max_sum - s; aa += 2) {
                if (((aa ^ s) & 1) != 0) continue;
                const auto v = from_sum_transverse(s, aa);
                ++checked;
                if (!close(sol.value_at(v), oracle::brute_line_to_point(w.cell, ic, 0, v, region))) {
                    ++failed;
                }
            }
        }
        // point-to-point
        const LatticePoint u{static_cast<std::int64_t>((sel >> 12) % 2),
                             static_cast<std::int64_t>((sel >> 14) % 2)};
        const LatticePoint v{u.x + max_sum / 2, u.y + max_sum / 2};
        ++checked;
        if (!close(point_to_point(field, u, v, region),
                   oracle::brute_point_to_point(w.cell, u, v, region))) {
            ++failed;
        }
        // backward profile
        const std::int64_t r_line = 1 + static_cast<std::int64_t>((sel >> 16) % 2);
        if (max_sum / 2 > r_line) {
            const LatticePoint target{max_sum / 2, max_sum / 2};
            const auto prof = solve_backward(field, target, r_line, max_sum / 2 - r_line);
            for (std::int64_t m = prof.m_lo; m <= prof.m_hi(); ++m) {
                ++checked;
                const auto ref = oracle::brute_point_to_point(w.cell, line_point(r_line, m), target);
                if (!close(ExtReal::finite(prof.value_at(m)), ref)) ++failed;
            }
        }
        // exit-constrained
        const double strip = 0.5 * static_cast<double>((sel >> 18) % 6);
        ++checked;
        if (!close(exit_constrained_max(field, ic, max_sum / 2, strip, 1),
                   oracle::brute_exit_constrained(w.cell, ic, max_sum / 2, strip, 1))) {
            ++failed;
        }
    }

    std::string report = "oracle-check: " + std::to_string(checked) + " comparisons, " +
                         std::to_string(failed) + " failures, " + fmt_double(timer.seconds()) +
                         " s\n";
    if (!a.out.empty()) {
        OutputTarget{a.out}.write(report);
    } else {
        std::fputs(report.c_str(), stdout);
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace

namespace {

// --config key=value files expand to long flags right after the subcommand
// token; explicit flags come later and win through the take-last policy.
bool expand_config_file(std::vector<std::string>& args, std::string& error) {
    std::string path;
    std::vector<std::string> stripped;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                error = "--config expects a file path";
                return false;
            }
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            stripped.push_back(args[i]);
        }
    }
    if (path.empty()) return true;
    if (stripped.empty()) {
        error = "--config requires a subcommand";
        return false;
    }
    std::ifstream f(path);
    if (!f) {
        error = "cannot read config file: " + path;
        return false;
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(f, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=', first);
        if (eq == std::string::npos) {
            error = "config line is not key=value: " + line;
            return false;
        }
        auto strip = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            const auto e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(first, eq - first));
        const std::string value = strip(line.substr(eq + 1));
        tokens.push_back("--" + key);
        if (!value.empty()) tokens.push_back(value);
    }
    args = stripped;
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    return true;
}

}  // namespace

int run_command(const std::vector<std::string>& raw_args) {
    std::vector<std::string> args = raw_args;
    {
        std::string error;
        if (!expand_config_file(args, error)) {
            std::cerr << "lpplab: " << error << "\n";
            return 2;
        }
    }

    CLI::App app{"lpplab: exponential last passage percolation laboratory"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    CovarianceArgs cov;
    auto* c_cov = app.add_subcommand("covariance", "coupled replica records at one (r, n)");
    add_common(c_cov, cov.common);
    c_cov->add_option("--n", cov.n)->check(CLI::PositiveNumber);
    c_cov->add_option("--r", cov.r)->check(CLI::PositiveNumber);
    c_cov->add_option("--ic", cov.ic)->check(CLI::IsMember({"flat", "droplet", "stationary"}));
    c_cov->add_option("--replicas", cov.replicas)->check(CLI::PositiveNumber);
    c_cov->add_flag("--weights-only", cov.weights_only, "skip geodesic statistics");

    ExponentArgs expo;
    auto* c_exp = app.add_subcommand("exponent", "temporal covariance exponent fit");
    add_common(c_exp, expo.common, "json");
    c_exp->add_option("--n", expo.n)->check(CLI::PositiveNumber);
    c_exp->add_option("--tau", expo.tau)->delimiter(',');
    c_exp->add_option("--ic", expo.ic)->check(CLI::IsMember({"flat", "droplet", "stationary"}));
    c_exp->add_option("--replicas", expo.replicas)->check(CLI::PositiveNumber);

    ProfileArgs prof;
    auto* c_prof = app.add_subcommand("profile", "KPZ-rescaled weight profiles");
    add_common(c_prof, prof.common);
    c_prof->add_option("--n", prof.n)->check(CLI::PositiveNumber);
    c_prof->add_option("--kind", prof.kind)->check(CLI::IsMember({"point", "flat"}));
    c_prof->add_option("--ic", prof.ic)->check(CLI::IsMember({"flat", "droplet", "stationary"}));
    c_prof->add_option("--half-width", prof.half_width);
    c_prof->add_option("--replicas", prof.replicas)->check(CLI::PositiveNumber);
    c_prof->add_option("--inc-x", prof.inc_x)->delimiter(',');
    c_prof->add_option("--inc-h", prof.inc_h);

    GeodesicArgs geo;
    auto* c_geo = app.add_subcommand("geodesic", "trace and export a geodesic");
    add_common(c_geo, geo.common);
    c_geo->add_option("--n", geo.n)->check(CLI::PositiveNumber);
    c_geo->add_option("--r", geo.r);
    c_geo->add_option("--ic", geo.ic)->check(CLI::IsMember({"flat", "droplet", "stationary"}));
    c_geo->add_option("--replica", geo.replica);

    EventsArgs ev;
    auto* c_ev = app.add_subcommand("events", "geometric event indicator frequencies");
    add_common(c_ev, ev.common);
    c_ev->add_option("--n", ev.n)->check(CLI::PositiveNumber);
    c_ev->add_option("--r", ev.r)->check(CLI::PositiveNumber);
    c_ev->add_option("--replicas", ev.replicas)->check(CLI::PositiveNumber);
    c_ev->add_option("--which", ev.which)->delimiter(',');
    c_ev->add_option("--theta", ev.theta);
    c_ev->add_option("--alpha", ev.alpha);
    c_ev->add_option("--decay-tau", ev.decay_tau);
    c_ev->add_option("--phi", ev.phi);
    c_ev->add_option("--barrier-l", ev.barrier_l);
    c_ev->add_option("--window-m", ev.window_m);
    c_ev->add_option("--epsilon", ev.epsilon);
    c_ev->add_option("--c1", ev.c1);
    auto* ilo = c_ev->add_option("--i-lo", ev.i_lo);
    auto* ihi = c_ev->add_option("--i-hi", ev.i_hi);
    c_ev->callback([&ev, ilo, ihi]() { ev.have_interval = ilo->count() > 0 || ihi->count() > 0; });

    TailsArgs tails;
    auto* c_tails = app.add_subcommand("tails", "two-sided tail frequencies of centered T");
    add_common(c_tails, tails.common);
    c_tails->add_option("--n", tails.n)->check(CLI::PositiveNumber);
    c_tails->add_option("--replicas", tails.replicas)->check(CLI::PositiveNumber);
    c_tails->add_option("--thresholds", tails.thresholds)->delimiter(',');
    c_tails->add_option("--center", tails.center)->check(CLI::IsMember({"mean", "4n"}));

    BrownianArgs bm;
    auto* c_bm = app.add_subcommand("brownian", "Brownian comparison layer");
    add_common(c_bm, bm.common, "json");
    c_bm->add_option("--op", bm.op)->check(CLI::IsMember({"two-peak", "c-prime", "sample"}));
    c_bm->add_option("--bm-m", bm.bm_m);
    c_bm->add_option("--eps", bm.eps);
    c_bm->add_option("--interval", bm.interval);
    c_bm->add_option("--lambda", bm.lambda);
    c_bm->add_option("--lambda-prime", bm.lambda_prime);
    c_bm->add_option("--alpha", bm.alpha);
    c_bm->add_option("--decay-tau", bm.decay_tau);
    c_bm->add_option("--step", bm.step);
    c_bm->add_option("--replicas", bm.replicas)->check(CLI::PositiveNumber);

    OracleArgs oracle_args;
    auto* c_or = app.add_subcommand("oracle-check", "brute-force equivalence suite");
    c_or->add_option("--max-sum", oracle_args.max_sum)->check(CLI::Range(2, 10));
    c_or->add_option("--cases", oracle_args.cases)->check(CLI::PositiveNumber);
    c_or->add_option("--seed", oracle_args.seed);
    c_or->add_option("--out", oracle_args.out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_cov->parsed()) return run_covariance(cov);
        if (c_exp->parsed()) return run_exponent(expo);
        if (c_prof->parsed()) return run_profile(prof);
        if (c_geo->parsed()) return run_geodesic(geo);
        if (c_ev->parsed()) return run_events(ev);
        if (c_tails->parsed()) return run_tails(tails);
        if (c_bm->parsed()) return run_brownian(bm);
        if (c_or->parsed()) return run_oracle_check(oracle_args);
    } catch (const std::exception& e) {
        std::cerr << "lpplab: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace lpplab::cli
