#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqc/benchmark.hpp"
#include "cqc/csv.hpp"
#include "cqc/error.hpp"
#include "cqc/risk_adjusted.hpp"
#include "cqc/risk_constrained.hpp"
#include "cqc/samples.hpp"
#include "cqc/sensitivity.hpp"

namespace cqc::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleGainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// config access

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

const json& block(const json& cfg, const char* name) {
    static const json empty = json::object();
    return cfg.contains(name) ? cfg.at(name) : empty;
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

// Accepts 1e7 as well as 10000000.
std::uint64_t to_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number()) {
        const double d = v.get<double>();
        if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(where + ": expected a nonnegative integer");
}

std::uint64_t get_count(const json& j, const char* key, std::uint64_t fallback, const std::string& where) {
    return j.contains(key) ? to_count(j.at(key), where + "." + key) : fallback;
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
    return j.at(key).get<bool>();
}

std::string get_string(const json& j, const char* key, std::string fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

// A grid is an explicit array, {"from", "to", "points"} (linear) or
// {"log10_from", "log10_to", "points"} (log-spaced).
std::vector<double> parse_grid(const json& g, const std::string& where) {
    if (g.is_array()) {
        std::vector<double> out;
        for (const auto& v : g) {
            if (!v.is_number()) throw ConfigError(where + ": grid entries must be numbers");
            out.push_back(v.get<double>());
        }
        if (out.empty()) throw ConfigError(where + ": empty grid");
        return out;
    }
    check_keys(g, {"from", "to", "log10_from", "log10_to", "points"}, where);
    const auto points = get_count(g, "points", 0, where);
    if (points == 0) throw ConfigError(where + ": points must be positive");
    if (g.contains("log10_from") || g.contains("log10_to")) {
        if (g.contains("from") || g.contains("to")) throw ConfigError(where + ": mixed linear and log bounds");
        if (!g.contains("log10_from") || !g.contains("log10_to")) throw ConfigError(where + ": missing log10 bound");
        return logspace(get_number(g, "log10_from", 0, where), get_number(g, "log10_to", 0, where), points);
    }
    if (!g.contains("from") || !g.contains("to")) throw ConfigError(where + ": missing bound");
    return linspace(get_number(g, "from", 0, where), get_number(g, "to", 0, where), points);
}

std::vector<double> grid_or(const json& j, const char* key, std::vector<double> fallback, const std::string& where) {
    return j.contains(key) ? parse_grid(j.at(key), where + "." + key) : fallback;
}

// ---------------------------------------------------------------------------
// common settings

const StochasticChannel kBaselineChannel{{-0.0126, 0.05}, {0.005, 0.001, 0.0, 0.5}};

struct Common {
    ChannelSpec channel;
    ProtocolParams protocol;
    std::size_t K = 1'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    fs::path out_dir = ".";
    std::optional<fs::path> cache;
};

ChannelSpec parse_channel(const json& cfg, const std::string& default_type) {
    const json& c = block(cfg, "channel");
    check_keys(c, {"type", "eta", "nb", "eta0", "rate"}, "channel");
    const auto type = get_string(c, "type", default_type, "channel");
    if (type == "benchmark") {
        check_keys(c, {"type", "eta0", "rate"}, "channel");
        const BenchmarkChannel d;
        return BenchmarkChannel{get_number(c, "eta0", d.eta0, "channel"), get_number(c, "rate", d.rate, "channel")};
    }
    if (type != "stochastic") throw ConfigError("channel.type: expected 'stochastic' or 'benchmark'");
    check_keys(c, {"type", "eta", "nb"}, "channel");
    StochasticChannel ch = kBaselineChannel;
    const json& eta = block(c, "eta");
    check_keys(eta, {"mu_ln", "sigma_ln"}, "channel.eta");
    ch.eta.mu_ln = get_number(eta, "mu_ln", ch.eta.mu_ln, "channel.eta");
    ch.eta.sigma_ln = get_number(eta, "sigma_ln", ch.eta.sigma_ln, "channel.eta");
    const json& nb = block(c, "nb");
    check_keys(nb, {"mu", "sigma", "lower", "upper"}, "channel.nb");
    ch.nb.mu = get_number(nb, "mu", ch.nb.mu, "channel.nb");
    ch.nb.sigma = get_number(nb, "sigma", ch.nb.sigma, "channel.nb");
    ch.nb.lower = get_number(nb, "lower", ch.nb.lower, "channel.nb");
    ch.nb.upper = get_number(nb, "upper", ch.nb.upper, "channel.nb");
    return ch;
}

Common parse_common(const json& cfg, const std::string& default_channel) {
    Common c;
    c.channel = parse_channel(cfg, default_channel);
    validate(c.channel);

    const json& p = block(cfg, "protocol");
    check_keys(p, {"n", "delta"}, "protocol");
    c.protocol.n = get_count(p, "n", c.protocol.n, "protocol");
    c.protocol.delta = get_number(p, "delta", c.protocol.delta, "protocol");
    c.protocol.validate();

    c.K = get_count(cfg, "K", c.K, "config");
    if (c.K == 0) throw ConfigError("K must be positive");
    c.seed = get_count(cfg, "seed", c.seed, "config");

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    c.threads = static_cast<unsigned>(get_count(cfg, "threads", hw, "config"));
    if (c.threads == 0) c.threads = hw;

    if (cfg.contains("output_dir")) {
        c.out_dir = get_string(cfg, "output_dir", ".", "config");
    } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
        c.out_dir = env;
    }
    if (cfg.contains("cache")) c.cache = get_string(cfg, "cache", "", "config");
    return c;
}

SampleSet obtain_samples(const Common& c) {
    if (c.cache) return load_sample_set(*c.cache, channel_digest(c.channel));
    return generate_sample_set(c.channel, c.K, c.seed, c.threads);
}

// ---------------------------------------------------------------------------
// output

using Row = std::vector<std::string>;

std::string num(double v) { return csv::format(v); }
std::string num(std::uint64_t v) { return csv::format(v); }
std::string flag(bool v) { return csv::format(v); }

fs::path output_path(const Common& c, const std::optional<std::string>& explicit_out, const std::string& name) {
    return explicit_out ? fs::path(*explicit_out) : c.out_dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

std::string provenance(const std::string& command, const SampleSet& s) {
    return "command=" + command + " seed=" + std::to_string(s.seed()) + " K=" + std::to_string(s.size()) +
           " digest=" + to_hex(s.digest());
}

void write_table(const fs::path& path, const std::string& command, const SampleSet& s, const Row& header,
                 const std::vector<Row>& rows, std::ostream& out) {
    std::ostringstream text;
    csv::Writer w(text);
    w.comment(provenance(command, s));
    w.row(header);
    for (const auto& r : rows) w.row(r);
    write_file(path, text.str());
    out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
}

Row report_cells(const OptimumReport& r) {
    return {num(r.q_max), num(r.r_max), num(r.t_star), num(r.total_payload), flag(r.q_capped)};
}

// ---------------------------------------------------------------------------
// flags

struct Flags {
    std::string config;
    std::string out;
    std::string out_dir;
    std::string cache;
    std::string cache_out;
    std::uint64_t seed = 0;
    std::uint64_t K = 0;
    std::uint64_t n = 0;
    double delta = 0;
    unsigned threads = 0;
    double eps_cov = 0, eps_rel = 0, eps = 0;
    std::vector<double> eps_grid;
    std::vector<std::uint64_t> n_grid;
    std::string mode;
    std::uint64_t points = 0;
    std::vector<double> lambda_grid;
    double fixed_lambda = 0;
    double relative_step = 0;
    bool allow_infeasible = false;
    bool no_csv = false;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("-c,--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", f.out, "output CSV path (overrides the output directory)");
    sub->add_option("--out-dir", f.out_dir, "output directory");
    sub->add_option("--cache", f.cache, "load samples from this cache instead of sampling");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("-K,--samples", f.K, "number of channel realizations");
    sub->add_option("-n,--uses", f.n, "channel uses per frame");
    sub->add_option("--delta", f.delta, "covertness threshold");
    sub->add_option("-j,--threads", f.threads, "worker threads (0 = all cores)");
}

bool given(const CLI::App* sub, const std::string& name) {
    try {
        return sub->get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
        return false;
    }
}

// Flags > config > defaults: flags are written into the config document.
json merge_flags(json cfg, const CLI::App* sub, const Flags& f) {
    const std::string cmd = sub->get_name();
    if (given(sub, "--out-dir")) cfg["output_dir"] = f.out_dir;
    if (given(sub, "--cache")) cfg["cache"] = f.cache;
    if (given(sub, "--seed")) cfg["seed"] = f.seed;
    if (given(sub, "--samples")) cfg["K"] = f.K;
    if (given(sub, "--uses")) cfg["protocol"]["n"] = f.n;
    if (given(sub, "--delta")) cfg["protocol"]["delta"] = f.delta;
    if (given(sub, "--threads")) cfg["threads"] = f.threads;

    if (given(sub, "--eps-cov")) cfg["optimize"]["eps_cov"] = f.eps_cov;
    if (given(sub, "--eps-rel")) cfg["optimize"]["eps_rel"] = f.eps_rel;
    if (given(sub, "--cache-out")) cfg["sample"]["cache_out"] = f.cache_out;
    if (given(sub, "--no-csv")) cfg["sample"]["csv"] = false;
    if (given(sub, "--allow-infeasible")) cfg["decade_gains"]["allow_infeasible"] = true;
    if (given(sub, "--mode")) cfg["risk_adjusted"]["mode"] = f.mode;
    if (given(sub, "--points")) cfg["risk_adjusted"]["points_per_axis"] = f.points;
    if (given(sub, "--lambda-grid")) cfg["risk_adjusted"]["lambda_grid"] = f.lambda_grid;
    if (given(sub, "--fixed-lambda")) cfg["risk_adjusted"]["fixed_lambda"] = f.fixed_lambda;
    if (given(sub, "--relative-step")) cfg["sensitivity"]["relative_step"] = f.relative_step;
    if (given(sub, "--eps")) cfg["scaling"]["eps"] = f.eps;
    if (given(sub, "--n-grid")) cfg["scaling"]["n_grid"] = f.n_grid;
    if (given(sub, "--eps-grid")) {
        if (cmd == "frontier") cfg["frontier"]["eps_grid"] = f.eps_grid;
        if (cmd == "sensitivity") cfg["sensitivity"]["eps_grid"] = f.eps_grid;
        if (cmd == "benchmark-validate") cfg["benchmark_validate"]["eps_list"] = f.eps_grid;
    }
    return cfg;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    json cfg;
    try {
        cfg = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
    return cfg;
}

// ---------------------------------------------------------------------------
// subcommands

struct Context {
    std::string command;
    json cfg;
    Common common;
    std::optional<std::string> out;
    std::ostream& stdout_;
};

void cmd_sample(Context& c) {
    const json& b = block(c.cfg, "sample");
    check_keys(b, {"cache_out", "csv"}, "sample");
    const auto s = generate_sample_set(c.common.channel, c.common.K, c.common.seed, c.common.threads);
    const fs::path cache_path = b.contains("cache_out") ? fs::path(get_string(b, "cache_out", "", "sample"))
                                                        : c.common.out_dir / "samples.cqcs";
    std::error_code ec;
    if (cache_path.has_parent_path()) fs::create_directories(cache_path.parent_path(), ec);
    save_sample_set(s, cache_path);
    c.stdout_ << "wrote " << cache_path.string() << " (K=" << s.size() << ")\n";
    if (get_bool(b, "csv", true, "sample")) {
        std::ostringstream text;
        csv::Writer(text).comment(provenance(c.command, s));
        write_sample_csv(s, text);
        const auto path = output_path(c.common, c.out, "samples.csv");
        write_file(path, text.str());
        c.stdout_ << "wrote " << path.string() << " (" << s.size() << " rows)\n";
    }
}

void cmd_optimize(Context& c) {
    const json& b = block(c.cfg, "optimize");
    check_keys(b, {"eps_cov", "eps_rel"}, "optimize");
    const RiskBudgets budgets{get_number(b, "eps_cov", 0.01, "optimize"), get_number(b, "eps_rel", 0.01, "optimize")};
    budgets.validate();
    const auto s = obtain_samples(c.common);
    const auto r = optimize(s, c.common.protocol, budgets);

    Row row{num(budgets.eps_cov), num(budgets.eps_rel)};
    for (auto& cell : report_cells(r)) row.push_back(cell);
    row.push_back(flag(r.feasible()));
    row.push_back(flag(r.below_resolution));
    write_table(output_path(c.common, c.out, "optimize.csv"), c.command, s,
                {"eps_cov", "eps_rel", "q_max", "r_max", "t_star", "n_t_star", "q_capped", "feasible",
                 "below_resolution"},
                {row}, c.stdout_);
    c.stdout_ << "t_star=" << num(r.t_star) << " n_t_star=" << num(r.total_payload)
              << (r.feasible() ? "" : " (infeasible: no positive rate meets the reliability budget)") << '\n';
}

void cmd_frontier(Context& c) {
    const json& b = block(c.cfg, "frontier");
    check_keys(b, {"eps_grid"}, "frontier");
    const auto grid = grid_or(b, "eps_grid", logspace(-5, -1, 30), "frontier");
    const auto s = obtain_samples(c.common);
    std::vector<Row> rows;
    for (const auto& fr : frontier_sweep(s, c.common.protocol, grid, c.common.threads)) {
        Row row{num(fr.eps)};
        for (auto& cell : report_cells(fr.report)) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    write_table(output_path(c.common, c.out, "frontier.csv"), c.command, s,
                {"eps", "q_max", "r_max", "t_star", "n_t_star", "q_capped"}, rows, c.stdout_);
}

void cmd_surface(Context& c) {
    const json& b = block(c.cfg, "surface");
    check_keys(b, {"eps_cov_grid", "eps_rel_grid"}, "surface");
    const auto cov = grid_or(b, "eps_cov_grid", logspace(-5, -1, 20), "surface");
    const auto rel = grid_or(b, "eps_rel_grid", logspace(-5, -1, 20), "surface");
    const auto s = obtain_samples(c.common);
    const auto surf = surface_sweep(s, c.common.protocol, cov, rel, c.common.threads);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < cov.size(); ++i) {
        for (std::size_t j = 0; j < rel.size(); ++j) {
            Row row{num(cov[i]), num(rel[j])};
            for (auto& cell : report_cells(surf[i][j])) row.push_back(cell);
            rows.push_back(std::move(row));
        }
    }
    write_table(output_path(c.common, c.out, "surface.csv"), c.command, s,
                {"eps_cov", "eps_rel", "q_max", "r_max", "t_star", "n_t_star", "q_capped"}, rows, c.stdout_);
}

void cmd_scaling(Context& c) {
    const json& b = block(c.cfg, "scaling");
    check_keys(b, {"eps", "n_grid"}, "scaling");
    const double eps = get_number(b, "eps", 0.01, "scaling");
    std::vector<std::uint64_t> ns;
    if (b.contains("n_grid")) {
        if (!b.at("n_grid").is_array()) throw ConfigError("scaling.n_grid: expected an array of integers");
        for (const auto& v : b.at("n_grid")) ns.push_back(to_count(v, "scaling.n_grid"));
    } else {
        for (std::uint64_t n = 10'000; n <= 10'000'000'000ull; n *= 10) ns.push_back(n);
    }
    const auto s = obtain_samples(c.common);
    std::vector<Row> rows;
    for (const auto& sr : n_scaling_sweep(s, c.common.protocol.delta, eps, ns)) {
        rows.push_back({num(sr.n), num(sr.report.q_max), num(sr.report.t_star), num(sr.report.total_payload),
                        flag(sr.report.q_capped)});
    }
    write_table(output_path(c.common, c.out, "scaling.csv"), c.command, s,
                {"n", "q_max", "t_star", "n_t_star", "q_capped"}, rows, c.stdout_);
}

void cmd_benchmark_validate(Context& c) {
    const json& b = block(c.cfg, "benchmark_validate");
    check_keys(b, {"eps_list"}, "benchmark_validate");
    const auto* ch = std::get_if<BenchmarkChannel>(&c.common.channel);
    if (!ch) throw ConfigError("benchmark-validate needs channel.type = \"benchmark\"");
    const auto eps = grid_or(b, "eps_list", {1e-3, 1e-2, 0.1, 0.2, 0.5}, "benchmark_validate");
    const auto s = obtain_samples(c.common);
    std::vector<Row> rows;
    for (const auto& v : validate(*ch, c.common.protocol, eps, s)) {
        rows.push_back({num(v.eps), v.metric, num(v.theory), num(v.mc),
                        v.rel_error_percent ? num(*v.rel_error_percent) : std::string{}});
    }
    write_table(output_path(c.common, c.out, "benchmark_validation.csv"), c.command, s,
                {"risk", "metric", "theory", "simulation", "error_percent"}, rows, c.stdout_);
}

void cmd_decade_gains(Context& c) {
    const json& b = block(c.cfg, "decade_gains");
    check_keys(b, {"allow_infeasible"}, "decade_gains");
    const bool allow = get_bool(b, "allow_infeasible", false, "decade_gains");
    const auto s = obtain_samples(c.common);
    const auto frontier = frontier_sweep(s, c.common.protocol, kDecadeBudgets, c.common.threads);
    const auto gains = decade_gains(frontier);
    std::vector<Row> rows;
    bool missing = false;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        missing = missing || !gains[i];
        rows.push_back({num(frontier[i].eps), num(frontier[i + 1].eps), num(frontier[i].report.t_star),
                        num(frontier[i + 1].report.t_star), gains[i] ? num(*gains[i]) : std::string{}});
    }
    write_table(output_path(c.common, c.out, "decade_gains.csv"), c.command, s,
                {"eps_from", "eps_to", "t_star_from", "t_star_to", "gain"}, rows, c.stdout_);
    if (missing && !allow) {
        throw InfeasibleGainError("a decade gain is undefined because t_star is 0 at its lower budget");
    }
}

void cmd_risk_adjusted(Context& c) {
    const json& b = block(c.cfg, "risk_adjusted");
    check_keys(b, {"mode", "points_per_axis", "lambda_grid", "fixed_lambda", "lambda_cov_grid", "lambda_rel_grid"},
               "risk_adjusted");
    const auto mode = get_string(b, "mode", "sweep-cov", "risk_adjusted");
    const GridSpec g{get_count(b, "points_per_axis", 401, "risk_adjusted")};
    g.validate();
    const auto default_lambdas = logspace(-2, 6, 40);

    std::vector<std::pair<RiskWeights, GridOptimum>> results;
    std::optional<SampleSet> s;
    if (mode == "sweep-cov" || mode == "sweep-rel") {
        const auto values = grid_or(b, "lambda_grid", default_lambdas, "risk_adjusted");
        const double fixed = get_number(b, "fixed_lambda", mode == "sweep-cov" ? 1.0 : 10.0, "risk_adjusted");
        s = obtain_samples(c.common);
        const auto axis = mode == "sweep-cov" ? LambdaAxis::cov : LambdaAxis::rel;
        for (const auto& row : lambda_sweep(*s, c.common.protocol, g, axis, values, fixed, c.common.threads)) {
            results.emplace_back(row.weights, row.optimum);
        }
    } else if (mode == "heatmap") {
        const auto cov = grid_or(b, "lambda_cov_grid", logspace(-6, 6, 25), "risk_adjusted");
        const auto rel = grid_or(b, "lambda_rel_grid", logspace(-6, 6, 25), "risk_adjusted");
        s = obtain_samples(c.common);
        const auto hm = heatmap_sweep(*s, c.common.protocol, g, cov, rel, c.common.threads);
        for (std::size_t i = 0; i < cov.size(); ++i) {
            for (std::size_t j = 0; j < rel.size(); ++j) results.emplace_back(RiskWeights{cov[i], rel[j]}, hm[i][j]);
        }
    } else {
        throw ConfigError("risk_adjusted.mode: expected sweep-cov, sweep-rel or heatmap");
    }

    std::vector<Row> rows;
    for (const auto& [w, o] : results) {
        rows.push_back({num(w.lambda_cov), num(w.lambda_rel), num(o.strategy.q), num(o.strategy.r), num(o.value),
                        flag(o.outside_sparse_regime)});
    }
    write_table(output_path(c.common, c.out, "risk_adjusted_" + mode + ".csv"), c.command, *s,
                {"lambda_cov", "lambda_rel", "q_star", "r_star", "J", "outside_sparse_regime"}, rows, c.stdout_);
}

void cmd_sensitivity(Context& c) {
    const json& b = block(c.cfg, "sensitivity");
    check_keys(b, {"eps_grid", "relative_step"}, "sensitivity");
    const auto grid = grid_or(b, "eps_grid", logspace(-4, -1, 20), "sensitivity");
    const double step = get_number(b, "relative_step", kSensitivityStep, "sensitivity");
    const auto s = obtain_samples(c.common);
    std::vector<Row> rows;
    for (const auto& pt : sensitivities_symmetric(s, c.common.protocol, grid, step)) {
        rows.push_back({num(pt.eps), num(pt.s_cov), num(pt.s_rel), flag(pt.atom_suspected),
                        flag(pt.kink_suspected), flag(pt.one_sided)});
    }
    write_table(output_path(c.common, c.out, "sensitivity.csv"), c.command, s,
                {"eps", "s_cov", "s_rel", "atom_suspected", "kink_suspected", "one_sided"}, rows, c.stdout_);
}

using Handler = void (*)(Context&);

struct Command {
    const char* name;
    const char* help;
    Handler handler;
};

const Command kCommands[] = {
    {"sample", "draw channel realizations and write the sample cache", cmd_sample},
    {"optimize", "risk-constrained optimum at one budget pair", cmd_optimize},
    {"frontier", "optimum along the symmetric-budget line", cmd_frontier},
    {"surface", "optimum over an (eps_cov, eps_rel) grid", cmd_surface},
    {"scaling", "total payload versus frame length", cmd_scaling},
    {"benchmark-validate", "Monte Carlo versus closed form on the exponential-noise channel", cmd_benchmark_validate},
    {"decade-gains", "throughput gain per decade of risk budget", cmd_decade_gains},
    {"risk-adjusted", "grid maximization of the risk-adjusted objective", cmd_risk_adjusted},
    {"sensitivity", "finite-difference budget sensitivities", cmd_sensitivity},
};

const char* const kTopLevelKeys[] = {"channel", "protocol", "K", "seed", "threads", "output_dir", "cache",
                                     "sample", "optimize", "frontier", "surface", "scaling",
                                     "benchmark_validate", "decade_gains", "risk_adjusted", "sensitivity"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Risk-aware design of covert quantum communication operating points", "cqc"};
    app.require_subcommand(1);
    Flags f;
    std::vector<CLI::App*> subs;
    for (const auto& cmd : kCommands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub, f);
        subs.push_back(sub);
    }
    auto sub_of = [&](std::string_view name) {
        return *std::find_if(subs.begin(), subs.end(), [&](auto* s) { return s->get_name() == name; });
    };
    sub_of("sample")->add_option("--cache-out", f.cache_out, "cache file to write");
    sub_of("sample")->add_flag("--no-csv", f.no_csv, "skip the CSV export");
    sub_of("optimize")->add_option("--eps-cov", f.eps_cov, "covertness outage budget");
    sub_of("optimize")->add_option("--eps-rel", f.eps_rel, "reliability outage budget");
    sub_of("frontier")->add_option("--eps-grid", f.eps_grid, "budget values")->delimiter(',');
    sub_of("sensitivity")->add_option("--eps-grid", f.eps_grid, "budget values")->delimiter(',');
    sub_of("sensitivity")->add_option("--relative-step", f.relative_step, "finite-difference step as a fraction of eps");
    sub_of("benchmark-validate")->add_option("--eps-grid", f.eps_grid, "budget values")->delimiter(',');
    sub_of("scaling")->add_option("--eps", f.eps, "symmetric budget");
    sub_of("scaling")->add_option("--n-grid", f.n_grid, "frame lengths")->delimiter(',');
    sub_of("decade-gains")->add_flag("--allow-infeasible", f.allow_infeasible, "exit 0 even if a gain is undefined");
    sub_of("risk-adjusted")->add_option("--mode", f.mode, "sweep-cov, sweep-rel or heatmap");
    sub_of("risk-adjusted")->add_option("--points", f.points, "grid points per axis");
    sub_of("risk-adjusted")->add_option("--lambda-grid", f.lambda_grid, "swept weight values")->delimiter(',');
    sub_of("risk-adjusted")->add_option("--fixed-lambda", f.fixed_lambda, "value of the weight held fixed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        json cfg = merge_flags(load_config(f.config), sub, f);
        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            if (std::find(std::begin(kTopLevelKeys), std::end(kTopLevelKeys), it.key()) == std::end(kTopLevelKeys)) {
                throw ConfigError("config: unknown key '" + it.key() + "'");
            }
        }
        Context ctx{name, cfg, parse_common(cfg, name == "benchmark-validate" ? "benchmark" : "stochastic"),
                    given(sub, "--out") ? std::optional<std::string>(f.out) : std::nullopt, out};
        for (const auto& cmd : kCommands) {
            if (name == cmd.name) cmd.handler(ctx);
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParameterError& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return kConfigError;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const CacheError& e) {
        err << "cache error: " << e.what() << '\n';
        return kIoError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const InfeasibleGainError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasibleGain;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace cqc::cli
