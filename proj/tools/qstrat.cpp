// qstrat: command-line front end for quantile-stratified sampling.
//
//   qstrat sample     --dist normal --params 0,1 --method qs --m 30 --seed 7
//   qstrat theory     --m 30 --layers 18,9,3
//   qstrat experiment --name importance_study --example B --threads 8
//   qstrat experiment --config study.json
//
// Exit status: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qstrat/distribution.hpp"
#include "qstrat/errors.hpp"
#include "qstrat/experiments.hpp"
#include "qstrat/sampling.hpp"
#include "qstrat/theory.hpp"

namespace {

using namespace qstrat;
using experiments::json;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QSTRAT_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("QSTRAT_SEED is not an unsigned integer: ") + env);
    }
    return 1;
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw ConfigError("");
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

// Writes to `path`, or stdout when empty.
template <class WriteFn>
void emit(const std::string& path, WriteFn&& write) {
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path);
    write(os);
    if (!os) throw std::runtime_error("write failed for " + path);
}

struct DistFlags {
    std::string family = "normal";
    std::string params;
    std::string points;
    std::string probs;

    experiments::DistSpec spec() const {
        experiments::DistSpec d;
        d.family = family;
        if (!params.empty()) d.params = parse_reals(params);
        if (!points.empty()) d.points = parse_reals(points);
        if (!probs.empty()) d.probs = parse_reals(probs);
        return d;
    }
};

void add_dist_flags(CLI::App* app, DistFlags& f, const std::string& prefix = "") {
    app->add_option("--" + prefix + "dist", f.family, "uniform, normal, beta, gamma or discrete");
    app->add_option("--" + prefix + "params", f.params, "comma-separated parameters (gamma: shape,rate)");
    app->add_option("--" + prefix + "points", f.points, "discrete atoms, comma-separated");
    app->add_option("--" + prefix + "probs", f.probs, "discrete probabilities, comma-separated");
}

// ---------------------------------------------------------------------------

struct SampleArgs {
    DistFlags dist;
    std::string method = "qs";
    int m = 0;
    std::string layers;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

int run_sample(const SampleArgs& args) {
    const Distribution dist = experiments::make_distribution(args.dist.spec());
    const auto format = experiments::parse_format(args.format);
    Method method{parse_method(args.method), {}};
    int m = args.m;
    if (method.kind == MethodKind::LQS) {
        if (args.layers.empty()) throw ConfigError("--method lqs requires --layers");
        method.layers = LayerSpec::parse(args.layers);
        if (m == 0) m = method.layers.total();
    } else if (!args.layers.empty()) {
        throw ConfigError("--layers is only valid with --method lqs");
    }
    if (m < 1) throw ConfigError("--m must be >= 1");

    const std::uint64_t seed = args.seed ? *args.seed : default_seed();
    Rng rng(seed);
    const SampleBatch batch = sample(dist, m, method, rng);

    experiments::Table table{{"index", "uniform", "value", "block", "layer"}, {}};
    for (std::size_t i = 0; i < batch.size(); ++i) {
        table.rows.push_back({static_cast<long long>(i), batch.uniforms[i], batch.values[i],
                              static_cast<long long>(batch.blocks[i]), static_cast<long long>(batch.layer_of[i])});
    }
    emit(args.out, [&](std::ostream& os) {
        if (format == experiments::Format::Csv) {
            table.write_csv(os);
            return;
        }
        json j;
        j["distribution"] = dist.name();
        j["method"] = experiments::method_label(method);
        j["m"] = m;
        j["seed"] = seed;
        j["uniforms"] = batch.uniforms;
        j["values"] = batch.values;
        j["blocks"] = batch.blocks;
        j["layers"] = batch.layer_of;
        os << j.dump(2) << '\n';
    });
    return 0;
}

// ---------------------------------------------------------------------------

struct TheoryArgs {
    int m = 0;
    std::optional<int> k;
    std::optional<int> ell;
    std::string layers;
    std::optional<double> phi;
    std::string out;
};

json moments_json(const theory::MomentSummary& s) {
    return {{"mean", s.mean}, {"variance", s.variance}, {"pair_covariance", s.pair_covariance},
            {"pair_correlation", s.pair_correlation}};
}

json spacing_json(const theory::SpacingLaw& law) {
    json j;
    if (law.kind == theory::SpacingLaw::Kind::Beta) {
        j["law"] = "beta";
        j["alpha"] = law.alpha;
        j["beta"] = law.beta;
    } else {
        j["law"] = "triangular";
        j["lo"] = law.lo;
        j["mode"] = law.mode;
        j["hi"] = law.hi;
    }
    j["mean"] = law.mean;
    j["variance"] = law.variance;
    return j;
}

int run_theory(const TheoryArgs& args) {
    std::optional<LayerSpec> layers;
    int m = args.m;
    if (!args.layers.empty()) {
        layers = LayerSpec::parse(args.layers);
        if (m == 0) m = layers->total();
        if (layers->total() != m) {
            throw ConfigError("layer sizes sum to " + std::to_string(layers->total()) + " but m = " +
                              std::to_string(m));
        }
    }
    if (m < 1) throw ConfigError("--m must be >= 1");

    json j;
    j["m"] = m;
    if (m >= 2) j["qs_uniform_moments"] = moments_json(theory::qs_uniform_moments(m));
    if (layers) {
        j["layers"] = layers->sizes();
        if (m >= 2) {
            j["lqs_uniform_moments"] = moments_json(theory::lqs_uniform_moments(*layers));
            j["adj_factor"] = theory::adj_factor(*layers);
        }
    }
    if (args.k) {
        const int k = *args.k;
        const auto t = theory::quantile_targets(m, k);
        json ord;
        ord["k"] = k;
        ord["p_k"] = t.p_k;
        ord["p_k_star"] = t.p_k_star;
        for (auto method : {MethodKind::IID, MethodKind::QS}) {
            const auto mom = theory::order_stat_moments(m, k, method);
            const std::string name(method_name(method));
            ord[name] = {{"mean", mom.mean},
                         {"variance", mom.variance},
                         {"mse_p_k", theory::mse_exact(m, k, theory::Target::Pk, method)},
                         {"mse_p_k_star", theory::mse_exact(m, k, theory::Target::PkStar, method)}};
        }
        j["order_statistic"] = ord;
    }
    if (args.phi) {
        const double phi = *args.phi;
        json asym;
        asym["phi"] = phi;
        for (auto method : {MethodKind::IID, MethodKind::QS}) {
            const std::string name(method_name(method));
            asym[name] = {{"mse_p_k", theory::mse_asymptotic(phi, m, theory::Target::Pk, method)},
                          {"mse_p_k_star", theory::mse_asymptotic(phi, m, theory::Target::PkStar, method)}};
        }
        asym["r"] = theory::r_shape(phi);
        asym["r_star"] = theory::r_star_shape(phi);
        j["asymptotic"] = asym;
    }
    if (args.ell) {
        j["spacing"] = {{"ell", *args.ell},
                        {"iid", spacing_json(theory::spacing_law(m, *args.ell, MethodKind::IID))},
                        {"qs", spacing_json(theory::spacing_law(m, *args.ell, MethodKind::QS))}};
    }
    emit(args.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
    std::string config_path;
    std::string name;
    DistFlags dist;
    int m = 0;
    std::string layers;
    std::size_t replicates = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
    int ell = 3;
    std::string example = "A";
    DistFlags target;
    DistFlags proposal;
    std::string integrand;
    std::optional<double> true_value;
    unsigned threads = 1;
};

int run_experiment(const ExperimentArgs& args, const CLI::App& sub) {
    experiments::ExperimentConfig cfg;
    if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) throw ConfigError("cannot read config file " + args.config_path);
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.contains("seed")) j["seed"] = default_seed();
        cfg = experiments::config_from_json(j);
    } else {
        cfg.seed = default_seed();
    }

    // Flags given explicitly override the config file.
    const auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    if (given("--name")) cfg.experiment = experiments::parse_experiment(args.name);
    else if (args.config_path.empty()) throw ConfigError("experiment needs --name or --config");
    if (given("--dist") || given("--params") || given("--points") || given("--probs")) cfg.dist = args.dist.spec();
    if (given("--m")) cfg.m = args.m;
    if (given("--layers")) cfg.layers = LayerSpec::parse(args.layers);
    if (given("--replicates")) cfg.replicates = args.replicates;
    if (args.seed) cfg.seed = *args.seed;
    if (given("--out")) cfg.output_path = args.out;
    if (given("--format")) cfg.format = experiments::parse_format(args.format);
    if (given("--ell")) cfg.ell = args.ell;
    if (given("--example")) cfg.example = args.example;
    if (given("--target-dist") || given("--target-params")) cfg.target = args.target.spec();
    if (given("--proposal-dist") || given("--proposal-params")) cfg.proposal = args.proposal.spec();
    if (given("--integrand")) cfg.integrand = args.integrand;
    if (args.true_value) cfg.true_value = args.true_value;
    if (given("--threads")) cfg.threads = args.threads;
    if (cfg.threads == 0) cfg.threads = default_thread_count();
    if (cfg.replicates == 0 && given("--replicates")) throw ConfigError("--replicates must be >= 1");

    const experiments::Artifact artifact = experiments::run(cfg);
    emit(cfg.output_path, [&](std::ostream& os) { artifact.write(os, cfg.format); });
    if (!cfg.output_path.empty()) {
        std::cerr << experiments::experiment_name(cfg.experiment) << ": "
                  << (artifact.pass() ? "all checks pass" : "some checks FAILED") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantile-stratified sampling toolkit"};
    app.require_subcommand(1);

    SampleArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample", "Draw one IID, QS or LQS batch");
    add_dist_flags(sample_cmd, sample_args.dist);
    sample_cmd->add_option("--method", sample_args.method, "iid, qs or lqs");
    sample_cmd->add_option("--m", sample_args.m, "sample size");
    sample_cmd->add_option("--layers", sample_args.layers, "LQS layer sizes, e.g. 18,9,3");
    sample_cmd->add_option("--seed", sample_args.seed, "master seed (default: $QSTRAT_SEED or 1)");
    sample_cmd->add_option("--out", sample_args.out, "output file (default stdout)");
    sample_cmd->add_option("--format", sample_args.format, "csv or json");

    TheoryArgs theory_args;
    auto* theory_cmd = app.add_subcommand("theory", "Emit closed-form results as JSON");
    theory_cmd->add_option("--m", theory_args.m, "sample size");
    theory_cmd->add_option("--k", theory_args.k, "order-statistic index");
    theory_cmd->add_option("--ell", theory_args.ell, "spacing lag");
    theory_cmd->add_option("--layers", theory_args.layers, "LQS layer sizes");
    theory_cmd->add_option("--phi", theory_args.phi, "k/m for the asymptotic forms");
    theory_cmd->add_option("--out", theory_args.out, "output file (default stdout)");

    ExperimentArgs exp_args;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a verification or reproduction experiment");
    exp_cmd->add_option("--config", exp_args.config_path, "JSON config file");
    exp_cmd->add_option("--name", exp_args.name,
                        "moment_check, qq_export, mse_grid, spacing_check or importance_study");
    add_dist_flags(exp_cmd, exp_args.dist);
    exp_cmd->add_option("--m", exp_args.m, "sample size (or m_max for mse_grid)");
    exp_cmd->add_option("--layers", exp_args.layers, "LQS layer sizes");
    exp_cmd->add_option("--replicates", exp_args.replicates, "replicate count");
    exp_cmd->add_option("--seed", exp_args.seed, "master seed (default: $QSTRAT_SEED or 1)");
    exp_cmd->add_option("--out", exp_args.out, "output file (default stdout)");
    exp_cmd->add_option("--format", exp_args.format, "csv or json");
    exp_cmd->add_option("--ell", exp_args.ell, "spacing lag for spacing_check");
    exp_cmd->add_option("--example", exp_args.example, "importance_study problem: A, B or custom");
    add_dist_flags(exp_cmd, exp_args.target, "target-");
    add_dist_flags(exp_cmd, exp_args.proposal, "proposal-");
    exp_cmd->add_option("--integrand", exp_args.integrand, "one, x, x2, xlogx or exp_neg_x2");
    exp_cmd->add_option("--true-value", exp_args.true_value, "known value of the integral");
    exp_cmd->add_option("--threads", exp_args.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (sample_cmd->parsed()) return run_sample(sample_args);
        if (theory_cmd->parsed()) return run_theory(theory_args);
        if (exp_cmd->parsed()) return run_experiment(exp_args, *exp_cmd);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const PairUndefined& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
