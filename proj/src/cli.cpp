#include "spectail/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectail/bounds.hpp"
#include "spectail/chaining.hpp"
#include "spectail/errors.hpp"
#include "spectail/experiments.hpp"
#include "spectail/lemma_lab.hpp"
#include "spectail/matrix_model.hpp"
#include "spectail/rng.hpp"
#include "spectail/specnorm.hpp"
#include "spectail/subexp_dist.hpp"

namespace spectail::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<ojson>> rows;
};

std::string csv_cell(const ojson& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
        return s;
    }
    return v.dump();
}

std::string table_cell(const ojson& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10f", v.get<double>());
        return buf;
    }
    return csv_cell(v);
}

std::string render(const Table& t, const std::string& format) {
    std::string out;
    if (format == "csv") {
        for (std::size_t i = 0; i < t.cols.size(); ++i) out += (i ? "," : "") + t.cols[i];
        out += '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_cell(r[i]);
            out += '\n';
        }
    } else if (format == "json") {
        ojson arr = ojson::array();
        for (const auto& r : t.rows) {
            ojson o = ojson::object();
            for (std::size_t i = 0; i < r.size(); ++i) o[t.cols[i]] = r[i];
            arr.push_back(o);
        }
        out = arr.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> cells;
        std::vector<std::size_t> width(t.cols.size());
        for (std::size_t i = 0; i < t.cols.size(); ++i) width[i] = t.cols[i].size();
        for (const auto& r : t.rows) {
            cells.emplace_back();
            for (std::size_t i = 0; i < r.size(); ++i) {
                cells.back().push_back(table_cell(r[i]));
                width[i] = std::max(width[i], cells.back().back().size());
            }
        }
        auto line = [&](const std::vector<std::string>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += "  ";
                out += v[i];
                if (i + 1 < v.size()) out += std::string(width[i] - v[i].size(), ' ');
            }
            out += '\n';
        };
        line(t.cols);
        for (const auto& c : cells) line(c);
    }
    return out;
}

struct Globals {
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    int threads = 0;
    std::string out_path;
    std::string config_path;
    std::string format = "table";
};

class UsageError : public Error {
public:
    using Error::Error;
};

void emit(const Globals& g, std::ostream& out, const std::string& text) {
    if (g.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + g.out_path);
    f << text;
    if (!f) throw IoError("write failed for " + g.out_path);
}

std::uint64_t require_seed(const Globals& g, const char* what) {
    if (g.seed_opt->count() == 0) throw UsageError(std::string(what) + " is stochastic and needs --seed");
    return g.seed;
}

struct LawOpts {
    std::string family = "laplace";
    double scale = 1.0;
    std::optional<double> shape;

    DistributionSpec spec() const {
        DistributionSpec d;
        d.family = family_from_name(family);
        d.scale = d.family == Family::zero ? 0.0 : scale;
        if (d.family == Family::symmetric_weibull) {
            if (!shape) throw UsageError("the weibull family needs --shape");
            d.shape = *shape;
        }
        d.validate();
        return d;
    }
};

void add_law_options(CLI::App* app, LawOpts& o) {
    app->add_option("--family", o.family, "Entry law: centered_exponential, laplace, gaussian, rademacher, weibull, zero")
        ->capture_default_str();
    app->add_option("--scale", o.scale, "Scale parameter of the entry law")->capture_default_str();
    app->add_option("--shape", o.shape, "Weibull shape parameter");
}

struct ProfileOpts {
    std::string kind = "wigner";
    int n = 16;
    double base_scale = 1.0;
    LawOpts law;
    double alpha = 1.0;
    int width = 1;
    double p = 1.0;
    std::uint64_t mask_seed = 0;
    std::vector<int> sizes;
    std::vector<double> scales;

    ProfileSpec spec() const {
        ProfileSpec s;
        s.kind = kind_from_name(kind);
        s.n = n;
        s.base_scale = base_scale;
        s.family = law.spec();
        s.alpha = alpha;
        s.band_width = width;
        s.sparse_p = p;
        s.sparse_seed = mask_seed;
        s.block_sizes = sizes;
        s.block_scales = scales;
        return s;
    }
};

void add_profile_options(CLI::App* app, ProfileOpts& o) {
    app->add_option("--profile", o.kind, "Ensemble: wigner, diagonal, band, sparse, block")->capture_default_str();
    app->add_option("--n", o.n, "Matrix dimension")->capture_default_str();
    app->add_option("--base-scale", o.base_scale, "psi-norm of the entries")->capture_default_str();
    add_law_options(app, o.law);
    app->add_option("--alpha", o.alpha, "Tail class in [1, 2]")->capture_default_str();
    app->add_option("--width", o.width, "Band half-width");
    app->add_option("--p", o.p, "Sparse keep probability");
    app->add_option("--mask-seed", o.mask_seed, "Seed of the quenched sparsity mask");
    app->add_option("--sizes", o.sizes, "Block sizes")->delimiter(',');
    app->add_option("--scales", o.scales, "Per-block scale multipliers")->delimiter(',');
}

// ---------------------------------------------------------------------------

int cmd_psi_norm(const Globals& g, std::ostream& out, const LawOpts& law, double alpha, double tol) {
    const DistributionSpec d = law.spec();
    const PsiNorm p = psi_norm(d, alpha, tol);
    Table t{{"family", "scale", "alpha", "psi_norm"}, {}};
    t.rows.push_back({std::string(family_name(d.family)), d.scale, alpha, p.value});
    emit(g, out, render(t, g.format));
    return kExitOk;
}

int cmd_sample(const Globals& g, std::ostream& out, const ProfileOpts& po, long long trial) {
    const std::uint64_t seed = require_seed(g, "sample");
    const Profile profile = build_profile(po.spec());
    const SymMatrixSample s = sample_matrix(profile, seed, static_cast<std::uint64_t>(trial));
    if (!g.out_path.empty()) {
        std::ofstream f(g.out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + g.out_path);
        write_matrix_binary(f, s);
        if (!f) throw IoError("write failed for " + g.out_path);
        return kExitOk;
    }
    Table t;
    for (int j = 0; j < profile.n(); ++j) t.cols.push_back("c" + std::to_string(j));
    for (int i = 0; i < profile.n(); ++i) {
        std::vector<ojson> row;
        for (int j = 0; j < profile.n(); ++j) row.emplace_back(s.matrix(i, j));
        t.rows.push_back(std::move(row));
    }
    out << render(t, g.format);
    return kExitOk;
}

int cmd_norm(const Globals& g, std::ostream& out, const ProfileOpts& po, long long trial, const std::string& in_path,
             const std::string& method, double tol) {
    Eigen::MatrixXd A;
    std::uint64_t seed = 0;
    if (!in_path.empty()) {
        std::ifstream f(in_path, std::ios::binary);
        if (!f) throw IoError("cannot open " + in_path);
        SymMatrixSample s = read_matrix_binary(f);
        seed = s.provenance.master_seed;
        A = std::move(s.matrix);
    } else {
        seed = require_seed(g, "norm");
        A = sample_matrix(build_profile(po.spec()), seed, static_cast<std::uint64_t>(trial)).matrix;
    }
    NormResult r;
    if (method == "exact") {
        r = spectral_norm_exact(A);
    } else if (method == "iterative") {
        IterOptions opt;
        opt.tol = tol;
        opt.seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
        r = spectral_norm_iter(A, opt);
    } else {
        throw UsageError("--method must be exact or iterative");
    }
    Table t{{"n", "method", "norm", "residual", "iterations"}, {}};
    t.rows.push_back({static_cast<long long>(A.rows()), std::string(method_name(r.method)), r.value, r.residual,
                      r.iterations});
    emit(g, out, render(t, g.format));
    return kExitOk;
}

Table curve_table(const TailCurve& c) {
    Table t{{"t", "s", "exceed", "N", "p_hat", "ci_low", "ci_high", "bound"}, {}};
    for (const TailRow& r : c.rows) t.rows.push_back({r.t, r.s, r.exceed, r.N, r.p_hat, r.ci_low, r.ci_high, r.bound});
    return t;
}

struct TailOpts {
    ProfileOpts profile;
    long long trials = 1000;
    std::string method = "exact";
    double tol = 1e-8;
    std::string constants_path;
    std::string checkpoint;
    long long checkpoint_every = 0;
    std::optional<long long> stop_after;
    std::string jsonl;
};

ExperimentConfig tail_config(const Globals& g, const TailOpts& o, const char* what) {
    ExperimentConfig c;
    if (!g.config_path.empty()) {
        c = read_config_file(g.config_path);
        if (g.seed_opt->count() > 0) c.seed = g.seed;
    } else {
        c.profile = o.profile.spec();
        c.trials = o.trials;
        c.seed = require_seed(g, what);
        if (o.method == "exact") {
            c.method = NormMethod::exact;
        } else if (o.method == "iterative") {
            c.method = NormMethod::iterative;
        } else {
            throw UsageError("--method must be exact or iterative");
        }
        c.tol = o.tol;
        if (!o.constants_path.empty()) c.constants = read_constants_file(o.constants_path);
    }
    if (!o.checkpoint.empty()) c.checkpoint_path = o.checkpoint;
    if (o.checkpoint_every > 0) c.checkpoint_every = o.checkpoint_every;
    if (o.stop_after) c.stop_after = o.stop_after;
    if (!o.jsonl.empty()) c.jsonl_path = o.jsonl;
    if (g.threads > 0) c.threads = g.threads;
    c.validate();
    return c;
}

int cmd_tail(const Globals& g, std::ostream& out, std::ostream& err, const TailOpts& o) {
    const ExperimentConfig c = tail_config(g, o, "tail");
    const ExperimentResult r = run_tail_experiment(c);
    if (!r.complete) {
        err << "stopped after " << r.completed << " of " << c.trials << " trials\n";
        return kExitOk;
    }
    emit(g, out, render(curve_table(r.curve), g.format));
    return kExitOk;
}

int cmd_calibrate(const Globals& g, std::ostream& out, const TailOpts& o) {
    const ExperimentConfig c = tail_config(g, o, "calibrate");
    const Profile profile = build_profile(c.profile);
    const std::vector<TrialRecord> records = run_trials(profile, c, 0, c.trials);
    const BoundConstants k = calibrate_from_records(profile, c, records);
    emit(g, out, nlohmann::json(k).dump(2) + "\n");
    return kExitOk;
}

int cmd_chain_verify(const Globals& g, std::ostream& out, const ProfileOpts& po, long long trials) {
    const std::uint64_t seed = require_seed(g, "chain-verify");
    const Profile profile = build_profile(po.spec());
    Table t{{"trial", "n", "l", "blocks", "error", "error_neg", "norm", "qf", "qf_neg", "ratio", "pass"}, {}};
    bool all = true;
    for (long long k = 0; k < trials; ++k) {
        const Eigen::MatrixXd X = sample_matrix(profile, seed, static_cast<std::uint64_t>(k)).matrix;
        const ContractionReport r = contraction_check(X);
        all = all && r.passed();
        ojson blocks = ojson::array();
        for (int b : r.block_sizes) blocks.push_back(b);
        t.rows.push_back({k, r.n, r.l, blocks, r.error, r.error_neg, r.spectral_norm, r.qf_approx, r.qf_approx_neg,
                          r.ratio, r.passed()});
    }
    emit(g, out, render(t, g.format));
    return all ? kExitOk : kExitVerification;
}

int cmd_net_verify(const Globals& g, std::ostream& out, int dim, double eps, double cap, int probes, int stall) {
    const std::uint64_t seed = require_seed(g, "net-verify");
    RandomStream build(seed, StreamTag::net_build, static_cast<std::uint32_t>(dim));
    RandomStream probe(seed, StreamTag::net_probe, static_cast<std::uint32_t>(dim));
    const SliceNet net = build_greedy_net(dim, eps, cap, probes, build, stall);
    const CoverReport r = verify_covering(net, probes, probe);
    const double bound = net_cardinality_bound(dim, eps);
    const bool pass = r.failures == 0 && static_cast<double>(net.size()) <= bound;
    Table t{{"dim", "epsilon", "alpha", "size", "bound", "probes", "failures", "max_distance", "pass"}, {}};
    t.rows.push_back({dim, eps, cap, static_cast<long long>(net.size()), bound, r.probes, r.failures, r.max_distance,
                      pass});
    emit(g, out, render(t, g.format));
    return pass ? kExitOk : kExitVerification;
}

struct LemmaOpts {
    std::string which;
    int n = 50;
    long long trials = 10000;
    std::string pattern;
    int p_max = 40;
    double level = 0.01;
    double alpha = 1.0;
    LawOpts law;
};

int cmd_lemma(const Globals& g, std::ostream& out, const LemmaOpts& o) {
    if (o.which == "harmonic") {
        Table t{{"n", "harmonic"}, {}};
        t.rows.push_back({o.n, harmonic(o.n)});
        emit(g, out, render(t, g.format));
        return kExitOk;
    }
    if (o.which == "product-moments") {
        Table t{{"p", "ratio"}, {}};
        for (const ProductMomentRow& r : gaussian_product_moment_check(o.p_max)) t.rows.push_back({r.p, r.ratio});
        emit(g, out, render(t, g.format));
        return kExitOk;
    }
    if (o.which == "renyi") {
        const RenyiStudy r = renyi_study(o.n, o.trials, require_seed(g, "lemma renyi"), o.level);
        Table t{{"n", "trials", "ks_statistic", "ks_critical", "ks_pass", "pooled_mean", "pooled_variance",
                 "max_mean", "max_se", "harmonic", "max_skewness"},
                {}};
        t.rows.push_back({r.n, r.trials, r.ks.statistic, r.ks.critical, r.ks.passed, r.pooled_mean,
                          r.pooled_variance, r.max_stat.mean, r.max_stat.se, r.harmonic_n, r.max_skewness});
        emit(g, out, render(t, g.format));
        return r.ks.passed ? kExitOk : kExitVerification;
    }
    if (o.which == "maxima") {
        const std::uint64_t seed = require_seed(g, "lemma maxima");
        std::vector<WeightPattern> patterns;
        if (o.pattern.empty()) {
            patterns = {WeightPattern::constant, WeightPattern::geometric, WeightPattern::spike, WeightPattern::linear};
        } else {
            patterns = {weight_pattern_from_name(o.pattern)};
        }
        const DistributionSpec law = o.law.spec();
        Table t{{"pattern", "n", "estimate", "se", "scale", "ratio", "ratio_se"}, {}};
        for (WeightPattern p : patterns) {
            const MaximaRatio r = maxima_law_ratio(make_weights(p, o.n), law, o.alpha, o.trials, seed);
            t.rows.push_back({std::string(weight_pattern_name(p)), o.n, r.estimate.mean, r.estimate.se, r.scale,
                              r.ratio, r.ratio_se});
        }
        emit(g, out, render(t, g.format));
        return kExitOk;
    }
    throw UsageError("lemma choice must be renyi, harmonic, maxima or product-moments");
}

int cmd_bounds(const Globals& g, std::ostream& out, const ProfileOpts& po, const std::string& constants_path) {
    const BoundConstants c = constants_path.empty() ? default_constants() : read_constants_file(constants_path);
    const Profile profile = build_profile(po.spec());
    const StructParams p = struct_params(profile);
    Table t{{"quantity", "value"}, {}};
    t.rows.push_back({"n", p.n});
    t.rows.push_back({"alpha", p.alpha});
    t.rows.push_back({"b", p.b});
    t.rows.push_back({"sigma1", p.sigma1});
    t.rows.push_back({"sigma2", p.sigma2});
    t.rows.push_back({"threshold", experiment_threshold(p, c)});
    if (profile.is_diagonal()) {
        std::vector<double> diag;
        for (int i = 0; i < profile.n(); ++i) diag.push_back(profile.beta(i, i));
        t.rows.push_back({"diag_threshold", p.alpha == 1.0 ? thm31_threshold(p.sigma1, p.n, c)
                                                            : thm5_diag_threshold(p.sigma1, p.n, p.alpha, c)});
        t.rows.push_back({"diag_expectation_scale", expectation_bound_diag(diag)});
    }
    const LiteratureBounds lit = literature_bounds(profile.stddev_matrix());
    t.rows.push_back({"vershynin", lit.vershynin});
    t.rows.push_back({"bvh", lit.bvh});
    t.rows.push_back({"lvy", lit.lvy});
    emit(g, out, render(t, g.format));
    return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral-norm tail bounds for structured sub-exponential random matrices", "spectail"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    g.seed_opt = app.add_option("--seed", g.seed, "Master seed (required by stochastic subcommands)");
    app.add_option("--threads", g.threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out_path, "Write results to this file instead of stdout");
    app.add_option("--config", g.config_path, "Experiment config file (JSON, schema 1)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "table"}))
        ->capture_default_str();

    LawOpts psi_law;
    double psi_alpha = 1.0, psi_tol = kDefaultPsiTol;
    auto* psi = app.add_subcommand("psi-norm", "psi_alpha norm of an entry law");
    add_law_options(psi, psi_law);
    psi->add_option("--alpha", psi_alpha, "Orlicz exponent")->capture_default_str();
    psi->add_option("--tol", psi_tol, "Bisection tolerance")->capture_default_str();

    ProfileOpts sample_po;
    long long sample_trial = 0;
    auto* sample = app.add_subcommand("sample", "Draw one matrix from an ensemble");
    add_profile_options(sample, sample_po);
    sample->add_option("--trial", sample_trial, "Trial index")->capture_default_str();

    ProfileOpts norm_po;
    long long norm_trial = 0;
    std::string norm_in, norm_method = "exact";
    double norm_tol = 1e-8;
    auto* norm = app.add_subcommand("norm", "Spectral norm of a stored or freshly sampled matrix");
    add_profile_options(norm, norm_po);
    norm->add_option("--trial", norm_trial, "Trial index")->capture_default_str();
    norm->add_option("--in", norm_in, "Matrix file written by `sample --out`");
    norm->add_option("--method", norm_method, "exact or iterative")->capture_default_str();
    norm->add_option("--tol", norm_tol, "Iterative residual tolerance")->capture_default_str();

    auto add_tail_options = [](CLI::App* a, TailOpts& o) {
        add_profile_options(a, o.profile);
        a->add_option("--trials", o.trials, "Number of Monte Carlo trials")->capture_default_str();
        a->add_option("--method", o.method, "exact or iterative")->capture_default_str();
        a->add_option("--tol", o.tol, "Iterative residual tolerance")->capture_default_str();
        a->add_option("--constants", o.constants_path, "Bound constants file (JSON)");
        a->add_option("--checkpoint", o.checkpoint, "Checkpoint file; an existing one is resumed");
        a->add_option("--checkpoint-every", o.checkpoint_every, "Trials between checkpoint writes");
        a->add_option("--stop-after", o.stop_after, "Stop after this many trials");
        a->add_option("--jsonl", o.jsonl, "Per-trial JSON lines output");
    };
    TailOpts tail_o;
    auto* tail = app.add_subcommand("tail", "Monte Carlo tail curve with confidence intervals and bound");
    add_tail_options(tail, tail_o);

    TailOpts cal_o;
    cal_o.profile.n = 64;
    cal_o.trials = 100000;
    auto* cal = app.add_subcommand("calibrate", "Fit bound constants on an ensemble");
    add_tail_options(cal, cal_o);

    ProfileOpts chain_po;
    long long chain_trials = 10;
    auto* chain = app.add_subcommand("chain-verify", "Approximant and contraction checks on sampled matrices");
    add_profile_options(chain, chain_po);
    chain->add_option("--trials", chain_trials, "Number of matrices")->capture_default_str();

    int net_dim = 2, net_probes = 10000, net_stall = 10;
    double net_eps = 0.25, net_cap = 1.0;
    auto* net = app.add_subcommand("net-verify", "Build a greedy slice net and probe its covering");
    net->add_option("--dim", net_dim, "Slice dimension")->capture_default_str();
    net->add_option("--epsilon", net_eps, "Net radius")->capture_default_str();
    net->add_option("--alpha", net_cap, "Sup-norm cap")->capture_default_str();
    net->add_option("--probes", net_probes, "Covering probes")->capture_default_str();
    net->add_option("--stall-factor", net_stall, "Growth stops after probes x this many covered proposals")
        ->capture_default_str();

    LemmaOpts lemma_o;
    auto* lemma = app.add_subcommand("lemma", "Order-statistics and maxima checks");
    lemma->add_option("which", lemma_o.which, "renyi, harmonic, maxima or product-moments")
        ->required()
        ->check(CLI::IsMember({"renyi", "harmonic", "maxima", "product-moments"}));
    lemma->add_option("--n", lemma_o.n, "Number of variables")->capture_default_str();
    lemma->add_option("--trials", lemma_o.trials, "Monte Carlo trials")->capture_default_str();
    lemma->add_option("--pattern", lemma_o.pattern, "Weight pattern (default: all)");
    lemma->add_option("--p-max", lemma_o.p_max, "Largest moment order")->capture_default_str();
    lemma->add_option("--level", lemma_o.level, "KS test level")->capture_default_str();
    lemma->add_option("--alpha", lemma_o.alpha, "Tail exponent in the maxima law")->capture_default_str();
    add_law_options(lemma, lemma_o.law);

    ProfileOpts bounds_po;
    std::string bounds_constants;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the bounds for a profile");
    add_profile_options(bounds, bounds_po);
    bounds->add_option("--constants", bounds_constants, "Bound constants file (JSON)");

    if (argc <= 1) {
        err << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (psi->parsed()) return cmd_psi_norm(g, out, psi_law, psi_alpha, psi_tol);
        if (sample->parsed()) return cmd_sample(g, out, sample_po, sample_trial);
        if (norm->parsed()) return cmd_norm(g, out, norm_po, norm_trial, norm_in, norm_method, norm_tol);
        if (tail->parsed()) return cmd_tail(g, out, err, tail_o);
        if (cal->parsed()) return cmd_calibrate(g, out, cal_o);
        if (chain->parsed()) return cmd_chain_verify(g, out, chain_po, chain_trials);
        if (net->parsed()) return cmd_net_verify(g, out, net_dim, net_eps, net_cap, net_probes, net_stall);
        if (lemma->parsed()) return cmd_lemma(g, out, lemma_o);
        if (bounds->parsed()) return cmd_bounds(g, out, bounds_po, bounds_constants);
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace spectail::cli
