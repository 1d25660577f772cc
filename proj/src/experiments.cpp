#include "spectail/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <omp.h>

#include "spectail/errors.hpp"
#include "spectail/rng.hpp"

namespace spectail {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

nlohmann::json hashed_fields(const ExperimentConfig& c) {
    nlohmann::json j = c;
    j.erase("outputs");
    j.erase("threads");
    j.erase("checkpoint_every");
    j.erase("stop_after");
    return j;
}

int worker_count(const ExperimentConfig& c) { return c.threads > 0 ? c.threads : omp_get_max_threads(); }

void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << text;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

nlohmann::json records_json(const std::vector<TrialRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TrialRecord& r : records) {
        arr.push_back({r.ok ? nlohmann::json(r.norm) : nlohmann::json(nullptr), r.residual, r.iterations});
    }
    return arr;
}

void write_checkpoint(const ExperimentConfig& c, const std::vector<TrialRecord>& records) {
    const nlohmann::json j = {{"schema", kCheckpointSchema},
                              {"config_hash", config_hash(c)},
                              {"trials", c.trials},
                              {"completed", static_cast<long long>(records.size())},
                              {"records", records_json(records)}};
    write_atomic(c.checkpoint_path, j.dump() + "\n");
}

std::vector<TrialRecord> read_checkpoint(const ExperimentConfig& c) {
    std::ifstream in(c.checkpoint_path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + c.checkpoint_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt checkpoint " + c.checkpoint_path + ": " + e.what());
    }
    try {
        if (j.at("schema").get<int>() != kCheckpointSchema) {
            throw ConfigError("checkpoint schema " + j.at("schema").dump() + " is not supported");
        }
        if (j.at("config_hash").get<std::string>() != config_hash(c)) {
            throw ConfigError("checkpoint " + c.checkpoint_path + " was written for a different configuration");
        }
        const long long completed = j.at("completed").get<long long>();
        const auto& arr = j.at("records");
        if (j.at("trials").get<long long>() != c.trials || !arr.is_array() ||
            static_cast<long long>(arr.size()) != completed || completed > c.trials) {
            throw IoError("corrupt checkpoint " + c.checkpoint_path + ": inconsistent record count");
        }
        std::vector<TrialRecord> out;
        out.reserve(arr.size());
        for (const auto& row : arr) {
            if (!row.is_array() || row.size() != 3) throw IoError("corrupt checkpoint record");
            TrialRecord r;
            r.ok = !row[0].is_null();
            r.norm = r.ok ? row[0].get<double>() : 0.0;
            r.residual = row[1].get<double>();
            r.iterations = row[2].get<int>();
            out.push_back(r);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt checkpoint " + c.checkpoint_path + ": " + e.what());
    }
}

}  // namespace

std::vector<double> default_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 16; ++k) g.push_back(0.25 * k);
    return g;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (grid.empty()) throw ConfigError("threshold grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ConfigError("threshold grid values must be finite");
        if (i > 0 && grid[i] < grid[i - 1]) throw ConfigError("threshold grid must be sorted");
    }
    if (!(tol > 0.0)) throw ConfigError("norm tolerance must be > 0");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
    if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
    if (stop_after && *stop_after < 0) throw ConfigError("stop_after must be >= 0");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    constants.validate();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{{"schema", kConfigSchema},
                       {"profile", c.profile},
                       {"trials", c.trials},
                       {"seed", c.seed},
                       {"grid", {{"mode", c.grid_mode == GridMode::relative ? "relative" : "absolute"},
                                 {"values", c.grid}}},
                       {"norm", {{"method", std::string(method_name(c.method))}, {"tol", c.tol}}},
                       {"constants", c.constants},
                       {"level", c.level},
                       {"outputs", {{"csv", c.csv_path}, {"jsonl", c.jsonl_path}, {"checkpoint", c.checkpoint_path}}},
                       {"checkpoint_every", c.checkpoint_every},
                       {"threads", c.threads}};
    if (c.stop_after) j["stop_after"] = *c.stop_after;
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    try {
        if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
        if (!j.contains("schema")) throw ConfigError("experiment config needs \"schema\": 1");
        if (j.at("schema").get<int>() != kConfigSchema) {
            throw ConfigError("unsupported config schema " + j.at("schema").dump());
        }
        static const char* known[] = {"schema", "profile", "trials", "seed", "grid", "norm", "constants",
                                      "constants_file", "level", "outputs", "checkpoint_every", "threads",
                                      "stop_after"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
                std::end(known)) {
                throw ConfigError("unknown config key '" + it.key() + "'");
            }
        }
        c = ExperimentConfig{};
        c.profile = j.at("profile").get<ProfileSpec>();
        c.trials = j.value("trials", c.trials);
        c.seed = j.value("seed", c.seed);
        if (auto g = j.find("grid"); g != j.end()) {
            const std::string mode = g->value("mode", "relative");
            if (mode == "relative") {
                c.grid_mode = GridMode::relative;
            } else if (mode == "absolute") {
                c.grid_mode = GridMode::absolute;
            } else {
                throw ConfigError("grid mode must be relative or absolute");
            }
            if (g->contains("values")) c.grid = g->at("values").get<std::vector<double>>();
        }
        if (auto nm = j.find("norm"); nm != j.end()) {
            const std::string method = nm->value("method", "exact");
            if (method == "exact") {
                c.method = NormMethod::exact;
            } else if (method == "iterative") {
                c.method = NormMethod::iterative;
            } else {
                throw ConfigError("norm method must be exact or iterative");
            }
            c.tol = nm->value("tol", c.tol);
        }
        if (j.contains("constants") && j.contains("constants_file")) {
            throw ConfigError("give either constants or constants_file, not both");
        }
        if (j.contains("constants")) c.constants = j.at("constants").get<BoundConstants>();
        if (j.contains("constants_file")) c.constants = read_constants_file(j.at("constants_file").get<std::string>());
        c.level = j.value("level", c.level);
        if (auto o = j.find("outputs"); o != j.end()) {
            c.csv_path = o->value("csv", std::string{});
            c.jsonl_path = o->value("jsonl", std::string{});
            c.checkpoint_path = o->value("checkpoint", std::string{});
        }
        c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
        c.threads = j.value("threads", c.threads);
        if (j.contains("stop_after")) c.stop_after = j.at("stop_after").get<long long>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
    c.validate();
}

ExperimentConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return j.get<ExperimentConfig>();
}

std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(hashed_fields(c).dump())));
    return buf;
}

TrialRecord run_trial(const Profile& profile, const ExperimentConfig& c, long long trial) {
    const SymMatrixSample s = sample_matrix(profile, c.seed, static_cast<std::uint64_t>(trial));
    TrialRecord r;
    try {
        NormResult nr;
        if (c.method == NormMethod::exact) {
            nr = spectral_norm_exact(s.matrix);
        } else {
            IterOptions opt;
            opt.tol = c.tol;
            opt.seed = splitmix64(c.seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
            nr = spectral_norm_iter(s.matrix, opt);
        }
        r.norm = nr.value;
        r.residual = nr.residual;
        r.iterations = nr.iterations;
        r.ok = true;
    } catch (const ConvergenceError& e) {
        r.residual = e.residual();
        r.iterations = e.iterations();
    } catch (const NumericalError&) {
    }
    return r;
}

std::vector<TrialRecord> run_trials(const Profile& profile, const ExperimentConfig& c, long long begin,
                                    long long end) {
    std::vector<TrialRecord> out(static_cast<std::size_t>(std::max(0LL, end - begin)));
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count(c))
    for (long long t = begin; t < end; ++t) out[static_cast<std::size_t>(t - begin)] = run_trial(profile, c, t);
    return out;
}

std::vector<TrialRecord> run_trials_serial(const Profile& profile, const ExperimentConfig& c, long long begin,
                                           long long end) {
    std::vector<TrialRecord> out;
    for (long long t = begin; t < end; ++t) out.push_back(run_trial(profile, c, t));
    return out;
}

std::pair<double, double> clopper_pearson(long long k, long long N, double level) {
    if (N < 1 || k < 0 || k > N) throw DomainError("clopper_pearson needs 0 <= k <= N and N >= 1");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("clopper_pearson level must lie in (0, 1)");
    const double a = 0.5 * (1.0 - level);
    const double kd = static_cast<double>(k), nd = static_cast<double>(N);
    const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, a);
    const double hi = k == N ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - a);
    return {lo, hi};
}

double experiment_threshold(const StructParams& p, const BoundConstants& c) {
    return p.alpha == 1.0 ? thm11_threshold(p, c) : thm5_threshold(p, c);
}

double experiment_bound(double t, const StructParams& p, const BoundConstants& c) {
    if (t < 0.0) return 1.0;
    return p.alpha == 1.0 ? thm11_tail(t, p.sigma1, c) : thm5_tail(t, p.sigma1, p.alpha, c);
}

TailCurve build_tail_curve(const Profile& profile, const ExperimentConfig& c,
                           const std::vector<TrialRecord>& records) {
    TailCurve curve;
    curve.profile_id = profile.id();
    curve.params = struct_params(profile);
    std::vector<double> norms;
    norms.reserve(records.size());
    for (const TrialRecord& r : records) {
        if (r.ok) {
            norms.push_back(r.norm);
        } else {
            ++curve.failures;
        }
    }
    if (norms.empty()) throw NumericalError("every trial failed; no tail curve");
    std::sort(norms.begin(), norms.end());
    const std::size_t m = norms.size();
    curve.median_norm = m % 2 == 1 ? norms[m / 2] : 0.5 * (norms[m / 2 - 1] + norms[m / 2]);

    const double base = experiment_threshold(curve.params, c.constants);
    const long long N = static_cast<long long>(m);
    for (double v : c.grid) {
        TailRow row;
        if (c.grid_mode == GridMode::relative) {
            row.t = v * curve.params.sigma1;
            row.s = base + row.t;
        } else {
            row.s = v;
            row.t = v - base;
        }
        const auto first = std::lower_bound(norms.begin(), norms.end(), row.s);
        row.exceed = static_cast<long long>(norms.end() - first);
        row.N = N;
        row.p_hat = static_cast<double>(row.exceed) / static_cast<double>(N);
        std::tie(row.ci_low, row.ci_high) = clopper_pearson(row.exceed, N, c.level);
        row.bound = experiment_bound(row.t, curve.params, c.constants);
        curve.rows.push_back(row);
    }
    return curve;
}

BoundConstants calibrate_from_records(const Profile& profile, const ExperimentConfig& c,
                                      const std::vector<TrialRecord>& records, TailCurve* curve_out) {
    ExperimentConfig fit = c;
    const TailCurve first = build_tail_curve(profile, fit, records);
    const StructParams& p = first.params;
    const double scale = p.b + p.sigma2 * std::sqrt(static_cast<double>(p.n));
    if (!(scale > 0.0)) throw CalibrationError("calibration needs b + sigma2*sqrt(n) > 0");
    fit.constants.C = first.median_norm / scale;
    TailCurve curve = build_tail_curve(profile, fit, records);
    BoundConstants k = calibrate_constants(curve, p);
    if (curve_out) {
        fit.constants = k;
        *curve_out = build_tail_curve(profile, fit, records);
    }
    return k;
}

ExperimentResult run_tail_experiment(const ExperimentConfig& c) {
    c.validate();
    const Profile profile = build_profile(c.profile);
    ExperimentResult res;
    if (!c.checkpoint_path.empty() && std::filesystem::exists(c.checkpoint_path)) {
        res.records = read_checkpoint(c);
    }
    long long done = static_cast<long long>(res.records.size());
    const long long stop = c.stop_after ? std::min(*c.stop_after, c.trials) : c.trials;
    const long long step = c.checkpoint_every > 0 ? c.checkpoint_every : c.trials;
    while (done < stop) {
        const long long end = std::min(stop, done + step);
        std::vector<TrialRecord> chunk = run_trials(profile, c, done, end);
        res.records.insert(res.records.end(), chunk.begin(), chunk.end());
        done = end;
        if (!c.checkpoint_path.empty()) write_checkpoint(c, res.records);
    }
    res.completed = done;
    res.complete = done == c.trials;
    if (!res.complete) return res;

    if (c.method == NormMethod::exact) {
        for (const TrialRecord& r : res.records) {
            if (!r.ok) throw NumericalError("exact norm failed on a trial; the exact path must not fail");
        }
    }
    res.curve = build_tail_curve(profile, c, res.records);
    if (!c.csv_path.empty()) write_text(c.csv_path, tail_curve_csv(res.curve));
    if (!c.jsonl_path.empty()) write_text(c.jsonl_path, trial_jsonl(res.records, c.method));
    return res;
}

DominationReport domination_check(const TailCurve& curve) {
    std::vector<double> b;
    for (const TailRow& r : curve.rows) b.push_back(r.bound);
    return domination_check(curve, b);
}

DominationReport domination_check(const TailCurve& curve, const std::vector<double>& bounds) {
    if (bounds.size() != curve.rows.size()) throw ValidationError("bound curve and tail curve differ in length");
    DominationReport d;
    d.points = static_cast<int>(curve.rows.size());
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double margin = bounds[i] - curve.rows[i].ci_low;
        if (margin >= 0.0) ++d.dominated;
        if (margin < worst) {
            worst = margin;
            d.worst_row = static_cast<int>(i);
        }
    }
    d.worst_margin = d.points > 0 ? worst : 0.0;
    d.fraction = d.points > 0 ? static_cast<double>(d.dominated) / d.points : 1.0;
    d.passed = d.dominated == d.points;
    return d;
}

MeanEstimate mean_norm_estimate(const ExperimentConfig& c) {
    c.validate();
    const Profile profile = build_profile(c.profile);
    const std::vector<TrialRecord> records = run_trials(profile, c, 0, c.trials);
    std::vector<double> norms;
    for (const TrialRecord& r : records) {
        if (r.ok) norms.push_back(r.norm);
    }
    if (c.method == NormMethod::exact && norms.size() != records.size()) {
        throw NumericalError("exact norm failed on a trial; the exact path must not fail");
    }
    return mean_estimate(norms);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string tail_curve_csv(const TailCurve& curve) {
    std::string out = "t,s,exceed,N,p_hat,ci_low,ci_high,bound\n";
    for (const TailRow& r : curve.rows) {
        out += format_double(r.t) + ',' + format_double(r.s) + ',' + std::to_string(r.exceed) + ',' +
               std::to_string(r.N) + ',' + format_double(r.p_hat) + ',' + format_double(r.ci_low) + ',' +
               format_double(r.ci_high) + ',' + format_double(r.bound) + '\n';
    }
    return out;
}

std::string trial_jsonl(const std::vector<TrialRecord>& records, NormMethod method) {
    std::string out;
    const std::string m(method_name(method));
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TrialRecord& r = records[i];
        out += "{\"trial\": " + std::to_string(i) + ", \"norm\": " + (r.ok ? format_double(r.norm) : "null") +
               ", \"method\": \"" + m + "\", \"residual\": " + format_double(r.residual) + "}\n";
    }
    return out;
}

}  // namespace spectail
