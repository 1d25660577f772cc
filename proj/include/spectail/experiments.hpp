#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spectail/bounds.hpp"
#include "spectail/lemma_lab.hpp"
#include "spectail/matrix_model.hpp"
#include "spectail/specnorm.hpp"

namespace spectail {

inline constexpr int kConfigSchema = 1;
inline constexpr int kCheckpointSchema = 1;

enum class GridMode {
    relative,  ///< values are t/σ₁; s = threshold + t
    absolute,  ///< values are s; t = s − threshold
};

/// t/σ₁ ∈ {0, 0.25, …, 4}.
std::vector<double> default_grid();

struct ExperimentConfig {
    ProfileSpec profile;
    long long trials = 1000;
    std::uint64_t seed = 0;
    GridMode grid_mode = GridMode::relative;
    std::vector<double> grid = default_grid();
    NormMethod method = NormMethod::exact;
    double tol = 1e-8;
    BoundConstants constants = default_constants();
    double level = 0.95;

    // Run control; not part of the configuration hash.
    std::string csv_path;
    std::string jsonl_path;
    std::string checkpoint_path;
    long long checkpoint_every = 0;          ///< trials per checkpoint write; 0 writes once at the end
    std::optional<long long> stop_after;     ///< stop once this many trials are done (simulated interruption)
    int threads = 0;                         ///< 0 uses the OpenMP default

    /// Throws ConfigError on an invalid field.
    void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Requires "schema": 1. A "constants_file" key is read relative to the
/// working directory.
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig read_config_file(const std::string& path);

/// FNV-1a 64 of the canonical JSON of the fields that determine the results.
std::string config_hash(const ExperimentConfig& c);

struct TrialRecord {
    double norm = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool ok = false;
};

/// Trial i of the ensemble: sample (seed, i) and take its norm. Solver
/// failures come back with ok = false.
TrialRecord run_trial(const Profile& profile, const ExperimentConfig& c, long long trial);

/// Trials [begin, end) split across OpenMP threads; the result is indexed by
/// trial and does not depend on the thread count.
std::vector<TrialRecord> run_trials(const Profile& profile, const ExperimentConfig& c, long long begin,
                                    long long end);
std::vector<TrialRecord> run_trials_serial(const Profile& profile, const ExperimentConfig& c, long long begin,
                                           long long end);

/// Exact binomial interval from Beta quantiles.
std::pair<double, double> clopper_pearson(long long k, long long N, double level = 0.95);

/// Threshold C(b + σ₂√n) for α = 1, C3(α)(b(α) + σ₂(α)√n) otherwise.
double experiment_threshold(const StructParams& p, const BoundConstants& c);
/// Matching tail bound; 1 for t < 0.
double experiment_bound(double t, const StructParams& p, const BoundConstants& c);

/// Aggregate per-trial norms into a tail curve.
TailCurve build_tail_curve(const Profile& profile, const ExperimentConfig& c,
                           const std::vector<TrialRecord>& records);

/// C from the median norm; C0 and C1 from the tail curve rebuilt with that
/// C, so the fitted rows sit at t above the calibrated threshold.
BoundConstants calibrate_from_records(const Profile& profile, const ExperimentConfig& c,
                                      const std::vector<TrialRecord>& records, TailCurve* curve_out = nullptr);

struct ExperimentResult {
    TailCurve curve;
    std::vector<TrialRecord> records;
    long long completed = 0;
    bool complete = false;  ///< false after a simulated interruption
};

/// Runs (or resumes from the checkpoint) and writes the configured outputs
/// once all trials are done.
ExperimentResult run_tail_experiment(const ExperimentConfig& c);

struct DominationReport {
    int points = 0;
    int dominated = 0;
    double fraction = 0.0;
    bool passed = false;
    int worst_row = -1;         ///< row with the smallest bound − ci_low
    double worst_margin = 0.0;
};

/// bound ≥ ci_low at every row.
DominationReport domination_check(const TailCurve& curve);
DominationReport domination_check(const TailCurve& curve, const std::vector<double>& bounds);

MeanEstimate mean_norm_estimate(const ExperimentConfig& c);

/// Header `t,s,exceed,N,p_hat,ci_low,ci_high,bound`; shortest round-trip floats.
std::string tail_curve_csv(const TailCurve& curve);
std::string trial_jsonl(const std::vector<TrialRecord>& records, NormMethod method);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace spectail
