#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "spectail/matrix_model.hpp"

namespace spectail {

enum class ConstantsSource { default_table, calibrated };

struct BoundConstants {
    // Sub-exponential theorem: P{‖X‖ ≥ C(b + σ₂√n) + t} ≤ C0·exp(−C1·min(t²/σ₁², t/σ₁)).
    double C = 1.0;
    double C0 = 1.0;
    double C1 = 1.0;
    // Diagonal case: threshold C_diag·maxψ·log n, tail exp(−C1_diag·min(t/maxψ, t²/maxψ²)).
    double C_diag = 1.0;
    double C1_diag = 1.0;
    // ψ_α family, 1 ≤ α ≤ 2: diagonal threshold C_alpha·maxψ·log^{1/α} n,
    // general threshold C3_alpha·(b(α) + σ₂(α)√n), tail C4·exp(−C5·t/σ₁(α)).
    double C_alpha = 1.0;
    double C3_alpha = 1.0;
    double C4 = 1.0;
    double C5 = 1.0;
    // Bernstein-type sums: exp(−c·min(t²/(K²‖a‖₂²), t/(K‖a‖_∞))).
    double bernstein_c = 1.0;

    ConstantsSource source = ConstantsSource::default_table;
    std::string ensemble_id;   ///< ensemble the values were fitted on
    double r_squared = 0.0;    ///< fit quality; 0 when not fitted
    int fit_points = 0;

    /// Throws ConfigError unless every constant is finite and positive and C0, C4 ≥ 1.
    void validate() const;
};

/// Values shipped with the library, from the reference calibration run.
BoundConstants default_constants();

void to_json(nlohmann::json& j, const BoundConstants& c);
void from_json(const nlohmann::json& j, BoundConstants& c);
BoundConstants read_constants_file(const std::string& path);
void write_constants_file(const std::string& path, const BoundConstants& c);

// ---------------------------------------------------------------------------
// Evaluators. Tails are clipped to [0, 1].

double thm11_threshold(const StructParams& p, const BoundConstants& c);
/// C0·exp(−C1·min(t²/σ₁², t/σ₁)); 0 when σ₁ = 0 and t > 0.
double thm11_tail(double t, double sigma1, const BoundConstants& c);
/// min(t²/σ₁², t/σ₁).
double regime_exponent(double t, double sigma1);

double thm31_threshold(double max_psi, int n, const BoundConstants& c);
double thm31_tail(double t, double max_psi, const BoundConstants& c);
/// max_i β*_i · log(i + 1) over the decreasing rearrangement β* of `scales`.
double expectation_bound_diag(const std::vector<double>& scales);

/// C3_alpha·(b(α) + σ₂(α)√n); `p.b` already carries the log^{1/α} n factor.
double thm5_threshold(const StructParams& p, const BoundConstants& c);
/// C_alpha·maxψ·log^{1/α} n.
double thm5_diag_threshold(double max_psi, int n, double alpha, const BoundConstants& c);
/// C4·exp(−C5·t/σ₁(α)). Throws DomainError for α outside [1, 2].
double thm5_tail(double t, double sigma1, double alpha, const BoundConstants& c);

double bernstein_tail(const Eigen::VectorXd& a, double K, double t, const BoundConstants& c);

struct LiteratureBounds {
    double vershynin = 0.0;  ///< max b_ij · √n
    double bvh = 0.0;        ///< max_i √(Σ_j b_ij²) + √(log n) · max b_ij
    double lvy = 0.0;        ///< max_i √(Σ_j b_ij²) + max_i b*_i √(log i)
};

/// `b` is the entrywise standard-deviation profile. For the last term, rows
/// are ordered by nonincreasing row maximum and i is the 1-based rank.
LiteratureBounds literature_bounds(const Eigen::MatrixXd& b);

// ---------------------------------------------------------------------------
// Tail curves and calibration

struct TailRow {
    double t = 0.0;
    double s = 0.0;
    long long exceed = 0;
    long long N = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double bound = 0.0;
};

struct TailCurve {
    std::string profile_id;
    StructParams params;
    double median_norm = 0.0;
    std::vector<TailRow> rows;
    long long failures = 0;   ///< trials excluded after a solver failure
};

inline constexpr double kCalibrationPmin = 1e-4;
inline constexpr double kCalibrationPmax = 0.5;
inline constexpr int kCalibrationMinPoints = 5;

/// C from the median norm; C1 and C0 from a least-squares line of
/// −ln(ci_high) against min(t²/σ₁², t/σ₁) over rows with p̂ in
/// (1e−4, 0.5). Throws CalibrationError with fewer than 5 such rows or a
/// nonpositive slope.
BoundConstants calibrate_constants(const TailCurve& curve, const StructParams& params);

}  // namespace spectail
