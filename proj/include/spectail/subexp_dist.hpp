#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spectail/rng.hpp"

namespace spectail {

enum class Family {
    centered_exponential,  ///< scale·(E − 1), E ~ Exp(1)
    laplace,               ///< density e^{−|x|/scale} / (2·scale)
    gaussian,              ///< N(0, scale²)
    rademacher,            ///< ±scale
    symmetric_weibull,     ///< ±scale·W with P(W > t) = exp(−t^shape)
    zero,                  ///< the constant 0
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

/// A centered univariate entry law. Every family is symmetric or explicitly
/// centered, so E ξ = 0 holds exactly in law.
struct DistributionSpec {
    Family family = Family::laplace;
    double scale = 1.0;
    double shape = 1.0;  ///< Weibull tail exponent, ignored elsewhere

    static DistributionSpec centered_exponential(double scale = 1.0) { return {Family::centered_exponential, scale, 1.0}; }
    static DistributionSpec laplace(double scale = 1.0) { return {Family::laplace, scale, 1.0}; }
    static DistributionSpec gaussian(double stddev = 1.0) { return {Family::gaussian, stddev, 1.0}; }
    static DistributionSpec rademacher(double scale = 1.0) { return {Family::rademacher, scale, 1.0}; }
    static DistributionSpec weibull(double shape, double scale = 1.0) { return {Family::symmetric_weibull, scale, shape}; }
    static DistributionSpec zero() { return {Family::zero, 0.0, 1.0}; }

    /// Throws ConfigError on non-positive scales or a Weibull shape outside (0, 2].
    void validate() const;

    /// Largest α for which the ψ_α norm is finite (infinity for bounded laws).
    double tail_class() const;

    /// Law of c·ξ for c > 0.
    DistributionSpec scaled(double c) const;

    bool operator==(const DistributionSpec&) const = default;
};

void to_json(nlohmann::json& j, const DistributionSpec& spec);
void from_json(const nlohmann::json& j, DistributionSpec& spec);

double sample(const DistributionSpec& spec, RandomStream& stream);

struct PsiNorm {
    double alpha = 1.0;
    double value = 0.0;
    double tolerance = 0.0;
};

inline constexpr double kDefaultPsiTol = 1e-10;

/// E exp(|ξ|^α / K^α); +infinity where the expectation diverges.
double psi_expectation(const DistributionSpec& spec, double alpha, double K);

/// inf{K > 0 : E exp(|ξ|^α / K^α) ≤ 2}, located by bisection to within tol.
/// The returned value is the upper end of the final bracket, so the
/// defining inequality holds at it.
PsiNorm psi_norm(const DistributionSpec& spec, double alpha, double tol = kDefaultPsiTol);

/// E |ξ|^p for real p > 0.
double abs_moment(const DistributionSpec& spec, double p);
double variance(const DistributionSpec& spec);
/// P(|ξ| ≥ t), exact.
double tail_probability(const DistributionSpec& spec, double t);
/// E exp(λ ξ); +infinity where it diverges.
double mgf(const DistributionSpec& spec, double lambda);

struct MomentRatio {
    int p;
    double moment_root;  ///< (E|ξ|^p)^{1/p}
    double ratio;        ///< moment_root / p^{1/α}
};
std::vector<MomentRatio> moment_growth_ratio(const DistributionSpec& spec, double alpha, int p_max);

struct TailCheckRow {
    double t;
    double tail;   ///< P(|ξ| ≥ t)
    double bound;  ///< 2 exp(−t^α / K^α)
    bool holds() const { return tail <= bound; }
};
std::vector<TailCheckRow> tail_vs_psi_check(const DistributionSpec& spec, double alpha,
                                            const std::vector<double>& t_grid);

/// Constant c with E e^{λξ} ≤ exp(c²ψ₁²λ²) for |λ| ≤ 1/(cψ₁). Looked up in
/// the generated table when the family has an entry, else calibrated.
double mgf_constant(const DistributionSpec& spec);
/// Smallest c (to 1e-4) passing the check on a dense λ grid.
double calibrate_mgf_constant(const DistributionSpec& spec);

struct MgfCheckRow {
    double lambda;
    double mgf;
    double bound;  ///< exp(K₅² λ²)
    bool holds() const { return mgf <= bound * (1.0 + 1e-12); }
};
/// Throws DomainError for any |λ| > 1/K₅.
std::vector<MgfCheckRow> centered_mgf_check(const DistributionSpec& spec,
                                            const std::vector<double>& lambda_grid);

struct VarianceCheck {
    double variance;
    double psi1_squared;
    double ratio;  ///< 0 for the degenerate law
};
/// Var ξ ≤ 2 ψ₁² holds for every law (from e^x ≥ 1 + x²/2).
inline constexpr double kVariancePsiBound = 2.0;
VarianceCheck variance_vs_psi_check(const DistributionSpec& spec);

}  // namespace spectail
