#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spectail/errors.hpp"
#include "spectail/subexp_dist.hpp"

using namespace spectail;

namespace {

std::vector<DistributionSpec> catalogue() {
    return {DistributionSpec::centered_exponential(), DistributionSpec::laplace(), DistributionSpec::gaussian(),
            DistributionSpec::rademacher(),           DistributionSpec::weibull(1.0), DistributionSpec::weibull(1.5),
            DistributionSpec::weibull(2.0)};
}

double empirical_mean(const DistributionSpec& d, int n, std::uint64_t seed) {
    RandomStream s(seed, StreamTag::generic);
    long double acc = 0;
    for (int i = 0; i < n; ++i) acc += sample(d, s);
    return static_cast<double>(acc / n);
}

}  // namespace

TEST(Sample, ZeroLaw) {
    RandomStream s(1, StreamTag::generic);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(sample(DistributionSpec::zero(), s), 0.0);
}

TEST(Sample, LaplaceMeanInCltBand) {
    EXPECT_NEAR(empirical_mean(DistributionSpec::laplace(), 1000000, 11), 0.0, 3 * std::sqrt(2.0) / 1e3);
}

TEST(Sample, CenteredExponentialMeanInCltBand) {
    EXPECT_NEAR(empirical_mean(DistributionSpec::centered_exponential(), 1000000, 12), 0.0, 3e-3);
}

TEST(Sample, Deterministic) {
    for (const auto& d : catalogue()) {
        RandomStream a(5, StreamTag::generic, 9), b(5, StreamTag::generic, 9);
        for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(d, a), sample(d, b));
    }
}

TEST(Sample, VarianceMatchesClosedForm) {
    for (const auto& d : catalogue()) {
        RandomStream s(77, StreamTag::generic);
        const int n = 200000;
        long double m2 = 0;
        for (int i = 0; i < n; ++i) {
            const double x = sample(d, s);
            m2 += x * x;
        }
        const double v = variance(d);
        const double m4 = abs_moment(d, 4);
        EXPECT_NEAR(static_cast<double>(m2 / n), v, 5 * std::sqrt((m4 - v * v) / n) + 1e-12) << family_name(d.family);
    }
}

TEST(PsiNorm, LaplaceClosedForm) { EXPECT_NEAR(psi_norm(DistributionSpec::laplace(), 1.0).value, 2.0, 1e-8); }

TEST(PsiNorm, ZeroLaw) {
    for (double a : {0.5, 1.0, 2.0}) EXPECT_EQ(psi_norm(DistributionSpec::zero(), a).value, 0.0);
}

TEST(PsiNorm, CenteredExponentialBisectionOracle) {
    EXPECT_NEAR(psi_norm(DistributionSpec::centered_exponential(), 1.0).value, oracle::centered_exp_psi1(), 1e-8);
}

TEST(PsiNorm, GaussianSimpsonOracle) {
    EXPECT_NEAR(psi_norm(DistributionSpec::gaussian(), 2.0).value, std::sqrt(8.0 / 3.0), 1e-8);
    EXPECT_NEAR(psi_norm(DistributionSpec::gaussian(), 2.0).value, oracle::gaussian_psi(2.0), 1e-6);
    EXPECT_NEAR(psi_norm(DistributionSpec::gaussian(), 1.0).value, oracle::gaussian_psi(1.0), 1e-6);
}

TEST(PsiNorm, RademacherClosedForm) {
    for (double a : {1.0, 1.5, 2.0})
        EXPECT_NEAR(psi_norm(DistributionSpec::rademacher(), a).value, std::pow(std::numbers::ln2, -1.0 / a), 1e-8);
}

TEST(PsiNorm, WeibullMatchingShape) {
    // E exp(W^a / K^a) = 1/(1 − K^{−a}) = 2 at K = 2^{1/a}
    for (double a : {1.0, 1.5, 2.0}) EXPECT_NEAR(psi_norm(DistributionSpec::weibull(a), a).value, std::pow(2.0, 1 / a), 1e-8);
}

TEST(PsiNorm, Homogeneity) {
    const double tol = kDefaultPsiTol;
    for (const auto& d : catalogue()) {
        const double a = std::min(1.0, d.tail_class());
        const double base = psi_norm(d, a, tol).value;
        for (double c : {0.5, 2.0, 10.0})
            EXPECT_NEAR(psi_norm(d.scaled(c), a, tol).value, c * base, 2 * tol * std::max(1.0, c)) << family_name(d.family);
    }
}

TEST(PsiNorm, HeavierTailThanAlphaThrows) {
    EXPECT_THROW(psi_norm(DistributionSpec::laplace(), 2.0), NotPsiAlphaError);
    EXPECT_THROW(psi_norm(DistributionSpec::weibull(1.5), 2.0), NotPsiAlphaError);
    EXPECT_THROW(psi_norm(DistributionSpec::laplace(), 2.5), DomainError);
}

TEST(MomentGrowth, Examples) {
    auto raw_exp = moment_growth_ratio(DistributionSpec::weibull(1.0), 1.0, 4);
    // |Weibull(1)| is Exp(1): E X^p = p!
    EXPECT_NEAR(raw_exp[1].moment_root, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(raw_exp[1].ratio, std::sqrt(2.0) / 2, 1e-12);
    EXPECT_NEAR(moment_growth_ratio(DistributionSpec::gaussian(), 2.0, 2)[1].ratio, 1 / std::sqrt(2.0), 1e-12);
    for (const auto& r : moment_growth_ratio(DistributionSpec::zero(), 1.0, 10)) EXPECT_EQ(r.ratio, 0.0);
}

// Band of (E|ξ|^p)^{1/p} / p^{1/α} over p ∈ [2, 20] at the family's own tail
// class, recorded from the first run.
TEST(MomentGrowth, RecordedBandPerFamily) {
    struct Band {
        DistributionSpec law;
        double alpha, lo, hi;
    };
    const Band bands[] = {
        {DistributionSpec::centered_exponential(), 1.0, 0.394968, 0.500000},
        {DistributionSpec::laplace(), 1.0, 0.415218, 0.707107},
        {DistributionSpec::gaussian(), 2.0, 0.617004, 0.707107},
        {DistributionSpec::rademacher(), 2.0, 0.223607, 0.707107},
        {DistributionSpec::weibull(1.0), 1.0, 0.415218, 0.707107},
        {DistributionSpec::weibull(1.5), 1.5, 0.437814, 0.687390},
        {DistributionSpec::weibull(2.0), 2.0, 0.475853, 0.707107},
    };
    for (const auto& b : bands) {
        for (const auto& r : moment_growth_ratio(b.law, b.alpha, 20)) {
            if (r.p < 2) continue;
            EXPECT_GE(r.ratio, b.lo - 1e-6) << family_name(b.law.family) << " p=" << r.p;
            EXPECT_LE(r.ratio, b.hi + 1e-6) << family_name(b.law.family) << " p=" << r.p;
        }
    }
}

TEST(MomentGrowth, PositiveForLighterAlpha) {
    for (const auto& d : catalogue())
        for (double a : {1.0, 1.5, 2.0}) {
            if (a > d.tail_class()) {
                EXPECT_THROW(moment_growth_ratio(d, a, 20), NotPsiAlphaError);
                continue;
            }
            for (const auto& r : moment_growth_ratio(d, a, 20)) EXPECT_GT(r.ratio, 0.0);
        }
}

TEST(TailVsPsi, Examples) {
    auto rows = tail_vs_psi_check(DistributionSpec::laplace(), 1.0, {0.0, 2.0});
    EXPECT_EQ(rows[0].tail, 1.0);
    EXPECT_EQ(rows[0].bound, 2.0);
    EXPECT_NEAR(rows[1].tail, std::exp(-2.0), 1e-14);
    EXPECT_NEAR(rows[1].bound, 2 * std::exp(-1.0), 1e-8);
    auto g = tail_vs_psi_check(DistributionSpec::gaussian(), 2.0, {3.0});
    EXPECT_NEAR(g[0].tail, 2 * oracle::normal_upper(3.0), 1e-14);
    EXPECT_NEAR(g[0].tail, 0.0027, 1e-4);
    EXPECT_NEAR(g[0].bound, 2 * std::exp(-9 / std::pow(oracle::gaussian_psi(2.0), 2)), 1e-6);
}

TEST(TailVsPsi, NeverViolated) {
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(0.125 * i);
    for (const auto& d : catalogue())
        for (double a : {1.0, 1.5, 2.0}) {
            if (a > d.tail_class()) continue;
            for (const auto& r : tail_vs_psi_check(d, a, grid)) EXPECT_TRUE(r.holds()) << family_name(d.family) << " t=" << r.t;
        }
}

TEST(CenteredMgf, Examples) {
    const auto lap = centered_mgf_check(DistributionSpec::laplace(), {0.0, 0.25});
    EXPECT_EQ(lap[0].mgf, 1.0);
    EXPECT_EQ(lap[0].bound, 1.0);
    EXPECT_NEAR(lap[1].mgf, 1 / (1 - 0.0625), 1e-14);
    const auto g = centered_mgf_check(DistributionSpec::gaussian(), {0.5});
    EXPECT_NEAR(g[0].mgf, std::exp(0.125), 1e-14);
}

TEST(CenteredMgf, HoldsOnValidityGrid) {
    for (const auto& d : catalogue()) {
        const double k5 = mgf_constant(d) * psi_norm(d, 1.0).value;
        std::vector<double> grid;
        for (int i = -50; i <= 50; ++i) grid.push_back(i / (50.0 * k5));
        for (const auto& r : centered_mgf_check(d, grid)) EXPECT_TRUE(r.holds()) << family_name(d.family) << " " << r.lambda;
        EXPECT_THROW(centered_mgf_check(d, {1.01 / k5}), DomainError);
    }
}

TEST(CenteredMgf, TableMatchesCalibration) {
    for (const auto& d : {DistributionSpec::laplace(), DistributionSpec::rademacher()})
        EXPECT_NEAR(mgf_constant(d), calibrate_mgf_constant(d), 1e-9);
}

TEST(VarianceVsPsi, Examples) {
    const auto l = variance_vs_psi_check(DistributionSpec::laplace());
    EXPECT_NEAR(l.variance, 2.0, 1e-14);
    EXPECT_NEAR(l.psi1_squared, 4.0, 1e-7);
    EXPECT_NEAR(l.ratio, 0.5, 1e-8);
    const auto z = variance_vs_psi_check(DistributionSpec::zero());
    EXPECT_EQ(z.variance, 0.0);
    EXPECT_EQ(z.ratio, 0.0);
    const double K = oracle::gaussian_psi(1.0);
    const auto g = variance_vs_psi_check(DistributionSpec::gaussian());
    EXPECT_NEAR(g.variance, 1.0, 1e-14);
    EXPECT_NEAR(g.ratio, 1 / (K * K), 1e-6);
    for (const auto& d : catalogue()) EXPECT_LE(variance_vs_psi_check(d).ratio, kVariancePsiBound);
}

TEST(AbsMoment, CenteredExponentialSimpson) {
    for (double p : {1.0, 2.0, 3.5}) {
        const long double ref = oracle::simpson([p](long double u) { return std::pow(std::abs(u - 1), (long double)p) * std::exp(-u); },
                                                0.0L, 60.0L, 200000);
        EXPECT_NEAR(abs_moment(DistributionSpec::centered_exponential(), p), (double)ref, 1e-8);
    }
}

TEST(Json, RoundTripAndErrors) {
    for (const auto& d : catalogue()) {
        nlohmann::json j = d;
        EXPECT_EQ(j.get<DistributionSpec>(), d);
    }
    EXPECT_THROW((nlohmann::json{{"family", "cauchy"}}.get<DistributionSpec>()), ConfigError);
    EXPECT_THROW((nlohmann::json{{"family", "laplace"}, {"scale", -1.0}}.get<DistributionSpec>()), ConfigError);
    EXPECT_THROW((nlohmann::json{{"family", "weibull"}, {"alpha", 3.0}}.get<DistributionSpec>()), ConfigError);
}
