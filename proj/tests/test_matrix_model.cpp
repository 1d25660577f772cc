#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <omp.h>

#include "oracles.hpp"
#include "spectail/errors.hpp"
#include "spectail/matrix_model.hpp"

using namespace spectail;

namespace {

ProfileSpec spec_of(ProfileKind kind, int n, double base) {
    ProfileSpec s;
    s.kind = kind;
    s.n = n;
    s.base_scale = base;
    return s;
}

}  // namespace

TEST(BuildProfile, Examples) {
    const auto w = build_profile(spec_of(ProfileKind::wigner, 3, 1));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(w.beta(i, j), 1.0);
    const auto d = build_profile(spec_of(ProfileKind::diagonal, 3, 2));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(d.beta(i, j), i == j ? 2.0 : 0.0);
    EXPECT_TRUE(d.is_diagonal());
    auto bs = spec_of(ProfileKind::band, 3, 1);
    bs.band_width = 1;
    const auto b = build_profile(bs);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(b.beta(i, j), std::abs(i - j) <= 1 ? 1.0 : 0.0);
}

TEST(BuildProfile, SparseMaskIsQuenched) {
    auto s = spec_of(ProfileKind::sparse, 200, 1);
    s.sparse_p = 0.1;
    s.sparse_seed = 4;
    const auto a = build_profile(s), b = build_profile(s);
    EXPECT_EQ(a.beta_data(), b.beta_data());
    int kept = 0;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j <= i; ++j) kept += a.beta(i, j) > 0;
    const double m = 200.0 * 201 / 2;
    EXPECT_NEAR(kept / m, 0.1, 5 * std::sqrt(0.09 / m));
    s.sparse_seed = 5;
    EXPECT_NE(build_profile(s).beta_data(), a.beta_data());
}

TEST(BuildProfile, BlockAndErrors) {
    auto s = spec_of(ProfileKind::block, 5, 2);
    s.block_sizes = {2, 3};
    s.block_scales = {1, 0.5};
    const auto p = build_profile(s);
    EXPECT_EQ(p.beta(0, 1), 2.0);
    EXPECT_EQ(p.beta(3, 4), 1.0);
    EXPECT_EQ(p.beta(1, 2), 0.0);
    s.block_sizes = {2, 2};
    EXPECT_THROW(build_profile(s), ConfigError);
    auto bad = spec_of(ProfileKind::band, 3, 1);
    bad.band_width = 0;
    EXPECT_THROW(build_profile(bad), ConfigError);
    EXPECT_THROW(build_profile(spec_of(ProfileKind::wigner, 0, 1)), ConfigError);
    auto c = spec_of(ProfileKind::custom, 2, 1);
    c.custom = {1, 2, 3, 1};
    EXPECT_THROW(build_profile(c), ConfigError);
}

TEST(StructParams, Examples) {
    const auto w = struct_params(build_profile(spec_of(ProfileKind::wigner, 8, 1)));
    EXPECT_NEAR(w.b, std::log(8.0), 1e-15);
    EXPECT_NEAR(w.b, 2.0794, 1e-4);
    EXPECT_EQ(w.sigma1, 1.0);
    EXPECT_EQ(w.sigma2, 1.0);
    const auto d = struct_params(build_profile(spec_of(ProfileKind::diagonal, 4, 2)));
    EXPECT_NEAR(d.b, 2 * std::log(4.0), 1e-15);
    EXPECT_NEAR(d.b, 2.7726, 1e-4);
    EXPECT_EQ(d.sigma1, 2.0);
    EXPECT_EQ(d.sigma2, 0.0);
    EXPECT_EQ(struct_params(build_profile(spec_of(ProfileKind::wigner, 1, 3))).b, 0.0);
}

TEST(StructParams, ScaleCovariant) {
    auto s = spec_of(ProfileKind::band, 20, 1);
    s.band_width = 2;
    s.alpha = 1.5;
    s.family = DistributionSpec::gaussian();
    const auto p1 = struct_params(build_profile(s));
    s.base_scale = 3;
    const auto p3 = struct_params(build_profile(s));
    EXPECT_NEAR(p3.b, 3 * p1.b, 1e-14);
    EXPECT_NEAR(p3.sigma1, 3 * p1.sigma1, 1e-14);
    EXPECT_NEAR(p3.sigma2, 3 * p1.sigma2, 1e-14);
    EXPECT_NEAR(p1.b, std::pow(std::log(20.0), 1 / 1.5), 1e-14);
}

TEST(SampleMatrix, ZeroProfileAndSymmetry) {
    const auto z = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 6, 0)), 1, 0);
    EXPECT_EQ(z.matrix.cwiseAbs().maxCoeff(), 0.0);
    const auto m = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 50, 1)), 3, 7).matrix;
    EXPECT_TRUE((m.transpose().array() == m.array()).all());
}

TEST(SampleMatrix, ReproducibleAcrossThreadCounts) {
    const auto p = build_profile(spec_of(ProfileKind::wigner, 300, 1));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = sample_matrix(p, 42, 5).matrix;
    omp_set_num_threads(4);
    const auto b = sample_matrix(p, 42, 5).matrix;
    omp_set_num_threads(saved);
    EXPECT_TRUE((a.array() == b.array()).all());
    EXPECT_TRUE((a.array() == sample_matrix_serial(p, 42, 5).array()).all());
    EXPECT_FALSE((a.array() == sample_matrix(p, 42, 6).matrix.array()).all());
}

TEST(SampleMatrix, ScalingIsPointwise) {
    const auto m1 = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 20, 1)), 9, 1).matrix;
    for (double c : {0.5, 2.0, 8.0}) {
        const auto mc = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 20, c)), 9, 1).matrix;
        EXPECT_TRUE((mc.array() == (c * m1).array()).all()) << c;
    }
    const auto m3 = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 20, 3)), 9, 1).matrix;
    EXPECT_LE((m3 - 3 * m1).cwiseAbs().maxCoeff(), 4e-16 * 3 * m1.cwiseAbs().maxCoeff());
}

// Plug-in ψ₁ of the (1,1) entry: solve mean exp(|x|/K) = 2 over 10⁴ trials.
TEST(SampleMatrix, DiagonalEntryPsiNormPlugIn) {
    const auto p = build_profile(spec_of(ProfileKind::diagonal, 2, 2));
    std::vector<double> xs;
    for (int t = 0; t < 10000; ++t) xs.push_back(std::abs(sample_entry(p, 17, t, 1, 1)));
    auto gap = [&](long double K) {
        long double acc = 0;
        for (double x : xs) acc += std::exp(x / K);
        return acc / xs.size() - 2;
    };
    const double K = static_cast<double>(oracle::bisect_decreasing(gap, 0.5L, 50.0L));
    EXPECT_NEAR(K, 2.0, 0.1);
}

TEST(SampleMatrix, EntryPsiNormEqualsBeta) {
    // Laplace base with α = 1: scale β/ψ₁(Laplace(1)) = β/2 gives Laplace(β/2).
    const auto p = build_profile(spec_of(ProfileKind::diagonal, 1, 2));
    EXPECT_NEAR(p.base_psi(), 2.0, 1e-9);
    RandomStream s(0, StreamTag::matrix_entry, 0, 0, 0);
    EXPECT_EQ(sample_entry(p, 0, 0, 0, 0), (2.0 / p.base_psi()) * sample(p.family(), s));
}

TEST(MatrixIo, BinaryRoundTrip) {
    const auto s = sample_matrix(build_profile(spec_of(ProfileKind::wigner, 7, 1.5)), 11, 3);
    std::stringstream ss;
    write_matrix_binary(ss, s);
    const auto r = read_matrix_binary(ss);
    EXPECT_TRUE((r.matrix.array() == s.matrix.array()).all());
    EXPECT_EQ(r.provenance.profile_id, s.provenance.profile_id);
    EXPECT_EQ(r.provenance.master_seed, 11u);
    EXPECT_EQ(r.provenance.trial_index, 3u);
    std::stringstream bad("nonsense\n");
    EXPECT_THROW(read_matrix_binary(bad), IoError);
}

TEST(ProfileJson, RoundTrip) {
    auto s = spec_of(ProfileKind::block, 4, 1);
    s.block_sizes = {1, 3};
    s.block_scales = {2, 1};
    nlohmann::json j = s;
    const auto back = j.get<ProfileSpec>();
    EXPECT_EQ(build_profile(back).beta_data(), build_profile(s).beta_data());
    EXPECT_THROW((nlohmann::json{{"kind", "triangle"}, {"n", 3}}.get<ProfileSpec>()), ConfigError);
}
