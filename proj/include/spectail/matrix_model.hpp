#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "spectail/subexp_dist.hpp"

namespace spectail {

enum class ProfileKind { wigner, diagonal, band, sparse, block, custom };
std::string kind_name(ProfileKind k);
ProfileKind kind_from_name(const std::string& s);

/// Declarative description of an ensemble; build_profile turns it into data.
struct ProfileSpec {
    ProfileKind kind = ProfileKind::wigner;
    int n = 1;
    double base_scale = 1.0;
    int band_width = 1;                  ///< band: β_ij = base for |i − j| ≤ w
    double sparse_p = 1.0;               ///< sparse: keep probability
    std::uint64_t sparse_seed = 0;       ///< sparse: quenched-mask seed
    std::vector<int> block_sizes;        ///< block: consecutive diagonal blocks
    std::vector<double> block_scales;    ///< block: per-block multiplier of base_scale
    std::vector<double> custom;          ///< custom: n×n row-major ψ-scales
    DistributionSpec family = DistributionSpec::laplace(1.0);
    double alpha = 1.0;                  ///< tail class used to normalise entries, in [1, 2]
};

void to_json(nlohmann::json& j, const ProfileSpec& spec);
void from_json(const nlohmann::json& j, ProfileSpec& spec);

/// n×n symmetric array of ψ_α-norm scales plus the entry law. Entry (i, j) is
/// (β_ij / ψ_α(base law)) · draw, so ‖X_ij‖_{ψ_α} = β_ij exactly.
class Profile {
public:
    Profile(int n, std::vector<double> beta, DistributionSpec family, double alpha, std::string id);

    int n() const noexcept { return n_; }
    double beta(int i, int j) const noexcept { return beta_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& beta_data() const noexcept { return beta_; }
    const DistributionSpec& family() const noexcept { return family_; }
    double alpha() const noexcept { return alpha_; }
    double base_psi() const noexcept { return base_psi_; }
    const std::string& id() const noexcept { return id_; }
    bool is_diagonal() const noexcept { return diagonal_; }

    /// Per-entry standard deviation, the b_ij of the Gaussian literature bounds.
    Eigen::MatrixXd stddev_matrix() const;

private:
    int n_;
    std::vector<double> beta_;
    DistributionSpec family_;
    double alpha_;
    double base_psi_;
    std::string id_;
    bool diagonal_;
};

Profile build_profile(const ProfileSpec& spec);

struct StructParams {
    int n = 1;
    double alpha = 1.0;
    double b = 0.0;       ///< max_i β_ii · log^{1/α} n
    double sigma1 = 0.0;  ///< max_{i,j} β_ij
    double sigma2 = 0.0;  ///< max_{i≠j} β_ij
};

StructParams struct_params(const Profile& profile);

struct Provenance {
    std::string profile_id;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

struct SymMatrixSample {
    Eigen::MatrixXd matrix;
    Provenance provenance;
};

/// Entry (i, j) of trial `trial`; a pure function of (seed, trial, min/max(i, j)).
double sample_entry(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial, int i, int j);

/// OpenMP row-parallel sampler. Bit-identical to sample_matrix_serial for any
/// thread count.
SymMatrixSample sample_matrix(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial);
Eigen::MatrixXd sample_matrix_serial(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial);

/// Text header (n and provenance) followed by n² little-endian float64 values, row-major.
void write_matrix_binary(std::ostream& os, const SymMatrixSample& sample);
SymMatrixSample read_matrix_binary(std::istream& is);

}  // namespace spectail
