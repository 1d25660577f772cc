#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "spectail/rng.hpp"

namespace spectail {

// ---------------------------------------------------------------------------
// Slicing depth

struct ChainDepth {
    int n = 0;
    int l = 0;
};

/// (n / 4^l) · ln(96e · 4^l), the left side of the depth condition.
double depth_condition_lhs(int n, int l);

/// Smallest l ≥ 1 with depth_condition_lhs(n, l) ≤ √n, by direct scan.
ChainDepth smallest_l(int n);

// ---------------------------------------------------------------------------
// Rank partition E_0 … E_l of the coordinates of a unit vector

struct RankPartition {
    int l = 0;
    std::vector<int> order;               ///< indices by nonincreasing |z(i)|, ties by index
    std::vector<std::vector<int>> blocks; ///< blocks[k] = E_k (ascending index order)
    std::vector<double> caps;             ///< sup-norm cap α_k; α_0 = 1
    std::vector<int> block_of;            ///< block label of each coordinate
};

/// Rank r (1-based) goes to E_0 when r ≤ n/4^l and to E_k when
/// n/4^k < r ≤ n/4^{k−1}, thresholds taken as exact reals.
RankPartition rank_partition(const Eigen::VectorXd& z, int l);

/// min(1, √(4^k / n)); 1 for k = 0.
double block_cap(int n, int k);
/// 1/16 for k = 0, 4^{−k} otherwise.
double block_epsilon(int k);

// ---------------------------------------------------------------------------
// Nets of the slice B₂ ∩ α·B_∞ ∩ R^E

enum class NetBackend { greedy_explicit, implicit_quantizer };

/// Round v to the grid of spacing ε/√dim, clip to the α-box, then scale into
/// the unit ball. For v in the slice, the output is in the slice and within
/// ε/2 of v.
Eigen::VectorXd quantize_to_slice(const Eigen::VectorXd& v, double epsilon, double alpha_cap);

/// (3/ε)^dim.
double net_cardinality_bound(int dim, double epsilon);

/// Maximum dim accepted by build_greedy_net for a given ε.
int greedy_net_dim_cap(double epsilon);

struct SliceNet {
    int dim = 0;
    double epsilon = 1.0;
    double alpha_cap = 1.0;
    NetBackend backend = NetBackend::greedy_explicit;
    double separation = 0.0;      ///< pairwise distances exceed this
    std::vector<double> points;   ///< row-major, size() × dim
    std::size_t proposals = 0;

    std::size_t size() const noexcept { return dim == 0 ? 0 : points.size() / static_cast<std::size_t>(dim); }
    Eigen::Map<const Eigen::VectorXd> point(std::size_t k) const {
        return {points.data() + k * static_cast<std::size_t>(dim), dim};
    }
};

/// Uniform draw from B₂ ∩ α·B_∞ in R^dim.
Eigen::VectorXd sample_slice_uniform(int dim, double alpha_cap, RandomStream& stream);

/// Greedy separated packing of the slice grown from uniform proposals,
/// starting at the origin. A proposal farther than the separation radius
/// 2ε/(3 − ε) from every net point is added; growth stops after
/// `probe_count` × `stall_factor` consecutive proposals that were already
/// within ε of the net. At that radius the packing bound (1 + 2/s)^dim equals
/// (3/ε)^dim, so a larger net throws VerificationError. When the slice radius
/// is at most ε the net is just the origin.
SliceNet build_greedy_net(int dim, double epsilon, double alpha_cap, int probe_count, RandomStream& stream,
                          int stall_factor = 10);

struct CoverReport {
    int probes = 0;
    int failures = 0;
    double max_distance = 0.0;
};

/// Fresh uniform probes of the slice; a failure is a probe farther than ε
/// from every net point.
CoverReport verify_covering(const SliceNet& net, int probe_count, RandomStream& stream);

// ---------------------------------------------------------------------------
// Approximants, contraction, decomposition

inline constexpr double kApproximationBudget = 0.3;

/// √((1/16)² + Σ_{k=1..l} 16^{−k}), the worst-case |z − x| for depth l.
double approximation_error_bound(int l);

struct Approximant {
    ChainDepth depth;
    RankPartition partition;
    Eigen::VectorXd x;
    std::vector<double> block_error;  ///< |x_k − P_{E_k} z|
    double total_error = 0.0;         ///< |z − x|
    double norm = 0.0;                ///< |x|
    bool blocks_in_slices = true;     ///< x_k ∈ B₂ ∩ α_k B_∞ ∩ R^{E_k} for all k
    bool in_double_ball = true;       ///< |x| ≤ 2

    std::vector<int> block_sizes() const;
    bool satisfies_budget() const;
};

/// Block-wise quantised approximant of a unit vector (n ≥ 2).
Approximant approximate(const Eigen::VectorXd& z);

struct ContractionReport {
    int n = 0;
    int l = 0;
    double spectral_norm = 0.0;
    double top_value = 0.0;        ///< ⟨Xz, z⟩ for z the top eigenvector of X
    double bottom_value = 0.0;     ///< ⟨−Xz′, z′⟩ for z′ the top eigenvector of −X
    double qf_approx = 0.0;        ///< ⟨Xx, x⟩
    double qf_approx_neg = 0.0;    ///< ⟨−Xx′, x′⟩
    double error = 0.0;            ///< |z − x|
    double error_neg = 0.0;        ///< |z′ − x′|
    std::vector<int> block_sizes;
    bool step_holds = false;       ///< ⟨Xz,z⟩ ≤ ⟨Xx,x⟩ + ‖X‖·|z−x|·|z+x| (and likewise for −X)
    bool contraction_holds = false;///< ‖X‖ ≤ 10·max(⟨Xx,x⟩, ⟨−Xx′,x′⟩)
    double ratio = 0.0;            ///< ‖X‖ / max(⟨Xx,x⟩, ⟨−Xx′,x′⟩)

    bool passed() const { return step_holds && contraction_holds; }
};

ContractionReport contraction_check(const Eigen::MatrixXd& X);

struct QuadformParts {
    double total = 0.0;     ///< ⟨Xx, x⟩ by direct evaluation
    double diagonal = 0.0;  ///< Σ x(i)² X_ii
    double off = 0.0;       ///< D_x = Σ_{i≠j} x(i)x(j)X_ij
    double within = 0.0;    ///< D′_x: pairs inside one block
    double cross = 0.0;     ///< D″_x: pairs across blocks, via the G_k grouping
};

/// Throws ValidationError if the blocks overlap, leave the index range, or
/// x is nonzero outside their union.
QuadformParts quadform_decomposition(const Eigen::MatrixXd& X, const Eigen::VectorXd& x,
                                     const std::vector<std::vector<int>>& blocks);

/// (4n / 4^k) · ln(48e · 4^{2k}), the log of the cardinality bound for M_k.
double mk_log_cardinality_bound(int n, int k, int l);

}  // namespace spectail
