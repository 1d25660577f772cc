#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace spectail {

enum class NormMethod { exact, iterative };
std::string_view method_name(NormMethod m);

struct NormResult {
    double value = 0.0;
    NormMethod method = NormMethod::exact;
    double residual = 0.0;  ///< ‖Av − λv‖ of the certifying pair; 0 for the exact path
    int iterations = 0;
};

inline constexpr int kDenseCap = 2048;
inline constexpr double kSymmetryTol = 1e-12;

/// Throws ValidationError unless A is square and symmetric to kSymmetryTol
/// relative to max|A_ij|.
void validate_symmetric(const Eigen::MatrixXd& A);

/// max|λ_i| from a full symmetric eigensolve (Householder tridiagonalisation
/// followed by implicit QR). Diagonal input short-circuits to max|A_ii|.
NormResult spectral_norm_exact(const Eigen::MatrixXd& A, int dense_cap = kDenseCap);

struct IterOptions {
    double tol = 1e-8;
    int max_iter = 50000;    ///< matrix-vector products
    std::uint64_t seed = 0;  ///< start-vector seed, normally the provenance seed
    int krylov_dim = 64;
};

/// Restarted Lanczos with full reorthogonalisation tracking both spectral
/// extremes. Stops once both extreme Ritz pairs have residual at most
/// tol·‖A‖_F/√n; throws ConvergenceError after max_iter products.
NormResult spectral_norm_iter(const Eigen::MatrixXd& A, const IterOptions& options = {});

/// ⟨Ax, x⟩.
double quadratic_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& x);

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

/// Algebraically largest eigenpair; the vector is unit length with its
/// largest-magnitude component positive.
EigenPair top_eigvec(const Eigen::MatrixXd& A);

/// y = A x with rows split across OpenMP threads; each row is reduced serially
/// so the result does not depend on the thread count.
void matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void matvec_serial(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y);

}  // namespace spectail
