#include "spectail/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "spectail/errors.hpp"
#include "spectail/specnorm.hpp"

namespace spectail {

namespace {

constexpr double kUnitTol = 1e-10;
constexpr int kMaxDepth = 40;

double pow4(int k) { return std::ldexp(1.0, 2 * k); }

}  // namespace

double depth_condition_lhs(int n, int l) {
    const double q = pow4(l);
    return static_cast<double>(n) / q * std::log(96.0 * std::numbers::e * q);
}

ChainDepth smallest_l(int n) {
    if (n < 2) throw DomainError("smallest_l needs n >= 2, got " + std::to_string(n));
    const double root = std::sqrt(static_cast<double>(n));
    for (int l = 1; l <= kMaxDepth; ++l) {
        if (depth_condition_lhs(n, l) <= root) {
            if (l < 2) throw NumericalError("depth scan returned l < 2");
            return {n, l};
        }
    }
    throw NumericalError("depth scan did not terminate for n = " + std::to_string(n));
}

double block_cap(int n, int k) {
    if (k == 0) return 1.0;
    return std::min(1.0, std::sqrt(pow4(k) / static_cast<double>(n)));
}

double block_epsilon(int k) { return k == 0 ? 1.0 / 16.0 : 1.0 / pow4(k); }

RankPartition rank_partition(const Eigen::VectorXd& z, int l) {
    const int n = static_cast<int>(z.size());
    if (n == 0) throw ValidationError("rank_partition needs a nonempty vector");
    if (l < 1) throw DomainError("rank_partition needs l >= 1");
    if (!z.allFinite() || std::abs(z.norm() - 1.0) > kUnitTol) {
        throw ValidationError("rank_partition needs a unit vector");
    }
    RankPartition p;
    p.l = l;
    p.order.resize(static_cast<std::size_t>(n));
    std::iota(p.order.begin(), p.order.end(), 0);
    std::stable_sort(p.order.begin(), p.order.end(),
                     [&](int a, int b) { return std::abs(z(a)) > std::abs(z(b)); });
    p.blocks.assign(static_cast<std::size_t>(l) + 1, {});
    p.block_of.assign(static_cast<std::size_t>(n), -1);
    p.caps.resize(static_cast<std::size_t>(l) + 1);
    for (int k = 0; k <= l; ++k) p.caps[static_cast<std::size_t>(k)] = block_cap(n, k);

    const double dn = n;
    for (int r = 1; r <= n; ++r) {
        // E_0: r ≤ n/4^l. E_k: n/4^k < r ≤ n/4^{k−1}. Compare r·4^k against n exactly.
        int k = 0;
        if (static_cast<double>(r) * pow4(l) > dn) {
            k = 1;
            while (k < l && static_cast<double>(r) * pow4(k) <= dn) ++k;
        }
        const int idx = p.order[static_cast<std::size_t>(r - 1)];
        p.blocks[static_cast<std::size_t>(k)].push_back(idx);
        p.block_of[static_cast<std::size_t>(idx)] = k;
    }
    for (auto& b : p.blocks) std::sort(b.begin(), b.end());
    return p;
}

Eigen::VectorXd quantize_to_slice(const Eigen::VectorXd& v, double epsilon, double alpha_cap) {
    if (!(epsilon > 0.0)) throw DomainError("quantize_to_slice needs epsilon > 0");
    if (!(alpha_cap > 0.0)) throw DomainError("quantize_to_slice needs alpha_cap > 0");
    const Eigen::Index d = v.size();
    if (d == 0) return v;
    const double h = epsilon / std::sqrt(static_cast<double>(d));
    Eigen::VectorXd out(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double g = h * std::nearbyint(v(i) / h);
        out(i) = std::clamp(g, -alpha_cap, alpha_cap);
    }
    const double nrm = out.norm();
    if (nrm > 1.0) out /= nrm;
    return out;
}

double net_cardinality_bound(int dim, double epsilon) { return std::pow(3.0 / epsilon, dim); }

int greedy_net_dim_cap(double epsilon) { return epsilon >= 1.0 ? 12 : 6; }

double approximation_error_bound(int l) {
    double s = block_epsilon(0) * block_epsilon(0);
    for (int k = 1; k <= l; ++k) s += block_epsilon(k) * block_epsilon(k);
    return std::sqrt(s);
}

std::vector<int> Approximant::block_sizes() const {
    std::vector<int> out;
    for (const auto& b : partition.blocks) out.push_back(static_cast<int>(b.size()));
    return out;
}

bool Approximant::satisfies_budget() const {
    if (!(total_error <= kApproximationBudget) || !in_double_ball || !blocks_in_slices) return false;
    for (std::size_t k = 0; k < block_error.size(); ++k) {
        if (block_error[k] > block_epsilon(static_cast<int>(k))) return false;
    }
    return true;
}

Approximant approximate(const Eigen::VectorXd& z) {
    const int n = static_cast<int>(z.size());
    Approximant a;
    a.depth = smallest_l(n);
    a.partition = rank_partition(z, a.depth.l);
    a.x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k <= a.depth.l; ++k) {
        const auto& idx = a.partition.blocks[static_cast<std::size_t>(k)];
        const double cap = a.partition.caps[static_cast<std::size_t>(k)];
        Eigen::VectorXd pz(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t t = 0; t < idx.size(); ++t) pz(static_cast<Eigen::Index>(t)) = z(idx[t]);
        const Eigen::VectorXd xk = quantize_to_slice(pz, block_epsilon(k), cap);
        for (std::size_t t = 0; t < idx.size(); ++t) a.x(idx[t]) = xk(static_cast<Eigen::Index>(t));
        const double e = (xk - pz).norm();
        a.block_error.push_back(e);
        if (xk.size() > 0 && (xk.norm() > 1.0 + 1e-12 || xk.cwiseAbs().maxCoeff() > cap + 1e-12)) {
            a.blocks_in_slices = false;
        }
    }
    a.total_error = (z - a.x).norm();
    a.norm = a.x.norm();
    a.in_double_ball = a.norm <= 2.0;
    return a;
}

ContractionReport contraction_check(const Eigen::MatrixXd& X) {
    validate_symmetric(X);
    const int n = static_cast<int>(X.rows());
    if (n < 2) throw DomainError("contraction_check needs n >= 2");
    if (n > 4096) throw CapacityError("contraction_check needs n <= 4096");
    ContractionReport r;
    r.n = n;
    r.spectral_norm = spectral_norm_exact(X, 4096).value;

    const Eigen::MatrixXd negX = -X;
    const EigenPair top = top_eigvec(X);
    const EigenPair bottom = top_eigvec(negX);
    const Approximant ax = approximate(top.vector);
    const Approximant an = approximate(bottom.vector);
    r.l = ax.depth.l;
    r.block_sizes = ax.block_sizes();
    r.top_value = quadratic_form(X, top.vector);
    r.bottom_value = quadratic_form(negX, bottom.vector);
    r.qf_approx = quadratic_form(X, ax.x);
    r.qf_approx_neg = quadratic_form(negX, an.x);
    r.error = ax.total_error;
    r.error_neg = an.total_error;

    const double slack = 1e-9 * std::max(1.0, r.spectral_norm);
    const bool a_pos = r.top_value <= r.qf_approx +
                                          r.spectral_norm * ax.total_error * (top.vector + ax.x).norm() + slack;
    const bool a_neg = r.bottom_value <= r.qf_approx_neg +
                                             r.spectral_norm * an.total_error * (bottom.vector + an.x).norm() + slack;
    r.step_holds = a_pos && a_neg && ax.satisfies_budget() && an.satisfies_budget();
    const double best = std::max(r.qf_approx, r.qf_approx_neg);
    r.contraction_holds = r.spectral_norm <= 10.0 * best + slack;
    r.ratio = best > 0.0 ? r.spectral_norm / best : (r.spectral_norm == 0.0 ? 0.0 : INFINITY);
    return r;
}

QuadformParts quadform_decomposition(const Eigen::MatrixXd& X, const Eigen::VectorXd& x,
                                     const std::vector<std::vector<int>>& blocks) {
    const Eigen::Index n = X.rows();
    if (X.cols() != n || x.size() != n) throw ValidationError("quadform_decomposition: dimension mismatch");
    if (blocks.empty()) throw ValidationError("quadform_decomposition: no blocks");
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        for (int i : blocks[k]) {
            if (i < 0 || i >= n) throw ValidationError("quadform_decomposition: block index out of range");
            if (label[static_cast<std::size_t>(i)] != -1) {
                throw ValidationError("quadform_decomposition: blocks overlap at " + std::to_string(i));
            }
            label[static_cast<std::size_t>(i)] = static_cast<int>(k);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (label[static_cast<std::size_t>(i)] == -1 && x(i) != 0.0) {
            throw ValidationError("quadform_decomposition: x is nonzero outside the blocks at " + std::to_string(i));
        }
    }

    QuadformParts q;
    q.total = x.dot(X * x);
    for (Eigen::Index i = 0; i < n; ++i) q.diagonal += x(i) * x(i) * X(i, i);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) q.off += x(i) * x(j) * X(i, j);
        }
    }
    for (const auto& b : blocks) {
        for (int i : b) {
            for (int j : b) {
                if (i != j) q.within += x(i) * x(j) * X(i, j);
            }
        }
    }
    // Each unordered cross pair {F_k, F_r} with k ≥ 1 is counted once through
    // G_k = {0, k+1, …, l}, hence the factor 2.
    const int l = static_cast<int>(blocks.size()) - 1;
    for (int k = 1; k <= l; ++k) {
        for (int i : blocks[static_cast<std::size_t>(k)]) {
            double inner = 0.0;
            for (int r = 0; r <= l; ++r) {
                if (r != 0 && r <= k) continue;
                for (int j : blocks[static_cast<std::size_t>(r)]) inner += x(j) * X(i, j);
            }
            q.cross += 2.0 * x(i) * inner;
        }
    }
    return q;
}

double mk_log_cardinality_bound(int n, int k, int l) {
    if (n < 1) throw DomainError("mk_log_cardinality_bound needs n >= 1");
    if (k < 1 || k > l) {
        throw DomainError("mk_log_cardinality_bound needs 1 <= k <= l, got k = " + std::to_string(k));
    }
    const double q = pow4(k);
    return 4.0 * n / q * std::log(48.0 * std::numbers::e * q * q);
}

}  // namespace spectail
