#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "spectail/chaining.hpp"
#include "spectail/errors.hpp"

namespace spectail {

namespace {

constexpr std::size_t kMaxProposals = 400'000'000;

double log_unit_ball_volume(int d) {
    return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

// Uniform proposals in B₂ ∩ αB_∞, drawn from whichever of the two bodies is
// smaller and rejected against the other.
class SliceSampler {
public:
    SliceSampler(int dim, double alpha) : dim_(dim), alpha_(alpha) {
        if (alpha_ >= 1.0) {
            mode_ = Mode::ball;
        } else if (alpha_ * std::sqrt(static_cast<double>(dim_)) <= 1.0) {
            mode_ = Mode::box;
        } else {
            const double log_box = dim_ * std::log(2.0 * alpha_);
            mode_ = log_box < log_unit_ball_volume(dim_) ? Mode::box_reject : Mode::ball_reject;
        }
    }

    void draw(RandomStream& s, double* out) const {
        for (;;) {
            if (mode_ == Mode::box || mode_ == Mode::box_reject) {
                double r2 = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    out[i] = s.uniform(-alpha_, alpha_);
                    r2 += out[i] * out[i];
                }
                if (mode_ == Mode::box || r2 <= 1.0) return;
            } else {
                double r2 = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    out[i] = s.normal();
                    r2 += out[i] * out[i];
                }
                if (r2 == 0.0) continue;
                const double radius = std::pow(s.uniform(), 1.0 / dim_) / std::sqrt(r2);
                bool inside = true;
                for (int i = 0; i < dim_; ++i) {
                    out[i] *= radius;
                    if (std::abs(out[i]) > alpha_) inside = false;
                }
                if (mode_ == Mode::ball || inside) return;
            }
        }
    }

private:
    enum class Mode { ball, box, ball_reject, box_reject };
    int dim_;
    double alpha_;
    Mode mode_ = Mode::ball;
};

// Radius-limited nearest-point queries over a growing point set, bucketed in
// cubic cells of side `radius`. A query visits only the cells whose box lies
// within the radius.
class PointIndex {
public:
    PointIndex(int dim, double radius, const std::vector<double>& points)
        : dim_(dim), radius_(radius), points_(points), cell_(static_cast<std::size_t>(dim)),
          probe_(static_cast<std::size_t>(dim)), frac_(static_cast<std::size_t>(dim)) {
        keys_.assign(1024, 0);
        heads_.assign(1024, -1);
    }

    void add(std::size_t k) {
        const double* p = points_.data() + k * static_cast<std::size_t>(dim_);
        for (int i = 0; i < dim_; ++i) cell_[i] = static_cast<std::int64_t>(std::floor(p[i] / radius_));
        if (2 * (used_ + 1) > keys_.size()) grow();
        const std::size_t slot = find_slot(hash(cell_));
        if (keys_[slot] == 0) {
            keys_[slot] = hash(cell_);
            ++used_;
        }
        if (next_.size() <= k) next_.resize(k + 1, -1);
        next_[k] = heads_[slot];
        heads_[slot] = static_cast<std::int32_t>(k);
    }

    // Distance to the nearest stored point when it is ≤ radius, +inf
    // otherwise. Returns as soon as a point within `good_enough` turns up.
    double nearest(const double* q, double good_enough = 0.0) {
        q_ = q;
        best2_ = radius_ * radius_;
        stop2_ = good_enough * good_enough;
        found_ = false;
        done_ = false;
        for (int i = 0; i < dim_; ++i) {
            const double c = std::floor(q[i] / radius_);
            cell_[i] = static_cast<std::int64_t>(c);
            frac_[i] = q[i] / radius_ - c;
        }
        visit(0, 0.0);
        return found_ ? std::sqrt(best2_) : std::numeric_limits<double>::infinity();
    }

private:
    void visit(int axis, double gap2) {
        if (done_) return;
        if (axis == dim_) {
            scan_cell();
            return;
        }
        probe_[axis] = cell_[axis];
        visit(axis + 1, gap2);
        const double lo = frac_[axis] * radius_;
        const double hi = (1.0 - frac_[axis]) * radius_;
        const double first = std::min(lo, hi);
        const double second = std::max(lo, hi);
        const std::int64_t first_off = lo <= hi ? -1 : 1;
        if (gap2 + first * first <= best2_) {
            probe_[axis] = cell_[axis] + first_off;
            visit(axis + 1, gap2 + first * first);
        }
        if (gap2 + second * second <= best2_) {
            probe_[axis] = cell_[axis] - first_off;
            visit(axis + 1, gap2 + second * second);
        }
        probe_[axis] = cell_[axis];
    }

    void scan_cell() {
        const std::size_t slot = find_slot(hash(probe_));
        if (keys_[slot] == 0) return;
        for (std::int32_t k = heads_[slot]; k >= 0; k = next_[static_cast<std::size_t>(k)]) {
            const double* p = points_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(dim_);
            double s = 0.0;
            for (int i = 0; i < dim_ && s <= best2_; ++i) {
                const double d = q_[i] - p[i];
                s += d * d;
            }
            if (s <= best2_) {
                best2_ = s;
                found_ = true;
                if (s <= stop2_) {
                    done_ = true;
                    return;
                }
            }
        }
    }

    static std::uint64_t hash(const std::vector<std::int64_t>& c) {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (std::int64_t v : c) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
        return h == 0 ? 1 : h;
    }

    std::size_t find_slot(std::uint64_t h) const {
        const std::size_t mask = keys_.size() - 1;
        std::size_t i = static_cast<std::size_t>(h) & mask;
        while (keys_[i] != 0 && keys_[i] != h) i = (i + 1) & mask;
        return i;
    }

    void grow() {
        std::vector<std::uint64_t> old_keys(keys_.size() * 2, 0);
        std::vector<std::int32_t> old_heads(heads_.size() * 2, -1);
        old_keys.swap(keys_);
        old_heads.swap(heads_);
        for (std::size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] == 0) continue;
            const std::size_t slot = find_slot(old_keys[i]);
            keys_[slot] = old_keys[i];
            heads_[slot] = old_heads[i];
        }
    }

    int dim_;
    double radius_;
    const std::vector<double>& points_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::int32_t> heads_;
    std::vector<std::int32_t> next_;
    std::size_t used_ = 0;
    std::vector<std::int64_t> cell_;
    std::vector<std::int64_t> probe_;
    std::vector<double> frac_;
    const double* q_ = nullptr;
    double best2_ = 0.0;
    double stop2_ = 0.0;
    bool found_ = false;
    bool done_ = false;
};

void check_net_args(int dim, double epsilon, double alpha_cap) {
    if (dim < 1) throw DomainError("net dimension must be >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("net epsilon must lie in (0, 1]");
    if (!(alpha_cap > 0.0 && alpha_cap <= 1.0)) throw DomainError("net alpha_cap must lie in (0, 1]");
}

}  // namespace

Eigen::VectorXd sample_slice_uniform(int dim, double alpha_cap, RandomStream& stream) {
    if (dim < 1) throw DomainError("slice dimension must be >= 1");
    if (!(alpha_cap > 0.0)) throw DomainError("alpha_cap must be > 0");
    Eigen::VectorXd v(dim);
    SliceSampler(dim, alpha_cap).draw(stream, v.data());
    return v;
}

SliceNet build_greedy_net(int dim, double epsilon, double alpha_cap, int probe_count, RandomStream& stream,
                          int stall_factor) {
    check_net_args(dim, epsilon, alpha_cap);
    if (dim > greedy_net_dim_cap(epsilon)) {
        throw CapacityError("greedy net dimension " + std::to_string(dim) + " exceeds the cap " +
                            std::to_string(greedy_net_dim_cap(epsilon)) + " for this epsilon");
    }
    if (probe_count < 1 || stall_factor < 1) throw DomainError("probe_count and stall_factor must be >= 1");

    SliceNet net;
    net.dim = dim;
    net.epsilon = epsilon;
    net.alpha_cap = alpha_cap;
    net.backend = NetBackend::greedy_explicit;
    // Smallest s with 1 + 2/s ≤ 3/ε.
    net.separation = 2.0 * epsilon / (3.0 - epsilon);
    net.points.assign(static_cast<std::size_t>(dim), 0.0);

    // The origin alone covers the slice when its radius is at most ε.
    const double radius = std::min(1.0, alpha_cap * std::sqrt(static_cast<double>(dim)));
    if (radius <= epsilon) return net;

    const double bound = net_cardinality_bound(dim, epsilon);
    const std::size_t stall = static_cast<std::size_t>(probe_count) * static_cast<std::size_t>(stall_factor);
    SliceSampler sampler(dim, alpha_cap);
    PointIndex index(dim, epsilon, net.points);
    index.add(0);
    std::vector<double> q(static_cast<std::size_t>(dim));
    std::size_t covered_run = 0;
    while (covered_run < stall) {
        if (net.proposals >= kMaxProposals) {
            throw CapacityError("greedy net did not settle within the proposal cap");
        }
        sampler.draw(stream, q.data());
        ++net.proposals;
        const double d = index.nearest(q.data(), net.separation);
        if (d <= epsilon) {
            ++covered_run;
        } else {
            covered_run = 0;
        }
        if (d > net.separation) {
            net.points.insert(net.points.end(), q.begin(), q.end());
            index.add(net.size() - 1);
            if (static_cast<double>(net.size()) > bound) {
                throw VerificationError("greedy net exceeded the (3/eps)^dim cardinality bound");
            }
        }
    }
    return net;
}

CoverReport verify_covering(const SliceNet& net, int probe_count, RandomStream& stream) {
    check_net_args(net.dim, net.epsilon, net.alpha_cap);
    if (net.size() == 0) throw ValidationError("empty net");
    CoverReport r;
    SliceSampler sampler(net.dim, net.alpha_cap);
    PointIndex index(net.dim, 2.0 * net.epsilon, net.points);
    for (std::size_t k = 0; k < net.size(); ++k) index.add(k);
    std::vector<double> q(static_cast<std::size_t>(net.dim));
    for (int t = 0; t < probe_count; ++t) {
        sampler.draw(stream, q.data());
        double d = index.nearest(q.data());
        if (std::isinf(d)) {
            for (std::size_t k = 0; k < net.size(); ++k) {
                d = std::min(d, (net.point(k) - Eigen::Map<const Eigen::VectorXd>(q.data(), net.dim)).norm());
            }
        }
        ++r.probes;
        r.max_distance = std::max(r.max_distance, d);
        if (!(d <= net.epsilon)) ++r.failures;
    }
    return r;
}

}  // namespace spectail
