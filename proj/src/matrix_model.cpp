#include "spectail/matrix_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "spectail/errors.hpp"

namespace spectail {

namespace {

constexpr struct {
    ProfileKind kind;
    const char* name;
} kKindNames[] = {
    {ProfileKind::wigner, "wigner"}, {ProfileKind::diagonal, "diagonal"}, {ProfileKind::band, "band"},
    {ProfileKind::sparse, "sparse"}, {ProfileKind::block, "block"},       {ProfileKind::custom, "custom"},
};

std::string describe(const ProfileSpec& spec) {
    std::ostringstream os;
    os << kind_name(spec.kind) << "-n" << spec.n;
    switch (spec.kind) {
        case ProfileKind::band: os << "-w" << spec.band_width; break;
        case ProfileKind::sparse: os << "-p" << spec.sparse_p << "-m" << spec.sparse_seed; break;
        case ProfileKind::block: os << "-k" << spec.block_sizes.size(); break;
        default: break;
    }
    os << "-" << family_name(spec.family.family) << "-a" << spec.alpha << "-s" << spec.base_scale;
    return os.str();
}

}  // namespace

std::string kind_name(ProfileKind k) {
    for (const auto& e : kKindNames) {
        if (e.kind == k) return e.name;
    }
    return "unknown";
}

ProfileKind kind_from_name(const std::string& s) {
    for (const auto& e : kKindNames) {
        if (s == e.name) return e.kind;
    }
    throw ConfigError("unknown profile kind '" + s + "'");
}

void to_json(nlohmann::json& j, const ProfileSpec& spec) {
    j = nlohmann::json{{"kind", kind_name(spec.kind)},
                       {"n", spec.n},
                       {"base_scale", spec.base_scale},
                       {"family", spec.family},
                       {"alpha", spec.alpha}};
    switch (spec.kind) {
        case ProfileKind::band: j["width"] = spec.band_width; break;
        case ProfileKind::sparse:
            j["p"] = spec.sparse_p;
            j["mask_seed"] = spec.sparse_seed;
            break;
        case ProfileKind::block:
            j["sizes"] = spec.block_sizes;
            j["scales"] = spec.block_scales;
            break;
        case ProfileKind::custom: j["beta"] = spec.custom; break;
        default: break;
    }
}

void from_json(const nlohmann::json& j, ProfileSpec& spec) {
    if (!j.is_object()) throw ConfigError("profile: expected an object");
    try {
        spec = ProfileSpec{};
        spec.kind = kind_from_name(j.at("kind").get<std::string>());
        spec.n = j.at("n").get<int>();
        spec.base_scale = j.value("base_scale", 1.0);
        if (j.contains("family")) spec.family = j.at("family").get<DistributionSpec>();
        spec.alpha = j.value("alpha", 1.0);
        spec.band_width = j.value("width", 1);
        spec.sparse_p = j.value("p", 1.0);
        spec.sparse_seed = j.value("mask_seed", std::uint64_t{0});
        if (j.contains("sizes")) spec.block_sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("scales")) spec.block_scales = j.at("scales").get<std::vector<double>>();
        if (j.contains("beta")) spec.custom = j.at("beta").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("profile: ") + e.what());
    }
}

Profile::Profile(int n, std::vector<double> beta, DistributionSpec family, double alpha, std::string id)
    : n_(n), beta_(std::move(beta)), family_(family), alpha_(alpha), id_(std::move(id)) {
    if (n_ < 1) throw ConfigError("profile: n must be at least 1");
    if (beta_.size() != static_cast<std::size_t>(n_) * n_) throw ConfigError("profile: beta must be n×n");
    if (!(alpha_ >= 1.0 && alpha_ <= 2.0)) throw ConfigError("profile: alpha must lie in [1, 2]");
    family_.validate();
    diagonal_ = true;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double b = this->beta(i, j);
            if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("profile: scales must be finite and nonnegative");
            if (b != this->beta(j, i)) throw ConfigError("profile: beta must be symmetric");
            if (i != j && b != 0.0) diagonal_ = false;
        }
    }
    base_psi_ = family_.family == Family::zero ? 0.0 : psi_norm(family_, alpha_).value;
}

Eigen::MatrixXd Profile::stddev_matrix() const {
    const double sd = std::sqrt(variance(family_));
    const double mult = base_psi_ > 0.0 ? sd / base_psi_ : 0.0;
    Eigen::MatrixXd out(n_, n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) out(i, j) = beta(i, j) * mult;
    }
    return out;
}

Profile build_profile(const ProfileSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw ConfigError("build_profile: n must be at least 1");
    if (!(spec.base_scale >= 0.0) || !std::isfinite(spec.base_scale)) {
        throw ConfigError("build_profile: base_scale must be finite and nonnegative");
    }
    const double base = spec.base_scale;
    std::vector<double> beta(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return beta[static_cast<std::size_t>(i) * n + j]; };

    switch (spec.kind) {
        case ProfileKind::wigner:
            std::fill(beta.begin(), beta.end(), base);
            break;
        case ProfileKind::diagonal:
            for (int i = 0; i < n; ++i) at(i, i) = base;
            break;
        case ProfileKind::band:
            if (spec.band_width < 1 || spec.band_width > n) throw ConfigError("band: width must lie in [1, n]");
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (std::abs(i - j) <= spec.band_width) at(i, j) = base;
                }
            }
            break;
        case ProfileKind::sparse: {
            if (!(spec.sparse_p > 0.0 && spec.sparse_p <= 1.0)) throw ConfigError("sparse: p must lie in (0, 1]");
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j <= i; ++j) {
                    RandomStream mask(spec.sparse_seed, StreamTag::profile_mask, static_cast<std::uint32_t>(i),
                                      static_cast<std::uint32_t>(j));
                    const double v = mask.uniform() < spec.sparse_p ? base : 0.0;
                    at(i, j) = v;
                    at(j, i) = v;
                }
            }
            break;
        }
        case ProfileKind::block: {
            const auto& sizes = spec.block_sizes;
            if (sizes.empty() || sizes.size() != spec.block_scales.size()) {
                throw ConfigError("block: sizes and scales must be nonempty and equally long");
            }
            if (std::accumulate(sizes.begin(), sizes.end(), 0) != n ||
                std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
                throw ConfigError("block: sizes must be positive and sum to n");
            }
            int start = 0;
            for (std::size_t b = 0; b < sizes.size(); ++b) {
                if (!(spec.block_scales[b] >= 0.0)) throw ConfigError("block: scales must be nonnegative");
                for (int i = start; i < start + sizes[b]; ++i) {
                    for (int j = start; j < start + sizes[b]; ++j) at(i, j) = base * spec.block_scales[b];
                }
                start += sizes[b];
            }
            break;
        }
        case ProfileKind::custom:
            if (spec.custom.size() != beta.size()) throw ConfigError("custom: beta must have n² entries");
            for (std::size_t k = 0; k < beta.size(); ++k) beta[k] = base * spec.custom[k];
            break;
    }
    return Profile(n, std::move(beta), spec.family, spec.alpha, describe(spec));
}

StructParams struct_params(const Profile& profile) {
    StructParams p;
    p.n = profile.n();
    p.alpha = profile.alpha();
    double max_diag = 0.0;
    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.n; ++j) {
            const double b = profile.beta(i, j);
            p.sigma1 = std::max(p.sigma1, b);
            if (i == j) {
                max_diag = std::max(max_diag, b);
            } else {
                p.sigma2 = std::max(p.sigma2, b);
            }
        }
    }
    const double log_n = std::log(static_cast<double>(p.n));
    p.b = max_diag * std::pow(log_n, 1.0 / p.alpha);
    return p;
}

double sample_entry(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial, int i, int j) {
    if (i < j) std::swap(i, j);
    const double beta = profile.beta(i, j);
    if (beta == 0.0) return 0.0;
    RandomStream stream(master_seed, StreamTag::matrix_entry, static_cast<std::uint32_t>(trial),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return (beta / profile.base_psi()) * sample(profile.family(), stream);
}

Eigen::MatrixXd sample_matrix_serial(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial) {
    const int n = profile.n();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = sample_entry(profile, master_seed, trial, i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

SymMatrixSample sample_matrix(const Profile& profile, std::uint64_t master_seed, std::uint64_t trial) {
    const int n = profile.n();
    SymMatrixSample out{Eigen::MatrixXd(n, n), {profile.id(), master_seed, trial}};
    Eigen::MatrixXd& m = out.matrix;
    // Lower triangle first (row i owns columns j ≤ i), then mirror, so no two
    // threads ever write the same element.
#pragma omp parallel for schedule(dynamic, 8) if (n >= 128)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) m(i, j) = sample_entry(profile, master_seed, trial, i, j);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) m(j, i) = m(i, j);
    }
    return out;
}

void write_matrix_binary(std::ostream& os, const SymMatrixSample& sample) {
    const auto& m = sample.matrix;
    const auto n = m.rows();
    os << "spectail-matrix 1\n"
       << "n " << n << "\n"
       << "profile " << sample.provenance.profile_id << "\n"
       << "seed " << sample.provenance.master_seed << "\n"
       << "trial " << sample.provenance.trial_index << "\n"
       << "end\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            std::uint64_t bits = std::bit_cast<std::uint64_t>(m(i, j));
            unsigned char bytes[8];
            for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
            os.write(reinterpret_cast<const char*>(bytes), 8);
        }
    }
    if (!os) throw IoError("write_matrix_binary: stream write failed");
}

SymMatrixSample read_matrix_binary(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "spectail-matrix 1") throw IoError("read_matrix_binary: bad magic line");
    SymMatrixSample out;
    long long n = -1;
    while (std::getline(is, line) && line != "end") {
        const auto sp = line.find(' ');
        const std::string key = line.substr(0, sp);
        const std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (key == "n") n = std::stoll(val);
        else if (key == "profile") out.provenance.profile_id = val;
        else if (key == "seed") out.provenance.master_seed = std::stoull(val);
        else if (key == "trial") out.provenance.trial_index = std::stoull(val);
    }
    if (line != "end" || n < 1) throw IoError("read_matrix_binary: malformed header");
    out.matrix.resize(n, n);
    for (long long i = 0; i < n; ++i) {
        for (long long j = 0; j < n; ++j) {
            unsigned char bytes[8];
            if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("read_matrix_binary: truncated payload");
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
            out.matrix(i, j) = std::bit_cast<double>(bits);
        }
    }
    return out;
}

}  // namespace spectail
