#include "spectail/subexp_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadrature.hpp"
#include "spectail/errors.hpp"

namespace spectail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyName {
    Family family;
    std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::centered_exponential, "centered_exponential"},
    {Family::laplace, "laplace"},
    {Family::gaussian, "gaussian"},
    {Family::rademacher, "rademacher"},
    {Family::symmetric_weibull, "weibull"},
    {Family::zero, "zero"},
};

// E exp(log_h(|ξ|)) by quadrature against the law of |ξ|. Integrands are
// assembled in log space so exp(x/K)·density does not overflow to inf·0.
template <class LogH>
double abs_expectation(const DistributionSpec& spec, LogH log_h) {
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return std::exp(log_h(0.0));
        case Family::rademacher:
            return std::exp(log_h(s));
        case Family::laplace:
            return detail::integrate([&](double u) { return std::exp(log_h(s * u) - u); }, 0.0, kInf);
        case Family::gaussian: {
            const double log_c = 0.5 * std::log(2.0 / std::numbers::pi);
            return detail::integrate([&](double u) { return std::exp(log_h(s * u) + log_c - 0.5 * u * u); }, 0.0,
                                     kInf);
        }
        case Family::centered_exponential: {
            // |E − 1| has density e^{−(1−u)} + e^{−(1+u)} on [0,1) and e^{−(1+u)} beyond.
            const double inner = detail::integrate(
                [&](double u) { return std::exp(log_h(s * u)) * (std::exp(u - 1.0) + std::exp(-1.0 - u)); }, 0.0,
                1.0);
            const double outer =
                detail::integrate([&](double u) { return std::exp(log_h(s * u) - 1.0 - u); }, 1.0, kInf);
            return inner + outer;
        }
        case Family::symmetric_weibull: {
            // W^shape ~ Exp(1)
            const double inv = 1.0 / spec.shape;
            return detail::integrate([&](double u) { return std::exp(log_h(s * std::pow(u, inv)) - u); }, 0.0,
                                     kInf);
        }
    }
    return kInf;
}

double closed_form_psi_expectation(const DistributionSpec& spec, double alpha, double K, bool& ok) {
    ok = true;
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return 1.0;
        case Family::rademacher:
            return std::exp(std::pow(s / K, alpha));
        case Family::laplace:
            if (alpha == 1.0) return K > s ? 1.0 / (1.0 - s / K) : kInf;
            break;
        case Family::centered_exponential:
            if (alpha == 1.0) {
                const double c = s / K;
                if (c >= 1.0) return kInf;
                return std::exp(c) * (1.0 - std::exp(-(1.0 + c))) / (1.0 + c) + std::exp(-1.0) / (1.0 - c);
            }
            break;
        case Family::gaussian:
            if (alpha == 2.0) {
                const double c = (s * s) / (K * K);
                return 2.0 * c < 1.0 ? 1.0 / std::sqrt(1.0 - 2.0 * c) : kInf;
            }
            break;
        case Family::symmetric_weibull:
            if (alpha == spec.shape) {
                const double c = std::pow(s / K, alpha);
                return c < 1.0 ? 1.0 / (1.0 - c) : kInf;
            }
            break;
    }
    ok = false;
    return kInf;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
}

}  // namespace

std::string_view family_name(Family f) {
    for (const auto& [family, name] : kFamilyNames) {
        if (family == f) return name;
    }
    return "unknown";
}

Family family_from_name(std::string_view name) {
    for (const auto& [family, n] : kFamilyNames) {
        if (n == name) return family;
    }
    if (name == "symmetric_weibull") return Family::symmetric_weibull;
    if (name == "exponential") return Family::centered_exponential;
    throw ConfigError("unknown distribution family '" + std::string(name) + "'");
}

void DistributionSpec::validate() const {
    if (family == Family::zero) return;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError(std::string(family_name(family)) + ": scale must be positive and finite");
    }
    if (family == Family::symmetric_weibull && !(shape > 0.0 && shape <= 2.0)) {
        throw ConfigError("weibull: shape must lie in (0, 2]");
    }
}

double DistributionSpec::tail_class() const {
    switch (family) {
        case Family::centered_exponential:
        case Family::laplace:
            return 1.0;
        case Family::gaussian:
            return 2.0;
        case Family::symmetric_weibull:
            return shape;
        case Family::rademacher:
        case Family::zero:
            return kInf;
    }
    return 0.0;
}

DistributionSpec DistributionSpec::scaled(double c) const {
    if (!(c > 0.0)) throw DomainError("scaling factor must be positive");
    DistributionSpec out = *this;
    out.scale = scale * c;
    return out;
}

void to_json(nlohmann::json& j, const DistributionSpec& spec) {
    j = nlohmann::json{{"family", std::string(family_name(spec.family))}};
    if (spec.family != Family::zero) j["scale"] = spec.scale;
    if (spec.family == Family::symmetric_weibull) j["alpha"] = spec.shape;
}

void from_json(const nlohmann::json& j, DistributionSpec& spec) {
    if (!j.is_object() || !j.contains("family")) throw ConfigError("distribution: expected an object with 'family'");
    spec = DistributionSpec{};
    spec.family = family_from_name(j.at("family").get<std::string>());
    if (spec.family == Family::zero) {
        spec.scale = 0.0;
    } else if (j.contains("scale")) {
        spec.scale = j.at("scale").get<double>();
    } else if (j.contains("stddev")) {
        spec.scale = j.at("stddev").get<double>();
    }
    if (j.contains("alpha")) spec.shape = j.at("alpha").get<double>();
    if (j.contains("shape")) spec.shape = j.at("shape").get<double>();
    spec.validate();
}

double sample(const DistributionSpec& spec, RandomStream& stream) {
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return 0.0;
        case Family::centered_exponential:
            return s * (stream.exponential() - 1.0);
        case Family::laplace: {
            // sign and magnitude from one 64-bit draw keeps one block per entry
            const double e = stream.exponential();
            return stream.sign() * s * e;
        }
        case Family::gaussian:
            return s * stream.normal();
        case Family::rademacher:
            return s * stream.sign();
        case Family::symmetric_weibull: {
            const double w = std::pow(stream.exponential(), 1.0 / spec.shape);
            return stream.sign() * s * w;
        }
    }
    return 0.0;
}

double psi_expectation(const DistributionSpec& spec, double alpha, double K) {
    check_alpha(alpha);
    if (!(K > 0.0)) return spec.family == Family::zero ? 1.0 : kInf;
    bool ok = false;
    const double closed = closed_form_psi_expectation(spec, alpha, K, ok);
    if (ok) return closed;
    if (alpha > spec.tail_class()) return kInf;
    const double inv_k = 1.0 / K;
    return abs_expectation(spec, [&](double x) { return std::pow(x * inv_k, alpha); });
}

PsiNorm psi_norm(const DistributionSpec& spec, double alpha, double tol) {
    check_alpha(alpha);
    if (!(tol > 0.0)) throw DomainError("psi_norm: tolerance must be positive");
    spec.validate();
    if (spec.family == Family::zero) return {alpha, 0.0, tol};
    if (alpha > spec.tail_class()) {
        throw NotPsiAlphaError(std::string(family_name(spec.family)) + " has no finite psi_" +
                               std::to_string(alpha) + " norm");
    }
    auto excess = [&](double K) {
        double e = kInf;
        try {
            e = psi_expectation(spec, alpha, K);
        } catch (const NumericalError&) {
            // A peaked integrand far below the crossing; it is certainly > 2 there.
            e = kInf;
        }
        return e > 2.0;
    };
    double hi = spec.scale;
    while (excess(hi)) {
        hi *= 2.0;
        if (hi > 1e300) throw NotPsiAlphaError("psi_norm: expectation diverges for every tested K");
    }
    double lo = 0.5 * hi;
    while (!excess(lo)) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) throw NumericalError("psi_norm: failed to bracket the crossing");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (excess(mid) ? lo : hi) = mid;
    }
    return {alpha, hi, tol};
}

double abs_moment(const DistributionSpec& spec, double p) {
    if (!(p > 0.0)) throw DomainError("abs_moment: p must be positive");
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return 0.0;
        case Family::rademacher:
            return std::pow(s, p);
        case Family::laplace:
            return std::pow(s, p) * std::tgamma(p + 1.0);
        case Family::gaussian:
            return std::pow(s, p) * std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) /
                   std::sqrt(std::numbers::pi);
        case Family::symmetric_weibull:
            return std::pow(s, p) * std::tgamma(1.0 + p / spec.shape);
        case Family::centered_exponential: {
            // e^{−1} ∫₀¹ u^p e^u du  +  e^{−1} Γ(p+1)
            const double inner = detail::integrate([&](double u) { return std::pow(u, p) * std::exp(u); }, 0.0, 1.0);
            return std::pow(s, p) * std::exp(-1.0) * (inner + std::tgamma(p + 1.0));
        }
    }
    return 0.0;
}

double variance(const DistributionSpec& spec) {
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return 0.0;
        case Family::laplace:
            return 2.0 * s * s;
        case Family::gaussian:
        case Family::rademacher:
        case Family::centered_exponential:
            return s * s;
        case Family::symmetric_weibull:
            return s * s * std::tgamma(1.0 + 2.0 / spec.shape);
    }
    return 0.0;
}

double tail_probability(const DistributionSpec& spec, double t) {
    if (t <= 0.0) return 1.0;
    const double s = spec.scale;
    switch (spec.family) {
        case Family::zero:
            return 0.0;
        case Family::rademacher:
            return t <= s ? 1.0 : 0.0;
        case Family::laplace:
            return std::exp(-t / s);
        case Family::gaussian:
            return std::erfc(t / (s * std::numbers::sqrt2));
        case Family::symmetric_weibull:
            return std::exp(-std::pow(t / s, spec.shape));
        case Family::centered_exponential: {
            const double u = t / s;
            const double upper = std::exp(-(1.0 + u));
            return u < 1.0 ? -std::expm1(-(1.0 - u)) + upper : upper;
        }
    }
    return 0.0;
}

double mgf(const DistributionSpec& spec, double lambda) {
    const double s = spec.scale;
    const double x = lambda * s;
    switch (spec.family) {
        case Family::zero:
            return 1.0;
        case Family::rademacher:
            return std::cosh(x);
        case Family::gaussian:
            return std::exp(0.5 * x * x);
        case Family::laplace:
            return std::abs(x) < 1.0 ? 1.0 / (1.0 - x * x) : kInf;
        case Family::centered_exponential:
            return x < 1.0 ? std::exp(-x) / (1.0 - x) : kInf;
        case Family::symmetric_weibull: {
            if (lambda == 0.0) return 1.0;
            if (spec.shape < 1.0 || (spec.shape == 1.0 && std::abs(x) >= 1.0)) return kInf;
            if (spec.shape == 1.0) return 1.0 / (1.0 - x * x);
            const double inv = 1.0 / spec.shape;
            return detail::integrate(
                [&](double u) {
                    const double y = std::abs(x) * std::pow(u, inv);
                    return 0.5 * (std::exp(y - u) + std::exp(-y - u));
                },
                0.0, kInf);
        }
    }
    return kInf;
}

std::vector<MomentRatio> moment_growth_ratio(const DistributionSpec& spec, double alpha, int p_max) {
    check_alpha(alpha);
    if (p_max < 2) throw DomainError("moment_growth_ratio: p_max must be at least 2");
    spec.validate();
    if (alpha > spec.tail_class()) {
        throw NotPsiAlphaError("moment growth exceeds p^{1/alpha} for this family");
    }
    std::vector<MomentRatio> out;
    out.reserve(static_cast<std::size_t>(p_max));
    for (int p = 1; p <= p_max; ++p) {
        const double m = abs_moment(spec, p);
        if (!std::isfinite(m)) throw NotPsiAlphaError("moment diverges");
        const double root = std::pow(m, 1.0 / p);
        out.push_back({p, root, root / std::pow(static_cast<double>(p), 1.0 / alpha)});
    }
    return out;
}

std::vector<TailCheckRow> tail_vs_psi_check(const DistributionSpec& spec, double alpha,
                                            const std::vector<double>& t_grid) {
    const double K = psi_norm(spec, alpha).value;
    std::vector<TailCheckRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0.0) throw DomainError("tail_vs_psi_check: t must be nonnegative");
        double bound;
        if (K == 0.0) {
            bound = t > 0.0 ? 0.0 : 2.0;
        } else {
            bound = 2.0 * std::exp(-std::pow(t / K, alpha));
        }
        rows.push_back({t, tail_probability(spec, t), bound});
    }
    return rows;
}

namespace {

bool mgf_constant_passes(const DistributionSpec& spec, double psi1, double c) {
    const double k5 = c * psi1;
    const double lam_max = 1.0 / k5;
    constexpr int kGrid = 400;
    for (int i = -kGrid; i <= kGrid; ++i) {
        const double lam = lam_max * i / kGrid;
        double lhs;
        try {
            lhs = mgf(spec, lam);
        } catch (const NumericalError&) {
            return false;  // only happens for λ far past the point where the mgf exceeds e
        }
        if (!(lhs <= std::exp(k5 * k5 * lam * lam) * (1.0 + 1e-12))) return false;
    }
    return true;
}

struct MgfTableEntry {
    Family family;
    double shape;
    double constant;
};

#include "mgf_constants_table.inc"

}  // namespace

double calibrate_mgf_constant(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family == Family::zero) return 1.0;
    const double psi1 = psi_norm(spec, 1.0).value;
    double lo = 0.05;
    double hi = 1.0;
    while (!mgf_constant_passes(spec, psi1, hi)) {
        hi *= 2.0;
        if (hi > 1e6) throw NumericalError("calibrate_mgf_constant: no admissible constant");
    }
    if (mgf_constant_passes(spec, psi1, lo)) return lo;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (mgf_constant_passes(spec, psi1, mid) ? hi : lo) = mid;
    }
    return hi;
}

double mgf_constant(const DistributionSpec& spec) {
    for (const auto& e : kMgfConstantTable) {
        if (e.family == spec.family && (e.family != Family::symmetric_weibull || e.shape == spec.shape)) {
            return e.constant;
        }
    }
    return calibrate_mgf_constant(spec);
}

std::vector<MgfCheckRow> centered_mgf_check(const DistributionSpec& spec, const std::vector<double>& lambda_grid) {
    spec.validate();
    const double psi1 = spec.family == Family::zero ? 0.0 : psi_norm(spec, 1.0).value;
    const double k5 = mgf_constant(spec) * psi1;
    std::vector<MgfCheckRow> rows;
    rows.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        if (k5 > 0.0 && std::abs(lam) * k5 > 1.0 + 1e-12) {
            throw DomainError("centered_mgf_check: |lambda| exceeds 1/K5 = " + std::to_string(1.0 / k5));
        }
        rows.push_back({lam, mgf(spec, lam), std::exp(k5 * k5 * lam * lam)});
    }
    return rows;
}

VarianceCheck variance_vs_psi_check(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family == Family::zero) return {0.0, 0.0, 0.0};
    const double psi1 = psi_norm(spec, 1.0).value;
    const double var = variance(spec);
    return {var, psi1 * psi1, var / (psi1 * psi1)};
}

}  // namespace spectail
