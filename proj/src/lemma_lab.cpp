#include "spectail/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>

#include "spectail/errors.hpp"
#include "spectail/rng.hpp"

namespace spectail {

namespace {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// 1 − K(x) for the Kolmogorov distribution.
double kolmogorov_survival(double x) {
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

}  // namespace

RenyiTransform renyi_transform(const std::vector<double>& samples) {
    if (samples.empty()) throw ValidationError("renyi_transform needs at least one sample");
    for (double x : samples) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("renyi_transform needs nonnegative finite samples");
    }
    RenyiTransform r;
    r.order_stats = samples;
    std::sort(r.order_stats.begin(), r.order_stats.end());
    const std::size_t n = samples.size();
    r.T.resize(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r.T[i] = 2.0 * static_cast<double>(n - i) * (r.order_stats[i] - prev);
        prev = r.order_stats[i];
    }
    return r;
}

double renyi_reconstruct(const std::vector<double>& T) {
    const std::size_t n = T.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += T[i] / (2.0 * static_cast<double>(n - i));
    return s;
}

double kolmogorov_critical(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("KS level must lie in (0, 1)");
    double lo = 0.1, hi = 5.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_survival(mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

KsResult chi2_gof(std::vector<double> samples, double level) {
    if (samples.size() < 100) {
        throw DomainError("chi2_gof needs at least 100 samples, got " + std::to_string(samples.size()));
    }
    std::sort(samples.begin(), samples.end());
    KsResult r;
    r.N = samples.size();
    const double N = static_cast<double>(r.N);
    for (std::size_t i = 0; i < r.N; ++i) {
        const double F = samples[i] <= 0.0 ? 0.0 : -std::expm1(-samples[i] / 2.0);
        r.statistic = std::max({r.statistic, (static_cast<double>(i) + 1.0) / N - F, F - static_cast<double>(i) / N});
    }
    r.critical = kolmogorov_critical(level) / std::sqrt(N);
    r.passed = r.statistic <= r.critical;
    return r;
}

double harmonic(int n) {
    if (n < 1) throw DomainError("harmonic needs n >= 1");
    double s = 0.0;
    for (int i = n; i >= 1; --i) s += 1.0 / i;
    return s;
}

std::vector<double> decreasing_rearrangement(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

MeanEstimate mean_estimate(const std::vector<double>& values) {
    MeanEstimate m;
    m.trials = static_cast<long long>(values.size());
    if (values.empty()) return m;
    const double N = static_cast<double>(values.size());
    m.mean = pairwise_sum(values) / N;
    if (values.size() > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - m.mean) * (values[i] - m.mean);
        m.se = std::sqrt(pairwise_sum(dev) / (N - 1.0) / N);
    }
    m.ci_low = m.mean - 1.96 * m.se;
    m.ci_high = m.mean + 1.96 * m.se;
    return m;
}

MeanEstimate empirical_weighted_max(const std::vector<double>& weights, const DistributionSpec& law,
                                    long long trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("empirical_weighted_max needs trials >= 1");
    for (double c : weights) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("weights must be nonnegative and finite");
    }
    law.validate();
    std::vector<double> values(static_cast<std::size_t>(trials), 0.0);
    const long long n = static_cast<long long>(weights.size());
#pragma omp parallel for schedule(static) if (trials * n >= 100000)
    for (long long k = 0; k < trials; ++k) {
        RandomStream s(seed, StreamTag::lemma_trial, static_cast<std::uint32_t>(k),
                       static_cast<std::uint32_t>(static_cast<std::uint64_t>(k) >> 32));
        double best = 0.0;
        for (long long i = 0; i < n; ++i) {
            const double x = std::abs(sample(law, s));
            best = std::max(best, weights[static_cast<std::size_t>(i)] * x);
        }
        values[static_cast<std::size_t>(k)] = best;
    }
    return mean_estimate(values);
}

double maxima_law_scale(const std::vector<double>& weights, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
    const std::vector<double> c = decreasing_rearrangement(weights);
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        best = std::max(best, c[i] * std::pow(std::log(static_cast<double>(i) + 2.0), 1.0 / alpha));
    }
    return best;
}

MaximaRatio maxima_law_ratio(const std::vector<double>& weights, const DistributionSpec& law, double alpha,
                             long long trials, std::uint64_t seed) {
    MaximaRatio r;
    r.scale = maxima_law_scale(weights, alpha);
    if (!(r.scale > 0.0)) throw DomainError("maxima_law_ratio needs a nonzero weight");
    r.estimate = empirical_weighted_max(weights, law, trials, seed);
    r.ratio = r.estimate.mean / r.scale;
    r.ratio_se = r.estimate.se / r.scale;
    return r;
}

std::string_view weight_pattern_name(WeightPattern p) {
    switch (p) {
        case WeightPattern::constant: return "constant";
        case WeightPattern::geometric: return "geometric";
        case WeightPattern::spike: return "spike";
        case WeightPattern::linear: return "linear";
    }
    return "constant";
}

WeightPattern weight_pattern_from_name(std::string_view name) {
    for (WeightPattern p : {WeightPattern::constant, WeightPattern::geometric, WeightPattern::spike,
                            WeightPattern::linear}) {
        if (name == weight_pattern_name(p)) return p;
    }
    throw ConfigError("unknown weight pattern '" + std::string(name) + "'");
}

std::vector<double> make_weights(WeightPattern p, int n) {
    if (n < 1) throw DomainError("weight vectors need n >= 1");
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        switch (p) {
            case WeightPattern::constant: w[static_cast<std::size_t>(i)] = 1.0; break;
            case WeightPattern::geometric: w[static_cast<std::size_t>(i)] = std::ldexp(1.0, -i); break;
            case WeightPattern::spike: w[static_cast<std::size_t>(i)] = i == 0 ? 1.0 : 0.0; break;
            case WeightPattern::linear: w[static_cast<std::size_t>(i)] = (i + 1.0) / n; break;
        }
    }
    return w;
}

std::vector<ProductMomentRow> gaussian_product_moment_check(int p_max) {
    if (p_max < 1 || p_max > 40) throw DomainError("gaussian_product_moment_check needs 1 <= p_max <= 40");
    std::vector<ProductMomentRow> rows;
    for (int p = 1; p <= p_max; ++p) {
        // log E|g|^p = (p/2) log 2 + log Γ((p+1)/2) − (1/2) log π
        const double log_abs_moment =
            0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi);
        const double log_ratio = 2.0 * log_abs_moment / p - std::lgamma(p + 1.0) / p;
        rows.push_back({p, std::exp(log_ratio)});
    }
    return rows;
}

RenyiStudy renyi_study(int n, long long trials, std::uint64_t seed, double level) {
    if (n < 1) throw DomainError("renyi_study needs n >= 1");
    if (trials < 2) throw DomainError("renyi_study needs trials >= 2");
    const std::size_t nn = static_cast<std::size_t>(n);
    std::vector<double> pooled(static_cast<std::size_t>(trials) * nn);
    std::vector<double> maxima(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < trials; ++k) {
        RandomStream s(seed, StreamTag::lemma_trial, static_cast<std::uint32_t>(k),
                       static_cast<std::uint32_t>(static_cast<std::uint64_t>(k) >> 32), 1u);
        std::vector<double> draws(nn);
        for (double& x : draws) x = s.exponential();
        const RenyiTransform t = renyi_transform(draws);
        std::copy(t.T.begin(), t.T.end(), pooled.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * nn));
        maxima[static_cast<std::size_t>(k)] = t.order_stats.back();
    }

    RenyiStudy r;
    r.n = n;
    r.trials = trials;
    r.harmonic_n = harmonic(n);
    r.max_stat = mean_estimate(maxima);

    const double N = static_cast<double>(pooled.size());
    const double mean = pairwise_sum(pooled) / N;
    std::vector<double> c2(pooled.size()), c4(pooled.size());
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        const double d = pooled[i] - mean;
        c2[i] = d * d;
        c4[i] = d * d * d * d;
    }
    const double m2 = pairwise_sum(c2) / N;
    const double m4 = pairwise_sum(c4) / N;
    r.pooled_mean = mean;
    r.pooled_variance = m2 * N / (N - 1.0);
    r.pooled_mean_se = std::sqrt(r.pooled_variance / N);
    r.pooled_variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / N);

    std::vector<double> d2(maxima.size()), d3(maxima.size());
    for (std::size_t i = 0; i < maxima.size(); ++i) {
        const double d = maxima[i] - r.max_stat.mean;
        d2[i] = d * d;
        d3[i] = d * d * d;
    }
    const double M = static_cast<double>(maxima.size());
    const double v = pairwise_sum(d2) / M;
    r.max_skewness = v > 0.0 ? (pairwise_sum(d3) / M) / std::pow(v, 1.5) : 0.0;

    r.ks = chi2_gof(std::move(pooled), level);
    return r;
}

}  // namespace spectail
