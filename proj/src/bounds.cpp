#include "spectail/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "spectail/errors.hpp"

namespace spectail {

namespace {

double clip01(double p) { return std::clamp(p, 0.0, 1.0); }

void require_nonnegative_t(double t) {
    if (!(t >= 0.0)) throw DomainError("tail bounds need t >= 0");
}

}  // namespace

void BoundConstants::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"C", C},         {"C0", C0},         {"C1", C1}, {"C_diag", C_diag}, {"C1_diag", C1_diag},
        {"C_alpha", C_alpha}, {"C3_alpha", C3_alpha}, {"C4", C4}, {"C5", C5}, {"bernstein_c", bernstein_c}};
    for (const auto& [name, v] : fields) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError(std::string("bound constant ") + name + " must be finite and positive");
        }
    }
    if (C0 < 1.0) throw ConfigError("bound constant C0 must be >= 1");
    if (C4 < 1.0) throw ConfigError("bound constant C4 must be >= 1");
}

BoundConstants default_constants() {
    // `spectail calibrate --profile wigner --n 64 --trials 100000 --seed 1`
    // (Laplace entries, ψ₁-scale 1): 9 fit points, R² = 0.98913. The α-family
    // and diagonal constants reuse the same fit.
    BoundConstants c;
    c.C = 0.9180981892453907;
    c.C0 = 1.0;
    c.C1 = 3.0685508854598447;
    c.C_diag = c.C;
    c.C1_diag = c.C1;
    c.C_alpha = c.C;
    c.C3_alpha = c.C;
    c.C4 = c.C0;
    c.C5 = c.C1;
    c.bernstein_c = 1.0;
    c.source = ConstantsSource::default_table;
    c.ensemble_id = "wigner-n64-laplace-a1-s1";
    c.r_squared = 0.9891266271803741;
    c.fit_points = 9;
    return c;
}

void to_json(nlohmann::json& j, const BoundConstants& c) {
    j = nlohmann::json{{"C", c.C},
                       {"C0", c.C0},
                       {"C1", c.C1},
                       {"C_diag", c.C_diag},
                       {"C1_diag", c.C1_diag},
                       {"C_alpha", c.C_alpha},
                       {"C3_alpha", c.C3_alpha},
                       {"C4", c.C4},
                       {"C5", c.C5},
                       {"bernstein_c", c.bernstein_c},
                       {"provenance",
                        {{"source", c.source == ConstantsSource::calibrated ? "calibrated" : "default"},
                         {"ensemble", c.ensemble_id},
                         {"r_squared", c.r_squared},
                         {"fit_points", c.fit_points}}}};
}

void from_json(const nlohmann::json& j, BoundConstants& c) {
    if (!j.is_object()) throw ConfigError("bound constants must be a JSON object");
    c = default_constants();
    static const std::pair<const char*, double BoundConstants::*> fields[] = {
        {"C", &BoundConstants::C},           {"C0", &BoundConstants::C0},
        {"C1", &BoundConstants::C1},         {"C_diag", &BoundConstants::C_diag},
        {"C1_diag", &BoundConstants::C1_diag}, {"C_alpha", &BoundConstants::C_alpha},
        {"C3_alpha", &BoundConstants::C3_alpha}, {"C4", &BoundConstants::C4},
        {"C5", &BoundConstants::C5},         {"bernstein_c", &BoundConstants::bernstein_c}};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "provenance") continue;
        bool known = false;
        for (const auto& [name, member] : fields) {
            if (it.key() == name) {
                if (!it->is_number()) throw ConfigError(std::string("constant ") + name + " must be a number");
                c.*member = it->get<double>();
                known = true;
            }
        }
        if (!known) throw ConfigError("unknown bound constant '" + it.key() + "'");
    }
    if (auto p = j.find("provenance"); p != j.end()) {
        const std::string src = p->value("source", "default");
        if (src == "calibrated") {
            c.source = ConstantsSource::calibrated;
        } else if (src == "default") {
            c.source = ConstantsSource::default_table;
        } else {
            throw ConfigError("unknown constants source '" + src + "'");
        }
        c.ensemble_id = p->value("ensemble", std::string{});
        c.r_squared = p->value("r_squared", 0.0);
        c.fit_points = p->value("fit_points", 0);
    }
    c.validate();
}

BoundConstants read_constants_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open constants file " + path);
    try {
        return nlohmann::json::parse(in).get<BoundConstants>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed constants file " + path + ": " + e.what());
    }
}

void write_constants_file(const std::string& path, const BoundConstants& c) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write constants file " + path);
    out << nlohmann::json(c).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

double regime_exponent(double t, double sigma1) {
    const double r = t / sigma1;
    return std::min(r * r, r);
}

double thm11_threshold(const StructParams& p, const BoundConstants& c) {
    return c.C * (p.b + p.sigma2 * std::sqrt(static_cast<double>(p.n)));
}

double thm11_tail(double t, double sigma1, const BoundConstants& c) {
    require_nonnegative_t(t);
    if (sigma1 < 0.0) throw DomainError("sigma1 must be >= 0");
    if (sigma1 == 0.0) return t > 0.0 ? 0.0 : clip01(c.C0);
    return clip01(c.C0 * std::exp(-c.C1 * regime_exponent(t, sigma1)));
}

double thm31_threshold(double max_psi, int n, const BoundConstants& c) {
    if (n < 1) throw DomainError("n must be >= 1");
    return c.C_diag * max_psi * std::log(static_cast<double>(n));
}

double thm31_tail(double t, double max_psi, const BoundConstants& c) {
    require_nonnegative_t(t);
    if (max_psi < 0.0) throw DomainError("max_psi must be >= 0");
    if (max_psi == 0.0) return t > 0.0 ? 0.0 : 1.0;
    return clip01(std::exp(-c.C1_diag * regime_exponent(t, max_psi)));
}

double expectation_bound_diag(const std::vector<double>& scales) {
    std::vector<double> s = scales;
    std::sort(s.begin(), s.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        best = std::max(best, s[i] * std::log(static_cast<double>(i) + 2.0));
    }
    return best;
}

double thm5_threshold(const StructParams& p, const BoundConstants& c) {
    if (p.alpha < 1.0 || p.alpha > 2.0) throw DomainError("the ψ_α bounds cover 1 <= alpha <= 2 only");
    return c.C3_alpha * (p.b + p.sigma2 * std::sqrt(static_cast<double>(p.n)));
}

double thm5_diag_threshold(double max_psi, int n, double alpha, const BoundConstants& c) {
    if (alpha < 1.0 || alpha > 2.0) throw DomainError("the ψ_α bounds cover 1 <= alpha <= 2 only");
    if (n < 1) throw DomainError("n must be >= 1");
    return c.C_alpha * max_psi * std::pow(std::log(static_cast<double>(n)), 1.0 / alpha);
}

double thm5_tail(double t, double sigma1, double alpha, const BoundConstants& c) {
    if (alpha < 1.0 || alpha > 2.0) throw DomainError("the ψ_α bounds cover 1 <= alpha <= 2 only");
    require_nonnegative_t(t);
    if (sigma1 < 0.0) throw DomainError("sigma1 must be >= 0");
    if (sigma1 == 0.0) return t > 0.0 ? 0.0 : clip01(c.C4);
    return clip01(c.C4 * std::exp(-c.C5 * t / sigma1));
}

double bernstein_tail(const Eigen::VectorXd& a, double K, double t, const BoundConstants& c) {
    require_nonnegative_t(t);
    if (!(K > 0.0)) throw DomainError("bernstein_tail needs K > 0");
    const double l2 = a.norm();
    if (a.size() == 0 || l2 == 0.0) throw DomainError("bernstein_tail needs a nonzero coefficient vector");
    const double linf = a.cwiseAbs().maxCoeff();
    const double quad = t * t / (K * K * l2 * l2);
    const double lin = t / (K * linf);
    return clip01(std::exp(-c.bernstein_c * std::min(quad, lin)));
}

LiteratureBounds literature_bounds(const Eigen::MatrixXd& b) {
    const Eigen::Index n = b.rows();
    if (n == 0 || b.cols() != n) throw ValidationError("literature_bounds needs a nonempty square profile");
    if ((b.array() < 0.0).any()) throw ValidationError("literature_bounds needs a nonnegative profile");
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > 0.0) {
        throw ValidationError("literature_bounds needs a symmetric profile");
    }
    const double maxb = b.maxCoeff();
    const double row_l2 = b.rowwise().norm().maxCoeff();
    const double logn = std::log(static_cast<double>(n));
    LiteratureBounds out;
    out.vershynin = maxb * std::sqrt(static_cast<double>(n));
    out.bvh = row_l2 + std::sqrt(logn) * maxb;
    std::vector<double> row_max(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) row_max[static_cast<std::size_t>(i)] = b.row(i).maxCoeff();
    std::sort(row_max.begin(), row_max.end(), std::greater<>());
    double tail = 0.0;
    for (std::size_t i = 0; i < row_max.size(); ++i) {
        tail = std::max(tail, row_max[i] * std::sqrt(std::log(static_cast<double>(i) + 1.0)));
    }
    out.lvy = row_l2 + tail;
    return out;
}

BoundConstants calibrate_constants(const TailCurve& curve, const StructParams& params) {
    const double scale = params.b + params.sigma2 * std::sqrt(static_cast<double>(params.n));
    if (!(scale > 0.0)) throw CalibrationError("calibration needs b + sigma2*sqrt(n) > 0");
    if (!(params.sigma1 > 0.0)) throw CalibrationError("calibration needs sigma1 > 0");
    if (!(curve.median_norm > 0.0)) throw CalibrationError("calibration needs a positive median norm");

    std::vector<std::pair<double, double>> pts;
    for (const TailRow& r : curve.rows) {
        if (r.p_hat > kCalibrationPmin && r.p_hat < kCalibrationPmax && r.ci_high > 0.0) {
            pts.emplace_back(regime_exponent(r.t, params.sigma1), -std::log(r.ci_high));
        }
    }
    if (static_cast<int>(pts.size()) < kCalibrationMinPoints) {
        throw CalibrationError("calibration needs at least " + std::to_string(kCalibrationMinPoints) +
                               " grid points with p_hat in (1e-4, 0.5), got " + std::to_string(pts.size()));
    }
    // Fixed summation order makes the fit independent of the row order.
    std::sort(pts.begin(), pts.end());
    const double k = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0.0)) throw CalibrationError("calibration points share a single exponent value");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    if (!(slope > 0.0)) throw CalibrationError("fitted decay rate is not positive");

    BoundConstants c = default_constants();
    c.C = curve.median_norm / scale;
    c.C1 = slope;
    c.C0 = std::max(1.0, std::exp(-intercept));
    // One ensemble cannot separate the family-specific constants; they share the fit.
    c.C_diag = c.C;
    c.C1_diag = c.C1;
    c.C_alpha = c.C;
    c.C3_alpha = c.C;
    c.C4 = c.C0;
    c.C5 = c.C1;
    c.source = ConstantsSource::calibrated;
    c.ensemble_id = curve.profile_id;
    c.fit_points = static_cast<int>(pts.size());
    c.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return c;
}

}  // namespace spectail
