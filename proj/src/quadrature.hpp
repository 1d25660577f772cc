#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spectail/errors.hpp"

namespace spectail::detail {

inline constexpr double kQuadAbsTol = 1e-12;

// Adaptive Gauss-Kronrod on finite [a, b]; exp-sinh on [a, +inf), which also
// copes with the u^{1/shape} endpoint behaviour of the Weibull integrands.
// Non-finite results propagate as +inf so callers can treat them as divergence.
template <class F>
double integrate(F f, double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    double value;
    if (std::isinf(b)) {
        // non-const: this boost version declares the one-sided overload without const
        thread_local boost::math::quadrature::exp_sinh<double> engine;
        try {
            std::size_t levels = 0;
            value = engine.integrate([&](double u) { return f(a + u); }, 1e-13, &err, &l1, &levels);
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    } else {
        value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14, &err, &l1);
    }
    if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();
    if (err > std::max(kQuadAbsTol, 1e-10 * std::abs(value))) {
        throw NumericalError("quadrature did not converge (error estimate " + std::to_string(err) + ")");
    }
    return value;
}

}  // namespace spectail::detail
