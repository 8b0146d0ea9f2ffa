#pragma once

#include <cstddef>
#include <functional>

namespace idbounds {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    std::size_t max_intervals = std::size_t{1} << 20;
};

using RealFn = std::function<double(double)>;

// Globally adaptive Simpson rule. Throws QuadratureFailure when the budget is
// exhausted before the tolerance is met. Non-finite values at the two
// endpoints are treated as integrable singularities.
double integrate(const RealFn& f, double a, double b, const QuadOptions& opt = {});

// Integral over [a, inf). For a > 0 the substitution y = a/u maps the range
// onto (0, 1]; a == 0 is split at 1.
double integrate_to_inf(const RealFn& f, double a, const QuadOptions& opt = {});

// Bisection for an increasing predicate boundary: lo satisfies !pred, hi
// satisfies pred. Returns the final (lo, hi) midpoint.
double bisect(const std::function<bool(double)>& pred, double lo, double hi,
              double rel_tol = 1e-12, double abs_tol = 1e-15, int max_iter = 400);

} // namespace idbounds
