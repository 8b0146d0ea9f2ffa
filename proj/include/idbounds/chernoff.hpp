#pragma once

#include "idbounds/numerics.hpp"

#include <functional>
#include <limits>
#include <string>

namespace idbounds {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Nondecreasing h on [0, t_end) with h(0) = 0; h_sup is the left limit at t_end.
struct HFunction {
    std::function<double(double)> eval;
    double t_end = kInf;
    double h_sup = kInf;
    std::string label;

    double operator()(double t) const { return eval(t); }
};

enum class Center { mean, shifted_mean, median };
enum class Direction { upper, lower };
enum class BoundStatus { ok, empty_range };

const char* center_name(Center c);
const char* direction_name(Direction d);

struct BoundValue {
    double value = 1.0;   // clamped to (0, 1]
    double raw = 1.0;     // before clamping
    bool vacuous = false; // raw > 1
    std::string regime;
};

// A probability bound on deviations x beyond the center (plus `shift` for
// shifted_mean bounds), valid on the open interval (valid_lo, valid_hi)
// unless lo_closed is set.
struct TailBound {
    std::string name;
    Center center = Center::mean;
    Direction direction = Direction::upper;
    double valid_lo = 0.0;
    double valid_hi = kInf;
    bool lo_closed = false;
    double shift = 0.0;      // NaN when it depends on an unestimated mean
    double audit_lo = 0.0;   // lower bounds are audited only beyond this point
    BoundStatus status = BoundStatus::ok;
    std::function<BoundValue(double)> fn;

    bool in_range(double x) const;
    bool empty() const { return status == BoundStatus::empty_range; }
    // Throws OutOfRange outside the validity interval, EmptyRange for empty bounds.
    BoundValue evaluate(double x) const;
    double operator()(double x) const { return evaluate(x).value; }
};

// Wrap a raw (unclamped) value into a BoundValue with vacuity handling.
BoundValue clamp_bound(double raw, std::string regime = {});

struct EngineOptions {
    double invert_rel_tol = 1e-12;
    double invert_abs_tol = 1e-15;
    double monotone_slack = 1e-9;
    QuadOptions quad{};
};

double invert_h(const HFunction& h, double s, const EngineOptions& opt = {});

double entropy_integral(const HFunction& h, double x, const EngineOptions& opt = {});

struct ChernoffMin {
    double value = 0.0;   // -inf when divergent
    double argmin = 0.0;  // t attaining the minimum (t_end when at the boundary)
    bool divergent = false;
};

ChernoffMin chernoff_min(const HFunction& h, double x, const EngineOptions& opt = {});

TailBound tail_bound_from_h(const HFunction& h, const EngineOptions& opt = {});

} // namespace idbounds
