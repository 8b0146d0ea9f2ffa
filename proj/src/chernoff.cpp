#include "idbounds/chernoff.hpp"

#include "idbounds/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <sstream>

namespace idbounds {

const char* center_name(Center c) {
    switch (c) {
    case Center::mean: return "mean";
    case Center::shifted_mean: return "shifted_mean";
    case Center::median: return "median";
    }
    return "?";
}

const char* direction_name(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

bool TailBound::in_range(double x) const {
    if (empty()) return false;
    bool above = lo_closed ? x >= valid_lo : x > valid_lo;
    return above && x < valid_hi;
}

BoundValue TailBound::evaluate(double x) const {
    if (empty()) {
        std::ostringstream os;
        os << name << ": validity range [" << valid_lo << ", " << valid_hi << "] is empty";
        fail(ErrorCode::EmptyRange, os.str());
    }
    if (!in_range(x)) {
        std::ostringstream os;
        os << name << ": x=" << x << " outside validity range (" << valid_lo << ", " << valid_hi << ")";
        fail(ErrorCode::OutOfRange, os.str());
    }
    return fn(x);
}

BoundValue clamp_bound(double raw, std::string regime) {
    BoundValue v;
    v.raw = raw;
    v.regime = std::move(regime);
    if (!(raw <= 1.0)) {
        v.value = 1.0;
        v.vacuous = true;
    } else {
        v.value = std::max(raw, std::numeric_limits<double>::denorm_min());
    }
    return v;
}

double invert_h(const HFunction& h, double s, const EngineOptions& opt) {
    if (!(s > 0.0)) fail(ErrorCode::OutOfRange, "invert_h needs s > 0");
    if (s >= h.h_sup) {
        std::ostringstream os;
        os << "invert_h: s=" << s << " not below h_sup=" << h.h_sup;
        fail(ErrorCode::OutOfRange, os.str());
    }
    auto value = [&](double t) {
        double v = h(t);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "invert_h: h(" << t << ") is not finite inside [0, t_end)";
            fail(ErrorCode::NonMonotone, os.str());
        }
        return v;
    };
    auto nonmonotone = [&](double t1, double t2) {
        std::ostringstream os;
        os << "invert_h: h decreases between t=" << t1 << " and t=" << t2;
        fail(ErrorCode::NonMonotone, os.str());
    };

    // Bracket by factors of 4 from t = 1, then refine with TOMS 748.
    double t = std::isinf(h.t_end) ? 1.0 : std::min(1.0, 0.5 * h.t_end);
    double ht = value(t);
    double lo = 0.0, h_lo = 0.0, hi, h_hi;
    if (ht >= s) {
        hi = t;
        h_hi = ht;
        while (hi > 1e-300) {
            double tl = 0.25 * hi;
            double hl = value(tl);
            if (hl > h_hi + opt.monotone_slack) nonmonotone(tl, hi);
            if (hl < s) {
                lo = tl;
                h_lo = hl;
                break;
            }
            hi = tl;
            h_hi = hl;
        }
    } else {
        lo = t;
        h_lo = ht;
        for (;;) {
            double next;
            if (std::isinf(h.t_end))
                next = 4.0 * lo;
            else
                next = (4.0 * lo < h.t_end) ? 4.0 * lo : lo + 0.5 * (h.t_end - lo);
            if (!(next > lo) || next >= h.t_end || !std::isfinite(next)) {
                std::ostringstream os;
                os << "invert_h: h never reaches s=" << s << " before t_end=" << h.t_end;
                fail(ErrorCode::OutOfRange, os.str());
            }
            double hn = value(next);
            if (hn < h_lo - opt.monotone_slack) nonmonotone(lo, next);
            if (hn >= s) {
                hi = next;
                h_hi = hn;
                break;
            }
            lo = next;
            h_lo = hn;
        }
    }
    if (h_hi == s) return hi;

    const double b_lo = lo, b_hi = hi, v_lo = h_lo, v_hi = h_hi;
    auto f = [&](double u) {
        double v = value(u);
        if (v < v_lo - opt.monotone_slack) nonmonotone(b_lo, u);
        if (v > v_hi + opt.monotone_slack) nonmonotone(u, b_hi);
        return v - s;
    };
    auto done = [&](double a, double b) {
        return b - a <= (a == 0.0 ? opt.invert_abs_tol : opt.invert_rel_tol * b);
    };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, h_lo - s, h_hi - s, done, iters);
    return 0.5 * (r.first + r.second);
}

double entropy_integral(const HFunction& h, double x, const EngineOptions& opt) {
    if (x == 0.0) return 0.0;
    if (!(x > 0.0)) fail(ErrorCode::OutOfRange, "entropy_integral needs x > 0");
    if (x >= h.h_sup) {
        std::ostringstream os;
        os << "entropy_integral: x=" << x << " not below h_sup=" << h.h_sup;
        fail(ErrorCode::OutOfRange, os.str());
    }
    auto inv = [&](double s) { return s > 0.0 ? invert_h(h, s, opt) : 0.0; };
    return integrate(inv, 0.0, x, opt.quad);
}

ChernoffMin chernoff_min(const HFunction& h, double x, const EngineOptions& opt) {
    if (!(x > 0.0)) fail(ErrorCode::OutOfRange, "chernoff_min needs x > 0");
    ChernoffMin r;
    if (x < h.h_sup) {
        double t = invert_h(h, x, opt);
        r.argmin = t;
        r.value = integrate(h.eval, 0.0, t, opt.quad) - t * x;
        if (r.value > 0.0) r.value = 0.0;
        return r;
    }
    if (std::isinf(h.t_end)) {
        r.value = -kInf;
        r.argmin = kInf;
        r.divergent = true;
        return r;
    }
    r.argmin = h.t_end;
    r.value = integrate(h.eval, 0.0, h.t_end, opt.quad) - h.t_end * x;
    return r;
}

TailBound tail_bound_from_h(const HFunction& h, const EngineOptions& opt) {
    TailBound b;
    b.name = h.label.empty() ? "engine" : "engine:" + h.label;
    b.center = Center::mean;
    b.direction = Direction::upper;
    b.valid_lo = 0.0;
    b.valid_hi = h.h_sup;
    b.fn = [h, opt](double x) { return clamp_bound(std::exp(-entropy_integral(h, x, opt)), "engine"); };
    return b;
}

} // namespace idbounds
