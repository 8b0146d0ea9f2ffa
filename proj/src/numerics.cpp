#include "idbounds/numerics.hpp"

#include "idbounds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace idbounds {

namespace {

struct Panel {
    double a, b;
    double fa, fl, fm, fr, fb;
    double value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel make_panel(double a, double b, double fa, double fl, double fm, double fr, double fb) {
    double h = b - a;
    double coarse = h / 6.0 * (fa + 4.0 * fm + fb);
    double fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    double diff = fine - coarse;
    return {a, b, fa, fl, fm, fr, fb, fine + diff / 15.0, std::abs(diff) / 15.0};
}

} // namespace

double integrate(const RealFn& f, double a, double b, const QuadOptions& opt) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, opt);
    if (!std::isfinite(a) || !std::isfinite(b))
        fail(ErrorCode::InvalidArgument, "integrate needs finite limits");

    auto eval = [&](double x) {
        double v = f(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrand not finite at " << x;
            fail(ErrorCode::QuadratureFailure, os.str());
        }
        return v;
    };
    auto eval_end = [&](double x, double inward) {
        double v = f(x);
        if (std::isfinite(v)) return v;
        v = f(x + inward * std::ldexp(b - a, -40));
        return std::isfinite(v) ? v : 0.0;
    };

    // A handful of initial panels keeps narrow features from being missed.
    const int init = 16;
    std::vector<double> xs(4 * init + 1);
    const double h = (b - a) / (4.0 * init);
    for (int i = 0; i < 4 * init; ++i) xs[i] = a + h * i;
    xs[4 * init] = b;
    std::vector<double> fs(4 * init + 1);
    fs[0] = eval_end(a, 1.0);
    fs[4 * init] = eval_end(b, -1.0);
    for (int i = 1; i < 4 * init; ++i) fs[i] = eval(xs[i]);

    std::vector<Panel> heap;
    heap.reserve(1024);
    double total = 0.0, total_err = 0.0, frozen_err = 0.0, frozen_val = 0.0;
    for (int p = 0; p < init; ++p) {
        int j = 4 * p;
        Panel pn = make_panel(xs[j], xs[j + 4], fs[j], fs[j + 1], fs[j + 2], fs[j + 3], fs[j + 4]);
        total += pn.value;
        total_err += pn.err;
        heap.push_back(pn);
    }
    std::make_heap(heap.begin(), heap.end());

    std::size_t intervals = init;
    auto tol = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    int since_refresh = 0;
    while (total_err > tol()) {
        if (intervals >= opt.max_intervals || heap.empty()) {
            std::ostringstream os;
            os << "tolerance not reached on [" << a << ", " << b << "] after " << intervals
               << " subintervals (error estimate " << total_err << ", value " << total << ")";
            fail(ErrorCode::QuadratureFailure, os.str());
        }
        std::pop_heap(heap.begin(), heap.end());
        Panel p = heap.back();
        heap.pop_back();
        double m = 0.5 * (p.a + p.b);
        double ql = 0.5 * (p.a + m), qr = 0.5 * (m + p.b);
        if (!(ql > p.a && m > ql && qr > m && p.b > qr)) {
            // Cannot subdivide further in floating point.
            frozen_err += p.err;
            frozen_val += p.value;
            if (frozen_err > tol()) {
                std::ostringstream os;
                os << "unrefinable panel near " << m << " on [" << a << ", " << b << "]";
                fail(ErrorCode::QuadratureFailure, os.str());
            }
            continue;
        }
        double fll = eval(0.5 * (p.a + ql)), flr = eval(0.5 * (ql + m));
        double frl = eval(0.5 * (m + qr)), frr = eval(0.5 * (qr + p.b));
        Panel left = make_panel(p.a, m, p.fa, fll, p.fl, flr, p.fm);
        Panel right = make_panel(m, p.b, p.fm, frl, p.fr, frr, p.fb);
        total += left.value + right.value - p.value;
        total_err += left.err + right.err - p.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++intervals;
        if (++since_refresh == 8192) {
            // Re-sum to keep rounding drift out of the running totals.
            since_refresh = 0;
            double s = frozen_val, e = frozen_err;
            for (const Panel& q : heap) {
                s += q.value;
                e += q.err;
            }
            total = s;
            total_err = e;
        }
    }
    double s = frozen_val;
    std::vector<double> parts;
    parts.reserve(heap.size());
    for (const Panel& q : heap) parts.push_back(q.value);
    std::sort(parts.begin(), parts.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    for (double v : parts) s += v;
    return s;
}

double integrate_to_inf(const RealFn& f, double a, const QuadOptions& opt) {
    if (a < 0.0) fail(ErrorCode::InvalidArgument, "integrate_to_inf needs a >= 0");
    if (a == 0.0) return integrate(f, 0.0, 1.0, opt) + integrate_to_inf(f, 1.0, opt);
    auto g = [&](double u) {
        if (u <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        double y = a / u;
        if (!std::isfinite(y)) return std::numeric_limits<double>::quiet_NaN();
        double v = f(y);
        if (v == 0.0) return 0.0;
        return v * a / (u * u);
    };
    return integrate(g, 0.0, 1.0, opt);
}

double bisect(const std::function<bool(double)>& pred, double lo, double hi, double rel_tol,
              double abs_tol, int max_iter) {
    for (int i = 0; i < max_iter; ++i) {
        if (hi - lo <= std::max(abs_tol, rel_tol * std::abs(hi))) break;
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace idbounds
