#include "idbounds/verification.hpp"

#include "idbounds/errors.hpp"

#include "json.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace idbounds {

double cp_lower(std::size_t k, std::size_t n, double level) {
    if (k == 0) return 0.0;
    return boost::math::ibeta_inv(static_cast<double>(k), static_cast<double>(n - k + 1), 1.0 - level);
}

double cp_upper(std::size_t k, std::size_t n, double level) {
    if (k >= n) return 1.0;
    return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), level);
}

TailCurve empirical_tail(const std::vector<double>& values, const std::vector<double>& x_grid, double level) {
    if (values.empty()) fail(ErrorCode::EmptyBatch, "empirical_tail on an empty batch");
    if (!std::is_sorted(x_grid.begin(), x_grid.end()))
        fail(ErrorCode::InvalidArgument, "x grid must be increasing");
    std::vector<double> v(values);
    std::sort(v.begin(), v.end());
    TailCurve c;
    c.count = v.size();
    c.level = level;
    c.x_grid = x_grid;
    for (double x : x_grid) {
        auto k = static_cast<std::size_t>(v.end() - std::lower_bound(v.begin(), v.end(), x));
        c.exceed.push_back(k);
        c.p_hat.push_back(static_cast<double>(k) / static_cast<double>(c.count));
        c.ci_lo.push_back(cp_lower(k, c.count, level));
        c.ci_hi.push_back(cp_upper(k, c.count, level));
    }
    return c;
}

MedianEstimate empirical_median(const std::vector<double>& values, double level) {
    if (values.empty()) fail(ErrorCode::EmptyBatch, "empirical_median on an empty batch");
    std::vector<double> v(values);
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    MedianEstimate m;
    m.median = v[(n - 1) / 2];
    // largest l with P(Bin(n, 1/2) <= l - 1) <= (1 - level)/2; CI = [X_(l), X_(n+1-l)]
    boost::math::binomial_distribution<double> bin(static_cast<double>(n), 0.5);
    double tail = 0.5 * (1.0 - level);
    std::size_t lo = 0, hi = n / 2 + 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (boost::math::cdf(bin, static_cast<double>(mid - 1)) <= tail) lo = mid;
        else hi = mid;
    }
    if (lo == 0) {
        m.ci_lo = -kInf;
        m.ci_hi = kInf;
    } else {
        m.ci_lo = v[lo - 1];
        m.ci_hi = v[n - lo];
    }
    return m;
}

MeanEstimate empirical_mean(const std::vector<double>& values) {
    if (values.empty()) fail(ErrorCode::EmptyBatch, "empirical_mean on an empty batch");
    double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::violation: return "VIOLATION";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    case Verdict::out_of_range: return "OUT_OF_RANGE";
    case Verdict::not_audited: return "NOT_AUDITED";
    }
    return "?";
}

namespace {

struct Pass {
    std::vector<AuditPoint> points;
    int violations = 0;
    int audited = 0;
    Verdict overall = Verdict::pass;
};

Pass audit_pass(const TailCurve& c, const TailBound& b, double center, double shift, double min_p) {
    Pass out;
    bool lower = b.direction == Direction::lower;
    int window = 0, contradictions = 0;
    for (std::size_t i = 0; i < c.x_grid.size(); ++i) {
        AuditPoint p;
        p.x = c.x_grid[i];
        p.deviation = p.x - center - shift;
        p.p_hat = c.p_hat[i];
        p.ci_lo = c.ci_lo[i];
        p.ci_hi = c.ci_hi[i];
        if (b.empty() || !b.in_range(p.deviation) || !(p.deviation > 0.0)) {
            p.verdict = Verdict::out_of_range;
            out.points.push_back(p);
            continue;
        }
        BoundValue bv = b.evaluate(p.deviation);
        p.bound = bv.value;
        p.regime = bv.regime;
        p.vacuous = bv.vacuous;
        bool in_window = p.p_hat >= min_p && p.p_hat > 0.0;
        if (lower) in_window = in_window && p.deviation >= b.audit_lo;
        if (!in_window) {
            p.verdict = Verdict::not_audited;
            out.points.push_back(p);
            continue;
        }
        ++out.audited;
        if (!lower) {
            if (p.ci_lo > p.bound) p.verdict = Verdict::violation;
            else if (p.ci_hi <= p.bound) p.verdict = Verdict::pass;
            else p.verdict = Verdict::inconclusive;
            if (p.verdict == Verdict::violation) ++out.violations;
        } else {
            ++window;
            if (p.ci_hi < p.bound) {
                p.verdict = Verdict::violation;
                ++contradictions;
            } else if (p.ci_lo >= p.bound) p.verdict = Verdict::pass;
            else p.verdict = Verdict::inconclusive;
        }
        out.points.push_back(p);
    }
    if (!lower) {
        out.overall = out.violations > 0 ? Verdict::violation : Verdict::pass;
    } else {
        out.violations = contradictions;
        if (window == 0) out.overall = Verdict::inconclusive;
        else if (contradictions == window) out.overall = Verdict::violation;
        else out.overall = Verdict::pass;
    }
    return out;
}

} // namespace

VerificationReport audit_bound(const TailCurve& curve, const TailBound& bound, std::optional<double> center_estimate,
                               const AuditOptions& opt) {
    if (!center_estimate) {
        fail(ErrorCode::CenterMismatch,
             std::string("bound ") + bound.name + " needs a " + center_name(bound.center) + " estimate");
    }
    double shift = 0.0;
    if (bound.center == Center::shifted_mean) {
        shift = opt.shift ? *opt.shift : bound.shift;
        if (std::isnan(shift))
            fail(ErrorCode::CenterMismatch, "bound " + bound.name + " needs an estimate of its shift");
    }
    VerificationReport r;
    r.bound_name = bound.name;
    r.center = center_name(bound.center);
    r.direction = direction_name(bound.direction);
    r.center_estimate = *center_estimate;
    r.shift = shift;
    r.count = curve.count;
    Pass main = audit_pass(curve, bound, *center_estimate, shift, opt.min_p_hat);
    r.points = std::move(main.points);
    r.violations = main.violations;
    r.audited = main.audited;
    r.overall = main.overall;
    if (opt.center_se > 0.0 || opt.shift_se > 0.0) {
        for (int s : {-2, 2}) {
            double c = *center_estimate + s * opt.center_se;
            double sh = shift + s * opt.shift_se;
            Pass p = audit_pass(curve, bound, c, sh, opt.min_p_hat);
            r.sensitivity.push_back({c, sh, p.violations, p.overall});
        }
    }
    return r;
}

SlopeFit fit_log_slope(const TailCurve& c, double x_lo, double x_hi, SlopeMode mode) {
    boost::math::normal_distribution<double> nd;
    double z = boost::math::quantile(nd, c.level);
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < c.x_grid.size(); ++i) {
        double x = c.x_grid[i];
        if (x < x_lo || x > x_hi || !(c.p_hat[i] > 0.0)) continue;
        if (mode == SlopeMode::log_x && !(x > 0.0)) continue;
        double sd = (c.ci_hi[i] - c.ci_lo[i]) / (2.0 * z * c.p_hat[i]);
        if (!(sd > 0.0)) continue;
        xs.push_back(mode == SlopeMode::log_x ? std::log(x) : x);
        ys.push_back(std::log(c.p_hat[i]));
        ws.push_back(1.0 / (sd * sd));
    }
    if (xs.size() < 5) {
        std::ostringstream os;
        os << "only " << xs.size() << " usable tail points in [" << x_lo << ", " << x_hi << "]; need 5";
        fail(ErrorCode::InsufficientTail, os.str());
    }
    double W = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        W += ws[i];
        mx += ws[i] * xs[i];
        my += ws[i] * ys[i];
    }
    mx /= W;
    my /= W;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
        sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - f.intercept - f.slope * xs[i];
        rss += ws[i] * e * e;
    }
    // cumulative counts are correlated, so keep the larger of the two error models
    double se_model = std::sqrt(1.0 / sxx);
    double se_resid = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
    f.stderr_ = std::max(se_model, se_resid);
    f.points = static_cast<int>(xs.size());
    f.x_lo = x_lo;
    f.x_hi = x_hi;
    return f;
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) fail(ErrorCode::EmptyBatch, "KS test on an empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) fail(ErrorCode::EmptyBatch, "KS test on an empty sample");
    std::sort(a.begin(), a.end());
    double n = static_cast<double>(a.size()), d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double F = cdf(a[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    double ne = std::sqrt(n);
    return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    if (points < 1) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
    std::vector<double> g;
    if (points == 1) return {hi};
    for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
    return g;
}

std::string report_json(const VerificationReport& r, int indent) {
    nlohmann::json j;
    j["bound"] = r.bound_name;
    j["center"] = r.center;
    j["direction"] = r.direction;
    j["center_estimate"] = r.center_estimate;
    j["shift"] = r.shift;
    j["count"] = r.count;
    j["audited"] = r.audited;
    j["violations"] = r.violations;
    j["overall"] = verdict_name(r.overall);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"x", p.x},
                       {"deviation", p.deviation},
                       {"p_hat", p.p_hat},
                       {"ci_lo", p.ci_lo},
                       {"ci_hi", p.ci_hi},
                       {"bound", p.bound},
                       {"regime", p.regime},
                       {"vacuous", p.vacuous},
                       {"verdict", verdict_name(p.verdict)}});
    }
    j["points"] = pts;
    nlohmann::json sens = nlohmann::json::array();
    for (const auto& s : r.sensitivity)
        sens.push_back({{"center", s.center},
                        {"shift", s.shift},
                        {"violations", s.violations},
                        {"overall", verdict_name(s.overall)}});
    j["sensitivity"] = sens;
    return j.dump(indent);
}

void write_report_csv(const VerificationReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    out.precision(12);
    out << "x,p_hat,ci_lo,ci_hi,bound,verdict\n";
    for (const auto& p : r.points)
        out << p.deviation << "," << p.p_hat << "," << p.ci_lo << "," << p.ci_hi << "," << p.bound << ","
            << verdict_name(p.verdict) << "\n";
}

} // namespace idbounds
