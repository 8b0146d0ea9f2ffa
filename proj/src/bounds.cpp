#include "idbounds/bounds.hpp"

#include "idbounds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace idbounds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Smallest R with beta(R) >= y for a nondecreasing beta.
double generalized_inverse(const std::function<double(double)>& f, double y) {
    double hi = 1.0;
    while (f(hi) < y) {
        hi *= 2.0;
        if (hi > 1e300) fail(ErrorCode::OutOfRange, "function never reaches the requested level");
    }
    double lo = 0.5 * hi;
    while (lo > 1e-300 && f(lo) >= y) {
        hi = lo;
        lo *= 0.5;
    }
    if (lo <= 1e-300) return hi;
    return bisect([&](double R) { return f(R) >= y; }, lo, hi, 1e-14, 0.0);
}

double sum_of_squares(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return s;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be positive and finite (got " << v << ")";
        fail(ErrorCode::InvalidProfile, os.str());
    }
}

} // namespace

double QuadraticSpec::sum_f2() const {
    double s = 0.0;
    for (double v : f2_norms) s += v;
    return s;
}

QuadraticSpec make_quadratic_spec(std::vector<std::vector<double>> eigs, std::vector<double> remainder_sq) {
    if (eigs.empty()) fail(ErrorCode::EmptySpectrum, "quadratic spec needs at least one component");
    if (remainder_sq.empty()) remainder_sq.assign(eigs.size(), 0.0);
    if (remainder_sq.size() != eigs.size())
        fail(ErrorCode::InvalidArgument, "remainder list must match the number of components");
    QuadraticSpec s;
    s.eigs = std::move(eigs);
    s.remainder_sq = std::move(remainder_sq);
    for (std::size_t i = 0; i < s.eigs.size(); ++i) {
        double ai = spectral_a(s.eigs[i]), api = spectral_a_plus(s.eigs[i]);
        s.a_i.push_back(ai);
        s.a_plus_i.push_back(api);
        s.a_max = std::max(s.a_max, ai);
        s.a_plus = std::max(s.a_plus, api);
        s.a_minus = std::max(s.a_minus, spectral_a_minus(s.eigs[i]));
        s.f2_norms.push_back(0.25 * (sum_of_squares(s.eigs[i]) + s.remainder_sq[i]));
    }
    if (!(s.a_max > 0.0)) fail(ErrorCode::EmptySpectrum, "all eigenvalues vanish");
    return s;
}

QuadraticSpec make_quadratic_spec(const EigenGenerator& gen, int N, int n_components, SumSqConvention convention) {
    if (n_components < 1) fail(ErrorCode::InvalidArgument, "need at least one component");
    auto eigs = generate_eigs(gen, N);
    double rem = eig_sum_sq_remainder(gen, N);
    QuadraticSpec s = make_quadratic_spec(std::vector<std::vector<double>>(n_components, eigs),
                                          std::vector<double>(n_components, rem));
    s.convention = convention;
    if (convention == SumSqConvention::literal)
        for (double& f : s.f2_norms) f = 0.25 * eig_sum_sq_literal(gen);
    return s;
}

double poisson_phi(double u) {
    if (std::abs(u) < 1e-3) {
        // sum_{n>=2} (-1)^n u^n / (n(n-1))
        double term = u * u, s = 0.0;
        for (int n = 2; n <= 9; ++n) {
            s += ((n % 2 == 0) ? 1.0 : -1.0) * term / (n * (n - 1.0));
            term *= u;
        }
        return s;
    }
    if (u <= -1.0) return u == -1.0 ? 1.0 : kNaN;
    return (1.0 + u) * std::log1p(u) - u;
}

TailBound dev_nico_bound(double K, double alpha2) {
    if (!(alpha2 > 0.0)) fail(ErrorCode::InvalidProfile, "dev_nico_bound needs alpha2 > 0");
    TailBound b;
    std::ostringstream os;
    os << "dev_nico(K=" << K << ",alpha2=" << alpha2 << ")";
    b.name = os.str();
    b.center = Center::mean;
    b.valid_hi = K < 0.0 ? -alpha2 / K : kInf;
    if (K == 0.0) {
        b.fn = [alpha2](double x) { return clamp_bound(std::exp(-x * x / (2.0 * alpha2)), "gaussian"); };
    } else {
        b.fn = [K, alpha2](double x) {
            return clamp_bound(std::exp(-(alpha2 / (K * K)) * poisson_phi(x * K / alpha2)), "poisson");
        };
    }
    return b;
}

HFunction dev_nico_h(double K, double alpha2) {
    if (!(alpha2 > 0.0)) fail(ErrorCode::InvalidProfile, "dev_nico_h needs alpha2 > 0");
    HFunction h;
    h.label = "dev_nico";
    if (K == 0.0) {
        h.eval = [alpha2](double t) { return alpha2 * t; };
    } else {
        h.eval = [K, alpha2](double t) { return alpha2 * std::expm1(t * K) / K; };
        if (K < 0.0) h.h_sup = -alpha2 / K;
    }
    return h;
}

HFunction product_h(const FunctionalProfile& profile, const std::vector<LevyModel>& models, ProductMode mode,
                    double truncation) {
    if (models.empty()) fail(ErrorCode::InvalidArgument, "product_h needs at least one model");
    auto model_at = [&models](std::size_t i) -> const LevyModel& { return models.size() == 1 ? models[0] : models[i]; };
    HFunction h;
    h.h_sup = kInf;
    switch (mode) {
    case ProductMode::shared_beta: {
        if (profile.beta.empty() || !(profile.beta[0] > 0.0))
            fail(ErrorCode::InvalidProfile, "shared_beta needs beta > 0");
        double beta = profile.beta[0], a2 = profile.alpha2;
        LevyModel m = models[0];
        h.label = "product_h:shared_beta";
        h.t_end = exp_abscissa(m, truncation) / beta;
        h.eval = [=](double t) { return (a2 / beta) * exp_weighted_moment(m, 1, t * beta, truncation); };
        break;
    }
    case ProductMode::per_component: {
        std::size_t n = profile.beta.size();
        if (n == 0) fail(ErrorCode::InvalidProfile, "per_component needs beta entries");
        if (models.size() != 1 && models.size() != n)
            fail(ErrorCode::InvalidArgument, "per_component needs one model per component");
        std::vector<LevyModel> ms;
        std::vector<double> bs;
        double t_end = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (profile.beta[i] < 0.0) fail(ErrorCode::InvalidProfile, "beta entries must be >= 0");
            if (profile.beta[i] == 0.0) continue;
            ms.push_back(model_at(i));
            bs.push_back(profile.beta[i]);
            t_end = std::min(t_end, exp_abscissa(model_at(i), truncation) / profile.beta[i]);
        }
        h.label = "product_h:per_component";
        h.t_end = t_end;
        h.eval = [ms, bs, truncation](double t) {
            double v = 0.0;
            for (std::size_t i = 0; i < ms.size(); ++i) v += bs[i] * exp_weighted_moment(ms[i], 1, t * bs[i], truncation);
            return v;
        };
        break;
    }
    case ProductMode::supremum: {
        std::size_t n = std::max<std::size_t>(static_cast<std::size_t>(profile.n), models.size());
        std::vector<LevyModel> ms;
        double t_end = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            ms.push_back(model_at(i));
            t_end = std::min(t_end, exp_abscissa_positive(model_at(i), truncation));
        }
        h.label = "product_h:supremum";
        h.t_end = t_end;
        h.eval = [ms, truncation](double t) {
            double v = 0.0;
            for (const auto& m : ms) v += exp_weighted_moment_positive(m, 1, t, truncation);
            return v;
        };
        break;
    }
    }
    return h;
}

HFunction dimension_free_h(const DimFreeInput& in) {
    if (!in.mean_norm) fail(ErrorCode::MissingEstimate, "dimension_free_bound needs mean_norm");
    if (!(*in.mean_norm > 0.0)) fail(ErrorCode::InvalidProfile, "mean_norm must be positive");
    std::size_t n = in.beta.size();
    if (n == 0) fail(ErrorCode::InvalidProfile, "dimension_free_bound needs beta entries");
    if (in.models.size() != 1 && in.models.size() != n)
        fail(ErrorCode::InvalidArgument, "need one model per component or a shared model");
    std::vector<LevyModel> ms;
    std::vector<double> bs;
    double t_end = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const LevyModel& m = in.models.size() == 1 ? in.models[0] : in.models[i];
        if (in.beta[i] < 0.0) fail(ErrorCode::InvalidProfile, "beta entries must be >= 0");
        if (in.beta[i] == 0.0) continue;
        ms.push_back(m);
        bs.push_back(in.beta[i]);
        t_end = std::min(t_end, exp_abscissa(m, in.truncation) / in.beta[i]);
    }
    double coef = 2.0 * static_cast<double>(n) / (*in.mean_norm * *in.mean_norm);
    double R = in.truncation;
    HFunction h;
    h.label = "dimension_free";
    h.t_end = t_end;
    h.eval = [ms, bs, coef, R](double t) {
        double m1 = 0.0, m3 = 0.0;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            m1 = std::max(m1, bs[i] * exp_weighted_moment(ms[i], 1, t * bs[i], R));
            m3 = std::max(m3, bs[i] * bs[i] * bs[i] * exp_weighted_moment(ms[i], 3, t * bs[i], R));
        }
        return 8.0 * m1 + coef * m3;
    };
    return h;
}

TailBound dimension_free_bound(const DimFreeInput& in, DimFreeMode mode) {
    HFunction h = dimension_free_h(in);
    TailBound b;
    b.center = Center::shifted_mean;
    if (mode == DimFreeMode::lipschitz) {
        double c = in.lip_c;
        require_positive(c, "lip_c");
        b.name = "dimension_free:lipschitz";
        b.shift = in.sum_var ? c * std::sqrt(2.0 * *in.sum_var) : kNaN;
        b.valid_hi = c * h.h_sup;
        b.fn = [h, c](double y) { return clamp_bound(std::exp(-entropy_integral(h, y / c)), "engine"); };
    } else {
        b.name = "dimension_free:norm";
        b.shift = 2.0 * *in.mean_norm;
        b.valid_hi = h.h_sup;
        b.fn = [h](double x) { return clamp_bound(std::exp(-entropy_integral(h, x)), "engine"); };
    }
    return b;
}

double bounded_support_alpha2(double beta, double R, double second_moment, double mean_abs_f1) {
    require_positive(beta, "beta");
    require_positive(R, "R");
    require_positive(second_moment, "second_moment");
    require_positive(mean_abs_f1, "mean_abs_f1");
    return (8.0 * beta * beta + 2.0 * std::pow(beta, 5) * R * R / (mean_abs_f1 * mean_abs_f1)) * second_moment;
}

TailBound bounded_support_bound_from_alpha2(double beta, double R, double alpha2) {
    require_positive(beta, "beta");
    require_positive(R, "R");
    require_positive(alpha2, "alpha2");
    TailBound b = dev_nico_bound(beta * R, alpha2);
    std::ostringstream os;
    os << "bounded_support_norm(beta=" << beta << ",R=" << R << ",alpha2=" << alpha2 << ")";
    b.name = os.str();
    b.center = Center::shifted_mean;
    b.shift = kNaN;
    return b;
}

TailBound bounded_support_norm_bound(double beta, double R, double second_moment, double mean_abs_f1) {
    TailBound b = bounded_support_bound_from_alpha2(beta, R, bounded_support_alpha2(beta, R, second_moment, mean_abs_f1));
    // shift is twice the mean Euclidean norm, estimated by the caller
    return b;
}

HFunction quad_wiener_h(const QuadraticSpec& spec, double lip_c, QuadTarget target) {
    require_positive(lip_c, "lip_c");
    double c = target == QuadTarget::sup ? 1.0 : lip_c;
    struct Term {
        std::vector<double> a;
        double rem;
        double rem_rate;
    };
    std::vector<Term> terms;
    for (int i = 0; i < spec.n(); ++i) {
        Term t;
        double amin = kInf;
        for (double a : spec.eigs[i]) {
            if (target == QuadTarget::sup && !(a > 0.0)) continue;
            if (a == 0.0) continue;
            t.a.push_back(a);
            amin = std::min(amin, std::abs(a));
        }
        t.rem = spec.remainder_sq[i];
        t.rem_rate = std::isfinite(amin) ? amin : 0.0;
        if (t.a.empty()) t.rem = 0.0;
        terms.push_back(std::move(t));
    }
    double a = target == QuadTarget::sup ? spec.a_plus : spec.a_max;
    if (!(a > 0.0)) fail(ErrorCode::EmptySpectrum, "no positive eigenvalue for the supremum target");
    HFunction h;
    h.label = target == QuadTarget::sup ? "quad_wiener:sup" : "quad_wiener";
    h.t_end = 1.0 / (c * a);
    h.eval = [terms, c](double t) {
        double v = 0.0;
        double ct = c * t;
        for (const Term& tm : terms) {
            for (double ak : tm.a) v += 0.5 * ct * ak * ak / (1.0 - ct * std::abs(ak));
            if (tm.rem > 0.0) v += 0.5 * ct * tm.rem / (1.0 - ct * tm.rem_rate);
        }
        return v;
    };
    return h;
}

TailBound quad_wiener_bound(const QuadraticSpec& spec, double lip_c, QuadForm form, QuadTarget target) {
    require_positive(lip_c, "lip_c");
    double c = target == QuadTarget::sup ? 1.0 : lip_c;
    double a = target == QuadTarget::sup ? spec.a_plus : spec.a_max;
    if (!(a > 0.0)) fail(ErrorCode::EmptySpectrum, "no positive eigenvalue for the supremum target");
    double S = spec.sum_f2();
    double V = 2.0 * S;
    const double kappa = 1.0 - std::log(3.0) / 2.0;
    auto log_form = [=](double x) { return std::exp(-x / (a * c) + (V / (a * a * c)) * std::log1p(a * x / V)); };
    auto min_form = [=](double x) { return std::exp(-(kappa / c) * std::min(x / a, x * x / (4.0 * S))); };
    bool check = spec.convention == SumSqConvention::computed;

    TailBound b;
    b.center = Center::mean;
    std::string tgt = target == QuadTarget::sup ? "sup" : "lipschitz";
    switch (form) {
    case QuadForm::log_form:
        b.name = "quad_wiener:log_form:" + tgt;
        b.fn = [=](double x) {
            double v = log_form(x);
            if (v > min_form(x) * (1.0 + 1e-12)) fail(ErrorCode::PreconditionViolated, "log_form exceeds min_form");
            return clamp_bound(v, "log_form");
        };
        break;
    case QuadForm::min_form:
        b.name = "quad_wiener:min_form:" + tgt;
        b.fn = [=](double x) {
            return clamp_bound(min_form(x), x / a <= x * x / (4.0 * S) ? "linear" : "quadratic");
        };
        break;
    case QuadForm::exact_h: {
        b.name = "quad_wiener:exact_h:" + tgt;
        HFunction h = quad_wiener_h(spec, c, target);
        b.valid_hi = h.h_sup;
        b.fn = [=](double x) {
            double v = std::exp(-entropy_integral(h, x));
            if (check && v > log_form(x) * (1.0 + 1e-7))
                fail(ErrorCode::PreconditionViolated, "exact_h bound exceeds log_form");
            return clamp_bound(v, "exact_h");
        };
        break;
    }
    }
    return b;
}

double lower_soft_threshold(const std::function<double(double)>& expr) {
    double hi = 1.0;
    while (expr(hi) > 0.25) {
        hi *= 2.0;
        if (hi > 1e300) fail(ErrorCode::OutOfRange, "lower-bound expression never drops to 1/4");
    }
    double lo = 0.5 * hi;
    while (lo > 1e-300 && expr(lo) <= 0.25) {
        hi = lo;
        lo *= 0.5;
    }
    return bisect([&](double x) { return expr(x) <= 0.25; }, lo, hi, 1e-13, 0.0);
}

TailBound quad_wiener_lower(const QuadraticSpec& spec, double b, LowerTarget target, const AreaParams& area) {
    if (!(b > 0.0 && b < 1.0)) fail(ErrorCode::InvalidArgument, "b must lie in (0, 1)");
    std::function<double(double)> expr;
    TailBound tb;
    tb.direction = Direction::lower;
    tb.center = Center::mean;
    switch (target) {
    case LowerTarget::inf_norm:
    case LowerTarget::sup: {
        std::vector<double> rates = target == LowerTarget::sup ? spec.a_plus_i : spec.a_i;
        rates.erase(std::remove_if(rates.begin(), rates.end(), [](double v) { return !(v > 0.0); }), rates.end());
        if (rates.empty()) fail(ErrorCode::EmptySpectrum, "no positive spectral radius");
        tb.name = target == LowerTarget::sup ? "quad_wiener_lower:sup" : "quad_wiener_lower:inf_norm";
        expr = [rates, b](double x) {
            double s = 0.0;
            for (double ai : rates) s += ai * std::exp(-x / ai);
            return (1.0 - b) / (2.0 * x) * s;
        };
        break;
    }
    case LowerTarget::area: {
        require_positive(area.T, "T");
        if (area.n < 1) fail(ErrorCode::InvalidArgument, "area lower bound needs n >= 1");
        double T = area.T, n = static_cast<double>(area.n);
        tb.name = "levy_area_lower";
        expr = [T, n, b](double x) { return (1.0 - b) * n * T * std::exp(-kPi * x / T) / (2.0 * kPi * x); };
        break;
    }
    }
    double thr = lower_soft_threshold(expr);
    tb.valid_lo = thr;
    tb.lo_closed = true;
    tb.audit_lo = 2.0 * thr;
    tb.fn = [expr](double x) { return clamp_bound(expr(x), "asymptotic"); };
    return tb;
}

double quad_euclid_Kb(double f2, double a, double m, double b) {
    return -(16.0 * f2 / (a * a)) * std::log(b) - 8.0 * f2 * (2.0 / (a * a) + 1.0 / (m * m)) * (1.0 - b) +
           (4.0 * f2 / (m * m)) * (1.0 - b * b) / (b * b);
}

TailBound quad_euclid_iid_bound(const QuadraticSpec& spec, double b) {
    if (!(b > 0.0 && b < 1.0)) fail(ErrorCode::InvalidArgument, "b must lie in (0, 1)");
    if (!spec.mean_abs) fail(ErrorCode::MissingEstimate, "quad_euclid_iid_bound needs mean_abs");
    for (int i = 1; i < spec.n(); ++i)
        if (spec.eigs[i] != spec.eigs[0]) fail(ErrorCode::InvalidArgument, "components are not identically distributed");
    double f2 = spec.f2_norms[0], a = spec.a_max, m = *spec.mean_abs;
    require_positive(m, "mean_abs");
    double Kb = quad_euclid_Kb(f2, a, m, b);
    double thr = (2.0 * a / b) * quad_euclid_Kb(f2, a, m, b / 2.0);
    TailBound tb;
    std::ostringstream os;
    os << "quad_euclid_iid(b=" << b << ")";
    tb.name = os.str();
    tb.center = Center::shifted_mean;
    tb.shift = kNaN;
    tb.fn = [=](double x) {
        double e2 = std::exp(-(1.0 - b) * x / a + Kb);
        if (x >= thr) {
            double e3 = std::exp(-(1.0 - b) * x / a);
            if (e3 < e2) return clamp_bound(e3, "sharp");
        }
        return clamp_bound(e2, "shifted");
    };
    return tb;
}

double levy_area_Kb(double T, double m, double b) {
    return -32.0 * std::log(b) - 32.0 * (1.0 - b) + (16.0 * T * T / (kPi * kPi * m * m)) * (1.0 - b) * (1.0 - b) / (b * b);
}

TailBound levy_area_bound(double T, int n, double lip_c, double b, AreaVariant variant, std::optional<double> mean_abs) {
    require_positive(T, "T");
    require_positive(lip_c, "lip_c");
    if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
    TailBound tb;
    switch (variant) {
    case AreaVariant::lipschitz: {
        double nn = n, c = lip_c;
        std::ostringstream os;
        os << "levy_area:lipschitz(T=" << T << ",n=" << n << ",c=" << c << ")";
        tb.name = os.str();
        tb.center = Center::mean;
        tb.fn = [=](double x) {
            double e = 4.0 * nn * std::log1p(kPi * x / (4.0 * nn * c * T)) - kPi * x / (c * T);
            return clamp_bound(std::exp(e), "lipschitz");
        };
        break;
    }
    case AreaVariant::euclid: {
        if (!(b > 0.0 && b < 1.0)) fail(ErrorCode::InvalidArgument, "b must lie in (0, 1)");
        if (!mean_abs) fail(ErrorCode::MissingEstimate, "levy_area euclid needs E|S_T|");
        double m = *mean_abs;
        require_positive(m, "mean_abs");
        double Kb = levy_area_Kb(T, m, b);
        double thr = (2.0 * T / (kPi * b)) * levy_area_Kb(T, m, b / 2.0);
        std::ostringstream os;
        os << "levy_area:euclid(T=" << T << ",b=" << b << ")";
        tb.name = os.str();
        tb.center = Center::shifted_mean;
        tb.shift = kNaN;
        tb.fn = [=](double x) {
            double rate = (1.0 - b) * kPi * x / T;
            double e2 = std::exp(-rate + Kb);
            if (x >= thr && std::exp(-rate) < e2) return clamp_bound(std::exp(-rate), "sharp");
            return clamp_bound(e2, "shifted");
        };
        break;
    }
    case AreaVariant::slope:
        fail(ErrorCode::InvalidArgument, "slope variant is a number; use levy_area_slope");
    }
    return tb;
}

double levy_area_slope(double T) {
    require_positive(T, "T");
    return -kPi / T;
}

HFunction levy_area_h(double T, int n, double lip_c) {
    require_positive(T, "T");
    require_positive(lip_c, "lip_c");
    double nn = n, c = lip_c;
    HFunction h;
    h.label = "levy_area_envelope";
    h.t_end = kPi / (c * T);
    h.eval = [=](double t) { return 4.0 * nn * c * c * t * T / (kPi * (kPi / T - c * t)); };
    return h;
}

HFunction levy_area_exact_h(double T, int n, double lip_c) {
    require_positive(T, "T");
    require_positive(lip_c, "lip_c");
    double nn = n, c = lip_c;
    LevyModel m = make_levy_area(T);
    HFunction h;
    h.label = "levy_area_exact";
    h.t_end = kPi / (c * T);
    h.eval = [=](double t) { return nn * c * exp_weighted_moment(m, 1, c * t); };
    return h;
}

double id_lower_bound(const LevyModel& m, double x) {
    if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "id_lower_bound needs x > 0");
    return -0.25 * std::expm1(-tail_mass(m, 2.0 * x));
}

TailBound id_lower_tail(const LevyModel& m) {
    TailBound tb;
    tb.name = "id_lower:" + model_name(m);
    tb.direction = Direction::lower;
    tb.center = Center::median;
    tb.fn = [m](double x) { return clamp_bound(id_lower_bound(m, x), "lower"); };
    return tb;
}

TailBound median_bound_general(const std::function<double(double)>& beta_fn,
                               const std::function<double(double)>& gamma_fn,
                               const std::function<double(double)>& gamma_inv, double C) {
    require_positive(C, "C");
    double factor = 1.0 + C * kE;
    TailBound tb;
    tb.name = "median_general";
    tb.center = Center::median;
    tb.valid_lo = 2.0 * beta_fn(gamma_inv(1.0 / (2.0 * factor)));
    tb.lo_closed = true;
    tb.fn = [=](double x) { return clamp_bound(factor * gamma_fn(generalized_inverse(beta_fn, x / 4.0)), "median"); };
    return tb;
}

TailBound median_bound_general(const std::function<double(double)>& beta_fn, const LevyModel& m, double C) {
    TailBound tb = median_bound_general(
        beta_fn, [m](double R) { return gamma_envelope(m, R); }, [m](double p) { return inverse_gamma(m, p); }, C);
    tb.name = "median_general:" + model_name(m);
    return tb;
}

TailBound median_bound_linear(const LevyModel& m, double c_prime, double C) {
    require_positive(c_prime, "C'");
    require_positive(C, "C");
    double factor = 1.0 + C * kE / (c_prime * c_prime);
    TailBound tb;
    tb.name = "median_linear:" + model_name(m);
    tb.center = Center::median;
    tb.valid_lo = 2.0 * c_prime * inverse_gamma(m, 1.0 / (2.0 * factor));
    tb.lo_closed = true;
    tb.fn = [=](double x) { return clamp_bound(factor * gamma_envelope(m, x / (4.0 * c_prime)), "median"); };
    return tb;
}

double solve_expm1_ratio(double m) {
    if (!(m > 1.0)) fail(ErrorCode::PreconditionViolated, "(e^u - 1)/u = m needs m > 1");
    auto ratio = [](double u) { return std::expm1(u) / u; };
    double hi = 1.0;
    while (ratio(hi) < m) hi *= 2.0;
    return bisect([&](double u) { return ratio(u) >= m; }, 0.0, hi, 1e-15, 1e-300);
}

TailBound two_regime_bound(double K, double a2, double a3, double a4, TwoRegimeVariant variant, TwoRegimeInfo* info) {
    if (!(K > 0.0) || !(a2 > 0.0) || !(a3 > 0.0) || !(a4 > 0.0))
        fail(ErrorCode::PreconditionViolated, "K, alpha2, alpha3, alpha4 must be positive");
    const double margin = 1e-6;
    double s0, x0, D, pa; // pa: the Poisson-shape alpha of the upper regime
    double gauss_scale;
    if (variant == TwoRegimeVariant::bis2) {
        if (a3 > 2.0 * a4 / K) fail(ErrorCode::PreconditionViolated, "alpha3 <= 2 alpha4 / K fails");
        double r = K * K * a2 / a4;
        if (r < 2.0 * (1.0 + margin))
            fail(ErrorCode::PreconditionViolated, "K^2 alpha2 / alpha4 >= 2 fails (or lies within 1e-6 of the boundary)");
        double u = solve_expm1_ratio(r - 1.0);
        s0 = u / K;
        D = a2 - a4 / (K * K);
        x0 = 3.0 * s0 * D;
        gauss_scale = 6.0 * D;
        pa = 3.0 * a4 / (K * K);
    } else {
        double r = K * a2 / a3;
        if (r < 2.0 * (1.0 + margin))
            fail(ErrorCode::PreconditionViolated, "K alpha2 >= 2 alpha3 fails (or lies within 1e-6 of the boundary)");
        double u = solve_expm1_ratio(r - 1.0);
        s0 = u / K;
        D = a2 - a3 / K;
        x0 = 2.0 * s0 * D;
        gauss_scale = 4.0 * D;
        pa = 2.0 * a3 / K;
    }
    auto poisson_log = [K, pa](double x) { return -(pa / (K * K)) * poisson_phi(x * K / pa); };
    double logK0 = -x0 * x0 / gauss_scale - poisson_log(x0);
    if (info) *info = {s0, x0, std::exp(logK0), gauss_scale};
    TailBound tb;
    std::ostringstream os;
    os << "two_regime:" << (variant == TwoRegimeVariant::bis2 ? "bis2" : "bis") << "(K=" << K << ",a2=" << a2
       << ",a3=" << a3 << ",a4=" << a4 << ")";
    tb.name = os.str();
    tb.center = Center::mean;
    tb.fn = [=](double x) {
        if (x <= x0) return clamp_bound(std::exp(-x * x / gauss_scale), "gaussian");
        return clamp_bound(std::exp(logK0 + poisson_log(x)), "poisson");
    };
    return tb;
}

double stable_constant(const StableSpec& s, StableVariant v) {
    double a = s.alpha;
    switch (v) {
    case StableVariant::hm: return (1.0 + 2.0 * kE / (2.0 - a)) * s.sigma_total / a;
    case StableVariant::bis2: return s.sigma_total * (1.5 * kE * kE + 1.0 / a) * std::pow(4.0 * s.lip_c, a);
    case StableVariant::bis: return s.sigma_total * (1.0 + kE * kE / 2.0) * std::pow(4.0 * s.lip_c, a);
    default: fail(ErrorCode::InvalidArgument, "variant has no single power-law constant");
    }
}

TailBound stable_median_bound(const StableSpec& s, StableVariant variant, double epsilon) {
    if (!(s.alpha > 0.0 && s.alpha < 2.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 2)");
    require_positive(s.sigma_total, "sigma_total");
    require_positive(s.lip_c, "lip_c");
    double a = s.alpha, sig = s.sigma_total, c = s.lip_c;
    double z = 2.0 - a;
    TailBound tb;
    tb.center = Center::median;
    tb.lo_closed = true;
    std::ostringstream os;
    os << "(alpha=" << a << ",sigma=" << sig << ",c=" << c << ")";
    switch (variant) {
    case StableVariant::hm: {
        double C = 2.0 / z;
        double factor = 1.0 + C * kE;
        double p = 1.0 / (2.0 * factor);
        double ginv = std::pow(sig / (a * p), 1.0 / a);
        double k = stable_constant(s, variant);
        tb.name = "stable:hm" + os.str();
        tb.valid_lo = 2.0 * c * ginv;
        tb.fn = [=](double x) { return clamp_bound(k * std::pow(x / (4.0 * c), -a), "hm"); };
        break;
    }
    case StableVariant::bis2: {
        double L = std::log(2.0 / z);
        double t1 = 1.5 * (1.0 + 4.0 / z * L) * std::log1p(8.0 / z * L);
        double m = std::max({t1, 4.0 / a, 6.0 * kE * kE});
        double k = stable_constant(s, variant);
        tb.name = "stable:bis2" + os.str();
        tb.valid_lo = 4.0 * c * std::pow(sig, 1.0 / a) * std::pow(m, 1.0 / a);
        tb.fn = [=](double x) { return clamp_bound(k * std::pow(x, -a), "bis2"); };
        break;
    }
    case StableVariant::bis: {
        if (a < 1.0) fail(ErrorCode::PreconditionViolated, "bis variant requires alpha >= 1");
        double L = std::log(1.0 / z);
        double t1 = (1.0 + 2.0 / z * L) * std::log1p(4.0 / z * L);
        double m = std::max(t1, 4.0 * kE * kE);
        double k = stable_constant(s, variant);
        tb.name = "stable:bis" + os.str();
        tb.valid_lo = 4.0 * c * std::pow(sig, 1.0 / a) * std::pow(m, 1.0 / a);
        tb.fn = [=](double x) { return clamp_bound(k * std::pow(x, -a), "bis"); };
        break;
    }
    case StableVariant::near2_exp: {
        require_positive(epsilon, "epsilon");
        double scale = sig * std::pow(4.0 * c, a);
        double lo_a = 2.0 * scale * std::log(4.0 * (1.0 + std::sqrt(kE))) / z;
        double hi_a = scale * std::log(1.0 / z) / (2.0 * z * (3.0 - a));
        tb.name = "stable:near2_exp" + os.str();
        tb.valid_lo = std::pow(lo_a, 1.0 / a);
        tb.valid_hi = hi_a > 0.0 ? std::pow(hi_a, 1.0 / a) : 0.0;
        if (!(tb.valid_lo <= tb.valid_hi)) tb.status = BoundStatus::empty_range;
        // closed upper end: nudge so the right endpoint itself is accepted
        tb.valid_hi = std::nextafter(tb.valid_hi, kInf);
        double k = epsilon + std::sqrt(kE);
        tb.fn = [=](double x) { return clamp_bound(k * std::exp(-z * std::pow(x, a) / (2.0 * scale)), "near2_exp"); };
        break;
    }
    case StableVariant::near2_log:
        fail(ErrorCode::InvalidArgument, "near2_log is a point evaluation; use stable_near2_log");
    }
    return tb;
}

PointBound stable_near2_log(const StableSpec& s, double b, double epsilon) {
    if (!(b > 3.0)) fail(ErrorCode::InvalidArgument, "near2_log needs b > 3");
    if (!(s.alpha > 1.0 && s.alpha < 2.0)) fail(ErrorCode::PreconditionViolated, "near2_log needs alpha in (1, 2)");
    require_positive(epsilon, "epsilon");
    double a = s.alpha, sig = s.sigma_total, c = s.lip_c, z = 2.0 - a;
    double x = 4.0 * b * c * sig * std::log(1.0 / z) / z;
    double w = std::log(1.0 / z) / z;
    double g = w * std::log(w);
    double scale = std::pow(4.0 * c, a) * sig;
    double xa = std::pow(x, a);
    double raw = scale / xa * (1.0 / a + (2.0 + epsilon) * std::exp((2.0 + epsilon) * scale * g / xa));
    return {x, clamp_bound(raw, "near2_log")};
}

double asymptotic_slope(SlopeKind kind, const QuadraticSpec& spec) {
    switch (kind) {
    case SlopeKind::quad:
        if (!(spec.a_max > 0.0)) fail(ErrorCode::EmptySpectrum, "zero spectral radius");
        return -1.0 / spec.a_max;
    case SlopeKind::quad_sup:
        if (!(spec.a_plus > 0.0)) fail(ErrorCode::EmptySpectrum, "no positive eigenvalue");
        return -1.0 / spec.a_plus;
    case SlopeKind::area:
        fail(ErrorCode::InvalidArgument, "area slope needs T; use asymptotic_slope_area");
    }
    return 0.0;
}

double asymptotic_slope_area(double T) { return levy_area_slope(T); }

} // namespace idbounds
