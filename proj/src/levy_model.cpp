#include "idbounds/levy_model.hpp"

#include "idbounds/errors.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace idbounds {

namespace {

constexpr double kPi = std::numbers::pi;
const QuadOptions kModelQuad{1e-11, 0.0, std::size_t{1} << 20};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void divergent(const LevyModel& m, const std::string& what) {
    fail(ErrorCode::Divergent, model_name(m) + ": " + what);
}

double levy_area_c(const LevyArea& la) { return kPi / la.T; }

// 1 / sinh(c r) written to stay finite for large r.
double inv_sinh(double c, double r) { return 2.0 * std::exp(-c * r) / (-std::expm1(-2.0 * c * r)); }

double integrate_radial(const RealFn& f, double R) {
    if (std::isinf(R)) return integrate_to_inf(f, 0.0, kModelQuad);
    return integrate(f, 0.0, R, kModelQuad);
}

void check_k(int k, std::initializer_list<int> allowed) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        std::ostringstream os;
        os << "moment order k=" << k << " not supported";
        fail(ErrorCode::InvalidArgument, os.str());
    }
}

void check_small_jump_variance(const LevyModel& m) {
    double v = integrate([&](double r) { return r * r * radial_density(m, r); }, 0.0, 1.0,
                         QuadOptions{1e-6, 0.0, std::size_t{1} << 20});
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, model_name(m) + ": small-jump variance not finite");
}

// sum_{j>=1} z^j / (j! (p + j)) with p > -1.
double stable_exp_series(double p, double z) {
    double term = 1.0, sum = 0.0;
    for (int j = 1; j < 5000; ++j) {
        term *= z / j;
        double add = term / (p + j);
        sum += add;
        if (j > z && add < 1e-17 * sum) break;
    }
    return sum;
}

} // namespace

std::string model_name(const LevyModel& m) {
    return std::visit(overloaded{
                          [](const Stable& s) {
                              std::ostringstream os;
                              os << "Stable{alpha=" << s.alpha << ", sigma=" << s.sigma_total << "}";
                              return os.str();
                          },
                          [](const LogKernel& s) { return "LogKernel{sigma=" + std::to_string(s.sigma_total) + "}"; },
                          [](const GaussKernel& s) { return "GaussKernel{sigma=" + std::to_string(s.sigma_total) + "}"; },
                          [](const QuadraticSpectral& q) { return "QuadraticSpectral{N=" + std::to_string(q.N) + "}"; },
                          [](const LevyArea& a) { return "LevyArea{T=" + std::to_string(a.T) + "}"; },
                          [](const BoundedSupport& b) { return "BoundedSupport{R=" + std::to_string(b.R_support) + "}"; },
                      },
                      m);
}

LevyModel make_stable(double alpha, double sigma_total) {
    if (!(alpha > 0.0 && alpha < 2.0)) fail(ErrorCode::InvalidArgument, "stable alpha must lie in (0, 2)");
    if (!(sigma_total > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_total must be positive");
    LevyModel m = Stable{alpha, sigma_total};
    check_small_jump_variance(m);
    return m;
}

LevyModel make_log_kernel(double sigma_total) {
    if (!(sigma_total > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_total must be positive");
    LevyModel m = LogKernel{sigma_total};
    check_small_jump_variance(m);
    return m;
}

LevyModel make_gauss_kernel(double sigma_total) {
    if (!(sigma_total > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_total must be positive");
    LevyModel m = GaussKernel{sigma_total};
    check_small_jump_variance(m);
    return m;
}

LevyModel make_quadratic(std::vector<double> eigs) {
    double amax = 0.0;
    for (double a : eigs) {
        if (!std::isfinite(a)) fail(ErrorCode::InvalidArgument, "eigenvalues must be finite");
        amax = std::max(amax, std::abs(a));
    }
    if (!(amax > 0.0)) fail(ErrorCode::EmptySpectrum, "quadratic model needs a nonzero eigenvalue");
    QuadraticSpectral q;
    q.N = static_cast<int>(eigs.size());
    q.eigs = std::move(eigs);
    return q;
}

LevyModel make_quadratic(const EigenGenerator& gen, int N) {
    QuadraticSpectral q = std::get<QuadraticSpectral>(make_quadratic(generate_eigs(gen, N)));
    q.generator = gen;
    q.remainder_sq = eig_sum_sq_remainder(gen, N);
    return q;
}

LevyModel make_levy_area(double T) {
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "LevyArea needs T > 0");
    return LevyArea{T};
}

LevyModel make_bounded_support(double R_support, const std::array<double, 4>& abs_moments) {
    if (!(R_support > 0.0)) fail(ErrorCode::InvalidArgument, "R_support must be positive");
    for (double v : abs_moments)
        if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::InvalidArgument, "absolute moments must be finite and >= 0");
    return BoundedSupport{R_support, abs_moments};
}

const QuadraticSpectral& as_quadratic(const LevyModel& m) {
    if (auto* q = std::get_if<QuadraticSpectral>(&m)) return *q;
    fail(ErrorCode::InvalidArgument, model_name(m) + " is not a quadratic spectral model");
}

std::vector<double> generate_eigs(const EigenGenerator& gen, int N) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "eigenvalue truncation N must be >= 1");
    if (!(gen.T > 0.0)) fail(ErrorCode::InvalidArgument, "generator needs T > 0");
    std::vector<double> a(static_cast<std::size_t>(N));
    double T2 = gen.T * gen.T;
    for (int k = 0; k < N; ++k) {
        if (gen.kind == EigenKind::square_norm) {
            double d = (2.0 * k + 1.0) * kPi;
            a[k] = 4.0 * T2 / (d * d);
        } else {
            double d = (k + 1.0) * kPi;
            a[k] = T2 / (d * d);
        }
    }
    return a;
}

double eig_sum(const EigenGenerator& gen) {
    double T2 = gen.T * gen.T;
    return gen.kind == EigenKind::square_norm ? T2 / 2.0 : T2 / 6.0;
}

double eig_sum_sq(const EigenGenerator& gen) {
    double T4 = std::pow(gen.T, 4);
    return gen.kind == EigenKind::square_norm ? T4 / 6.0 : T4 / 90.0;
}

double eig_sum_sq_remainder(const EigenGenerator& gen, int N) {
    // sum_{j>=0} (j + x)^{-4} = psi'''(x) / 6
    double T4 = std::pow(gen.T, 4);
    double x = gen.kind == EigenKind::square_norm ? N + 0.5 : N + 1.0;
    return T4 * boost::math::polygamma(3, x) / (6.0 * std::pow(kPi, 4));
}

double eig_sum_sq_literal(const EigenGenerator& gen) { return eig_sum(gen); }

double radial_density(const LevyModel& m, double r) {
    if (!(r > 0.0)) return 0.0;
    return std::visit(
        overloaded{
            [&](const Stable& s) { return s.sigma_total * std::pow(r, -1.0 - s.alpha); },
            [&](const LogKernel& s) { return s.sigma_total * std::abs(std::log(r)) / (r * r); },
            [&](const GaussKernel& s) {
                return s.sigma_total * std::exp(-0.5 / (r * r)) / (r * r * std::sqrt(2.0 * kPi));
            },
            [&](const QuadraticSpectral& q) {
                double v = 0.0;
                for (double a : q.eigs)
                    if (a != 0.0) v += std::exp(-r / std::abs(a));
                return v / (2.0 * r);
            },
            [&](const LevyArea& la) { return inv_sinh(levy_area_c(la), r) / r; },
            [&](const BoundedSupport&) -> double {
                fail(ErrorCode::InvalidArgument, "bounded-support model has no density");
            },
        },
        m);
}

double line_density(const LevyModel& m, double y) {
    if (y == 0.0) return 0.0;
    if (auto* q = std::get_if<QuadraticSpectral>(&m)) {
        double r = std::abs(y), v = 0.0;
        for (double a : q->eigs)
            if (a != 0.0 && (a > 0.0) == (y > 0.0)) v += std::exp(-r / std::abs(a));
        return v / (2.0 * r);
    }
    if (std::holds_alternative<LevyArea>(m)) return 0.5 * radial_density(m, std::abs(y));
    fail(ErrorCode::InvalidArgument, model_name(m) + " has no one-dimensional density");
}

double tail_mass(const LevyModel& m, double R) {
    if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "tail_mass needs R > 0");
    if (std::isinf(R)) return 0.0;
    if (auto* s = std::get_if<Stable>(&m)) return s->sigma_total * std::pow(R, -s->alpha) / s->alpha;
    if (auto* b = std::get_if<BoundedSupport>(&m)) {
        if (R >= b->R_support) return 0.0;
        fail(ErrorCode::InvalidArgument, "bounded-support tail mass below R_support is not determined by moments");
    }
    return integrate_to_inf([&](double r) { return radial_density(m, r); }, R, kModelQuad);
}

double gamma_exact(const LevyModel& m, double R) { return -std::expm1(-tail_mass(m, R)); }

double gamma_envelope(const LevyModel& m, double R) {
    if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "gamma_envelope needs R > 0");
    if (auto* s = std::get_if<Stable>(&m)) return s->sigma_total / (s->alpha * std::pow(R, s->alpha));
    if (auto* s = std::get_if<LogKernel>(&m)) {
        if (R >= std::numbers::e) return 2.0 * s->sigma_total * std::log(R) / R;
        return std::max(gamma_exact(m, R), 2.0 * s->sigma_total / std::numbers::e);
    }
    if (auto* s = std::get_if<GaussKernel>(&m)) return s->sigma_total / (std::sqrt(2.0 * kPi) * R);
    return gamma_exact(m, R);
}

double inverse_gamma(const LevyModel& m, double p) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "inverse_gamma needs p in (0, 1)");
    double hi = 1.0;
    while (gamma_envelope(m, hi) > p) {
        hi *= 2.0;
        if (hi > 1e12) {
            std::ostringstream os;
            os << "inverse_gamma: envelope of " << model_name(m) << " stays above " << p << " up to R=1e12";
            fail(ErrorCode::OutOfRange, os.str());
        }
    }
    double lo = 0.5 * hi;
    while (lo > 1e-300 && gamma_envelope(m, lo) <= p) {
        hi = lo;
        lo *= 0.5;
    }
    if (lo <= 1e-300) return hi;
    return bisect([&](double R) { return gamma_envelope(m, R) <= p; }, lo, hi, 1e-10, 0.0);
}

double truncated_abs_moment(const LevyModel& m, int k, double R) {
    check_k(k, {1, 2, 3, 4});
    if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "truncated_abs_moment needs R > 0");
    auto numeric = [&] { return integrate_radial([&](double r) { return std::pow(r, k) * radial_density(m, r); }, R); };
    return std::visit(
        overloaded{
            [&](const Stable& s) {
                if (k <= s.alpha) divergent(m, "moment of order k <= alpha diverges at the origin");
                if (std::isinf(R)) divergent(m, "untruncated moment of order k > alpha diverges");
                return s.sigma_total * std::pow(R, k - s.alpha) / (k - s.alpha);
            },
            [&](const LogKernel&) {
                if (k == 1) divergent(m, "first absolute moment diverges at the origin");
                if (std::isinf(R)) divergent(m, "untruncated moment diverges at infinity");
                return numeric();
            },
            [&](const GaussKernel&) {
                if (std::isinf(R)) divergent(m, "untruncated moment diverges at infinity");
                return numeric();
            },
            [&](const QuadraticSpectral& q) {
                double v = 0.0;
                for (double a : q.eigs) {
                    if (a == 0.0) continue;
                    double aa = std::abs(a);
                    double P = std::isinf(R) ? 1.0 : boost::math::gamma_p(static_cast<double>(k), R / aa);
                    v += 0.5 * std::pow(aa, k) * std::tgamma(static_cast<double>(k)) * P;
                }
                return v;
            },
            [&](const LevyArea&) {
                if (k == 1) divergent(m, "first absolute moment diverges at the origin");
                return numeric();
            },
            [&](const BoundedSupport& b) {
                if (R >= b.R_support) return b.abs_moments[static_cast<std::size_t>(k - 1)];
                fail(ErrorCode::InvalidArgument, "bounded-support moment below R_support is not determined");
            },
        },
        m);
}

double exp_abscissa(const LevyModel& m, double R) {
    if (std::holds_alternative<BoundedSupport>(m)) return kInf;
    if (std::isfinite(R)) return kInf;
    if (auto* q = std::get_if<QuadraticSpectral>(&m)) return 1.0 / spectral_a(q->eigs);
    if (auto* la = std::get_if<LevyArea>(&m)) return levy_area_c(*la);
    return 0.0;
}

double exp_abscissa_positive(const LevyModel& m, double R) {
    if (std::isfinite(R)) return kInf;
    if (auto* q = std::get_if<QuadraticSpectral>(&m)) {
        double ap = spectral_a_plus(q->eigs);
        return ap > 0.0 ? 1.0 / ap : kInf;
    }
    return exp_abscissa(m, R);
}

double exp_weighted_moment(const LevyModel& m, int k, double t, double R) {
    check_k(k, {1, 3});
    if (!(t >= 0.0)) fail(ErrorCode::InvalidArgument, "exp_weighted_moment needs t >= 0");
    if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "exp_weighted_moment needs R > 0");
    if (t == 0.0) return 0.0;
    if (t >= exp_abscissa(m, R)) {
        std::ostringstream os;
        os << "t=" << t << " beyond the exponential abscissa " << exp_abscissa(m, R);
        divergent(m, os.str());
    }
    auto numeric = [&] {
        return integrate_radial([&](double r) { return std::pow(r, k) * std::expm1(t * r) * radial_density(m, r); }, R);
    };
    return std::visit(
        overloaded{
            [&](const Stable& s) {
                double z = t * R;
                if (z > 600.0) return numeric();
                double p = k - s.alpha;
                return s.sigma_total * std::pow(R, p) * stable_exp_series(p, z);
            },
            [&](const LogKernel& lk) {
                // (0, min(R, 1)]: expand expm1 and use int_0^R r^{m-1}(-log r) dr = R^m (1/m^2 - log R/m)
                double R1 = std::min(R, 1.0), lr = std::log(R1);
                double sum = 0.0, c = 1.0;
                for (int j = 1; j < 1000; ++j) {
                    c *= t / j;
                    double mm = j + k - 1;
                    double term = c * std::pow(R1, mm) * (1.0 / (mm * mm) - lr / mm);
                    sum += term;
                    if (j > t * R1 && std::abs(term) < 1e-17 * sum) break;
                }
                double v = lk.sigma_total * sum;
                if (R > 1.0)
                    v += integrate([&](double r) { return std::pow(r, k) * std::expm1(t * r) * radial_density(m, r); },
                                   1.0, R, kModelQuad);
                return v;
            },
            [&](const GaussKernel&) { return numeric(); },
            [&](const QuadraticSpectral& q) {
                if (std::isfinite(R)) return numeric();
                double v = 0.0;
                for (double a : q.eigs) {
                    double aa = std::abs(a);
                    if (aa == 0.0) continue;
                    double u = 1.0 - t * aa;
                    if (k == 1)
                        v += 0.5 * t * aa * aa / u;
                    else
                        v += aa * aa * aa * (1.0 / (u * u * u) - 1.0);
                }
                return v;
            },
            [&](const LevyArea& la) {
                double c = levy_area_c(la);
                if (k == 1 && std::isinf(R)) {
                    // 1/sinh(cr) = 2 sum_j e^{-(2j+1)cr}, summed termwise into digamma and tangent terms
                    double z = t / (2.0 * c);
                    using boost::math::digamma;
                    return (2.0 * digamma(0.5) - digamma(0.5 - z) - digamma(0.5 + z)) / (2.0 * c) +
                           kPi / (2.0 * c) * std::tan(kPi * z);
                }
                return integrate_radial(
                    [&](double r) {
                        // expm1(t r) / sinh(c r); the second form avoids inf * 0 for large r
                        double v = t * r < 30.0
                                       ? std::expm1(t * r) * inv_sinh(c, r)
                                       : 2.0 * (std::exp((t - c) * r) - std::exp(-c * r)) / (-std::expm1(-2.0 * c * r));
                        return std::pow(r, k - 1) * v;
                    },
                    R);
            },
            [&](const BoundedSupport&) -> double {
                fail(ErrorCode::InvalidArgument, "exponential moments are not determined by the stored absolute moments");
            },
        },
        m);
}

double exp_weighted_moment_positive(const LevyModel& m, int k, double t, double R) {
    auto* q = std::get_if<QuadraticSpectral>(&m);
    if (!q) return 0.5 * exp_weighted_moment(m, k, t, R);
    std::vector<double> pos;
    for (double a : q->eigs)
        if (a > 0.0) pos.push_back(a);
    if (pos.empty()) return 0.0;
    QuadraticSpectral p;
    p.eigs = std::move(pos);
    p.N = static_cast<int>(p.eigs.size());
    return exp_weighted_moment(LevyModel{p}, k, t, R);
}

double levy_area_exp_envelope(double T, double t) {
    double c = kPi / T;
    if (!(t < c)) return kInf;
    return 4.0 * t * T / (kPi * (c - t));
}

double spectral_a(const std::vector<double>& eigs) {
    double v = 0.0;
    for (double a : eigs) v = std::max(v, std::abs(a));
    return v;
}

double spectral_a_plus(const std::vector<double>& eigs) {
    double v = 0.0;
    for (double a : eigs) v = std::max(v, a);
    return v;
}

double spectral_a_minus(const std::vector<double>& eigs) {
    double v = 0.0;
    for (double a : eigs) v = std::max(v, -a);
    return v;
}

} // namespace idbounds
