#include "doctest.h"

#include "idbounds/bounds.hpp"
#include "idbounds/errors.hpp"
#include "idbounds/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace idbounds;
using std::numbers::e;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& err) {
        return err.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("dev_nico_bound") {
    TailBound b = dev_nico_bound(1.0, 1.0);
    CHECK(b(1.0) == doctest::Approx(e / 4.0).epsilon(1e-12));
    CHECK(b.evaluate(1.0).regime == "poisson");
    CHECK(dev_nico_bound(0.0, 1.0)(1e-9) == doctest::Approx(1.0));
    CHECK(dev_nico_bound(0.0, 2.0)(3.0) == doctest::Approx(std::exp(-9.0 / 4.0)));
    TailBound neg = dev_nico_bound(-0.5, 1.0);
    CHECK(neg.valid_hi == doctest::Approx(2.0));
    CHECK(code_of([&] { neg(2.5); }) == ErrorCode::OutOfRange);
    CHECK(code_of([] { dev_nico_bound(1.0, 0.0); }) == ErrorCode::InvalidProfile);
    // continuity of the small-u series branch
    CHECK(poisson_phi(0.999e-3) == doctest::Approx(poisson_phi(1.001e-3)).epsilon(1e-5));
    CHECK(poisson_phi(0.5) == doctest::Approx(1.5 * std::log(1.5) - 0.5).epsilon(1e-14));
}

TEST_CASE("product_h modes") {
    LevyModel st = make_stable(1.0, 1.0);
    FunctionalProfile p;
    p.alpha2 = 1.0;
    p.beta = {1.0};
    HFunction h = product_h(p, {st}, ProductMode::shared_beta, 1.0);
    CHECK(h(0.0) == 0.0);

    // per_component equals shared_beta when all beta_i agree and alpha2 = n beta^2
    int n = 4;
    double beta = 0.7;
    FunctionalProfile pc;
    pc.beta.assign(n, beta);
    pc.alpha2 = n * beta * beta;
    FunctionalProfile ps = pc;
    ps.beta = {beta};
    HFunction hp = product_h(pc, {st}, ProductMode::per_component, 1.0);
    HFunction hs = product_h(ps, {st}, ProductMode::shared_beta, 1.0);
    for (int i = 1; i <= 20; ++i) {
        double t = 0.3 * i;
        CHECK(hp(t) == doctest::Approx(hs(t)).epsilon(1e-12));
    }

    // supremum mode with a single positive eigenvalue: t a^2 / (2(1 - t a))
    double a = 0.6;
    FunctionalProfile sp;
    sp.n = 1;
    HFunction hsup = product_h(sp, {make_quadratic(std::vector<double>{a})}, ProductMode::supremum);
    CHECK(hsup.t_end == doctest::Approx(1.0 / a));
    for (double t : {0.1, 0.8, 1.5}) CHECK(hsup(t) == doctest::Approx(0.5 * t * a * a / (1.0 - t * a)).epsilon(1e-12));
}

TEST_CASE("dimension_free_bound") {
    LevyModel m = make_stable(1.0, 1.0);
    DimFreeInput in;
    in.beta = {1.0};
    in.models = {m};
    in.truncation = 1.0;
    in.mean_norm = 1.0;
    in.sum_var = 1.0;
    TailBound b = dimension_free_bound(in, DimFreeMode::norm);
    CHECK(b.center == Center::shifted_mean);
    CHECK(b.shift == doctest::Approx(2.0));
    CHECK(b(1e-9) == doctest::Approx(1.0));
    HFunction h = dimension_free_h(in);
    TailBound eng = tail_bound_from_h(h);
    for (int i = 1; i <= 20; ++i) CHECK(b(0.4 * i) == doctest::Approx(eng(0.4 * i)).epsilon(1e-12));

    // i.i.d. components with mean_norm^2 proportional to n leave h unchanged
    auto h_at = [&](int nn) {
        DimFreeInput d = in;
        d.beta.assign(nn, 1.0);
        d.mean_norm = std::sqrt(0.8 * nn);
        return dimension_free_h(d);
    };
    HFunction h2 = h_at(2), h8 = h_at(8);
    for (double t : {0.2, 1.0, 3.0}) CHECK(h2(t) == doctest::Approx(h8(t)).epsilon(1e-9));

    DimFreeInput missing = in;
    missing.mean_norm.reset();
    CHECK(code_of([&] { dimension_free_bound(missing, DimFreeMode::norm); }) == ErrorCode::MissingEstimate);

    TailBound lip = dimension_free_bound(in, DimFreeMode::lipschitz);
    CHECK(lip.shift == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bounded_support_norm_bound") {
    TailBound b = bounded_support_bound_from_alpha2(1.0, 1.0, 1.0);
    CHECK(b(1.0) == doctest::Approx(e / 4.0).epsilon(1e-12));
    CHECK(b(1e-9) == doctest::Approx(1.0));
    double a4 = bounded_support_alpha2(0.5, 2.0, 3.0, 1.5);
    CHECK(a4 == doctest::Approx((8.0 * 0.25 + 2.0 * std::pow(0.5, 5) * 4.0 / 2.25) * 3.0));
    CHECK(code_of([] { bounded_support_norm_bound(0.0, 1.0, 1.0, 1.0); }) == ErrorCode::InvalidProfile);
    CHECK(bounded_support_norm_bound(1.0, 1.0, 0.1, 1.0).center == Center::shifted_mean);
}

TEST_CASE("quad_wiener_bound forms") {
    QuadraticSpec hT = make_quadratic_spec(EigenGenerator{EigenKind::square_norm, 1.0}, 200);
    CHECK(hT.a_max == doctest::Approx(4.0 / (pi * pi)));
    CHECK(hT.sum_f2() == doctest::Approx(0.25 / 6.0).epsilon(1e-12));

    // min_form arithmetic with a = 1 and sum of squared norms 1
    QuadraticSpec one = make_quadratic_spec({{1.0}});
    one.f2_norms = {1.0};
    TailBound mf = quad_wiener_bound(one, 1.0, QuadForm::min_form, QuadTarget::lipschitz);
    CHECK(mf(2.0) == doctest::Approx(std::exp(-(1.0 - std::log(3.0) / 2.0))).epsilon(1e-12));
    CHECK(mf(2.0) == doctest::Approx(0.6372).epsilon(1e-4));

    for (QuadForm f : {QuadForm::exact_h, QuadForm::log_form, QuadForm::min_form})
        CHECK(quad_wiener_bound(hT, 1.0, f, QuadTarget::lipschitz)(1e-6) == doctest::Approx(1.0).epsilon(1e-6));

    for (double c : {1.0, 2.5}) {
        TailBound ex = quad_wiener_bound(hT, c, QuadForm::exact_h, QuadTarget::lipschitz);
        TailBound lf = quad_wiener_bound(hT, c, QuadForm::log_form, QuadTarget::lipschitz);
        TailBound mn = quad_wiener_bound(hT, c, QuadForm::min_form, QuadTarget::lipschitz);
        for (int i = 1; i <= 50; ++i) {
            double x = 0.08 * i;
            CHECK(ex(x) <= lf(x) * (1.0 + 1e-7));
            CHECK(lf(x) <= mn(x) * (1.0 + 1e-12));
        }
    }
    QuadraticSpec neg = make_quadratic_spec({{-1.0, -0.5}});
    CHECK(code_of([&] { quad_wiener_bound(neg, 1.0, QuadForm::exact_h, QuadTarget::sup); }) == ErrorCode::EmptySpectrum);
    QuadraticSpec mixed = make_quadratic_spec({{-1.0, 0.5}});
    TailBound sup = quad_wiener_bound(mixed, 1.0, QuadForm::exact_h, QuadTarget::sup);
    // only the positive eigenvalue enters: h = t a^2/(2(1 - t a)) with a = 0.5
    HFunction hsup = quad_wiener_h(mixed, 1.0, QuadTarget::sup);
    CHECK(hsup(1.0) == doctest::Approx(0.5 * 0.25 / 0.5));
    CHECK(sup(1.0) < 1.0);
}

TEST_CASE("quad_wiener_lower") {
    QuadraticSpec one = make_quadratic_spec({{1.0}});
    TailBound lo = quad_wiener_lower(one, 0.5, LowerTarget::inf_norm);
    CHECK(lo.direction == Direction::lower);
    CHECK(lo.evaluate(4.0).value == doctest::Approx(std::exp(-4.0) / 16.0).epsilon(1e-12));
    CHECK(lo.evaluate(60.0).value < 1e-20);
    // soft threshold: expression equals 1/4 there
    CHECK(lo.evaluate(lo.valid_lo).value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(lo.audit_lo == doctest::Approx(2.0 * lo.valid_lo));
    TailBound area = quad_wiener_lower(one, 0.5, LowerTarget::area, AreaParams{pi, 1});
    CHECK(area.evaluate(8.0).value == doctest::Approx(std::exp(-8.0) / 32.0).epsilon(1e-12));
}

TEST_CASE("quad_euclid_iid_bound") {
    CHECK(quad_euclid_Kb(1.0, 1.0, 1.0, 1.0 - 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(quad_euclid_Kb(1.0, 1.0, 1.0, 0.5) == doctest::Approx(16.0 * std::log(2.0)).epsilon(1e-12));
    QuadraticSpec s = make_quadratic_spec({{1.0}, {1.0}});
    s.f2_norms = {1.0, 1.0};
    CHECK(code_of([&] { quad_euclid_iid_bound(s, 0.5); }) == ErrorCode::MissingEstimate);
    s.mean_abs = 1.0;
    TailBound b = quad_euclid_iid_bound(s, 0.5);
    double thr = (2.0 / 0.5) * quad_euclid_Kb(1.0, 1.0, 1.0, 0.25);
    double Kb = quad_euclid_Kb(1.0, 1.0, 1.0, 0.5);
    // eq J2 dominates the sharp form at and beyond the threshold
    for (double x : {thr, thr * 1.5}) {
        double j2 = std::exp(-0.5 * x + Kb), j3 = std::exp(-0.5 * x);
        CHECK(j2 >= j3);
        CHECK(b(x) == doctest::Approx(std::min(1.0, j3)));
    }
}

TEST_CASE("levy_area_bound") {
    CHECK(levy_area_slope(pi) == doctest::Approx(-1.0));
    TailBound lb = levy_area_bound(pi, 1, 1.0, 0.5, AreaVariant::lipschitz);
    CHECK(lb(1e-9) == doctest::Approx(1.0));
    CHECK(lb(8.0) == doctest::Approx(81.0 * std::exp(-8.0)).epsilon(1e-12));
    CHECK(lb(8.0) == doctest::Approx(0.02717).epsilon(1e-3));
    CHECK(code_of([] { levy_area_bound(pi, 1, 1.0, 0.5, AreaVariant::euclid); }) == ErrorCode::MissingEstimate);
    TailBound eu = levy_area_bound(pi, 1, 1.0, 0.5, AreaVariant::euclid, 0.6);
    CHECK(eu.center == Center::shifted_mean);
    double Kb = levy_area_Kb(pi, 0.6, 0.5);
    CHECK(Kb == doctest::Approx(32.0 * std::log(2.0) - 16.0 + 16.0 / 0.36).epsilon(1e-12));
    // the p12 closed form relaxes the engine bound with the exact h and with its envelope
    TailBound exact = tail_bound_from_h(levy_area_exact_h(pi, 1, 1.0));
    TailBound env = tail_bound_from_h(levy_area_h(pi, 1, 1.0));
    for (double x : {0.5, 2.0, 5.0, 9.0}) {
        CHECK(exact(x) <= env(x) * (1.0 + 1e-8));
        CHECK(env(x) <= lb(x) * (1.0 + 1e-8));
    }
}

TEST_CASE("id_lower_bound") {
    LevyModel s = make_stable(1.0, 1.0);
    CHECK(id_lower_bound(s, 5.0) == doctest::Approx(0.25 * (1.0 - std::exp(-0.1))).epsilon(1e-12));
    CHECK(id_lower_bound(s, 5.0) == doctest::Approx(0.023792).epsilon(1e-4));
    LevyModel bs = make_bounded_support(2.0, {1.0, 1.0, 1.0, 1.0});
    CHECK(id_lower_bound(bs, 1.5) == 0.0);
    double prev = 1.0;
    for (int i = 1; i <= 30; ++i) {
        double v = id_lower_bound(s, 0.5 * i);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(id_lower_tail(s).center == Center::median);
}

TEST_CASE("median bounds") {
    double alpha = 1.3, c = 1.7, sigma = 0.8;
    LevyModel m = make_stable(alpha, sigma);
    double C = 2.0 / (2.0 - alpha);
    TailBound gen = median_bound_general([c](double R) { return c * R; }, m, C);
    TailBound hm = stable_median_bound({alpha, sigma, c}, StableVariant::hm);
    CHECK(gen.valid_lo == doctest::Approx(hm.valid_lo).epsilon(1e-9));
    for (int i = 0; i < 20; ++i) {
        double x = hm.valid_lo * (1.0 + 0.5 * i);
        double closed = (1.0 + 2.0 * e / (2.0 - alpha)) * (sigma / alpha) * std::pow(x / (4.0 * c), -alpha);
        CHECK(hm(x) == doctest::Approx(std::min(1.0, closed)).epsilon(1e-12));
        CHECK(gen(x) == doctest::Approx(hm(x)).epsilon(1e-10));
    }
    CHECK(code_of([&] { hm(0.5 * hm.valid_lo); }) == ErrorCode::OutOfRange);

    // linear beta specialization: (1 + Ce/C'^2) gamma(x/(4C'))
    double cp = 2.0;
    TailBound lin = median_bound_linear(m, cp, 3.0);
    double f = 1.0 + 3.0 * e / (cp * cp);
    CHECK(lin.valid_lo == doctest::Approx(2.0 * cp * inverse_gamma(m, 1.0 / (2.0 * f))));
    double x = lin.valid_lo * 2.0;
    CHECK(lin(x) == doctest::Approx(std::min(1.0, f * gamma_envelope(m, x / (4.0 * cp)))));
}

TEST_CASE("two_regime_bound") {
    CHECK(code_of([] { two_regime_bound(1.0, 2.0, 1.0, 1.0, TwoRegimeVariant::bis); }) == ErrorCode::PreconditionViolated);
    TwoRegimeInfo info;
    TailBound b = two_regime_bound(1.0, 4.0, 1.0, 1.0, TwoRegimeVariant::bis, &info);
    // s0 solves (e^s - 1)/s = 3; the root is checked against the equation itself
    CHECK(std::expm1(info.s0) / info.s0 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(info.s0 == doctest::Approx(1.9038136944).epsilon(1e-9));
    double x0 = info.x0;
    CHECK(x0 == doctest::Approx(2.0 * info.s0 * 3.0));
    double left = b(x0 * (1.0 - 1e-13)), right = b(x0 * (1.0 + 1e-13));
    CHECK(std::abs(left - right) / right <= 1e-9);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    int tested = 0;
    while (tested < 20) {
        double K = u(rng), a2 = u(rng) * 3.0, a3 = u(rng), a4 = u(rng);
        TwoRegimeVariant v = tested % 2 ? TwoRegimeVariant::bis : TwoRegimeVariant::bis2;
        TailBound tb;
        try {
            tb = two_regime_bound(K, a2, a3, a4, v, &info);
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::PreconditionViolated);
            continue;
        }
        ++tested;
        double l = tb.evaluate(info.x0 * (1.0 - 1e-14)).raw, r = tb.evaluate(info.x0 * (1.0 + 1e-14)).raw;
        if (r > 1e-280)
            CHECK(std::abs(l - r) / r <= 1e-9);
        else
            CHECK(info.x0 * info.x0 / info.gauss_scale > 600.0);
        double D = v == TwoRegimeVariant::bis2 ? 6.0 * (a2 - a4 / (K * K)) : 4.0 * (a2 - a3 / K);
        double xg = 0.5 * info.x0;
        CHECK(tb.evaluate(xg).raw == doctest::Approx(std::exp(-xg * xg / D)).epsilon(1e-14));
        double prev = 1.0;
        for (int i = 1; i <= 30; ++i) {
            double val = tb(info.x0 * 0.1 * i);
            CHECK(val <= prev * (1.0 + 1e-12));
            prev = val;
        }
    }
    CHECK(code_of([] { two_regime_bound(1.0, 10.0, 3.0, 1.0, TwoRegimeVariant::bis2); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("stable median variants") {
    TailBound b2 = stable_median_bound({1.0, 1.0, 1.0}, StableVariant::bis2);
    BoundValue v = b2.fn(8.0);
    CHECK(v.raw == doctest::Approx((1.5 * e * e + 1.0) * 4.0 / 8.0).epsilon(1e-12));
    CHECK(v.vacuous);
    CHECK(v.value == 1.0);

    TailBound ne = stable_median_bound({1.5, 1.0, 1.0}, StableVariant::near2_exp);
    CHECK(ne.empty());
    CHECK(code_of([&] { ne(10.0); }) == ErrorCode::EmptyRange);
    CHECK(ne.valid_lo > ne.valid_hi);

    CHECK(stable_constant({1.99, 1.0, 1.0}, StableVariant::hm) / stable_constant({1.9, 1.0, 1.0}, StableVariant::hm) > 1.0);
    CHECK(code_of([] { stable_median_bound({0.8, 1.0, 1.0}, StableVariant::bis); }) == ErrorCode::PreconditionViolated);

    // range of the bis variant at alpha = 1.2: 4 c sigma^{1/alpha} max(L1, 4e^2)^{1/alpha}
    double a = 1.2;
    TailBound bis = stable_median_bound({a, 1.0, 1.0}, StableVariant::bis);
    double L = std::log(1.0 / (2.0 - a));
    double L1 = (1.0 + 2.0 / (2.0 - a) * L) * std::log(1.0 + 4.0 / (2.0 - a) * L);
    CHECK(bis.valid_lo == doctest::Approx(4.0 * std::pow(std::max(L1, 4.0 * e * e), 1.0 / a)));

    // near-2 point evaluation
    StableSpec s{1.99, 1.0, 1.0};
    PointBound pb = stable_near2_log(s, 4.0);
    double z = 0.01;
    CHECK(pb.x == doctest::Approx(4.0 * 4.0 * std::log(1.0 / z) / z));
    double w = std::log(1.0 / z) / z, g = w * std::log(w);
    double sc = std::pow(4.0, 1.99);
    double raw = sc / std::pow(pb.x, 1.99) * (1.0 / 1.99 + 2.1 * std::exp(2.1 * sc * g / std::pow(pb.x, 1.99)));
    CHECK(pb.value.raw == doctest::Approx(raw).epsilon(1e-12));
}

TEST_CASE("asymptotic slopes") {
    QuadraticSpec hT = make_quadratic_spec(EigenGenerator{EigenKind::square_norm, 1.0}, 50);
    QuadraticSpec vT = make_quadratic_spec(EigenGenerator{EigenKind::sample_variance, 1.0}, 50);
    CHECK(asymptotic_slope(SlopeKind::quad, hT) == doctest::Approx(-pi * pi / 4.0));
    CHECK(asymptotic_slope(SlopeKind::quad, vT) == doctest::Approx(-pi * pi));
    CHECK(asymptotic_slope_area(pi) == doctest::Approx(-1.0));
    QuadraticSpec neg = make_quadratic_spec({{-1.0}});
    CHECK(code_of([&] { asymptotic_slope(SlopeKind::quad_sup, neg); }) == ErrorCode::EmptySpectrum);
}
