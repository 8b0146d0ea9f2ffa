#include "doctest.h"

#include "idbounds/errors.hpp"
#include "idbounds/rng.hpp"
#include "idbounds/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace idbounds;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

std::vector<double> exponential_sample(double rate, std::size_t n, std::uint64_t seed) {
    Xoshiro256 g(seed, 0, 0);
    std::vector<double> v(n);
    for (double& x : v) x = g.exponential() / rate;
    return v;
}

TailBound scaled_exp_tail(double k) {
    // P(E - 1 >= d) = e^{-(d+1)} for a unit exponential centered at its mean
    TailBound b;
    b.name = "scaled_exp";
    b.center = Center::mean;
    b.fn = [k](double d) { return clamp_bound(k * std::exp(-(d + 1.0))); };
    return b;
}

} // namespace

TEST_CASE("Clopper-Pearson limits") {
    std::size_t n = 50;
    CHECK(cp_upper(0, n, 0.99) == doctest::Approx(1.0 - std::pow(0.01, 1.0 / n)).epsilon(1e-12));
    CHECK(cp_lower(n, n, 0.99) == doctest::Approx(std::pow(0.01, 1.0 / n)).epsilon(1e-12));
    CHECK(cp_lower(0, n, 0.99) == 0.0);
    CHECK(cp_upper(n, n, 0.99) == 1.0);

    // one-sided coverage at p = 0.1
    std::mt19937_64 rng(1);
    std::binomial_distribution<std::size_t> bin(n, 0.1);
    int covered_hi = 0, covered_lo = 0, reps = 4000;
    for (int r = 0; r < reps; ++r) {
        std::size_t k = bin(rng);
        covered_hi += cp_upper(k, n, 0.99) >= 0.1;
        covered_lo += cp_lower(k, n, 0.99) <= 0.1;
    }
    CHECK(covered_hi >= 0.985 * reps);
    CHECK(covered_lo >= 0.985 * reps);
}

TEST_CASE("empirical_tail") {
    std::vector<double> c(1000, 1.0);
    TailCurve t = empirical_tail(c, {0.5, 1.0, 1.5});
    CHECK(t.p_hat == std::vector<double>{1.0, 1.0, 0.0});
    CHECK(t.ci_hi[0] == 1.0);
    CHECK(t.ci_lo[2] == 0.0);
    CHECK(t.ci_hi[2] == doctest::Approx(1.0 - std::pow(0.01, 1.0 / 1000)));

    std::vector<double> v = exponential_sample(1.0, 5000, 3);
    std::vector<double> grid = linear_grid(0.0, 4.0, 9);
    TailCurve a = empirical_tail(v, grid);
    std::mt19937_64 rng(4);
    std::shuffle(v.begin(), v.end(), rng);
    TailCurve b = empirical_tail(v, grid);
    CHECK(a.exceed == b.exceed);
    CHECK(a.ci_lo == b.ci_lo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.ci_lo[i] <= a.p_hat[i]);
        CHECK(a.p_hat[i] <= a.ci_hi[i]);
    }
    CHECK(code_of([] { empirical_tail({}, {1.0}); }) == ErrorCode::EmptyBatch);
    CHECK(code_of([] { empirical_tail({1.0}, {2.0, 1.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("median and mean estimates") {
    Xoshiro256 g(7, 0, 0);
    std::size_t n = 10000;
    std::vector<double> v(n);
    for (double& x : v) x = g.normal();
    MedianEstimate m = empirical_median(v);
    CHECK(m.ci_lo <= 0.0);
    CHECK(m.ci_hi >= 0.0);
    // asymptotic half-width z sqrt(pi/2)/sqrt(n) with the two-sided 99% z
    double half = 2.5758 * std::sqrt(std::acos(-1.0) / 2.0) / std::sqrt(n);
    CHECK((m.ci_hi - m.ci_lo) / 2.0 == doctest::Approx(half).epsilon(0.15));
    MeanEstimate me = empirical_mean(v);
    CHECK(me.se == doctest::Approx(0.01).epsilon(0.05));
    CHECK(std::abs(me.mean) < 5.0 * me.se);

    MedianEstimate tiny = empirical_median({1.0, 2.0, 3.0});
    CHECK(tiny.median == 2.0);
    CHECK(std::isinf(tiny.ci_hi));
}

TEST_CASE("audit verdicts on an exponential sample") {
    std::vector<double> v = exponential_sample(1.0, 200000, 11);
    std::vector<double> grid = linear_grid(1.5, 9.0, 16);
    TailCurve c = empirical_tail(v, grid);
    MeanEstimate me = empirical_mean(v);

    VerificationReport loose = audit_bound(c, scaled_exp_tail(1.5), me.mean);
    CHECK(loose.violations == 0);
    CHECK(loose.overall == Verdict::pass);
    CHECK(loose.audited == 16);
    int passes = 0;
    for (const auto& p : loose.points) passes += p.verdict == Verdict::pass;
    CHECK(passes >= 12);

    VerificationReport tight = audit_bound(c, scaled_exp_tail(0.5), me.mean);
    CHECK(tight.overall == Verdict::violation);
    CHECK(tight.violations >= 12);

    // the true tail is not declared violated; 16 one-sided tests need a wider band than 99%
    VerificationReport exact = audit_bound(empirical_tail(v, grid, 0.9999), scaled_exp_tail(1.0), 1.0);
    CHECK(exact.violations == 0);

    AuditOptions o;
    o.min_p_hat = 1e-3;
    o.center_se = me.se;
    VerificationReport w = audit_bound(c, scaled_exp_tail(1.5), me.mean, o);
    CHECK(w.audited < 16);
    REQUIRE(w.sensitivity.size() == 2);
    CHECK(w.sensitivity[0].center == doctest::Approx(me.mean - 2.0 * me.se));
    for (const auto& p : w.points)
        if (p.p_hat < 1e-3) CHECK(p.verdict == Verdict::not_audited);

    CHECK(code_of([&] { audit_bound(c, scaled_exp_tail(1.0), std::nullopt); }) == ErrorCode::CenterMismatch);
    TailBound shifted = scaled_exp_tail(1.0);
    shifted.center = Center::shifted_mean;
    shifted.shift = std::nan("");
    CHECK(code_of([&] { audit_bound(c, shifted, 1.0); }) == ErrorCode::CenterMismatch);
    AuditOptions so;
    so.shift = 0.5;
    VerificationReport sr = audit_bound(c, shifted, 1.0, so);
    CHECK(sr.points[0].deviation == doctest::Approx(grid[0] - 1.5));
}

TEST_CASE("lower-bound audits") {
    std::vector<double> v = exponential_sample(1.0, 100000, 12);
    TailCurve c = empirical_tail(v, linear_grid(0.5, 6.0, 12));
    auto lower = [](double k) {
        TailBound b;
        b.name = "lower";
        b.direction = Direction::lower;
        b.center = Center::median;
        b.audit_lo = 1.0;
        b.fn = [k](double x) { return clamp_bound(k * std::exp(-x), "lower"); };
        return b;
    };
    // P(E >= x) = e^{-x}, so with center 0: a factor 0.5 holds and a factor 2 contradicts everywhere
    VerificationReport ok = audit_bound(c, lower(0.5), 0.0);
    CHECK(ok.overall == Verdict::pass);
    CHECK(ok.violations == 0);
    for (const auto& p : ok.points)
        if (p.deviation < 1.0) CHECK(p.verdict != Verdict::pass);
    VerificationReport bad = audit_bound(c, lower(2.0), 0.0);
    CHECK(bad.overall == Verdict::violation);
    CHECK(bad.violations == bad.audited);
}

TEST_CASE("tail slope fits") {
    std::vector<double> v = exponential_sample(2.0, 400000, 13);
    TailCurve c = empirical_tail(v, linear_grid(0.5, 5.0, 19));
    SlopeFit f = fit_log_slope(c, 0.5, 5.0);
    CHECK(std::abs(f.slope + 2.0) < 4.0 * f.stderr_);
    CHECK(f.stderr_ < 0.1);

    // Pareto(3): P(X >= x) = x^{-3}, slope -3 against log x
    Xoshiro256 g(14, 0, 0);
    std::vector<double> p(400000);
    for (double& x : p) x = std::pow(g.uniform_pos(), -1.0 / 3.0);
    TailCurve pc = empirical_tail(p, linear_grid(1.0, 10.0, 19));
    SlopeFit pf = fit_log_slope(pc, 1.0, 10.0, SlopeMode::log_x);
    CHECK(std::abs(pf.slope + 3.0) < 4.0 * pf.stderr_);

    CHECK(code_of([&] { fit_log_slope(c, 0.5, 1.0); }) == ErrorCode::InsufficientTail);
    CHECK(code_of([&] { fit_log_slope(c, 40.0, 50.0); }) == ErrorCode::InsufficientTail);
}

TEST_CASE("Kolmogorov-Smirnov") {
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(1.358) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(kolmogorov_q(1.628) == doctest::Approx(0.01).epsilon(0.01));
    std::vector<double> a = exponential_sample(1.0, 20000, 15), b = exponential_sample(1.0, 20000, 16);
    CHECK(ks_two_sample(a, b).p_value > 1e-3);
    std::vector<double> c = exponential_sample(1.1, 20000, 17);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
    CHECK(ks_one_sample(a, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }).p_value > 1e-3);
    CHECK(ks_two_sample({1.0, 2.0}, {1.0, 2.0}).statistic == 0.0);
}
