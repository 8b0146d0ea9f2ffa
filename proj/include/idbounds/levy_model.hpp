#pragma once

#include "idbounds/chernoff.hpp"
#include "idbounds/numerics.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace idbounds {

// Radial families: nu(|y| in dr) = sigma_total * rho(r) dr.
struct Stable {
    double alpha = 1.0;
    double sigma_total = 1.0;
};
struct LogKernel {
    double sigma_total = 1.0;
};
struct GaussKernel {
    double sigma_total = 1.0;
};

enum class EigenKind { square_norm, sample_variance };

// Closed-form eigenvalues of the integrated squared Brownian motion (square_norm)
// and of the Brownian sample variance (sample_variance) on [0, T].
struct EigenGenerator {
    EigenKind kind = EigenKind::square_norm;
    double T = 1.0;
};

// One-dimensional: nu(dy) = sum_k exp(-|y|/|a_k|) / (2|y|) on the side sign(a_k).
struct QuadraticSpectral {
    std::vector<double> eigs;
    int N = 0;
    std::optional<EigenGenerator> generator;
    double remainder_sq = 0.0; // sum of a_k^2 beyond the truncation, 0 without a generator
};

// nu(dy) = 1 / (2|y| sinh(pi |y| / T)) on the real line.
struct LevyArea {
    double T = 1.0;
};

// Only the absolute moments of orders 1..4 are known.
struct BoundedSupport {
    double R_support = 1.0;
    std::array<double, 4> abs_moments{};
};

using LevyModel = std::variant<Stable, LogKernel, GaussKernel, QuadraticSpectral, LevyArea, BoundedSupport>;

std::string model_name(const LevyModel& m);

// Validated constructors; radial families check that the small-jump second moment is finite.
LevyModel make_stable(double alpha, double sigma_total);
LevyModel make_log_kernel(double sigma_total);
LevyModel make_gauss_kernel(double sigma_total);
LevyModel make_quadratic(std::vector<double> eigs);
LevyModel make_quadratic(const EigenGenerator& gen, int N);
LevyModel make_levy_area(double T);
LevyModel make_bounded_support(double R_support, const std::array<double, 4>& abs_moments);

const QuadraticSpectral& as_quadratic(const LevyModel& m);

std::vector<double> generate_eigs(const EigenGenerator& gen, int N);
double eig_sum(const EigenGenerator& gen);               // sum of a_k
double eig_sum_sq(const EigenGenerator& gen);            // sum of a_k^2, closed form
double eig_sum_sq_remainder(const EigenGenerator& gen, int N);
double eig_sum_sq_literal(const EigenGenerator& gen);    // the value printed with the eigenvalue formulas (T^2/2, T^2/6)

// Mass per unit radius: nu(|y| in dr) = radial_density(m, r) dr.
double radial_density(const LevyModel& m, double r);
// Signed one-dimensional density for QuadraticSpectral and LevyArea.
double line_density(const LevyModel& m, double y);

double tail_mass(const LevyModel& m, double R);
double gamma_envelope(const LevyModel& m, double R);
double gamma_exact(const LevyModel& m, double R); // 1 - exp(-tail_mass)
double inverse_gamma(const LevyModel& m, double p);

double truncated_abs_moment(const LevyModel& m, int k, double R = kInf);

// Integral of |y|^k (e^{t|y|} - 1) over {|y| <= R}.
double exp_weighted_moment(const LevyModel& m, int k, double t, double R = kInf);
// Same integral restricted to y > 0 (radial families are taken symmetric).
double exp_weighted_moment_positive(const LevyModel& m, int k, double t, double R = kInf);

// Exponential abscissa for the untruncated measure: sup{t : moments finite}.
double exp_abscissa(const LevyModel& m, double R = kInf);
double exp_abscissa_positive(const LevyModel& m, double R = kInf);

// Closed-form envelope of exp_weighted_moment(LevyArea{T}, 1, t).
double levy_area_exp_envelope(double T, double t);

// Spectral radii of a set of eigenvalues.
double spectral_a(const std::vector<double>& eigs);
double spectral_a_plus(const std::vector<double>& eigs);
double spectral_a_minus(const std::vector<double>& eigs);

} // namespace idbounds
