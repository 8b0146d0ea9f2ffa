#pragma once

#include "idbounds/chernoff.hpp"
#include "idbounds/levy_model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace idbounds {

enum class LipNorm { l1, l2, linf };

struct FunctionalProfile {
    double K = 0.0;      // uniform bound on the difference operator, may be <= 0
    double alpha2 = 0.0; // sup of the L2(nu) norm of the difference operator, squared
    std::vector<double> beta;
    double lip_c = 1.0;
    LipNorm lip_norm = LipNorm::l2;
    int n = 1;
};

enum class SumSqConvention { computed, literal };

struct QuadraticSpec {
    std::vector<std::vector<double>> eigs; // per component
    std::vector<double> remainder_sq;      // per component, sum of squares beyond truncation
    std::vector<double> a_i, a_plus_i;     // per component spectral radii
    double a_plus = 0.0, a_minus = 0.0, a_max = 0.0;
    std::vector<double> f2_norms; // one quarter of the per-component sum of squares
    std::optional<double> mean_abs;
    SumSqConvention convention = SumSqConvention::computed;

    int n() const { return static_cast<int>(eigs.size()); }
    double sum_f2() const;
};

QuadraticSpec make_quadratic_spec(std::vector<std::vector<double>> eigs, std::vector<double> remainder_sq = {});
QuadraticSpec make_quadratic_spec(const EigenGenerator& gen, int N, int n_components = 1,
                                  SumSqConvention convention = SumSqConvention::computed);

struct StableSpec {
    double alpha = 1.5;
    double sigma_total = 1.0;
    double lip_c = 1.0;
};

// Poisson-type deviation bound for DF <= K and L2(nu) bound alpha2.
TailBound dev_nico_bound(double K, double alpha2);
HFunction dev_nico_h(double K, double alpha2);
// (1+u)log(1+u) - u, accurate near u = 0; u > -1.
double poisson_phi(double u);

enum class ProductMode { shared_beta, per_component, supremum };

// `models` holds one model per component, or a single model shared by all.
HFunction product_h(const FunctionalProfile& profile, const std::vector<LevyModel>& models, ProductMode mode,
                    double truncation = kInf);

enum class DimFreeMode { lipschitz, norm };

struct DimFreeInput {
    std::vector<double> beta;
    std::vector<LevyModel> models; // one per component or one shared
    double truncation = kInf;
    double lip_c = 1.0;
    std::optional<double> mean_norm; // E|F-EF|_2 (lipschitz) or E|F|_2 (norm)
    std::optional<double> sum_var;   // sum of Var F_i, sets the lipschitz shift when known
};

HFunction dimension_free_h(const DimFreeInput& in);
// Deviation variable is the excess over the shifted center (E f + c sqrt(2 sum Var) or 2E|F|_2).
TailBound dimension_free_bound(const DimFreeInput& in, DimFreeMode mode);

double bounded_support_alpha2(double beta, double R, double second_moment, double mean_abs_f1);
TailBound bounded_support_norm_bound(double beta, double R, double second_moment, double mean_abs_f1);
TailBound bounded_support_bound_from_alpha2(double beta, double R, double alpha2);

enum class QuadForm { exact_h, log_form, min_form };
enum class QuadTarget { lipschitz, sup };

HFunction quad_wiener_h(const QuadraticSpec& spec, double lip_c, QuadTarget target);
TailBound quad_wiener_bound(const QuadraticSpec& spec, double lip_c, QuadForm form, QuadTarget target);

enum class LowerTarget { inf_norm, sup, area };

struct AreaParams {
    double T = 1.0;
    int n = 1;
};

// Asymptotic lower bounds. valid_lo is the soft threshold where the
// expression first drops to 1/4; audit_lo is twice that.
TailBound quad_wiener_lower(const QuadraticSpec& spec, double b, LowerTarget target,
                            const AreaParams& area = {});
double lower_soft_threshold(const std::function<double(double)>& expr);

double quad_euclid_Kb(double f2_norm, double a, double mean_abs, double b);
TailBound quad_euclid_iid_bound(const QuadraticSpec& spec, double b);

enum class AreaVariant { lipschitz, euclid, slope };

double levy_area_Kb(double T, double mean_abs, double b);
TailBound levy_area_bound(double T, int n, double lip_c, double b, AreaVariant variant,
                          std::optional<double> mean_abs = std::nullopt);
double levy_area_slope(double T);
// Envelope h of the p12 bound and the exact h it relaxes.
HFunction levy_area_h(double T, int n, double lip_c);
HFunction levy_area_exact_h(double T, int n, double lip_c);

double id_lower_bound(const LevyModel& m, double x);
TailBound id_lower_tail(const LevyModel& m);

// Median bound (1+Ce) gamma(beta^{-1}(x/4)) for x >= 2 beta(gamma^{-1}(1/(2(1+Ce)))).
TailBound median_bound_general(const std::function<double(double)>& beta_fn,
                               const std::function<double(double)>& gamma_fn,
                               const std::function<double(double)>& gamma_inv, double C);
TailBound median_bound_general(const std::function<double(double)>& beta_fn, const LevyModel& m, double C);
// beta(R) = C' R with the hypothesis constant C taken as written: (1 + Ce/C'^2).
TailBound median_bound_linear(const LevyModel& m, double c_prime, double C);

enum class TwoRegimeVariant { bis2, bis };

struct TwoRegimeInfo {
    double s0 = 0.0;
    double x0 = 0.0;
    double K0 = 1.0;
    double gauss_scale = 0.0; // denominator of the Gaussian exponent
};

TailBound two_regime_bound(double K, double alpha2, double alpha3, double alpha4, TwoRegimeVariant variant,
                           TwoRegimeInfo* info = nullptr);
// Unique positive root u of (e^u - 1)/u = m for m > 1.
double solve_expm1_ratio(double m);

enum class StableVariant { hm, bis2, bis, near2_exp, near2_log };

struct PointBound {
    double x = 0.0;
    BoundValue value;
};

// epsilon enters only the near-2 variants; they hold for "alpha close to 2" with no stated
// threshold, so small epsilon values carry no guarantee at fixed alpha.
TailBound stable_median_bound(const StableSpec& spec, StableVariant variant, double epsilon = 0.1);
PointBound stable_near2_log(const StableSpec& spec, double b, double epsilon = 0.1);
double stable_constant(const StableSpec& spec, StableVariant variant);

enum class SlopeKind { quad, quad_sup, area };
double asymptotic_slope(SlopeKind kind, const QuadraticSpec& spec);
double asymptotic_slope_area(double T);

} // namespace idbounds
