#pragma once

#include "idbounds/chernoff.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idbounds {

struct TailCurve {
    std::vector<double> x_grid;
    std::vector<double> p_hat;
    std::vector<double> ci_lo, ci_hi;       // one-sided bands at `level`
    std::vector<std::size_t> exceed;        // #{v >= x}
    std::size_t count = 0;
    double level = 0.99;
};

// Clopper-Pearson one-sided limits for k successes out of n.
double cp_lower(std::size_t k, std::size_t n, double level);
double cp_upper(std::size_t k, std::size_t n, double level);

TailCurve empirical_tail(const std::vector<double>& values, const std::vector<double>& x_grid, double level = 0.99);

struct MedianEstimate {
    double median = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
};

MedianEstimate empirical_median(const std::vector<double>& values, double level = 0.99);

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
};
MeanEstimate empirical_mean(const std::vector<double>& values);

enum class Verdict { pass, violation, inconclusive, out_of_range, not_audited };
const char* verdict_name(Verdict v);

struct AuditPoint {
    double x = 0.0;         // grid value on the raw scale
    double deviation = 0.0; // x - center - shift
    double p_hat = 0.0, ci_lo = 0.0, ci_hi = 0.0;
    double bound = 0.0;
    std::string regime;
    bool vacuous = false;
    Verdict verdict = Verdict::not_audited;
};

struct AuditOptions {
    double min_p_hat = 0.0;          // points with p_hat below are reported but not audited
    double center_se = 0.0;          // standard error of the center, for sensitivity rows
    std::optional<double> shift;     // overrides bound.shift (needed when it is NaN)
    double shift_se = 0.0;
};

struct SensitivityRow {
    double center = 0.0;
    double shift = 0.0;
    int violations = 0;
    Verdict overall = Verdict::pass;
};

struct VerificationReport {
    std::string bound_name;
    std::string center;
    std::string direction;
    double center_estimate = 0.0;
    double shift = 0.0;
    std::size_t count = 0;
    std::vector<AuditPoint> points;
    int violations = 0;   // upper: VIOLATION points; lower: strict contradictions
    int audited = 0;
    Verdict overall = Verdict::pass;
    std::vector<SensitivityRow> sensitivity;
};

// Curves are on the raw scale; the deviation of x is x - center_estimate - shift.
VerificationReport audit_bound(const TailCurve& curve, const TailBound& bound, std::optional<double> center_estimate,
                               const AuditOptions& opt = {});

enum class SlopeMode { linear, log_x };

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
    int points = 0;
    double x_lo = 0.0, x_hi = 0.0;
};

// Weighted least squares of log p_hat on x (or log x); weights from band widths.
SlopeFit fit_log_slope(const TailCurve& curve, double x_lo, double x_hi, SlopeMode mode = SlopeMode::linear);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);
// Kolmogorov limiting survival function.
double kolmogorov_q(double lambda);

std::vector<double> linear_grid(double lo, double hi, int points);

std::string report_json(const VerificationReport& r, int indent = 2);
void write_report_csv(const VerificationReport& r, const std::string& path);

} // namespace idbounds
