#pragma once

// Small statistics kernel: Student-t distribution through the regularized
// incomplete beta function, t-tests in raw and summary form, and proportion
// intervals.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ruqa::stats {

class StatsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Tail { Left, Right, Two };

inline std::string_view to_string(Tail t) {
    switch (t) {
        case Tail::Left: return "left";
        case Tail::Right: return "right";
        case Tail::Two: return "two";
    }
    return "two";
}

inline Tail parse_tail(std::string_view s) {
    if (s == "left") return Tail::Left;
    if (s == "right") return Tail::Right;
    if (s == "two") return Tail::Two;
    throw StatsError("unknown tail '" + std::string(s) + "' (expected left|right|two)");
}

struct TTestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    Tail tail = Tail::Two;
};

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw StatsError("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Unbiased (n - 1) sample variance, two-pass.
inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw StatsError("variance needs at least two samples");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

inline double stddev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 200000;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw StatsError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw StatsError("incomplete beta needs a, b > 0");
    if (x < 0.0 || x > 1.0) throw StatsError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Student-t cumulative distribution P(T <= t) with `df` degrees of freedom.
inline double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw StatsError("t_cdf requires df > 0");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

inline double t_p_value(double statistic, double df, Tail tail) {
    double p = 1.0;
    switch (tail) {
        case Tail::Left: p = t_cdf(statistic, df); break;
        case Tail::Right: p = t_cdf(-statistic, df); break;
        case Tail::Two: p = 2.0 * t_cdf(-std::fabs(statistic), df); break;
    }
    return std::clamp(p, 0.0, 1.0);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Inverse standard normal CDF. Acklam's rational approximation followed by
/// one Halley step against erfc, which brings |error| well below 1e-12.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw StatsError("normal_quantile requires p in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

/// One-sample t-test of H0: mean == mu0 against the alternative selected by `tail`.
inline TTestResult one_sample_t(std::span<const double> samples, double mu0, Tail tail) {
    if (samples.size() < 2) throw StatsError("one-sample t-test needs n >= 2");
    const double n = static_cast<double>(samples.size());
    const double sd = stddev(samples);
    if (!(sd > 0.0)) throw StatsError("one-sample t-test undefined: samples have zero variance");
    TTestResult r;
    r.statistic = (mean(samples) - mu0) / (sd / std::sqrt(n));
    r.df = n - 1.0;
    r.tail = tail;
    r.p_value = t_p_value(r.statistic, r.df, tail);
    return r;
}

struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

enum class Variance { Welch, Pooled };

/// Two-sample t-test from summary statistics. Welch's unequal-variance test
/// with Welch-Satterthwaite df by default; `Variance::Pooled` gives Student's test.
inline TTestResult two_sample_t_from_summary(const SampleSummary& s1, const SampleSummary& s2, Tail tail,
                                             Variance variance_model = Variance::Welch) {
    if (s1.n < 2 || s2.n < 2) throw StatsError("two-sample t-test needs n1, n2 >= 2");
    if (s1.sd < 0.0 || s2.sd < 0.0) throw StatsError("standard deviations must be non-negative");
    if (s1.sd == 0.0 && s2.sd == 0.0) throw StatsError("two-sample t-test undefined: both standard deviations are zero");
    const double n1 = static_cast<double>(s1.n);
    const double n2 = static_cast<double>(s2.n);
    TTestResult r;
    r.tail = tail;
    if (variance_model == Variance::Welch) {
        const double v1 = s1.sd * s1.sd / n1;
        const double v2 = s2.sd * s2.sd / n2;
        r.statistic = (s1.mean - s2.mean) / std::sqrt(v1 + v2);
        r.df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
    } else {
        const double sp2 = ((n1 - 1.0) * s1.sd * s1.sd + (n2 - 1.0) * s2.sd * s2.sd) / (n1 + n2 - 2.0);
        r.statistic = (s1.mean - s2.mean) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
        r.df = n1 + n2 - 2.0;
    }
    r.p_value = t_p_value(r.statistic, r.df, tail);
    return r;
}

inline TTestResult welch_t_from_summary(double mean1, double sd1, std::size_t n1, double mean2, double sd2,
                                        std::size_t n2, Tail tail) {
    return two_sample_t_from_summary({mean1, sd1, n1}, {mean2, sd2, n2}, tail, Variance::Welch);
}

inline TTestResult two_sample_t(std::span<const double> a, std::span<const double> b, Tail tail,
                                Variance variance_model = Variance::Welch) {
    if (a.size() < 2 || b.size() < 2) throw StatsError("two-sample t-test needs n1, n2 >= 2");
    return two_sample_t_from_summary({mean(a), stddev(a), a.size()}, {mean(b), stddev(b), b.size()}, tail,
                                     variance_model);
}

struct ProportionInterval {
    double half_width = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Wald interval p_hat +- z * sqrt(p_hat (1 - p_hat) / n), bounds clamped to [0, 1].
inline ProportionInterval wald_ci(double p_hat, std::size_t n, double confidence = 0.95) {
    if (n == 0) throw StatsError("wald_ci requires n >= 1");
    if (p_hat < 0.0 || p_hat > 1.0) throw StatsError("wald_ci requires p_hat in [0, 1]");
    if (!(confidence > 0.0 && confidence < 1.0)) throw StatsError("confidence must be in (0, 1)");
    const double z = normal_quantile(0.5 + confidence / 2.0);
    ProportionInterval ci;
    ci.half_width = std::clamp(z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n)), 0.0, 1.0);
    ci.lo = std::clamp(p_hat - ci.half_width, 0.0, 1.0);
    ci.hi = std::clamp(p_hat + ci.half_width, 0.0, 1.0);
    return ci;
}

/// Wilson score interval; half_width is half the (asymmetric) interval length.
inline ProportionInterval wilson_ci(double p_hat, std::size_t n, double confidence = 0.95) {
    if (n == 0) throw StatsError("wilson_ci requires n >= 1");
    if (p_hat < 0.0 || p_hat > 1.0) throw StatsError("wilson_ci requires p_hat in [0, 1]");
    if (!(confidence > 0.0 && confidence < 1.0)) throw StatsError("confidence must be in (0, 1)");
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double nn = static_cast<double>(n);
    const double denom = 1.0 + z * z / nn;
    const double centre = (p_hat + z * z / (2.0 * nn)) / denom;
    const double spread = z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z * z / (4.0 * nn * nn)) / denom;
    ProportionInterval ci;
    ci.lo = std::clamp(centre - spread, 0.0, 1.0);
    ci.hi = std::clamp(centre + spread, 0.0, 1.0);
    ci.half_width = (ci.hi - ci.lo) / 2.0;
    return ci;
}

}  // namespace ruqa::stats
