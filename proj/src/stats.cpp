#include "detbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace detbench {

namespace {

constexpr int kMaxIterations = 20000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (Numerical Recipes betacf, modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
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
        if (std::fabs(del - 1.0) < kEpsilon) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge (a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) +
                             ", x=" + std::to_string(x) + ")");
}

// Stirling remainder lgamma(z) - [(z - 1/2) ln z - z + ln(2 pi) / 2], z >= 10.
double stirling_tail(double z) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

// ln B(a, b). Large arguments go through Stirling differences so that the
// huge lgamma terms never cancel each other.
double log_beta(double a, double b) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (hi < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double tails = stirling_tail(hi) - stirling_tail(hi + lo);
    if (lo < 10.0) {
        // lgamma(hi + lo) - lgamma(hi)
        const double rise = (hi - 0.5) * std::log1p(lo / hi) + lo * std::log(hi + lo) - lo - tails;
        return std::lgamma(lo) - rise;
    }
    constexpr double kHalfLog2Pi = 0.91893853320467274178;
    return kHalfLog2Pi - (hi - 0.5) * std::log1p(lo / hi) - (lo - 0.5) * std::log1p(hi / lo) -
           0.5 * std::log(hi + lo) + stirling_tail(lo) + tails;
}

// I_x(a, b) given both x and y = 1 - x, so callers can supply an exact y.
double incomplete_beta_split(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_x = x < 0.5 ? std::log(x) : std::log1p(-y);
    const double log_y = y < 0.5 ? std::log(y) : std::log1p(-x);
    const double front = std::exp(a * log_x + b * log_y - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

struct Moments {
    double mean;
    double sd;
};

Moments moments(std::span<const double> x) { return {mean(x), sample_sd(x)}; }

// t statistic of a mean difference, with the degenerate cases resolved.
TestResult t_from_moments(TestKind kind, double diff_mean, double sd, std::size_t n, double alpha) {
    TestResult r;
    r.kind = kind;
    r.df = n - 1;
    const double scale = std::max(1.0, std::fabs(diff_mean));
    if (sd <= 1e-13 * scale) {
        if (std::fabs(diff_mean) <= 1e-15 * scale) {
            r.statistic = 0.0;
            r.p = 1.0;
        } else {
            r.statistic = std::copysign(std::numeric_limits<double>::infinity(), diff_mean);
            r.p = 0.0;
        }
    } else {
        r.statistic = diff_mean / (sd / std::sqrt(static_cast<double>(n)));
        r.p = t_sf(r.statistic, static_cast<double>(r.df));
    }
    r.pass = r.p > alpha;
    return r;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta needs x in [0, 1]");
    return incomplete_beta_split(a, b, x, 1.0 - x);
}

double t_sf(double t, double df) {
    if (!(df >= 1.0)) throw std::domain_error("t distribution needs df >= 1");
    if (std::isnan(t)) throw std::domain_error("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    // P(|T| >= |t|) = I_x(df/2, 1/2) with x = df/(df+t^2); 1 - x is formed
    // directly so it keeps full precision when t^2 << df.
    const double t2 = t * t;
    const double p = incomplete_beta_split(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
    return std::clamp(p, 0.0, 1.0);
}

std::string_view to_string(TestKind kind) {
    switch (kind) {
        case TestKind::PairedT: return "paired_t";
        case TestKind::OneSampleT: return "one_sample_t";
        case TestKind::Pearson: return "pearson";
    }
    return "paired_t";
}

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of an empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

TestResult paired_t(std::span<const double> x, std::span<const double> y, double alpha) {
    if (x.size() != y.size()) throw std::invalid_argument("paired t-test needs equal lengths");
    if (x.size() < 2) throw std::invalid_argument("paired t-test needs n >= 2");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
    auto m = moments(d);
    return t_from_moments(TestKind::PairedT, m.mean, m.sd, d.size(), alpha);
}

TestResult one_sample_t(std::span<const double> x, double mu, double alpha) {
    if (x.size() < 2) throw std::invalid_argument("one-sample t-test needs n >= 2");
    auto m = moments(x);
    return t_from_moments(TestKind::OneSampleT, m.mean - mu, m.sd, x.size(), alpha);
}

TestResult pearson_r(std::span<const double> x, std::span<const double> y, double alpha) {
    if (x.size() != y.size()) throw std::invalid_argument("correlation needs equal lengths");
    if (x.size() < 3) throw std::invalid_argument("correlation needs n >= 3");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("correlation of a constant sample");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::fmax(-1.0, std::fmin(1.0, r));

    TestResult out;
    out.kind = TestKind::Pearson;
    out.statistic = r;
    out.df = x.size() - 2;
    const double denom = 1.0 - r * r;
    if (denom <= 0.0) {
        out.p = 0.0;
    } else {
        const double t = r * std::sqrt(static_cast<double>(out.df) / denom);
        out.p = t_sf(t, static_cast<double>(out.df));
    }
    out.pass = out.p > alpha;
    return out;
}

}  // namespace detbench
