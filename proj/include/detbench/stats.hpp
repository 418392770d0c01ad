#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace detbench {

/// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
/// continued fraction on whichever of x, 1 - x converges faster.
double incomplete_beta(double a, double b, double x);

/// Two-sided Student t tail probability P(|T| >= |t|) for df >= 1 (df may be
/// fractional). Throws std::domain_error for df < 1.
double t_sf(double t, double df);

enum class TestKind { PairedT, OneSampleT, Pearson };

std::string_view to_string(TestKind kind);

struct TestResult {
    TestKind kind = TestKind::PairedT;
    double statistic = 0.0;  // t, or r for Pearson
    std::size_t df = 0;
    double p = 1.0;
    bool pass = true;  // p > alpha: no significant deviation
};

inline constexpr double kDefaultAlpha = 0.05;

struct Benchmarks {
    double coca_bias = 0.82;
    double adult_tpr_baseline = 0.215;
    double alpha = kDefaultAlpha;
};

/// Two-sided paired t-test on x - y with df = n - 1. Throws
/// std::invalid_argument when the lengths differ or n < 2. Constant nonzero
/// differences give an infinite statistic and p = 0; all-zero differences
/// give t = 0, p = 1.
TestResult paired_t(std::span<const double> x, std::span<const double> y,
                    double alpha = kDefaultAlpha);

/// Two-sided one-sample t-test of mean(x) against mu, df = n - 1; zero
/// variance is handled like paired_t.
TestResult one_sample_t(std::span<const double> x, double mu, double alpha = kDefaultAlpha);

/// Pearson correlation with df = n - 2 and p from t = r sqrt(df / (1 - r^2)).
/// Throws std::invalid_argument for n < 3 and std::domain_error when either
/// sample is constant.
TestResult pearson_r(std::span<const double> x, std::span<const double> y,
                     double alpha = kDefaultAlpha);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> x);

}  // namespace detbench
