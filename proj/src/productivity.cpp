#include "detbench/productivity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace detbench {

namespace {

void check_bias(double bias) {
    if (!(bias >= 0.5 && bias <= 1.0))
        throw std::domain_error("bias must lie in [0.5, 1], got " + std::to_string(bias));
}

void check_exponent(double exponent) {
    if (!std::isfinite(exponent)) throw std::domain_error("Zipf exponent must be finite");
}

// log of (1 - x)^S, stable for tiny x and large S
double log_pow_complement(double x, double tokens) {
    if (x >= 1.0) return -INFINITY;
    return tokens * std::log1p(-x);
}

// E_r for a known rank probability p.
//   E_r = 1 - q0 - (q1 - q0) - (q2 - q0),  q0 = (1-p)^S,
//   q1 = (b p + 1 - p)^S = (1 - (1-b) p)^S,  q2 = ((1-b) p + 1 - p)^S = (1 - b p)^S
// regrouped as (1 - q1) + (q0 - q2) so both halves keep full precision when
// every q is close to one.
double overlap_for_probability(double p, std::size_t tokens, double bias) {
    if (tokens == 0) return 0.0;
    const double s = static_cast<double>(tokens);
    const double l0 = log_pow_complement(p, s);
    const double l1 = log_pow_complement((1.0 - bias) * p, s);
    const double l2 = log_pow_complement(bias * p, s);
    const double one_minus_q1 = -std::expm1(l1);
    double q0_minus_q2 = 0.0;
    if (std::isfinite(l2)) {
        q0_minus_q2 = std::exp(l2) * std::expm1(l0 - l2);
    } else {
        q0_minus_q2 = std::exp(l0);  // q2 = 0
    }
    double e = one_minus_q1 + q0_minus_q2;
    if (e < 0.0) e = 0.0;
    if (e > 1.0) e = 1.0;
    return e;
}

}  // namespace

double harmonic(std::size_t n, double exponent) {
    if (n == 0) throw std::domain_error("harmonic number needs N >= 1");
    check_exponent(exponent);
    // smallest terms first
    double sum = 0.0;
    for (std::size_t i = n; i >= 1; --i) sum += std::pow(static_cast<double>(i), -exponent);
    return sum;
}

ZipfModel::ZipfModel(std::size_t n, double exponent)
    : n_(n), exponent_(exponent), normalizer_(harmonic(n, exponent)) {}

double ZipfModel::probability(std::size_t rank) const {
    if (rank < 1 || rank > n_)
        throw std::domain_error("rank " + std::to_string(rank) + " outside 1.." +
                                std::to_string(n_));
    return std::pow(static_cast<double>(rank), -exponent_) / normalizer_;
}

double expected_overlap_rank(std::size_t rank, std::size_t tokens, std::size_t types, double bias,
                             double exponent) {
    check_bias(bias);
    ZipfModel zipf(types, exponent);
    return overlap_for_probability(zipf.probability(rank), tokens, bias);
}

OverlapPrediction predict_overlap(std::size_t tokens, std::size_t types, double bias,
                                  double exponent) {
    check_bias(bias);
    ZipfModel zipf(types, exponent);
    OverlapPrediction out;
    out.types = types;
    out.tokens = tokens;
    out.bias = bias;
    out.exponent = exponent;
    out.per_rank.reserve(types);
    double sum = 0.0;
    for (std::size_t r = 1; r <= types; ++r) {
        double e = overlap_for_probability(zipf.probability(r), tokens, bias);
        out.per_rank.push_back(e);
        sum += e;
    }
    out.mean = sum / static_cast<double>(types);
    return out;
}

double expected_overlap(std::size_t tokens, std::size_t types, double bias, double exponent) {
    return predict_overlap(tokens, types, bias, exponent).mean;
}

}  // namespace detbench
