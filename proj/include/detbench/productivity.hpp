#pragma once

#include <cstddef>
#include <vector>

namespace detbench {

/// Generalized harmonic number H(N, a) = sum_{i=1..N} 1 / i^a. Throws
/// std::domain_error for N = 0.
double harmonic(std::size_t n, double exponent = 1.0);

/// Zipf distribution over ranks 1..N: p_r = 1 / (r^a H(N, a)).
class ZipfModel {
public:
    explicit ZipfModel(std::size_t n, double exponent = 1.0);

    std::size_t size() const noexcept { return n_; }
    double exponent() const noexcept { return exponent_; }
    double normalizer() const noexcept { return normalizer_; }
    /// Probability of rank r (1-based).
    double probability(std::size_t rank) const;

private:
    std::size_t n_;
    double exponent_;
    double normalizer_;
};

/// Probability that the noun of rank r shows up with both determiners in S
/// independent draws when its favoured determiner is chosen with probability b.
double expected_overlap_rank(std::size_t rank, std::size_t tokens, std::size_t types, double bias,
                             double exponent = 1.0);

struct OverlapPrediction {
    std::size_t types = 0;   // N
    std::size_t tokens = 0;  // S
    double bias = 0.0;
    double exponent = 1.0;
    std::vector<double> per_rank;  // E_r for r = 1..N
    double mean = 0.0;             // expected overlap of the sample
};

OverlapPrediction predict_overlap(std::size_t tokens, std::size_t types, double bias,
                                  double exponent = 1.0);

/// Expected overlap of a fully productive grammar given S D×N tokens over N
/// noun types with aggregate bias b.
double expected_overlap(std::size_t tokens, std::size_t types, double bias, double exponent = 1.0);

}  // namespace detbench
