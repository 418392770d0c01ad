#pragma once

#include <cstddef>
#include <cstdint>

namespace detbench {

struct SimConfig {
    std::size_t types = 1;   // N
    std::size_t tokens = 0;  // S
    double bias = 0.5;
    double exponent = 1.0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
};

/// Overlap of one sampled corpus.
struct SampledOverlap {
    std::size_t both = 0;      // ranks drawn with both determiners
    std::size_t attested = 0;  // ranks drawn at least once
    std::size_t types = 0;

    /// both / N: the quantity whose expectation is the closed-form overlap.
    double over_ranks() const;
    /// both / attested: the empirical overlap of the sampled corpus itself.
    double over_attested() const;
};

/// Seed of the RNG substream for one trial; a pure function of both inputs.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index);

/// Samples one corpus: each rank gets a favoured determiner uniformly, S
/// nouns are drawn from Zipf(N, a) and each takes its favoured determiner
/// with probability b.
SampledOverlap simulate_corpus(const SimConfig& config, std::size_t trial_index);

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t trials = 0;
};

/// Mean and standard error of over_ranks() across trials. The result depends
/// only on the config, never on `threads` (0 = DETBENCH_THREADS or hardware).
McEstimate mc_expected_overlap(const SimConfig& config, unsigned threads = 0);

/// Thread count from DETBENCH_THREADS, else std::thread::hardware_concurrency().
unsigned default_thread_count();

}  // namespace detbench
