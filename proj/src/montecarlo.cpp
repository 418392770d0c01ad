#include "detbench/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace detbench {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in [0, 1) from the top 53 bits; independent of <random>'s
// implementation-defined distributions
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

void validate(const SimConfig& c) {
    if (c.types == 0) throw std::invalid_argument("simulation needs N >= 1");
    if (c.trials == 0) throw std::invalid_argument("simulation needs trials >= 1");
    if (!(c.bias >= 0.5 && c.bias <= 1.0)) throw std::domain_error("bias must lie in [0.5, 1]");
    if (!std::isfinite(c.exponent)) throw std::domain_error("Zipf exponent must be finite");
}

std::vector<double> zipf_cdf(std::size_t n, double exponent) {
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t r = 1; r <= n; ++r) {
        acc += std::pow(static_cast<double>(r), -exponent);
        cdf[r - 1] = acc;
    }
    for (auto& v : cdf) v /= acc;
    cdf.back() = 1.0;
    return cdf;
}

SampledOverlap sample(const SimConfig& config, const std::vector<double>& cdf,
                      std::size_t trial_index) {
    std::mt19937_64 gen(trial_seed(config.seed, trial_index));
    const std::size_t n = config.types;

    // favoured determiner per rank: true = "the"
    std::vector<char> favours_the(n);
    for (auto& f : favours_the) f = static_cast<char>(gen() >> 63);

    std::vector<char> saw_the(n, 0), saw_a(n, 0);
    for (std::size_t i = 0; i < config.tokens; ++i) {
        const double u = unit(gen);
        auto rank = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                             cdf.begin());
        if (rank >= n) rank = n - 1;
        const bool favoured = unit(gen) < config.bias;
        const bool is_the = favoured == static_cast<bool>(favours_the[rank]);
        (is_the ? saw_the : saw_a)[rank] = 1;
    }

    SampledOverlap out;
    out.types = n;
    for (std::size_t r = 0; r < n; ++r) {
        if (saw_the[r] || saw_a[r]) ++out.attested;
        if (saw_the[r] && saw_a[r]) ++out.both;
    }
    return out;
}

}  // namespace

double SampledOverlap::over_ranks() const {
    return types == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(types);
}

double SampledOverlap::over_attested() const {
    return attested == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(attested);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(trial_index + 0x632be59bd9b4e019ULL));
}

SampledOverlap simulate_corpus(const SimConfig& config, std::size_t trial_index) {
    validate(config);
    return sample(config, zipf_cdf(config.types, config.exponent), trial_index);
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("DETBENCH_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

McEstimate mc_expected_overlap(const SimConfig& config, unsigned threads) {
    validate(config);
    if (config.trials < 2) throw std::invalid_argument("Monte Carlo estimate needs trials >= 2");
    const auto cdf = zipf_cdf(config.types, config.exponent);
    std::vector<double> values(config.trials);

    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) values[t] = sample(config, cdf, t).over_ranks();
    };
    if (threads <= 1) {
        work(0, config.trials);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (config.trials + threads - 1) / threads;
        for (unsigned k = 0; k < threads; ++k) {
            const std::size_t begin = k * chunk;
            const std::size_t end = std::min(config.trials, begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
    }

    // serial reduction in trial order keeps the result bit-identical
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(config.trials);
    const double m = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    McEstimate est;
    est.mean = m;
    est.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    est.trials = config.trials;
    return est;
}

}  // namespace detbench
