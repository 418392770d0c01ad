#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "detbench/extraction.hpp"
#include "detbench/metrics.hpp"

namespace detbench {

/// A model's probability of "the" at one D×N site; p(a) = 1 - p_the.
struct ProbSite {
    std::string site_id;
    double p_the = 0.0;

    bool operator==(const ProbSite&) const = default;
};

/// ProbSite JSONL: {"site_id": str, "p_the": float}. Rejects p_the outside
/// [0, 1], non-numbers and duplicate ids with line-level diagnostics.
std::vector<ProbSite> read_prob_sites_jsonl(std::istream& in);
void write_prob_sites_jsonl(std::ostream& out, std::span<const ProbSite> sites);

/// p_the values keyed by noun lemma.
using NounGroups = std::map<std::string, std::vector<double>>;

/// Groups probabilities by the noun of the site they score. Throws DataError
/// for an unresolvable site id.
NounGroups group_by_noun(std::span<const ProbSite> prob_sites, const SiteIndex& sites);

/// Probability that a noun with the given per-site p_the values ends up
/// attested with both determiners: 1 - prod p - prod (1 - p).
double noun_overlap_probability(std::span<const double> p_the);

/// Expected overlap of the model-generated corpus; N counts the nouns present.
double analytic_overlap(const NounGroups& groups);

/// Expected bias: per-noun max of expected "the" and "a" counts, over S sites.
double analytic_bias(const NounGroups& groups);

struct ProbTransition {
    Determiner context = Determiner::The;
    double response_p_the = 0.0;
};

/// Keeps the transitions whose response site was scored.
std::vector<ProbTransition> resolve_prob_transitions(std::span<const Transition> transitions,
                                                     const SiteIndex& sites,
                                                     std::span<const ProbSite> prob_sites);

/// Expected TPR: mean probability that the response flips the context
/// determiner. No value for zero transitions.
std::optional<double> analytic_tpr(std::span<const ProbTransition> transitions);

struct MleAccuracy {
    double accuracy = 0.0;
    std::size_t sites = 0;
    std::size_t matches = 0;
    std::size_t ties = 0;  // p_the == 0.5 exactly, resolved to "the"
};

/// Agreement between the model's argmax determiner and the observed one.
/// Every prob site must resolve to an observed site.
MleAccuracy mle_accuracy(std::span<const ProbSite> prob_sites, const SiteIndex& observed);

inline constexpr double kDefaultDegeneracyThreshold = 0.98;

/// True when b_hat >= threshold (inclusive).
bool flag_degenerate(double b_hat, double threshold = kDefaultDegeneracyThreshold);

}  // namespace detbench
