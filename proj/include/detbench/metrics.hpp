#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include "detbench/extraction.hpp"

namespace detbench {

/// Determiner counts of one noun type.
struct NounCounts {
    std::size_t the = 0;
    std::size_t a = 0;

    std::size_t total() const noexcept { return the + a; }
    std::size_t favoured() const noexcept { return the > a ? the : a; }
    bool both() const noexcept { return the > 0 && a > 0; }
};

using NounTable = std::map<std::string, NounCounts>;

NounTable count_by_noun(std::span<const DxNSite> sites);

/// Share of noun types seen with both determiners among those seen with
/// either. Empty input gives 0.
double empirical_overlap(std::span<const DxNSite> sites);
double empirical_overlap(const NounTable& counts);

/// Aggregate bias: sum of per-noun favoured counts over all D×N tokens.
/// No value for empty input.
std::optional<double> bias(std::span<const DxNSite> sites);
std::optional<double> bias(const NounTable& counts);

/// Lookup of sites by id; throws DataError on duplicate ids.
class SiteIndex {
public:
    explicit SiteIndex(std::span<const DxNSite> sites);
    const DxNSite* find(std::string_view site_id) const;
    /// Throws DataError naming the id when it does not resolve.
    const DxNSite& at(std::string_view site_id) const;

private:
    std::unordered_map<std::string_view, const DxNSite*> by_id_;
};

/// Share of transitions whose response determiner differs from the context
/// determiner. No value when there are no transitions.
std::optional<double> empirical_tpr(std::span<const Transition> transitions, const SiteIndex& sites);

std::optional<double> token_type_ratio(std::size_t tokens, std::size_t types);
std::optional<double> token_type_ratio(std::span<const DxNSite> sites);

struct DyadStats {
    std::string dyad_id;
    Role role = Role::Child;
    std::size_t types = 0;   // N
    std::size_t tokens = 0;  // S
    std::optional<double> bias;
    double empirical_overlap = 0.0;
    std::optional<double> predicted_overlap;
    std::size_t n_transitions = 0;  // T
    std::optional<double> tpr;
    bool degenerate = false;
};

struct DyadStatsOptions {
    double degeneracy_threshold = 0.98;
    double zipf_exponent = 1.0;
};

/// Stats of one speaker role within one dyad. `sites` and `transitions` may
/// cover several roles; only sites of `role` and transitions whose response
/// has `role` are counted.
DyadStats dyad_stats(std::string dyad_id, Role role, std::span<const DxNSite> sites,
                     std::span<const Transition> transitions, const SiteIndex& index,
                     const DyadStatsOptions& options = {});

}  // namespace detbench
