#include "detbench/metrics.hpp"

#include <vector>

#include "detbench/productivity.hpp"

namespace detbench {

NounTable count_by_noun(std::span<const DxNSite> sites) {
    NounTable table;
    for (const auto& s : sites) {
        auto& c = table[s.noun_lemma];
        if (s.determiner == Determiner::The)
            ++c.the;
        else
            ++c.a;
    }
    return table;
}

double empirical_overlap(const NounTable& counts) {
    std::size_t seen = 0, both = 0;
    for (const auto& [noun, c] : counts) {
        if (c.total() == 0) continue;
        ++seen;
        if (c.both()) ++both;
    }
    return seen == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(seen);
}

double empirical_overlap(std::span<const DxNSite> sites) {
    return empirical_overlap(count_by_noun(sites));
}

std::optional<double> bias(const NounTable& counts) {
    std::size_t favoured = 0, total = 0;
    for (const auto& [noun, c] : counts) {
        favoured += c.favoured();
        total += c.total();
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(favoured) / static_cast<double>(total);
}

std::optional<double> bias(std::span<const DxNSite> sites) { return bias(count_by_noun(sites)); }

SiteIndex::SiteIndex(std::span<const DxNSite> sites) {
    by_id_.reserve(sites.size());
    for (const auto& s : sites) {
        auto [it, inserted] = by_id_.emplace(s.site_id, &s);
        if (!inserted) throw DataError("duplicate site_id '" + s.site_id + "'");
    }
}

const DxNSite* SiteIndex::find(std::string_view site_id) const {
    auto it = by_id_.find(site_id);
    return it == by_id_.end() ? nullptr : it->second;
}

const DxNSite& SiteIndex::at(std::string_view site_id) const {
    if (auto* s = find(site_id)) return *s;
    throw DataError("unknown site_id '" + std::string(site_id) + "'");
}

std::optional<double> empirical_tpr(std::span<const Transition> transitions,
                                    const SiteIndex& sites) {
    if (transitions.empty()) return std::nullopt;
    std::size_t changed = 0;
    for (const auto& t : transitions) {
        const auto& ctx = sites.at(t.context_site);
        const auto& resp = sites.at(t.response_site);
        if (ctx.determiner != resp.determiner) ++changed;
    }
    return static_cast<double>(changed) / static_cast<double>(transitions.size());
}

std::optional<double> token_type_ratio(std::size_t tokens, std::size_t types) {
    if (types == 0) return std::nullopt;
    return static_cast<double>(tokens) / static_cast<double>(types);
}

std::optional<double> token_type_ratio(std::span<const DxNSite> sites) {
    auto counts = count_by_noun(sites);
    return token_type_ratio(sites.size(), counts.size());
}

DyadStats dyad_stats(std::string dyad_id, Role role, std::span<const DxNSite> sites,
                     std::span<const Transition> transitions, const SiteIndex& index,
                     const DyadStatsOptions& options) {
    std::vector<DxNSite> own;
    for (const auto& s : sites)
        if (s.dyad_id == dyad_id && s.role == role) own.push_back(s);
    std::vector<Transition> responses;
    for (const auto& t : transitions)
        if (t.dyad_id == dyad_id && index.at(t.response_site).role == role) responses.push_back(t);

    auto counts = count_by_noun(own);
    DyadStats st;
    st.dyad_id = std::move(dyad_id);
    st.role = role;
    st.types = counts.size();
    st.tokens = own.size();
    st.bias = bias(counts);
    st.empirical_overlap = empirical_overlap(counts);
    if (st.bias && st.types > 0)
        st.predicted_overlap =
            expected_overlap(st.tokens, st.types, *st.bias, options.zipf_exponent);
    st.n_transitions = responses.size();
    st.tpr = empirical_tpr(responses, index);
    st.degenerate = st.bias && *st.bias >= options.degeneracy_threshold;
    return st;
}

}  // namespace detbench
