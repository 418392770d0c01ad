#include "detbench/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace detbench {

std::vector<ProbSite> read_prob_sites_jsonl(std::istream& in) {
    std::vector<ProbSite> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw DataError("expected a JSON object", lineno);
        if (!obj.contains("site_id")) throw DataError("missing field 'site_id'", lineno);
        if (!obj.contains("p_the")) throw DataError("missing field 'p_the'", lineno);
        if (!obj["site_id"].is_string()) throw DataError("field 'site_id' must be a string", lineno);
        if (!obj["p_the"].is_number()) throw DataError("field 'p_the' must be a number", lineno);
        ProbSite s{obj["site_id"].get<std::string>(), obj["p_the"].get<double>()};
        if (!(s.p_the >= 0.0 && s.p_the <= 1.0))
            throw DataError("p_the outside [0, 1] for '" + s.site_id + "'", lineno);
        if (!seen.insert(s.site_id).second)
            throw DataError("duplicate site_id '" + s.site_id + "'", lineno);
        out.push_back(std::move(s));
    }
    return out;
}

void write_prob_sites_jsonl(std::ostream& out, std::span<const ProbSite> sites) {
    for (const auto& s : sites) {
        nlohmann::ordered_json obj;
        obj["site_id"] = s.site_id;
        obj["p_the"] = s.p_the;
        out << obj.dump() << '\n';
    }
}

NounGroups group_by_noun(std::span<const ProbSite> prob_sites, const SiteIndex& sites) {
    NounGroups groups;
    for (const auto& p : prob_sites) groups[sites.at(p.site_id).noun_lemma].push_back(p.p_the);
    return groups;
}

double noun_overlap_probability(std::span<const double> p_the) {
    if (p_the.empty()) throw std::invalid_argument("noun group must not be empty");
    double all_the = 1.0, all_a = 1.0;
    for (double p : p_the) {
        all_the *= p;
        all_a *= 1.0 - p;
    }
    return std::clamp(1.0 - all_the - all_a, 0.0, 1.0);
}

double analytic_overlap(const NounGroups& groups) {
    if (groups.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [noun, ps] : groups) sum += noun_overlap_probability(ps);
    return sum / static_cast<double>(groups.size());
}

double analytic_bias(const NounGroups& groups) {
    double favoured = 0.0;
    std::size_t total = 0;
    for (const auto& [noun, ps] : groups) {
        if (ps.empty()) throw std::invalid_argument("noun group '" + noun + "' is empty");
        double the = 0.0;
        for (double p : ps) the += p;
        double a = static_cast<double>(ps.size()) - the;
        favoured += std::max(the, a);
        total += ps.size();
    }
    if (total == 0) throw std::invalid_argument("analytic bias needs at least one site");
    return favoured / static_cast<double>(total);
}

std::vector<ProbTransition> resolve_prob_transitions(std::span<const Transition> transitions,
                                                     const SiteIndex& sites,
                                                     std::span<const ProbSite> prob_sites) {
    std::unordered_map<std::string_view, double> p_of;
    p_of.reserve(prob_sites.size());
    for (const auto& p : prob_sites) p_of.emplace(p.site_id, p.p_the);

    std::vector<ProbTransition> out;
    for (const auto& t : transitions) {
        auto it = p_of.find(t.response_site);
        if (it == p_of.end()) continue;
        out.push_back({sites.at(t.context_site).determiner, it->second});
    }
    return out;
}

std::optional<double> analytic_tpr(std::span<const ProbTransition> transitions) {
    if (transitions.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& t : transitions) {
        // M^the * 1{C = a} + M^a * 1{C = the}
        sum += t.context == Determiner::A ? t.response_p_the : 1.0 - t.response_p_the;
    }
    return sum / static_cast<double>(transitions.size());
}

MleAccuracy mle_accuracy(std::span<const ProbSite> prob_sites, const SiteIndex& observed) {
    MleAccuracy acc;
    for (const auto& p : prob_sites) {
        const auto* site = observed.find(p.site_id);
        if (!site) throw DataError("scored site '" + p.site_id + "' has no observed counterpart");
        if (p.p_the == 0.5) ++acc.ties;
        Determiner choice = p.p_the >= 0.5 ? Determiner::The : Determiner::A;
        if (choice == site->determiner) ++acc.matches;
        ++acc.sites;
    }
    if (acc.sites > 0)
        acc.accuracy = static_cast<double>(acc.matches) / static_cast<double>(acc.sites);
    return acc;
}

bool flag_degenerate(double b_hat, double threshold) { return b_hat >= threshold; }

}  // namespace detbench
