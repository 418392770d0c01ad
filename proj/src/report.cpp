#include "detbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "detbench/productivity.hpp"
#include "json.hpp"

namespace detbench {

namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson test_json(const std::optional<TestResult>& r) {
    if (!r) return nullptr;
    ojson j;
    j[r->kind == TestKind::Pearson ? "r" : "t"] = number(r->statistic);
    j["df"] = r->df;
    j["p"] = r->p;
    j["pass"] = r->pass;
    return j;
}

std::string fixed3(const std::optional<double>& v) {
    return v ? fmt::format("{:.3f}", *v) : std::string("-");
}

std::string p_text(double p) { return p < 0.001 ? std::string("<0.001") : fmt::format("{:.3f}", p); }

std::string verdict_cell(const std::optional<TestResult>& r) {
    if (!r) return "n/a";
    return fmt::format("{} ({})", r->pass ? "✓" : "×", p_text(r->p));
}

std::string full(const std::optional<double>& v) {
    return v && std::isfinite(*v) ? fmt::format("{}", *v) : std::string();
}

std::vector<Role> roles_present(const std::vector<DyadStats>& rows) {
    std::set<Role> seen;
    for (const auto& r : rows) seen.insert(r.role);
    std::vector<Role> out;
    for (Role r : {Role::Child, Role::Caretaker, Role::Other})
        if (seen.count(r)) out.push_back(r);
    return out;
}

bool keep_role(const AnalyzeOptions& options, Role role) {
    if (options.role) return role == *options.role;
    return role != Role::Other;
}

std::vector<std::string> dyads_in_order(std::span<const DxNSite> sites) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& s : sites)
        if (seen.insert(s.dyad_id).second) out.push_back(s.dyad_id);
    return out;
}

GroupSummary summarize_group(Role role, const std::vector<const DyadStats*>& rows,
                             const AnalyzeOptions& options) {
    const auto& bench = options.benchmarks;
    GroupSummary g;
    g.role = role;
    g.dyads = rows.size();

    std::vector<double> bias_v, emp_all, emp_pred, pred_v, tpr_v, ratio_v;
    for (const auto* r : rows) {
        if (r->bias) bias_v.push_back(*r->bias);
        emp_all.push_back(r->empirical_overlap);
        if (r->predicted_overlap) {
            emp_pred.push_back(r->empirical_overlap);
            pred_v.push_back(*r->predicted_overlap);
        }
        if (r->tpr) tpr_v.push_back(*r->tpr);
        if (auto ratio = token_type_ratio(r->tokens, r->types)) ratio_v.push_back(*ratio);
    }
    if (!bias_v.empty()) g.mean_bias = mean(bias_v);
    if (!emp_all.empty()) {
        g.mean_empirical = mean(emp_all);
        g.sd_empirical = sample_sd(emp_all);
    }
    if (!pred_v.empty()) {
        g.mean_predicted = mean(pred_v);
        g.sd_predicted = sample_sd(pred_v);
    }
    if (!tpr_v.empty()) {
        g.mean_tpr = mean(tpr_v);
        g.sd_tpr = sample_sd(tpr_v);
    }
    if (!ratio_v.empty()) g.mean_token_type_ratio = mean(ratio_v);

    if (pred_v.size() >= 2) g.dxn_test = paired_t(emp_pred, pred_v, bench.alpha);
    if (tpr_v.size() >= 2) g.tpr_test = one_sample_t(tpr_v, bench.adult_tpr_baseline, bench.alpha);
    if (bias_v.size() >= 2) g.bias_test = one_sample_t(bias_v, bench.coca_bias, bench.alpha);
    g.degenerate = !bias_v.empty() && flag_degenerate(g.mean_bias, options.degeneracy_threshold);
    return g;
}

}  // namespace

std::optional<OutputFormat> format_from_string(std::string_view text) {
    if (text == "table") return OutputFormat::Table;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    return std::nullopt;
}

void summarize(AnalysisReport& report, std::optional<MleAccuracy> mle) {
    report.groups.clear();
    for (Role role : roles_present(report.dyads)) {
        std::vector<const DyadStats*> rows;
        for (const auto& d : report.dyads)
            if (d.role == role) rows.push_back(&d);
        auto g = summarize_group(role, rows, report.options);
        if (mle && role == Role::Child) g.mle = mle;
        report.groups.push_back(std::move(g));
    }
}

AnalysisReport analyze_fixture(const Fixture& fixture, const AnalyzeOptions& options) {
    AnalysisReport report;
    report.source = "fixture";
    report.fixture_version = fixture.version;
    report.options = options;
    for (const auto& row : fixture.rows)
        if (keep_role(options, row.role))
            report.dyads.push_back(to_dyad_stats(row, options.degeneracy_threshold));
    // children first, then caretakers, each in table order
    std::stable_sort(report.dyads.begin(), report.dyads.end(),
                     [](const DyadStats& a, const DyadStats& b) { return a.role < b.role; });
    summarize(report);
    return report;
}

AnalysisReport analyze_sites(std::span<const DxNSite> sites, std::span<const Transition> transitions,
                             const AnalyzeOptions& options) {
    AnalysisReport report;
    report.source = "sites";
    report.options = options;
    SiteIndex index(sites);
    DyadStatsOptions dso{options.degeneracy_threshold, options.zipf_exponent};
    for (Role role : {Role::Child, Role::Caretaker, Role::Other}) {
        if (!keep_role(options, role)) continue;
        for (const auto& dyad : dyads_in_order(sites)) {
            bool any = std::any_of(sites.begin(), sites.end(), [&](const DxNSite& s) {
                return s.dyad_id == dyad && s.role == role;
            });
            if (any) report.dyads.push_back(dyad_stats(dyad, role, sites, transitions, index, dso));
        }
    }
    summarize(report);
    return report;
}

AnalysisReport analyze_model(std::span<const DxNSite> sites, std::span<const Transition> transitions,
                             std::span<const ProbSite> prob_sites, const AnalyzeOptions& options) {
    AnalysisReport report;
    report.source = "model";
    report.options = options;
    SiteIndex index(sites);

    // scored sites per (role, dyad)
    std::map<std::pair<Role, std::string>, std::vector<ProbSite>> scored;
    std::vector<std::pair<Role, std::string>> order;
    for (const auto& p : prob_sites) {
        const auto& site = index.at(p.site_id);
        if (!keep_role(options, site.role)) continue;
        auto key = std::pair{site.role, site.dyad_id};
        auto [it, inserted] = scored.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(p);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& key : order) {
        const auto& probs = scored[key];
        auto groups = group_by_noun(probs, index);
        std::vector<Transition> own;
        for (const auto& t : transitions)
            if (t.dyad_id == key.second) own.push_back(t);
        auto ptrans = resolve_prob_transitions(own, index, probs);

        DyadStats st;
        st.dyad_id = key.second;
        st.role = key.first;
        st.types = groups.size();
        st.tokens = probs.size();
        const double b_hat = std::clamp(analytic_bias(groups), 0.5, 1.0);
        st.bias = b_hat;
        st.empirical_overlap = analytic_overlap(groups);
        st.predicted_overlap = expected_overlap(st.tokens, st.types, b_hat, options.zipf_exponent);
        st.n_transitions = ptrans.size();
        st.tpr = analytic_tpr(ptrans);
        st.degenerate = flag_degenerate(b_hat, options.degeneracy_threshold);
        report.dyads.push_back(std::move(st));
    }

    std::vector<ProbSite> child_probs;
    for (const auto& p : prob_sites)
        if (index.at(p.site_id).role == Role::Child && keep_role(options, Role::Child))
            child_probs.push_back(p);
    std::optional<MleAccuracy> mle;
    if (!child_probs.empty()) mle = mle_accuracy(child_probs, index);
    summarize(report, mle);
    return report;
}

std::string test_result_json(const TestResult& result) { return test_json(result).dump(); }

void render_table(std::ostream& out, const AnalysisReport& report) {
    out << fmt::format("{:<10} {:<10} {:>6} {:>6} {:>6} {:>9} {:>9} {:>6} {:>6}  {}\n", "Dyad",
                       "Role", "N", "S", "Bias", "Empirical", "Predicted", "n_TPR", "TPR",
                       "Degenerate");
    for (const auto& d : report.dyads) {
        out << fmt::format("{:<10} {:<10} {:>6} {:>6} {:>6} {:>9} {:>9} {:>6} {:>6}  {}\n",
                           d.dyad_id, to_string(d.role), d.types, d.tokens, fixed3(d.bias),
                           fixed3(d.empirical_overlap), fixed3(d.predicted_overlap),
                           d.n_transitions, fixed3(d.tpr), d.degenerate ? "yes" : "no");
    }
    out << '\n';
    const bool any_mle = std::any_of(report.groups.begin(), report.groups.end(),
                                     [](const GroupSummary& g) { return g.mle.has_value(); });
    out << fmt::format("{:<10} {:>5} {:>6} {:>15} {:>15} {:>15} {:>13} {:>13} {:>10}", "Group",
                       "Dyads", "Bias", "Empirical (SD)", "Predicted (SD)", "TPR (SD)", "DxN test",
                       "TPR test", "Degenerate");
    if (any_mle) out << fmt::format(" {:>9}", "Accuracy");
    out << '\n';
    for (const auto& g : report.groups) {
        auto with_sd = [](const std::optional<double>& m, const std::optional<double>& sd) {
            if (!m) return std::string("-");
            return fmt::format("{:.3f} ({:.3f})", *m, sd.value_or(0.0));
        };
        out << fmt::format("{:<10} {:>5} {:>6.3f} {:>15} {:>15} {:>15} {:>13} {:>13} {:>10}",
                           to_string(g.role), g.dyads, g.mean_bias,
                           with_sd(g.mean_empirical, g.sd_empirical),
                           with_sd(g.mean_predicted, g.sd_predicted), with_sd(g.mean_tpr, g.sd_tpr),
                           verdict_cell(g.dxn_test), verdict_cell(g.tpr_test),
                           g.degenerate ? "yes" : "no");
        if (any_mle) out << fmt::format(" {:>9}", g.mle ? fmt::format("{:.3f}", g.mle->accuracy) : "-");
        out << '\n';
    }
}

void render_csv(std::ostream& out, const AnalysisReport& report) {
    out << "kind,dyad,role,N,S,bias,empirical,predicted,n_TPR,TPR,degenerate,"
           "dxn_t,dxn_df,dxn_p,dxn_pass,tpr_t,tpr_df,tpr_p,tpr_pass,mle_accuracy\n";
    for (const auto& d : report.dyads) {
        out << fmt::format("dyad,{},{},{},{},{},{},{},{},{},{},,,,,,,,,\n", d.dyad_id,
                           to_string(d.role), d.types, d.tokens, full(d.bias),
                           full(d.empirical_overlap), full(d.predicted_overlap), d.n_transitions,
                           full(d.tpr), d.degenerate ? "true" : "false");
    }
    auto test_cells = [](const std::optional<TestResult>& r) {
        if (!r) return std::string(",,,");
        return fmt::format("{},{},{},{}", full(r->statistic), r->df, full(r->p),
                           r->pass ? "true" : "false");
    };
    for (const auto& g : report.groups) {
        std::size_t tokens = 0, types = 0, transitions = 0;
        for (const auto& d : report.dyads)
            if (d.role == g.role) {
                tokens += d.tokens;
                types += d.types;
                transitions += d.n_transitions;
            }
        out << fmt::format("group,,{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(g.role),
                           types, tokens, full(g.mean_bias), full(g.mean_empirical),
                           full(g.mean_predicted), transitions, full(g.mean_tpr),
                           g.degenerate ? "true" : "false", test_cells(g.dxn_test),
                           test_cells(g.tpr_test), g.mle ? full(g.mle->accuracy) : std::string());
    }
}

void render_json(std::ostream& out, const AnalysisReport& report) {
    ojson root;
    root["source"] = report.source;
    if (!report.fixture_version.empty()) root["fixture_version"] = report.fixture_version;
    const auto& o = report.options;
    root["config"] = {{"alpha", o.benchmarks.alpha},
                      {"degeneracy_threshold", o.degeneracy_threshold},
                      {"coca_bias", o.benchmarks.coca_bias},
                      {"adult_tpr_baseline", o.benchmarks.adult_tpr_baseline},
                      {"zipf_exponent", o.zipf_exponent}};
    ojson dyads = ojson::array();
    for (const auto& d : report.dyads) {
        ojson j;
        j["dyad"] = d.dyad_id;
        j["role"] = to_string(d.role);
        j["inputs"] = {{"N", d.types}, {"S", d.tokens}, {"b", optional_number(d.bias)},
                       {"T", d.n_transitions}};
        j["bias"] = optional_number(d.bias);
        j["empirical"] = d.empirical_overlap;
        j["predicted"] = optional_number(d.predicted_overlap);
        j["n_tpr"] = d.n_transitions;
        j["tpr"] = optional_number(d.tpr);
        j["degenerate"] = d.degenerate;
        dyads.push_back(std::move(j));
    }
    root["dyads"] = std::move(dyads);

    ojson groups = ojson::array();
    for (const auto& g : report.groups) {
        ojson j;
        j["role"] = to_string(g.role);
        j["n_dyads"] = g.dyads;
        j["bias"] = g.mean_bias;
        j["empirical"] = {{"mean", g.mean_empirical}, {"sd", g.sd_empirical}};
        j["predicted"] = {{"mean", optional_number(g.mean_predicted)},
                          {"sd", optional_number(g.sd_predicted)}};
        j["tpr"] = {{"mean", optional_number(g.mean_tpr)}, {"sd", optional_number(g.sd_tpr)}};
        j["token_type_ratio"] = optional_number(g.mean_token_type_ratio);
        j["verdict"] = {{"dxn_test", test_json(g.dxn_test)},
                        {"tpr_test", test_json(g.tpr_test)},
                        {"degenerate", g.degenerate}};
        j["bias_test"] = test_json(g.bias_test);
        if (g.mle)
            j["mle_accuracy"] = {{"accuracy", g.mle->accuracy},
                                 {"sites", g.mle->sites},
                                 {"matches", g.mle->matches},
                                 {"ties", g.mle->ties}};
        groups.push_back(std::move(j));
    }
    root["groups"] = std::move(groups);
    out << root.dump(2) << '\n';
}

void render(std::ostream& out, const AnalysisReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: render_table(out, report); break;
        case OutputFormat::Csv: render_csv(out, report); break;
        case OutputFormat::Json: render_json(out, report); break;
    }
}

}  // namespace detbench
