#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detbench/analytic.hpp"
#include "detbench/extraction.hpp"
#include "detbench/fixture.hpp"
#include "detbench/metrics.hpp"
#include "detbench/stats.hpp"

namespace detbench {

enum class OutputFormat { Table, Csv, Json };

std::optional<OutputFormat> format_from_string(std::string_view text);

struct AnalyzeOptions {
    Benchmarks benchmarks;
    double degeneracy_threshold = kDefaultDegeneracyThreshold;
    double zipf_exponent = 1.0;
    /// Restrict to one role; unset keeps child and caretaker rows.
    std::optional<Role> role;
};

/// Group-level summary over the dyads of one role.
struct GroupSummary {
    Role role = Role::Child;
    std::size_t dyads = 0;
    double mean_bias = 0.0;
    double mean_empirical = 0.0;
    double sd_empirical = 0.0;
    std::optional<double> mean_predicted;
    std::optional<double> sd_predicted;
    std::optional<double> mean_tpr;
    std::optional<double> sd_tpr;
    std::optional<double> mean_token_type_ratio;
    /// Paired t of empirical against predicted overlap; unset below 2 dyads.
    std::optional<TestResult> dxn_test;
    /// One-sample t of TPR against the adult baseline; unset below 2 dyads.
    std::optional<TestResult> tpr_test;
    /// One-sample t of bias against the COCA reference value.
    std::optional<TestResult> bias_test;
    bool degenerate = false;
    std::optional<MleAccuracy> mle;
};

struct AnalysisReport {
    std::string source;  // "fixture", "sites" or "model"
    std::string fixture_version;
    AnalyzeOptions options;
    std::vector<DyadStats> dyads;
    std::vector<GroupSummary> groups;
};

/// Rows straight from the reference table.
AnalysisReport analyze_fixture(const Fixture& fixture, const AnalyzeOptions& options);

/// Observed corpus: per-dyad empirical statistics.
AnalysisReport analyze_sites(std::span<const DxNSite> sites, std::span<const Transition> transitions,
                             const AnalyzeOptions& options);

/// Model corpus: per-dyad analytic statistics of the scored sites plus MLE
/// accuracy against the observed determiners.
AnalysisReport analyze_model(std::span<const DxNSite> sites, std::span<const Transition> transitions,
                             std::span<const ProbSite> prob_sites, const AnalyzeOptions& options);

/// Recomputes the group summaries from report.dyads.
void summarize(AnalysisReport& report, std::optional<MleAccuracy> mle = std::nullopt);

void render_table(std::ostream& out, const AnalysisReport& report);
void render_csv(std::ostream& out, const AnalysisReport& report);
void render_json(std::ostream& out, const AnalysisReport& report);
void render(std::ostream& out, const AnalysisReport& report, OutputFormat format);

/// {"t": .., "df": .., "p": .., "pass": ..}; "r" instead of "t" for Pearson.
std::string test_result_json(const TestResult& result);

}  // namespace detbench
