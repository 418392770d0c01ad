#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detbench/extraction.hpp"
#include "detbench/metrics.hpp"

namespace detbench {

/// One row of the per-dyad reference table.
struct FixtureRow {
    std::string dyad;
    Role role = Role::Child;
    std::size_t types = 0;
    std::size_t tokens = 0;
    double bias = 0.0;
    double empirical = 0.0;
    double predicted = 0.0;
    std::size_t n_tpr = 0;
    double tpr = 0.0;
};

struct Fixture {
    std::string version;
    std::vector<FixtureRow> rows;

    std::vector<FixtureRow> with_role(Role role) const;
};

/// CSV with a header row; '#' lines are comments, "# fixture-version: X"
/// sets the version.
Fixture load_fixture(std::istream& in);

/// The Manchester table compiled into the library.
const Fixture& builtin_fixture();

DyadStats to_dyad_stats(const FixtureRow& row, double degeneracy_threshold = 0.98);

/// Splits round(share * total tokens) "a" determiners across rows by largest
/// remainder.
std::vector<std::size_t> allocate_a_counts(std::span<const FixtureRow> rows, double share);

/// Builds a deterministic site list for one row: exactly N noun types over S
/// tokens with Zipf-shaped counts, bias round(b S) / S, round(empirical N)
/// nouns attested with both determiners and exactly `a_count` "a" tokens.
/// Throws std::invalid_argument when the row cannot be realised.
std::vector<DxNSite> synthesize_sites(const FixtureRow& row, std::size_t a_count);

}  // namespace detbench
