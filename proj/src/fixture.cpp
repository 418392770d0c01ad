#include "detbench/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace detbench {

// Generated from data/manchester_dyads.csv at configure time.
extern const char* const kBuiltinFixtureCsv;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

template <class T>
T parse_number(const std::string& cell, std::size_t lineno, const char* column) {
    std::istringstream in(cell);
    T value{};
    in >> value;
    if (in.fail() || !in.eof())
        throw DataError(std::string("bad value for '") + column + "': '" + cell + "'", lineno);
    return value;
}

}  // namespace

std::vector<FixtureRow> Fixture::with_role(Role role) const {
    std::vector<FixtureRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
                 [role](const FixtureRow& r) { return r.role == role; });
    return out;
}

Fixture load_fixture(std::istream& in) {
    static const std::vector<std::string> kColumns = {"dyad",      "speaker",   "types",
                                                      "tokens",    "bias",      "empirical",
                                                      "predicted", "n_tpr",     "tpr"};
    Fixture fx;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (line.front() == '#') {
            auto pos = line.find("fixture-version:");
            if (pos != std::string::npos) {
                fx.version = line.substr(pos + 16);
                fx.version.erase(0, fx.version.find_first_not_of(' '));
                while (!fx.version.empty() && (fx.version.back() == '\r' || fx.version.back() == ' '))
                    fx.version.pop_back();
            }
            continue;
        }
        auto cells = split_csv(line);
        if (!header_seen) {
            if (cells != kColumns) throw DataError("unexpected fixture header", lineno);
            header_seen = true;
            continue;
        }
        if (cells.size() != kColumns.size())
            throw DataError("expected " + std::to_string(kColumns.size()) + " columns", lineno);
        FixtureRow row;
        row.dyad = cells[0];
        std::string speaker = cells[1];
        std::transform(speaker.begin(), speaker.end(), speaker.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        auto role = role_from_string(speaker);
        if (!role || *role == Role::Other)
            throw DataError("speaker must be child or caretaker", lineno);
        row.role = *role;
        row.types = parse_number<std::size_t>(cells[2], lineno, "types");
        row.tokens = parse_number<std::size_t>(cells[3], lineno, "tokens");
        row.bias = parse_number<double>(cells[4], lineno, "bias");
        row.empirical = parse_number<double>(cells[5], lineno, "empirical");
        row.predicted = parse_number<double>(cells[6], lineno, "predicted");
        row.n_tpr = parse_number<std::size_t>(cells[7], lineno, "n_tpr");
        row.tpr = parse_number<double>(cells[8], lineno, "tpr");
        if (row.tokens < row.types) throw DataError("tokens must be >= types", lineno);
        if (row.bias < 0.5 || row.bias > 1.0) throw DataError("bias outside [0.5, 1]", lineno);
        fx.rows.push_back(std::move(row));
    }
    if (!header_seen) throw DataError("fixture has no header row");
    return fx;
}

const Fixture& builtin_fixture() {
    static const Fixture fx = [] {
        std::istringstream in(kBuiltinFixtureCsv);
        return load_fixture(in);
    }();
    return fx;
}

DyadStats to_dyad_stats(const FixtureRow& row, double degeneracy_threshold) {
    DyadStats st;
    st.dyad_id = row.dyad;
    st.role = row.role;
    st.types = row.types;
    st.tokens = row.tokens;
    st.bias = row.bias;
    st.empirical_overlap = row.empirical;
    st.predicted_overlap = row.predicted;
    st.n_transitions = row.n_tpr;
    st.tpr = row.tpr;
    st.degenerate = row.bias >= degeneracy_threshold;
    return st;
}

std::vector<std::size_t> allocate_a_counts(std::span<const FixtureRow> rows, double share) {
    if (!(share >= 0.0 && share <= 1.0)) throw std::invalid_argument("share must lie in [0, 1]");
    std::size_t total = 0;
    for (const auto& r : rows) total += r.tokens;
    const auto target = static_cast<std::size_t>(std::llround(share * static_cast<double>(total)));

    std::vector<std::size_t> counts(rows.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double exact = share * static_cast<double>(rows[i].tokens);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k, ++assigned)
        ++counts[remainders[k].second];
    return counts;
}

std::vector<DxNSite> synthesize_sites(const FixtureRow& row, std::size_t a_count) {
    const std::size_t n = row.types;
    const std::size_t s = row.tokens;
    if (n == 0 || s < n) throw std::invalid_argument("row needs 1 <= N <= S");

    // Zipf-shaped counts: one token per noun, the rest split by 1/r with
    // largest remainders.
    std::vector<std::size_t> count(n, 1);
    {
        double h = 0.0;
        for (std::size_t r = 1; r <= n; ++r) h += 1.0 / static_cast<double>(r);
        const double extra = static_cast<double>(s - n);
        std::vector<std::pair<double, std::size_t>> rem;
        std::size_t used = 0;
        for (std::size_t r = 0; r < n; ++r) {
            const double exact = extra / (static_cast<double>(r + 1) * h);
            const auto whole = static_cast<std::size_t>(std::floor(exact));
            count[r] += whole;
            used += whole;
            rem.emplace_back(exact - std::floor(exact), r);
        }
        std::stable_sort(rem.begin(), rem.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for (std::size_t k = 0; used < s - n; ++k, ++used) ++count[rem[k].second];
    }

    // Minority-determiner tokens per noun: nouns 0..both-1 (the most frequent
    // ones) get at least one, none gets more than half its tokens.
    const auto both = static_cast<std::size_t>(std::llround(row.empirical * static_cast<double>(n)));
    const auto favoured_total =
        static_cast<std::size_t>(std::llround(row.bias * static_cast<double>(s)));
    const std::size_t minority_total = s - favoured_total;
    std::vector<std::size_t> minority(n, 0);
    {
        if (both > n || (both > 0 && count[both - 1] < 2))
            throw std::invalid_argument("too few repeated nouns for the requested overlap");
        if (minority_total < both || (both == 0 && minority_total > 0))
            throw std::invalid_argument("bias and overlap are inconsistent for this row");
        std::size_t left = minority_total - both;
        for (std::size_t r = 0; r < both; ++r) minority[r] = 1;
        for (std::size_t r = 0; r < both && left > 0; ++r) {
            const std::size_t room = count[r] / 2 - minority[r];
            const std::size_t add = std::min(room, left);
            minority[r] += add;
            left -= add;
        }
        if (left > 0) throw std::invalid_argument("bias too low for the requested overlap");
    }

    // Favoured determiner per noun: start with "the" everywhere, then flip
    // nouns to favour "a" until the "a" total is met.
    std::vector<bool> favours_a(n, false);
    {
        std::size_t a_total = minority_total;
        if (a_count < a_total || a_count > s - minority_total)
            throw std::invalid_argument("requested 'a' count is unreachable for this row");
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto gain = [&](std::size_t r) { return count[r] - 2 * minority[r]; };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return gain(x) > gain(y); });
        for (std::size_t r : order) {
            if (a_total == a_count) break;
            if (gain(r) > 0 && a_total + gain(r) <= a_count) {
                favours_a[r] = true;
                a_total += gain(r);
            }
        }
        if (a_total != a_count) throw std::invalid_argument("could not hit the requested 'a' count");
    }

    std::vector<DxNSite> sites;
    sites.reserve(s);
    const std::string session = "synthetic";
    std::size_t utt = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const std::string noun = "noun" + std::to_string(r + 1);
        for (std::size_t k = 0; k < count[r]; ++k, ++utt) {
            const bool minority_token = k < minority[r];
            const bool is_a = favours_a[r] != minority_token;
            DxNSite site;
            site.site_id = make_site_id(row.dyad, session, utt, 0);
            site.dyad_id = row.dyad;
            site.session_id = session;
            site.utt_index = utt;
            site.token_index = 0;
            site.role = row.role;
            site.determiner = is_a ? Determiner::A : Determiner::The;
            site.noun_lemma = noun;
            sites.push_back(std::move(site));
        }
    }
    return sites;
}

}  // namespace detbench
