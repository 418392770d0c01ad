#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "detbench/analytic.hpp"
#include "doctest.h"

using namespace detbench;

namespace {

// Sum over every the/a assignment of its probability times the indicator
// that both determiners occur.
double enumerate_overlap(const std::vector<double>& p) {
    const std::size_t k = p.size();
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        double prob = 1.0;
        bool has_the = false, has_a = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask >> i & 1) {
                prob *= p[i];
                has_the = true;
            } else {
                prob *= 1.0 - p[i];
                has_a = true;
            }
        }
        if (has_the && has_a) total += prob;
    }
    return total;
}

DxNSite observed(std::string id, std::string noun, Determiner det) {
    DxNSite s;
    s.site_id = std::move(id);
    s.dyad_id = "d";
    s.session_id = "s";
    s.role = Role::Child;
    s.noun_lemma = std::move(noun);
    s.determiner = det;
    return s;
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("per-noun overlap examples") {
    CHECK(noun_overlap_probability(std::vector<double>{0.37}) == 0.0);
    CHECK(noun_overlap_probability(std::vector<double>{0.5, 0.5}) == 0.5);
    NounGroups g{{"x", {0.5, 0.5}}, {"y", {0.9}}};
    CHECK(analytic_overlap(g) == doctest::Approx(0.25));
}

TEST_CASE("per-noun overlap matches enumeration") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 1; k <= 12; ++k) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> p(k);
            for (auto& x : p) x = u(rng);
            if (rep == 0) p[0] = 0.0;
            if (rep == 1) p[k - 1] = 1.0;
            CHECK(std::abs(noun_overlap_probability(p) - enumerate_overlap(p)) <= 1e-12);
        }
    }
}

TEST_CASE("bias examples") {
    CHECK(analytic_bias(NounGroups{{"x", {0.7, 0.7}}}) == doctest::Approx(0.7));
    CHECK(analytic_bias(NounGroups{{"x", {0.5, 0.5}}, {"y", {0.5}}}) == 0.5);
    CHECK(analytic_bias(NounGroups{{"x", {1.0, 1.0}}, {"y", {0.0, 0.0}}}) == 1.0);
}

TEST_CASE("bias and overlap ranges") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        NounGroups g;
        for (int n = 0; n < 5; ++n)
            for (int i = 0; i <= rep % 4; ++i) g["n" + std::to_string(n)].push_back(u(rng));
        const double b = analytic_bias(g);
        const double o = analytic_overlap(g);
        CHECK(b >= 0.5);
        CHECK(b <= 1.0);
        CHECK(o >= 0.0);
        CHECK(o <= 1.0);
    }
}

TEST_CASE("tpr examples") {
    std::vector<ProbTransition> two{{Determiner::The, 0.3}, {Determiner::A, 0.3}};
    CHECK(*analytic_tpr(two) == doctest::Approx(0.5));
    std::vector<ProbTransition> matching{{Determiner::The, 1.0}, {Determiner::A, 0.0}};
    CHECK(*analytic_tpr(matching) == 0.0);
    std::vector<ProbTransition> flat{{Determiner::The, 0.5}, {Determiner::A, 0.5}, {Determiner::A, 0.5}};
    CHECK(*analytic_tpr(flat) == 0.5);
    CHECK_FALSE(analytic_tpr(std::vector<ProbTransition>{}).has_value());
}

TEST_CASE("resolving transitions keeps scored responses only") {
    std::vector<DxNSite> sites{observed("m", "dog", Determiner::A),
                               observed("c1", "dog", Determiner::The),
                               observed("c2", "dog", Determiner::The)};
    sites[0].role = Role::Caretaker;
    SiteIndex idx(sites);
    std::vector<Transition> trans(2);
    trans[0].context_site = "m";
    trans[0].response_site = "c1";
    trans[1].context_site = "m";
    trans[1].response_site = "c2";
    std::vector<ProbSite> probs{{"c2", 0.8}};
    auto pt = resolve_prob_transitions(trans, idx, probs);
    REQUIRE(pt.size() == 1);
    CHECK(pt[0].context == Determiner::A);
    CHECK(pt[0].response_p_the == 0.8);
}

TEST_CASE("mle accuracy") {
    std::vector<DxNSite> obs{observed("1", "x", Determiner::The), observed("2", "y", Determiner::A)};
    SiteIndex idx(obs);
    auto r = mle_accuracy(std::vector<ProbSite>{{"1", 0.6}, {"2", 0.3}}, idx);
    CHECK(r.accuracy == 1.0);
    CHECK(r.sites == 2);
    CHECK(r.ties == 0);

    auto tie = mle_accuracy(std::vector<ProbSite>{{"1", 0.5}, {"2", 0.5}}, idx);
    CHECK(tie.ties == 2);
    CHECK(tie.matches == 1);

    std::vector<DxNSite> many;
    for (int i = 0; i < 40; ++i)
        many.push_back(observed(std::to_string(i), "n", i < 13 ? Determiner::A : Determiner::The));
    SiteIndex midx(many);
    std::vector<ProbSite> zeros;
    for (const auto& s : many) zeros.push_back({s.site_id, 0.0});
    CHECK(mle_accuracy(zeros, midx).accuracy == doctest::Approx(13.0 / 40.0));

    CHECK_THROWS_AS(mle_accuracy(std::vector<ProbSite>{{"missing", 0.2}}, idx), DataError);
}

TEST_CASE("degenerate flag") {
    CHECK(flag_degenerate(0.996));
    CHECK_FALSE(flag_degenerate(0.834));
    CHECK(flag_degenerate(0.98));
    CHECK_FALSE(flag_degenerate(0.95, 0.96));
}

TEST_CASE("prob site jsonl round trip and validation") {
    std::vector<ProbSite> v{{"d/s/0/1", 1.0 / 3.0}, {"d/s/2/0", 0.0}, {"d/s/3/4", 1.0}};
    std::ostringstream out;
    write_prob_sites_jsonl(out, v);
    std::istringstream in(out.str());
    CHECK(read_prob_sites_jsonl(in) == v);

    auto fails_on_line = [](const std::string& text, std::size_t line) {
        std::istringstream s(text);
        try {
            read_prob_sites_jsonl(s);
        } catch (const DataError& e) {
            return e.line() == line;
        }
        return false;
    };
    CHECK(fails_on_line("{\"site_id\":\"a\",\"p_the\":0.2}\n{\"site_id\":\"b\",\"p_the\":1.5}\n", 2));
    CHECK(fails_on_line("{\"site_id\":\"a\",\"p_the\":-0.1}\n", 1));
    CHECK(fails_on_line("{\"site_id\":\"a\",\"p_the\":\"0.2\"}\n", 1));
    CHECK(fails_on_line("{\"site_id\":\"a\"}\n", 1));
    CHECK(fails_on_line("{\"p_the\":0.2}\n", 1));
    CHECK(fails_on_line("{\"site_id\":\"a\",\"p_the\":0.2}\n\n{\"site_id\":\"a\",\"p_the\":0.3}\n", 3));
    CHECK(fails_on_line("[1,2]\n", 1));
}

}  // TEST_SUITE
