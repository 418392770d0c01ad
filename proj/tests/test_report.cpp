#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "detbench/fixture.hpp"
#include "detbench/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace detbench;
using nlohmann::json;

namespace {

std::string rendered(const AnalysisReport& r, OutputFormat f) {
    std::ostringstream out;
    render(out, r, f);
    return out.str();
}

std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        std::map<std::string, std::string> row;
        std::istringstream l(line);
        std::string cell;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!std::getline(l, cell, ',')) cell.clear();
            row[header[i]] = cell;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<DxNSite> two_speaker_sites() {
    // caretaker: ball the, ball a; child: ball a, cup the, cup the
    std::vector<DxNSite> v;
    auto add = [&](Role role, Determiner d, std::string noun) {
        DxNSite s;
        s.dyad_id = "D1";
        s.session_id = "s";
        s.utt_index = v.size();
        s.site_id = make_site_id("D1", "s", s.utt_index, 0);
        s.role = role;
        s.determiner = d;
        s.noun_lemma = std::move(noun);
        v.push_back(s);
    };
    add(Role::Caretaker, Determiner::The, "ball");
    add(Role::Child, Determiner::A, "ball");
    add(Role::Caretaker, Determiner::A, "ball");
    add(Role::Child, Determiner::The, "cup");
    add(Role::Child, Determiner::The, "cup");
    return v;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("fixture group summaries") {
    auto r = analyze_fixture(builtin_fixture(), {});
    REQUIRE(r.groups.size() == 2);
    const auto& child = r.groups[0];
    const auto& care = r.groups[1];
    CHECK(child.role == Role::Child);
    CHECK(child.dyads == 12);
    CHECK(fmt::format("{:.3f}", child.mean_bias) == "0.834");
    CHECK(fmt::format("{:.3f}", child.mean_empirical) == "0.251");
    CHECK(fmt::format("{:.3f}", *child.mean_predicted) == "0.242");
    CHECK(fmt::format("{:.3f}", *child.mean_tpr) == "0.226");
    CHECK(child.dxn_test->pass);
    CHECK(child.tpr_test->pass);
    CHECK_FALSE(child.degenerate);

    CHECK(fmt::format("{:.3f}", care.mean_bias) == "0.815");
    CHECK(fmt::format("{:.3f}", care.mean_empirical) == "0.301");
    CHECK(fmt::format("{:.3f}", *care.mean_predicted) == "0.320");
    CHECK(fmt::format("{:.3f}", *care.mean_tpr) == "0.200");
    CHECK(care.dxn_test->pass);
    CHECK(care.tpr_test->pass);
}

TEST_CASE("role filter") {
    AnalyzeOptions o;
    o.role = Role::Caretaker;
    auto r = analyze_fixture(builtin_fixture(), o);
    CHECK(r.dyads.size() == 12);
    REQUIRE(r.groups.size() == 1);
    CHECK(r.groups[0].role == Role::Caretaker);
}

TEST_CASE("single dyad gives not-applicable tests") {
    Fixture one;
    one.version = "t";
    one.rows.push_back(builtin_fixture().rows.front());
    auto r = analyze_fixture(one, {});
    REQUIRE(r.dyads.size() == 1);
    REQUIRE(r.groups.size() == 1);
    CHECK_FALSE(r.groups[0].dxn_test.has_value());
    CHECK_FALSE(r.groups[0].tpr_test.has_value());
    auto table = rendered(r, OutputFormat::Table);
    CHECK(table.find("n/a") != std::string::npos);
    auto j = json::parse(rendered(r, OutputFormat::Json));
    CHECK(j["groups"][0]["verdict"]["dxn_test"].is_null());
}

TEST_CASE("csv, json and table agree") {
    auto r = analyze_fixture(builtin_fixture(), {});
    auto csv = parse_csv(rendered(r, OutputFormat::Csv));
    auto j = json::parse(rendered(r, OutputFormat::Json));
    auto table = rendered(r, OutputFormat::Table);

    REQUIRE(csv.size() == 26);
    REQUIRE(j["dyads"].size() == 24);
    for (std::size_t i = 0; i < 24; ++i) {
        const auto& row = csv[i];
        const auto& d = j["dyads"][i];
        CHECK(row.at("kind") == "dyad");
        CHECK(row.at("dyad") == d["dyad"].get<std::string>());
        CHECK(std::stod(row.at("empirical")) == d["empirical"].get<double>());
        CHECK(std::stod(row.at("predicted")) == d["predicted"].get<double>());
        CHECK(std::stoul(row.at("N")) == d["inputs"]["N"].get<std::size_t>());
        CHECK(std::stoul(row.at("S")) == d["inputs"]["S"].get<std::size_t>());
        CHECK(std::stod(row.at("bias")) == d["inputs"]["b"].get<double>());
        CHECK(std::stoul(row.at("n_TPR")) == d["inputs"]["T"].get<std::size_t>());
        CHECK(table.find(fmt::format("{:.3f}", d["tpr"].get<double>())) != std::string::npos);
    }
    for (std::size_t g = 0; g < 2; ++g) {
        const auto& row = csv[24 + g];
        const auto& grp = j["groups"][g];
        CHECK(row.at("kind") == "group");
        CHECK(std::stod(row.at("dxn_t")) == grp["verdict"]["dxn_test"]["t"].get<double>());
        CHECK(std::stod(row.at("dxn_p")) == grp["verdict"]["dxn_test"]["p"].get<double>());
        CHECK(std::stod(row.at("tpr_p")) == grp["verdict"]["tpr_test"]["p"].get<double>());
        const std::string p3 = fmt::format("{:.3f}", grp["verdict"]["dxn_test"]["p"].get<double>());
        CHECK(table.find(p3) != std::string::npos);
    }
    CHECK(j["config"]["alpha"] == 0.05);
    CHECK(j["fixture_version"] == "1");
}

TEST_CASE("observed sites") {
    auto sites = two_speaker_sites();
    auto trans = pair_transitions(sites);
    REQUIRE(trans.size() == 2);
    auto r = analyze_sites(sites, trans, {});
    REQUIRE(r.dyads.size() == 2);
    const auto& child = r.dyads[0].role == Role::Child ? r.dyads[0] : r.dyads[1];
    CHECK(child.tokens == 3);
    CHECK(child.types == 2);
    CHECK(*child.bias == 1.0);
    CHECK(child.empirical_overlap == 0.0);
    CHECK(child.n_transitions == 1);
    CHECK(*child.tpr == 1.0);
}

TEST_CASE("model sites, degenerate flag and mle") {
    auto sites = two_speaker_sites();
    auto trans = pair_transitions(sites);
    std::vector<ProbSite> probs;
    for (const auto& s : sites) probs.push_back({s.site_id, 0.0});
    auto r = analyze_model(sites, trans, probs, {});
    for (const auto& d : r.dyads) {
        CHECK(*d.bias == 1.0);
        CHECK(d.degenerate);
        CHECK(d.empirical_overlap == 0.0);
    }
    bool saw_child = false;
    for (const auto& g : r.groups) {
        if (g.role != Role::Child) continue;
        saw_child = true;
        REQUIRE(g.mle.has_value());
        CHECK(g.mle->sites == 3);
        CHECK(g.mle->accuracy == doctest::Approx(1.0 / 3.0));
        CHECK(g.degenerate);
    }
    CHECK(saw_child);
    auto j = json::parse(rendered(r, OutputFormat::Json));
    CHECK(j["source"] == "model");
}

TEST_CASE("test result json") {
    TestResult t{TestKind::Pearson, 0.5, 10, 0.1, true};
    auto j = json::parse(test_result_json(t));
    CHECK(j["r"] == 0.5);
    CHECK(j["df"] == 10);
    CHECK(format_from_string("json") == OutputFormat::Json);
    CHECK_FALSE(format_from_string("xml").has_value());
}

}  // TEST_SUITE
