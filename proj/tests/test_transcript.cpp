#include <sstream>
#include <string>
#include <vector>

#include "detbench/transcript.hpp"
#include "doctest.h"

using namespace detbench;

namespace {

std::size_t utterance_count(const ChatParseResult& r) {
    std::size_t n = 0;
    for (const auto& s : r.sessions) n += s.utterances.size();
    return n;
}

std::vector<Session> parse_jsonl(const std::string& text) {
    std::istringstream in(text);
    return parse_jsonl_transcript(in);
}

}  // namespace

TEST_SUITE("transcript") {

TEST_CASE("single caretaker tier") {
    auto r = parse_chat("*MOT:\tis it the dog ?", SpeakerMap::defaults());
    REQUIRE(r.sessions.size() == 1);
    REQUIRE(r.sessions[0].utterances.size() == 1);
    const auto& u = r.sessions[0].utterances[0];
    CHECK(u.speaker == "MOT");
    CHECK(u.role == Role::Caretaker);
    CHECK(u.tokens == std::vector<std::string>{"is", "it", "the", "dog"});
    CHECK(r.warnings.empty());
}

TEST_CASE("bracketed annotations are removed") {
    auto r = parse_chat("*CHI:\tthe dog [!] won't stand .", SpeakerMap::defaults());
    REQUIRE(utterance_count(r) == 1);
    const auto& u = r.sessions[0].utterances[0];
    CHECK(u.role == Role::Child);
    CHECK(u.tokens == std::vector<std::string>{"the", "dog", "won't", "stand"});
}

TEST_CASE("headers and dependent tiers only") {
    auto r = parse_chat("@Begin\n%mor:\tdet|the n|dog .\n@End\n", SpeakerMap::defaults());
    CHECK(utterance_count(r) == 0);
}

TEST_CASE("empty document") {
    auto r = parse_chat("", SpeakerMap::defaults());
    CHECK(r.sessions.empty());
    CHECK(r.warnings.empty());
}

TEST_CASE("tier without colon is a warning with its line number") {
    auto r = parse_chat("*MOT:\thello .\n*CHI no colon here\n*CHI:\tthe ball .\n",
                        SpeakerMap::defaults());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].line == 2);
    CHECK(utterance_count(r) == 2);
}

TEST_CASE("retraces, fillers and unintelligible tokens") {
    auto r = parse_chat(
        "*CHI:\t<the dog> [/] the cat &um xxx wants 0is a ball@c (be)cause .\n",
        SpeakerMap::defaults());
    REQUIRE(utterance_count(r) == 1);
    CHECK(r.sessions[0].utterances[0].tokens ==
          std::vector<std::string>{"the", "cat", "wants", "a", "ball", "because"});
}

TEST_CASE("continuation lines join the previous tier") {
    auto r = parse_chat("*MOT:\tis it the dog\n\tor the little boy ?\n", SpeakerMap::defaults());
    REQUIRE(utterance_count(r) == 1);
    CHECK(r.sessions[0].utterances[0].tokens.size() == 8);
}

TEST_CASE("each @Begin opens a session; @Media names it") {
    const char* doc =
        "@Begin\n@Media:\tgail01a, audio\n*MOT:\tthe dog .\n@End\n"
        "@Begin\n*CHI:\ta dog .\n@End\n";
    auto r = parse_chat(doc, SpeakerMap::defaults());
    REQUIRE(r.sessions.size() == 2);
    CHECK(r.sessions[0].session_id == "gail01a");
    CHECK(r.sessions[0].utterances[0].session_id == "gail01a");
    CHECK(r.sessions[1].session_id == "session-2");
}

TEST_CASE("speaker map file extends defaults") {
    std::istringstream in("# extra labels\nGRA = caretaker\nSIS = other\n");
    auto map = SpeakerMap::from_stream(in);
    CHECK(map.role_of("GRA") == Role::Caretaker);
    CHECK(map.role_of("CHI") == Role::Child);
    CHECK(map.role_of("SIS") == Role::Other);
    CHECK(map.role_of("INV") == Role::Other);
}

TEST_CASE("tokenizer marks phrase breaks") {
    auto t = tokenize("What happens in the carwash, John?");
    REQUIRE(t.tokens == std::vector<std::string>{"what", "happens", "in", "the", "carwash", "john"});
    CHECK(t.break_after[4]);
    CHECK_FALSE(t.break_after[3]);
    CHECK(t.break_after[5]);
}

TEST_CASE("jsonl single line") {
    auto s = parse_jsonl(
        R"({"session":"s1","index":0,"speaker":"MOT","role":"caretaker","text":"a gate"})"
        "\n");
    REQUIRE(s.size() == 1);
    CHECK(s[0].session_id == "s1");
    CHECK(s[0].dyad_id == "s1");
    REQUIRE(s[0].utterances.size() == 1);
    CHECK(s[0].utterances[0].tokens == std::vector<std::string>{"a", "gate"});
}

TEST_CASE("jsonl utterances are ordered by index") {
    auto s = parse_jsonl(
        R"({"session":"s1","index":1,"speaker":"CHI","role":"child","text":"found a gate"})"
        "\n"
        R"({"session":"s1","index":0,"speaker":"MOT","role":"caretaker","text":"a gate"})"
        "\n");
    REQUIRE(s[0].utterances.size() == 2);
    CHECK(s[0].utterances[0].index == 0);
    CHECK(s[0].utterances[1].index == 1);
    CHECK(s[0].utterances[1].speaker == "CHI");
}

TEST_CASE("jsonl missing field names field and line") {
    try {
        parse_jsonl(R"({"session":"s1","index":0,"speaker":"MOT","role":"caretaker","text":"hi"})"
                    "\n"
                    R"({"session":"s1","index":1,"speaker":"MOT","text":"a gate"})"
                    "\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("role") != std::string::npos);
    }
}

TEST_CASE("jsonl duplicate index and gaps are errors") {
    CHECK_THROWS_AS(
        parse_jsonl(R"({"session":"s","index":0,"speaker":"MOT","role":"caretaker","text":"a"})"
                    "\n"
                    R"({"session":"s","index":0,"speaker":"MOT","role":"caretaker","text":"b"})"
                    "\n"),
        DataError);
    CHECK_THROWS_AS(
        parse_jsonl(R"({"session":"s","index":0,"speaker":"MOT","role":"caretaker","text":"a"})"
                    "\n"
                    R"({"session":"s","index":2,"speaker":"MOT","role":"caretaker","text":"b"})"
                    "\n"),
        DataError);
    CHECK_THROWS_AS(parse_jsonl("{not json\n"), DataError);
}

TEST_CASE("round trip through normalized jsonl") {
    const char* doc =
        "@Begin\n@Media:\tliz02, audio\n*MOT:\tIs it the dog or the little boy ?\n"
        "*CHI:\tThe dog [!] won't stand up properly .\n*FAT:\tI'll make you a gate .\n@End\n";
    auto parsed = parse_chat(doc, SpeakerMap::defaults(), {"Liz", "x"}).sessions;
    std::ostringstream out;
    write_jsonl_transcript(out, parsed);
    auto again = parse_jsonl(out.str());
    CHECK(again == parsed);

    std::ostringstream out2;
    write_jsonl_transcript(out2, again);
    CHECK(out2.str() == out.str());
}

TEST_CASE("parsing a concatenation equals concatenating the parses") {
    const std::string a =
        R"({"session":"a","index":0,"speaker":"MOT","role":"caretaker","text":"the dog"})"
        "\n";
    const std::string b =
        R"({"session":"b","index":0,"speaker":"CHI","role":"child","text":"a dog"})"
        "\n";
    auto joined = parse_jsonl(a + b);
    auto pa = parse_jsonl(a);
    auto pb = parse_jsonl(b);
    pa.insert(pa.end(), pb.begin(), pb.end());
    CHECK(joined == pa);

    const std::string ca = "@Begin\n@Media:\tone, audio\n*MOT:\tthe dog .\n@End\n";
    const std::string cb = "@Begin\n@Media:\ttwo, audio\n*CHI:\ta dog .\n@End\n";
    auto cj = parse_chat(ca + cb, SpeakerMap::defaults()).sessions;
    auto c1 = parse_chat(ca, SpeakerMap::defaults()).sessions;
    auto c2 = parse_chat(cb, SpeakerMap::defaults()).sessions;
    c1.insert(c1.end(), c2.begin(), c2.end());
    CHECK(cj == c1);
}

}  // TEST_SUITE
