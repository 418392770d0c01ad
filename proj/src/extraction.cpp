#include "detbench/extraction.hpp"

#include <map>
#include <string>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

namespace detbench {

namespace {

constexpr std::size_t kMaxNounRun = 4;

DxNSite make_site(const Session& session, const Utterance& utt, std::size_t tok, Determiner det,
                  std::string noun) {
    DxNSite site;
    site.site_id = make_site_id(session.dyad_id, session.session_id, utt.index, tok);
    site.dyad_id = session.dyad_id;
    site.session_id = session.session_id;
    site.utt_index = utt.index;
    site.token_index = tok;
    site.role = utt.role;
    site.determiner = det;
    site.noun_lemma = std::move(noun);
    return site;
}

// Phrase breaks are recovered from raw_text when it tokenizes to the same
// token list; otherwise no breaks are known.
std::vector<bool> phrase_breaks(const Utterance& utt) {
    auto t = tokenize(utt.raw_text);
    if (t.tokens == utt.tokens) return t.break_after;
    return std::vector<bool>(utt.tokens.size(), false);
}

template <class T>
T field(const nlohmann::json& obj, const char* key, std::size_t lineno) {
    if (!obj.contains(key)) throw DataError(std::string("missing field '") + key + "'", lineno);
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::type_error&) {
        throw DataError(std::string("wrong type for field '") + key + "'", lineno);
    }
}

std::size_t index_field(const nlohmann::json& obj, const char* key, std::size_t lineno) {
    auto v = field<long long>(obj, key, lineno);
    if (v < 0) throw DataError(std::string("field '") + key + "' must be nonnegative", lineno);
    return static_cast<std::size_t>(v);
}

template <class Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
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
        fn(obj, lineno);
    }
}

}  // namespace

std::string_view to_string(Determiner det) { return det == Determiner::The ? "the" : "a"; }

std::optional<Determiner> determiner_from_token(std::string_view token) {
    if (token == "the") return Determiner::The;
    if (token == "a" || token == "an") return Determiner::A;
    return std::nullopt;
}

std::string make_site_id(std::string_view dyad, std::string_view session, std::size_t utt,
                         std::size_t tok) {
    std::string id;
    id.reserve(dyad.size() + session.size() + 16);
    id.append(dyad).append("/").append(session).append("/");
    id.append(std::to_string(utt)).append("/").append(std::to_string(tok));
    return id;
}

ExtractionResult extract_dxn_sites(const Session& session, const Lexicon& lexicon) {
    ExtractionResult result;
    for (const auto& utt : session.utterances) {
        const auto& toks = utt.tokens;
        std::vector<bool> breaks;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            auto det = determiner_from_token(toks[i]);
            if (!det) continue;
            if (breaks.empty()) breaks = phrase_breaks(utt);

            std::optional<std::size_t> head;
            if (!breaks[i]) {
                for (std::size_t j = i + 1; j < toks.size() && j - i <= kMaxNounRun; ++j) {
                    if (lexicon.is_stopword(toks[j])) break;
                    head = j;
                    if (breaks[j]) break;
                }
            }
            if (!head) {
                ++result.skipped_no_head;
                continue;
            }
            if (lexicon.looks_plural(toks[*head])) {
                ++result.skipped_plural;
                continue;
            }
            result.sites.push_back(make_site(session, utt, i, *det, toks[*head]));
        }
    }
    return result;
}

ExtractionResult extract_dxn_sites(const Session& session,
                                   std::span<const NounAnnotation> annotations) {
    ExtractionResult result;
    result.sites.reserve(annotations.size());
    for (const auto& a : annotations) {
        if (a.utt_index >= session.utterances.size())
            throw DataError("annotation refers to utterance " + std::to_string(a.utt_index) +
                            " beyond the end of session '" + session.session_id + "'");
        const auto& utt = session.utterances[a.utt_index];
        if (a.token_index >= utt.tokens.size())
            throw DataError("annotation token " + std::to_string(a.token_index) +
                            " out of range in " + session.session_id + "/" +
                            std::to_string(a.utt_index));
        auto det = determiner_from_token(utt.tokens[a.token_index]);
        if (!det)
            throw DataError("annotated token '" + utt.tokens[a.token_index] + "' at " +
                            session.session_id + "/" + std::to_string(a.utt_index) + "/" +
                            std::to_string(a.token_index) + " is not a determiner");
        if (a.noun_lemma.empty())
            throw DataError("empty noun in annotation at " + session.session_id + "/" +
                            std::to_string(a.utt_index));
        result.sites.push_back(make_site(session, utt, a.token_index, *det, a.noun_lemma));
    }
    return result;
}

std::vector<Transition> pair_transitions(std::span<const DxNSite> sites,
                                         const PairingOptions& options,
                                         std::span<const Session> sessions) {
    if (options.exclude_verbatim_repeats && sessions.empty())
        throw std::invalid_argument("exclude_verbatim_repeats needs the source sessions");

    std::map<std::pair<std::string_view, std::string_view>, const Session*> session_of;
    for (const auto& s : sessions) session_of[{s.dyad_id, s.session_id}] = &s;
    auto utterance = [&](const DxNSite& site) -> const Utterance* {
        auto it = session_of.find({site.dyad_id, site.session_id});
        if (it == session_of.end() || site.utt_index >= it->second->utterances.size())
            return nullptr;
        return &it->second->utterances[site.utt_index];
    };

    // latest eligible context per (dyad, session, noun, role)
    using Key = std::tuple<std::string_view, std::string_view, std::string_view, Role>;
    std::map<Key, const DxNSite*> latest;
    std::map<std::pair<std::string_view, std::string_view>, std::pair<std::size_t, std::size_t>>
        last_pos;

    std::vector<Transition> out;
    for (const auto& site : sites) {
        auto pos = std::pair{site.utt_index, site.token_index};
        auto [pit, fresh] = last_pos.try_emplace({site.dyad_id, site.session_id}, pos);
        if (!fresh) {
            if (pos < pit->second)
                throw std::invalid_argument("sites out of order at " + site.site_id);
            pit->second = pos;
        }
        if (site.role == Role::Other) continue;

        Role other = site.role == Role::Child ? Role::Caretaker : Role::Child;
        bool responded = false;
        auto it = latest.find(Key{site.dyad_id, site.session_id, site.noun_lemma, other});
        if (it != latest.end()) {
            const DxNSite& ctx = *it->second;
            bool in_window =
                !options.window_utts || site.utt_index - ctx.utt_index <= *options.window_utts;
            bool verbatim = false;
            if (options.exclude_verbatim_repeats && site.role == Role::Caretaker) {
                auto* ru = utterance(site);
                auto* cu = utterance(ctx);
                verbatim = ru && cu && ru->tokens == cu->tokens;
            }
            if (in_window && !verbatim) {
                out.push_back(Transition{"t:" + site.site_id, site.dyad_id, ctx.site_id,
                                         site.site_id, site.noun_lemma});
                responded = true;
            }
        }
        if (!responded || options.responses_as_context)
            latest[Key{site.dyad_id, site.session_id, site.noun_lemma, site.role}] = &site;
    }
    return out;
}

std::vector<DxNSite> read_sites_jsonl(std::istream& in) {
    std::vector<DxNSite> sites;
    for_each_json_line(in, [&](const nlohmann::json& obj, std::size_t lineno) {
        DxNSite s;
        s.site_id = field<std::string>(obj, "site_id", lineno);
        s.dyad_id = field<std::string>(obj, "dyad", lineno);
        s.session_id = field<std::string>(obj, "session", lineno);
        s.utt_index = index_field(obj, "utt", lineno);
        s.token_index = index_field(obj, "tok", lineno);
        auto role = role_from_string(field<std::string>(obj, "role", lineno));
        if (!role) throw DataError("field 'role' must be child, caretaker or other", lineno);
        s.role = *role;
        auto det = field<std::string>(obj, "det", lineno);
        if (det != "the" && det != "a") throw DataError("field 'det' must be \"the\" or \"a\"", lineno);
        s.determiner = det == "the" ? Determiner::The : Determiner::A;
        s.noun_lemma = field<std::string>(obj, "noun", lineno);
        if (s.noun_lemma.empty()) throw DataError("field 'noun' is empty", lineno);
        sites.push_back(std::move(s));
    });
    return sites;
}

void write_sites_jsonl(std::ostream& out, std::span<const DxNSite> sites) {
    for (const auto& s : sites) {
        nlohmann::ordered_json obj;
        obj["site_id"] = s.site_id;
        obj["dyad"] = s.dyad_id;
        obj["session"] = s.session_id;
        obj["utt"] = s.utt_index;
        obj["tok"] = s.token_index;
        obj["role"] = to_string(s.role);
        obj["det"] = to_string(s.determiner);
        obj["noun"] = s.noun_lemma;
        out << obj.dump() << '\n';
    }
}

std::vector<Transition> read_transitions_jsonl(std::istream& in) {
    std::vector<Transition> out;
    for_each_json_line(in, [&](const nlohmann::json& obj, std::size_t lineno) {
        Transition t;
        t.transition_id = field<std::string>(obj, "transition_id", lineno);
        t.dyad_id = field<std::string>(obj, "dyad", lineno);
        t.context_site = field<std::string>(obj, "context", lineno);
        t.response_site = field<std::string>(obj, "response", lineno);
        t.noun_lemma = field<std::string>(obj, "noun", lineno);
        out.push_back(std::move(t));
    });
    return out;
}

void write_transitions_jsonl(std::ostream& out, std::span<const Transition> transitions) {
    for (const auto& t : transitions) {
        nlohmann::ordered_json obj;
        obj["transition_id"] = t.transition_id;
        obj["dyad"] = t.dyad_id;
        obj["context"] = t.context_site;
        obj["response"] = t.response_site;
        obj["noun"] = t.noun_lemma;
        out << obj.dump() << '\n';
    }
}

std::vector<SessionAnnotation> read_annotations_jsonl(std::istream& in) {
    std::vector<SessionAnnotation> out;
    for_each_json_line(in, [&](const nlohmann::json& obj, std::size_t lineno) {
        SessionAnnotation a;
        a.session_id = field<std::string>(obj, "session", lineno);
        a.annotation.utt_index = index_field(obj, "utt", lineno);
        a.annotation.token_index = index_field(obj, "tok", lineno);
        a.annotation.noun_lemma = field<std::string>(obj, "noun", lineno);
        out.push_back(std::move(a));
    });
    return out;
}

}  // namespace detbench
