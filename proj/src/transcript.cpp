#include "detbench/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "json.hpp"

namespace detbench {

namespace {

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_break_char(char c) {
    return c == ',' || c == ';' || c == ':' || c == '.' || c == '?' || c == '!';
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) words.push_back(s.substr(i, j - i));
        i = j;
    }
    return words;
}

bool is_retrace_marker(std::string_view group) {
    return group == "[/]" || group == "[//]" || group == "[///]" || group == "[/-]";
}

// CHAT word-level cleanup: fillers and events (&...), omitted words (0...),
// special-form suffixes (word@c) and parenthesised elisions ((be)cause).
std::string clean_chat_word(std::string_view word) {
    if (word.empty() || word.front() == '&' || word.front() == '0') return {};
    if (word.front() == '+') return {};  // utterance terminators and linkers
    if (auto at = word.find('@'); at != std::string_view::npos) word = word.substr(0, at);
    std::string out;
    out.reserve(word.size());
    for (char c : word)
        if (c != '(' && c != ')') out.push_back(c);
    return out;
}

}  // namespace

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Child: return "child";
        case Role::Caretaker: return "caretaker";
        case Role::Other: return "other";
    }
    return "other";
}

std::optional<Role> role_from_string(std::string_view text) {
    if (text == "child") return Role::Child;
    if (text == "caretaker") return Role::Caretaker;
    if (text == "other") return Role::Other;
    return std::nullopt;
}

DataError::DataError(const std::string& message, std::size_t line)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

SpeakerMap SpeakerMap::defaults() {
    SpeakerMap map;
    map.set("CHI", Role::Child);
    map.set("MOT", Role::Caretaker);
    map.set("FAT", Role::Caretaker);
    map.set("CAR", Role::Caretaker);
    return map;
}

SpeakerMap SpeakerMap::from_stream(std::istream& in) {
    SpeakerMap map = defaults();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) throw DataError("speaker map entry needs '='", lineno);
        auto key = trim(view.substr(0, eq));
        auto value = lowercase(trim(view.substr(eq + 1)));
        auto role = role_from_string(value);
        if (key.empty() || !role) throw DataError("bad speaker map entry '" + line + "'", lineno);
        map.set(std::string(key), *role);
    }
    return map;
}

void SpeakerMap::set(std::string speaker, Role role) { roles_[std::move(speaker)] = role; }

Role SpeakerMap::role_of(std::string_view speaker) const {
    auto it = roles_.find(speaker);
    return it == roles_.end() ? Role::Other : it->second;
}

Tokenized tokenize(std::string_view text) {
    Tokenized out;
    for (auto word : split_ws(text)) {
        std::size_t b = 0, e = word.size();
        while (b < e && is_punct(word[b])) ++b;
        bool trailing_break = false;
        while (e > b && is_punct(word[e - 1])) {
            trailing_break = trailing_break || is_break_char(word[e - 1]);
            --e;
        }
        if (b == e) {
            // punctuation-only token closes the preceding phrase
            if (!out.break_after.empty()) out.break_after.back() = true;
            continue;
        }
        auto token = lowercase(word.substr(b, e - b));
        if (token == "xxx" || token == "yyy" || token == "www") continue;
        out.tokens.push_back(std::move(token));
        out.break_after.push_back(trailing_break);
    }
    return out;
}

std::string strip_chat_markup(std::string_view body) {
    // Pass 1: drop [...] groups; a retrace marker also drops the retraced
    // span, which is either the preceding <...> group or the preceding word.
    std::vector<std::string> pieces;  // words and whole <...> groups
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (is_space(c) || c == '\x15') {
            if (c == '\x15') {  // media bullet: skip to closing bullet
                auto close = body.find('\x15', i + 1);
                i = close == std::string_view::npos ? body.size() : close + 1;
            } else {
                ++i;
            }
            continue;
        }
        if (c == '[') {
            auto close = body.find(']', i);
            auto group = body.substr(i, close == std::string_view::npos ? std::string_view::npos
                                                                       : close - i + 1);
            if (is_retrace_marker(group) && !pieces.empty()) pieces.pop_back();
            i = close == std::string_view::npos ? body.size() : close + 1;
            continue;
        }
        if (c == '<') {
            auto close = body.find('>', i);
            auto end = close == std::string_view::npos ? body.size() : close + 1;
            pieces.emplace_back(body.substr(i, end - i));
            i = end;
            continue;
        }
        std::size_t j = i;
        while (j < body.size() && !is_space(body[j]) && body[j] != '[' && body[j] != '\x15')
            ++j;
        pieces.emplace_back(body.substr(i, j - i));
        i = j;
    }

    // Pass 2: unwrap <...> groups that were not retraced and clean words.
    std::string out;
    auto emit = [&out](std::string_view word) {
        auto cleaned = clean_chat_word(word);
        if (cleaned.empty()) return;
        if (!out.empty()) out.push_back(' ');
        out += cleaned;
    };
    for (const auto& piece : pieces) {
        if (!piece.empty() && piece.front() == '<') {
            std::string_view inner = piece;
            inner.remove_prefix(1);
            if (!inner.empty() && inner.back() == '>') inner.remove_suffix(1);
            for (auto word : split_ws(inner)) emit(word);
        } else {
            emit(piece);
        }
    }
    return out;
}

ChatParseResult parse_chat(std::string_view text, const SpeakerMap& speakers,
                           const ChatOptions& options) {
    ChatParseResult result;
    std::size_t sessions_opened = 0;

    auto open_session = [&] {
        ++sessions_opened;
        Session s;
        s.dyad_id = options.dyad_id;
        s.session_id = sessions_opened == 1
                           ? options.session_id
                           : options.session_id + "-" + std::to_string(sessions_opened);
        result.sessions.push_back(std::move(s));
    };

    // main tier currently being accumulated (continuation lines start with a tab)
    struct Pending {
        std::string speaker;
        std::string body;
    };
    std::optional<Pending> pending;
    bool media_named = false;

    auto flush = [&] {
        if (!pending) return;
        if (result.sessions.empty()) open_session();
        auto& session = result.sessions.back();
        Utterance u;
        u.session_id = session.session_id;
        u.index = session.utterances.size();
        u.speaker = pending->speaker;
        u.role = speakers.role_of(u.speaker);
        u.raw_text = strip_chat_markup(pending->body);
        u.tokens = tokenize(u.raw_text).tokens;
        session.utterances.push_back(std::move(u));
        pending.reset();
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;

        if (line.front() == '\t' || line.front() == ' ') {
            if (pending) {
                pending->body.push_back(' ');
                pending->body += trim(line);
            }
            continue;
        }
        if (line.front() == '@') {
            flush();
            if (line.rfind("@Begin", 0) == 0) {
                open_session();
                media_named = false;
            } else if (line.rfind("@Media:", 0) == 0 && !media_named) {
                auto value = trim(line.substr(7));
                auto name = trim(value.substr(0, value.find(',')));
                if (!name.empty()) {
                    if (result.sessions.empty()) open_session();
                    auto& session = result.sessions.back();
                    session.session_id = std::string(name);
                    for (auto& u : session.utterances) u.session_id = session.session_id;
                    media_named = true;
                }
            }
            continue;
        }
        if (line.front() == '%') {
            flush();
            continue;
        }
        if (line.front() == '*') {
            flush();
            auto colon = line.find(':');
            if (colon == std::string_view::npos) {
                result.warnings.push_back({lineno, "main tier without ':' skipped"});
                continue;
            }
            pending = Pending{std::string(trim(line.substr(1, colon - 1))),
                              std::string(trim(line.substr(colon + 1)))};
            continue;
        }
        flush();
        result.warnings.push_back({lineno, "unrecognised line skipped"});
    }
    flush();
    return result;
}

std::vector<Session> parse_jsonl_transcript(std::istream& in) {
    using nlohmann::json;
    std::vector<Session> sessions;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::vector<std::size_t>> lines_of;  // source line of each utterance

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw DataError("expected a JSON object", lineno);
        for (const char* key : {"session", "index", "speaker", "role", "text"})
            if (!obj.contains(key)) throw DataError(std::string("missing field '") + key + "'", lineno);

        Utterance u;
        try {
            u.session_id = obj.at("session").get<std::string>();
            auto index = obj.at("index").get<long long>();
            if (index < 0) throw DataError("field 'index' must be nonnegative", lineno);
            u.index = static_cast<std::size_t>(index);
            u.speaker = obj.at("speaker").get<std::string>();
            auto role = role_from_string(obj.at("role").get<std::string>());
            if (!role) throw DataError("field 'role' must be child, caretaker or other", lineno);
            u.role = *role;
            u.raw_text = obj.at("text").get<std::string>();
        } catch (const json::type_error& e) {
            throw DataError(std::string("wrong field type: ") + e.what(), lineno);
        }
        u.tokens = tokenize(u.raw_text).tokens;

        auto [it, inserted] = slot.try_emplace(u.session_id, sessions.size());
        if (inserted) {
            Session s;
            s.session_id = u.session_id;
            s.dyad_id = obj.contains("dyad") && obj["dyad"].is_string()
                            ? obj["dyad"].get<std::string>()
                            : u.session_id;
            sessions.push_back(std::move(s));
            lines_of.emplace_back();
        }
        sessions[it->second].utterances.push_back(std::move(u));
        lines_of[it->second].push_back(lineno);
    }

    for (std::size_t s = 0; s < sessions.size(); ++s) {
        auto& utts = sessions[s].utterances;
        std::vector<std::size_t> order(utts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return utts[a].index < utts[b].index; });
        std::vector<Utterance> sorted;
        sorted.reserve(utts.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto& u = utts[order[k]];
            if (u.index != k) {
                auto where = lines_of[s][order[k]];
                if (u.index < k)
                    throw DataError("duplicate index " + std::to_string(u.index) + " in session '" +
                                        u.session_id + "'",
                                    where);
                throw DataError("index gap before " + std::to_string(u.index) + " in session '" +
                                    u.session_id + "'",
                                where);
            }
            sorted.push_back(std::move(utts[order[k]]));
        }
        utts = std::move(sorted);
    }
    return sessions;
}

void write_jsonl_transcript(std::ostream& out, const std::vector<Session>& sessions) {
    for (const auto& s : sessions) {
        for (const auto& u : s.utterances) {
            nlohmann::ordered_json obj;
            obj["session"] = s.session_id;
            obj["index"] = u.index;
            obj["speaker"] = u.speaker;
            obj["role"] = to_string(u.role);
            obj["text"] = u.raw_text;
            obj["dyad"] = s.dyad_id;
            out << obj.dump() << '\n';
        }
    }
}

}  // namespace detbench
