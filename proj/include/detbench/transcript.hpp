#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace detbench {

enum class Role { Child, Caretaker, Other };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view text);

/// Error raised for unrecoverable input problems. Carries the 1-based line
/// number of the offending input line (0 when not line-specific).
class DataError : public std::runtime_error {
public:
    DataError(const std::string& message, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Utterance {
    std::string session_id;
    std::size_t index = 0;
    std::string speaker;
    Role role = Role::Other;
    std::vector<std::string> tokens;
    std::string raw_text;

    bool operator==(const Utterance&) const = default;
};

struct Session {
    std::string session_id;
    std::string dyad_id;
    std::vector<Utterance> utterances;

    bool operator==(const Session&) const = default;
};

/// Speaker label to role lookup. Unknown labels map to Role::Other.
class SpeakerMap {
public:
    /// CHI -> child; MOT, FAT, CAR -> caretaker.
    static SpeakerMap defaults();
    /// Reads `LABEL = role` lines; `#` starts a comment. Entries extend the
    /// defaults.
    static SpeakerMap from_stream(std::istream& in);

    void set(std::string speaker, Role role);
    Role role_of(std::string_view speaker) const;

private:
    std::map<std::string, Role, std::less<>> roles_;
};

/// Tokens of one cleaned line plus, for each token, whether a phrase break
/// (comma, terminator, or punctuation-only token) follows it.
struct Tokenized {
    std::vector<std::string> tokens;
    std::vector<bool> break_after;
};

/// Whitespace split, lowercase, strip leading/trailing punctuation, keep
/// internal apostrophes; drops empty results and the unintelligible
/// placeholders xxx/yyy/www.
Tokenized tokenize(std::string_view text);

/// Removes CHAT markup from a main-tier body: "[...]" groups, the "<" ">"
/// brackets of retraced spans, and "+..." style utterance terminators.
std::string strip_chat_markup(std::string_view body);

struct ParseWarning {
    std::size_t line;
    std::string message;
};

struct ChatOptions {
    std::string dyad_id = "dyad";
    /// Session id used when the document carries no "@Media:" header.
    std::string session_id = "session";
};

struct ChatParseResult {
    std::vector<Session> sessions;
    std::vector<ParseWarning> warnings;
};

/// Parses the main tiers of a CHAT document. Each "@Begin" opens a new
/// session; "@Media:" names it. Dependent tiers and other headers are
/// skipped.
ChatParseResult parse_chat(std::string_view text, const SpeakerMap& speakers,
                           const ChatOptions& options = {});

/// Normalized JSONL transcript. One object per line with keys session, index,
/// speaker, role, text. Sessions are returned in order of first appearance,
/// utterances sorted by index. The dyad of a session is its optional "dyad"
/// key, else the session id.
std::vector<Session> parse_jsonl_transcript(std::istream& in);

void write_jsonl_transcript(std::ostream& out, const std::vector<Session>& sessions);

}  // namespace detbench
