#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detbench/transcript.hpp"

namespace detbench {

enum class Determiner { The, A };

std::string_view to_string(Determiner det);
/// "the" -> The; "a" and "an" -> A.
std::optional<Determiner> determiner_from_token(std::string_view token);

struct DxNSite {
    std::string site_id;
    std::string dyad_id;
    std::string session_id;
    std::size_t utt_index = 0;
    std::size_t token_index = 0;  // position of the determiner
    Role role = Role::Other;
    Determiner determiner = Determiner::The;
    std::string noun_lemma;

    bool operator==(const DxNSite&) const = default;
};

std::string make_site_id(std::string_view dyad, std::string_view session, std::size_t utt,
                         std::size_t tok);

struct Transition {
    std::string transition_id;
    std::string dyad_id;
    std::string context_site;
    std::string response_site;
    std::string noun_lemma;

    bool operator==(const Transition&) const = default;
};

/// Externally supplied noun for the determiner at (utt_index, token_index).
struct NounAnnotation {
    std::size_t utt_index = 0;
    std::size_t token_index = 0;
    std::string noun_lemma;
};

struct ExtractionResult {
    std::vector<DxNSite> sites;
    std::size_t skipped_no_head = 0;
    std::size_t skipped_plural = 0;
};

/// Word lists backing heuristic head finding. `shipped()` is the built-in
/// list; custom instances are for tests and experiments.
struct Lexicon {
    std::vector<std::string> stopwords;
    std::vector<std::string> singular_s_nouns;  // end in "s" but are singular
    std::vector<std::string> irregular_plurals;

    static const Lexicon& shipped();
    bool is_stopword(std::string_view word) const;
    bool looks_plural(std::string_view noun) const;
};

/// Heuristic mode. For each the/a/an token the head noun is the last token of
/// the run of non-stopwords that follows (at most 4 tokens, ending early at a
/// phrase break). Runs that are empty or end in a plural are skipped.
ExtractionResult extract_dxn_sites(const Session& session,
                                   const Lexicon& lexicon = Lexicon::shipped());

/// Annotated mode: emits exactly the given sites. Throws DataError when an
/// annotation does not point at a determiner token.
ExtractionResult extract_dxn_sites(const Session& session,
                                   std::span<const NounAnnotation> annotations);

struct PairingOptions {
    /// Maximum utterance distance between context and response; unset means
    /// the whole session.
    std::optional<std::size_t> window_utts;
    /// Drop caretaker responses whose utterance repeats the child's context
    /// utterance token for token. Needs the sessions passed to pair_transitions.
    bool exclude_verbatim_repeats = false;
    /// Whether a site that answered an earlier site may itself serve as a
    /// context later on.
    bool responses_as_context = true;
};

/// Pairs each child/caretaker site with the nearest preceding site of the
/// opposite role with the same noun in the same session. Sites must be in
/// (utt_index, token_index) order within each session.
std::vector<Transition> pair_transitions(std::span<const DxNSite> sites,
                                         const PairingOptions& options = {},
                                         std::span<const Session> sessions = {});

std::vector<DxNSite> read_sites_jsonl(std::istream& in);
void write_sites_jsonl(std::ostream& out, std::span<const DxNSite> sites);

std::vector<Transition> read_transitions_jsonl(std::istream& in);
void write_transitions_jsonl(std::ostream& out, std::span<const Transition> transitions);

/// Annotation JSONL: {"session": str, "utt": int, "tok": int, "noun": str}.
struct SessionAnnotation {
    std::string session_id;
    NounAnnotation annotation;
};
std::vector<SessionAnnotation> read_annotations_jsonl(std::istream& in);

}  // namespace detbench
