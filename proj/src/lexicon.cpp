#include <algorithm>

#include "detbench/extraction.hpp"

namespace detbench {

namespace {

bool contains(const std::vector<std::string>& sorted, std::string_view word) {
    return std::binary_search(sorted.begin(), sorted.end(), word,
                              [](std::string_view a, std::string_view b) { return a < b; });
}

std::vector<std::string> sorted(std::vector<std::string> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

Lexicon build_shipped() {
    Lexicon lex;
    lex.stopwords = sorted({
        // determiners and quantifiers
        "the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her", "its",
        "our", "their", "some", "any", "no", "every", "each", "another", "all", "both", "other",
        "much", "many", "more", "most", "few", "lot", "lots",
        // conjunctions
        "and", "or", "but", "so", "because", "cause", "if", "when", "then", "than", "while",
        "until", "unless", "though", "whether",
        // prepositions and particles
        "in", "on", "at", "over", "under", "with", "of", "for", "to", "from", "by", "up", "down",
        "out", "off", "into", "onto", "about", "through", "behind", "near", "next", "like",
        "after", "before", "round", "around", "inside", "outside", "underneath", "between",
        "across", "along", "away", "back", "without", "upon", "against", "towards", "past",
        // auxiliaries, copulas and their contractions
        "is", "are", "was", "were", "be", "been", "being", "am", "do", "does", "did", "done",
        "have", "has", "had", "having", "will", "would", "can", "could", "shall", "should", "may",
        "might", "must", "isn't", "aren't", "wasn't", "weren't", "don't", "doesn't", "didn't",
        "haven't", "hasn't", "hadn't", "won't", "wouldn't", "can't", "cannot", "couldn't",
        "shan't", "shouldn't", "mustn't", "gonna", "wanna", "gotta",
        // pronouns and pronominal contractions
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "myself",
        "yourself", "himself", "herself", "itself", "ourselves", "themselves", "one", "ones",
        "something", "anything", "nothing", "everything", "someone", "anyone", "everyone",
        "somebody", "anybody", "nobody", "everybody", "what", "who", "whom", "whose", "which",
        "where", "why", "how", "i'm", "you're", "he's", "she's", "it's", "we're", "they're",
        "i've", "you've", "we've", "they've", "i'll", "you'll", "he'll", "she'll", "it'll",
        "we'll", "they'll", "i'd", "you'd", "he'd", "she'd", "we'd", "they'd", "that's",
        "there's", "here's", "what's", "where's", "who's", "let's",
        // adverbs and discourse particles that commonly close a noun phrase
        "there", "here", "now", "not", "too", "also", "again", "please", "yes", "no", "yeah",
        "oh", "okay", "ok", "very", "just", "only", "really", "still", "even", "ever", "never",
        "already", "soon", "today", "tomorrow", "yesterday", "then", "as", "well",
    });
    lex.singular_s_nouns = sorted({
        "bus", "glass", "grass", "class", "dress", "mess", "kiss", "boss", "moss", "cross",
        "news", "lens", "gas", "bonus", "circus", "octopus", "hippopotamus", "cactus",
        "walrus", "virus", "iris", "tennis", "measles", "mumps", "chess", "chassis", "atlas",
        "canvas", "christmas", "species", "series", "bias", "pancreas", "plus", "bogus",
        "compass", "princess", "actress", "waitress", "address", "business", "witness",
        "mattress", "fortress", "harness", "rhinoceros", "platypus", "minibus",
    });
    lex.irregular_plurals = sorted({
        "children", "men", "women", "feet", "teeth", "geese", "mice", "lice", "people", "oxen",
        "trousers", "scissors", "pants", "glasses", "clothes",
    });
    return lex;
}

}  // namespace

const Lexicon& Lexicon::shipped() {
    static const Lexicon lexicon = build_shipped();
    return lexicon;
}

bool Lexicon::is_stopword(std::string_view word) const { return contains(stopwords, word); }

bool Lexicon::looks_plural(std::string_view noun) const {
    if (contains(irregular_plurals, noun)) return true;
    if (contains(singular_s_nouns, noun)) return false;
    if (noun.size() < 3 || noun.back() != 's') return false;
    auto before = noun[noun.size() - 2];
    // -ss, -us, -is and possessive -'s are singular shapes
    return before != 's' && before != 'u' && before != 'i' && before != '\'';
}

}  // namespace detbench
