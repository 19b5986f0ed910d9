#pragma once

// Constituency engine: lexical projection, binary Merge, level images with
// the root flag (theta), time-pattern abstraction, pushout equivalence
// classes, partial mapping to syntax trees and structure-dependent Move.

#include "dora/common.hpp"

#include <array>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dora::syntax {

enum class LexCat : std::uint8_t { N, V, Adj, P, NP, VP, IP, PP };

inline constexpr std::array<LexCat, 8> kAllCategories = {
    LexCat::N, LexCat::V, LexCat::Adj, LexCat::P, LexCat::NP, LexCat::VP, LexCat::IP, LexCat::PP};

std::string_view to_string(LexCat c);
std::optional<LexCat> parse_lexcat(std::string_view s);

using Words = std::vector<std::string>;

// Splits on whitespace, lowercases, drops trailing punctuation.
Words tokenize(std::string_view sentence);
std::string join(const Words& words);

struct Rule {
    LexCat left;
    LexCat right;
    LexCat result;
};

// Outcome of licensing a pair of categories. A coerced side was promoted
// N -> NP at the use site.
struct Licence {
    LexCat result;
    bool left_coerced = false;
    bool right_coerced = false;
};

class Grammar {
public:
    Grammar() = default;
    Grammar(std::map<std::string, LexCat> lexicon, std::vector<Rule> rules,
            std::set<LexCat> roots = {LexCat::IP});

    // The five-word vocabulary used for exhaustive checks.
    static Grammar thesis();
    // Thesis vocabulary, the question-formation words and the themed
    // vocabulary of the generated dataset.
    static Grammar defaults();
    static std::vector<Rule> default_rules();

    // {"lexicon":{"dogs":"N",...},"rules":[["Adj","N","NP"],...],"roots":["IP"]}
    static Grammar parse(std::string_view json_text);
    static Grammar load(const std::string& path);
    std::string to_json() const;

    LexCat project(std::string_view word) const;
    bool knows(std::string_view word) const;

    // Direct rule on the raw categories first; N -> NP promotion only when no
    // direct rule applies.
    std::optional<Licence> license(LexCat left, LexCat right) const;

    bool is_root(LexCat c) const { return roots_.count(c) != 0; }
    const std::map<std::string, LexCat>& lexicon() const { return lexicon_; }
    const std::vector<Rule>& rules() const { return rules_; }

    void add_word(std::string word, LexCat cat);

private:
    std::map<std::string, LexCat> lexicon_;
    std::vector<Rule> rules_;
    std::set<LexCat> roots_{LexCat::IP};
};

// 1-based inclusive word positions.
struct Span {
    int start = 0;
    int end = 0;
    auto operator<=>(const Span&) const = default;
};

struct Constituent {
    LexCat category{};
    Span span;
    int level = 1;
    std::string word; // leaves only
    std::shared_ptr<const Constituent> left;
    std::shared_ptr<const Constituent> right;
    bool left_coerced = false;
    bool right_coerced = false;

    bool is_word() const { return !left; }
};

using ConstituentPtr = std::shared_ptr<const Constituent>;

Constituent lexical_constituent(const Grammar& g, std::string_view word, int position);

// Binary Merge. Children are shared, never copied or altered. Throws
// std::invalid_argument when the spans are not adjacent.
std::optional<Constituent> merge(const ConstituentPtr& a, const ConstituentPtr& b, const Grammar& g);

struct ImageItem {
    Constituent constituent; // first derivation found
    std::uint64_t derivations = 0;
};

struct LevelImage {
    int level = 0;
    std::vector<ImageItem> items; // sorted by (span, category)
    bool theta = false;
};

// Left-to-right CKY chart indexed by (span, category, level). Adding a word
// extends every span ending at it, so images are available for each prefix.
class IncrementalParser {
public:
    explicit IncrementalParser(const Grammar& g) : grammar_(&g) {}

    void push(std::string_view word);
    std::size_t size() const { return words_.size(); }
    const Words& words() const { return words_; }

    std::vector<LevelImage> images() const;

    // Every derivation of root-category constituents spanning the sequence
    // at the given level, up to `limit` trees.
    std::vector<ConstituentPtr> root_derivations(int level, std::size_t limit = 64) const;

    struct Key {
        LexCat category;
        int level;
        auto operator<=>(const Key&) const = default;
    };
    struct BackPointer {
        int split;
        Key left;
        Key right;
        bool left_coerced;
        bool right_coerced;
    };
    struct Entry {
        ConstituentPtr repr;
        std::uint64_t derivations = 0;
        std::vector<BackPointer> back;
    };

    // cell(s, e) for 1-based inclusive span.
    const std::map<Key, Entry>& cell(int start, int end) const;

private:
    std::map<Key, Entry>& cell_mut(int start, int end);
    std::vector<ConstituentPtr> expand(int start, int end, const Key& key, std::size_t limit) const;

    const Grammar* grammar_;
    Words words_;
    // cells_[e-1][s-1]
    std::vector<std::vector<std::map<Key, Entry>>> cells_;
};

std::vector<LevelImage> chart_parse(const Words& words, const Grammar& g);

struct TimePattern {
    int level = 0;
    std::set<std::pair<int, LexCat>> entries; // (end position, category)
    bool theta = false;

    auto operator<=>(const TimePattern&) const = default;
};

TimePattern time_pattern(const LevelImage& image);
// Renders as (2,4,NP,VP,0): positions, then labels, then theta.
std::string to_string(const TimePattern& p);

// The ordered list of a sequence's time patterns over its nonempty levels.
std::vector<TimePattern> structure_signature(const Words& words, const Grammar& g);

struct PushoutMember {
    std::size_t sequence;
    int level;
    auto operator<=>(const PushoutMember&) const = default;
};

struct PushoutClass {
    TimePattern representative;
    std::vector<PushoutMember> members;
};

// Every sequence contributes one image per level 2..L, L being the deepest
// nonempty level across the corpus; empty images take part in the quotient.
std::vector<PushoutClass> build_pushout(const std::vector<Words>& corpus, const Grammar& g);

struct SyntaxTree {
    ConstituentPtr root;
    std::string bracketed() const;
    Words leaves() const;
};

struct TreeResult {
    std::vector<SyntaxTree> trees; // empty when the sequence has no root
    bool ambiguous() const { return trees.size() > 1; }
};

TreeResult to_syntax_tree(const Words& words, const Grammar& g);

std::string bracketed(const Constituent& c);

enum class QueryKind { YesNo, WhObject, WhSubject };

// Question formation by movement over the tree. The auxiliary is the head of
// the matrix VP whose complement is itself a VP.
Words structure_transform(const SyntaxTree& tree, QueryKind kind);

// Number of distinct binary trees over n leaves, C(n-1).
std::uint64_t catalan_count(std::uint64_t leaves);

enum class WitnessKind {
    SameImage, // two sequences share a T*_i image: S is not isomorphic to T*_i
    Branching, // same T*_(i-1) image, different T*_i image
};

struct WitnessQuery {
    std::size_t min_length = 1;
    std::size_t max_length = 4;
    WitnessKind kind = WitnessKind::SameImage;
    bool require_grammatical = true;
    // SameImage only: the pair must be reorderings of one multiset of words.
    bool require_permutation = true;
};

struct Witness {
    Words first;
    Words second;
    int level = 0;
    TimePattern first_pattern;
    TimePattern second_pattern;
    WitnessKind kind{};
};

// Exhaustive search over sequences of the lexicon in lexicographic order of
// words. Returns the first pair found, or nothing.
std::optional<Witness> noniso_witness(const Grammar& g, const WitnessQuery& query);

// Visits every sequence over the lexicon with length in [1, max_length].
template <typename F>
void for_each_sequence(const Grammar& g, std::size_t min_length, std::size_t max_length, F&& f) {
    std::vector<std::string> vocab;
    for (const auto& [w, c] : g.lexicon()) vocab.push_back(w);
    if (vocab.empty()) return;
    for (std::size_t len = std::max<std::size_t>(min_length, 1); len <= max_length; ++len) {
        std::vector<std::size_t> idx(len, 0);
        Words seq(len);
        bool done = false;
        while (!done) {
            for (std::size_t i = 0; i < len; ++i) seq[i] = vocab[idx[i]];
            f(static_cast<const Words&>(seq));
            std::size_t pos = len;
            while (true) {
                if (pos == 0) { done = true; break; }
                --pos;
                if (++idx[pos] < vocab.size()) break;
                idx[pos] = 0;
            }
        }
    }
}

} // namespace dora::syntax
