#pragma once

// Synthetic corpora: the themed 4 x 8 mapping corpus, its word vectors, and
// the sentence / scrambled-word presentation corpora used for spectra.

#include "dora/constituency.hpp"
#include "dora/corpus.hpp"
#include "dora/embeddings.hpp"
#include "dora/rng.hpp"

#include <map>
#include <string>
#include <vector>

namespace dora {

struct Theme {
    std::string name;
    std::vector<std::string> nouns, adjectives, verbs, clausal_verbs;
};

// Four themes; every word is in Grammar::defaults().
const std::vector<Theme>& default_themes();

// Embedding strength of each signal. Noise has unit variance per dimension.
struct EmbeddingProfile {
    double category = 1.0; // N / V / Adj
    double frame = 0.6;    // clausal-complement verbs vs. other verbs
    double theme = 0.3;
    double noise = 1.0;

    static EmbeddingProfile syntactic(); // category-dominated
    static EmbeddingProfile topical();   // theme-dominated
};

struct DatasetOptions {
    int analogs = 4;
    int props = 8;
    std::uint64_t seed = 1;
    int dimension = 300;
    EmbeddingProfile profile = EmbeddingProfile::syntactic();
};

struct Dataset {
    std::vector<AnalogSpec> corpus;
    EmbeddingTable<double> embeddings; // raw
    syntax::Grammar grammar;
    std::map<std::string, std::string> category; // token -> N | V | Vc | Adj
};

// Each analog instantiates the same eight structural templates with its
// theme's words, so every proposition has a structural twin in every other
// analog. Throws std::invalid_argument for props other than 8 or more
// analogs than themes.
Dataset generate_dataset(const DatasetOptions& options);

// Category centroids shared across themes, theme centroids shared across
// categories, Gaussian noise per token.
EmbeddingTable<double> synthetic_embeddings(const std::vector<std::pair<std::string, std::string>>& token_category,
                                            const std::map<std::string, std::string>& token_theme, int dimension,
                                            const EmbeddingProfile& profile, std::uint64_t seed);

// A single analog of `sentences` propositions "Adj N V N" over unique
// tokens, with a matching link-ready table of the given dimension.
struct PresentationCorpus {
    std::vector<AnalogSpec> corpus;
    EmbeddingTable<double> links;
};
PresentationCorpus sentence_condition(int sentences, int dimension, std::uint64_t seed);
// `words` one-word propositions, each a single role binding with an EMPTY
// predicate.
PresentationCorpus scrambled_condition(int words, int dimension, std::uint64_t seed);

} // namespace dora
