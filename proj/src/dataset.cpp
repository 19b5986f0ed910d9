#include "dora/dataset.hpp"

#include <algorithm>
#include <set>

namespace dora {

const std::vector<Theme>& default_themes() {
    static const std::vector<Theme> themes = {
        {"pets",
         {"dogs", "cats", "birds", "mice", "men", "rabbits", "puppies", "kittens", "parrots", "hamsters"},
         {"big", "angry", "small", "lazy"},
         {"bite", "chase", "fear", "watch"},
         {"say", "hear", "know", "feel", "notice", "guess"}},
        {"farm",
         {"cows", "farmers", "horses", "hens", "sheep", "goats", "pigs", "ducks", "geese", "donkeys"},
         {"old", "brown", "tired", "muddy"},
         {"feed", "kick", "ride", "herd"},
         {"think", "hope", "expect", "suspect", "doubt", "assume"}},
        {"sea",
         {"sharks", "divers", "fish", "seals", "whales", "crabs", "dolphins", "sailors", "octopuses", "turtles"},
         {"hungry", "fast", "dark", "huge"},
         {"eat", "follow", "hunt", "bump"},
         {"believe", "suppose", "imagine", "remember", "forget", "realize"}},
        {"city",
         {"drivers", "police", "thieves", "guards", "workers", "tourists", "dancers", "artists", "robbers", "clerks"},
         {"busy", "loud", "careful", "rich"},
         {"stop", "catch", "warn", "help"},
         {"claim", "insist", "report", "admit", "deny", "argue"}},
    };
    return themes;
}

EmbeddingProfile EmbeddingProfile::syntactic() { return {1.0, 0.8, 0.3, 1.0}; }
EmbeddingProfile EmbeddingProfile::topical() { return {0.3, 0.1, 1.0, 1.0}; }

namespace {

Vector<double> gaussian(int dim, Rng& rng) {
    Vector<double> v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    return v;
}

// Draws without replacement from a shuffled copy of a word list.
class Pool {
public:
    Pool(std::vector<std::string> words, Rng& rng) : words_(std::move(words)) {
        for (std::size_t i = words_.size(); i > 1; --i) std::swap(words_[i - 1], words_[rng.index(i)]);
    }
    std::string next(const std::string& what) {
        if (words_.empty()) throw std::invalid_argument("theme has too few " + what);
        std::string w = std::move(words_.back());
        words_.pop_back();
        return w;
    }

private:
    std::vector<std::string> words_;
};

} // namespace

EmbeddingTable<double> synthetic_embeddings(const std::vector<std::pair<std::string, std::string>>& token_category,
                                            const std::map<std::string, std::string>& token_theme, int dimension,
                                            const EmbeddingProfile& profile, std::uint64_t seed) {
    Rng rng(seed);
    // Centroids drawn in a fixed order so tables are reproducible.
    std::map<std::string, Vector<double>> category;
    for (const char* c : {"N", "V", "Adj"}) category[c] = gaussian(dimension, rng);
    const Vector<double> frame = gaussian(dimension, rng);
    std::map<std::string, Vector<double>> theme;
    std::set<std::string> theme_names;
    for (const auto& [tok, th] : token_theme) theme_names.insert(th);
    for (const auto& th : theme_names) theme[th] = gaussian(dimension, rng);

    EmbeddingTable<double> table;
    table.matrix.resize(static_cast<Eigen::Index>(token_category.size()), dimension);
    for (std::size_t i = 0; i < token_category.size(); ++i) {
        const auto& [tok, cat] = token_category[i];
        const bool clausal = cat == "Vc";
        const std::string base = clausal ? "V" : cat;
        auto it = category.find(base);
        if (it == category.end()) throw std::invalid_argument("unknown category '" + cat + "' for token " + tok);
        Vector<double> v = profile.category * it->second + profile.noise * gaussian(dimension, rng);
        if (clausal) v += profile.frame * frame;
        auto th = token_theme.find(tok);
        if (th != token_theme.end()) v += profile.theme * theme[th->second];
        table.tokens.push_back(tok);
        table.matrix.row(static_cast<Eigen::Index>(i)) = v.transpose();
    }
    return table;
}

Dataset generate_dataset(const DatasetOptions& options) {
    const auto& themes = default_themes();
    if (options.props != 8) throw std::invalid_argument("the generator builds exactly 8 propositions per analog");
    if (options.analogs < 2 || options.analogs > static_cast<int>(themes.size()))
        throw std::invalid_argument("analogs must be between 2 and " + std::to_string(themes.size()));
    if (options.dimension < 2) throw std::invalid_argument("dimension must be at least 2");

    Dataset ds;
    ds.grammar = syntax::Grammar::defaults();
    Rng rng(derive_seed(options.seed, 1));
    std::map<std::string, std::string> token_theme;

    for (int a = 0; a < options.analogs; ++a) {
        const Theme& th = themes[static_cast<std::size_t>(a)];
        AnalogSpec spec;
        spec.name = th.name;
        auto prop = [&](std::string id, std::vector<RoleBinding> rbs) { spec.propositions.push_back({std::move(id), std::move(rbs)}); };
        // Every token is used once per analog, so each PO belongs to one role binding.
        Pool nouns(th.nouns, rng), adjectives(th.adjectives, rng), verbs(th.verbs, rng), clausal_verbs(th.clausal_verbs, rng);
        auto subject = [&](bool adjective) {
            Slot pred = adjective ? Slot::of_token(adjectives.next("adjectives")) : Slot::empty();
            return RoleBinding{pred, Slot::of_token(nouns.next("nouns"))};
        };
        auto transitive = [&](bool adjective) {
            RoleBinding first = subject(adjective);
            RoleBinding second{Slot::of_token(verbs.next("verbs")), Slot::of_token(nouns.next("nouns"))};
            return std::vector<RoleBinding>{first, second};
        };
        auto clausal = [&](bool adjective, std::size_t inner) {
            RoleBinding first = subject(adjective);
            RoleBinding second{Slot::of_token(clausal_verbs.next("clausal verbs")), Slot::of_prop(inner)};
            return std::vector<RoleBinding>{first, second};
        };
        // N V N, Adj N V N, and clauses embedding them.
        prop("p1", transitive(false));
        prop("p2", transitive(true));
        prop("p3", clausal(false, 0));
        prop("p4", clausal(false, 1));
        prop("p5", clausal(true, 0));
        prop("p6", clausal(true, 1));
        prop("p7", clausal(false, 2));
        prop("p8", clausal(true, 2));
        ds.corpus.push_back(std::move(spec));

        for (const auto& w : th.nouns) { ds.category[w] = "N"; token_theme[w] = th.name; }
        for (const auto& w : th.adjectives) { ds.category[w] = "Adj"; token_theme[w] = th.name; }
        for (const auto& w : th.verbs) { ds.category[w] = "V"; token_theme[w] = th.name; }
        for (const auto& w : th.clausal_verbs) { ds.category[w] = "Vc"; token_theme[w] = th.name; }
    }

    // Only tokens the corpus uses, in first-use order.
    std::vector<std::pair<std::string, std::string>> used;
    std::set<std::string> seen;
    for (const auto& a : ds.corpus)
        for (const auto& p : a.propositions)
            for (const auto& rb : p.rbs)
                for (const Slot* s : {&rb.pred, &rb.obj})
                    if (s->kind == Slot::Kind::Token && seen.insert(s->token).second) used.emplace_back(s->token, ds.category[s->token]);
    ds.embeddings = synthetic_embeddings(used, token_theme, options.dimension, options.profile, derive_seed(options.seed, 2));
    return ds;
}

namespace {

EmbeddingTable<double> random_links(const std::vector<std::string>& tokens, int dimension, std::uint64_t seed) {
    Rng rng(seed);
    EmbeddingTable<double> raw;
    raw.tokens = tokens;
    raw.matrix.resize(static_cast<Eigen::Index>(tokens.size()), dimension);
    for (Eigen::Index r = 0; r < raw.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < dimension; ++c) raw.matrix(r, c) = rng.normal();
    return normalize_for_links(raw);
}

} // namespace

PresentationCorpus sentence_condition(int sentences, int dimension, std::uint64_t seed) {
    if (sentences < 1) throw std::invalid_argument("need at least one sentence");
    PresentationCorpus pc;
    AnalogSpec spec;
    spec.name = "sentences";
    std::vector<std::string> tokens;
    for (int i = 0; i < sentences; ++i) {
        const std::string k = std::to_string(i);
        std::vector<std::string> w = {"adj" + k, "subj" + k, "verb" + k, "obj" + k};
        tokens.insert(tokens.end(), w.begin(), w.end());
        spec.propositions.push_back({"s" + k, {{Slot::of_token(w[0]), Slot::of_token(w[1])}, {Slot::of_token(w[2]), Slot::of_token(w[3])}}});
    }
    pc.corpus.push_back(std::move(spec));
    pc.links = random_links(tokens, dimension, seed);
    return pc;
}

PresentationCorpus scrambled_condition(int words, int dimension, std::uint64_t seed) {
    if (words < 1) throw std::invalid_argument("need at least one word");
    PresentationCorpus pc;
    AnalogSpec spec;
    spec.name = "scrambled";
    std::vector<std::string> tokens;
    for (int i = 0; i < words; ++i) {
        const std::string w = "word" + std::to_string(i);
        tokens.push_back(w);
        spec.propositions.push_back({"w" + std::to_string(i), {{Slot::empty(), Slot::of_token(w)}}});
    }
    pc.corpus.push_back(std::move(spec));
    pc.links = random_links(tokens, dimension, seed);
    return pc;
}

} // namespace dora
