#include "dora/constituency.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace dora::syntax {

namespace {

constexpr std::array<std::string_view, 8> kCategoryNames = {"N", "V", "Adj", "P", "NP", "VP", "IP", "PP"};

// Thesis vocabulary, the words added for question formation and PP
// attachment, and the themed vocabulary the dataset generator draws from.
const std::vector<std::pair<std::string, LexCat>>& default_lexicon() {
    static const std::vector<std::pair<std::string, LexCat>> lex = {
        {"men", LexCat::N}, {"dogs", LexCat::N}, {"bite", LexCat::V}, {"say", LexCat::V}, {"big", LexCat::Adj},
        {"dog", LexCat::N}, {"are", LexCat::V}, {"biting", LexCat::V}, {"said", LexCat::V}, {"with", LexCat::P},
        {"teeth", LexCat::N}, {"cats", LexCat::N}, {"birds", LexCat::N}, {"mice", LexCat::N}, {"rabbits", LexCat::N},
        {"puppies", LexCat::N}, {"kittens", LexCat::N}, {"parrots", LexCat::N}, {"hamsters", LexCat::N},
        {"angry", LexCat::Adj}, {"small", LexCat::Adj}, {"lazy", LexCat::Adj}, {"chase", LexCat::V},
        {"fear", LexCat::V}, {"watch", LexCat::V}, {"hear", LexCat::V}, {"know", LexCat::V}, {"feel", LexCat::V},
        {"notice", LexCat::V}, {"guess", LexCat::V}, {"cows", LexCat::N}, {"farmers", LexCat::N},
        {"horses", LexCat::N}, {"hens", LexCat::N}, {"sheep", LexCat::N}, {"goats", LexCat::N}, {"pigs", LexCat::N},
        {"ducks", LexCat::N}, {"geese", LexCat::N}, {"donkeys", LexCat::N}, {"old", LexCat::Adj},
        {"brown", LexCat::Adj}, {"tired", LexCat::Adj}, {"muddy", LexCat::Adj}, {"feed", LexCat::V},
        {"kick", LexCat::V}, {"ride", LexCat::V}, {"herd", LexCat::V}, {"think", LexCat::V}, {"hope", LexCat::V},
        {"expect", LexCat::V}, {"suspect", LexCat::V}, {"doubt", LexCat::V}, {"assume", LexCat::V},
        {"sharks", LexCat::N}, {"divers", LexCat::N}, {"fish", LexCat::N}, {"seals", LexCat::N},
        {"whales", LexCat::N}, {"crabs", LexCat::N}, {"dolphins", LexCat::N}, {"sailors", LexCat::N},
        {"octopuses", LexCat::N}, {"turtles", LexCat::N}, {"hungry", LexCat::Adj}, {"fast", LexCat::Adj},
        {"dark", LexCat::Adj}, {"huge", LexCat::Adj}, {"eat", LexCat::V}, {"follow", LexCat::V}, {"hunt", LexCat::V},
        {"bump", LexCat::V}, {"believe", LexCat::V}, {"suppose", LexCat::V}, {"imagine", LexCat::V},
        {"remember", LexCat::V}, {"forget", LexCat::V}, {"realize", LexCat::V}, {"drivers", LexCat::N},
        {"police", LexCat::N}, {"thieves", LexCat::N}, {"guards", LexCat::N}, {"workers", LexCat::N},
        {"tourists", LexCat::N}, {"dancers", LexCat::N}, {"artists", LexCat::N}, {"robbers", LexCat::N},
        {"clerks", LexCat::N}, {"busy", LexCat::Adj}, {"loud", LexCat::Adj}, {"careful", LexCat::Adj},
        {"rich", LexCat::Adj}, {"stop", LexCat::V}, {"catch", LexCat::V}, {"warn", LexCat::V}, {"help", LexCat::V},
        {"claim", LexCat::V}, {"insist", LexCat::V}, {"report", LexCat::V}, {"admit", LexCat::V}, {"deny", LexCat::V},
        {"argue", LexCat::V},
    };
    return lex;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

LexCat category_or_throw(const std::string& name, const std::string& path) {
    auto c = parse_lexcat(name);
    if (!c) throw SchemaError(path, "unknown category '" + name + "'");
    return *c;
}

} // namespace

std::string_view to_string(LexCat c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<LexCat> parse_lexcat(std::string_view s) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
        if (kCategoryNames[i] == s) return static_cast<LexCat>(i);
    return std::nullopt;
}

Words tokenize(std::string_view sentence) {
    Words out;
    std::istringstream in{std::string(sentence)};
    std::string w;
    while (in >> w) {
        while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) w.pop_back();
        if (!w.empty()) out.push_back(lower(w));
    }
    return out;
}

std::string join(const Words& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grammar

Grammar::Grammar(std::map<std::string, LexCat> lexicon, std::vector<Rule> rules, std::set<LexCat> roots)
    : lexicon_(std::move(lexicon)), rules_(std::move(rules)), roots_(std::move(roots)) {}

std::vector<Rule> Grammar::default_rules() {
    using C = LexCat;
    return {
        {C::Adj, C::N, C::NP}, {C::V, C::N, C::VP},   {C::V, C::NP, C::VP},  {C::V, C::IP, C::VP},
        {C::V, C::VP, C::VP},  {C::P, C::N, C::PP},   {C::P, C::NP, C::PP},  {C::VP, C::PP, C::VP},
        {C::NP, C::PP, C::NP}, {C::NP, C::VP, C::IP},
    };
}

Grammar Grammar::thesis() {
    return Grammar({{"men", LexCat::N}, {"dogs", LexCat::N}, {"bite", LexCat::V}, {"say", LexCat::V}, {"big", LexCat::Adj}},
                   default_rules());
}

Grammar Grammar::defaults() {
    std::map<std::string, LexCat> lex(default_lexicon().begin(), default_lexicon().end());
    return Grammar(std::move(lex), default_rules());
}

Grammar Grammar::parse(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
    if (!doc.is_object()) throw SchemaError("$", "expected an object");
    std::map<std::string, LexCat> lex;
    if (!doc.contains("lexicon") || !doc["lexicon"].is_object()) throw SchemaError("$.lexicon", "expected an object");
    for (const auto& [word, cat] : doc["lexicon"].items()) {
        std::string path = "$.lexicon." + word;
        if (!cat.is_string()) throw SchemaError(path, "expected a category name");
        lex[lower(word)] = category_or_throw(cat.get<std::string>(), path);
    }
    std::vector<Rule> rules;
    if (doc.contains("rules")) {
        const auto& rs = doc["rules"];
        if (!rs.is_array()) throw SchemaError("$.rules", "expected an array");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            std::string path = "$.rules[" + std::to_string(i) + "]";
            const auto& r = rs[i];
            if (!r.is_array() || r.size() != 3 || !r[0].is_string() || !r[1].is_string() || !r[2].is_string())
                throw SchemaError(path, "expected [left, right, result]");
            rules.push_back({category_or_throw(r[0].get<std::string>(), path), category_or_throw(r[1].get<std::string>(), path),
                             category_or_throw(r[2].get<std::string>(), path)});
        }
    } else {
        rules = default_rules();
    }
    std::set<LexCat> roots{LexCat::IP};
    if (doc.contains("roots")) {
        roots.clear();
        const auto& rs = doc["roots"];
        if (!rs.is_array()) throw SchemaError("$.roots", "expected an array");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            std::string path = "$.roots[" + std::to_string(i) + "]";
            if (!rs[i].is_string()) throw SchemaError(path, "expected a category name");
            roots.insert(category_or_throw(rs[i].get<std::string>(), path));
        }
    }
    return Grammar(std::move(lex), std::move(rules), std::move(roots));
}

Grammar Grammar::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grammar file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string Grammar::to_json() const {
    nlohmann::ordered_json doc;
    doc["lexicon"] = nlohmann::ordered_json::object();
    for (const auto& [w, c] : lexicon_) doc["lexicon"][w] = std::string(syntax::to_string(c));
    doc["rules"] = nlohmann::ordered_json::array();
    for (const auto& r : rules_)
        doc["rules"].push_back({std::string(syntax::to_string(r.left)), std::string(syntax::to_string(r.right)),
                                std::string(syntax::to_string(r.result))});
    doc["roots"] = nlohmann::ordered_json::array();
    for (auto c : roots_) doc["roots"].push_back(std::string(syntax::to_string(c)));
    return doc.dump(2);
}

LexCat Grammar::project(std::string_view word) const {
    auto it = lexicon_.find(lower(word));
    if (it == lexicon_.end()) throw LexiconError("word not in lexicon: '" + std::string(word) + "'");
    return it->second;
}

bool Grammar::knows(std::string_view word) const { return lexicon_.count(lower(word)) != 0; }

void Grammar::add_word(std::string word, LexCat cat) { lexicon_[lower(word)] = cat; }

std::optional<Licence> Grammar::license(LexCat left, LexCat right) const {
    auto direct = [&](LexCat l, LexCat r) -> std::optional<LexCat> {
        for (const auto& rule : rules_)
            if (rule.left == l && rule.right == r) return rule.result;
        return std::nullopt;
    };
    if (auto c = direct(left, right)) return Licence{*c, false, false};
    const bool lc = left == LexCat::N;
    const bool rc = right == LexCat::N;
    if (lc)
        if (auto c = direct(LexCat::NP, right)) return Licence{*c, true, false};
    if (rc)
        if (auto c = direct(left, LexCat::NP)) return Licence{*c, false, true};
    if (lc && rc)
        if (auto c = direct(LexCat::NP, LexCat::NP)) return Licence{*c, true, true};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Merge

Constituent lexical_constituent(const Grammar& g, std::string_view word, int position) {
    Constituent c;
    c.category = g.project(word);
    c.span = {position, position};
    c.level = 1;
    c.word = lower(word);
    return c;
}

std::optional<Constituent> merge(const ConstituentPtr& a, const ConstituentPtr& b, const Grammar& g) {
    if (!a || !b) throw std::invalid_argument("merge: null constituent");
    if (a->span.end + 1 != b->span.start)
        throw std::invalid_argument("merge: spans are not adjacent");
    auto lic = g.license(a->category, b->category);
    if (!lic) return std::nullopt;
    Constituent c;
    c.category = lic->result;
    c.span = {a->span.start, b->span.end};
    c.level = std::max(a->level, b->level) + 1;
    c.left = a;
    c.right = b;
    c.left_coerced = lic->left_coerced;
    c.right_coerced = lic->right_coerced;
    return c;
}

// ---------------------------------------------------------------------------
// Chart

const std::map<IncrementalParser::Key, IncrementalParser::Entry>& IncrementalParser::cell(int start, int end) const {
    return cells_.at(static_cast<std::size_t>(end - 1)).at(static_cast<std::size_t>(start - 1));
}

std::map<IncrementalParser::Key, IncrementalParser::Entry>& IncrementalParser::cell_mut(int start, int end) {
    return cells_.at(static_cast<std::size_t>(end - 1)).at(static_cast<std::size_t>(start - 1));
}

void IncrementalParser::push(std::string_view word) {
    const int e = static_cast<int>(words_.size()) + 1;
    auto leaf = std::make_shared<const Constituent>(lexical_constituent(*grammar_, word, e));
    words_.push_back(leaf->word);
    cells_.emplace_back(static_cast<std::size_t>(e));
    auto& diag = cell_mut(e, e);
    diag[Key{leaf->category, 1}] = Entry{leaf, 1, {}};

    for (int s = e - 1; s >= 1; --s) {
        auto& target = cell_mut(s, e);
        for (int k = s; k < e; ++k) {
            const auto& lefts = cell(s, k);
            const auto& rights = cell(k + 1, e);
            for (const auto& [lk, le] : lefts) {
                for (const auto& [rk, re] : rights) {
                    auto lic = grammar_->license(lk.category, rk.category);
                    if (!lic) continue;
                    Key key{lic->result, std::max(lk.level, rk.level) + 1};
                    auto& entry = target[key];
                    if (!entry.repr) {
                        Constituent c;
                        c.category = key.category;
                        c.span = {s, e};
                        c.level = key.level;
                        c.left = le.repr;
                        c.right = re.repr;
                        c.left_coerced = lic->left_coerced;
                        c.right_coerced = lic->right_coerced;
                        entry.repr = std::make_shared<const Constituent>(std::move(c));
                    }
                    entry.derivations += le.derivations * re.derivations;
                    entry.back.push_back({k, lk, rk, lic->left_coerced, lic->right_coerced});
                }
            }
        }
    }
}

std::vector<LevelImage> IncrementalParser::images() const {
    const int n = static_cast<int>(words_.size());
    std::map<int, LevelImage> by_level;
    for (int e = 1; e <= n; ++e) {
        for (int s = 1; s <= e; ++s) {
            for (const auto& [key, entry] : cell(s, e)) {
                if (key.level < 2) continue;
                auto& img = by_level[key.level];
                img.level = key.level;
                img.items.push_back({*entry.repr, entry.derivations});
            }
        }
    }
    std::vector<LevelImage> out;
    for (auto& [lvl, img] : by_level) {
        std::sort(img.items.begin(), img.items.end(), [](const ImageItem& a, const ImageItem& b) {
            return std::tie(a.constituent.span, a.constituent.category) < std::tie(b.constituent.span, b.constituent.category);
        });
        out.push_back(std::move(img));
    }
    if (!out.empty()) {
        auto& top = out.back();
        for (const auto& item : top.items) {
            const auto& c = item.constituent;
            if (c.span.start == 1 && c.span.end == n && grammar_->is_root(c.category)) top.theta = true;
        }
    }
    return out;
}

std::vector<ConstituentPtr> IncrementalParser::expand(int start, int end, const Key& key, std::size_t limit) const {
    const auto& entries = cell(start, end);
    auto it = entries.find(key);
    if (it == entries.end()) return {};
    const auto& entry = it->second;
    if (entry.back.empty()) return {entry.repr};
    std::vector<ConstituentPtr> out;
    for (const auto& bp : entry.back) {
        auto lefts = expand(start, bp.split, bp.left, limit);
        auto rights = expand(bp.split + 1, end, bp.right, limit);
        for (const auto& l : lefts) {
            for (const auto& r : rights) {
                if (out.size() >= limit) return out;
                Constituent c;
                c.category = key.category;
                c.span = {start, end};
                c.level = key.level;
                c.left = l;
                c.right = r;
                c.left_coerced = bp.left_coerced;
                c.right_coerced = bp.right_coerced;
                out.push_back(std::make_shared<const Constituent>(std::move(c)));
            }
        }
    }
    return out;
}

std::vector<ConstituentPtr> IncrementalParser::root_derivations(int level, std::size_t limit) const {
    const int n = static_cast<int>(words_.size());
    if (n == 0) return {};
    std::vector<ConstituentPtr> out;
    for (const auto& [key, entry] : cell(1, n)) {
        if (key.level != level || !grammar_->is_root(key.category)) continue;
        auto trees = expand(1, n, key, limit - out.size());
        out.insert(out.end(), trees.begin(), trees.end());
        if (out.size() >= limit) break;
    }
    return out;
}

std::vector<LevelImage> chart_parse(const Words& words, const Grammar& g) {
    IncrementalParser parser(g);
    for (const auto& w : words) parser.push(w);
    return parser.images();
}

// ---------------------------------------------------------------------------
// Time patterns and the pushout

TimePattern time_pattern(const LevelImage& image) {
    TimePattern p;
    p.level = image.level;
    p.theta = image.theta;
    for (const auto& item : image.items) p.entries.emplace(item.constituent.span.end, item.constituent.category);
    return p;
}

std::string to_string(const TimePattern& p) {
    std::string out = "(";
    bool first = true;
    auto put = [&](std::string_view s) {
        if (!first) out += ',';
        out += s;
        first = false;
    };
    for (const auto& [pos, cat] : p.entries) put(std::to_string(pos));
    for (const auto& [pos, cat] : p.entries) put(to_string(cat));
    put(p.theta ? "1" : "0");
    out += ')';
    return out;
}

std::vector<TimePattern> structure_signature(const Words& words, const Grammar& g) {
    std::vector<TimePattern> out;
    for (const auto& img : chart_parse(words, g)) out.push_back(time_pattern(img));
    return out;
}

std::vector<PushoutClass> build_pushout(const std::vector<Words>& corpus, const Grammar& g) {
    std::vector<std::vector<TimePattern>> sigs;
    int deepest = 1;
    for (const auto& words : corpus) {
        sigs.push_back(structure_signature(words, g));
        if (!sigs.back().empty()) deepest = std::max(deepest, sigs.back().back().level);
    }
    std::map<TimePattern, std::size_t> index;
    std::vector<PushoutClass> classes;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        for (int level = 2; level <= deepest; ++level) {
            TimePattern p;
            p.level = level;
            auto it = std::find_if(sigs[s].begin(), sigs[s].end(), [&](const TimePattern& t) { return t.level == level; });
            if (it != sigs[s].end()) p = *it;
            auto [pos, inserted] = index.try_emplace(p, classes.size());
            if (inserted) classes.push_back({p, {}});
            classes[pos->second].members.push_back({s, level});
        }
    }
    return classes;
}

// ---------------------------------------------------------------------------
// Trees

namespace {

void bracket_into(const Constituent& c, std::string& out) {
    if (c.is_word()) {
        out += '(';
        out += to_string(c.category);
        out += ' ';
        out += c.word;
        out += ')';
        return;
    }
    out += '(';
    out += to_string(c.category);
    auto child = [&](const Constituent& ch, bool coerced) {
        out += ' ';
        if (coerced) out += "(NP ";
        bracket_into(ch, out);
        if (coerced) out += ')';
    };
    child(*c.left, c.left_coerced);
    child(*c.right, c.right_coerced);
    out += ')';
}

void leaves_into(const Constituent& c, Words& out) {
    if (c.is_word()) {
        out.push_back(c.word);
        return;
    }
    leaves_into(*c.left, out);
    leaves_into(*c.right, out);
}

bool is_nominal(const Constituent& c) { return c.category == LexCat::N || c.category == LexCat::NP; }

} // namespace

std::string bracketed(const Constituent& c) {
    std::string out;
    bracket_into(c, out);
    return out;
}

std::string SyntaxTree::bracketed() const { return root ? syntax::bracketed(*root) : std::string("NONE"); }

Words SyntaxTree::leaves() const {
    Words out;
    if (root) leaves_into(*root, out);
    return out;
}

TreeResult to_syntax_tree(const Words& words, const Grammar& g) {
    IncrementalParser parser(g);
    for (const auto& w : words) parser.push(w);
    auto imgs = parser.images();
    TreeResult result;
    if (imgs.empty() || !imgs.back().theta) return result;
    for (auto& root : parser.root_derivations(imgs.back().level)) result.trees.push_back({std::move(root)});
    return result;
}

Words structure_transform(const SyntaxTree& tree, QueryKind kind) {
    if (!tree.root) throw TransformError("empty tree");
    const Constituent& root = *tree.root;
    if (root.is_word() || root.category != LexCat::IP || !is_nominal(*root.left) || root.right->category != LexCat::VP)
        throw TransformError("tree is not a clause of the form [IP subject VP]");
    const Constituent& subject = *root.left;
    const Constituent& vp = *root.right;
    // T head: auxiliary V whose sister is the main VP.
    if (vp.is_word() || vp.left->category != LexCat::V || vp.right->category != LexCat::VP)
        throw TransformError("matrix clause has no T head to move");
    const Constituent& aux = *vp.left;
    const Constituent& main_vp = *vp.right;

    Words subj_words, aux_words, main_words;
    leaves_into(subject, subj_words);
    leaves_into(aux, aux_words);

    switch (kind) {
    case QueryKind::YesNo: {
        leaves_into(main_vp, main_words);
        Words out = aux_words;
        out.insert(out.end(), subj_words.begin(), subj_words.end());
        out.insert(out.end(), main_words.begin(), main_words.end());
        return out;
    }
    case QueryKind::WhObject: {
        // Follow the VP spine down to the verb whose complement is nominal.
        const Constituent* cur = &main_vp;
        while (!cur->is_word() && cur->right->category == LexCat::VP) cur = cur->right.get();
        if (cur->is_word() || !is_nominal(*cur->right))
            throw TransformError("main verb has no nominal object to query");
        Words rest;
        // Everything in the main VP except the queried object, in order.
        std::vector<const Constituent*> spine;
        for (const Constituent* v = &main_vp; v != cur; v = v->right.get()) spine.push_back(v->left.get());
        for (const auto* head : spine) leaves_into(*head, rest);
        leaves_into(*cur->left, rest);
        Words out{"who"};
        out.insert(out.end(), aux_words.begin(), aux_words.end());
        out.insert(out.end(), subj_words.begin(), subj_words.end());
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    case QueryKind::WhSubject: {
        leaves_into(main_vp, main_words);
        Words out{"who"};
        out.insert(out.end(), aux_words.begin(), aux_words.end());
        out.insert(out.end(), main_words.begin(), main_words.end());
        return out;
    }
    }
    throw TransformError("unknown query kind");
}

// ---------------------------------------------------------------------------
// Counting and witnesses

std::uint64_t catalan_count(std::uint64_t leaves) {
    if (leaves == 0) throw std::invalid_argument("catalan_count: need at least one leaf");
    // C(k+1) = C(k) * 2(2k+1) / (k+2), exact at every step.
    unsigned __int128 c = 1;
    for (std::uint64_t k = 0; k + 1 < leaves; ++k) {
        c = c * 2 * (2 * k + 1) / (k + 2);
        if (c > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("catalan_count: result exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

std::optional<Witness> noniso_witness(const Grammar& g, const WitnessQuery& query) {
    std::optional<Witness> found;
    // For SameImage: (level, pattern, sorted words) -> first sequence.
    // For Branching: (level-1 pattern) -> first sequence and its level pattern.
    std::map<std::tuple<int, TimePattern, Words>, Words> seen_same;
    std::map<std::pair<TimePattern, std::size_t>, std::pair<Words, std::vector<TimePattern>>> seen_branch;

    try {
        for_each_sequence(g, query.min_length, query.max_length, [&](const Words& seq) {
            if (found) throw 0;
            auto sig = structure_signature(seq, g);
            if (sig.empty()) return;
            if (query.require_grammatical && !sig.back().theta) return;
            if (query.kind == WitnessKind::SameImage) {
                Words bag;
                if (query.require_permutation) {
                    bag = seq;
                    std::sort(bag.begin(), bag.end());
                }
                for (const auto& p : sig) {
                    auto key = std::make_tuple(p.level, p, bag);
                    auto [it, inserted] = seen_same.try_emplace(key, seq);
                    if (!inserted && it->second != seq) {
                        found = Witness{it->second, seq, p.level, p, p, WitnessKind::SameImage};
                        throw 0;
                    }
                }
            } else {
                for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
                    auto key = std::make_pair(sig[i], seq.size());
                    auto [it, inserted] = seen_branch.try_emplace(key, seq, sig);
                    if (inserted) continue;
                    const auto& other_sig = it->second.second;
                    auto other = std::find_if(other_sig.begin(), other_sig.end(),
                                              [&](const TimePattern& t) { return t.level == sig[i + 1].level; });
                    if (other != other_sig.end() && *other != sig[i + 1]) {
                        found = Witness{it->second.first, seq, sig[i + 1].level, *other, sig[i + 1], WitnessKind::Branching};
                        throw 0;
                    }
                }
            }
        });
    } catch (int) {
    }
    return found;
}

} // namespace dora::syntax
