#pragma once

// Symbolic proposition corpus: analogs of propositions whose role bindings
// pair a predicate slot with a filler that is a token or a nested
// proposition.

#include "dora/common.hpp"
#include "dora/constituency.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dora {

struct Slot {
    enum class Kind { Empty, Token, Prop };
    Kind kind = Kind::Empty;
    std::string token; // Token
    std::size_t prop = 0; // Prop: index into the analog's propositions

    static Slot empty() { return {}; }
    static Slot of_token(std::string t) { return {Kind::Token, std::move(t), 0}; }
    static Slot of_prop(std::size_t p) { return {Kind::Prop, {}, p}; }
};

struct RoleBinding {
    Slot pred; // never Prop
    Slot obj;
};

struct PropositionSpec {
    std::string id;
    std::vector<RoleBinding> rbs; // 1 or 2
};

struct AnalogSpec {
    std::string name;
    std::vector<PropositionSpec> propositions;

    // Propositions no other proposition embeds, in listed order.
    std::vector<std::size_t> top_level() const;
};

// Throws SchemaError (with a JSON path) or ResolutionError.
std::vector<AnalogSpec> parse_proposition_file(std::string_view text);
std::vector<AnalogSpec> load_proposition_file(const std::string& path);
std::string to_json(const std::vector<AnalogSpec>& analogs);

// Surface word order: per role binding the predicate token, then the filler
// with nested propositions expanded in place. EMPTY slots contribute nothing.
syntax::Words surface_words(const AnalogSpec& analog, std::size_t prop);

// One entry per proposition over the whole corpus, analogs in order.
std::vector<syntax::Words> corpus_sentences(const std::vector<AnalogSpec>& analogs);

} // namespace dora
