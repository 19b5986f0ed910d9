#pragma once

#include "dora/corpus.hpp"
#include "dora/embeddings.hpp"
#include "dora/rng.hpp"

#include <set>
#include <string>
#include <vector>

namespace fixtures {

// One analog: p1 = [big dogs][bite cats].
inline const char* kTwoRb = R"({"analogs":[{"name":"a","propositions":[
  {"id":"p1","rbs":[{"pred":{"token":"big"},"obj":{"token":"dogs"}},{"pred":{"token":"bite"},"obj":{"token":"cats"}}]}]}]})";

// Three analogs with nesting and an EMPTY predicate.
inline const char* kSmall = R"({"analogs":[
  {"name":"a","propositions":[
    {"id":"p1","rbs":[{"pred":{"token":"dogs"},"obj":null},{"pred":{"token":"bite"},"obj":{"token":"men"}}]},
    {"id":"p2","rbs":[{"pred":{"token":"men"},"obj":null},{"pred":{"token":"say"},"obj":{"prop":"p1"}}]}]},
  {"name":"b","propositions":[
    {"id":"q1","rbs":[{"pred":{"token":"cats"},"obj":null},{"pred":{"token":"chase"},"obj":{"token":"mice"}}]},
    {"id":"q2","rbs":[{"pred":null,"obj":{"token":"birds"}}]}]},
  {"name":"c","propositions":[
    {"id":"r1","rbs":[{"pred":{"token":"cows"},"obj":null},{"pred":{"token":"kick"},"obj":{"token":"pigs"}}]}]}]})";

// Random link-ready rows with entries in (0,1) for every token the corpus uses.
inline dora::EmbeddingTable<double> random_links(const std::vector<dora::AnalogSpec>& corpus, int dim,
                                                 std::uint64_t seed) {
    dora::Rng rng(seed);
    dora::EmbeddingTable<double> t;
    std::set<std::string> seen;
    for (const auto& a : corpus)
        for (const auto& p : a.propositions)
            for (const auto& rb : p.rbs)
                for (const auto* s : {&rb.pred, &rb.obj})
                    if (s->kind == dora::Slot::Kind::Token && seen.insert(s->token).second) t.tokens.push_back(s->token);
    t.matrix.resize(static_cast<Eigen::Index>(t.tokens.size()), dim);
    for (Eigen::Index r = 0; r < t.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) t.matrix(r, c) = 0.05 + 0.9 * rng.uniform();
        t.matrix.row(r).normalize();
    }
    t.stage = dora::EmbeddingStage::LinkReady;
    return t;
}

} // namespace fixtures
