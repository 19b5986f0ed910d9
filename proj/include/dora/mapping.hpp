#pragma once

// Retrieval from LTM and the mapping-hypothesis / connection machinery.

#include "dora/common.hpp"
#include "dora/network.hpp"
#include "dora/rng.hpp"

#include <array>
#include <vector>

namespace dora {

enum class HebbianVariant { Plain, ChildCorrelation };

std::string_view to_string(HebbianVariant v);
HebbianVariant parse_variant(std::string_view s); // "plain" | "child_corr"

// Per layer, indexed by global unit index. Hypotheses are h(driver,
// recipient); connections are kept symmetric.
struct MappingState {
    std::array<Matrix<double>, 3> hypotheses;
    std::array<Matrix<double>, 3> connections;
    // Largest connection weight leaving each unit; refreshed on commit.
    std::array<Vector<double>, 3> max_map;

    static MappingState for_network(const MemoryBanks& banks);

    Matrix<double>& h(Layer l) { return hypotheses[static_cast<std::size_t>(l)]; }
    const Matrix<double>& h(Layer l) const { return hypotheses[static_cast<std::size_t>(l)]; }
    Matrix<double>& w(Layer l) { return connections[static_cast<std::size_t>(l)]; }
    const Matrix<double>& w(Layer l) const { return connections[static_cast<std::size_t>(l)]; }
    const Vector<double>& max_of(Layer l) const { return max_map[static_cast<std::size_t>(l)]; }

    void refresh_max_map();
};

// p_i = R_i / sum R. All zero scores give all zero probabilities.
std::vector<double> luce_probabilities(const std::vector<double>& scores);

struct RetrievalOutcome {
    std::vector<std::size_t> candidates; // LTM analogs
    std::vector<double> scores;
    std::vector<double> probabilities;
    std::vector<double> draws;
    std::vector<std::size_t> retrieved;
};

// R_i: sum over the analog's units of the peak activation each reached.
std::vector<double> analog_scores(const MemoryBanks& banks, const std::vector<std::size_t>& analogs,
                                  const Vector<double>& peak_p, const Vector<double>& peak_rb,
                                  const Vector<double>& peak_po);

// One uniform draw per candidate; candidate i moves to the recipient iff
// p_i > r_i. Throws StateError when the driver is empty or the recipient is
// not.
RetrievalOutcome luce_retrieve(MemoryBanks& banks, const std::vector<double>& scores, Rng& rng);

// One tick of h += a_i a_j over same-layer (driver, recipient) pairs; P pairs
// only when their modes agree.
void update_mapping_hypotheses(MappingState& state, const MemoryBanks& banks);

// Buffers each RB's children over a phase set. The series of an RB is its
// predicate's activations followed by its filler's.
class ChildSeriesBuffer {
public:
    void record(const MemoryBanks& banks);
    // h += corr over (driver RB, recipient RB) pairs, floored at 0.
    void apply(MappingState& state, const MemoryBanks& banks) const;
    void clear();
    std::size_t ticks() const { return ticks_; }

    // Pearson correlation; 0 when either side has no variance.
    static double correlation(const std::vector<double>& a, const std::vector<double>& b);
    std::vector<double> series(std::size_t rb) const;

private:
    std::vector<std::size_t> rbs_;
    std::vector<std::vector<double>> pred_, obj_;
    std::size_t ticks_ = 0;
};

// Normalize by the layer maximum, subtract the strongest rival in the row or
// column, clip at 0, then w += eta (h' - w) on every pair with evidence.
// Hypotheses are reset afterwards.
void commit_mapping_connections(MappingState& state, double eta = 0.9);

} // namespace dora
