#pragma once

// Unit graph: P, RB and PO layers per analog, a shared semantic layer, and
// the three memory banks. Units of one analog occupy contiguous index ranges
// in each layer, so moving an analog between banks never touches the units.

#include "dora/common.hpp"
#include "dora/corpus.hpp"
#include "dora/embeddings.hpp"
#include "dora/rng.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dora {

enum class Layer : std::uint8_t { P, RB, PO };
enum class Bank : std::uint8_t { Driver, Recipient, LTM };
enum class POKind : std::uint8_t { Predicate, Object };
enum class PMode : std::int8_t { Child = -1, Neutral = 0, Parent = 1 };

std::string_view to_string(Layer l);
std::string_view to_string(Bank b);

struct Inhibitor {
    double value = 0.0;
    // After firing the inhibitor holds its unit off (output 1) until released.
    bool latched = false;

    double output() const { return latched ? 1.0 : 0.0; }
    void clear() { value = 0.0; latched = false; }
};

struct PUnit {
    std::size_t analog = 0;
    std::string id;
    std::vector<std::size_t> rbs;   // own role bindings, 1 or 2
    std::vector<std::size_t> above; // RBs holding this P as filler
    PMode mode = PMode::Neutral;
    double act = 0.0;
};

struct RBUnit {
    std::size_t analog = 0;
    std::size_t owner = 0; // P index
    std::size_t pred = 0;  // PO index
    std::optional<std::size_t> obj_po;
    std::optional<std::size_t> obj_p;
    double act = 0.0;
    Inhibitor inhibitor;
};

struct POUnit {
    std::size_t analog = 0;
    POKind kind = POKind::Object;
    std::string token; // empty string for EMPTY
    Vector<double> links;
    std::vector<std::size_t> rbs;   // RBs this PO fills
    std::vector<std::size_t> peers; // other POs sharing one of those RBs
    double act = 0.0;
    bool clamped = false;
    Inhibitor inhibitor;

    bool is_empty() const { return token.empty(); }
};

struct AnalogUnits {
    std::string name;
    Bank bank = Bank::LTM;
    std::size_t p_begin = 0, p_end = 0;
    std::size_t rb_begin = 0, rb_end = 0;
    std::size_t po_begin = 0, po_end = 0;
    std::vector<std::size_t> top; // top-level P indices, listed order
};

struct MemoryBanks {
    std::vector<AnalogUnits> analogs;
    std::vector<PUnit> ps;
    std::vector<RBUnit> rbs;
    std::vector<POUnit> pos;
    Vector<double> semantic;
    double tau_L = 10.0;
    double tau_G = 10.0;
    std::vector<std::size_t> firing_order; // PO indices

    std::size_t semantic_size() const { return static_cast<std::size_t>(semantic.size()); }
    std::vector<std::size_t> in_bank(Bank b) const;
    Bank bank_of_p(std::size_t i) const { return analogs[ps[i].analog].bank; }
    Bank bank_of_rb(std::size_t i) const { return analogs[rbs[i].analog].bank; }
    Bank bank_of_po(std::size_t i) const { return analogs[pos[i].analog].bank; }
};

// Link weights of a token's PO equal the table row; EMPTY slots get zero
// links. Throws InstantiationError on a missing token, a dimension mismatch
// or entries outside (0,1).
MemoryBanks instantiate_network(const std::vector<AnalogSpec>& analogs, const EmbeddingTable<double>& table);

// Zeroes every activation, inhibitor, clamp and P mode.
void reset_activations(MemoryBanks& banks);

// Moves an LTM analog into the driver, resets activations and appends its
// POs to the firing order. Throws StateError unless the analog is in LTM.
void load_driver(MemoryBanks& banks, std::size_t analog);
std::size_t load_random_driver(MemoryBanks& banks, Rng& rng);

// Whole-analog moves. Throws StateError when the analog is not in `from`.
void move_analog(MemoryBanks& banks, std::size_t analog, Bank from, Bank to);
void return_to_ltm(MemoryBanks& banks);

// POs of one analog in surface order over its top-level propositions,
// nested propositions expanded in place, EMPTY slots skipped.
std::vector<std::size_t> firing_order_of(const MemoryBanks& banks, std::size_t analog);

} // namespace dora
