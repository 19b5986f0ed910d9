#pragma once

// Discrete-time unit dynamics and phase-set execution.
//
// One tick, in order: P modes, net inputs from the previous tick's
// activations, inhibitors (also from the previous tick), integration,
// hypothesis update, trace sample. Units reset by their inhibitor in a tick
// skip that tick's integration.

#include "dora/common.hpp"
#include "dora/mapping.hpp"
#include "dora/network.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dora {

struct DynamicsParams {
    double gamma = 0.3;
    double delta = 0.1;
    double ceiling = 1.1;
    double gain_pred = 2.0;
    double gain_obj = 1.0;
    double inhibitor_return = 10.0;
    double active_threshold = 0.5;
    int phase_set_repeats = 3;
    int max_ticks_per_po = 110;
    double inhibitor_threshold = 1.0;
    // Weight from a unit (and, for a PO, its RBs) into its yoked inhibitor.
    // Sets the clamp window: a PO with its RB near 0.9 fires after about
    // 1 / (1.9 * yoke_weight) ticks.
    double yoke_weight = 0.045;
    // > 0 switches to fixed-rate presentation: every PO gets exactly this
    // many ticks, clamped until its inhibitor fires.
    int ticks_per_word = 0;

    void validate() const;
};

struct NetInputs {
    Vector<double> p, rb, po, semantic;
};

// Mode = Parent if input from own RBs exceeds input from RBs above,
// Child if the reverse, Neutral on a tie.
void update_p_modes(MemoryBanks& banks);

// Driver and recipient units always; LTM units too when include_ltm. Lateral
// terms range over the unit's own bank, and over its own analog in LTM.
// EMPTY POs and units outside the updated banks get 0.
NetInputs compute_net_inputs(const MemoryBanks& banks, const MappingState* mapping, const DynamicsParams& params,
                             bool include_ltm = false);

struct InhibitorEvent {
    std::size_t tick = 0;
    Layer layer = Layer::PO;
    std::size_t unit = 0;
};

struct InhibitorStep {
    std::vector<std::size_t> rb_fired;
    std::vector<std::size_t> po_fired;
};

// Driver RB and PO inhibitors only. A firing RB releases every driver PO
// latch. Also sets tau_L and tau_G from the current activations.
InhibitorStep step_inhibitors(MemoryBanks& banks, const DynamicsParams& params);

// Leaky integration of every updated unit except clamped POs and the units
// in `fired`; semantic units are set to their clipped input.
void integrate_activations(const NetInputs& net, MemoryBanks& banks, const DynamicsParams& params,
                           const InhibitorStep* fired = nullptr, bool include_ltm = false);

struct TraceColumn {
    Layer layer;
    std::size_t unit;
    Bank bank;
};

struct ClampWindow {
    std::size_t po;
    std::size_t start; // first clamped tick
    std::size_t end;   // one past the last clamped tick
};

struct ActivationTrace {
    std::vector<TraceColumn> columns;
    std::vector<std::vector<double>> rows; // one per tick, aligned with columns
    std::vector<InhibitorEvent> events;
    std::vector<ClampWindow> windows;

    std::size_t ticks() const { return rows.size(); }
    // Summed activation of one layer per tick, optionally restricted to a bank.
    std::vector<double> layer_sum(Layer l, std::optional<Bank> bank = std::nullopt) const;
    std::size_t count_events(Layer l) const;
    void append(const ActivationTrace& other);
    // tick,unit_id,layer,bank,activation
    void write_csv(std::ostream& out) const;
};

struct PhaseSetOptions {
    bool record = false;
    bool include_ltm = false;
    bool learn = false;
    ChildSeriesBuffer* child_series = nullptr;
};

struct PhaseSetResult {
    ActivationTrace trace; // columns/rows only when record is set
    std::vector<InhibitorEvent> events;
    Vector<double> peak_p, peak_rb, peak_po;
    std::size_t ticks = 0;
};

// Runs one tick of the whole pipeline and returns what fired.
InhibitorStep tick(MemoryBanks& banks, MappingState* mapping, const DynamicsParams& params, bool include_ltm,
                   bool learn);

// phase_set_repeats passes over the firing order. Each PO is clamped until
// its inhibitor fires (bounded by max_ticks_per_po), then the network runs
// until no driver PO is active; when the next PO starts a new role binding,
// or the pass ends, it runs on until no driver RB is active. Inhibitors and
// latches are cleared at the start of every pass.
PhaseSetResult run_phase_set(MemoryBanks& banks, MappingState* mapping, const DynamicsParams& params,
                             const PhaseSetOptions& options = {});

// Per tick: the token of the driver PO above threshold, else "refresh" if a
// driver RB is above threshold, else "REFRESH"; consecutive repeats merged.
std::vector<std::string> firing_pattern(const ActivationTrace& trace, const MemoryBanks& banks, double threshold = 0.5);

} // namespace dora
