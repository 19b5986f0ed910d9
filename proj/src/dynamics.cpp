#include "dora/dynamics.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace dora {

namespace {

// Lateral scope: 0 driver, 1 recipient, 2 + analog for LTM.
std::size_t scope_of(const MemoryBanks& banks, std::size_t analog) {
    switch (banks.analogs[analog].bank) {
    case Bank::Driver: return 0;
    case Bank::Recipient: return 1;
    case Bank::LTM: return 2 + analog;
    }
    return 0;
}

bool updated(const MemoryBanks& banks, std::size_t analog, bool include_ltm) {
    return include_ltm || banks.analogs[analog].bank != Bank::LTM;
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Sum over driver units j of (3 a_j w_ij - max(i) - max(j)), for w_ij > 0.
template <typename Units>
double mapping_input(const MemoryBanks& banks, const MappingState* mapping, Layer layer, const Units& units,
                     std::size_t i) {
    if (!mapping) return 0.0;
    const auto& w = mapping->w(layer);
    const auto& mx = mapping->max_of(layer);
    const auto ii = static_cast<Eigen::Index>(i);
    if (mx(ii) <= 0.0) return 0.0;
    double m = 0.0;
    for (const auto& a : banks.analogs) {
        if (a.bank != Bank::Driver) continue;
        std::size_t b = 0, e = 0;
        switch (layer) {
        case Layer::P: b = a.p_begin; e = a.p_end; break;
        case Layer::RB: b = a.rb_begin; e = a.rb_end; break;
        case Layer::PO: b = a.po_begin; e = a.po_end; break;
        }
        for (std::size_t j = b; j < e; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double wij = w(ii, jj);
            if (wij > 0.0) m += 3.0 * units[j].act * wij - mx(ii) - mx(jj);
        }
    }
    return m;
}

} // namespace

void DynamicsParams::validate() const {
    if (!(gamma > 0) || !(delta > 0)) throw std::invalid_argument("gamma and delta must be positive");
    if (phase_set_repeats < 1) throw std::invalid_argument("phase_set_repeats must be at least 1");
    if (max_ticks_per_po < 1) throw std::invalid_argument("max_ticks_per_po must be at least 1");
    if (!(yoke_weight > 0) || !(inhibitor_threshold > 0)) throw std::invalid_argument("inhibitor parameters must be positive");
    if (ticks_per_word < 0) throw std::invalid_argument("ticks_per_word must be nonnegative");
}

void update_p_modes(MemoryBanks& banks) {
    for (auto& p : banks.ps) {
        double below = 0.0, above = 0.0;
        for (std::size_t r : p.rbs) below += banks.rbs[r].act;
        for (std::size_t r : p.above) above += banks.rbs[r].act;
        p.mode = above < below ? PMode::Parent : above > below ? PMode::Child : PMode::Neutral;
    }
}

NetInputs compute_net_inputs(const MemoryBanks& banks, const MappingState* mapping, const DynamicsParams& params,
                             bool include_ltm) {
    const std::size_t scopes = 2 + banks.analogs.size();
    std::vector<double> sum_po(scopes, 0.0), sum_rb(scopes, 0.0), sum_parent(scopes, 0.0), sum_child(scopes, 0.0);
    for (const auto& u : banks.pos) sum_po[scope_of(banks, u.analog)] += u.act;
    for (const auto& u : banks.rbs) sum_rb[scope_of(banks, u.analog)] += u.act;
    for (const auto& u : banks.ps) {
        if (u.mode == PMode::Parent) sum_parent[scope_of(banks, u.analog)] += u.act;
        if (u.mode == PMode::Child) sum_child[scope_of(banks, u.analog)] += u.act;
    }

    NetInputs net;
    net.p = Vector<double>::Zero(static_cast<Eigen::Index>(banks.ps.size()));
    net.rb = Vector<double>::Zero(static_cast<Eigen::Index>(banks.rbs.size()));
    net.po = Vector<double>::Zero(static_cast<Eigen::Index>(banks.pos.size()));
    net.semantic = Vector<double>::Zero(banks.semantic.size());

    const double tau_g = banks.tau_G;
    const double tau_l = banks.tau_L;
    const double ret = params.inhibitor_return;

    for (std::size_t i = 0; i < banks.ps.size(); ++i) {
        const auto& p = banks.ps[i];
        if (!updated(banks, p.analog, include_ltm)) continue;
        const std::size_t s = scope_of(banks, p.analog);
        double n = 0.0;
        if (p.mode == PMode::Child) {
            double above = 0.0, share = 0.0;
            for (std::size_t r : p.above) {
                above += banks.rbs[r].act;
                share += banks.pos[banks.rbs[r].pred].act;
            }
            n = above - (sum_child[s] - p.act) - (sum_po[s] - share) - 3.0 * share;
        } else {
            double below = 0.0;
            for (std::size_t r : p.rbs) below += banks.rbs[r].act;
            const double others = sum_parent[s] - (p.mode == PMode::Parent ? p.act : 0.0);
            n = below - 3.0 * others;
        }
        if (banks.analogs[p.analog].bank != Bank::Driver) n += mapping_input(banks, mapping, Layer::P, banks.ps, i) - tau_g;
        net.p(static_cast<Eigen::Index>(i)) = n;
    }

    for (std::size_t i = 0; i < banks.rbs.size(); ++i) {
        const auto& rb = banks.rbs[i];
        if (!updated(banks, rb.analog, include_ltm)) continue;
        const std::size_t s = scope_of(banks, rb.analog);
        const auto& owner = banks.ps[rb.owner];
        double n = owner.mode == PMode::Parent ? owner.act : 0.0;
        n += banks.pos[rb.pred].act;
        if (rb.obj_po) n += banks.pos[*rb.obj_po].act;
        n -= 3.0 * (sum_rb[s] - rb.act);
        if (banks.analogs[rb.analog].bank == Bank::Driver) {
            n -= ret * rb.inhibitor.output();
        } else {
            if (rb.obj_p && banks.ps[*rb.obj_p].mode == PMode::Child) n += banks.ps[*rb.obj_p].act;
            n += mapping_input(banks, mapping, Layer::RB, banks.rbs, i) - tau_g;
        }
        net.rb(static_cast<Eigen::Index>(i)) = n;
    }

    for (std::size_t i = 0; i < banks.pos.size(); ++i) {
        const auto& po = banks.pos[i];
        const Bank bank = banks.analogs[po.analog].bank;
        if (bank == Bank::Driver || bank == Bank::Recipient) net.semantic += po.act * po.links;
        if (!updated(banks, po.analog, include_ltm) || po.is_empty()) continue;
        const std::size_t s = scope_of(banks, po.analog);
        double own_rb = 0.0, child_share = 0.0, share = 0.0;
        for (std::size_t r : po.rbs) {
            own_rb += banks.rbs[r].act;
            const auto& rb = banks.rbs[r];
            if (rb.obj_p && banks.ps[*rb.obj_p].mode == PMode::Child) child_share += banks.ps[*rb.obj_p].act;
        }
        for (std::size_t k : po.peers) share += banks.pos[k].act;
        const double not_share = sum_po[s] - po.act - share;
        const double child_not_share = sum_child[s] - child_share;
        const double unconnected = sum_rb[s] - own_rb;
        double n = 0.0;
        if (bank == Bank::Driver) {
            const double gain = po.kind == POKind::Predicate ? params.gain_pred : params.gain_obj;
            n = gain * own_rb + child_not_share - not_share - 3.0 * share - unconnected - ret * po.inhibitor.output();
        } else {
            const double sem = po.links.dot(banks.semantic);
            n = own_rb + sem + mapping_input(banks, mapping, Layer::PO, banks.pos, i) - not_share + child_not_share -
                3.0 * share - unconnected - tau_g - tau_l;
        }
        net.po(static_cast<Eigen::Index>(i)) = n;
    }
    return net;
}

InhibitorStep step_inhibitors(MemoryBanks& banks, const DynamicsParams& params) {
    InhibitorStep step;
    bool po_active = false, rb_active = false;
    for (const auto& po : banks.pos)
        if (banks.analogs[po.analog].bank == Bank::Driver && po.act > params.active_threshold) po_active = true;
    for (const auto& rb : banks.rbs)
        if (banks.analogs[rb.analog].bank == Bank::Driver && rb.act > params.active_threshold) rb_active = true;
    banks.tau_L = po_active ? 0.0 : params.inhibitor_return;
    banks.tau_G = rb_active ? 0.0 : params.inhibitor_return;

    // Charge from the activations as they stand, then apply resets, so the
    // order of units does not matter.
    for (std::size_t i = 0; i < banks.rbs.size(); ++i) {
        auto& rb = banks.rbs[i];
        if (banks.analogs[rb.analog].bank != Bank::Driver || rb.inhibitor.latched) continue;
        rb.inhibitor.value += params.yoke_weight * rb.act;
        if (rb.inhibitor.value >= params.inhibitor_threshold) step.rb_fired.push_back(i);
    }
    for (std::size_t i = 0; i < banks.pos.size(); ++i) {
        auto& po = banks.pos[i];
        if (banks.analogs[po.analog].bank != Bank::Driver || po.is_empty() || po.inhibitor.latched) continue;
        double input = po.act;
        for (std::size_t r : po.rbs) input += banks.rbs[r].act;
        po.inhibitor.value += params.yoke_weight * input;
        if (po.inhibitor.value >= params.inhibitor_threshold) step.po_fired.push_back(i);
    }
    if (!step.rb_fired.empty())
        for (auto& po : banks.pos)
            if (banks.analogs[po.analog].bank == Bank::Driver) po.inhibitor.latched = false;
    for (std::size_t i : step.rb_fired) {
        auto& rb = banks.rbs[i];
        rb.act = 0.0;
        rb.inhibitor.value = 0.0;
        rb.inhibitor.latched = true;
    }
    for (std::size_t i : step.po_fired) {
        auto& po = banks.pos[i];
        po.act = 0.0;
        po.clamped = false;
        po.inhibitor.value = 0.0;
        po.inhibitor.latched = true;
    }
    return step;
}

void integrate_activations(const NetInputs& net, MemoryBanks& banks, const DynamicsParams& params,
                           const InhibitorStep* fired, bool include_ltm) {
    auto leaky = [&](double a, double n) {
        return clip01(a + params.gamma * n * (params.ceiling - a) - params.delta * a);
    };
    for (std::size_t i = 0; i < banks.ps.size(); ++i) {
        auto& p = banks.ps[i];
        if (updated(banks, p.analog, include_ltm)) p.act = leaky(p.act, net.p(static_cast<Eigen::Index>(i)));
    }
    std::vector<char> skip_rb(banks.rbs.size(), 0), skip_po(banks.pos.size(), 0);
    if (fired) {
        for (std::size_t i : fired->rb_fired) skip_rb[i] = 1;
        for (std::size_t i : fired->po_fired) skip_po[i] = 1;
    }
    for (std::size_t i = 0; i < banks.rbs.size(); ++i) {
        auto& rb = banks.rbs[i];
        if (skip_rb[i] || !updated(banks, rb.analog, include_ltm)) continue;
        rb.act = leaky(rb.act, net.rb(static_cast<Eigen::Index>(i)));
    }
    for (std::size_t i = 0; i < banks.pos.size(); ++i) {
        auto& po = banks.pos[i];
        if (po.clamped) {
            po.act = 1.0;
            continue;
        }
        if (skip_po[i] || po.is_empty() || !updated(banks, po.analog, include_ltm)) continue;
        po.act = leaky(po.act, net.po(static_cast<Eigen::Index>(i)));
    }
    banks.semantic = net.semantic.unaryExpr([](double v) { return clip01(v); });
}

InhibitorStep tick(MemoryBanks& banks, MappingState* mapping, const DynamicsParams& params, bool include_ltm,
                   bool learn) {
    update_p_modes(banks);
    const NetInputs net = compute_net_inputs(banks, mapping, params, include_ltm);
    InhibitorStep fired = step_inhibitors(banks, params);
    integrate_activations(net, banks, params, &fired, include_ltm);
    if (learn && mapping) update_mapping_hypotheses(*mapping, banks);
    return fired;
}

std::vector<double> ActivationTrace::layer_sum(Layer l, std::optional<Bank> bank) const {
    std::vector<double> out(rows.size(), 0.0);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].layer != l || (bank && columns[c].bank != *bank)) continue;
        for (std::size_t t = 0; t < rows.size(); ++t) out[t] += rows[t][c];
    }
    return out;
}

std::size_t ActivationTrace::count_events(Layer l) const {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const InhibitorEvent& e) { return e.layer == l; }));
}

void ActivationTrace::append(const ActivationTrace& other) {
    if (columns.empty()) columns = other.columns;
    const std::size_t offset = rows.size();
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    for (auto e : other.events) {
        e.tick += offset;
        events.push_back(e);
    }
    for (auto w : other.windows) {
        w.start += offset;
        w.end += offset;
        windows.push_back(w);
    }
}

void ActivationTrace::write_csv(std::ostream& out) const {
    out << "tick,unit_id,layer,bank,activation\n" << std::setprecision(17);
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << t << ',' << columns[c].unit << ',' << to_string(columns[c].layer) << ',' << to_string(columns[c].bank)
                << ',' << rows[t][c] << '\n';
}

namespace {

class PhaseSetRunner {
public:
    PhaseSetRunner(MemoryBanks& banks, MappingState* mapping, const DynamicsParams& params, const PhaseSetOptions& options)
        : banks_(banks), mapping_(mapping), params_(params), options_(options) {
        result_.peak_p = Vector<double>::Zero(static_cast<Eigen::Index>(banks.ps.size()));
        result_.peak_rb = Vector<double>::Zero(static_cast<Eigen::Index>(banks.rbs.size()));
        result_.peak_po = Vector<double>::Zero(static_cast<Eigen::Index>(banks.pos.size()));
        if (options.record) {
            for (std::size_t i = 0; i < banks.ps.size(); ++i) result_.trace.columns.push_back({Layer::P, i, banks.bank_of_p(i)});
            for (std::size_t i = 0; i < banks.rbs.size(); ++i) result_.trace.columns.push_back({Layer::RB, i, banks.bank_of_rb(i)});
            for (std::size_t i = 0; i < banks.pos.size(); ++i) result_.trace.columns.push_back({Layer::PO, i, banks.bank_of_po(i)});
        }
        learn_ = options.learn && mapping && !banks.in_bank(Bank::Recipient).empty();
    }

    PhaseSetResult run() {
        const auto& order = banks_.firing_order;
        if (order.empty()) return std::move(result_);
        for (int pass = 0; pass < params_.phase_set_repeats; ++pass) {
            for (auto& rb : banks_.rbs) rb.inhibitor.clear();
            for (auto& po : banks_.pos) po.inhibitor.clear();
            for (std::size_t k = 0; k < order.size(); ++k) {
                const std::size_t po = order[k];
                if (params_.ticks_per_word > 0) {
                    present_fixed(po);
                    continue;
                }
                present(po);
                settle([&] { return banks_.tau_L == 0.0; });
                const bool boundary = k + 1 == order.size() || !shares_rb(po, order[k + 1]);
                if (boundary) settle([&] { return banks_.tau_G == 0.0; });
            }
        }
        return std::move(result_);
    }

private:
    bool shares_rb(std::size_t a, std::size_t b) const {
        for (std::size_t r : banks_.pos[a].rbs)
            if (std::find(banks_.pos[b].rbs.begin(), banks_.pos[b].rbs.end(), r) != banks_.pos[b].rbs.end()) return true;
        return false;
    }

    void clamp(std::size_t po) {
        // Charge gathered while the PO's RB was active carries into the window.
        auto& u = banks_.pos[po];
        u.inhibitor.latched = false;
        u.clamped = true;
        u.act = 1.0;
    }

    // Returns true when the clamped PO's inhibitor fired during the tick.
    bool step(std::size_t clamped_po = static_cast<std::size_t>(-1)) {
        const InhibitorStep fired = tick(banks_, mapping_, params_, options_.include_ltm, learn_);
        if (options_.child_series && learn_) options_.child_series->record(banks_);
        const std::size_t t = result_.ticks++;
        for (std::size_t i : fired.rb_fired) result_.events.push_back({t, Layer::RB, i});
        for (std::size_t i : fired.po_fired) result_.events.push_back({t, Layer::PO, i});
        for (std::size_t i = 0; i < banks_.ps.size(); ++i)
            result_.peak_p(static_cast<Eigen::Index>(i)) = std::max(result_.peak_p(static_cast<Eigen::Index>(i)), banks_.ps[i].act);
        for (std::size_t i = 0; i < banks_.rbs.size(); ++i)
            result_.peak_rb(static_cast<Eigen::Index>(i)) = std::max(result_.peak_rb(static_cast<Eigen::Index>(i)), banks_.rbs[i].act);
        for (std::size_t i = 0; i < banks_.pos.size(); ++i)
            result_.peak_po(static_cast<Eigen::Index>(i)) = std::max(result_.peak_po(static_cast<Eigen::Index>(i)), banks_.pos[i].act);
        if (options_.record) {
            std::vector<double> row;
            row.reserve(result_.trace.columns.size());
            for (const auto& u : banks_.ps) row.push_back(u.act);
            for (const auto& u : banks_.rbs) row.push_back(u.act);
            for (const auto& u : banks_.pos) row.push_back(u.act);
            result_.trace.rows.push_back(std::move(row));
        }
        return std::find(fired.po_fired.begin(), fired.po_fired.end(), clamped_po) != fired.po_fired.end();
    }

    void present(std::size_t po) {
        clamp(po);
        const std::size_t start = result_.ticks;
        bool fired = false;
        for (int t = 0; t < params_.max_ticks_per_po && !fired; ++t) fired = step(po);
        banks_.pos[po].clamped = false;
        if (options_.record) result_.trace.windows.push_back({po, start, result_.ticks});
    }

    void present_fixed(std::size_t po) {
        clamp(po);
        const std::size_t start = result_.ticks;
        bool fired = false;
        for (int t = 0; t < params_.ticks_per_word; ++t) {
            const bool now = step(po);
            if (now && !fired) {
                fired = true;
                if (options_.record) result_.trace.windows.push_back({po, start, result_.ticks});
            }
        }
        if (!fired && options_.record) result_.trace.windows.push_back({po, start, result_.ticks});
        banks_.pos[po].clamped = false;
    }

    template <typename Pred>
    void settle(Pred busy) {
        // At least one tick so the released unit's reset is observed.
        int t = 0;
        do {
            step();
            ++t;
        } while (busy() && t < params_.max_ticks_per_po);
    }

    MemoryBanks& banks_;
    MappingState* mapping_;
    const DynamicsParams& params_;
    const PhaseSetOptions& options_;
    PhaseSetResult result_;
    bool learn_ = false;
};

} // namespace

PhaseSetResult run_phase_set(MemoryBanks& banks, MappingState* mapping, const DynamicsParams& params,
                             const PhaseSetOptions& options) {
    params.validate();
    PhaseSetRunner runner(banks, mapping, params, options);
    PhaseSetResult result = runner.run();
    result.trace.events = result.events;
    for (auto& po : banks.pos) po.clamped = false;
    return result;
}

std::vector<std::string> firing_pattern(const ActivationTrace& trace, const MemoryBanks& banks, double threshold) {
    std::vector<std::string> out;
    for (const auto& row : trace.rows) {
        std::string label;
        for (std::size_t c = 0; c < trace.columns.size() && label.empty(); ++c) {
            const auto& col = trace.columns[c];
            if (col.layer == Layer::PO && col.bank == Bank::Driver && row[c] > threshold) label = banks.pos[col.unit].token;
        }
        if (label.empty()) {
            for (std::size_t c = 0; c < trace.columns.size(); ++c) {
                const auto& col = trace.columns[c];
                if (col.layer == Layer::RB && col.bank == Bank::Driver && row[c] > threshold) {
                    label = "refresh";
                    break;
                }
            }
        }
        if (label.empty()) label = "REFRESH";
        if (out.empty() || out.back() != label) out.push_back(label);
    }
    return out;
}

} // namespace dora
