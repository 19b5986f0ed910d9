#include "dora/network.hpp"

#include <algorithm>
#include <map>

namespace dora {

std::string_view to_string(Layer l) {
    switch (l) {
    case Layer::P: return "P";
    case Layer::RB: return "RB";
    case Layer::PO: return "PO";
    }
    return "?";
}

std::string_view to_string(Bank b) {
    switch (b) {
    case Bank::Driver: return "driver";
    case Bank::Recipient: return "recipient";
    case Bank::LTM: return "ltm";
    }
    return "?";
}

std::vector<std::size_t> MemoryBanks::in_bank(Bank b) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < analogs.size(); ++a)
        if (analogs[a].bank == b) out.push_back(a);
    return out;
}

MemoryBanks instantiate_network(const std::vector<AnalogSpec>& specs, const EmbeddingTable<double>& table) {
    MemoryBanks banks;
    const Eigen::Index dim = table.dimension();
    banks.semantic = Vector<double>::Zero(dim);

    for (std::size_t ai = 0; ai < specs.size(); ++ai) {
        const auto& spec = specs[ai];
        AnalogUnits au;
        au.name = spec.name;
        au.bank = Bank::LTM;
        au.p_begin = banks.ps.size();
        au.rb_begin = banks.rbs.size();
        au.po_begin = banks.pos.size();

        for (const auto& prop : spec.propositions) {
            PUnit p;
            p.analog = ai;
            p.id = prop.id;
            banks.ps.push_back(std::move(p));
        }
        au.p_end = banks.ps.size();

        std::map<std::pair<std::string, POKind>, std::size_t> tokens;
        auto make_po = [&](const Slot& slot, POKind kind) -> std::size_t {
            if (slot.kind == Slot::Kind::Token) {
                auto it = tokens.find({slot.token, kind});
                if (it != tokens.end()) return it->second;
            }
            POUnit po;
            po.analog = ai;
            po.kind = kind;
            if (slot.kind == Slot::Kind::Token) {
                po.token = slot.token;
                const Eigen::Index row = table.find(slot.token);
                if (row < 0) throw InstantiationError("token '" + slot.token + "' is not in the embedding table");
                po.links = table.matrix.row(row).transpose();
                if ((po.links.array() <= 0.0).any() || (po.links.array() >= 1.0).any())
                    throw InstantiationError("link weights for token '" + slot.token + "' must lie strictly in (0,1)");
            } else {
                po.links = Vector<double>::Zero(dim);
            }
            banks.pos.push_back(std::move(po));
            const std::size_t idx = banks.pos.size() - 1;
            if (slot.kind == Slot::Kind::Token) tokens[{slot.token, kind}] = idx;
            return idx;
        };

        for (std::size_t pi = 0; pi < spec.propositions.size(); ++pi) {
            for (const auto& rbspec : spec.propositions[pi].rbs) {
                RBUnit rb;
                rb.analog = ai;
                rb.owner = au.p_begin + pi;
                rb.pred = make_po(rbspec.pred, POKind::Predicate);
                if (rbspec.obj.kind == Slot::Kind::Prop) rb.obj_p = au.p_begin + rbspec.obj.prop;
                else rb.obj_po = make_po(rbspec.obj, POKind::Object);
                banks.rbs.push_back(rb);
                const std::size_t r = banks.rbs.size() - 1;
                banks.ps[rb.owner].rbs.push_back(r);
                if (rb.obj_p) banks.ps[*rb.obj_p].above.push_back(r);
                banks.pos[rb.pred].rbs.push_back(r);
                if (rb.obj_po) banks.pos[*rb.obj_po].rbs.push_back(r);
            }
        }
        au.rb_end = banks.rbs.size();
        au.po_end = banks.pos.size();

        for (std::size_t i = au.po_begin; i < au.po_end; ++i) {
            auto& po = banks.pos[i];
            for (std::size_t r : po.rbs) {
                const auto& rb = banks.rbs[r];
                for (auto other : {std::optional<std::size_t>(rb.pred), rb.obj_po})
                    if (other && *other != i && std::find(po.peers.begin(), po.peers.end(), *other) == po.peers.end())
                        po.peers.push_back(*other);
            }
        }
        for (auto top : spec.top_level()) au.top.push_back(au.p_begin + top);
        banks.analogs.push_back(std::move(au));
    }
    return banks;
}

void reset_activations(MemoryBanks& banks) {
    for (auto& p : banks.ps) {
        p.act = 0.0;
        p.mode = PMode::Neutral;
    }
    for (auto& rb : banks.rbs) {
        rb.act = 0.0;
        rb.inhibitor.clear();
    }
    for (auto& po : banks.pos) {
        po.act = 0.0;
        po.clamped = false;
        po.inhibitor.clear();
    }
    banks.semantic.setZero();
    banks.tau_L = 10.0;
    banks.tau_G = 10.0;
}

std::vector<std::size_t> firing_order_of(const MemoryBanks& banks, std::size_t analog) {
    std::vector<std::size_t> order;
    auto walk = [&](auto&& self, std::size_t p) -> void {
        for (std::size_t r : banks.ps[p].rbs) {
            const auto& rb = banks.rbs[r];
            if (!banks.pos[rb.pred].is_empty()) order.push_back(rb.pred);
            if (rb.obj_po && !banks.pos[*rb.obj_po].is_empty()) order.push_back(*rb.obj_po);
            if (rb.obj_p) self(self, *rb.obj_p);
        }
    };
    for (std::size_t p : banks.analogs.at(analog).top) walk(walk, p);
    return order;
}

void move_analog(MemoryBanks& banks, std::size_t analog, Bank from, Bank to) {
    if (analog >= banks.analogs.size()) throw StateError("no analog with index " + std::to_string(analog));
    auto& a = banks.analogs[analog];
    if (a.bank != from)
        throw StateError("analog '" + a.name + "' is in " + std::string(to_string(a.bank)) + ", not " +
                         std::string(to_string(from)));
    a.bank = to;
}

void load_driver(MemoryBanks& banks, std::size_t analog) {
    move_analog(banks, analog, Bank::LTM, Bank::Driver);
    reset_activations(banks);
    auto order = firing_order_of(banks, analog);
    banks.firing_order.insert(banks.firing_order.end(), order.begin(), order.end());
}

std::size_t load_random_driver(MemoryBanks& banks, Rng& rng) {
    auto ltm = banks.in_bank(Bank::LTM);
    if (ltm.empty()) throw StateError("no analog in LTM to load");
    const std::size_t pick = ltm[rng.index(ltm.size())];
    load_driver(banks, pick);
    return pick;
}

void return_to_ltm(MemoryBanks& banks) {
    for (auto& a : banks.analogs) a.bank = Bank::LTM;
    banks.firing_order.clear();
    reset_activations(banks);
}

} // namespace dora
