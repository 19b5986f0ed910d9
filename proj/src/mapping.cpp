#include "dora/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dora {

namespace {

struct Range {
    std::size_t begin, end;
};

std::vector<Range> ranges(const MemoryBanks& banks, Bank b, Layer l) {
    std::vector<Range> out;
    for (const auto& a : banks.analogs) {
        if (a.bank != b) continue;
        switch (l) {
        case Layer::P: out.push_back({a.p_begin, a.p_end}); break;
        case Layer::RB: out.push_back({a.rb_begin, a.rb_end}); break;
        case Layer::PO: out.push_back({a.po_begin, a.po_end}); break;
        }
    }
    return out;
}

double act_of(const MemoryBanks& banks, Layer l, std::size_t i) {
    switch (l) {
    case Layer::P: return banks.ps[i].act;
    case Layer::RB: return banks.rbs[i].act;
    case Layer::PO: return banks.pos[i].act;
    }
    return 0.0;
}

} // namespace

std::string_view to_string(HebbianVariant v) { return v == HebbianVariant::Plain ? "plain" : "child_corr"; }

HebbianVariant parse_variant(std::string_view s) {
    if (s == "plain") return HebbianVariant::Plain;
    if (s == "child_corr") return HebbianVariant::ChildCorrelation;
    throw std::invalid_argument("unknown hebbian variant '" + std::string(s) + "' (expected plain or child_corr)");
}

MappingState MappingState::for_network(const MemoryBanks& banks) {
    MappingState s;
    const std::array<Eigen::Index, 3> n = {static_cast<Eigen::Index>(banks.ps.size()),
                                           static_cast<Eigen::Index>(banks.rbs.size()),
                                           static_cast<Eigen::Index>(banks.pos.size())};
    for (std::size_t l = 0; l < 3; ++l) {
        s.hypotheses[l] = Matrix<double>::Zero(n[l], n[l]);
        s.connections[l] = Matrix<double>::Zero(n[l], n[l]);
        s.max_map[l] = Vector<double>::Zero(n[l]);
    }
    return s;
}

void MappingState::refresh_max_map() {
    for (std::size_t l = 0; l < 3; ++l)
        max_map[l] = connections[l].rows() ? Vector<double>(connections[l].rowwise().maxCoeff()) : Vector<double>();
}

std::vector<double> luce_probabilities(const std::vector<double>& scores) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    std::vector<double> p(scores.size(), 0.0);
    if (total <= 0.0) return p;
    for (std::size_t i = 0; i < scores.size(); ++i) p[i] = scores[i] / total;
    return p;
}

std::vector<double> analog_scores(const MemoryBanks& banks, const std::vector<std::size_t>& analogs,
                                  const Vector<double>& peak_p, const Vector<double>& peak_rb,
                                  const Vector<double>& peak_po) {
    std::vector<double> out;
    for (std::size_t a : analogs) {
        const auto& u = banks.analogs[a];
        double r = 0.0;
        for (std::size_t i = u.p_begin; i < u.p_end; ++i) r += peak_p(static_cast<Eigen::Index>(i));
        for (std::size_t i = u.rb_begin; i < u.rb_end; ++i) r += peak_rb(static_cast<Eigen::Index>(i));
        for (std::size_t i = u.po_begin; i < u.po_end; ++i) r += peak_po(static_cast<Eigen::Index>(i));
        out.push_back(r);
    }
    return out;
}

RetrievalOutcome luce_retrieve(MemoryBanks& banks, const std::vector<double>& scores, Rng& rng) {
    if (banks.in_bank(Bank::Driver).empty()) throw StateError("retrieval needs a loaded driver");
    if (!banks.in_bank(Bank::Recipient).empty()) throw StateError("retrieval runs only while the recipient is empty");
    RetrievalOutcome out;
    out.candidates = banks.in_bank(Bank::LTM);
    if (scores.size() != out.candidates.size()) throw std::invalid_argument("luce_retrieve: one score per LTM analog");
    out.scores = scores;
    out.probabilities = luce_probabilities(scores);
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
        out.draws.push_back(rng.uniform());
        if (out.probabilities[i] > out.draws.back()) out.retrieved.push_back(out.candidates[i]);
    }
    for (std::size_t a : out.retrieved) move_analog(banks, a, Bank::LTM, Bank::Recipient);
    return out;
}

void update_mapping_hypotheses(MappingState& state, const MemoryBanks& banks) {
    for (Layer l : {Layer::P, Layer::RB, Layer::PO}) {
        auto& h = state.h(l);
        const auto drv = ranges(banks, Bank::Driver, l);
        const auto rec = ranges(banks, Bank::Recipient, l);
        for (const auto& d : drv) {
            for (std::size_t i = d.begin; i < d.end; ++i) {
                const double ai = act_of(banks, l, i);
                if (ai == 0.0) continue;
                for (const auto& r : rec) {
                    for (std::size_t j = r.begin; j < r.end; ++j) {
                        if (l == Layer::P && banks.ps[i].mode != banks.ps[j].mode) continue;
                        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ai * act_of(banks, l, j);
                    }
                }
            }
        }
    }
}

void ChildSeriesBuffer::record(const MemoryBanks& banks) {
    if (ticks_ == 0) {
        rbs_.clear();
        for (Bank b : {Bank::Driver, Bank::Recipient})
            for (const auto& r : ranges(banks, b, Layer::RB))
                for (std::size_t i = r.begin; i < r.end; ++i) rbs_.push_back(i);
        pred_.assign(rbs_.size(), {});
        obj_.assign(rbs_.size(), {});
    }
    for (std::size_t k = 0; k < rbs_.size(); ++k) {
        const auto& rb = banks.rbs[rbs_[k]];
        pred_[k].push_back(banks.pos[rb.pred].act);
        obj_[k].push_back(rb.obj_po ? banks.pos[*rb.obj_po].act : banks.ps[*rb.obj_p].act);
    }
    ++ticks_;
}

std::vector<double> ChildSeriesBuffer::series(std::size_t rb) const {
    auto it = std::find(rbs_.begin(), rbs_.end(), rb);
    if (it == rbs_.end()) return {};
    const auto k = static_cast<std::size_t>(it - rbs_.begin());
    std::vector<double> s = pred_[k];
    s.insert(s.end(), obj_[k].begin(), obj_[k].end());
    return s;
}

double ChildSeriesBuffer::correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) return 0.0;
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

void ChildSeriesBuffer::apply(MappingState& state, const MemoryBanks& banks) const {
    if (ticks_ == 0) return;
    auto& h = state.h(Layer::RB);
    std::vector<std::vector<double>> full(rbs_.size());
    for (std::size_t k = 0; k < rbs_.size(); ++k) {
        full[k] = pred_[k];
        full[k].insert(full[k].end(), obj_[k].begin(), obj_[k].end());
    }
    for (std::size_t i = 0; i < rbs_.size(); ++i) {
        if (banks.bank_of_rb(rbs_[i]) != Bank::Driver) continue;
        for (std::size_t j = 0; j < rbs_.size(); ++j) {
            if (banks.bank_of_rb(rbs_[j]) != Bank::Recipient) continue;
            double& cell = h(static_cast<Eigen::Index>(rbs_[i]), static_cast<Eigen::Index>(rbs_[j]));
            cell = std::max(0.0, cell + correlation(full[i], full[j]));
        }
    }
}

void ChildSeriesBuffer::clear() {
    rbs_.clear();
    pred_.clear();
    obj_.clear();
    ticks_ = 0;
}

void commit_mapping_connections(MappingState& state, double eta) {
    for (std::size_t l = 0; l < 3; ++l) {
        auto& h = state.hypotheses[l];
        auto& w = state.connections[l];
        if (h.size() == 0) continue;
        const double hmax = h.maxCoeff();
        if (hmax <= 0.0) continue;
        const Matrix<double> n = h / hmax;
        const Eigen::Index rows = n.rows(), cols = n.cols();
        // Top two values per row and column give the strongest rival of any cell.
        Vector<double> r1 = Vector<double>::Zero(rows), r2 = Vector<double>::Zero(rows);
        Vector<double> c1 = Vector<double>::Zero(cols), c2 = Vector<double>::Zero(cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                const double v = n(i, j);
                if (v > r1(i)) { r2(i) = r1(i); r1(i) = v; }
                else if (v > r2(i)) r2(i) = v;
                if (v > c1(j)) { c2(j) = c1(j); c1(j) = v; }
                else if (v > c2(j)) c2(j) = v;
            }
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                if (h(i, j) <= 0.0) continue;
                const double v = n(i, j);
                const double row_rival = v == r1(i) ? r2(i) : r1(i);
                const double col_rival = v == c1(j) ? c2(j) : c1(j);
                const double target = std::max(0.0, v - std::max(row_rival, col_rival));
                const double updated = std::clamp(w(i, j) + eta * (target - w(i, j)), 0.0, 1.0);
                w(i, j) = updated;
                w(j, i) = updated;
            }
        h.setZero();
    }
    state.refresh_max_map();
}

} // namespace dora
