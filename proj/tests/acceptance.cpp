// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit when
// any criterion fails.

#include "oracles.hpp"

#include "dora/constituency.hpp"
#include "dora/dataset.hpp"
#include "dora/dynamics.hpp"
#include "dora/embeddings.hpp"
#include "dora/evaluation.hpp"
#include "dora/io.hpp"
#include "dora/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace dora;
using namespace dora::syntax;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

// The learning protocol: generated corpus, child-correlation variant,
// 10 repetitions of 100 iterations.
SimulationResult learning_run(unsigned threads) {
    DatasetOptions d;
    d.seed = 7;
    const auto ds = generate_dataset(d);
    SimulationConfig c;
    c.iterations = 100;
    c.repetitions = 10;
    c.seed = 7;
    c.variant = HebbianVariant::ChildCorrelation;
    c.threads = threads;
    return run_simulation(c, ds.corpus, ds.embeddings, ds.grammar);
}

std::string csv_bytes(const SimulationResult& r) {
    std::ostringstream out;
    io::write_precision_csv(out, r.mean_precision);
    for (const auto& rep : r.repetitions) {
        std::vector<std::optional<double>> series;
        for (const auto& it : rep.iterations) series.push_back(it.precision);
        io::write_precision_csv(out, series);
        io::write_mapping_csv(out, rep.mapping, r.proposition_labels);
    }
    return out.str();
}

PhaseSetResult two_rb_phase_set(MemoryBanks& banks) {
    const auto corpus = parse_proposition_file(R"({"analogs":[{"name":"a","propositions":[
      {"id":"p1","rbs":[{"pred":{"token":"big"},"obj":{"token":"dogs"}},{"pred":{"token":"bite"},"obj":{"token":"men"}}]}]}]})");
    EmbeddingTable<double> t;
    t.tokens = {"big", "dogs", "bite", "men"};
    t.matrix.resize(4, 4);
    t.matrix << 0.7, 0.1, 0.1, 0.7, 0.1, 0.7, 0.7, 0.1, 0.5, 0.5, 0.5, 0.5, 0.1, 0.1, 0.7, 0.7;
    t.matrix.rowwise().normalize();
    banks = instantiate_network(corpus, t);
    load_driver(banks, 0);
    PhaseSetOptions o;
    o.record = true;
    return run_phase_set(banks, nullptr, DynamicsParams{}, o);
}

int theta_level(const Words& w, const Grammar& g) {
    const auto imgs = chart_parse(w, g);
    return !imgs.empty() && imgs.back().theta ? imgs.back().level : 0;
}

std::string level_pattern(const Words& w, const Grammar& g, int level) {
    for (const auto& img : chart_parse(w, g))
        if (img.level == level) return to_string(time_pattern(img));
    return "";
}

} // namespace

int main() {
    std::optional<SimulationResult> run;
    auto learning = [&]() -> const SimulationResult& {
        if (!run) run = learning_run(0);
        return *run;
    };

    report(1, "learning dominance", [&] {
        const auto& r = learning();
        const auto final_value = r.mean_precision.back();
        if (!final_value) return Outcome{false, "final precision undefined"};
        const double ratio = *final_value / r.baseline;
        return Outcome{ratio >= 3.0, "final " + fmt(*final_value) + " baseline " + fmt(r.baseline) + " ratio " +
                                         fmt(ratio) + " (need >= 3)"};
    });

    report(2, "learning-curve shape", [&] {
        const auto& s = learning().mean_precision;
        std::size_t argmin = 0;
        std::optional<double> lo;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] && (!lo || *s[i] < *lo)) {
                lo = s[i];
                argmin = i;
            }
        if (!s.front() || !s.back() || !lo) return Outcome{false, "series has undefined endpoints"};
        const bool ok = argmin < 20 && *s.back() > *s.front();
        return Outcome{ok, "min " + fmt(*lo) + " at iteration " + std::to_string(argmin + 1) + ", initial " +
                               fmt(*s.front()) + ", final " + fmt(*s.back())};
    });

    MemoryBanks banks;
    const PhaseSetResult phase = two_rb_phase_set(banks);

    report(3, "oscillation ratio", [&] {
        const auto rb = static_cast<long>(phase.trace.count_events(Layer::RB));
        const auto po = static_cast<long>(phase.trace.count_events(Layer::PO));
        return Outcome{rb > 0 && std::labs(po - 2 * rb) <= 1,
                       "PO " + std::to_string(po) + " RB " + std::to_string(rb)};
    });

    report(4, "binding asynchrony", [&] {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < phase.trace.columns.size(); ++c)
            if (phase.trace.columns[c].layer == Layer::RB && phase.trace.columns[c].bank == Bank::Driver) cols.push_back(c);
        std::size_t both = 0;
        for (const auto& row : phase.trace.rows)
            if (cols.size() == 2 && row[cols[0]] > 0.5 && row[cols[1]] > 0.5) ++both;
        std::vector<std::string> expect;
        for (int pass = 0; pass < DynamicsParams{}.phase_set_repeats; ++pass)
            for (const char* t : {"big", "refresh", "dogs", "refresh", "REFRESH", "bite", "refresh", "men", "refresh", "REFRESH"})
                expect.push_back(t);
        const auto got = firing_pattern(phase.trace, banks);
        return Outcome{cols.size() == 2 && both == 0 && got == expect,
                       "overlapping ticks " + std::to_string(both) + ", pattern " + (got == expect ? "matches" : "differs")};
    });

    report(5, "activation fixed point", [&] {
        MemoryBanks b = banks;
        reset_activations(b);
        DynamicsParams p;
        NetInputs net;
        net.p = VectorXd::Ones(static_cast<Eigen::Index>(b.ps.size()));
        net.rb = VectorXd::Zero(static_cast<Eigen::Index>(b.rbs.size()));
        net.po = VectorXd::Zero(static_cast<Eigen::Index>(b.pos.size()));
        net.semantic = VectorXd::Zero(static_cast<Eigen::Index>(b.semantic_size()));
        for (int t = 0; t < 10000; ++t) integrate_activations(net, b, p);
        const double err = std::abs(b.ps[0].act - 0.825);
        return Outcome{err <= 1e-6, "activation " + fmt(b.ps[0].act) + " error " + fmt(err)};
    });

    report(6, "parser oracle equivalence", [&] {
        const auto g = Grammar::thesis();
        std::size_t n = 0, bad = 0;
        for_each_sequence(g, 1, 6, [&](const Words& seq) {
            ++n;
            const auto expect = oracle::census(seq, g);
            oracle::Census got;
            const auto imgs = chart_parse(seq, g);
            for (const auto& img : imgs)
                for (const auto& item : img.items) {
                    const auto& c = item.constituent;
                    got[{c.span.start, c.span.end, c.category, c.level}] += item.derivations;
                }
            const bool theta = !imgs.empty() && imgs.back().theta;
            if (got != expect || theta != oracle::top_theta(expect, g, static_cast<int>(seq.size()))) ++bad;
        });
        return Outcome{bad == 0, std::to_string(n - bad) + "/" + std::to_string(n) + " sequences agree"};
    });

    report(7, "walkthrough golden", [&] {
        const auto g = Grammar::defaults();
        const std::vector<Words> corpus = {tokenize("Big dogs bite men"), tokenize("Big men bite dogs"),
                                           tokenize("Big dog big dog")};
        const auto classes = build_pushout(corpus, g);
        auto class_of = [&](std::size_t s) {
            for (std::size_t i = 0; i < classes.size(); ++i)
                for (const auto& m : classes[i].members)
                    if (m.sequence == s && m.level == 2) return i;
            return classes.size();
        };
        const std::string pattern = level_pattern(corpus[0], g, 2);
        const int t1 = theta_level(corpus[0], g);
        const int t2 = theta_level(tokenize("Men say men bite men"), g);
        const bool ok = pattern == "(2,4,NP,VP,0)" && t1 == 3 && t2 == 5 && class_of(0) == class_of(1) &&
                        class_of(0) != class_of(2);
        return Outcome{ok, "level-2 " + pattern + ", theta at " + std::to_string(t1) + " and " + std::to_string(t2)};
    });

    report(8, "move transformations", [&] {
        const auto g = Grammar::defaults();
        const auto trees = to_syntax_tree(tokenize("Dogs are biting men"), g).trees;
        auto first = [&](QueryKind k) {
            for (const auto& t : trees) {
                try {
                    return join(structure_transform(t, k));
                } catch (const TransformError&) {
                }
            }
            return std::string("<none>");
        };
        const auto yn = first(QueryKind::YesNo);
        const auto wh = first(QueryKind::WhObject);
        return Outcome{yn == "are dogs biting men" && wh == "who are dogs biting", "'" + yn + "' / '" + wh + "'"};
    });

    report(9, "catalan", [&] {
        const std::vector<std::uint64_t> expect = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012};
        std::size_t ok = 0;
        for (std::size_t i = 0; i < expect.size(); ++i) ok += catalan_count(i + 1) == expect[i];
        return Outcome{ok == expect.size(), std::to_string(ok) + "/13 values"};
    });

    report(10, "spectral reproduction", [&] {
        const int k = 35;
        const double rate = 4.0 * k;
        DynamicsParams p;
        p.ticks_per_word = k;
        auto spectra = [&](const PresentationCorpus& pc) {
            auto b = instantiate_network(pc.corpus, pc.links);
            load_driver(b, 0);
            PhaseSetOptions o;
            o.record = true;
            const auto r = run_phase_set(b, nullptr, p, o);
            std::vector<SpectrumResult> out;
            for (Layer l : {Layer::P, Layer::RB, Layer::PO}) out.push_back(power_spectrum(r.trace.layer_sum(l), rate));
            return out;
        };
        const auto s = spectra(sentence_condition(40, 10, 1));
        const auto w = spectra(scrambled_condition(160, 10, 1));
        const bool sentence_ok = s[0].has_peak_near(1.0) && s[1].has_peak_near(2.0) && s[2].has_peak_near(4.0);
        bool scrambled_low = false;
        for (const auto& x : w) scrambled_low = scrambled_low || x.has_peak_near(1.0) || x.has_peak_near(2.0);
        const bool scrambled_ok = !scrambled_low && w[2].has_peak_near(4.0);
        return Outcome{sentence_ok && scrambled_ok, std::string("sentence 1/2/4 Hz ") + (sentence_ok ? "present" : "missing") +
                                                        ", scrambled " + (scrambled_ok ? "4 Hz only" : "wrong peaks")};
    });

    report(11, "embedding pipeline", [&] {
        Rng rng(21);
        const int dim = 50, per = 8;
        std::vector<VectorXd> centers;
        for (int c = 0; c < 3; ++c) {
            VectorXd v(dim);
            for (int i = 0; i < dim; ++i) v(i) = 2.0 * rng.normal();
            centers.push_back(v);
        }
        EmbeddingTable<double> t;
        t.matrix.resize(3 * per, dim);
        std::vector<int> label;
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < per; ++i) {
                t.tokens.push_back("w" + std::to_string(c * per + i));
                for (int j = 0; j < dim; ++j) t.matrix(c * per + i, j) = centers[static_cast<std::size_t>(c)](j) + rng.normal();
                label.push_back(c);
            }
        const auto [reduced, proj] = reduce_dimensions(t, 10);
        const auto links = normalize_for_links(reduced);
        const MatrixXd r = column_correlation(t.matrix);
        double residual = 0;
        for (Eigen::Index i = 0; i < proj.p; ++i)
            residual = std::max(residual, (r * proj.projection.col(i) - proj.eigenvalues(i) * proj.projection.col(i)).norm());
        double norm_err = 0;
        bool inside = true;
        for (Eigen::Index i = 0; i < links.size(); ++i) {
            norm_err = std::max(norm_err, std::abs(links.matrix.row(i).norm() - 1.0));
            inside = inside && (links.matrix.row(i).array() > 0).all() && (links.matrix.row(i).array() < 1).all();
        }
        const MatrixXd sim = similarity_matrix(reduced);
        double within = 0, cross = 0;
        int nw = 0, nc = 0;
        for (Eigen::Index i = 0; i < sim.rows(); ++i)
            for (Eigen::Index j = 0; j < sim.cols(); ++j) {
                if (i == j) continue;
                if (label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]) within += sim(i, j), ++nw;
                else cross += sim(i, j), ++nc;
            }
        within /= nw;
        cross /= nc;
        const bool ok = reduced.dimension() == 10 && norm_err <= 1e-9 && inside && residual < 1e-8 && within > cross;
        return Outcome{ok, "p " + std::to_string(reduced.dimension()) + ", norm error " + fmt(norm_err) + ", residual " +
                               fmt(residual) + ", within " + fmt(within) + " cross " + fmt(cross)};
    });

    report(12, "statistics", [&] {
        struct C {
            std::vector<double> a, b;
            double t, p;
        };
        const std::vector<C> cases = {
            {{1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, -1.0, 0.34659350708733416},
            {{5.1, 4.9, 6.2, 5.8, 6.0, 5.5}, {4.1, 3.9, 4.8, 4.4, 4.6}, 4.467680451017673, 0.0015598747096317056},
            {{0.29, 0.31, 0.27, 0.35, 0.30, 0.28, 0.33, 0.32, 0.26, 0.30},
             {0.10, 0.09, 0.11, 0.10, 0.12, 0.08, 0.10, 0.09, 0.11, 0.10},
             21.200351001129093,
             3.5134297903980886e-14},
            {{12, 15, 11, 14, 13}, {12.5, 14.5, 11.5, 13.5, 13.0, 12.0, 15.0}, -0.1731358402661103, 0.8659989430945167},
            {{-1.5, 0.2, 2.3, -0.7, 1.1, 0.4, -2.0, 0.9},
             {0.5, 1.7, -0.3, 2.4, 1.2, 0.8, 1.9, -0.1, 1.5},
             -1.7076065480844513,
             0.10831666934370753},
        };
        double dt = 0, dp = 0;
        for (const auto& c : cases) {
            const auto r = t_test_two_sample(c.a, c.b);
            dt = std::max(dt, std::abs(r.t - c.t));
            dp = std::max(dp, std::abs(r.p - c.p));
        }
        const auto same = t_test_two_sample({0.3, 0.1, 0.2}, {0.3, 0.1, 0.2});
        const bool ok = dt < 1e-4 && dp < 1e-5 && same.t == 0.0 && same.p == 1.0;
        return Outcome{ok, "max |dt| " + fmt(dt) + ", max |dp| " + fmt(dp) + ", identical (" + fmt(same.t) + ", " +
                               fmt(same.p) + ")"};
    });

    report(13, "determinism", [&] {
        const std::string a = csv_bytes(learning());
        const std::string b = csv_bytes(learning_run(1));
        return Outcome{a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
    });

    report(14, "non-isomorphism witness", [&] {
        WitnessQuery q;
        q.min_length = 4;
        q.max_length = 4;
        const auto t0 = std::chrono::steady_clock::now();
        const auto w = noniso_witness(Grammar::thesis(), q);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!w) return Outcome{false, "no witness"};
        const std::string a = join(w->first), b = join(w->second);
        const bool ok = secs < 10.0 && w->level == 2 && ((a == "big dogs bite men" && b == "big men bite dogs") ||
                                          (a == "big men bite dogs" && b == "big dogs bite men"));
        return Outcome{ok, "'" + a + "' ~ '" + b + "' at level " + std::to_string(w->level)};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
