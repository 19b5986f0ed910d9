// dora: batch front end for the mapping engine and the constituency tools.

#include "dora/constituency.hpp"
#include "dora/corpus.hpp"
#include "dora/dataset.hpp"
#include "dora/dynamics.hpp"
#include "dora/evaluation.hpp"
#include "dora/io.hpp"
#include "dora/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dora;

namespace {

// TOML/INI through CLI11; a file starting with '{' is read as JSON, objects
// naming sections (subcommands).
class JsonOrToml : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream again(text);
            return CLI::ConfigTOML::from_config(again);
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConversionError(std::string("config: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
    static void flatten(const nlohmann::json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto deeper = parents;
                deeper.push_back(it.key());
                flatten(*it, deeper, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array())
                for (const auto& v : *it) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(*it));
            out.push_back(std::move(item));
        }
    }
};

syntax::Grammar grammar_from(const std::string& path) {
    return path.empty() ? syntax::Grammar::defaults() : syntax::Grammar::load(path);
}

template <class F>
std::string render(F&& write) {
    std::ostringstream out;
    write(out);
    return out.str();
}

void print_levels(const syntax::Words& words, const syntax::Grammar& g) {
    const auto images = syntax::chart_parse(words, g);
    int theta_level = 0;
    for (const auto& img : images) {
        std::cout << "level " << img.level << ":";
        for (const auto& item : img.items)
            std::cout << ' ' << syntax::to_string(item.constituent.category) << '[' << item.constituent.span.start << '-'
                      << item.constituent.span.end << ']';
        std::cout << "  " << syntax::to_string(syntax::time_pattern(img)) << '\n';
        if (img.theta && !theta_level) theta_level = img.level;
    }
    if (theta_level)
        std::cout << "theta: 1 at level " << theta_level << '\n';
    else
        std::cout << "theta: 0\n";
    const auto trees = syntax::to_syntax_tree(words, g);
    if (trees.trees.empty()) {
        std::cout << "tree: NONE\n";
        return;
    }
    for (const auto& t : trees.trees) std::cout << "tree: " << t.bracketed() << '\n';
}

struct GenOptions {
    std::string out;
    int analogs = 4;
    int props = 8;
    std::uint64_t seed = 1;
    int dimension = 300;
    std::string profile = "syntactic";
    bool force = false;
};

int gen_dataset(const GenOptions& o) {
    DatasetOptions d;
    d.analogs = o.analogs;
    d.props = o.props;
    d.seed = o.seed;
    d.dimension = o.dimension;
    d.profile = o.profile == "topical" ? EmbeddingProfile::topical() : EmbeddingProfile::syntactic();
    const Dataset ds = generate_dataset(d);

    const fs::path dir(o.out);
    io::OutputGuard guard({dir / "corpus.json", dir / "embeddings.txt", dir / "meta.json"}, o.force);
    io::write_file(dir / "corpus.json", to_json(ds.corpus) + "\n");
    io::write_file(dir / "embeddings.txt", render([&](std::ostream& s) { write_embeddings(s, ds.embeddings); }));
    const nlohmann::json cfg = {{"command", "gen-dataset"}, {"analogs", o.analogs}, {"props", o.props},
                                {"seed", o.seed},          {"dimension", o.dimension}, {"profile", o.profile}};
    io::write_file(dir / "meta.json", io::meta_json(o.seed, cfg.dump()));
    guard.commit();
    std::cout << "wrote " << ds.corpus.size() << " analogs to " << dir.string() << '\n';
    return 0;
}

struct RunOptions {
    SimulationConfig config;
    std::string variant = "plain";
    std::string out;
    bool force = false;
};

std::string rep_name(int r, const char* what) {
    std::ostringstream s;
    s << "rep_" << std::setw(2) << std::setfill('0') << r << '_' << what << ".csv";
    return s.str();
}

int run(RunOptions& o) {
    o.config.variant = parse_variant(o.variant);
    const fs::path dir(o.out);
    std::vector<fs::path> files = {dir / "precision.csv", dir / "truth.csv", dir / "meta.json"};
    for (int r = 0; r < o.config.repetitions; ++r) {
        files.push_back(dir / "reps" / rep_name(r, "precision"));
        files.push_back(dir / "reps" / rep_name(r, "mapping"));
    }
    io::OutputGuard guard(files, o.force);
    const SimulationResult res = run_simulation(o.config);

    // Single-threaded finalizer: per-repetition files, then the merged series.
    for (int r = 0; r < o.config.repetitions; ++r) {
        const auto& rep = res.repetitions[static_cast<std::size_t>(r)];
        std::vector<std::optional<double>> series;
        for (const auto& it : rep.iterations) series.push_back(it.precision);
        io::write_file(dir / "reps" / rep_name(r, "precision"), render([&](std::ostream& s) { io::write_precision_csv(s, series); }));
        io::write_file(dir / "reps" / rep_name(r, "mapping"),
                       render([&](std::ostream& s) { io::write_mapping_csv(s, rep.mapping, res.proposition_labels); }));
    }
    io::write_file(dir / "precision.csv", render([&](std::ostream& s) { io::write_precision_csv(s, res.mean_precision); }));
    io::write_file(dir / "truth.csv", render([&](std::ostream& s) { io::write_mapping_csv(s, res.truth, res.proposition_labels); }));
    io::write_file(dir / "meta.json", io::meta_json(o.config.seed, io::config_json(o.config)));
    guard.commit();

    std::cout << "baseline precision " << res.baseline << '\n';
    if (!res.mean_precision.empty() && res.mean_precision.back())
        std::cout << "final mean precision " << *res.mean_precision.back() << '\n';
    else
        std::cout << "final mean precision undefined\n";
    return 0;
}

int pushout(const std::string& corpus_path, const std::string& lexicon) {
    const auto corpus = load_proposition_file(corpus_path);
    const auto g = grammar_from(lexicon);
    std::vector<std::string> labels;
    for (const auto& a : corpus)
        for (const auto& p : a.propositions) labels.push_back(a.name + ":" + p.id);
    const auto classes = syntax::build_pushout(corpus_sentences(corpus), g);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::cout << "class " << c + 1 << ' ' << syntax::to_string(classes[c].representative) << ':';
        for (const auto& m : classes[c].members) std::cout << ' ' << labels[m.sequence] << '@' << m.level;
        std::cout << '\n';
    }
    return 0;
}

int transform(const std::string& sentence, const std::string& kind, const std::string& lexicon) {
    const auto g = grammar_from(lexicon);
    const auto words = syntax::tokenize(sentence);
    const auto trees = syntax::to_syntax_tree(words, g);
    if (trees.trees.empty()) throw TransformError("sentence has no parse");
    const auto k = kind == "yesno" ? syntax::QueryKind::YesNo
                   : kind == "wh-object" ? syntax::QueryKind::WhObject
                                         : syntax::QueryKind::WhSubject;
    // Ambiguous input: the first parse that admits the movement wins.
    std::string last_error;
    for (const auto& t : trees.trees) {
        try {
            std::cout << syntax::join(syntax::structure_transform(t, k)) << '\n';
            return 0;
        } catch (const TransformError& e) {
            last_error = e.what();
        }
    }
    throw TransformError(last_error);
}

struct SpectrumOptions {
    std::string trace;
    double rate = 100.0;
    std::string layer = "PO";
    std::string bank;
    bool peaks = false;
};

int spectrum(const SpectrumOptions& o) {
    std::ifstream in(o.trace);
    if (!in) throw std::runtime_error("cannot open " + o.trace);
    std::string header;
    std::getline(in, header);
    in.seekg(0);
    std::vector<double> series;
    if (header.rfind("tick,unit_id,layer,bank,activation", 0) == 0) {
        const Layer l = o.layer == "P" ? Layer::P : o.layer == "RB" ? Layer::RB : Layer::PO;
        series = io::read_trace_layer_sum(in, l, o.bank);
    } else {
        series = io::read_column(in);
    }
    const auto s = power_spectrum(series, o.rate);
    if (o.peaks) {
        std::cout << "freq_hz,power\n" << std::setprecision(17);
        for (const auto& p : s.peaks) std::cout << p.frequency << ',' << p.power << '\n';
    } else {
        io::write_spectrum_csv(std::cout, s);
    }
    return 0;
}

struct PresentOptions {
    std::string condition = "sentence";
    int count = 40;
    int ticks_per_word = 35;
    int dimension = 10;
    std::uint64_t seed = 1;
    std::string out;
    bool force = false;
};

int present(const PresentOptions& o) {
    const auto pc = o.condition == "scrambled" ? scrambled_condition(o.count, o.dimension, o.seed)
                                               : sentence_condition(o.count, o.dimension, o.seed);
    MemoryBanks banks = instantiate_network(pc.corpus, pc.links);
    load_driver(banks, 0);
    DynamicsParams params;
    params.ticks_per_word = o.ticks_per_word;
    PhaseSetOptions opts;
    opts.record = true;
    const auto res = run_phase_set(banks, nullptr, params, opts);
    io::OutputGuard guard({fs::path(o.out)}, o.force);
    io::write_file(o.out, render([&](std::ostream& s) { res.trace.write_csv(s); }));
    guard.commit();
    std::cout << "sample rate " << 4 * o.ticks_per_word << " ticks/s, " << res.ticks << " ticks\n";
    return 0;
}

int eval(const std::string& pred_path, const std::string& truth_path) {
    auto read = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p);
        return io::read_matrix(in);
    };
    const auto pred = read(pred_path);
    const auto truth = read(truth_path);
    std::vector<std::string> labels = truth.labels;
    for (const auto& l : pred.labels)
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    const auto p = precision(io::align(pred, labels), io::align(truth, labels));
    if (p)
        std::cout << std::setprecision(17) << *p << '\n';
    else
        std::cout << "undefined\n";
    return 0;
}

int ttest(const std::string& a_path, const std::string& b_path, const std::string& column) {
    auto read = [&](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p);
        return io::read_column(in, column);
    };
    io::write_ttest_csv(std::cout, "two_sample", t_test_two_sample(read(a_path), read(b_path)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dora: self-supervised relational mapping and constituency tools"};
    app.config_formatter(std::make_shared<JsonOrToml>());
    app.set_config("--config", "", "TOML or JSON file supplying any flag");
    app.set_version_flag("--version", DORA_VERSION);
    app.require_subcommand(1, 1);

    int status = 0;
    auto guarded = [&status](auto&& body) {
        return [&status, body]() {
            try {
                status = body();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                status = 1;
            }
        };
    };
    auto seed_option = [](CLI::App* sub, std::uint64_t& seed) {
        sub->add_option("--seed", seed, "random seed")->envname("DORA_SEED");
    };

    GenOptions gen;
    auto* g = app.add_subcommand("gen-dataset", "write the themed mapping corpus and synthetic embeddings");
    g->add_option("--out", gen.out, "output directory")->required();
    g->add_option("--analogs", gen.analogs, "analogs")->capture_default_str();
    g->add_option("--props", gen.props, "propositions per analog")->capture_default_str();
    seed_option(g, gen.seed);
    g->add_option("--dimension", gen.dimension, "embedding dimension")->capture_default_str();
    g->add_option("--profile", gen.profile, "embedding profile")->check(CLI::IsMember({"syntactic", "topical"}));
    g->add_flag("--force", gen.force, "overwrite existing outputs");
    g->callback(guarded([&] { return gen_dataset(gen); }));

    RunOptions ro;
    auto* r = app.add_subcommand("run", "retrieval and mapping simulation");
    r->add_option("--corpus", ro.config.corpus_path, "proposition file")->required()->check(CLI::ExistingFile);
    r->add_option("--embeddings", ro.config.embeddings_path, "embedding table")->required()->check(CLI::ExistingFile);
    r->add_option("--lexicon", ro.config.grammar_path, "grammar JSON")->check(CLI::ExistingFile);
    r->add_option("--iterations", ro.config.iterations, "iterations per repetition")->capture_default_str();
    r->add_option("--reps", ro.config.repetitions, "repetitions")->capture_default_str();
    seed_option(r, ro.config.seed);
    r->add_option("--variant", ro.variant, "Hebbian variant")->check(CLI::IsMember({"plain", "child_corr"}));
    r->add_option("--eta", ro.config.eta, "mapping learning rate")->capture_default_str();
    r->add_option("--components", ro.config.components, "PCA dimensions")->capture_default_str();
    r->add_option("--threads", ro.config.threads, "worker threads (0: hardware)");
    r->add_option("--gamma", ro.config.params.gamma)->capture_default_str();
    r->add_option("--delta", ro.config.params.delta)->capture_default_str();
    r->add_option("--yoke-weight", ro.config.params.yoke_weight)->capture_default_str();
    r->add_option("--max-ticks-per-po", ro.config.params.max_ticks_per_po)->capture_default_str();
    r->add_option("--phase-set-repeats", ro.config.params.phase_set_repeats)->capture_default_str();
    r->add_option("--out", ro.out, "output directory")->required();
    r->add_flag("--force", ro.force, "overwrite existing outputs");
    r->callback(guarded([&] { return run(ro); }));

    std::string sentence, lexicon, kind = "yesno", corpus_path;
    auto* p = app.add_subcommand("parse", "level images, time patterns, theta and tree of a sentence");
    p->add_option("--sentence", sentence)->required();
    p->add_option("--lexicon", lexicon, "grammar JSON")->check(CLI::ExistingFile);
    p->callback(guarded([&] {
        print_levels(syntax::tokenize(sentence), grammar_from(lexicon));
        return 0;
    }));

    auto* po = app.add_subcommand("pushout", "equivalence classes of a corpus's time patterns");
    po->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    po->add_option("--lexicon", lexicon, "grammar JSON")->check(CLI::ExistingFile);
    po->callback(guarded([&] { return pushout(corpus_path, lexicon); }));

    auto* t = app.add_subcommand("transform", "question formation by movement");
    t->add_option("--sentence", sentence)->required();
    t->add_option("--kind", kind)->check(CLI::IsMember({"yesno", "wh-object", "wh-subject"}));
    t->add_option("--lexicon", lexicon, "grammar JSON")->check(CLI::ExistingFile);
    t->callback(guarded([&] { return transform(sentence, kind, lexicon); }));

    SpectrumOptions so;
    auto* s = app.add_subcommand("spectrum", "power spectrum of a trace or a one-column series");
    s->add_option("--trace", so.trace)->required()->check(CLI::ExistingFile);
    s->add_option("--rate", so.rate, "samples per second")->required();
    s->add_option("--layer", so.layer, "layer summed from a trace")->check(CLI::IsMember({"P", "RB", "PO"}));
    s->add_option("--bank", so.bank, "restrict a trace to one bank");
    s->add_flag("--peaks", so.peaks, "print only the detected peaks");
    s->callback(guarded([&] { return spectrum(so); }));

    PresentOptions pr;
    auto* pres = app.add_subcommand("present", "record a fixed-rate presentation trace");
    pres->add_option("--condition", pr.condition)->check(CLI::IsMember({"sentence", "scrambled"}));
    pres->add_option("--count", pr.count, "sentences or words")->capture_default_str();
    pres->add_option("--ticks-per-word", pr.ticks_per_word)->capture_default_str();
    pres->add_option("--dimension", pr.dimension)->capture_default_str();
    seed_option(pres, pr.seed);
    pres->add_option("--out", pr.out, "trace CSV")->required();
    pres->add_flag("--force", pr.force, "overwrite existing outputs");
    pres->callback(guarded([&] { return present(pr); }));

    std::string pred, truth, a, b, column;
    auto* e = app.add_subcommand("eval", "precision of a mapping matrix against truth");
    e->add_option("--pred", pred)->required()->check(CLI::ExistingFile);
    e->add_option("--truth", truth)->required()->check(CLI::ExistingFile);
    e->callback(guarded([&] { return eval(pred, truth); }));

    auto* tt = app.add_subcommand("ttest", "pooled two-sample t-test");
    tt->add_option("--a", a)->required()->check(CLI::ExistingFile);
    tt->add_option("--b", b)->required()->check(CLI::ExistingFile);
    tt->add_option("--column", column, "column name when the files have headers");
    tt->callback(guarded([&] { return ttest(a, b, column); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }
    return status;
}
