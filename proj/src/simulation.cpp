#include "dora/simulation.hpp"

#include "dora/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <thread>

namespace dora {

void SimulationConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("eta must lie in (0, 1]");
    if (components < 1) throw std::invalid_argument("components must be at least 1");
    params.validate();
}

EmbeddingTable<double> prepare_links(const EmbeddingTable<double>& raw, const std::vector<AnalogSpec>& corpus,
                                     int components) {
    std::vector<std::string> used;
    std::set<std::string> seen;
    for (const auto& a : corpus)
        for (const auto& p : a.propositions)
            for (const auto& rb : p.rbs)
                for (const Slot* s : {&rb.pred, &rb.obj})
                    if (s->kind == Slot::Kind::Token && seen.insert(s->token).second) used.push_back(s->token);
    EmbeddingTable<double> sub;
    sub.tokens = used;
    sub.matrix.resize(static_cast<Eigen::Index>(used.size()), raw.dimension());
    for (std::size_t i = 0; i < used.size(); ++i) {
        const Eigen::Index r = raw.find(used[i]);
        if (r < 0) throw InstantiationError("token '" + used[i] + "' is not in the embedding table");
        sub.matrix.row(static_cast<Eigen::Index>(i)) = raw.matrix.row(r);
    }
    if (sub.size() < 2) throw InstantiationError("need at least two distinct tokens to build link weights");
    const Eigen::Index p = std::min<Eigen::Index>(components, sub.dimension());
    auto [reduced, proj] = reduce_dimensions(sub, p);
    return normalize_for_links(reduced);
}

std::uint64_t repetition_seed(std::uint64_t seed, int repetition) {
    return derive_seed(seed, static_cast<std::uint64_t>(repetition) + 1000);
}

RepetitionResult run_repetition(const std::vector<AnalogSpec>& corpus, const EmbeddingTable<double>& links,
                                const Matrix<double>& truth, const SimulationConfig& config, std::uint64_t seed) {
    RepetitionResult out;
    out.seed = seed;
    Rng rng(seed);
    MemoryBanks banks = instantiate_network(corpus, links);
    MappingState mapping = MappingState::for_network(banks);
    ChildSeriesBuffer series;
    const bool child = config.variant == HebbianVariant::ChildCorrelation;

    for (int it = 0; it < config.iterations; ++it) {
        IterationRecord rec;
        rec.driver = load_random_driver(banks, rng);

        PhaseSetOptions retrieval;
        retrieval.include_ltm = true;
        const PhaseSetResult pass = run_phase_set(banks, &mapping, config.params, retrieval);
        const auto candidates = banks.in_bank(Bank::LTM);
        const auto scores = analog_scores(banks, candidates, pass.peak_p, pass.peak_rb, pass.peak_po);
        rec.retrieved = luce_retrieve(banks, scores, rng).retrieved;

        if (!rec.retrieved.empty()) {
            reset_activations(banks);
            series.clear();
            PhaseSetOptions mapping_pass;
            mapping_pass.learn = true;
            mapping_pass.child_series = child ? &series : nullptr;
            run_phase_set(banks, &mapping, config.params, mapping_pass);
            if (child) series.apply(mapping, banks);
            commit_mapping_connections(mapping, config.eta);
        }
        return_to_ltm(banks);
        rec.precision = precision(mapping.w(Layer::P), truth);
        out.iterations.push_back(std::move(rec));
    }
    out.mapping = mapping.w(Layer::P);
    return out;
}

SimulationResult run_simulation(const SimulationConfig& config, const std::vector<AnalogSpec>& corpus,
                                const EmbeddingTable<double>& raw, const syntax::Grammar& grammar) {
    config.validate();
    if (corpus.size() < 2) throw std::invalid_argument("mapping needs at least two analogs");
    const EmbeddingTable<double> links = prepare_links(raw, corpus, config.components);

    SimulationResult result;
    result.truth = truth_matrix(corpus_sentences(corpus), grammar);
    const auto n = result.truth.rows();
    if (n >= 2) result.baseline = precision(baseline_matrix(n), result.truth).value_or(0.0);
    for (const auto& a : corpus)
        for (const auto& p : a.propositions) result.proposition_labels.push_back(a.name + ":" + p.id);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = config.threads ? config.threads : hw;
    result.repetitions.resize(static_cast<std::size_t>(config.repetitions));
    // Each repetition owns its network; results land in fixed slots.
    for (int start = 0; start < config.repetitions; start += static_cast<int>(workers)) {
        std::vector<std::future<RepetitionResult>> batch;
        const int stop = std::min(config.repetitions, start + static_cast<int>(workers));
        for (int r = start; r < stop; ++r)
            batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, [&, r] {
                return run_repetition(corpus, links, result.truth, config, repetition_seed(config.seed, r));
            }));
        for (int r = start; r < stop; ++r) result.repetitions[static_cast<std::size_t>(r)] = batch[static_cast<std::size_t>(r - start)].get();
    }

    for (int it = 0; it < config.iterations; ++it) {
        double sum = 0.0;
        int count = 0;
        for (const auto& rep : result.repetitions)
            if (auto p = rep.iterations[static_cast<std::size_t>(it)].precision) {
                sum += *p;
                ++count;
            }
        result.mean_precision.push_back(count ? std::optional<double>(sum / count) : std::nullopt);
    }
    return result;
}

SimulationResult run_simulation(const SimulationConfig& config) {
    const auto corpus = load_proposition_file(config.corpus_path);
    std::ifstream in(config.embeddings_path);
    if (!in) throw std::runtime_error("cannot open embeddings file " + config.embeddings_path);
    const auto raw = load_embeddings<double>(in);
    const auto grammar = config.grammar_path.empty() ? syntax::Grammar::defaults() : syntax::Grammar::load(config.grammar_path);
    return run_simulation(config, corpus, raw, grammar);
}

} // namespace dora
