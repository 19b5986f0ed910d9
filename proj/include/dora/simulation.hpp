#pragma once

// The self-supervised retrieval / mapping loop and its repetitions.

#include "dora/corpus.hpp"
#include "dora/dynamics.hpp"
#include "dora/embeddings.hpp"
#include "dora/mapping.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dora {

struct SimulationConfig {
    int iterations = 100;
    int repetitions = 10;
    std::uint64_t seed = 1;
    std::string corpus_path;
    std::string embeddings_path;
    std::string grammar_path; // empty: default grammar
    DynamicsParams params;
    HebbianVariant variant = HebbianVariant::Plain;
    double eta = 0.9;
    int components = 10; // PCA dimensions
    unsigned threads = 0; // 0: one per hardware thread

    void validate() const;
};

struct IterationRecord {
    std::size_t driver = 0;
    std::vector<std::size_t> retrieved;
    std::optional<double> precision;
};

struct RepetitionResult {
    std::uint64_t seed = 0;
    std::vector<IterationRecord> iterations;
    Matrix<double> mapping; // proposition-level connection weights
};

struct SimulationResult {
    std::vector<RepetitionResult> repetitions;
    // Mean over repetitions with a defined value at that iteration.
    std::vector<std::optional<double>> mean_precision;
    Matrix<double> truth;
    double baseline = 0.0;
    std::vector<std::string> proposition_labels; // analog:id
};

// Tokens the corpus uses, reduced to `components` dimensions and made link
// ready. Throws InstantiationError for tokens missing from the table.
EmbeddingTable<double> prepare_links(const EmbeddingTable<double>& raw, const std::vector<AnalogSpec>& corpus,
                                     int components);

std::uint64_t repetition_seed(std::uint64_t seed, int repetition);

RepetitionResult run_repetition(const std::vector<AnalogSpec>& corpus, const EmbeddingTable<double>& links,
                                const Matrix<double>& truth, const SimulationConfig& config, std::uint64_t seed);

// Throws std::invalid_argument for fewer than two analogs.
SimulationResult run_simulation(const SimulationConfig& config, const std::vector<AnalogSpec>& corpus,
                                const EmbeddingTable<double>& raw, const syntax::Grammar& grammar);
// Loads corpus, embeddings and grammar from the configured paths.
SimulationResult run_simulation(const SimulationConfig& config);

} // namespace dora
