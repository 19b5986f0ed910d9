#pragma once

// Output files: CSV writers, run metadata, and an output directory guard that
// removes partial results when a run fails.

#include "dora/evaluation.hpp"
#include "dora/simulation.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace dora::io {

// iteration,precision (empty field when undefined)
void write_precision_csv(std::ostream& out, const std::vector<std::optional<double>>& series);
// driver_prop,recipient_prop,weight for every pair, row-major
void write_mapping_csv(std::ostream& out, const Matrix<double>& w, const std::vector<std::string>& labels);

struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix<double> values;
};
// Reads either the long driver_prop,recipient_prop,weight form or a dense
// headerless square matrix (labels are then row numbers from 1).
LabeledMatrix read_matrix(std::istream& in);
// Re-indexes `m` onto `labels`; absent labels give zero rows and columns.
Matrix<double> align(const LabeledMatrix& m, const std::vector<std::string>& labels);
// freq_hz,power
void write_spectrum_csv(std::ostream& out, const SpectrumResult& s);
// stat,t,p
void write_ttest_csv(std::ostream& out, const std::string& stat, const TTestResult& r);

// Reads a one-column CSV (header optional); throws ParseError with the line.
std::vector<double> read_column(std::istream& in, const std::string& column = "");

// Summed activation per tick of one layer from a long-form trace
// (tick,unit_id,layer,bank,activation), optionally one bank only.
std::vector<double> read_trace_layer_sum(std::istream& in, Layer layer, const std::string& bank = "");

std::uint64_t fnv1a(std::string_view text);
std::string config_json(const SimulationConfig& config);
std::string meta_json(std::uint64_t seed, const std::string& config_text);

// Claims output files. Without force an existing file is an error. Files
// written through the guard are deleted unless commit() is called.
class OutputGuard {
public:
    OutputGuard(std::vector<std::filesystem::path> files, bool force);
    ~OutputGuard();
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    void commit() { committed_ = true; }

private:
    std::vector<std::filesystem::path> files_;
    bool committed_ = false;
};

// Writes `text` to `path` or throws std::runtime_error.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

} // namespace dora::io
