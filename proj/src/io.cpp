#include "dora/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <tuple>
#include <sstream>

namespace dora::io {

using nlohmann::json;

namespace {

std::ostream& num(std::ostream& out, double v) { return out << std::setprecision(17) << v; }

} // namespace

void write_precision_csv(std::ostream& out, const std::vector<std::optional<double>>& series) {
    out << "iteration,precision\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << i + 1 << ',';
        if (series[i]) num(out, *series[i]);
        out << '\n';
    }
}

void write_mapping_csv(std::ostream& out, const Matrix<double>& w, const std::vector<std::string>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != w.rows() || w.rows() != w.cols())
        throw std::invalid_argument("write_mapping_csv: labels do not match the matrix");
    out << "driver_prop,recipient_prop,weight\n";
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            out << labels[static_cast<std::size_t>(i)] << ',' << labels[static_cast<std::size_t>(j)] << ',';
            num(out, w(i, j)) << '\n';
        }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double to_number(const std::string& f, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used == f.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(lineno, "not a number: '" + f + "'");
}

} // namespace

LabeledMatrix read_matrix(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> linenos;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line));
        linenos.push_back(lineno);
    }
    LabeledMatrix out;
    if (rows.empty()) throw ParseError(0, "empty matrix file");
    if (rows[0] == std::vector<std::string>{"driver_prop", "recipient_prop", "weight"}) {
        std::map<std::string, std::size_t> index;
        auto id = [&](const std::string& s) {
            auto [it, fresh] = index.emplace(s, out.labels.size());
            if (fresh) out.labels.push_back(s);
            return it->second;
        };
        std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() != 3) throw ParseError(linenos[r], "expected 3 fields");
            const std::size_t i = id(rows[r][0]), j = id(rows[r][1]);
            cells.emplace_back(i, j, to_number(rows[r][2], linenos[r]));
        }
        const auto n = static_cast<Eigen::Index>(out.labels.size());
        out.values = Matrix<double>::Zero(n, n);
        for (const auto& [i, j, v] : cells) out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        return out;
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.values.resize(n, n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != n) throw ParseError(linenos[r], "matrix is not square");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_number(rows[r][c], linenos[r]);
        out.labels.push_back(std::to_string(r + 1));
    }
    return out;
}

Matrix<double> align(const LabeledMatrix& m, const std::vector<std::string>& labels) {
    std::map<std::string, Eigen::Index> where;
    for (std::size_t i = 0; i < m.labels.size(); ++i) where[m.labels[i]] = static_cast<Eigen::Index>(i);
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix<double> out = Matrix<double>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            auto a = where.find(labels[static_cast<std::size_t>(i)]);
            auto b = where.find(labels[static_cast<std::size_t>(j)]);
            if (a != where.end() && b != where.end()) out(i, j) = m.values(a->second, b->second);
        }
    return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s) {
    out << "freq_hz,power\n";
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        num(out, s.frequencies[k]) << ',';
        num(out, s.power[k]) << '\n';
    }
}

void write_ttest_csv(std::ostream& out, const std::string& stat, const TTestResult& r) {
    out << "stat,t,p\n" << stat << ',';
    num(out, r.t) << ',';
    num(out, r.p) << '\n';
}

std::vector<double> read_column(std::istream& in, const std::string& column) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    std::ptrdiff_t index = -1;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (!header_seen) {
            header_seen = true;
            bool numeric = true;
            try {
                std::size_t used = 0;
                std::stod(fields.back(), &used);
                numeric = used == fields.back().size();
            } catch (const std::exception&) {
                numeric = false;
            }
            if (!numeric) {
                if (column.empty()) index = static_cast<std::ptrdiff_t>(fields.size()) - 1;
                for (std::size_t i = 0; i < fields.size(); ++i)
                    if (fields[i] == column) index = static_cast<std::ptrdiff_t>(i);
                if (index < 0) throw ParseError(lineno, "no column '" + column + "'");
                continue;
            }
            if (!column.empty()) throw ParseError(lineno, "column '" + column + "' requested but the file has no header");
            index = static_cast<std::ptrdiff_t>(fields.size()) - 1;
        }
        if (index >= static_cast<std::ptrdiff_t>(fields.size())) throw ParseError(lineno, "missing field");
        const std::string& f = fields[static_cast<std::size_t>(index)];
        if (f.empty()) continue; // undefined value
        try {
            std::size_t used = 0;
            const double v = std::stod(f, &used);
            if (used != f.size()) throw std::invalid_argument(f);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError(lineno, "not a number: '" + f + "'");
        }
    }
    return out;
}

std::vector<double> read_trace_layer_sum(std::istream& in, Layer layer, const std::string& bank) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> sums;
    const std::string want(to_string(layer));
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (lineno == 1) {
            if (f != std::vector<std::string>{"tick", "unit_id", "layer", "bank", "activation"})
                throw ParseError(lineno, "expected header tick,unit_id,layer,bank,activation");
            continue;
        }
        if (f.size() != 5) throw ParseError(lineno, "expected 5 fields");
        const double tick = to_number(f[0], lineno);
        if (tick < 0 || tick != static_cast<double>(static_cast<std::size_t>(tick))) throw ParseError(lineno, "bad tick");
        const auto t = static_cast<std::size_t>(tick);
        if (t >= sums.size()) sums.resize(t + 1, 0.0);
        if (f[2] == want && (bank.empty() || f[3] == bank)) sums[t] += to_number(f[4], lineno);
    }
    return sums;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_json(const SimulationConfig& c) {
    const auto& p = c.params;
    json j = {
        {"iterations", c.iterations},
        {"repetitions", c.repetitions},
        {"seed", c.seed},
        {"corpus", c.corpus_path},
        {"embeddings", c.embeddings_path},
        {"grammar", c.grammar_path},
        {"variant", std::string(to_string(c.variant))},
        {"eta", c.eta},
        {"components", c.components},
        {"threads", c.threads},
        {"dynamics",
         {{"gamma", p.gamma},
          {"delta", p.delta},
          {"ceiling", p.ceiling},
          {"gain_pred", p.gain_pred},
          {"gain_obj", p.gain_obj},
          {"inhibitor_return", p.inhibitor_return},
          {"active_threshold", p.active_threshold},
          {"phase_set_repeats", p.phase_set_repeats},
          {"max_ticks_per_po", p.max_ticks_per_po},
          {"inhibitor_threshold", p.inhibitor_threshold},
          {"yoke_weight", p.yoke_weight},
          {"ticks_per_word", p.ticks_per_word}}},
    };
    return j.dump(2);
}

std::string meta_json(std::uint64_t seed, const std::string& config_text) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_text);
    json j = {{"seed", seed}, {"config_hash", hash.str()}, {"version", DORA_VERSION}};
    return j.dump(2) + "\n";
}

OutputGuard::OutputGuard(std::vector<std::filesystem::path> files, bool force) : files_(std::move(files)) {
    if (!force)
        for (const auto& f : files_)
            if (std::filesystem::exists(f))
                throw std::runtime_error(f.string() + " already exists (use --force to overwrite)");
    for (const auto& f : files_)
        if (f.has_parent_path()) std::filesystem::create_directories(f.parent_path());
}

OutputGuard::~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(f, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace dora::io
