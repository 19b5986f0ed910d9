#pragma once

// Word-vector tables and the PCA / link-weight pipeline. Everything here is
// templated on the scalar type; double is what the simulator uses.

#include "dora/common.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace dora {

enum class EmbeddingStage { Raw, Reduced, LinkReady };

template <typename Scalar>
struct EmbeddingTable {
    std::vector<std::string> tokens;
    Matrix<Scalar> matrix; // one row per token
    EmbeddingStage stage = EmbeddingStage::Raw;

    Eigen::Index size() const { return matrix.rows(); }
    Eigen::Index dimension() const { return matrix.cols(); }

    // -1 when absent.
    Eigen::Index find(const std::string& token) const {
        if (index_.size() != tokens.size()) reindex();
        auto it = index_.find(token);
        return it == index_.end() ? -1 : it->second;
    }

private:
    void reindex() const {
        index_.clear();
        for (std::size_t i = 0; i < tokens.size(); ++i) index_.emplace(tokens[i], static_cast<Eigen::Index>(i));
    }
    mutable std::unordered_map<std::string, Eigen::Index> index_;
};

template <typename Scalar>
struct PCAProjection {
    Vector<Scalar> eigenvalues; // descending
    Matrix<Scalar> projection;  // k x p, columns are eigenvectors
    Eigen::Index p = 0;
};

namespace detail {

template <typename Scalar>
bool parse_number(std::string_view field, Scalar& out) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) return false;
    out = static_cast<Scalar>(v);
    return true;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

// Sign convention: the largest-magnitude component of v is positive.
template <typename Derived>
void canonical_sign(Eigen::MatrixBase<Derived>&& v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0) v = -v;
}

} // namespace detail

// Optional "<n> <k>" header, then "<token> <v1> ... <vk>" per line.
template <typename Scalar = double>
EmbeddingTable<Scalar> load_embeddings(std::istream& in) {
    EmbeddingTable<Scalar> table;
    std::vector<std::vector<Scalar>> rows;
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    long dim = -1;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (lineno == 1 && fields.size() == 2) {
            Scalar a{}, b{};
            if (detail::parse_number(fields[0], a) && detail::parse_number(fields[1], b) && a == std::floor(a) &&
                b == std::floor(b)) {
                dim = static_cast<long>(b);
                continue;
            }
        }
        if (fields.size() < 2) throw ParseError(lineno, "expected a token followed by values");
        const long k = static_cast<long>(fields.size()) - 1;
        if (dim < 0) dim = k;
        if (k != dim)
            throw ParseError(lineno, "expected " + std::to_string(dim) + " values, found " + std::to_string(k));
        std::string token(fields[0]);
        if (!seen.emplace(token, rows.size()).second) throw ParseError(lineno, "duplicate token '" + token + "'");
        std::vector<Scalar> row(static_cast<std::size_t>(k));
        for (long c = 0; c < k; ++c)
            if (!detail::parse_number(fields[static_cast<std::size_t>(c) + 1], row[static_cast<std::size_t>(c)]))
                throw ParseError(lineno, "non-numeric value '" + std::string(fields[static_cast<std::size_t>(c) + 1]) + "'");
        table.tokens.push_back(std::move(token));
        rows.push_back(std::move(row));
    }
    table.matrix.resize(static_cast<Eigen::Index>(rows.size()), std::max<long>(dim, 0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (long c = 0; c < dim; ++c) table.matrix(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    return table;
}

template <typename Scalar = double>
EmbeddingTable<Scalar> load_embeddings_text(const std::string& text) {
    std::istringstream in(text);
    return load_embeddings<Scalar>(in);
}

template <typename Scalar>
void write_embeddings(std::ostream& out, const EmbeddingTable<Scalar>& table) {
    out.precision(17);
    out << table.size() << ' ' << table.dimension() << '\n';
    for (Eigen::Index r = 0; r < table.size(); ++r) {
        out << table.tokens[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < table.dimension(); ++c) out << ' ' << table.matrix(r, c);
        out << '\n';
    }
}

// Pearson correlation between the columns of x. Zero-variance columns
// correlate 0 with everything, including themselves.
template <typename Derived>
Matrix<typename Derived::Scalar> column_correlation(const Eigen::MatrixBase<Derived>& x,
                                                    std::vector<Eigen::Index>* constant = nullptr) {
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> centered = x.rowwise() - x.colwise().mean();
    Vector<Scalar> norms = centered.colwise().norm().transpose();
    for (Eigen::Index c = 0; c < norms.size(); ++c) {
        if (norms(c) <= std::numeric_limits<Scalar>::epsilon() * (1 + x.col(c).cwiseAbs().maxCoeff())) {
            if (constant) constant->push_back(c);
            centered.col(c).setZero();
        } else {
            centered.col(c) /= norms(c);
        }
    }
    return centered.transpose() * centered;
}

// PCA on the correlation matrix; rows are projected as y = W^T x.
template <typename Scalar>
std::pair<EmbeddingTable<Scalar>, PCAProjection<Scalar>> reduce_dimensions(const EmbeddingTable<Scalar>& table,
                                                                          Eigen::Index p,
                                                                          std::vector<Eigen::Index>* constant = nullptr) {
    if (table.size() < 2) throw std::invalid_argument("reduce_dimensions: need at least two rows");
    if (p < 1 || p > table.dimension()) throw std::invalid_argument("reduce_dimensions: p must lie in [1, k]");
    Matrix<Scalar> r = column_correlation(table.matrix, constant);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(r);
    if (es.info() != Eigen::Success) throw std::runtime_error("reduce_dimensions: eigendecomposition failed");
    const Eigen::Index k = r.rows();
    PCAProjection<Scalar> proj;
    proj.p = p;
    // Eigen sorts ascending.
    proj.eigenvalues = es.eigenvalues().reverse().head(p);
    proj.projection.resize(k, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        proj.projection.col(i) = es.eigenvectors().col(k - 1 - i);
        detail::canonical_sign(proj.projection.col(i));
    }
    EmbeddingTable<Scalar> out;
    out.tokens = table.tokens;
    out.matrix = table.matrix * proj.projection;
    out.stage = EmbeddingStage::Reduced;
    return {std::move(out), std::move(proj)};
}

// Per-dimension min-max into [eps, 1 - eps], then unit L2 rows. Constant
// dimensions map to 0.5.
template <typename Scalar>
EmbeddingTable<Scalar> normalize_for_links(const EmbeddingTable<Scalar>& table, Scalar eps = Scalar(1e-3),
                                           std::vector<Eigen::Index>* constant = nullptr) {
    EmbeddingTable<Scalar> out;
    out.tokens = table.tokens;
    out.matrix = table.matrix;
    for (Eigen::Index c = 0; c < out.matrix.cols(); ++c) {
        auto col = out.matrix.col(c);
        const Scalar lo = col.minCoeff();
        const Scalar hi = col.maxCoeff();
        if (!(hi > lo)) {
            if (constant) constant->push_back(c);
            col.setConstant(Scalar(0.5));
        } else {
            col = ((col.array() - lo) / (hi - lo) * (1 - 2 * eps) + eps).matrix();
        }
    }
    out.matrix.rowwise().normalize();
    out.stage = EmbeddingStage::LinkReady;
    return out;
}

// Pearson correlation between rows. Zero-variance rows correlate 0 with
// everything except themselves.
template <typename Scalar>
Matrix<Scalar> similarity_matrix(const EmbeddingTable<Scalar>& table) {
    if (table.size() < 2) throw std::invalid_argument("similarity_matrix: need at least two tokens");
    Matrix<Scalar> s = column_correlation(table.matrix.transpose());
    s.diagonal().setOnes();
    return s;
}

// CSV with the tokens as header row and first column.
template <typename Scalar>
void write_similarity_csv(std::ostream& out, const EmbeddingTable<Scalar>& table, const Matrix<Scalar>& sim) {
    out << "token";
    for (const auto& t : table.tokens) out << ',' << t;
    out << '\n';
    for (Eigen::Index r = 0; r < sim.rows(); ++r) {
        out << table.tokens[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < sim.cols(); ++c) out << ',' << sim(r, c);
        out << '\n';
    }
}

} // namespace dora
