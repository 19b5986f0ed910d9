#include "dora/embeddings.hpp"
#include "dora/rng.hpp"

#include <doctest.h>

#include <sstream>

using namespace dora;

namespace {

// Three labeled clusters of eight tokens in 50 dimensions.
EmbeddingTable<double> toy_clusters(std::vector<int>& label, std::uint64_t seed = 21) {
    Rng rng(seed);
    const int dim = 50, per = 8;
    std::vector<VectorXd> centers;
    for (int c = 0; c < 3; ++c) {
        VectorXd v(dim);
        for (int k = 0; k < dim; ++k) v(k) = 2.0 * rng.normal();
        centers.push_back(v);
    }
    EmbeddingTable<double> t;
    t.matrix.resize(3 * per, dim);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < per; ++i) {
            const int r = c * per + i;
            t.tokens.push_back("c" + std::to_string(c) + "_" + std::to_string(i));
            for (int k = 0; k < dim; ++k) t.matrix(r, k) = centers[static_cast<std::size_t>(c)](k) + rng.normal();
            label.push_back(c);
        }
    return t;
}

} // namespace

TEST_SUITE("embeddings") {

TEST_CASE("loader accepts an optional header and rejects malformed rows") {
    const auto t = load_embeddings_text("2 3\nfoo 1 2 3\nbar 4 5 6\n");
    CHECK(t.size() == 2);
    CHECK(t.dimension() == 3);
    CHECK(t.find("bar") == 1);
    CHECK(t.find("baz") == -1);
    CHECK(load_embeddings_text("foo 1 2\nbar 3 4\n").dimension() == 2);
    CHECK_THROWS_AS(load_embeddings_text("foo 1 2\nbar 3\n"), ParseError);
    CHECK_THROWS_AS(load_embeddings_text("foo 1 x\n"), ParseError);
    CHECK_THROWS_AS(load_embeddings_text("foo 1 2\nfoo 3 4\n"), ParseError);
}

TEST_CASE("write and load round trip exactly") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    std::ostringstream out;
    write_embeddings(out, t);
    const auto back = load_embeddings_text(out.str());
    CHECK(back.tokens == t.tokens);
    CHECK(back.matrix == t.matrix);
}

TEST_CASE("reduced tables keep p columns and exact eigenpairs") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    const auto [reduced, proj] = reduce_dimensions(t, 10);
    CHECK(reduced.dimension() == 10);
    CHECK(reduced.size() == t.size());
    CHECK(reduced.stage == EmbeddingStage::Reduced);
    const MatrixXd r = column_correlation(t.matrix);
    for (Eigen::Index i = 0; i < proj.p; ++i) {
        const VectorXd e = proj.projection.col(i);
        CHECK((r * e - proj.eigenvalues(i) * e).norm() < 1e-8);
        CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-12));
        if (i > 0) CHECK(proj.eigenvalues(i) <= proj.eigenvalues(i - 1));
    }
    CHECK((proj.projection.transpose() * proj.projection - MatrixXd::Identity(10, 10)).norm() < 1e-10);
    CHECK(reduced.matrix.isApprox(t.matrix * proj.projection));
}

TEST_CASE("correlation matrix matches a direct Pearson computation") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    const MatrixXd r = column_correlation(t.matrix);
    const auto n = static_cast<double>(t.size());
    for (Eigen::Index a : {0, 7, 31})
        for (Eigen::Index b : {3, 7, 49}) {
            const VectorXd x = t.matrix.col(a), y = t.matrix.col(b);
            const double mx = x.sum() / n, my = y.sum() / n;
            double sxy = 0, sxx = 0, syy = 0;
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                sxy += (x(k) - mx) * (y(k) - my);
                sxx += (x(k) - mx) * (x(k) - mx);
                syy += (y(k) - my) * (y(k) - my);
            }
            CHECK(r(a, b) == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-12));
        }
}

TEST_CASE("constant columns are reported and stay finite") {
    EmbeddingTable<double> t;
    t.tokens = {"a", "b", "c"};
    t.matrix.resize(3, 3);
    t.matrix << 1, 5, 2, 2, 5, 7, 3, 5, 1;
    std::vector<Eigen::Index> constant;
    const auto [reduced, proj] = reduce_dimensions(t, 2, &constant);
    CHECK(constant == std::vector<Eigen::Index>{1});
    CHECK(reduced.matrix.allFinite());
    std::vector<Eigen::Index> flat;
    const auto links = normalize_for_links(t, 1e-3, &flat);
    CHECK(flat == std::vector<Eigen::Index>{1});
    CHECK(links.matrix.allFinite());
}

TEST_CASE("link-ready rows are unit length with entries in (0,1)") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    const auto links = normalize_for_links(reduce_dimensions(t, 10).first);
    CHECK(links.stage == EmbeddingStage::LinkReady);
    CHECK(links.dimension() == 10);
    for (Eigen::Index r = 0; r < links.size(); ++r) {
        CHECK(std::abs(links.matrix.row(r).norm() - 1.0) < 1e-9);
        CHECK((links.matrix.row(r).array() > 0.0).all());
        CHECK((links.matrix.row(r).array() < 1.0).all());
    }
}

TEST_CASE("categories cluster in the reduced space") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    const auto reduced = reduce_dimensions(t, 10).first;
    const MatrixXd s = similarity_matrix(reduced);
    double within = 0, cross = 0;
    int nw = 0, nc = 0;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            if (i == j) continue;
            if (label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]) {
                within += s(i, j);
                ++nw;
            } else {
                cross += s(i, j);
                ++nc;
            }
        }
    CHECK(within / nw > cross / nc);
    CHECK(s.diagonal().isOnes());
    CHECK(s.isApprox(s.transpose()));
}

TEST_CASE("float tables work through the same pipeline") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    EmbeddingTable<float> f;
    f.tokens = t.tokens;
    f.matrix = t.matrix.cast<float>();
    const auto links = normalize_for_links(reduce_dimensions(f, 5).first);
    CHECK(links.dimension() == 5);
    for (Eigen::Index r = 0; r < links.size(); ++r) CHECK(std::abs(links.matrix.row(r).norm() - 1.0f) < 1e-5f);
}

TEST_CASE("bad reduction requests") {
    std::vector<int> label;
    const auto t = toy_clusters(label);
    CHECK_THROWS_AS(reduce_dimensions(t, 0), std::invalid_argument);
    CHECK_THROWS_AS(reduce_dimensions(t, 51), std::invalid_argument);
}

}
