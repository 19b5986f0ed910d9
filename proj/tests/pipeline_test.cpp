#include "fixtures.hpp"

#include "dora/dataset.hpp"
#include "dora/evaluation.hpp"
#include "dora/io.hpp"
#include "dora/simulation.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

using namespace dora;

namespace fs = std::filesystem;

TEST_SUITE("corpus") {

TEST_CASE("proposition files round trip") {
    const auto a = parse_proposition_file(fixtures::kSmall);
    const auto b = parse_proposition_file(to_json(a));
    REQUIRE(a.size() == b.size());
    CHECK(corpus_sentences(a) == corpus_sentences(b));
    CHECK(a[0].top_level() == std::vector<std::size_t>{1});
    CHECK(a[1].top_level() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("surface words expand nested propositions in place") {
    const auto a = parse_proposition_file(fixtures::kSmall);
    CHECK(surface_words(a[0], 1) == syntax::Words{"men", "say", "dogs", "bite", "men"});
    CHECK(surface_words(a[1], 1) == syntax::Words{"birds"});
}

TEST_CASE("schema errors carry the offending path") {
    auto path_of = [](const char* text) {
        try {
            parse_proposition_file(text);
        } catch (const SchemaError& e) {
            return e.path();
        }
        return std::string("none");
    };
    CHECK(path_of("{}") == "$.analogs");
    CHECK(path_of(R"({"analogs":[{"name":1}]})") == "$.analogs[0].name");
    CHECK(path_of(R"({"analogs":[{"name":"a","propositions":[{"id":"p","rbs":[]}]}]})") ==
          "$.analogs[0].propositions[0].rbs");
    CHECK(path_of(R"({"analogs":[{"name":"a","propositions":[{"id":"p","rbs":[{"pred":{"prop":"p"},"obj":null}]}]}]})") ==
          "$.analogs[0].propositions[0].rbs[0].pred");
    CHECK(path_of("not json") == "$");
}

TEST_CASE("unresolved and self-embedding propositions") {
    CHECK_THROWS_AS(parse_proposition_file(
                        R"({"analogs":[{"name":"a","propositions":[{"id":"p","rbs":[{"pred":null,"obj":{"prop":"q"}}]}]}]})"),
                    ResolutionError);
    CHECK_THROWS_AS(parse_proposition_file(
                        R"({"analogs":[{"name":"a","propositions":[{"id":"p","rbs":[{"pred":null,"obj":{"prop":"p"}}]}]}]})"),
                    ResolutionError);
}

}

TEST_SUITE("dataset") {

TEST_CASE("generated corpus shape and vocabulary") {
    const auto ds = generate_dataset({});
    REQUIRE(ds.corpus.size() == 4);
    std::set<std::string> tokens;
    for (const auto& a : ds.corpus) {
        CHECK(a.propositions.size() == 8);
        std::set<std::string> own;
        for (std::size_t p = 0; p < a.propositions.size(); ++p)
            for (const auto& rb : a.propositions[p].rbs)
                for (const auto* s : {&rb.pred, &rb.obj})
                    if (s->kind == Slot::Kind::Token) {
                        own.insert(s->token);
                        tokens.insert(s->token);
                    }
        for (const auto& t : own) CHECK(ds.grammar.knows(t));
    }
    for (const auto& t : tokens) CHECK(ds.embeddings.find(t) >= 0);
    CHECK(ds.embeddings.dimension() == 300);
    const auto sentences = corpus_sentences(ds.corpus);
    CHECK(sentences.size() == 32);
    for (const auto& s : sentences) {
        const auto imgs = syntax::chart_parse(s, ds.grammar);
        REQUIRE_FALSE(imgs.empty());
        CHECK(imgs.back().theta);
    }
}

TEST_CASE("every proposition has a structural twin in every other analog") {
    const auto ds = generate_dataset({});
    const MatrixXd truth = truth_matrix(corpus_sentences(ds.corpus), ds.grammar);
    for (Eigen::Index i = 0; i < truth.rows(); ++i) {
        std::set<Eigen::Index> analogs;
        for (Eigen::Index j = 0; j < truth.cols(); ++j)
            if (truth(i, j) > 0) analogs.insert(j / 8);
        CHECK(analogs.size() == 3);
        CHECK(analogs.count(i / 8) == 0);
    }
}

TEST_CASE("generator is deterministic in its seed") {
    DatasetOptions o;
    o.seed = 5;
    o.dimension = 20;
    const auto a = generate_dataset(o);
    const auto b = generate_dataset(o);
    CHECK(to_json(a.corpus) == to_json(b.corpus));
    CHECK(a.embeddings.matrix == b.embeddings.matrix);
    o.seed = 6;
    CHECK(to_json(generate_dataset(o).corpus) != to_json(a.corpus));
}

TEST_CASE("generator argument checks") {
    DatasetOptions o;
    o.props = 7;
    CHECK_THROWS_AS(generate_dataset(o), std::invalid_argument);
    o = {};
    o.analogs = 5;
    CHECK_THROWS_AS(generate_dataset(o), std::invalid_argument);
}

TEST_CASE("presentation corpora") {
    const auto s = sentence_condition(5, 10, 1);
    REQUIRE(s.corpus.size() == 1);
    CHECK(s.corpus[0].propositions.size() == 5);
    for (std::size_t p = 0; p < 5; ++p) CHECK(surface_words(s.corpus[0], p).size() == 4);
    const auto w = scrambled_condition(7, 10, 1);
    CHECK(w.corpus[0].propositions.size() == 7);
    CHECK(w.links.dimension() == 10);
}

}

TEST_SUITE("simulation") {

TEST_CASE("a short run is reproducible and thread-count independent") {
    DatasetOptions d;
    d.dimension = 40;
    const auto ds = generate_dataset(d);
    SimulationConfig c;
    c.iterations = 5;
    c.repetitions = 3;
    c.seed = 2;
    c.threads = 1;
    const auto a = run_simulation(c, ds.corpus, ds.embeddings, ds.grammar);
    c.threads = 3;
    const auto b = run_simulation(c, ds.corpus, ds.embeddings, ds.grammar);
    REQUIRE(a.repetitions.size() == 3);
    CHECK(a.mean_precision == b.mean_precision);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(a.repetitions[r].mapping == b.repetitions[r].mapping);
        CHECK(a.repetitions[r].seed == repetition_seed(2, static_cast<int>(r)));
        CHECK((a.repetitions[r].mapping.array() >= 0.0).all());
        CHECK((a.repetitions[r].mapping.array() <= 1.0).all());
    }
    CHECK(a.baseline == doctest::Approx(96.0 / 992.0));
    CHECK(a.proposition_labels.size() == 32);
}

TEST_CASE("configuration checks") {
    SimulationConfig c;
    c.iterations = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.eta = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    const auto ds = generate_dataset({});
    std::vector<AnalogSpec> one = {ds.corpus[0]};
    CHECK_THROWS_AS(run_simulation(SimulationConfig{}, one, ds.embeddings, ds.grammar), std::invalid_argument);
}

TEST_CASE("missing tokens are reported at link preparation") {
    const auto ds = generate_dataset({});
    EmbeddingTable<double> partial;
    partial.tokens = {ds.embeddings.tokens[0], ds.embeddings.tokens[1]};
    partial.matrix = ds.embeddings.matrix.topRows(2);
    CHECK_THROWS_AS(prepare_links(partial, ds.corpus, 10), InstantiationError);
}

}

TEST_SUITE("io") {

TEST_CASE("precision csv leaves undefined values empty") {
    std::ostringstream out;
    io::write_precision_csv(out, {0.5, std::nullopt, 0.25});
    CHECK(out.str() == "iteration,precision\n1,0.5\n2,\n3,0.25\n");
    std::istringstream in(out.str());
    CHECK(io::read_column(in, "precision") == std::vector<double>{0.5, 0.25});
}

TEST_CASE("mapping csv round trips through the long form") {
    MatrixXd w(2, 2);
    w << 0, 0.125, 0.3, 1;
    std::ostringstream out;
    io::write_mapping_csv(out, w, {"a:p1", "b:p1"});
    std::istringstream in(out.str());
    const auto m = io::read_matrix(in);
    CHECK(m.labels == std::vector<std::string>{"a:p1", "b:p1"});
    CHECK(m.values == w);
    const MatrixXd aligned = io::align(m, {"b:p1", "x", "a:p1"});
    CHECK(aligned(0, 2) == 0.3);
    CHECK(aligned(1, 1) == 0.0);
}

TEST_CASE("dense matrices and malformed input") {
    std::istringstream dense("0,1\n1,0\n");
    const auto m = io::read_matrix(dense);
    CHECK(m.labels == std::vector<std::string>{"1", "2"});
    std::istringstream ragged("0,1\n1\n");
    CHECK_THROWS_AS(io::read_matrix(ragged), ParseError);
    std::istringstream bad("x\n1\nfoo\n");
    try {
        io::read_column(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("trace layer sums") {
    std::istringstream in("tick,unit_id,layer,bank,activation\n0,0,P,driver,0.5\n0,1,P,recipient,0.25\n1,0,RB,driver,1\n");
    CHECK(io::read_trace_layer_sum(in, Layer::P) == std::vector<double>{0.75, 0.0});
}

TEST_CASE("metadata hashes the configuration") {
    const std::string meta = io::meta_json(7, "{}");
    CHECK(meta.find("\"seed\": 7") != std::string::npos);
    CHECK(meta.find("config_hash") != std::string::npos);
    CHECK(io::fnv1a("") == 14695981039346656037ull);
    CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("output guard refuses to overwrite and cleans up") {
    const fs::path dir = fs::temp_directory_path() / "dora_guard_test";
    fs::remove_all(dir);
    const fs::path f = dir / "sub" / "x.csv";
    {
        io::OutputGuard g({f}, false);
        io::write_file(f, "partial");
    }
    CHECK_FALSE(fs::exists(f));
    {
        io::OutputGuard g({f}, false);
        io::write_file(f, "done");
        g.commit();
    }
    CHECK(io::read_file(f) == "done");
    CHECK_THROWS_AS(io::OutputGuard({f}, false), std::runtime_error);
    CHECK_NOTHROW(io::OutputGuard({f}, true).commit());
    fs::remove_all(dir);
}

}
