#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beurlab/experiments.hpp"

using namespace beurlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig c;
    c.id = "beta";
    CHECK_NOTHROW(c.validate());

    ExperimentConfig bad_id = c;
    bad_id.id = "nonsense";
    CHECK_THROWS_AS(bad_id.validate(), std::invalid_argument);

    ExperimentConfig bad_depth = c;
    bad_depth.depth = 9;
    CHECK_THROWS_AS(bad_depth.validate(), std::invalid_argument);

    ExperimentConfig bad_threads = c;
    bad_threads.threads = 0;
    CHECK_THROWS_AS(bad_threads.validate(), std::invalid_argument);

    ExperimentConfig bad_tol = c;
    bad_tol.params = {{"series_tol", -1.0}};
    CHECK_THROWS_AS(bad_tol.validate(), std::invalid_argument);

    ExperimentConfig nested_tol = c;
    nested_tol.params = {{"inner", {{"rel_tol", 0.0}}}};
    CHECK_THROWS_AS(nested_tol.validate(), std::invalid_argument);

    ExperimentConfig missing_file = c;
    missing_file.params = {{"samples_file", "/no/such/file.json"}};
    CHECK_THROWS_AS(missing_file.validate(), std::invalid_argument);
}

TEST_CASE("config hash covers inputs but not the output directory") {
    ExperimentConfig a;
    a.id = "beta";
    a.seed = 42;
    ExperimentConfig b = a;
    CHECK(a.hash() == b.hash());
    b.seed = 43;
    CHECK(a.hash() != b.hash());
    b = a;
    b.out_dir = "somewhere/else";
    CHECK(a.hash() == b.hash());
    b = a;
    b.params = {{"n", 3}};
    CHECK(a.hash() != b.hash());
}

TEST_CASE("config file round trip") {
    const fs::path dir = fs::temp_directory_path() / "beurlab_cfg_test";
    fs::create_directories(dir);
    const fs::path file = dir / "cfg.json";
    {
        std::ofstream out(file);
        out << R"({"id": "whitney", "seed": 7, "depth": 1, "params": {"cw": 0.5}})";
    }
    const ExperimentConfig c = ExperimentConfig::from_file(file.string());
    CHECK(c.id == "whitney");
    CHECK(c.seed == 7);
    CHECK(c.depth == 1);
    CHECK(c.params.at("cw").get<double>() == doctest::Approx(0.5));
    CHECK_THROWS_AS(ExperimentConfig::from_file("/no/such/cfg.json"), std::invalid_argument);
    {  // experiment parameters at the top level are a config mistake, not a default run
        std::ofstream out(file);
        out << R"({"id": "appendix", "domains": ["disk"]})";
    }
    CHECK_THROWS_AS(ExperimentConfig::from_file(file.string()), std::invalid_argument);
}

TEST_CASE("domain specs parse") {
    CHECK(domain_from_json(json()).contains({0.0, 0.0}));
    const json disk = {{"type", "disk"}, {"center", {1.0, 0.0}}, {"radius", 0.5}};
    CHECK(domain_from_json(disk).contains({1.2, 0.0}));
    const json sq = {{"type", "square"}, {"half_side", 2.0}};
    CHECK(domain_from_json(sq).contains({1.5, 1.5}));
    const json hp = {{"type", "half_plane"}};
    CHECK(domain_from_json(hp).contains({100.0, 0.5}));
    const json gr = {{"type", "graph"}, {"kind", "sine_bump"}, {"eps", 0.1}, {"R", 1.0}};
    CHECK(domain_from_json(gr).contains({0.0, 0.5}));
    const json pg = {{"type", "poly_graph"}, {"coeffs", {0.0, 0.5}}};
    CHECK(domain_from_json(pg).contains({1.0, 1.0}));
    CHECK_THROWS_AS(domain_from_json(json{{"type", "torus"}}), std::invalid_argument);
}

TEST_CASE("bump constructors satisfy the graph-class invariants") {
    const DefiningFunction s = sine_bump(0.2, 1.0);
    CHECK_NOTHROW(s.certify(1e-6));
    CHECK(s(0.0) == doctest::Approx(0.0));
    CHECK(s(0.5) == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(s(2.0) == doctest::Approx(0.0));

    const DefiningFunction pb = poly_bump(0.2, 1.0, 2);
    CHECK_NOTHROW(pb.certify(1e-6));
    CHECK(pb(0.0) == doctest::Approx(0.0));
    CHECK(pb(3.0) == doctest::Approx(0.0));
    CHECK(pb.smoothness() == 2);
}

TEST_CASE("function corpus has twenty distinct entries") {
    const auto corpus = function_corpus();
    REQUIRE(corpus.size() == 20);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = i + 1; j < corpus.size(); ++j)
            CHECK(corpus[i].first != corpus[j].first);
    // all evaluable on [-1, 1]
    for (const auto& [name, f] : corpus) CHECK(std::isfinite(f(0.37)));
}

TEST_CASE("beta experiment writes deterministic outputs") {
    const fs::path base = fs::temp_directory_path() / "beurlab_exp_test";
    fs::remove_all(base);
    ExperimentConfig c;
    c.id = "beta";
    c.params = {{"levels", 3}};
    c.out_dir = (base / "run1").string();
    const ExperimentReport r1 = run_experiment(c);
    c.out_dir = (base / "run2").string();
    const ExperimentReport r2 = run_experiment(c);

    REQUIRE(r1.csv_paths.size() == 1);
    CHECK(slurp(r1.csv_paths.front()) == slurp(r2.csv_paths.front()));
    CHECK(slurp(base / "run1" / "beta_summary.json") ==
          slurp(base / "run2" / "beta_summary.json"));
    CHECK(r1.config_hash == r2.config_hash);

    // summary carries provenance and scalars
    CHECK(r1.summary.at("provenance").at("library_version").get<std::string>() ==
          std::string(kVersion));
    CHECK(r1.has_scalar("besov_beta_value"));
    CHECK(r1.scalar("interval_count").value > 0.0);
    CHECK_THROWS_AS(r1.scalar("no_such"), std::out_of_range);

    // CSV header carries the config hash
    const std::string csv = slurp(r1.csv_paths.front());
    CHECK(csv.rfind("# beta_coefficients | config ", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("whitney experiment emits clean invariants") {
    const fs::path base = fs::temp_directory_path() / "beurlab_whitney_test";
    fs::remove_all(base);
    ExperimentConfig c;
    c.id = "whitney";
    c.out_dir = base.string();
    const ExperimentReport r = run_experiment(c);
    CHECK(r.scalar("distance_failures").value == 0.0);
    CHECK(r.scalar("neighbor_failures").value == 0.0);
    CHECK(r.scalar("disjoint").value == 1.0);
    CHECK(r.scalar("cube_count").value > 50.0);
    CHECK(!r.scalar("cube_count").flagged);
    fs::remove_all(base);
}

TEST_CASE("dispatch rejects unknown ids") {
    ExperimentConfig c;
    c.id = "wrong";
    CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
    CHECK(experiment_ids().size() == 11);
}
