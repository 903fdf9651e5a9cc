#include "asbench/config.hpp"
#include "asbench/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace asbench;

TEST_CASE("default config matches the reference experiment") {
    const BenchConfig c;
    CHECK(c.dim == 5);
    CHECK(c.instances_per_class == 15);
    CHECK(c.budget() == 5000);
    CHECK(c.train_repetitions == 30);
    CHECK(c.truth_repetitions == 100);
    CHECK(c.samples_per_dim == 250);
    CHECK(c.noninf_count == kElaFeatureCount);
    CHECK(c.forest.n_trees == 100);
    CHECK(c.lio_repeats == 10);
}

TEST_CASE("INI round trip and overrides") {
    BenchConfig c;
    c.master_seed = 99;
    c.scale_factors = {0.5, 2.0};
    c.forest.max_features = 0.25;
    c.feature_sets = {FeatureSet::Class};
    const auto back = parse_config(to_ini(c));
    CHECK(to_ini(back) == to_ini(c));
    CHECK(config_digest(back) == config_digest(c));

    const auto parsed = parse_config("[suite]\ndim = 3\n\n[forest]\nn_trees = 10\nbootstrap = false\n");
    CHECK(parsed.dim == 3);
    CHECK(parsed.forest.n_trees == 10);
    CHECK_FALSE(parsed.forest.bootstrap);
    CHECK(parsed.instances_per_class == 15);

    set_config_value(c, "portfolio.train_repetitions", "7");
    CHECK(c.train_repetitions == 7);
    CHECK_THROWS(set_config_value(c, "portfolio.colour", "red"));
    CHECK_THROWS(set_config_value(c, "suite.dim", "five"));
}

TEST_CASE("config validation") {
    CHECK_THROWS(parse_config("[suite]\ninstances_per_class = 0\n"));
    CHECK_THROWS(parse_config("[splits]\nlio_test_fraction = 1.5\n"));
    CHECK_THROWS(parse_config("[audit]\nscale_factors = 1,-2\n"));
    CHECK_THROWS(parse_config("[nowhere]\nkey = 1\n"));
    CHECK_THROWS(parse_config("[suite\n"));
}

TEST_CASE("digests track only result-relevant keys") {
    BenchConfig a;
    BenchConfig b;
    b.output_dir = "/elsewhere";
    b.threads = 3;
    CHECK(config_digest(a) == config_digest(b));
    b.forest.n_trees = 50;
    CHECK(config_digest(a) != config_digest(b));
    const auto da = stage_digests(a);
    const auto db = stage_digests(b);
    CHECK(da.at("runs-train") == db.at("runs-train"));
    CHECK(da.at("features-ela") == db.at("features-ela"));
    CHECK(da.at("audit") != db.at("audit"));
    b = a;
    b.noninf_count = 10;
    CHECK(stage_digests(b).at("features-ela") == da.at("features-ela"));
    CHECK(stage_digests(b).at("features-noninf") != da.at("features-noninf"));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("runs CSV round trip is exact") {
    const auto table = run_portfolio({make_instance(2, 1, 5), make_instance(9, 2, 5)}, 1000, 2, 4);
    std::stringstream ss;
    write_runs_csv(ss, table);
    const auto header = ss.str().substr(0, ss.str().find('\n'));
    CHECK(header == "class_id,instance_id,algorithm,repetition,seed,best_f,evals_used,scale_factor,precision");
    const auto back = read_runs_csv(ss);
    CHECK(back.records() == table.records());
    CHECK(back.repetitions() == 2);
}

TEST_CASE("features and targets CSV round trip") {
    std::vector<InstanceFeatures> rows = {{1, 1, {}}, {1, 2, {}}};
    for (auto &r : rows) {
        r.features.set = FeatureSet::Scale;
        r.features.add("f_scale", 0.1 * r.instance_id + 1e-17);
        r.features.add("other", -3.25e200);
    }
    std::stringstream fs;
    write_features_csv(fs, rows);
    const auto fb = read_features_csv(fs, FeatureSet::Scale);
    REQUIRE(fb.size() == 2);
    CHECK(fb[1].features.values == rows[1].features.values);
    CHECK(fb[1].features.names == rows[1].features.names);

    TargetTable t;
    t.kind = TargetKind::Precision;
    t.values[{3, 4}] = {0.1, 0.2, 1e-300, 5e10, 0.0};
    std::stringstream ts;
    write_targets_csv(ts, t);
    const auto tb = read_targets_csv(ts);
    CHECK(tb.kind == TargetKind::Precision);
    CHECK(tb.values == t.values);
}

TEST_CASE("malformed CSV reports the line") {
    std::stringstream bad("class_id,instance_id,algorithm,repetition,seed,best_f,evals_used,scale_factor,precision\n"
                          "1,1,GA,0,5,1.0,100,1,0.5\n"
                          "1,1,GA,1,5,abc,100,1,0.5\n");
    try {
        read_runs_csv(bad, "runs.csv");
        FAIL("no exception");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("runs.csv:3") != std::string::npos);
    }
    std::stringstream wrong("a,b\n1,2\n");
    CHECK_THROWS_AS(read_runs_csv(wrong), ParseError);
    std::stringstream partial("class_id,instance_id,algorithm,kind,value\n1,1,GA,rank,2\n");
    CHECK_THROWS_AS(read_targets_csv(partial), ParseError);
}
