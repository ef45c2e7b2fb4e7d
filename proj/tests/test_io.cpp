#include <catch2/catch_amalgamated.hpp>

#include "qldpc/io.hpp"
#include "test_helpers.hpp"

using namespace qldpc;

TEST_CASE("code bundle round trip") {
    CssCode tor = toric_code(3);
    LogicalBasis basis = logical_basis(tor);
    json bundle = code_to_json(tor, &basis);
    CssCode back = code_from_json(bundle);
    CHECK(back.hx == tor.hx);
    CHECK(back.hz == tor.hz);
    CHECK(back.k == tor.k);
    CHECK(back.meta == "toric");
    CHECK(matrix_from_json(bundle.at("zbar")) == basis.zbar);

    // corrupted k is rejected
    bundle["k"] = 5;
    CHECK_THROWS_AS(code_from_json(bundle), ParseError);
}

TEST_CASE("bare row arrays parse as matrices") {
    json j = json::array({"101", "010"});
    CHECK(matrix_from_json(j) == BitMatrix::from_rows({"101", "010"}));
}

TEST_CASE("construct_from_json covers every family") {
    CHECK(construct_from_json(json{{"name", "toric"}, {"L", 2}}).n == 8);
    CHECK(construct_from_json(json{{"name", "surface"}, {"L", 2}}).n == 5);
    json hp{{"name", "hp"}, {"ha", json::array({"11"})}, {"hb", json::array({"11"})}};
    CHECK(construct_from_json(hp).n == 5);
    json lp{{"name", "lp"},
            {"q", 3},
            {"ba", json::array({json::array({0, 1})})},
            {"bb", json::array({json::array({0, -1})})}};
    CssCode lp_code = construct_from_json(lp);
    CHECK(lp_code.n == (2 * 2 + 1 * 1) * 3);
    json tb{{"name", "two-block"},
            {"a", json::array({"010", "001", "100"})},
            {"b", json::array({"001", "100", "010"})}};
    CHECK(construct_from_json(tb).n == 6);
    json bb{{"name", "bb"}, {"ell", 12}, {"m", 6}, {"a", "x3,y1,y2"}, {"b", "y3,x1,x2"}};
    CssCode gross = construct_from_json(bb);
    CHECK(gross.n == 144);
    CHECK(gross.k == 12);
    json tbga{{"name", "2bga"},
              {"group", json{{"kind", "dihedral"}, {"n", 3}}},
              {"sa", json::array({"a", "ab"})},
              {"sb", json::array({"b", "a2"})}};
    CHECK(construct_from_json(tbga).n == 12);
    CHECK_THROWS_AS(construct_from_json(json{{"name", "mystery"}}), ParseError);
}

TEST_CASE("monomial parsing") {
    auto mons = parse_monomials("x3,y1,y2");
    REQUIRE(mons.size() == 3);
    CHECK(mons[0].x_power == 3);
    CHECK(mons[0].y_power == 0);
    CHECK(mons[1].y_power == 1);
    auto bare = parse_monomials("x,y");
    CHECK(bare[0].x_power == 1);
    CHECK(bare[1].y_power == 1);
    CHECK_THROWS_AS(parse_monomials("q3"), ParseError);
    CHECK_THROWS_AS(parse_monomials(""), ParseError);
}

TEST_CASE("base matrix text round trip") {
    BaseMatrix b(2, 3, 5);
    b.set(0, 0, 4);
    b.set(1, 2, 0);
    std::string text = base_matrix_to_text(b);
    BaseMatrix back = base_matrix_from_text(text);
    CHECK(back.rows == 2);
    CHECK(back.cols == 3);
    CHECK(back.q == 5);
    CHECK(back.get(0, 0) == 4);
    CHECK(back.get(0, 1) == -1);
    CHECK(back.get(1, 2) == 0);
    CHECK_THROWS_AS(base_matrix_from_text("1 1\n0\n"), ParseError);
}

TEST_CASE("p grid parsing") {
    auto lin = parse_p_grid("0.1:0.3:3");
    REQUIRE(lin.size() == 3);
    CHECK(lin[0] == Catch::Approx(0.1));
    CHECK(lin[1] == Catch::Approx(0.2));
    CHECK(lin[2] == Catch::Approx(0.3));
    auto geo = parse_p_grid("0.01:1:3log");
    REQUIRE(geo.size() == 3);
    CHECK(geo[0] == Catch::Approx(0.01));
    CHECK(geo[1] == Catch::Approx(0.1));
    CHECK(geo[2] == Catch::Approx(1.0));
    auto list = parse_p_grid("0.01,0.05");
    REQUIRE(list.size() == 2);
    CHECK(list[1] == Catch::Approx(0.05));
    CHECK_THROWS_AS(parse_p_grid(""), ParseError);
}

TEST_CASE("circuit text dump for the four-qubit example code") {
    CssCode code = validate_css(BitMatrix::from_rows({"1010", "0101"}),
                                BitMatrix::from_rows({"0101", "1010"}));
    std::string text = circuit_to_text(build_sm_circuit(code));
    CHECK(text ==
          "INIT_X 4\nINIT_X 5\nINIT_Z 6\nINIT_Z 7\n"
          "TICK\nCX 4 0\nCX 5 1\n"
          "TICK\nCX 4 2\nCX 5 3\nCX 1 6\nCX 0 7\n"
          "TICK\nCX 3 6\nCX 2 7\n"
          "TICK\nM_X 4\nM_X 5\nM_Z 6\nM_Z 7\n");
}

TEST_CASE("detector model JSON shape") {
    CssCode code = toric_code(2);
    SmCircuit c = build_sm_circuit(code);
    FaultMaps maps = derive_fault_maps(c);
    CircuitPriors pri;
    pri.p = 0.01;
    DetectorModel model = build_detector_model(c, maps, 2, pri, code);
    json j = detector_model_to_json(model);
    CHECK(j.at("rounds") == 2);
    CHECK(j.at("closure") == true);
    for (const char* side : {"x", "z"}) {
        CHECK(j.at(side).contains("h_det"));
        CHECK(j.at(side).at("priors").size() == j.at(side).at("provenance").size());
        BitMatrix h = matrix_from_json(j.at(side).at("h_det"));
        CHECK(h.rows() == 3 * code.hz.rows());
    }
}

TEST_CASE("experiment spec parsing") {
    json spec_json = json::parse(R"({
      "code": {"construct": {"name": "toric", "L": 3}},
      "noise": {"tier": "phenomenological", "p": 0.01, "q_syn": 0.005, "rounds": 4},
      "decoder": {"alg": "nms", "norm": 0.85, "iters": 64, "schedule": "serial", "osd0": true},
      "trials": 1234,
      "seed": 99,
      "stop": {"rule": "target-failures", "failures": 42}
    })");
    ExperimentSpec spec = experiment_from_json(spec_json);
    CHECK(spec.code.n == 18);
    CHECK(spec.noise.tier == NoiseTier::Phenomenological);
    CHECK(spec.noise.q_syn == Catch::Approx(0.005));
    CHECK(spec.noise.rounds == 4);
    CHECK(spec.algorithm == Algorithm::NormalizedMinSum);
    CHECK(spec.normalization == Catch::Approx(0.85));
    CHECK(spec.max_iters == 64);
    CHECK(spec.schedule == ScheduleSpec::Serial);
    CHECK(spec.osd0);
    CHECK(spec.trials == 1234);
    CHECK(spec.seed == 99);
    CHECK(spec.stop.kind == StopRule::Kind::TargetFailures);
    CHECK(spec.stop.target_failures == 42);
    CHECK_THROWS_AS(
        experiment_from_json(json::parse(R"({"code":{"construct":{"name":"toric","L":2}},
          "noise":{"tier":"warp"}, "decoder":{}})")),
        ParseError);
}

TEST_CASE("matrix file io") {
    CssCode tor = toric_code(2);
    std::string path = "io_test_matrix.txt";
    write_file(path, tor.hz.to_text());
    CHECK(BitMatrix::from_text(read_file(path)) == tor.hz);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("definitely_missing_file.txt"), ParseError);
}
