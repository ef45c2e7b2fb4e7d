#include <catch2/catch_amalgamated.hpp>

#include "qldpc/construct.hpp"
#include "qldpc/sim.hpp"
#include "test_helpers.hpp"

using namespace qldpc;

namespace {

ExperimentSpec toric_spec(size_t L, double p, size_t trials, uint64_t seed) {
    ExperimentSpec spec;
    spec.code = toric_code(L);
    spec.noise.tier = NoiseTier::CodeCapacity;
    spec.noise.p = p;
    spec.normalization = 0.85;
    spec.max_iters = 100;
    spec.trials = trials;
    spec.seed = seed;
    spec.stop.kind = StopRule::Kind::FixedTrials;  // exact counts for the tests
    return spec;
}

}  // namespace

TEST_CASE("wilson interval closed forms") {
    auto [lo0, hi0] = wilson_interval(0, 100);
    CHECK(lo0 == Catch::Approx(0.0).margin(1e-12));
    const double z = 1.959963984540054;
    CHECK(hi0 == Catch::Approx(z * z / (100 + z * z)));
    auto [lo1, hi1] = wilson_interval(100, 100);
    CHECK(hi1 == Catch::Approx(1.0).margin(1e-12));
    auto [lo, hi] = wilson_interval(5, 10);
    CHECK(lo == Catch::Approx(0.236506).margin(1e-4));
    CHECK(hi == Catch::Approx(0.763494).margin(1e-4));
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
}

TEST_CASE("p = 0 gives zero logical error rate across tiers") {
    for (NoiseTier tier :
         {NoiseTier::CodeCapacity, NoiseTier::Phenomenological, NoiseTier::CircuitLevel}) {
        ExperimentSpec spec = toric_spec(2, 0.0, 64, 1);
        spec.noise.tier = tier;
        spec.noise.rounds = tier == NoiseTier::CodeCapacity ? 1 : 2;
        SummaryRow row = run_experiment(spec);
        CHECK(row.failures == 0);
        CHECK(row.ler == 0.0);
        CHECK(row.trials == 64);
    }
}

TEST_CASE("experiments require k >= 1") {
    ExperimentSpec spec;
    spec.code = validate_css(BitMatrix::from_rows({"1010", "0101"}),
                             BitMatrix::from_rows({"0101", "1010"}));
    spec.noise.p = 0.1;
    spec.trials = 10;
    CHECK_THROWS_AS(run_experiment(spec), EmptyLogicalSpace);
}

TEST_CASE("toric code decodes well below threshold") {
    SummaryRow row = run_experiment(toric_spec(3, 0.01, 4000, 99));
    CHECK(row.trials == 4000);
    CHECK(row.ler < 0.01);
    CHECK(row.conv_rate > 0.99);
    CHECK(row.ler_lo <= row.ler);
    CHECK(row.ler <= row.ler_hi);
}

TEST_CASE("singleton sweep equals run_experiment") {
    ExperimentSpec spec = toric_spec(2, 0.05, 512, 7);
    SummaryRow single = run_experiment(spec);
    std::vector<SummaryRow> rows = sweep(spec, {0.05});
    REQUIRE(rows.size() == 1);
    CHECK(to_csv_row(rows[0]) == to_csv_row(single));
}

TEST_CASE("byte-identical CSV across worker counts") {
    ExperimentSpec spec = toric_spec(2, 0.08, 1500, 21);
    std::vector<double> grid{0.04, 0.08};
    std::string csv1 = to_csv(sweep(spec, grid, 1));
    std::string csv4 = to_csv(sweep(spec, grid, 4));
    std::string csv16 = to_csv(sweep(spec, grid, 16));
    CHECK(csv1 == csv4);
    CHECK(csv1 == csv16);
}

TEST_CASE("default stop rule targets 100 failures") {
    ExperimentSpec spec = toric_spec(2, 0.2, 50000, 8);
    spec.stop = StopRule{};  // default: target-failures(100)
    SummaryRow row = run_experiment(spec);
    CHECK(row.failures >= 100);
    CHECK(row.trials < 50000);
}

TEST_CASE("target-failures stop rule is worker-count independent") {
    ExperimentSpec spec = toric_spec(2, 0.15, 100000, 33);
    spec.stop.kind = StopRule::Kind::TargetFailures;
    spec.stop.target_failures = 50;
    SummaryRow a = run_experiment(spec, 1);
    SummaryRow b = run_experiment(spec, 8);
    CHECK(to_csv_row(a) == to_csv_row(b));
    CHECK(a.failures >= 50);
    CHECK(a.trials < 100000);  // stopped early
}

TEST_CASE("disjoint seeds give statistically compatible estimates") {
    SummaryRow a = run_experiment(toric_spec(2, 0.12, 4000, 1001));
    SummaryRow b = run_experiment(toric_spec(2, 0.12, 4000, 2002));
    CHECK(a.ler_lo < b.ler_hi);
    CHECK(b.ler_lo < a.ler_hi);
    // and the samples genuinely differ
    CHECK(to_csv_row(a) != to_csv_row(b));
}

TEST_CASE("ler grows with p below threshold") {
    std::vector<SummaryRow> rows = sweep(toric_spec(3, 0.0, 3000, 5), {0.02, 0.06, 0.12});
    CHECK(rows[0].ler < rows[1].ler);
    CHECK(rows[1].ler < rows[2].ler);
}

TEST_CASE("noise-tier degeneration chain is trial-exact") {
    // code capacity vs pre-round-data-only circuit level vs q_syn=0
    // phenomenological: identical outcomes trial by trial
    ExperimentSpec base = toric_spec(2, 0.06, 1, 77);

    ExperimentSpec circuit = base;
    circuit.noise.tier = NoiseTier::CircuitLevel;
    circuit.noise.rounds = 1;
    circuit.noise.data_first_boundary_only = true;

    ExperimentSpec phenom = base;
    phenom.noise.tier = NoiseTier::Phenomenological;
    phenom.noise.q_syn = 0.0;
    phenom.noise.rounds = 1;

    PointRunner cc_runner(base, 0.06);
    PointRunner ckt_runner(circuit, 0.06);
    PointRunner ph_runner(phenom, 0.06);
    auto cc_state = cc_runner.make_worker();
    auto ckt_state = ckt_runner.make_worker();
    auto ph_state = ph_runner.make_worker();
    uint64_t ps = point_seed(77, 0);
    for (size_t t = 0; t < 400; ++t) {
        TrialRecord cc = cc_runner.run_trial(cc_state, ps, t);
        TrialRecord ck = ckt_runner.run_trial(ckt_state, ps, t);
        TrialRecord ph = ph_runner.run_trial(ph_state, ps, t);
        CHECK(cc.x_outcome == ck.x_outcome);
        CHECK(cc.z_outcome == ck.z_outcome);
        CHECK(cc.iterations == ck.iterations);
        CHECK(cc.x_outcome == ph.x_outcome);
        CHECK(cc.z_outcome == ph.z_outcome);
        CHECK(cc.iterations == ph.iterations);
    }
}

TEST_CASE("multi-round tiers run end to end") {
    ExperimentSpec spec = toric_spec(2, 0.01, 300, 11);
    spec.osd0 = true;

    spec.noise.tier = NoiseTier::Phenomenological;
    spec.noise.q_syn = 0.01;
    spec.noise.rounds = 3;
    SummaryRow ph = run_experiment(spec);
    CHECK(ph.trials == 300);
    CHECK(ph.ler < 0.5);

    // distance 2 and ~144 fault sites per round: keep p low enough that
    // multi-fault trials stay rare
    spec.noise.tier = NoiseTier::CircuitLevel;
    spec.noise.rounds = 2;
    spec.noise.p = 0.001;
    SummaryRow ck = run_experiment(spec);
    CHECK(ck.trials == 300);
    CHECK(ck.ler < 0.3);

    // and the circuit tier still orders by p
    spec.noise.p = 0.02;
    SummaryRow ck_hi = run_experiment(spec);
    CHECK(ck.ler < ck_hi.ler);
}

TEST_CASE("csv formatting is stable") {
    SummaryRow row;
    row.p = 0.015;
    row.trials = 1000;
    row.failures = 12;
    row.ler = 0.012;
    row.ler_lo = 0.0068889;
    row.ler_hi = 0.0208391;
    row.mean_iters = 3.25;
    row.conv_rate = 0.9995;
    CHECK(csv_header() == "p,trials,failures,ler,ler_lo,ler_hi,mean_iters,conv_rate");
    CHECK(to_csv_row(row) == "0.015,1000,12,0.012,0.0068889,0.0208391,3.25,0.9995");
}

TEST_CASE("schedule specs resolve per tier") {
    CssCode gross = bivariate_bicycle(12, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}});
    ExperimentSpec spec;
    spec.code = gross;
    spec.noise.p = 0.02;
    spec.trials = 8;
    spec.schedule = ScheduleSpec::LayeredAB;
    spec.normalization = 0.85;
    SummaryRow row = run_experiment(spec);
    CHECK(row.trials == 8);

    // layered-AB is a code-capacity schedule; detector columns are classes
    spec.noise.tier = NoiseTier::CircuitLevel;
    CHECK_THROWS_AS(run_experiment(spec), PolicyError);
    spec.schedule = ScheduleSpec::LayeredRC;
    spec.trials = 4;
    SummaryRow rc = run_experiment(spec);
    CHECK(rc.trials == 4);
}
