#include "doctest.h"
#include "seizknn/pipeline_sim.hpp"
#include "seizknn/store.hpp"

using namespace seizknn;

namespace {
StageCostModel unit_no_overhead() {
    StageCostModel m;
    m.fixed_overhead_cycles = 0;
    return m;
}
}  // namespace

TEST_CASE("simulate_classification: hand-computed minimal case") {
    // m=1, n=1, k=1, unit costs, zero overhead: 1*1 + 1*(1+1) + 1 = 4
    const auto r = simulate_classification(1, 1, 1, unit_no_overhead(), 80e6);
    CHECK(r.cycles_per_window == 4);
}

TEST_CASE("simulate_classification: default operating point") {
    StageCostModel m;  // unit costs, overhead 10 per stage
    const auto r = simulate_classification(60, 178, 3, m, 80e6);
    CHECK(r.cycles_per_window == 60u * 178u + 60u * (1u + 3u) + 3u + 50u);
    CHECK(r.cycles_per_window == 10973);
    CHECK(r.latency_us == doctest::Approx(10973.0 / 80e6 * 1e6));
    CHECK(r.latency_us < 200.0);
    CHECK(r.realtime_ok);
    CHECK(r.fits_budget);
    CHECK(r.store_bytes == 60u * (178u * 2u + 9u));
}

TEST_CASE("simulate_classification: linearity in m") {
    StageCostModel m;
    for (size_t mm : {10u, 60u, 200u}) {
        const auto a = simulate_classification(mm, 178, 3, m, 80e6);
        const auto b = simulate_classification(2 * mm, 178, 3, m, 80e6);
        CHECK(b.cycles_per_window - a.cycles_per_window == mm * 178 + mm * (1 + 3));
    }
    // per-entry increment constant in m
    const auto c1 = simulate_classification(99, 178, 3, m, 80e6);
    const auto c2 = simulate_classification(100, 178, 3, m, 80e6);
    const auto c3 = simulate_classification(101, 178, 3, m, 80e6);
    CHECK(c2.cycles_per_window - c1.cycles_per_window ==
          c3.cycles_per_window - c2.cycles_per_window);
}

TEST_CASE("cost monotonicity in m, n, k") {
    StageCostModel m;
    const auto base = simulate_classification(60, 178, 3, m, 80e6);
    CHECK(simulate_classification(61, 178, 3, m, 80e6).cycles_per_window >=
          base.cycles_per_window);
    CHECK(simulate_classification(60, 179, 3, m, 80e6).cycles_per_window >=
          base.cycles_per_window);
    CHECK(simulate_classification(60, 178, 5, m, 80e6).cycles_per_window >=
          base.cycles_per_window);
}

TEST_CASE("constant-time comparator contract in the cost model") {
    StageCostModel m;
    m.cycles_per_compare = 3;
    // charged cost has no operand input at all; identical across candidates
    for (int i = 0; i < 10; ++i) CHECK(m.compare_cost() == 3);
}

TEST_CASE("invalid parameters") {
    StageCostModel m;
    CHECK_THROWS_AS(simulate_classification(0, 1, 1, m, 80e6), InvalidParams);
    CHECK_THROWS_AS(simulate_classification(1, 0, 1, m, 80e6), InvalidParams);
    CHECK_THROWS_AS(simulate_classification(1, 1, 2, m, 80e6), InvalidParams);
    CHECK_THROWS_AS(simulate_classification(1, 1, 1, m, 0.0), InvalidParams);
    StageCostModel bad;
    bad.cycles_per_mac = 0;
    CHECK_THROWS_AS(simulate_classification(1, 1, 1, bad, 80e6), InvalidParams);
    CHECK_THROWS_AS(sweep_design_space({}, {1}, 178, m, 80e6), InvalidParams);
}

TEST_CASE("sweep: pointwise consistency and realtime bound") {
    StageCostModel m;
    const auto rows = sweep_design_space({20, 60, 200}, {1, 3, 5}, 178, m, 80e6);
    REQUIRE(rows.size() == 9);
    size_t i = 0;
    for (size_t mm : {20u, 60u, 200u}) {
        for (size_t k : {1u, 3u, 5u}) {
            const auto want = simulate_classification(mm, 178, k, m, 80e6);
            CHECK(rows[i].cycles_per_window == want.cycles_per_window);
            CHECK(rows[i].store_bytes == want.store_bytes);
            ++i;
        }
    }
    // every default-cost m <= 2000 point is realtime at 80 MHz, 1 s windows
    for (const auto& r : sweep_design_space({8, 50, 116, 500, 2000}, {1, 3, 5, 7}, 178, m, 80e6))
        CHECK(r.realtime_ok);
}

TEST_CASE("budget boundary m and consistency with the store footprint") {
    StageCostModel m;
    // per entry: 178*2 + 1 + 8 = 365 bytes; boundary at floor(81920/365) = 224
    size_t boundary = 0;
    for (size_t mm = 1; mm <= 400; ++mm) {
        const auto r = simulate_classification(mm, 178, 1, m, 80e6);
        if (!r.fits_budget) {
            boundary = mm;
            break;
        }
    }
    CHECK(boundary == 225);  // first m over budget; 224 still fits
    const auto fit = simulate_classification(224, 178, 1, m, 80e6);
    CHECK(fit.fits_budget);
    CHECK(fit.store_bytes == 224u * 365u);

    // same verdict as model_store's accounting for the default model
    QFormat q{10, 6};
    TrainingStore store(30, 178, q);
    FixedVector v;
    v.q_format = q;
    v.values.assign(178, 0);
    for (int i = 0; i < 60; ++i)
        store.insert(v, i % 2 ? BinaryLabel::Seizure : BinaryLabel::NonSeizure);
    const auto sim = simulate_classification(60, 178, 3, m, 80e6);
    CHECK(store.memory_footprint().total_bytes == sim.store_bytes);
    CHECK((store.memory_footprint().total_bytes <= kUserDataBudgetBytes) == sim.fits_budget);
}

TEST_CASE("csv emission") {
    CHECK(sim_csv_header() ==
          "m,k,n,cycles,latency_us,windows_per_s,store_bytes,fits_budget,realtime_ok");
    StageCostModel m;
    const auto r = simulate_classification(60, 178, 3, m, 80e6);
    const auto row = sim_csv_row(r);
    CHECK(row.substr(0, 14) == "60,3,178,10973");
}
