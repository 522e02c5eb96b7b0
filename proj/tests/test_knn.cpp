#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "seizknn/knn.hpp"
#include "seizknn/store.hpp"

using namespace seizknn;

namespace {

std::mt19937_64 rng(42);

EegWindow random_window(size_t n, double amp = 400.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    EegWindow w;
    for (size_t t = 0; t < n; ++t) w.samples.push_back(u(rng));
    return w;
}

FixedVector random_fixed(size_t n, QFormat q = {}) {
    std::uniform_int_distribution<int> u(-32768, 32767);
    FixedVector v;
    v.q_format = q;
    for (size_t t = 0; t < n; ++t) v.values.push_back(static_cast<int16_t>(u(rng)));
    return v;
}

// Independent oracle: term-by-term wide-integer accumulation.
unsigned __int128 distance_oracle(const FixedVector& a, const FixedVector& b) {
    unsigned __int128 acc = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        const long long d = static_cast<long long>(a.values[i]) - b.values[i];
        acc += static_cast<unsigned __int128>(d * d);
    }
    return acc;
}

// Brute-force selection oracle: all distances, full sort, truncate.
std::vector<NeighborEntry> select_oracle(const FixedVector& q, const TrainingStore& store,
                                         size_t k) {
    std::vector<NeighborEntry> all;
    for (size_t i = 0; i < store.entries().size(); ++i)
        all.push_back(NeighborEntry{squared_distance(q, store.entries()[i].vector),
                                    store.entries()[i].label, i});
    std::sort(all.begin(), all.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
        return a.distance != b.distance ? a.distance < b.distance
                                        : a.store_index < b.store_index;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

}  // namespace

TEST_CASE("quantize: exact codes and rounding bound") {
    QFormat q{10, 6};
    EegWindow zero;
    zero.samples.assign(8, 0.0);
    const auto fz = quantize(zero, q);
    for (int16_t v : fz.values) CHECK(v == 0);

    EegWindow one;
    one.samples = {1.0};
    CHECK(quantize(one, q).values[0] == 64);

    for (int rep = 0; rep < 1000; ++rep) {
        const auto w = random_window(32, 500.0);
        const auto f = quantize(w, q);
        const auto back = dequantize(f);
        for (size_t i = 0; i < w.samples.size(); ++i)
            CHECK(std::abs(back.samples[i] - w.samples[i]) <= 1.0 / 128.0 + 1e-12);
    }
}

TEST_CASE("quantize: round-half-even and out-of-range") {
    QFormat q{10, 6};
    EegWindow w;
    w.samples = {0.5 / 64.0, 1.5 / 64.0};  // exactly half codes
    const auto f = quantize(w, q);
    CHECK(f.values[0] == 0);
    CHECK(f.values[1] == 2);

    EegWindow big;
    big.samples = {600.0};
    CHECK_THROWS_AS(quantize(big, q), OutOfRange);
}

TEST_CASE("quantize/dequantize round-trip exactness on representable codes") {
    const auto f = random_fixed(178);
    const auto back = quantize(dequantize(f), f.q_format);
    CHECK(back.values == f.values);
}

TEST_CASE("squared_distance: known values and errors") {
    QFormat q{10, 6};
    FixedVector a{{0, 3}, q}, b{{4, 0}, q};
    CHECK(squared_distance(a, b) == 25);
    CHECK(squared_distance(a, a) == 0);

    FixedVector c{{1, 2, 3}, q};
    CHECK_THROWS_AS(squared_distance(a, c), DimensionMismatch);
    FixedVector d{{0, 3}, QFormat{8, 8}};
    CHECK_THROWS_AS(squared_distance(a, d), DimensionMismatch);
}

TEST_CASE("squared_distance: 1000 random pairs match the wide-integer oracle") {
    for (int rep = 0; rep < 1000; ++rep) {
        const auto a = random_fixed(178);
        const auto b = random_fixed(178);
        const auto d = squared_distance(a, b);
        CHECK(static_cast<unsigned __int128>(d) == distance_oracle(a, b));
        CHECK(d == squared_distance(b, a));
    }
    // extreme corners cannot overflow
    FixedVector lo, hi;
    lo.values.assign(178, -32768);
    hi.values.assign(178, 32767);
    CHECK(squared_distance(lo, hi) == 178ull * 65535ull * 65535ull);
}

TEST_CASE("metric sanity on dequantized values: triangle inequality") {
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = random_fixed(64), b = random_fixed(64), c = random_fixed(64);
        const double ab = std::sqrt(static_cast<double>(squared_distance(a, b)));
        const double bc = std::sqrt(static_cast<double>(squared_distance(b, c)));
        const double ac = std::sqrt(static_cast<double>(squared_distance(a, c)));
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("compare_const_time agrees with native comparison") {
    CHECK(compare_const_time(5, 5) == Ordering::Equal);
    CHECK(compare_const_time(0, 1) == Ordering::Less);
    CHECK(compare_const_time(1, 0) == Ordering::Greater);
    std::uniform_int_distribution<uint64_t> u;
    for (int rep = 0; rep < 100000; ++rep) {
        const uint64_t a = u(rng), b = u(rng);
        const auto ord = compare_const_time(a, b);
        if (a < b) CHECK(ord == Ordering::Less);
        else if (a > b) CHECK(ord == Ordering::Greater);
        else CHECK(ord == Ordering::Equal);
    }
}

TEST_CASE("select_k_nearest: basics") {
    QFormat q{10, 6};
    TrainingStore store(30, 4, q);
    FixedVector query{{10, 20, 30, 40}, q};
    store.insert(FixedVector{{0, 0, 0, 0}, q}, BinaryLabel::NonSeizure);
    store.insert(query, BinaryLabel::Seizure);
    store.insert(FixedVector{{10, 20, 30, 41}, q}, BinaryLabel::Seizure);

    const auto ns = select_k_nearest(query, store, 1);
    REQUIRE(ns.entries.size() == 1);
    CHECK(ns.entries[0].distance == 0);
    CHECK(ns.entries[0].store_index == 1);

    // k == store size: whole store sorted
    const auto all = select_k_nearest(query, store, 3);
    REQUIRE(all.entries.size() == 3);
    CHECK(all.entries[0].store_index == 1);
    CHECK(all.entries[1].store_index == 2);
    CHECK(all.entries[2].store_index == 0);

    // k > store size: truncated to store size
    CHECK(select_k_nearest(query, store, 7).entries.size() == 3);

    TrainingStore empty(30, 4, q);
    CHECK_THROWS_AS(select_k_nearest(query, empty, 3), EmptyStore);
}

TEST_CASE("select_k_nearest: 1000 random instances match brute force exactly") {
    QFormat q{10, 6};
    std::uniform_int_distribution<int> small(-40, 40);  // force distance ties
    for (int rep = 0; rep < 1000; ++rep) {
        TrainingStore store(30, 16, q);
        for (int i = 0; i < 60; ++i) {
            FixedVector v;
            v.q_format = q;
            for (int t = 0; t < 16; ++t) v.values.push_back(static_cast<int16_t>(small(rng)));
            store.insert(std::move(v), i % 2 ? BinaryLabel::Seizure : BinaryLabel::NonSeizure);
        }
        FixedVector query;
        query.q_format = q;
        for (int t = 0; t < 16; ++t) query.values.push_back(static_cast<int16_t>(small(rng)));

        for (size_t k : {1u, 3u, 5u}) {
            const auto got = select_k_nearest(query, store, k);
            const auto want = select_oracle(query, store, k);
            REQUIRE(got.entries.size() == want.size());
            for (size_t i = 0; i < want.size(); ++i) {
                CHECK(got.entries[i].distance == want[i].distance);
                CHECK(got.entries[i].store_index == want[i].store_index);
                CHECK(got.entries[i].label == want[i].label);
            }
        }
    }
}

TEST_CASE("k-nearest set invariant under sqrt of the distance") {
    QFormat q{10, 6};
    for (int rep = 0; rep < 200; ++rep) {
        TrainingStore store(60, 16, q);
        for (int i = 0; i < 40; ++i)
            store.insert(random_fixed(16, q), i % 2 ? BinaryLabel::Seizure
                                                    : BinaryLabel::NonSeizure);
        const auto query = random_fixed(16, q);
        const auto squared = select_k_nearest(query, store, 5);

        // root-distance oracle
        std::vector<std::pair<double, size_t>> root;
        for (size_t i = 0; i < store.entries().size(); ++i)
            root.emplace_back(
                std::sqrt(static_cast<double>(squared_distance(query, store.entries()[i].vector))),
                i);
        std::sort(root.begin(), root.end());
        for (size_t i = 0; i < squared.entries.size(); ++i)
            CHECK(squared.entries[i].store_index == root[i].second);
    }
}

TEST_CASE("vote: majority, unanimity, tie to nearest") {
    QFormat q{10, 6};
    NeighborSet ns;
    ns.k = 3;
    ns.entries = {{0, BinaryLabel::Seizure, 0},
                  {1, BinaryLabel::Seizure, 1},
                  {2, BinaryLabel::NonSeizure, 2}};
    auto v = vote(ns);
    CHECK(v.label == BinaryLabel::Seizure);
    CHECK(v.confidence == doctest::Approx(2.0 / 3.0));

    ns.entries = {{0, BinaryLabel::NonSeizure, 0},
                  {1, BinaryLabel::NonSeizure, 1},
                  {2, BinaryLabel::NonSeizure, 2}};
    v = vote(ns);
    CHECK(v.label == BinaryLabel::NonSeizure);
    CHECK(v.confidence == 1.0);

    // truncated store, even entries, tie: nearest wins
    ns.entries = {{3, BinaryLabel::Seizure, 0}, {9, BinaryLabel::NonSeizure, 1}};
    v = vote(ns);
    CHECK(v.label == BinaryLabel::Seizure);
    CHECK(v.confidence == 0.5);

    NeighborSet empty;
    CHECK_THROWS_AS(vote(empty), EmptyNeighborSet);
}

TEST_CASE("vote: odd k always yields a strict majority") {
    std::uniform_int_distribution<int> coin(0, 1);
    for (int rep = 0; rep < 500; ++rep) {
        NeighborSet ns;
        ns.k = 5;
        for (size_t i = 0; i < 5; ++i)
            ns.entries.push_back({static_cast<SquaredDistance>(i),
                                  coin(rng) ? BinaryLabel::Seizure : BinaryLabel::NonSeizure,
                                  i});
        const auto v = vote(ns);
        CHECK(v.confidence > 0.5);
        const auto v2 = vote(ns);  // determinism
        CHECK(v2.label == v.label);
        CHECK(v2.confidence == v.confidence);
    }
}
