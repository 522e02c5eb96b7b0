#include "seizknn/knn.hpp"

#include <algorithm>
#include <cmath>

#include "seizknn/store.hpp"

namespace seizknn {

FixedVector quantize(const EegWindow& window, QFormat q) {
    FixedVector out;
    out.q_format = q;
    out.values.reserve(window.samples.size());
    const double scale = q.scale();
    for (size_t i = 0; i < window.samples.size(); ++i) {
        const double code = std::nearbyint(window.samples[i] * scale);  // round-half-even
        if (code < -32768.0 || code > 32767.0) throw OutOfRange(i, window.samples[i]);
        out.values.push_back(static_cast<int16_t>(code));
    }
    return out;
}

EegWindow dequantize(const FixedVector& v, double sample_rate_hz) {
    EegWindow out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.reserve(v.values.size());
    const double inv = 1.0 / v.q_format.scale();
    for (int16_t code : v.values) out.samples.push_back(code * inv);
    return out;
}

SquaredDistance squared_distance(const FixedVector& a, const FixedVector& b) {
    if (a.values.size() != b.values.size() || !(a.q_format == b.q_format))
        throw DimensionMismatch("vector length or q-format mismatch");
    uint64_t acc = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        const int64_t d = static_cast<int64_t>(a.values[i]) - b.values[i];
        acc += static_cast<uint64_t>(d * d);
    }
    return acc;
}

NeighborSet select_k_nearest(const FixedVector& query, const TrainingStore& store, size_t k) {
    if (store.empty()) throw EmptyStore("cannot classify against an empty store");
    if (k == 0) throw InvalidParams("k must be positive");

    NeighborSet out;
    out.k = k;
    auto& buf = out.entries;
    buf.reserve(k + 1);

    const auto& entries = store.entries();
    for (size_t idx = 0; idx < entries.size(); ++idx) {
        const SquaredDistance d = squared_distance(query, entries[idx].vector);
        if (buf.size() == k &&
            compare_const_time(d, buf.back().distance) != Ordering::Less)
            continue;
        // Sorted insert, shifting at most k entries.
        NeighborEntry e{d, entries[idx].label, idx};
        auto pos = buf.end();
        while (pos != buf.begin()) {
            auto prev = pos - 1;
            if (compare_const_time(prev->distance, d) != Ordering::Greater) break;
            pos = prev;
        }
        buf.insert(pos, e);
        if (buf.size() > k) buf.pop_back();
    }
    return out;
}

Vote vote(const NeighborSet& neighbors) {
    if (neighbors.entries.empty()) throw EmptyNeighborSet("empty neighbor set");
    size_t seizure = 0;
    for (const auto& e : neighbors.entries)
        if (e.label == BinaryLabel::Seizure) ++seizure;
    const size_t total = neighbors.entries.size();
    const size_t non = total - seizure;

    Vote v{};
    if (seizure > non) v.label = BinaryLabel::Seizure;
    else if (non > seizure) v.label = BinaryLabel::NonSeizure;
    else v.label = neighbors.entries.front().label;  // tie: nearest wins
    const size_t count = v.label == BinaryLabel::Seizure ? seizure : non;
    v.confidence = static_cast<double>(count) / static_cast<double>(total);
    return v;
}

}  // namespace seizknn
