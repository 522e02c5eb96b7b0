#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "seizknn/types.hpp"

namespace seizknn {

// Fixed-point layout, integer_bits.fraction_bits, 16 bits total (sign
// included in the integer part). Default 10.6: +-512 uV range, 1/64 uV step.
struct QFormat {
    int integer_bits = 10;
    int fraction_bits = 6;

    bool operator==(const QFormat&) const = default;
    double scale() const { return static_cast<double>(1 << fraction_bits); }
    double max_magnitude() const {
        return 32767.0 / scale();
    }
};

struct FixedVector {
    std::vector<int16_t> values;
    QFormat q_format;

    bool operator==(const FixedVector&) const = default;
};

using SquaredDistance = uint64_t;

struct NeighborEntry {
    SquaredDistance distance;
    BinaryLabel label;
    size_t store_index;
};

struct NeighborSet {
    std::vector<NeighborEntry> entries;  // ascending (distance, store_index)
    size_t k = 0;
};

struct Vote {
    BinaryLabel label = BinaryLabel::NonSeizure;
    double confidence = 0.0;  // votes for label / entries
};

enum class Ordering : int { Less = -1, Equal = 0, Greater = 1 };

// Round-to-nearest-even quantization. Throws OutOfRange on the first sample
// whose code does not fit 16 signed bits; saturation is never silent.
FixedVector quantize(const EegWindow& window, QFormat q);

EegWindow dequantize(const FixedVector& v, double sample_rate_hz = 178.0);

// Sum of squared code differences in exact integer arithmetic. For n = 178
// and 16-bit codes the maximum is 178 * 2^30 < 2^38, far below overflow.
SquaredDistance squared_distance(const FixedVector& a, const FixedVector& b);

// Branchless comparison: a fixed, operand-independent number of word
// operations, standing in for the hardware comparator.
inline Ordering compare_const_time(SquaredDistance d1, SquaredDistance d2) {
    const int gt = static_cast<int>(d1 > d2);
    const int lt = static_cast<int>(d1 < d2);
    return static_cast<Ordering>(gt - lt);
}

class TrainingStore;  // model_store

// Linear scan over the store with a k-bounded sorted insertion buffer;
// O(k) work per candidate. Ties break on (distance, store_index) ascending.
NeighborSet select_k_nearest(const FixedVector& query, const TrainingStore& store, size_t k);

// Majority vote. An exact tie (only possible when entries.size() is even,
// i.e. a truncated store) goes to the label of the single nearest entry.
Vote vote(const NeighborSet& neighbors);

}  // namespace seizknn
