#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seizknn/knn.hpp"
#include "seizknn/signal.hpp"
#include "seizknn/types.hpp"

namespace seizknn {

struct StoreEntry {
    FixedVector vector;
    BinaryLabel label;
    uint64_t insertion_seq;
};

struct MemoryReport {
    uint64_t vector_bytes = 0;  // entries * n * 2
    uint64_t label_bytes = 0;   // entries * 1
    uint64_t index_bytes = 0;   // entries * 8
    uint64_t total_bytes = 0;
};

// Capacity-bounded per-class instance memory. At capacity alpha the oldest
// entry of the inserted class is evicted (FIFO per class, ring-buffer SRAM
// semantics).
class TrainingStore {
  public:
    TrainingStore(size_t alpha, size_t n, QFormat q)
        : alpha_(alpha), n_(n), q_format_(q) {
        if (alpha == 0) throw InvalidParams("alpha must be positive");
        if (n == 0) throw InvalidParams("feature length must be positive");
    }

    void insert(FixedVector vector, BinaryLabel label);

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    size_t count(BinaryLabel label) const;
    size_t alpha() const { return alpha_; }
    size_t feature_len() const { return n_; }
    QFormat q_format() const { return q_format_; }
    const std::vector<StoreEntry>& entries() const { return entries_; }

    MemoryReport memory_footprint() const;

    void snapshot(const std::string& path) const;
    static TrainingStore restore(const std::string& path);

    bool operator==(const TrainingStore& other) const;

  private:
    size_t alpha_;
    size_t n_;
    QFormat q_format_;
    std::vector<StoreEntry> entries_;
    uint64_t next_seq_ = 0;
};

struct AdaptResult {
    std::chrono::microseconds duration{0};
    size_t inserted = 0;
};

// Filter + quantize + insert each window in order; the returned duration
// covers the whole call (model construction only, no file I/O).
AdaptResult adapt(TrainingStore& store, std::span<const LabeledWindow> user_windows,
                  const FilterCoefficients& filter, QFormat q);

// Per-entry snapshot/footprint overhead beyond the raw sample bytes.
constexpr uint64_t kBytesPerLabel = 1;
constexpr uint64_t kBytesPerIndex = 8;

}  // namespace seizknn
