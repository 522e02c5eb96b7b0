#include "seizknn/store.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>

namespace seizknn {

namespace {

constexpr std::array<char, 4> kMagic{'K', 'N', 'N', '1'};
constexpr uint8_t kVersion = 1;

uint32_t crc32(const uint8_t* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int j = 0; j < 8; ++j) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

template <typename T>
void put_le(std::vector<uint8_t>& buf, T v) {
    for (size_t i = 0; i < sizeof(T); ++i)
        buf.push_back(static_cast<uint8_t>((static_cast<uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const uint8_t* p) {
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

}  // namespace

void TrainingStore::insert(FixedVector vector, BinaryLabel label) {
    if (vector.values.size() != n_ || !(vector.q_format == q_format_))
        throw ShapeMismatch("vector shape or q-format does not match store");

    if (count(label) == alpha_) {
        // Evict the oldest entry of this class.
        auto oldest = entries_.end();
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->label == label &&
                (oldest == entries_.end() || it->insertion_seq < oldest->insertion_seq))
                oldest = it;
        }
        entries_.erase(oldest);
    }
    entries_.push_back(StoreEntry{std::move(vector), label, next_seq_++});
}

size_t TrainingStore::count(BinaryLabel label) const {
    return static_cast<size_t>(
        std::count_if(entries_.begin(), entries_.end(),
                      [label](const StoreEntry& e) { return e.label == label; }));
}

MemoryReport TrainingStore::memory_footprint() const {
    MemoryReport r;
    r.vector_bytes = static_cast<uint64_t>(entries_.size()) * n_ * 2;
    r.label_bytes = static_cast<uint64_t>(entries_.size()) * kBytesPerLabel;
    r.index_bytes = static_cast<uint64_t>(entries_.size()) * kBytesPerIndex;
    r.total_bytes = r.vector_bytes + r.label_bytes + r.index_bytes;
    return r;
}

bool TrainingStore::operator==(const TrainingStore& other) const {
    if (alpha_ != other.alpha_ || n_ != other.n_ || !(q_format_ == other.q_format_) ||
        entries_.size() != other.entries_.size())
        return false;
    for (size_t i = 0; i < entries_.size(); ++i) {
        const auto& a = entries_[i];
        const auto& b = other.entries_[i];
        if (a.label != b.label || a.insertion_seq != b.insertion_seq ||
            !(a.vector == b.vector))
            return false;
    }
    return true;
}

void TrainingStore::snapshot(const std::string& path) const {
    std::vector<uint8_t> buf;
    buf.insert(buf.end(), kMagic.begin(), kMagic.end());
    buf.push_back(kVersion);
    put_le<uint32_t>(buf, static_cast<uint32_t>(alpha_));
    put_le<uint32_t>(buf, static_cast<uint32_t>(n_));
    buf.push_back(static_cast<uint8_t>(q_format_.integer_bits));
    buf.push_back(static_cast<uint8_t>(q_format_.fraction_bits));
    put_le<uint32_t>(buf, static_cast<uint32_t>(entries_.size()));
    put_le<uint64_t>(buf, next_seq_);
    for (const auto& e : entries_) {
        buf.push_back(static_cast<uint8_t>(e.label));
        put_le<uint64_t>(buf, e.insertion_seq);
        for (int16_t v : e.vector.values) put_le<int16_t>(buf, v);
    }
    put_le<uint32_t>(buf, crc32(buf.data(), buf.size()));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Io("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (!f) throw Io("write failed: " + path);
}

TrainingStore TrainingStore::restore(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Io("cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());

    constexpr size_t header = 4 + 1 + 4 + 4 + 2 + 4 + 8;
    if (buf.size() < header + 4) throw CorruptSnapshot("truncated file");
    if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
        throw CorruptSnapshot("bad magic");
    if (buf[4] != kVersion) throw CorruptSnapshot("unsupported version");

    const uint32_t stored_crc = get_le<uint32_t>(buf.data() + buf.size() - 4);
    if (crc32(buf.data(), buf.size() - 4) != stored_crc)
        throw CorruptSnapshot("checksum mismatch");

    const uint8_t* p = buf.data() + 5;
    const uint32_t alpha = get_le<uint32_t>(p); p += 4;
    const uint32_t n = get_le<uint32_t>(p); p += 4;
    QFormat q{p[0], p[1]}; p += 2;
    if (q.integer_bits + q.fraction_bits != 16) throw CorruptSnapshot("bad q-format");
    const uint32_t count = get_le<uint32_t>(p); p += 4;
    const uint64_t next_seq = get_le<uint64_t>(p); p += 8;

    const size_t per_entry = 1 + 8 + static_cast<size_t>(n) * 2;
    if (buf.size() != header + static_cast<size_t>(count) * per_entry + 4)
        throw CorruptSnapshot("size does not match entry count");

    TrainingStore store(alpha, n, q);
    for (uint32_t i = 0; i < count; ++i) {
        StoreEntry e;
        if (p[0] > 1) throw CorruptSnapshot("bad label byte");
        e.label = static_cast<BinaryLabel>(p[0]); p += 1;
        e.insertion_seq = get_le<uint64_t>(p); p += 8;
        e.vector.q_format = q;
        e.vector.values.reserve(n);
        for (uint32_t j = 0; j < n; ++j) {
            e.vector.values.push_back(get_le<int16_t>(p));
            p += 2;
        }
        store.entries_.push_back(std::move(e));
    }
    store.next_seq_ = next_seq;
    return store;
}

AdaptResult adapt(TrainingStore& store, std::span<const LabeledWindow> user_windows,
                  const FilterCoefficients& filter, QFormat q) {
    if (user_windows.empty()) throw InvalidParams("adapt requires at least one window");

    const auto t0 = std::chrono::steady_clock::now();
    AdaptResult res;
    for (size_t i = 0; i < user_windows.size(); ++i) {
        try {
            store.insert(quantize(apply_filter(filter, user_windows[i].window), q),
                         user_windows[i].binary_label);
        } catch (const Error& e) {
            throw DataError("window " + std::to_string(i) + ": " + e.what());
        }
        ++res.inserted;
    }
    res.duration = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - t0);
    return res;
}

}  // namespace seizknn
