#include "seizknn/detector.hpp"

#include <chrono>
#include <cmath>

namespace seizknn {

void DetectorConfig::validate() const {
    if (k == 0 || k % 2 == 0) throw InvalidParams("k must be a positive odd integer");
    if (alpha == 0) throw InvalidParams("alpha must be positive");
    if (k > 2 * alpha) throw InvalidParams("k must not exceed 2*alpha");
    if (window_len == 0) throw InvalidParams("window_len must be positive");
    if (sample_rate_hz <= 0) throw InvalidParams("sample_rate_hz must be positive");
    if (threshold_confidence < 0.5 || threshold_confidence > 1.0)
        throw InvalidParams("threshold_confidence must lie in [1/2, 1]");
}

uint8_t crc8(std::span<const uint8_t> data) {
    uint8_t crc = 0x00;
    for (uint8_t b : data) {
        crc ^= b;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 0x80) ? static_cast<uint8_t>((crc << 1) ^ 0x07)
                               : static_cast<uint8_t>(crc << 1);
    }
    return crc;
}

OutputFrame encode_frame(const DetectionEvent& event) {
    OutputFrame f{};
    f[0] = 0xA5;
    const uint16_t seq = static_cast<uint16_t>(event.window_seq & 0xFFFF);
    f[1] = static_cast<uint8_t>(seq & 0xFF);
    f[2] = static_cast<uint8_t>(seq >> 8);
    const uint32_t ts = static_cast<uint32_t>(event.timestamp_ms & 0xFFFFFFFFu);
    f[3] = static_cast<uint8_t>(ts & 0xFF);
    f[4] = static_cast<uint8_t>((ts >> 8) & 0xFF);
    f[5] = static_cast<uint8_t>((ts >> 16) & 0xFF);
    f[6] = static_cast<uint8_t>((ts >> 24) & 0xFF);
    f[7] = static_cast<uint8_t>(event.label);
    f[8] = static_cast<uint8_t>(std::lround(event.confidence * 255.0));
    f[9] = crc8(std::span<const uint8_t>(f.data(), 9));
    return f;
}

FrameFields decode_frame(std::span<const uint8_t> bytes) {
    if (bytes.size() < 10) throw ShortFrame("frame must be 10 bytes");
    if (bytes[0] != 0xA5) throw BadSync("bad sync byte");
    if (crc8(bytes.subspan(0, 9)) != bytes[9]) throw BadCrc("crc mismatch");
    FrameFields ff{};
    ff.window_seq = static_cast<uint16_t>(bytes[1] | (bytes[2] << 8));
    ff.timestamp_ms = static_cast<uint32_t>(bytes[3]) |
                      (static_cast<uint32_t>(bytes[4]) << 8) |
                      (static_cast<uint32_t>(bytes[5]) << 16) |
                      (static_cast<uint32_t>(bytes[6]) << 24);
    if (bytes[7] > 1) throw BadCrc("bad label byte");
    ff.label = static_cast<BinaryLabel>(bytes[7]);
    ff.confidence_q8 = bytes[8];
    return ff;
}

Vote classify_window(const EegWindow& window, const TrainingStore& store,
                     const DetectorConfig& config, const FilterCoefficients& coeffs) {
    if (store.empty()) throw NotTrained("training store is empty");
    const FixedVector q = quantize(apply_filter(coeffs, window), config.q_format);
    Vote v = vote(select_k_nearest(q, store, config.k));
    if (v.label == BinaryLabel::Seizure && v.confidence < config.threshold_confidence) {
        v.label = BinaryLabel::NonSeizure;
        v.confidence = 1.0 - v.confidence;
    }
    return v;
}

Detector::Detector(const DetectorConfig& config, const TrainingStore& store)
    : config_(config), store_(store), coeffs_(design_lowpass(config.filter)) {
    config_.validate();
    if (store_.empty()) throw NotTrained("training store is empty");
    buffer_.reserve(config_.window_len);
}

std::vector<DetectionEvent> Detector::push_samples(std::span<const double> samples) {
    std::vector<DetectionEvent> events;
    for (double s : samples) {
        buffer_.push_back(s);
        ++samples_seen_;
        if (buffer_.size() < config_.window_len) continue;

        const auto t0 = std::chrono::steady_clock::now();
        EegWindow w;
        w.samples = std::move(buffer_);
        buffer_.clear();
        buffer_.reserve(config_.window_len);
        w.sample_rate_hz = config_.sample_rate_hz;
        w.timestamp_ms = static_cast<uint64_t>(
            1000.0 * static_cast<double>(samples_seen_ - config_.window_len) /
            config_.sample_rate_hz);

        Vote v;
        try {
            v = classify_window(w, store_, config_, coeffs_);
        } catch (const OutOfRange& e) {
            throw DataError("window " + std::to_string(window_seq_) + ": " + e.what());
        }

        DetectionEvent ev;
        ev.timestamp_ms = w.timestamp_ms;
        ev.label = v.label;
        ev.confidence = v.confidence;
        ev.window_seq = window_seq_++;
        ev.latency_us = static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::microseconds>(
                std::chrono::steady_clock::now() - t0)
                .count());
        events.push_back(ev);
    }
    return events;
}

}  // namespace seizknn
