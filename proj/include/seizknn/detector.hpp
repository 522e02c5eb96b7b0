#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "seizknn/store.hpp"

namespace seizknn {

struct DetectorConfig {
    size_t k = 3;           // positive odd
    size_t alpha = 30;      // per class
    size_t window_len = 178;
    double sample_rate_hz = 178.0;
    FilterSpec filter{40.0, 4, 178.0};
    QFormat q_format{10, 6};
    double threshold_confidence = 0.5;  // plain majority

    void validate() const;
};

struct DetectionEvent {
    uint64_t timestamp_ms = 0;
    BinaryLabel label = BinaryLabel::NonSeizure;
    double confidence = 0.0;
    uint64_t window_seq = 0;
    uint64_t latency_us = 0;
};

// Wire frame, 10 bytes:
//   sync 0xA5 | seq mod 2^16 LE | timestamp_ms mod 2^32 LE | label |
//   round(confidence*255) | crc8 (poly 0x07, init 0x00, over bytes 0..8)
using OutputFrame = std::array<uint8_t, 10>;

struct FrameFields {
    uint16_t window_seq;
    uint32_t timestamp_ms;
    BinaryLabel label;
    uint8_t confidence_q8;
};

uint8_t crc8(std::span<const uint8_t> data);
OutputFrame encode_frame(const DetectionEvent& event);
FrameFields decode_frame(std::span<const uint8_t> bytes);

// filter -> quantize -> k nearest -> vote, with the confidence threshold
// applied to Seizure verdicts.
Vote classify_window(const EegWindow& window, const TrainingStore& store,
                     const DetectorConfig& config, const FilterCoefficients& coeffs);

// Streaming front end. Accumulates samples into non-overlapping windows and
// classifies each completed window. Not thread safe; calls to push_samples
// must be externally serialized.
class Detector {
  public:
    Detector(const DetectorConfig& config, const TrainingStore& store);

    std::vector<DetectionEvent> push_samples(std::span<const double> samples);

    uint64_t windows_seen() const { return window_seq_; }
    size_t pending() const { return buffer_.size(); }

  private:
    DetectorConfig config_;
    const TrainingStore& store_;
    FilterCoefficients coeffs_;
    std::vector<double> buffer_;
    uint64_t window_seq_ = 0;
    uint64_t samples_seen_ = 0;
};

}  // namespace seizknn
