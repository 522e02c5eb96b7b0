#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "seizknn/types.hpp"

namespace seizknn {

struct FilterSpec {
    double cutoff_hz = 40.0;
    int order = 4;  // positive even
    double sample_rate_hz = 178.0;
};

// One second-order section, direct form II transposed.
// y[t] = b0*x + b1*x1 + b2*x2 - a1*y1 - a2*y2
struct Biquad {
    double b0, b1, b2, a1, a2;
};

struct FilterCoefficients {
    std::vector<Biquad> sections;

    // Complex frequency response at normalized angular frequency w (rad/sample).
    std::complex<double> response(double w) const;
    double magnitude_at(double freq_hz, double sample_rate_hz) const;
};

struct BandPowers {
    double delta = 0, theta = 0, alpha = 0, beta = 0, gamma = 0;
};

// Lowpass Butterworth as cascaded biquads via the bilinear transform.
// Throws InvalidSpec when the cutoff is at/above Nyquist or the order is not
// a positive even integer.
FilterCoefficients design_lowpass(const FilterSpec& spec);

// Filters one window with zero initial state. Length, rate, channel and
// timestamp are preserved.
EegWindow apply_filter(const FilterCoefficients& coeffs, const EegWindow& window);

// Per-band mean-square amplitude from the magnitude-squared discrete
// spectrum, rectangular window, bins assigned by center frequency.
BandPowers band_powers(const EegWindow& window);

// CSV loader: each data row = n comma-separated samples then one integer
// class in 1..5; optional single header row.
std::vector<LabeledWindow> load_dataset(const std::string& path, size_t window_len = 178);

// Raw single-column text (one sample per line) segmented into consecutive
// n-sample windows; trailing partial window is dropped.
std::vector<LabeledWindow> load_raw(const std::string& path, size_t window_len,
                                    BinaryLabel label, double sample_rate_hz = 178.0);

}  // namespace seizknn
