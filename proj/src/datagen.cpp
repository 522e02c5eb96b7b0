#include "seizknn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace seizknn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1/f-flavored background: white noise through a leaky integrator, rescaled
// to the requested standard deviation.
std::vector<double> background(std::mt19937_64& rng, size_t n, double std_uv) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n);
    double state = 0.0;
    for (size_t t = 0; t < n; ++t) {
        state = 0.82 * state + g(rng);
        x[t] = state;
    }
    double mean = 0.0, sq = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double v : x) sq += (v - mean) * (v - mean);
    const double sd = std::sqrt(sq / static_cast<double>(n));
    const double k = sd > 0 ? std_uv / sd : 0.0;
    for (double& v : x) v = (v - mean) * k;
    return x;
}

void add_sine(std::vector<double>& x, double fs, double freq, double amp, double phase) {
    for (size_t t = 0; t < x.size(); ++t)
        x[t] += amp * std::sin(kTwoPi * freq * static_cast<double>(t) / fs + phase);
}

// Sharp transient: one-sided exponential spike.
void add_spike(std::vector<double>& x, size_t at, double amp, double decay) {
    for (size_t t = at; t < x.size(); ++t) {
        const double v = amp * std::exp(-static_cast<double>(t - at) / decay);
        if (std::abs(v) < 0.5) break;
        x[t] += v;
    }
}

std::vector<double> make_row(std::mt19937_64& rng, int cls, const DataGenParams& p) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    const size_t n = p.window_len;
    const double fs = p.sample_rate_hz;
    std::vector<double> x;

    switch (cls) {
        case 1: {  // ictal: stereotyped spike-wave discharge, onset-aligned
            x = background(rng, n, 12.0 + 10.0 * u(rng));
            const double amp =
                std::exp(std::log(p.ictal_amp_mu) + p.ictal_amp_sigma * g(rng));
            // Discharges within a recording repeat the same waveform; windows
            // are cut at discharge onset, so frequency and phase vary little.
            const double f0 = p.discharge_hz + p.discharge_hz_jitter * (2.0 * u(rng) - 1.0);
            const double ph = p.discharge_phase_jitter * g(rng);
            add_sine(x, fs, f0, amp, ph);
            add_sine(x, fs, 2.0 * f0, amp * 0.35, 2.0 * ph + 0.6);
            add_sine(x, fs, 3.0 * f0, amp * 0.12, 3.0 * ph + 1.1);
            break;
        }
        case 2:
        case 3: {  // interictal: moderate background plus sporadic epileptiform events
            x = background(rng, n, 18.0 + 18.0 * u(rng));
            add_sine(x, fs, 1.0 + 3.0 * u(rng), 8.0 + 18.0 * u(rng), kTwoPi * u(rng));
            const size_t spikes = static_cast<size_t>(u(rng) * 4);
            for (size_t s = 0; s < spikes; ++s)
                add_spike(x, static_cast<size_t>(u(rng) * static_cast<double>(n)),
                          (u(rng) < 0.5 ? -1 : 1) * (35.0 + 80.0 * u(rng)),
                          1.0 + 3.0 * u(rng));
            // Occasional sub-ictal rhythmic burst with the same discharge
            // morphology: interictal epileptiform activity.
            if (u(rng) < p.burst_prob) {
                const double amp =
                    std::exp(std::log(p.burst_amp_mu) + p.burst_amp_sigma * g(rng));
                const double f0 =
                    p.discharge_hz + p.discharge_hz_jitter * (2.0 * u(rng) - 1.0);
                const double ph = p.discharge_phase_jitter * g(rng);
                add_sine(x, fs, f0, amp, ph);
                add_sine(x, fs, 2.0 * f0, amp * 0.35, 2.0 * ph + 0.6);
            }
            break;
        }
        default: {  // healthy: background with a posterior alpha rhythm
            x = background(rng, n, 12.0 + 14.0 * u(rng));
            const double alpha_amp = (cls == 4 ? 18.0 : 8.0) + 14.0 * u(rng);
            add_sine(x, fs, 8.5 + 3.0 * u(rng), alpha_amp, kTwoPi * u(rng));
            add_sine(x, fs, 18.0 + 8.0 * u(rng), 3.0 + 5.0 * u(rng), kTwoPi * u(rng));
            break;
        }
    }

    // Ocular/movement artifacts contaminate non-seizure rows too.
    if (cls != 1 && u(rng) < p.artifact_prob) {
        const double amp =
            p.artifact_amp_lo + (p.artifact_amp_hi - p.artifact_amp_lo) * u(rng);
        add_sine(x, fs, 0.8 + 1.6 * u(rng), amp * (u(rng) < 0.5 ? -1 : 1), kTwoPi * u(rng));
    }

    // Leave headroom below the 10.6 fixed-point ceiling (+-511.98 uV): the
    // lowpass step response can overshoot clipped edges by ~15%.
    for (double& v : x) v = std::clamp(v, -430.0, 430.0);
    return x;
}

}  // namespace

std::vector<LabeledWindow> generate_dataset(const DataGenParams& params, uint64_t seed) {
    if (params.rows_per_class == 0 || params.window_len == 0)
        throw InvalidParams("rows_per_class and window_len must be positive");
    std::mt19937_64 rng(seed);
    std::vector<LabeledWindow> out;
    out.reserve(params.rows_per_class * 5);
    // Interleave classes so file order carries no label structure.
    for (size_t r = 0; r < params.rows_per_class; ++r) {
        for (int cls = 1; cls <= 5; ++cls) {
            LabeledWindow lw;
            lw.window.samples = make_row(rng, cls, params);
            lw.window.sample_rate_hz = params.sample_rate_hz;
            lw.window.timestamp_ms = static_cast<uint64_t>(
                1000.0 * static_cast<double>(out.size()) *
                static_cast<double>(params.window_len) / params.sample_rate_hz);
            lw.source_class = cls;
            lw.binary_label = label_from_class(cls);
            out.push_back(std::move(lw));
        }
    }
    return out;
}

void write_dataset_csv(const std::vector<LabeledWindow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Io("cannot open " + path + " for writing");
    for (size_t i = 0; i < rows[0].window.samples.size(); ++i) f << 'X' << i + 1 << ',';
    f << "y\n";
    f.precision(17);
    for (const auto& lw : rows) {
        for (double v : lw.window.samples) f << v << ',';
        f << lw.source_class << '\n';
    }
    if (!f) throw Io("write failed: " + path);
}

}  // namespace seizknn
