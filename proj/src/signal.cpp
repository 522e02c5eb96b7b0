#include "seizknn/signal.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace seizknn {

std::complex<double> FilterCoefficients::response(double w) const {
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h{1.0, 0.0};
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
}

double FilterCoefficients::magnitude_at(double freq_hz, double sample_rate_hz) const {
    return std::abs(response(2.0 * std::numbers::pi * freq_hz / sample_rate_hz));
}

FilterCoefficients design_lowpass(const FilterSpec& spec) {
    if (spec.sample_rate_hz <= 0) throw InvalidSpec("sample rate must be positive");
    if (!(spec.cutoff_hz > 0) || spec.cutoff_hz >= spec.sample_rate_hz / 2)
        throw InvalidSpec("cutoff must lie in (0, Nyquist)");
    if (spec.order <= 0 || spec.order % 2 != 0)
        throw InvalidSpec("order must be a positive even integer");

    // Prewarped analog cutoff, then bilinear transform of each conjugate
    // Butterworth pole pair into one biquad.
    const double warped = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);

    FilterCoefficients out;
    const int pairs = spec.order / 2;
    for (int i = 0; i < pairs; ++i) {
        const double theta =
            std::numbers::pi * (2.0 * i + 1.0) / (2.0 * spec.order) + std::numbers::pi / 2.0;
        // Analog pole pair s = wc * exp(+-j*theta): s^2 + 2*wc*cos(pi-theta)*s + wc^2.
        const double q = -2.0 * std::cos(theta);  // in (0, 2)
        const double wc = warped;
        const double a0 = 1.0 + q * wc + wc * wc;
        Biquad s{};
        s.b0 = wc * wc / a0;
        s.b1 = 2.0 * s.b0;
        s.b2 = s.b0;
        s.a1 = 2.0 * (wc * wc - 1.0) / a0;
        s.a2 = (1.0 - q * wc + wc * wc) / a0;
        out.sections.push_back(s);
    }

    // Pin DC gain to exactly 1 per section.
    for (auto& s : out.sections) {
        const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        s.b0 /= dc;
        s.b1 /= dc;
        s.b2 /= dc;
    }
    return out;
}

EegWindow apply_filter(const FilterCoefficients& coeffs, const EegWindow& window) {
    EegWindow out = window;
    for (const auto& s : coeffs.sections) {
        double z1 = 0.0, z2 = 0.0;
        for (double& x : out.samples) {
            const double y = s.b0 * x + z1;
            z1 = s.b1 * x - s.a1 * y + z2;
            z2 = s.b2 * x - s.a2 * y;
            x = y;
        }
    }
    return out;
}

BandPowers band_powers(const EegWindow& window) {
    const size_t n = window.samples.size();
    if (n < 2) throw WindowTooShort("window length must be >= 2");
    const double fs = window.sample_rate_hz;
    const double nyquist = fs / 2.0;

    BandPowers bp;
    // One-sided spectrum; mean-square contribution of bin k is 2*|X_k|^2/n^2
    // (no doubling for DC and Nyquist).
    for (size_t k = 0; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(n);
        std::complex<double> acc{0.0, 0.0};
        for (size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t) /
                               static_cast<double>(n);
            acc += window.samples[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        double p = std::norm(acc) / (static_cast<double>(n) * static_cast<double>(n));
        const bool is_edge = (k == 0) || (2 * k == n);
        if (!is_edge) p *= 2.0;

        if (f >= 0.5 && f < 4.0) bp.delta += p;
        else if (f >= 4.0 && f < 8.0) bp.theta += p;
        else if (f >= 8.0 && f < 13.0) bp.alpha += p;
        else if (f >= 13.0 && f < 30.0) bp.beta += p;
        else if (f >= 30.0 && f < nyquist) bp.gamma += p;
    }
    return bp;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    const char* s = tok.c_str();
    char* end = nullptr;
    out = std::strtod(s, &end);
    if (end == s) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

bool looks_like_header(const std::string& line) {
    // A header row has at least one cell that is not a number.
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v;
        if (!tok.empty() && !parse_double(tok, v)) return true;
    }
    return false;
}

}  // namespace

std::vector<LabeledWindow> load_dataset(const std::string& path, size_t window_len) {
    std::ifstream f(path);
    if (!f) throw MissingFile("cannot open " + path);

    std::vector<LabeledWindow> out;
    std::string line;
    size_t row = 0;
    bool first = true;
    while (std::getline(f, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (looks_like_header(line)) continue;
        }

        std::vector<double> cells;
        cells.reserve(window_len + 1);
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double v;
            if (!parse_double(tok, v))
                throw MalformedRow(row, "non-numeric cell '" + tok + "'");
            cells.push_back(v);
        }
        if (cells.size() != window_len + 1)
            throw MalformedRow(row, "expected " + std::to_string(window_len + 1) +
                                        " columns, got " + std::to_string(cells.size()));

        const double cls_d = cells.back();
        const int cls = static_cast<int>(cls_d);
        if (cls_d != cls || cls < 1 || cls > 5) throw UnknownClass(static_cast<int>(cls_d));

        LabeledWindow lw;
        lw.window.samples.assign(cells.begin(), cells.end() - 1);
        for (size_t i = 0; i < lw.window.samples.size(); ++i)
            if (!std::isfinite(lw.window.samples[i]))
                throw MalformedRow(row, "non-finite sample");
        lw.window.timestamp_ms = (out.size() * 1000u * window_len) / 178u;
        lw.source_class = cls;
        lw.binary_label = label_from_class(cls);
        out.push_back(std::move(lw));
    }
    return out;
}

std::vector<LabeledWindow> load_raw(const std::string& path, size_t window_len,
                                    BinaryLabel label, double sample_rate_hz) {
    std::ifstream f(path);
    if (!f) throw MissingFile("cannot open " + path);

    std::vector<double> samples;
    std::string line;
    size_t row = 0;
    while (std::getline(f, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double v;
        if (!parse_double(line, v)) throw MalformedRow(row, "non-numeric line '" + line + "'");
        samples.push_back(v);
    }

    std::vector<LabeledWindow> out;
    for (size_t i = 0; i + window_len <= samples.size(); i += window_len) {
        LabeledWindow lw;
        lw.window.samples.assign(samples.begin() + i, samples.begin() + i + window_len);
        lw.window.sample_rate_hz = sample_rate_hz;
        lw.window.timestamp_ms =
            static_cast<uint64_t>(1000.0 * static_cast<double>(i) / sample_rate_hz);
        lw.binary_label = label;
        lw.source_class = label == BinaryLabel::Seizure ? 1 : 5;
        out.push_back(std::move(lw));
    }
    return out;
}

}  // namespace seizknn
