#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seizknn/types.hpp"

namespace seizknn {

// Seedable generator for a Bonn-style corpus: single-channel 178-sample rows,
// class 1 ictal (high-amplitude rhythmic discharge), classes 2-3 interictal
// (sporadic epileptiform spikes), classes 4-5 healthy background. Amplitudes
// stay within the default 10.6 fixed-point range.
struct DataGenParams {
    size_t rows_per_class = 300;
    size_t window_len = 178;
    double sample_rate_hz = 178.0;

    // Ictal rhythmic discharge amplitude, lognormal(log(mu), sigma).
    double ictal_amp_mu = 125.0;
    double ictal_amp_sigma = 0.5;
    // Stereotyped discharge morphology shared across ictal windows (windows
    // are cut at discharge onset, so phase varies little).
    double discharge_hz = 3.3;
    double discharge_hz_jitter = 0.25;
    double discharge_phase_jitter = 0.35;
    // Interictal epileptiform bursts (same morphology, sub-ictal amplitude).
    double burst_prob = 0.25;
    double burst_amp_mu = 43.0;
    double burst_amp_sigma = 0.5;
    // Probability that a non-seizure row carries a large movement/blink
    // artifact burst, and its amplitude range.
    double artifact_prob = 0.18;
    double artifact_amp_lo = 60.0;
    double artifact_amp_hi = 260.0;
};

std::vector<LabeledWindow> generate_dataset(const DataGenParams& params, uint64_t seed);

// Writes the corpus in the CSV schema load_dataset reads back.
void write_dataset_csv(const std::vector<LabeledWindow>& rows, const std::string& path);

}  // namespace seizknn
