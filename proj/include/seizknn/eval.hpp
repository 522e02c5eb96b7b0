#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seizknn/detector.hpp"

namespace seizknn {

struct Confusion {
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    uint64_t total() const { return tp + fp + fn + tn; }
};

struct EvalReport {
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    Confusion confusion;
    uint64_t n_test = 0;
    uint64_t seed = 0;
    DetectorConfig config;
    double adapt_seconds = 0.0;
};

struct Split {
    std::vector<size_t> train;  // dataset indices, alpha per class
    std::vector<size_t> test;   // all remaining indices, in dataset order
};

struct SweepTrialRow {
    size_t k, alpha;
    uint64_t seed;
    double accuracy;
};

struct SweepAggregateRow {
    size_t k, alpha;
    double mean_accuracy, std_accuracy;
    size_t n_trials;
};

struct SweepGrid {
    std::vector<SweepTrialRow> trials;
    std::vector<SweepAggregateRow> aggregates;
};

// Uniformly random alpha-per-class train subset, deterministic given seed;
// test = everything else.
Split stratified_split(std::span<const LabeledWindow> dataset, size_t alpha_per_class,
                       uint64_t seed);

// Build a store from the train split via adapt, classify every test window,
// tally the confusion matrix.
EvalReport evaluate(std::span<const LabeledWindow> dataset, const DetectorConfig& config,
                    uint64_t seed);

// n_trials evaluations per (k, alpha) cell with seeds base_seed..base_seed+n-1.
SweepGrid sweep(std::span<const LabeledWindow> dataset, const std::vector<size_t>& k_values,
                const std::vector<size_t>& alpha_values, size_t n_trials,
                uint64_t base_seed);

std::string eval_report_json(const EvalReport& r);

}  // namespace seizknn
