#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seizknn/types.hpp"

namespace seizknn {

// Per-operation cycle costs of the five-stage datapath. The compare cost is
// a single constant with no operand dependence (the constant-time comparator
// contract).
struct StageCostModel {
    uint64_t cycles_per_mac = 1;
    uint64_t cycles_per_compare = 1;
    uint64_t cycles_per_insert_step = 1;
    uint64_t cycles_per_vote_step = 1;
    uint64_t fixed_overhead_cycles = 10;  // per stage, five stages

    void validate() const;
    // Cycles charged for comparing one candidate against the current buffer
    // threshold; identical for every candidate by construction.
    uint64_t compare_cost() const { return cycles_per_compare; }
};

constexpr uint64_t kUserDataBudgetBytes = 81920;  // 80 KiB
constexpr size_t kPipelineStages = 5;

struct SimReport {
    uint64_t cycles_per_window = 0;
    double latency_us = 0.0;
    double max_windows_per_second = 0.0;
    uint64_t store_bytes = 0;
    bool fits_budget = false;
    bool realtime_ok = false;
    // echo
    size_t m = 0, n = 0, k = 0;
    double clock_hz = 0.0;
};

// Sequential sum of stage costs for classifying one window against m stored
// entries: distance stage m*n MACs, selection stage m compares plus m*k
// insert steps, vote stage k steps, plus five fixed stage overheads. Store
// reads are folded into the distance stage stream.
SimReport simulate_classification(size_t store_entries, size_t n, size_t k,
                                  const StageCostModel& model, double clock_hz,
                                  double window_period_s = 1.0);

std::vector<SimReport> sweep_design_space(const std::vector<size_t>& m_values,
                                          const std::vector<size_t>& k_values, size_t n,
                                          const StageCostModel& model, double clock_hz,
                                          double window_period_s = 1.0);

std::string sim_csv_header();
std::string sim_csv_row(const SimReport& r);

}  // namespace seizknn
