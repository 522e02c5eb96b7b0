#include "seizknn/pipeline_sim.hpp"

#include <sstream>

#include "seizknn/store.hpp"

namespace seizknn {

void StageCostModel::validate() const {
    if (cycles_per_mac < 1 || cycles_per_compare < 1 || cycles_per_insert_step < 1 ||
        cycles_per_vote_step < 1)
        throw InvalidParams("per-operation cycle costs must be >= 1");
}

SimReport simulate_classification(size_t store_entries, size_t n, size_t k,
                                  const StageCostModel& model, double clock_hz,
                                  double window_period_s) {
    model.validate();
    if (store_entries < 1 || n < 1 || k < 1 || k > store_entries)
        throw InvalidParams("require m >= 1, n >= 1, 1 <= k <= m");
    if (clock_hz <= 0) throw InvalidParams("clock must be positive");

    const uint64_t m = store_entries;
    const uint64_t distance_stage = m * n * model.cycles_per_mac;
    const uint64_t selection_stage =
        m * (model.compare_cost() + k * model.cycles_per_insert_step);
    const uint64_t vote_stage = k * model.cycles_per_vote_step;
    const uint64_t overhead = kPipelineStages * model.fixed_overhead_cycles;

    SimReport r;
    r.m = store_entries;
    r.n = n;
    r.k = k;
    r.clock_hz = clock_hz;
    r.cycles_per_window = distance_stage + selection_stage + vote_stage + overhead;
    r.latency_us = static_cast<double>(r.cycles_per_window) / clock_hz * 1e6;
    r.max_windows_per_second = clock_hz / static_cast<double>(r.cycles_per_window);
    r.store_bytes = static_cast<uint64_t>(m) * (n * 2 + kBytesPerLabel + kBytesPerIndex);
    r.fits_budget = r.store_bytes <= kUserDataBudgetBytes;
    r.realtime_ok = r.latency_us <= window_period_s * 1e6;
    return r;
}

std::vector<SimReport> sweep_design_space(const std::vector<size_t>& m_values,
                                          const std::vector<size_t>& k_values, size_t n,
                                          const StageCostModel& model, double clock_hz,
                                          double window_period_s) {
    if (m_values.empty() || k_values.empty())
        throw InvalidParams("sweep requires non-empty value lists");
    std::vector<SimReport> out;
    out.reserve(m_values.size() * k_values.size());
    for (size_t m : m_values)
        for (size_t k : k_values)
            out.push_back(
                simulate_classification(m, n, k, model, clock_hz, window_period_s));
    return out;
}

std::string sim_csv_header() {
    return "m,k,n,cycles,latency_us,windows_per_s,store_bytes,fits_budget,realtime_ok";
}

std::string sim_csv_row(const SimReport& r) {
    std::ostringstream ss;
    ss << r.m << ',' << r.k << ',' << r.n << ',' << r.cycles_per_window << ','
       << r.latency_us << ',' << r.max_windows_per_second << ',' << r.store_bytes << ','
       << (r.fits_budget ? 1 : 0) << ',' << (r.realtime_ok ? 1 : 0);
    return ss.str();
}

}  // namespace seizknn
