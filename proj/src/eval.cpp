#include "seizknn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nlohmann/json.hpp"

namespace seizknn {

Split stratified_split(std::span<const LabeledWindow> dataset, size_t alpha_per_class,
                       uint64_t seed) {
    std::vector<size_t> seizure, non;
    for (size_t i = 0; i < dataset.size(); ++i)
        (dataset[i].binary_label == BinaryLabel::Seizure ? seizure : non).push_back(i);

    if (seizure.size() < alpha_per_class)
        throw InsufficientClass(BinaryLabel::Seizure, seizure.size(), alpha_per_class);
    if (non.size() < alpha_per_class)
        throw InsufficientClass(BinaryLabel::NonSeizure, non.size(), alpha_per_class);

    std::mt19937_64 rng(seed);
    std::shuffle(seizure.begin(), seizure.end(), rng);
    std::shuffle(non.begin(), non.end(), rng);

    Split s;
    s.train.assign(seizure.begin(), seizure.begin() + alpha_per_class);
    s.train.insert(s.train.end(), non.begin(), non.begin() + alpha_per_class);

    std::vector<bool> in_train(dataset.size(), false);
    for (size_t i : s.train) in_train[i] = true;
    for (size_t i = 0; i < dataset.size(); ++i)
        if (!in_train[i]) s.test.push_back(i);
    return s;
}

EvalReport evaluate(std::span<const LabeledWindow> dataset, const DetectorConfig& config,
                    uint64_t seed) {
    config.validate();
    const Split split = stratified_split(dataset, config.alpha, seed);

    std::vector<LabeledWindow> train;
    train.reserve(split.train.size());
    for (size_t i : split.train) train.push_back(dataset[i]);

    const FilterCoefficients coeffs = design_lowpass(config.filter);
    TrainingStore store(config.alpha, config.window_len, config.q_format);
    const AdaptResult ar = adapt(store, train, coeffs, config.q_format);

    EvalReport r;
    r.seed = seed;
    r.config = config;
    r.adapt_seconds = static_cast<double>(ar.duration.count()) * 1e-6;

    for (size_t i : split.test) {
        const Vote v = classify_window(dataset[i].window, store, config, coeffs);
        const bool truth = dataset[i].binary_label == BinaryLabel::Seizure;
        const bool pred = v.label == BinaryLabel::Seizure;
        if (truth && pred) ++r.confusion.tp;
        else if (!truth && pred) ++r.confusion.fp;
        else if (truth && !pred) ++r.confusion.fn;
        else ++r.confusion.tn;
    }
    r.n_test = r.confusion.total();
    const auto& c = r.confusion;
    r.accuracy = r.n_test ? static_cast<double>(c.tp + c.tn) / static_cast<double>(r.n_test) : 0.0;
    r.sensitivity = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    r.specificity = (c.tn + c.fp) ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp) : 0.0;
    return r;
}

SweepGrid sweep(std::span<const LabeledWindow> dataset, const std::vector<size_t>& k_values,
                const std::vector<size_t>& alpha_values, size_t n_trials,
                uint64_t base_seed) {
    if (k_values.empty() || alpha_values.empty() || n_trials == 0)
        throw InvalidParams("sweep requires non-empty grids and n_trials >= 1");
    for (size_t k : k_values)
        if (k == 0 || k % 2 == 0) throw InvalidParams("all k must be positive odd");

    SweepGrid grid;
    for (size_t k : k_values) {
        for (size_t alpha : alpha_values) {
            double sum = 0.0, sumsq = 0.0;
            for (size_t t = 0; t < n_trials; ++t) {
                DetectorConfig cfg;
                cfg.k = k;
                cfg.alpha = alpha;
                const EvalReport r = evaluate(dataset, cfg, base_seed + t);
                grid.trials.push_back(SweepTrialRow{k, alpha, base_seed + t, r.accuracy});
                sum += r.accuracy;
                sumsq += r.accuracy * r.accuracy;
            }
            const double mean = sum / static_cast<double>(n_trials);
            const double var =
                n_trials > 1
                    ? std::max(0.0, (sumsq - sum * mean) / static_cast<double>(n_trials - 1))
                    : 0.0;
            grid.aggregates.push_back(
                SweepAggregateRow{k, alpha, mean, std::sqrt(var), n_trials});
        }
    }
    return grid;
}

std::string eval_report_json(const EvalReport& r) {
    nlohmann::json j{
        {"accuracy", r.accuracy},
        {"sensitivity", r.sensitivity},
        {"specificity", r.specificity},
        {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                       {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
        {"n_test", r.n_test},
        {"seed", r.seed},
        {"adapt_seconds", r.adapt_seconds},
        {"config", {{"k", r.config.k}, {"alpha", r.config.alpha},
                    {"window_len", r.config.window_len},
                    {"sample_rate_hz", r.config.sample_rate_hz},
                    {"filter_cutoff_hz", r.config.filter.cutoff_hz},
                    {"filter_order", r.config.filter.order},
                    {"q_format", std::to_string(r.config.q_format.integer_bits) + "." +
                                     std::to_string(r.config.q_format.fraction_bits)},
                    {"threshold_confidence", r.config.threshold_confidence}}}};
    return j.dump(2);
}

}  // namespace seizknn
