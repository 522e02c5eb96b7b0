// seizknn: streaming EEG seizure detection with a capacity-bounded kNN model.
//
// Subcommands: gen, ingest, adapt, detect, eval, sweep, sim.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "seizknn/datagen.hpp"
#include "seizknn/detector.hpp"
#include "seizknn/eval.hpp"
#include "seizknn/pipeline_sim.hpp"

using namespace seizknn;

namespace {

struct CommonOpts {
    DetectorConfig cfg;
    std::string config_file;
    bool print_config = false;
};

// Tracks where each effective value came from: flag > env > config file > default.
struct SourcedValue {
    std::string value;
    std::string source;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream f(path);
    if (!f) throw MissingFile("cannot open config file " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

// Resolves one config key through the precedence chain and records its source.
class ConfigResolver {
  public:
    ConfigResolver(CLI::App* app, std::map<std::string, std::string> file_kv)
        : app_(app), file_(std::move(file_kv)) {}

    template <typename T>
    void resolve(const std::string& flag, const std::string& key, T& target) {
        std::ostringstream current;
        current << target;  // post-parse value: the flag if given, else the default
        SourcedValue sv{current.str(), app_->count(flag) > 0 ? "flag" : "default"};
        if (app_->count(flag) == 0) {
            if (auto it = file_.find(key); it != file_.end()) {
                std::istringstream(it->second) >> target;
                sv = {it->second, "config-file"};
            }
            std::string env = "SEIZKNN_" + key;
            for (auto& c : env) c = c == '.' ? '_' : static_cast<char>(std::toupper(c));
            if (const char* e = std::getenv(env.c_str())) {
                std::istringstream(e) >> target;
                sv = {e, "env"};
            }
        }
        effective_[key] = sv;
    }

    void print(std::ostream& os) const {
        nlohmann::json j;
        for (const auto& [k, sv] : effective_) j[k] = {{"value", sv.value}, {"source", sv.source}};
        os << j.dump(2) << "\n";
    }

  private:
    CLI::App* app_;
    std::map<std::string, std::string> file_;
    std::map<std::string, SourcedValue> effective_;
};

void add_common_flags(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_file, "key=value config file");
    sub->add_flag("--print-config", o.print_config, "print effective config as JSON");
    sub->add_option("--k", o.cfg.k, "neighbors per classification (odd)")
        ->capture_default_str();
    sub->add_option("--alpha", o.cfg.alpha, "training capacity per class")
        ->capture_default_str();
    sub->add_option("--window-len", o.cfg.window_len, "samples per window")
        ->capture_default_str();
    sub->add_option("--sample-rate-hz", o.cfg.sample_rate_hz, "sampling rate")
        ->capture_default_str();
    sub->add_option("--filter-cutoff-hz", o.cfg.filter.cutoff_hz, "lowpass cutoff")
        ->capture_default_str();
    sub->add_option("--filter-order", o.cfg.filter.order, "lowpass order (even)")
        ->capture_default_str();
    sub->add_option("--threshold", o.cfg.threshold_confidence,
                    "seizure confidence threshold in [0.5, 1]")
        ->capture_default_str();
}

// Must run after parsing; merges config file + env under any flags given.
void finalize_config(CLI::App* sub, CommonOpts& o, std::ostream& diag) {
    std::map<std::string, std::string> file_kv;
    if (!o.config_file.empty()) file_kv = read_config_file(o.config_file);
    ConfigResolver r(sub, std::move(file_kv));
    r.resolve("--k", "k", o.cfg.k);
    r.resolve("--alpha", "alpha", o.cfg.alpha);
    r.resolve("--window-len", "window_len", o.cfg.window_len);
    r.resolve("--sample-rate-hz", "sample_rate_hz", o.cfg.sample_rate_hz);
    r.resolve("--filter-cutoff-hz", "filter.cutoff_hz", o.cfg.filter.cutoff_hz);
    r.resolve("--filter-order", "filter.order", o.cfg.filter.order);
    r.resolve("--threshold", "threshold_confidence", o.cfg.threshold_confidence);
    o.cfg.filter.sample_rate_hz = o.cfg.sample_rate_hz;
    if (o.print_config) r.print(diag);
}

std::vector<LabeledWindow> load_input(const std::string& path, const std::string& format,
                                      size_t window_len, const std::string& raw_label) {
    if (format == "raw")
        return load_raw(path, window_len,
                        raw_label == "seizure" ? BinaryLabel::Seizure
                                               : BinaryLabel::NonSeizure);
    return load_dataset(path, window_len);
}

int cmd_gen(const std::string& out, size_t rows_per_class, uint64_t seed) {
    DataGenParams p;
    p.rows_per_class = rows_per_class;
    write_dataset_csv(generate_dataset(p, seed), out);
    std::cerr << "wrote " << rows_per_class * 5 << " rows to " << out << "\n";
    return 0;
}

int cmd_ingest(const CommonOpts& o, const std::string& data, const std::string& format,
               const std::string& raw_label) {
    const auto rows = load_input(data, format, o.cfg.window_len, raw_label);
    size_t seiz = 0;
    double lo = 0, hi = 0;
    for (const auto& lw : rows) {
        if (lw.binary_label == BinaryLabel::Seizure) ++seiz;
        for (double v : lw.window.samples) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    nlohmann::json j{{"rows", rows.size()},
                     {"seizure_rows", seiz},
                     {"non_seizure_rows", rows.size() - seiz},
                     {"window_len", o.cfg.window_len},
                     {"amplitude_min", lo},
                     {"amplitude_max", hi}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_adapt(const CommonOpts& o, const std::string& data, const std::string& format,
              const std::string& raw_label, const std::string& model_path) {
    const auto rows = load_input(data, format, o.cfg.window_len, raw_label);
    const auto coeffs = design_lowpass(o.cfg.filter);
    TrainingStore store(o.cfg.alpha, o.cfg.window_len, o.cfg.q_format);
    const AdaptResult ar = adapt(store, rows, coeffs, o.cfg.q_format);
    store.snapshot(model_path);
    const auto mem = store.memory_footprint();
    std::cerr << "adapted " << ar.inserted << " windows in "
              << static_cast<double>(ar.duration.count()) / 1000.0 << " ms; store "
              << store.size() << " entries, " << mem.total_bytes << " bytes -> "
              << model_path << "\n";
    return 0;
}

int cmd_detect(const CommonOpts& o, const std::string& model_path, const std::string& input,
               const std::string& format, const std::string& raw_label,
               const std::string& emit_events, const std::string& emit_frames) {
    const TrainingStore store = TrainingStore::restore(model_path);
    Detector det(o.cfg, store);

    std::vector<double> stream;
    if (input == "-") {
        double v;
        while (std::cin >> v) stream.push_back(v);
    } else {
        for (const auto& lw : load_input(input, format, o.cfg.window_len, raw_label))
            stream.insert(stream.end(), lw.window.samples.begin(), lw.window.samples.end());
    }
    const auto events = det.push_samples(stream);

    std::optional<std::ofstream> ev_out, fr_out;
    if (!emit_events.empty()) ev_out.emplace(emit_events, std::ios::trunc);
    if (!emit_frames.empty()) fr_out.emplace(emit_frames, std::ios::binary | std::ios::trunc);
    for (const auto& ev : events) {
        nlohmann::json j{{"window_seq", ev.window_seq},
                         {"timestamp_ms", ev.timestamp_ms},
                         {"label", to_string(ev.label)},
                         {"confidence", ev.confidence},
                         {"latency_us", ev.latency_us}};
        (ev_out ? *ev_out : std::cout) << j.dump() << "\n";
        if (fr_out) {
            const OutputFrame f = encode_frame(ev);
            fr_out->write(reinterpret_cast<const char*>(f.data()),
                          static_cast<std::streamsize>(f.size()));
        }
    }
    std::cerr << events.size() << " windows classified\n";
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& data, size_t trials, uint64_t seed,
             bool json_out) {
    const auto rows = load_dataset(data, o.cfg.window_len);
    double sum = 0, sumsq = 0, sens = 0, spec = 0;
    EvalReport last;
    for (size_t t = 0; t < trials; ++t) {
        last = evaluate(rows, o.cfg, seed + t);
        sum += last.accuracy;
        sumsq += last.accuracy * last.accuracy;
        sens += last.sensitivity;
        spec += last.specificity;
    }
    const double mean = sum / static_cast<double>(trials);
    const double var =
        trials > 1 ? std::max(0.0, (sumsq - sum * mean) / static_cast<double>(trials - 1))
                   : 0.0;
    if (json_out && trials == 1) {
        std::cout << eval_report_json(last) << "\n";
    } else {
        nlohmann::json j{{"trials", trials},
                         {"seed", seed},
                         {"mean_accuracy", mean},
                         {"std_accuracy", std::sqrt(var)},
                         {"mean_sensitivity", sens / static_cast<double>(trials)},
                         {"mean_specificity", spec / static_cast<double>(trials)},
                         {"k", o.cfg.k},
                         {"alpha", o.cfg.alpha}};
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& data, std::vector<size_t> k_values,
              std::vector<size_t> alpha_values, size_t trials, uint64_t seed,
              const std::string& trials_csv, const std::string& agg_csv) {
    const auto rows = load_dataset(data, o.cfg.window_len);
    const SweepGrid grid = sweep(rows, k_values, alpha_values, trials, seed);

    std::ofstream tf(trials_csv, std::ios::trunc);
    if (!tf) throw Io("cannot open " + trials_csv);
    tf << "k,alpha,seed,accuracy\n";
    tf.precision(17);
    for (const auto& r : grid.trials)
        tf << r.k << ',' << r.alpha << ',' << r.seed << ',' << r.accuracy << '\n';

    std::ofstream af(agg_csv, std::ios::trunc);
    if (!af) throw Io("cannot open " + agg_csv);
    af << "k,alpha,mean,std,n\n";
    af.precision(17);
    for (const auto& r : grid.aggregates)
        af << r.k << ',' << r.alpha << ',' << r.mean_accuracy << ',' << r.std_accuracy
           << ',' << r.n_trials << '\n';

    const auto best = std::max_element(
        grid.aggregates.begin(), grid.aggregates.end(),
        [](const auto& a, const auto& b) { return a.mean_accuracy < b.mean_accuracy; });
    std::cerr << "best cell: k=" << best->k << " alpha=" << best->alpha
              << " mean=" << best->mean_accuracy << "\n";
    return 0;
}

int cmd_sim(size_t m, size_t k, size_t n, double clock_hz,
            const std::vector<std::string>& cost_kvs, bool do_sweep,
            std::vector<size_t> m_values, std::vector<size_t> k_values,
            const std::string& out_csv) {
    StageCostModel model;
    for (const auto& kv : cost_kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidParams("bad cost override: " + kv);
        const std::string key = kv.substr(0, eq);
        const uint64_t val = std::stoull(kv.substr(eq + 1));
        if (key == "mac") model.cycles_per_mac = val;
        else if (key == "compare") model.cycles_per_compare = val;
        else if (key == "insert") model.cycles_per_insert_step = val;
        else if (key == "vote") model.cycles_per_vote_step = val;
        else if (key == "overhead") model.fixed_overhead_cycles = val;
        else throw InvalidParams("unknown cost key: " + key);
    }

    std::vector<SimReport> reports;
    if (do_sweep) {
        if (m_values.empty()) m_values = {20, 60, 200, 600, 2000};
        if (k_values.empty()) k_values = {1, 3, 5};
        reports = sweep_design_space(m_values, k_values, n, model, clock_hz);
    } else {
        reports.push_back(simulate_classification(m, n, k, model, clock_hz));
    }

    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out_csv.empty()) {
        f.open(out_csv, std::ios::trunc);
        if (!f) throw Io("cannot open " + out_csv);
        os = &f;
    }
    *os << sim_csv_header() << "\n";
    for (const auto& r : reports) *os << sim_csv_row(r) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming EEG seizure detection (kNN, fixed-point datapath)"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string data, input = "-", format = "csv", raw_label = "nonseizure";
    std::string model_path = "model.knn";
    std::string emit_events, emit_frames;
    std::string out_csv, trials_csv = "sweep_trials.csv", agg_csv = "sweep_agg.csv";
    size_t trials = 100, rows_per_class = 300;
    uint64_t seed = 1;
    bool json_out = false;
    size_t sim_m = 60, sim_k = 3, sim_n = 178;
    double clock_hz = 80e6;
    bool sim_sweep = false;
    std::vector<std::string> cost_kvs;
    std::vector<size_t> k_values{1, 3, 5, 7}, alpha_values{10, 20, 30, 50};
    std::vector<size_t> sim_m_values, sim_k_values;

    auto* gen = app.add_subcommand("gen", "generate a synthetic Bonn-style dataset CSV");
    gen->add_option("--out", data, "output CSV path")->required();
    gen->add_option("--rows-per-class", rows_per_class, "rows per class (5 classes)")
        ->capture_default_str();
    gen->add_option("--seed", seed, "generator seed")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "validate and summarize a dataset");
    add_common_flags(ingest, o);
    ingest->add_option("--data", data, "dataset path")->required();
    ingest->add_option("--format", format, "csv | raw")->capture_default_str();
    ingest->add_option("--raw-label", raw_label, "label for raw input")->capture_default_str();

    auto* ad = app.add_subcommand("adapt", "build and snapshot a per-user model");
    add_common_flags(ad, o);
    ad->add_option("--data", data, "training windows (csv or raw)")->required();
    ad->add_option("--format", format, "csv | raw")->capture_default_str();
    ad->add_option("--raw-label", raw_label, "label for raw input")->capture_default_str();
    ad->add_option("--model", model_path, "snapshot output path")->capture_default_str();

    auto* det = app.add_subcommand("detect", "stream samples through the detector");
    add_common_flags(det, o);
    det->add_option("--model", model_path, "model snapshot")->required();
    det->add_option("--input", input, "csv/raw file or - for stdin")->capture_default_str();
    det->add_option("--format", format, "csv | raw")->capture_default_str();
    det->add_option("--emit", emit_events, "events.jsonl output path (default stdout)");
    det->add_option("--emit-frames", emit_frames, "frames.bin output path");

    auto* ev = app.add_subcommand("eval", "stratified train/test evaluation");
    add_common_flags(ev, o);
    ev->add_option("--data", data, "dataset CSV")->required();
    ev->add_option("--trials", trials, "number of seeded trials")->capture_default_str();
    ev->add_option("--seed", seed, "base seed")->capture_default_str();
    ev->add_flag("--json", json_out, "emit the full single-trial report as JSON");

    auto* sw = app.add_subcommand("sweep", "k x alpha accuracy sweep");
    add_common_flags(sw, o);
    sw->add_option("--data", data, "dataset CSV")->required();
    sw->add_option("--k-values", k_values, "k grid")->capture_default_str();
    sw->add_option("--alpha-values", alpha_values, "alpha grid")->capture_default_str();
    sw->add_option("--trials", trials, "trials per cell")->capture_default_str();
    sw->add_option("--seed", seed, "base seed")->capture_default_str();
    sw->add_option("--out", trials_csv, "trial rows CSV")->capture_default_str();
    sw->add_option("--out-agg", agg_csv, "aggregate rows CSV")->capture_default_str();

    auto* sim = app.add_subcommand("sim", "cycle-approximate pipeline cost model");
    sim->add_option("--m", sim_m, "stored entries")->capture_default_str();
    sim->add_option("--k", sim_k, "neighbors")->capture_default_str();
    sim->add_option("--n", sim_n, "feature length")->capture_default_str();
    sim->add_option("--clock-hz", clock_hz, "datapath clock")->capture_default_str();
    sim->add_option("--costs", cost_kvs, "cost overrides, e.g. mac=2 overhead=0");
    sim->add_flag("--sweep", sim_sweep, "sweep m x k instead of a single point");
    sim->add_option("--m-values", sim_m_values, "m grid for --sweep");
    sim->add_option("--k-values", sim_k_values, "k grid for --sweep");
    sim->add_option("--out", out_csv, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(data, rows_per_class, seed);
        CLI::App* active = app.get_subcommands().front();
        if (active != sim) finalize_config(active, o, std::cerr);
        if (ingest->parsed()) return cmd_ingest(o, data, format, raw_label);
        if (ad->parsed()) return cmd_adapt(o, data, format, raw_label, model_path);
        if (det->parsed())
            return cmd_detect(o, model_path, input, format, raw_label, emit_events,
                              emit_frames);
        if (ev->parsed()) return cmd_eval(o, data, trials, seed, json_out);
        if (sw->parsed())
            return cmd_sweep(o, data, k_values, alpha_values, trials, seed, trials_csv,
                             agg_csv);
        if (sim->parsed())
            return cmd_sim(sim_m, sim_k, sim_n, clock_hz, cost_kvs, sim_sweep,
                           sim_m_values, sim_k_values, out_csv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
