#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "secalloc/experiments.hpp"
#include "secalloc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace secalloc;

namespace {

constexpr int EXIT_UNSCHEDULABLE = 1;
constexpr int EXIT_INPUT_ERROR = 2;
constexpr int EXIT_LIMIT_EXCEEDED = 3;

int cmd_generate(const std::string& params_path, const std::string& out_dir, int replications,
                 std::uint64_t master_seed) {
    std::ifstream in(params_path);
    if (!in) {
        std::cerr << "error: cannot open params file " << params_path << "\n";
        return EXIT_INPUT_ERROR;
    }
    json pj;
    try {
        in >> pj;
    } catch (const std::exception& e) {
        std::cerr << "error: params file is not valid JSON: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }

    GenParams base;
    try {
        base = gen_params_from_json(pj);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    if (pj.contains("replications"))
        replications = pj.at("replications").get<int>();
    if (pj.contains("master_seed"))
        master_seed = pj.at("master_seed").get<std::uint64_t>();
    const bool has_single_util = pj.contains("total_rt_util");

    fs::create_directories(out_dir);

    std::vector<SweepEntry> entries;
    if (has_single_util) {
        Rng master(master_seed);
        for (int rep = 0; rep < replications; ++rep) {
            GenParams p = base;
            p.seed = master.derive(static_cast<std::uint64_t>(rep)).seed();
            entries.push_back({0, rep, std::move(p)});
        }
    } else {
        entries = sweep_params(base, replications, master_seed);
    }

    json manifest;
    manifest["master_seed"] = master_seed;
    manifest["params"] = gen_params_to_json(base);
    manifest["entries"] = json::array();
    for (const auto& entry : entries) {
        std::string name = "taskset_p" + std::to_string(entry.point_index) + "_r" +
                           std::to_string(entry.replication) + ".json";
        json record{{"file", name},
                    {"point_index", entry.point_index},
                    {"total_rt_util", to_fraction_string(entry.params.total_rt_util)},
                    {"replication", entry.replication},
                    {"seed", entry.params.seed}};
        try {
            SystemConfig config = generate_taskset(entry.params);
            save_config(config, (fs::path(out_dir) / name).string());
            record["status"] = "ok";
        } catch (const TaskGenError& e) {
            record["status"] = "generation_failed";
            record["diagnostic"] = e.what();
        }
        manifest["entries"].push_back(std::move(record));
    }
    std::ofstream mout(fs::path(out_dir) / "manifest.json");
    mout << manifest.dump(2) << "\n";
    std::cout << "wrote " << manifest["entries"].size() << " entries to " << out_dir << "\n";
    return 0;
}

int cmd_allocate(const std::string& taskset_path, const std::string& scheme, std::uint64_t limit,
                 const std::string& out_path) {
    SystemConfig config;
    try {
        config = load_config(taskset_path);
        auto violations = validate_config(config);
        if (!violations.empty()) {
            for (const auto& v : violations)
                std::cerr << "invalid taskset: " << v.message << "\n";
            return EXIT_INPUT_ERROR;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }

    AllocationOutcome outcome;
    if (scheme == "hydra") {
        outcome = hydra_allocate(config);
    } else if (scheme == "single-core") {
        outcome = single_core_allocate(config);
    } else if (scheme == "optimal") {
        outcome = exhaustive_optimal(config, {limit});
    } else {
        std::cerr << "error: unknown scheme " << scheme << "\n";
        return EXIT_INPUT_ERROR;
    }

    json j = allocation_to_json(outcome, scheme);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return EXIT_INPUT_ERROR;
        }
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }

    if (outcome.status == AllocationStatus::limit_exceeded) {
        std::cerr << "optimal search limit exceeded (raise --limit)\n";
        return EXIT_LIMIT_EXCEEDED;
    }
    if (!outcome.schedulable()) {
        std::cerr << "unschedulable: " << outcome.failed_task << "\n";
        return EXIT_UNSCHEDULABLE;
    }
    return 0;
}

int cmd_simulate(const std::string& taskset_path, const std::string& alloc_path, double duration_s,
                 int attacks, std::uint64_t seed, const std::string& out_dir,
                 const std::string& trace_path, int cdf_points) {
    SystemConfig config;
    StoredAllocation stored;
    try {
        config = load_config(taskset_path);
        stored = load_allocation(alloc_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    if (stored.status != AllocationStatus::ok) {
        std::cerr << "error: allocation file records status != ok; nothing to simulate\n";
        return EXIT_INPUT_ERROR;
    }
    if (stored.cores != config.platform.core_count) {
        std::cerr << "error: allocation cores (" << stored.cores << ") do not match taskset ("
                  << config.platform.core_count << ")\n";
        return EXIT_INPUT_ERROR;
    }
    for (const auto& s : config.sec_tasks) {
        if (!stored.allocation.assignment.count(s.id)) {
            std::cerr << "error: allocation misses security task " << s.id << "\n";
            return EXIT_INPUT_ERROR;
        }
    }
    if (stored.has_rt_partition)
        config.platform.rt_partition = stored.rt_partition;

    auto duration = TimeValue{static_cast<std::int64_t>(duration_s * 1e6)};
    SimOptions options;
    options.record_events = !trace_path.empty();

    try {
        std::vector<AttackEvent> plan;
        if (attacks > 0)
            plan = inject_attacks(config, attacks, duration, seed);
        SimTrace trace = simulate(config, stored.allocation, duration, plan, options);

        fs::create_directories(out_dir);
        write_detection_csv((fs::path(out_dir) / "detections.csv").string(), trace.detections);
        if (!trace_path.empty())
            write_trace_csv(trace_path, trace.events);

        json summary;
        summary["duration_us"] = duration.us;
        summary["attacks"] = attacks;
        summary["detected"] = trace.detections.size();
        summary["censored"] = trace.censored_attacks;
        long misses = 0;
        for (const auto& entry : trace.deadline_misses)
            misses += entry.second;
        summary["deadline_misses"] = misses;
        if (!trace.detections.empty()) {
            std::vector<TimeValue> latencies;
            for (const auto& d : trace.detections)
                latencies.push_back(d.latency);
            Rational sum = 0;
            TimeValue max{0};
            for (auto l : latencies) {
                sum += to_rational(l);
                max = std::max(max, l);
            }
            summary["mean_latency_us"] =
                to_decimal_string(sum / Rational(static_cast<long>(latencies.size())));
            summary["max_latency_us"] = max.us;
            json cdf = json::array();
            for (int i = 1; i <= cdf_points; ++i) {
                TimeValue x{max.us * i / cdf_points};
                cdf.push_back({{"latency_us", x.us},
                               {"fraction", to_decimal_string(empirical_cdf(latencies, x))}});
            }
            summary["cdf"] = std::move(cdf);
        } else {
            summary["note"] = "no detection samples";
        }
        std::ofstream sout(fs::path(out_dir) / "summary.json");
        sout << summary.dump(2) << "\n";
        std::cout << summary.dump(2) << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    return 0;
}

void write_appendix_csv(const std::string& path, const std::vector<AppendixCompareRow>& rows) {
    std::ofstream out(path);
    out << "point_index,total_rt_util,replication,seed,status,delta_eta_percent,eta_optimal,eta_hydra\n";
    for (const auto& r : rows) {
        out << r.point_index << ',' << to_decimal_string(r.total_rt_util) << ',' << r.replication
            << ',' << r.seed << ',' << r.status << ',';
        if (r.delta_eta_percent)
            out << to_decimal_string(*r.delta_eta_percent);
        out << ',' << to_decimal_string(r.eta_optimal) << ',' << to_decimal_string(r.eta_hydra)
            << '\n';
    }
}

void write_detection_rows_csv(const std::string& path, const DetectionCdfResult& result) {
    std::ofstream out(path);
    out << "cores,config_index,seed,status,hydra_detected,hydra_censored,single_detected,"
           "single_censored,hydra_mean_latency_us,single_mean_latency_us,improvement_percent\n";
    for (const auto& r : result.rows) {
        out << r.cores << ',' << r.config_index << ',' << r.seed << ',' << r.status << ','
            << r.hydra_detected << ',' << r.hydra_censored << ',' << r.single_detected << ','
            << r.single_censored << ',';
        if (r.hydra_mean_us)
            out << to_decimal_string(*r.hydra_mean_us);
        out << ',';
        if (r.single_mean_us)
            out << to_decimal_string(*r.single_mean_us);
        out << ',';
        if (r.improvement_percent)
            out << to_decimal_string(*r.improvement_percent);
        out << '\n';
    }
}

void write_detection_samples_csv(const std::string& path, const DetectionCdfResult& result) {
    std::ofstream out(path);
    out << "cores,scheme,latency_us\n";
    for (const auto& [cores, per_scheme] : result.samples)
        for (const auto& [scheme, samples] : per_scheme)
            for (TimeValue v : samples)
                out << cores << ',' << scheme << ',' << v.us << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    out << "point_index,total_rt_util,replication,seed,gen_status,hydra_status,single_status\n";
    for (const auto& r : rows)
        out << r.point_index << ',' << to_decimal_string(r.total_rt_util) << ',' << r.replication
            << ',' << r.seed << ',' << r.gen_status << ',' << r.hydra_status << ','
            << r.single_status << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Security-task allocation and schedulability toolkit"};
    app.require_subcommand(1);

    // generate
    std::string gen_params_path, gen_out_dir;
    int gen_replications = 25;
    std::uint64_t gen_master_seed = 2024;
    auto* generate = app.add_subcommand("generate", "Generate synthetic taskset files");
    generate->add_option("--params", gen_params_path, "Generation parameters (JSON)")->required();
    generate->add_option("--out", gen_out_dir, "Output directory")->required();
    generate->add_option("--replications", gen_replications, "Replications per utilization point");
    generate->add_option("--master-seed", gen_master_seed, "Master seed for stream derivation");

    // allocate
    std::string alloc_taskset, alloc_scheme = "hydra", alloc_out;
    std::uint64_t alloc_limit = 1'000'000;
    auto* allocate = app.add_subcommand("allocate", "Allocate security tasks onto cores");
    allocate->add_option("taskset", alloc_taskset, "Taskset file")->required();
    allocate->add_option("--scheme", alloc_scheme, "hydra | single-core | optimal")
        ->check(CLI::IsMember({"hydra", "single-core", "optimal"}));
    allocate->add_option("--limit", alloc_limit, "Assignment guard for the optimal search");
    allocate->add_option("--out", alloc_out, "Allocation output file (stdout when omitted)");

    // simulate
    std::string sim_taskset, sim_alloc, sim_out_dir, sim_trace;
    double sim_duration_s = 500.0;
    int sim_attacks = 500, sim_cdf_points = 20;
    std::uint64_t sim_seed = 1;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a schedule and measure detection latency");
    simulate_cmd->add_option("taskset", sim_taskset, "Taskset file")->required();
    simulate_cmd->add_option("allocation", sim_alloc, "Allocation file")->required();
    simulate_cmd->add_option("--duration-s", sim_duration_s, "Observation window in seconds");
    simulate_cmd->add_option("--attacks", sim_attacks, "Number of injected attacks");
    simulate_cmd->add_option("--seed", sim_seed, "Attack-plan seed");
    simulate_cmd->add_option("--out-dir", sim_out_dir, "Directory for detections.csv and summary.json")
        ->required();
    simulate_cmd->add_option("--trace", sim_trace, "Also export the full event trace CSV here");
    simulate_cmd->add_option("--cdf-points", sim_cdf_points, "Grid size for the summary CDF");

    // experiment
    std::string exp_kind, exp_out = "results.csv", exp_cores_list = "2,4,8";
    int exp_replications = 25, exp_configs = 25, exp_attacks = 100, exp_workers = 0;
    int exp_cores = 2;
    double exp_duration_s = 50.0;
    std::uint64_t exp_seed = 2024, exp_limit = 1'000'000;
    auto* experiment = app.add_subcommand("experiment", "Run a predefined experiment sweep");
    experiment->add_option("kind", exp_kind, "appendix-compare | detection-cdf | schedulability-sweep")
        ->required()
        ->check(CLI::IsMember({"appendix-compare", "detection-cdf", "schedulability-sweep"}));
    experiment->add_option("--out", exp_out, "Results CSV path");
    experiment->add_option("--cores", exp_cores, "Core count (appendix-compare, schedulability-sweep)");
    experiment->add_option("--cores-list", exp_cores_list, "Comma list of core counts (detection-cdf)");
    experiment->add_option("--replications", exp_replications, "Replications per grid point");
    experiment->add_option("--configs", exp_configs, "Configs per core count (detection-cdf)");
    experiment->add_option("--attacks", exp_attacks, "Attacks per simulation (detection-cdf)");
    experiment->add_option("--duration-s", exp_duration_s, "Simulation window (detection-cdf)");
    experiment->add_option("--master-seed", exp_seed, "Master seed");
    experiment->add_option("--limit", exp_limit, "Assignment guard for the optimal search");
    experiment->add_option("--workers", exp_workers, "Worker threads (0 = SECALLOC_WORKERS or hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the message or the help text
        return code == 0 ? 0 : EXIT_INPUT_ERROR;
    }

    try {
        if (*generate)
            return cmd_generate(gen_params_path, gen_out_dir, gen_replications, gen_master_seed);
        if (*allocate)
            return cmd_allocate(alloc_taskset, alloc_scheme, alloc_limit, alloc_out);
        if (*simulate_cmd)
            return cmd_simulate(sim_taskset, sim_alloc, sim_duration_s, sim_attacks, sim_seed,
                                sim_out_dir, sim_trace, sim_cdf_points);
        if (*experiment) {
            if (exp_kind == "appendix-compare") {
                AppendixCompareOptions options;
                options.cores = exp_cores;
                options.replications = exp_replications;
                options.master_seed = exp_seed;
                options.max_assignments = exp_limit;
                options.workers = exp_workers;
                write_appendix_csv(exp_out, run_appendix_compare(options));
            } else if (exp_kind == "detection-cdf") {
                DetectionCdfOptions options;
                options.cores_list.clear();
                std::stringstream ss(exp_cores_list);
                for (std::string part; std::getline(ss, part, ',');)
                    options.cores_list.push_back(std::stoi(part));
                options.configs_per_cores = exp_configs;
                options.attacks = exp_attacks;
                options.duration = TimeValue{static_cast<std::int64_t>(exp_duration_s * 1e6)};
                options.master_seed = exp_seed;
                options.workers = exp_workers;
                auto result = run_detection_cdf(options);
                write_detection_rows_csv(exp_out, result);
                write_detection_samples_csv(exp_out + ".samples.csv", result);
                for (const auto& s : result.summaries) {
                    std::cout << "cores=" << s.cores << " eligible=" << s.eligible
                              << " mean_improvement_percent=";
                    if (s.mean_improvement_percent)
                        std::cout << to_decimal_string(*s.mean_improvement_percent);
                    else
                        std::cout << "n/a";
                    std::cout << "\n";
                }
            } else {
                SweepOptions options;
                options.cores = exp_cores;
                options.replications = exp_replications;
                options.master_seed = exp_seed;
                options.workers = exp_workers;
                write_sweep_csv(exp_out, run_schedulability_sweep(options));
            }
            std::cout << "wrote " << exp_out << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    return 0;
}
