#include "secalloc/io.hpp"

#include <fstream>

namespace secalloc {

using nlohmann::json;

Rational rational_from_json(const json& j) {
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_float()) {
        Rational q(j.get<double>());  // exact dyadic value of the double
        q.canonicalize();
        return q;
    }
    if (j.is_string())
        return rational_from_string(j.get<std::string>());
    throw std::invalid_argument("expected a number or rational string, got " + j.dump());
}

json rational_to_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p())
        return json(q.get_num().get_si());
    return json(to_fraction_string(q));
}

namespace {

std::int64_t require_time_us(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number_integer())
        throw std::invalid_argument(std::string("missing or non-integer field ") + field);
    return j.at(field).get<std::int64_t>();
}

} // namespace

SystemConfig config_from_json(const json& j) {
    SystemConfig config;
    if (!j.contains("cores") || !j.at("cores").is_number_integer())
        throw std::invalid_argument("taskset: missing integer field cores");
    config.platform.core_count = j.at("cores").get<int>();

    for (const auto& t : j.value("rt_tasks", json::array())) {
        RealTimeTask task;
        task.id = t.at("id").get<std::string>();
        task.wcet = TimeValue{require_time_us(t, "wcet_us")};
        task.period = TimeValue{require_time_us(t, "period_us")};
        task.deadline = task.period;
        config.rt_tasks.push_back(std::move(task));
        if (t.contains("core"))
            config.platform.rt_partition[config.rt_tasks.back().id] = t.at("core").get<int>();
    }
    for (const auto& t : j.value("sec_tasks", json::array())) {
        SecurityTask task;
        task.id = t.at("id").get<std::string>();
        task.wcet = TimeValue{require_time_us(t, "wcet_us")};
        task.desired_period = TimeValue{require_time_us(t, "desired_period_us")};
        task.max_period = TimeValue{require_time_us(t, "max_period_us")};
        if (t.contains("weight"))
            task.weight = rational_from_json(t.at("weight"));
        config.sec_tasks.push_back(std::move(task));
    }

    if (!config.rt_tasks.empty())
        config.rt_tasks = assign_rm_priorities(std::move(config.rt_tasks));
    if (!config.sec_tasks.empty())
        config.sec_tasks = assign_security_priorities(std::move(config.sec_tasks));
    return config;
}

json config_to_json(const SystemConfig& config) {
    json j;
    j["cores"] = config.platform.core_count;
    j["rt_tasks"] = json::array();
    for (const auto& t : config.rt_tasks) {
        json task{{"id", t.id}, {"wcet_us", t.wcet.us}, {"period_us", t.period.us}};
        auto it = config.platform.rt_partition.find(t.id);
        if (it != config.platform.rt_partition.end())
            task["core"] = it->second;
        j["rt_tasks"].push_back(std::move(task));
    }
    j["sec_tasks"] = json::array();
    for (const auto& t : config.sec_tasks) {
        json task{{"id", t.id},
                  {"wcet_us", t.wcet.us},
                  {"desired_period_us", t.desired_period.us},
                  {"max_period_us", t.max_period.us}};
        if (t.weight != 1)
            task["weight"] = rational_to_json(t.weight);
        j["sec_tasks"].push_back(std::move(task));
    }
    return j;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open taskset file " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

void save_config(const SystemConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write taskset file " + path);
    out << config_to_json(config).dump(2) << "\n";
}

namespace {

const char* status_name(AllocationStatus status) {
    switch (status) {
    case AllocationStatus::ok: return "ok";
    case AllocationStatus::unschedulable: return "unschedulable";
    case AllocationStatus::limit_exceeded: return "limit_exceeded";
    }
    return "unknown";
}

} // namespace

json allocation_to_json(const AllocationOutcome& outcome, const std::string& scheme) {
    json j;
    j["scheme"] = scheme;
    j["status"] = status_name(outcome.status);
    j["cores"] = outcome.platform.core_count;
    if (!outcome.schedulable()) {
        if (!outcome.failed_task.empty())
            j["failed_task"] = outcome.failed_task;
        return j;
    }

    j["objective"] = to_decimal_string(outcome.objective);
    j["objective_exact"] = to_fraction_string(outcome.objective);
    j["tasks"] = json::array();
    for (const auto& [id, core] : outcome.allocation->assignment) {
        const TimeValue period = outcome.allocation->periods.at(id);
        const Rational& eta = outcome.allocation->tightness.at(id);
        j["tasks"].push_back({{"id", id},
                              {"core", core},
                              {"period_us", period.us},
                              {"tightness", to_decimal_string(eta)},
                              {"tightness_exact", to_fraction_string(eta)}});
    }
    j["per_core_security_util"] = json::array();
    j["per_core_security_util_exact"] = json::array();
    for (const auto& u : outcome.per_core_security_util) {
        j["per_core_security_util"].push_back(to_decimal_string(u));
        j["per_core_security_util_exact"].push_back(to_fraction_string(u));
    }
    if (scheme == "single-core") {
        j["rt_partition"] = json::object();
        for (const auto& [id, core] : outcome.platform.rt_partition)
            j["rt_partition"][id] = core;
    }
    return j;
}

StoredAllocation allocation_from_json(const json& j) {
    StoredAllocation out;
    out.scheme = j.value("scheme", "");
    std::string status = j.value("status", "unschedulable");
    out.status = status == "ok"              ? AllocationStatus::ok
                 : status == "limit_exceeded" ? AllocationStatus::limit_exceeded
                                              : AllocationStatus::unschedulable;
    out.failed_task = j.value("failed_task", "");
    out.cores = j.value("cores", 0);
    if (out.status != AllocationStatus::ok)
        return out;

    for (const auto& t : j.at("tasks")) {
        std::string id = t.at("id").get<std::string>();
        out.allocation.assignment[id] = t.at("core").get<int>();
        out.allocation.periods[id] = TimeValue{require_time_us(t, "period_us")};
        out.allocation.tightness[id] = rational_from_string(t.at("tightness_exact").get<std::string>());
    }
    if (j.contains("rt_partition")) {
        out.has_rt_partition = true;
        for (const auto& [id, core] : j.at("rt_partition").items())
            out.rt_partition[id] = core.get<int>();
    }
    return out;
}

StoredAllocation load_allocation(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open allocation file " + path);
    json j;
    in >> j;
    return allocation_from_json(j);
}

GenParams gen_params_from_json(const json& j) {
    GenParams p = default_gen_params(j.value("cores", 2));
    auto range_pair = [&](const char* field, auto& target) {
        if (!j.contains(field))
            return;
        const auto& arr = j.at(field);
        if (!arr.is_array() || arr.size() != 2)
            throw std::invalid_argument(std::string(field) + ": expected [lo, hi]");
        target.first = arr[0].get<decltype(target.first)>();
        target.second = arr[1].get<decltype(target.second)>();
    };
    range_pair("rt_count_range", p.rt_count_range);
    range_pair("sec_count_range", p.sec_count_range);
    range_pair("rt_period_range_us", p.rt_period_range_us);
    range_pair("sec_des_period_range_us", p.sec_des_period_range_us);
    if (j.contains("sec_max_period_factor"))
        p.sec_max_period_factor = j.at("sec_max_period_factor").get<int>();
    if (j.contains("total_rt_util"))
        p.total_rt_util = rational_from_json(j.at("total_rt_util"));
    if (j.contains("sec_util_fraction"))
        p.sec_util_fraction = rational_from_json(j.at("sec_util_fraction"));
    if (j.contains("rt_period_log_uniform"))
        p.rt_period_log_uniform = j.at("rt_period_log_uniform").get<bool>();
    if (j.contains("redraw_limit"))
        p.redraw_limit = j.at("redraw_limit").get<int>();
    if (j.contains("seed"))
        p.seed = j.at("seed").get<std::uint64_t>();
    validate_gen_params(p);
    return p;
}

json gen_params_to_json(const GenParams& p) {
    return json{{"cores", p.cores},
                {"rt_count_range", {p.rt_count_range.first, p.rt_count_range.second}},
                {"sec_count_range", {p.sec_count_range.first, p.sec_count_range.second}},
                {"rt_period_range_us", {p.rt_period_range_us.first, p.rt_period_range_us.second}},
                {"sec_des_period_range_us",
                 {p.sec_des_period_range_us.first, p.sec_des_period_range_us.second}},
                {"sec_max_period_factor", p.sec_max_period_factor},
                {"total_rt_util", to_fraction_string(p.total_rt_util)},
                {"sec_util_fraction", to_fraction_string(p.sec_util_fraction)},
                {"rt_period_log_uniform", p.rt_period_log_uniform},
                {"redraw_limit", p.redraw_limit},
                {"seed", p.seed}};
}

void write_detection_csv(const std::string& path, const std::vector<DetectionSample>& samples) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "attack_time_us,detect_time_us,latency_us,task\n";
    for (const auto& s : samples)
        out << s.attack_time.us << ',' << s.detect_time.us << ',' << s.latency.us << ','
            << s.detecting_task << '\n';
}

void write_trace_csv(const std::string& path, const std::vector<SimEvent>& events) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "time_us,kind,task,core\n";
    for (const auto& e : events)
        out << e.time.us << ',' << to_string(e.kind) << ',' << e.task << ',' << e.core << '\n';
}

} // namespace secalloc
