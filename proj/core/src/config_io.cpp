#include "pollwait/config_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pollwait/errors.hpp"

namespace pollwait {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw Error(ErrorKind::ConfigParse,
                        "unknown key \"" + it.key() + "\" in " + where);
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw Error(ErrorKind::ConfigParse,
                    "missing \"" + std::string(key) + "\" in " + where);
    const json& v = obj.at(key);
    if (!v.is_number())
        throw Error(ErrorKind::ConfigParse,
                    "\"" + std::string(key) + "\" in " + where +
                        " must be a number");
    return v.get<double>();
}

ServiceDistribution parse_service(const json& obj, const std::string& where) {
    if (!obj.is_object())
        throw Error(ErrorKind::ConfigParse, where + " must be an object");
    if (!obj.contains("type") || !obj.at("type").is_string())
        throw Error(ErrorKind::ConfigParse,
                    where + " needs a string \"type\" tag");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "deterministic") {
        reject_unknown_keys(obj, {"type", "value"}, where);
        return Deterministic{require_number(obj, "value", where)};
    }
    if (type == "exponential") {
        reject_unknown_keys(obj, {"type", "mean"}, where);
        return Exponential{require_number(obj, "mean", where)};
    }
    if (type == "uniform") {
        reject_unknown_keys(obj, {"type", "lo", "hi"}, where);
        return Uniform{require_number(obj, "lo", where),
                       require_number(obj, "hi", where)};
    }
    if (type == "hyperexp2") {
        reject_unknown_keys(obj, {"type", "p", "mean1", "mean2"}, where);
        return Hyperexp2{require_number(obj, "p", where),
                         require_number(obj, "mean1", where),
                         require_number(obj, "mean2", where)};
    }
    throw Error(ErrorKind::ConfigParse,
                "unknown service type \"" + type + "\" in " + where);
}

void parse_order(const json& v, SystemConfig& config) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "circular") config.order = PollingOrder::Circular;
        else if (s == "elevator") config.order = PollingOrder::Elevator;
        else if (s == "random") config.order = PollingOrder::RandomNext;
        else
            throw Error(ErrorKind::ConfigParse,
                        "unknown order \"" + s +
                            "\"; use circular, elevator, random, or "
                            "{\"explicit\": [...]}");
        return;
    }
    if (v.is_object()) {
        reject_unknown_keys(v, {"explicit"}, "order");
        if (!v.contains("explicit") || !v.at("explicit").is_array())
            throw Error(ErrorKind::ConfigParse,
                        "explicit order needs an array of queue numbers");
        config.order = PollingOrder::Explicit;
        for (const json& e : v.at("explicit")) {
            if (!e.is_number_integer() || e.get<long long>() < 1)
                throw Error(ErrorKind::ConfigParse,
                            "explicit order entries are 1-based queue numbers");
            config.explicit_order.push_back(
                static_cast<std::size_t>(e.get<long long>() - 1));
        }
        return;
    }
    throw Error(ErrorKind::ConfigParse, "order must be a string or an object");
}

} // namespace

SystemConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ConfigParse, e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorKind::ConfigParse, "config root must be an object");
    reject_unknown_keys(doc, {"alpha", "order", "queues"}, "config");

    SystemConfig config;
    if (doc.contains("alpha")) config.alpha = require_number(doc, "alpha", "config");
    if (doc.contains("order")) parse_order(doc.at("order"), config);

    if (!doc.contains("queues") || !doc.at("queues").is_array() ||
        doc.at("queues").empty())
        throw Error(ErrorKind::ConfigParse,
                    "config needs a nonempty \"queues\" array");

    std::size_t idx = 0;
    for (const json& q : doc.at("queues")) {
        idx += 1;
        const std::string where = "queue " + std::to_string(idx);
        if (!q.is_object())
            throw Error(ErrorKind::ConfigParse, where + " must be an object");
        reject_unknown_keys(q, {"lambda", "service", "discipline", "policy"},
                            where);

        QueueSpec spec;
        spec.lambda = require_number(q, "lambda", where);
        if (!q.contains("service"))
            throw Error(ErrorKind::ConfigParse, where + " needs \"service\"");
        spec.service = parse_service(q.at("service"), where + " service");

        if (q.contains("discipline")) {
            const json& d = q.at("discipline");
            if (d == "fcfs") spec.discipline = Discipline::Fcfs;
            else if (d == "lcfs") spec.discipline = Discipline::Lcfs;
            else
                throw Error(ErrorKind::ConfigParse,
                            where + ": discipline must be fcfs or lcfs");
        }
        if (q.contains("policy")) {
            const json& p = q.at("policy");
            if (p == "exhaustive") spec.policy = Policy::Exhaustive;
            else if (p == "gated") spec.policy = Policy::Gated;
            else
                throw Error(ErrorKind::ConfigParse,
                            where + ": policy must be exhaustive or gated");
        }
        config.queues.push_back(spec);
    }
    return config;
}

SystemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ConfigParse, "cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

json profile_json(const LoadProfile& profile) {
    return json{{"n_queues", profile.n_queues},
                {"lambda_total", profile.lambda_total},
                {"rho", profile.rho},
                {"rho_i", profile.rho_i},
                {"mean_s", profile.mean_s},
                {"second_moment_s", profile.second_moment_s}};
}

} // namespace

std::string to_json_text(const LoadProfile& profile) {
    return profile_json(profile).dump();
}

std::string to_json_text(const AnalyticReport& report) {
    const json doc{{"residual", report.residual},
                   {"pi", report.big_pi},
                   {"mean_m", report.mean_m()},
                   {"mean_p", report.mean_p},
                   {"mean_w", report.mean_w},
                   {"profile", profile_json(report.profile)}};
    return doc.dump();
}

std::string to_json_text(const SimReport& report) {
    const json doc{{"jobs_completed", report.jobs_completed},
                   {"mean_w", report.mean_w},
                   {"ci_w", report.ci_w},
                   {"mean_m", report.mean_m},
                   {"ci_m", report.ci_m},
                   {"mean_p", report.mean_p},
                   {"ci_p", report.ci_p},
                   {"per_queue_mean_w", report.per_queue_mean_w},
                   {"time_avg_n", report.time_avg_n},
                   {"arrival_avg_n", report.arrival_avg_n},
                   {"frac_serving", report.frac_serving},
                   {"frac_moving", report.frac_moving},
                   {"window_time", report.window_time},
                   {"warmup_jobs_discarded", report.warmup_jobs_discarded},
                   {"seed", report.seed}};
    return doc.dump();
}

} // namespace pollwait
