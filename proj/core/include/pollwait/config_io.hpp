#pragma once

#include <string>

#include "pollwait/analytic.hpp"
#include "pollwait/model.hpp"
#include "pollwait/sim.hpp"

namespace pollwait {

// Parses the JSON config document. Unknown keys anywhere are an error, so
// typos fail loudly instead of falling back to defaults.
//
//   {"alpha": 0.25,
//    "order": "circular" | "elevator" | "random" | {"explicit": [1, 2, 1, 3]},
//    "queues": [{"lambda": 0.125,
//                "service": {"type": "deterministic", "value": 1.0},
//                "discipline": "fcfs", "policy": "exhaustive"}, ...]}
//
// Queue indices in explicit orders are 1-based in the file, 0-based in the
// returned struct. alpha defaults to 0, order to circular, discipline to
// fcfs, policy to exhaustive.
SystemConfig parse_config_text(const std::string& text);
SystemConfig load_config_file(const std::string& path);

// Stable JSON renderings (keys sorted, shortest round-trip numbers), so
// identical inputs yield byte-identical documents.
std::string to_json_text(const AnalyticReport& report);
std::string to_json_text(const SimReport& report);
std::string to_json_text(const LoadProfile& profile);

} // namespace pollwait
