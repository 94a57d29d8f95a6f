#pragma once

#include <stdexcept>
#include <string>

namespace pollwait {

enum class ErrorKind {
    ConfigParse,       // malformed config document or parameters
    EmptySystem,       // every queue has zero arrival rate
    UnstableSystem,    // total load rho >= 1
    UnequalMeans,      // per-queue mean service times differ
    BadExplicitOrder,  // explicit polling sequence skips a loaded queue
    InvalidHorizon,    // total_jobs <= warmup_jobs, or the run starves
    DimensionMismatch, // switch matrix does not match the queue count
    PolicyMismatch,    // closed form requested outside circular/exhaustive
    Unsupported,       // combination the analytic engine does not cover
    TooFewSamples,     // series too short for the requested batching
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigParse: return "ConfigParse";
        case ErrorKind::EmptySystem: return "EmptySystem";
        case ErrorKind::UnstableSystem: return "UnstableSystem";
        case ErrorKind::UnequalMeans: return "UnequalMeans";
        case ErrorKind::BadExplicitOrder: return "BadExplicitOrder";
        case ErrorKind::InvalidHorizon: return "InvalidHorizon";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::PolicyMismatch: return "PolicyMismatch";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
    }
    return "Error";
}

} // namespace pollwait
