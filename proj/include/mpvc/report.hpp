#pragma once

#include <string>

#include "json.hpp"  // vendored nlohmann/json single header
#include "mpvc/cq.hpp"
#include "mpvc/errorbound.hpp"
#include "mpvc/model.hpp"
#include "mpvc/penalty.hpp"
#include "mpvc/stationarity.hpp"

namespace mpvc {

inline constexpr const char* kToolName = "mpvc-toolkit";
inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a hash of the canonical problem text, as fixed-width hex.
std::string problem_digest(const ProblemInstance& prob);

nlohmann::json to_json(const IndexPartition& part);
nlohmann::json to_json(const MultiplierVector& m);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const CqVerdict& v);
nlohmann::json to_json(const PenaltyTrace& t);
nlohmann::json to_json(const ErrorBoundReport& r);
nlohmann::json to_json(const TraceConditionReport& r);

std::string trace_to_csv(const PenaltyTrace& t);
std::string errorbound_to_csv(const ErrorBoundReport& r);

/// Report envelope shared by every CLI command.
nlohmann::json make_report_envelope(const ProblemInstance& prob,
                                    const std::string& command);

}  // namespace mpvc
