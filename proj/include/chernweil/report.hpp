#pragma once

#include "chernweil/verifier.hpp"

namespace cw {

struct ReportDocument {
    std::string scenario;
    int n = 1;
    int resolution = 0;
    int stencil_order = 4;
    std::vector<CheckResult> checks;
    double runtime_seconds = 0.0;

    bool verdict_pass() const;
};

// format is "text" or "json"; json follows a fixed field order so identical
// configs produce identical bytes apart from runtime_seconds
std::string emit_report(const ReportDocument& doc, const std::string& format);

ReportDocument run_scenario(const ScenarioConfig& cfg);

} // namespace cw
