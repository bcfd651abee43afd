#include "chernweil/report.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace cw {

bool ReportDocument::verdict_pass() const {
    for (const auto& c : checks)
        if (!c.diagnostic && !c.pass) return false;
    return true;
}

namespace {

std::string emit_text(const ReportDocument& doc) {
    std::ostringstream os;
    os << "scenario " << doc.scenario << "  (n=" << doc.n << ", resolution=" << doc.resolution
       << ", stencil=" << doc.stencil_order << ")\n";
    os << std::left << std::setw(34) << "check" << std::setw(14) << "lhs" << std::setw(14)
       << "rhs" << std::setw(12) << "abs_err" << std::setw(10) << "tol" << std::setw(6)
       << "pass" << "\n";
    for (const auto& c : doc.checks) {
        std::ostringstream lhs, rhs;
        lhs << std::setprecision(6) << c.lhs.real();
        rhs << std::setprecision(6) << c.rhs.real();
        os << std::left << std::setw(34) << c.name << std::setw(14) << lhs.str()
           << std::setw(14) << rhs.str() << std::setw(12) << std::setprecision(3)
           << c.abs_error << std::setw(10) << c.tolerance << std::setw(6)
           << (c.diagnostic ? "diag" : (c.pass ? "yes" : "NO"));
        if (!c.note.empty()) os << " " << c.note;
        os << "\n";
    }
    os << "runtime " << std::setprecision(3) << doc.runtime_seconds << " s, verdict "
       << (doc.verdict_pass() ? "pass" : "fail") << "\n";
    return os.str();
}

std::string emit_json(const ReportDocument& doc) {
    nlohmann::ordered_json j;
    j["scenario"] = doc.scenario;
    j["n"] = doc.n;
    j["resolution"] = doc.resolution;
    j["stencil_order"] = doc.stencil_order;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : doc.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["lhs_re"] = c.lhs.real();
        cj["lhs_im"] = c.lhs.imag();
        cj["rhs_re"] = c.rhs.real();
        cj["rhs_im"] = c.rhs.imag();
        cj["abs_error"] = c.abs_error;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        cj["diagnostic"] = c.diagnostic;
        j["checks"].push_back(cj);
    }
    j["runtime_seconds"] = doc.runtime_seconds;
    j["verdict"] = doc.verdict_pass() ? "pass" : "fail";
    return j.dump(2) + "\n";
}

} // namespace

std::string emit_report(const ReportDocument& doc, const std::string& format) {
    if (format == "text") return emit_text(doc);
    if (format == "json") return emit_json(doc);
    throw config_error("unknown report format: " + format);
}

ReportDocument run_scenario(const ScenarioConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Scenario S = build_scenario(cfg);
    ReportDocument doc;
    doc.scenario = S.name;
    doc.n = S.n;
    doc.resolution = S.resolution;
    doc.stencil_order = S.stencil_order;
    doc.checks = run_all_checks(S);
    doc.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return doc;
}

} // namespace cw
