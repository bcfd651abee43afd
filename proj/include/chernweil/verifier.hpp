#pragma once

#include <optional>

#include "chernweil/scenario.hpp"

namespace cw {

struct CheckResult {
    std::string name;
    cplx lhs{0.0};
    cplx rhs{0.0};
    double abs_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool diagnostic = false; // diagnostics never affect the overall verdict
    std::string note;
    double seconds = 0.0;
};

struct TubeMasks {
    std::vector<RegionMask> component;
    RegionMask complement;
};

// smooth masks from the truncation distance fields; component masks plus the
// complement sum to one everywhere, overlapping tubes are rejected
TubeMasks tube_masks(const Scenario& S);

// lazily computed shared artifacts of one scenario run
class ScenarioData {
public:
    explicit ScenarioData(const Scenario& S) : S_(S) {}

    const Scenario& scenario() const { return S_; }
    const TubeMasks& masks();
    const ScalarGradField& rho();
    const GradedConnectionField& deformed();
    const GradedConnectionField& lambda_deformed();
    const GradedChScan& plain_scan();
    const GradedChScan& deformed_scan();
    const GradedChScan& lambda_plain_scan();
    const GradedChScan& lambda_deformed_scan();

    // per-component refined tube integrals of the deformed connections
    const std::vector<cplx>& refined_tubes();
    const std::vector<cplx>& lambda_refined_tubes();

private:
    GradedChScan run_scan(const GradedConnectionField& conn, bool with_rho);

    const Scenario& S_;
    std::optional<TubeMasks> masks_;
    std::optional<ScalarGradField> rho_;
    std::optional<GradedConnectionField> deformed_, lambda_deformed_;
    std::optional<GradedChScan> plain_, deformed_scan_, lambda_plain_, lambda_deformed_scan_;
    std::optional<std::vector<cplx>> tubes_, lambda_tubes_;
};

CheckResult check_lemma1(ScenarioData& D);
CheckResult check_complement_vanishing(ScenarioData& D);
std::vector<CheckResult> check_lemma2_diagnostic(ScenarioData& D);
CheckResult check_theorem1(ScenarioData& D);
CheckResult check_corollary1(ScenarioData& D);
CheckResult check_lemma4(ScenarioData& D);
CheckResult check_theorem2(ScenarioData& D);
CheckResult check_zero_set_declaration(ScenarioData& D);

// every check applicable to the scenario, in report order
std::vector<CheckResult> run_all_checks(const Scenario& S);

// per-component boundary degrees (isolated components only)
std::vector<DegreeResult> component_degrees(const Scenario& S, double radius_scale = 0.5,
                                            int circle_points = 512);

// Tube integral of a graded character over one component's tube, on a
// dedicated quadrature grid fine enough for the truncation band (the
// integrand is evaluated analytically, so the grid is independent of the
// atlas resolution). Tubes of isolated components must lie in one chart;
// product-tube components integrate base x fiber.
cplx refined_tube_integral(const Scenario& S, const GradedConnectionField& conn,
                           const ZeroComponentSpec& comp, int disk_res = 0);

} // namespace cw
