#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "chernweil/bundle.hpp"
#include "chernweil/mesh.hpp"

namespace cw {

// a connected component of the noninvertibility locus Z(v), with its tube
struct ZeroComponentSpec {
    std::string id;
    bool isolated = true;
    int codim = 2;
    double tube_radius = 0.4;
    ScalarGradField distance; // chart-coordinate distance to the component

    // isolated components: where to place boundary spheres
    int chart = -1;
    std::vector<double> center;

    // positive-dimensional components in product tubes: the axes spanning
    // the normal disk and the fiber coordinates of the component itself
    std::vector<int> fiber_axes;
    std::vector<double> fiber_center;
    std::vector<int> base_charts; // product charts containing the component

    // euler 2-form of the normal bundle restricted to X (coefficient of the
    // base-axes pair); null means flat normal connection
    std::function<cplx(int chart, const std::vector<double>& x)> normal_euler;
};

struct ScenarioConfig {
    std::string name;
    int resolution = 0;       // 0 = scenario default
    double tube_radius = 0.0; // 0 = scenario default
    double trunc_a = 0.0;     // absolute radii; 0 = default fractions of tube
    double trunc_b = 0.0;
    double tolerance = 0.0; // global override when > 0
    int stencil_order = 4;

    void validate() const;
};

struct Scenario {
    std::string name;
    std::string summary;
    int n = 1;   // bundle model half-rank
    int dim = 2; // manifold dimension
    long euler_char = 0;
    SimplicialMesh mesh;
    Atlas atlas;
    int resolution = 0;
    int stencil_order = 4;

    // graded bundle driving the localization checks
    GradedConnectionField connection;
    std::optional<BundleMapField> vmap;

    // signature exterior-algebra model of TM (Lemma 4 / Theorem 2 side)
    std::shared_ptr<const CliffordModel> model;
    GradedConnectionField lambda_tm;
    std::optional<FrameVectorField> K;
    bool lambda_is_primary = false; // connection/vmap are the lambda model

    std::vector<ZeroComponentSpec> components;
    double trunc_a = 0.0, trunc_b = 0.0; // absolute truncation radii
    bool outside_hypothesis = false;     // theorem-2 run with n = 1

    std::map<std::string, double> tolerances;
    double global_tolerance = 0.0; // > 0 overrides every check
    double tolerance_for(const std::string& check, double fallback) const;
};

std::vector<std::pair<std::string, std::string>> list_scenarios();
Scenario build_scenario(const ScenarioConfig& cfg);

// ---- reusable analytic geometry fields -----------------------------------------

// Levi-Civita connection of the round metric in stereographic charts, as an
// so(2)-valued frame connection with analytic curvature
SoConnectionField sphere_lc_so_field(std::shared_ptr<const CliffordModel> model);

// flat torus: zero connection
SoConnectionField torus_so_field(std::shared_ptr<const CliffordModel> model, int dim);

// product of two round spheres: so(4) block connection (pairs (0,1), (2,3))
SoConnectionField product_sphere_lc_so_field(std::shared_ptr<const CliffordModel> model);

// rotation vector field about the poles of one sphere, in frame components
FrameVectorField sphere_rotation_field();

// rho field: product of per-component truncation ramps
ScalarGradField make_rho_field(const std::vector<ZeroComponentSpec>& comps, double a, double b);

} // namespace cw
