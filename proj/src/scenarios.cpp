#include "chernweil/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace cw {

namespace {

constexpr double kBig = 1e9;

// inversion to the partner stereographic chart: y = (x0, -x1)/r^2, with its
// Jacobian (shared by transition maps, distances and form pullbacks)
void invert_chart_point(double x0, double x1, double y[2], double J[2][2]) {
    double r2 = x0 * x0 + x1 * x1;
    double r4 = r2 * r2;
    y[0] = x0 / r2;
    y[1] = -x1 / r2;
    J[0][0] = (x1 * x1 - x0 * x0) / r4;
    J[0][1] = -2.0 * x0 * x1 / r4;
    J[1][0] = 2.0 * x0 * x1 / r4;
    J[1][1] = (x1 * x1 - x0 * x0) / r4;
}

} // namespace

void ScenarioConfig::validate() const {
    if (name.empty()) throw config_error("scenario name required");
    if (resolution != 0 && resolution < 16) throw config_error("resolution must be >= 16");
    if (stencil_order != 2 && stencil_order != 4)
        throw config_error("stencil order must be 2 or 4");
    if (tube_radius < 0.0 || trunc_a < 0.0 || trunc_b < 0.0 || tolerance < 0.0)
        throw config_error("negative scenario parameter");
    if ((trunc_a != 0.0 || trunc_b != 0.0) && !(trunc_a < trunc_b))
        throw config_error("truncation radii require a < b");
}

double Scenario::tolerance_for(const std::string& check, double fallback) const {
    if (global_tolerance > 0.0) return global_tolerance;
    auto it = tolerances.find(check);
    return it == tolerances.end() ? fallback : it->second;
}

// ---- analytic fields ------------------------------------------------------------

SoConnectionField sphere_lc_so_field(std::shared_ptr<const CliffordModel> model) {
    int row = model->pair_index(0, 1);
    int slot = pair_slot(2, 0, 1);
    SoConnectionField so;
    so.eval = [row, slot](int, const std::vector<double>& x, Eigen::MatrixXd& om,
                          Eigen::MatrixXd& dom) {
        om.setZero();
        dom.setZero();
        double l = stereo_lambda(x[0], x[1]);
        // omega_{01} = lambda (-x1 dx0 + x0 dx1), d omega_{01} = lambda^2 dx0^dx1
        om(row, 0) = -l * x[1];
        om(row, 1) = l * x[0];
        dom(row, slot) = l * l;
    };
    return so;
}

SoConnectionField torus_so_field(std::shared_ptr<const CliffordModel>, int) {
    SoConnectionField so;
    so.eval = [](int, const std::vector<double>&, Eigen::MatrixXd& om, Eigen::MatrixXd& dom) {
        om.setZero();
        dom.setZero();
    };
    return so;
}

SoConnectionField product_sphere_lc_so_field(std::shared_ptr<const CliffordModel> model) {
    int rowA = model->pair_index(0, 1);
    int rowB = model->pair_index(2, 3);
    int slotA = pair_slot(4, 0, 1);
    int slotB = pair_slot(4, 2, 3);
    SoConnectionField so;
    so.eval = [=](int, const std::vector<double>& x, Eigen::MatrixXd& om,
                  Eigen::MatrixXd& dom) {
        om.setZero();
        dom.setZero();
        double la = stereo_lambda(x[0], x[1]);
        double lb = stereo_lambda(x[2], x[3]);
        om(rowA, 0) = -la * x[1];
        om(rowA, 1) = la * x[0];
        om(rowB, 2) = -lb * x[3];
        om(rowB, 3) = lb * x[2];
        dom(rowA, slotA) = la * la;
        dom(rowB, slotB) = lb * lb;
    };
    return so;
}

namespace {

// rotation field frame components on one stereographic chart pair:
// chart 0: lambda (-y, x); chart 1: lambda (y, -x)
void rotation_components(int chart, double X, double Y, double xi[2], double dxi[2][2]) {
    double l = stereo_lambda(X, Y);
    double l2 = l * l;
    if (chart == 0) {
        xi[0] = -l * Y;
        xi[1] = l * X;
        dxi[0][0] = l2 * X * Y;
        dxi[0][1] = -l + l2 * Y * Y;
        dxi[1][0] = l - l2 * X * X;
        dxi[1][1] = -l2 * X * Y;
    } else {
        xi[0] = l * Y;
        xi[1] = -l * X;
        dxi[0][0] = -l2 * X * Y;
        dxi[0][1] = l - l2 * Y * Y;
        dxi[1][0] = -l + l2 * X * X;
        dxi[1][1] = l2 * X * Y;
    }
}

} // namespace

FrameVectorField sphere_rotation_field() {
    FrameVectorField f;
    f.eval = [](int chart, const std::vector<double>& x, Eigen::VectorXd& xi,
                Eigen::VectorXd& eta, Eigen::MatrixXd& dxi, Eigen::MatrixXd& deta) {
        double v[2], dv[2][2];
        rotation_components(chart, x[0], x[1], v, dv);
        xi[0] = v[0];
        xi[1] = v[1];
        eta.setZero();
        deta.setZero();
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 2; ++i) dxi(a, i) = dv[a][i];
    };
    return f;
}

ScalarGradField make_rho_field(const std::vector<ZeroComponentSpec>& comps, double a, double b) {
    if (!(0.0 <= a && a < b)) throw config_error("truncation radii require 0 <= a < b");
    RampProfile ramp{a, b, 5};
    auto components = comps; // value copy keeps the field self-contained
    ScalarGradField out;
    out.eval = [components, ramp](int chart, const std::vector<double>& x,
                                  std::vector<double>* grad) -> double {
        int dim = static_cast<int>(x.size());
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double value = 1.0;
        thread_local std::vector<double> dgi, sum_dlog;
        if (grad) {
            dgi.assign(dim, 0.0);
            sum_dlog.assign(dim, 0.0);
        }
        thread_local std::vector<double> factors;
        factors.clear();
        for (const auto& comp : components) {
            double t = comp.distance.eval(chart, x, grad ? &dgi : nullptr);
            double v = ramp(t);
            if (v == 0.0) return 0.0; // deriv also vanishes at the flat end
            value *= v;
            if (grad) {
                double dv = ramp.deriv(t);
                if (dv != 0.0)
                    for (int i = 0; i < dim; ++i) sum_dlog[i] += dv / v * dgi[i];
            }
        }
        if (grad)
            for (int i = 0; i < dim; ++i) (*grad)[i] = value * sum_dlog[i];
        return value;
    };
    return out;
}

// ---- distance fields ------------------------------------------------------------

namespace {

// distance (in home-chart coordinates) to an isolated point of the sphere
// atlas; evaluated from either chart through the inversion transition
ScalarGradField sphere_point_distance(int home_chart, double cx, double cy) {
    ScalarGradField f;
    f.eval = [home_chart, cx, cy](int chart, const std::vector<double>& x,
                                  std::vector<double>* grad) -> double {
        double y0, y1;
        double J[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
        if (chart == home_chart) {
            y0 = x[0];
            y1 = x[1];
        } else {
            double r2 = x[0] * x[0] + x[1] * x[1];
            if (r2 < 1e-14) {
                if (grad) std::fill(grad->begin(), grad->end(), 0.0);
                return kBig;
            }
            double y[2];
            invert_chart_point(x[0], x[1], y, J);
            y0 = y[0];
            y1 = y[1];
        }
        double dx = y0 - cx, dy = y1 - cy;
        double d = std::hypot(dx, dy);
        if (grad) {
            std::fill(grad->begin(), grad->end(), 0.0);
            if (d > 1e-14) {
                double gx = dx / d, gy = dy / d;
                (*grad)[0] = gx * J[0][0] + gy * J[1][0];
                (*grad)[1] = gx * J[0][1] + gy * J[1][1];
            }
        }
        return d;
    };
    return f;
}

// distance in the second factor of a product of spheres to the origin of
// factor chart `home_cb` (the pole); product charts are indexed ca*2+cb
ScalarGradField product_pole_distance(int home_cb) {
    ScalarGradField f;
    f.eval = [home_cb](int chart, const std::vector<double>& x,
                       std::vector<double>* grad) -> double {
        int cb = chart % 2;
        double u = x[2], v = x[3];
        double r = std::hypot(u, v);
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        if (cb == home_cb) {
            if (grad && r > 1e-14) {
                (*grad)[2] = u / r;
                (*grad)[3] = v / r;
            }
            return r;
        }
        if (r < 1e-14) return kBig;
        if (grad) {
            (*grad)[2] = -u / (r * r * r);
            (*grad)[3] = -v / (r * r * r);
        }
        return 1.0 / r;
    };
    return f;
}

// ---- scenario assembly ----------------------------------------------------------

struct BuildParams {
    int resolution;
    double tube;
    double ta, tb; // absolute truncation radii
};

BuildParams resolve_params(const ScenarioConfig& cfg, int def_res, double def_tube) {
    BuildParams p;
    p.resolution = cfg.resolution > 0 ? cfg.resolution : def_res;
    p.tube = cfg.tube_radius > 0.0 ? cfg.tube_radius : def_tube;
    p.ta = cfg.trunc_a > 0.0 ? cfg.trunc_a : 0.5 * p.tube;
    p.tb = cfg.trunc_b > 0.0 ? cfg.trunc_b : 0.9 * p.tube;
    if (!(0.0 < p.ta && p.ta < p.tb && p.tb <= p.tube))
        throw config_error("truncation radii must satisfy 0 < a < b <= tube radius");
    return p;
}

Scenario build_torus_scenario(const ScenarioConfig& cfg, bool oriented_frame) {
    auto p = resolve_params(cfg, 64, 0.4);
    Scenario S;
    S.name = oriented_frame ? "t2_oriented_frame" : "t2_nonvanishing";
    S.summary = oriented_frame
                    ? "flat T^2, K from a global oriented orthonormal frame (h = 0, Z(v) empty)"
                    : "flat T^2 with a nonvanishing constant field (empty zero set)";
    S.n = 1;
    S.dim = 2;
    S.mesh = grid_torus(8);
    S.euler_char = euler_char_oracle(S.mesh);
    S.atlas = make_torus_atlas(2, p.resolution, cfg.stencil_order);
    S.resolution = p.resolution;
    S.stencil_order = cfg.stencil_order;

    S.model = std::make_shared<const CliffordModel>(build_clifford_model(1));
    S.lambda_tm = lambda_connection(S.model, 2, torus_so_field(S.model, 2));
    S.connection = S.lambda_tm;
    S.lambda_is_primary = true;

    FrameVectorField K;
    K.eval = [oriented_frame](int, const std::vector<double>&, Eigen::VectorXd& xi,
                              Eigen::VectorXd& eta, Eigen::MatrixXd& dxi, Eigen::MatrixXd& deta) {
        xi.setZero();
        eta.setZero();
        dxi.setZero();
        deta.setZero();
        xi[0] = 1.0;
        if (oriented_frame) eta[1] = 1.0;
    };
    S.K = K;
    S.vmap = symbol_field(S.model, 2, K);
    S.trunc_a = p.ta;
    S.trunc_b = p.tb;
    S.outside_hypothesis = true; // n = 1 theorem-2 run

    S.tolerances["lemma1"] = 1e-6;
    S.tolerances["theorem1"] = 1e-6;
    S.tolerances["lemma4"] = 1e-6;
    S.tolerances["theorem2"] = 1e-6;
    return S;
}

Scenario build_s2_rotation(const ScenarioConfig& cfg) {
    auto p = resolve_params(cfg, 96, 0.4);
    Scenario S;
    S.name = "s2_rotation_isolated";
    S.summary = "round S^2, rotation field with isolated zeros at both poles";
    S.n = 1;
    S.dim = 2;
    S.mesh = octahedron_sphere();
    S.euler_char = euler_char_oracle(S.mesh);
    S.atlas = make_sphere_atlas(p.resolution, cfg.stencil_order);
    S.resolution = p.resolution;
    S.stencil_order = cfg.stencil_order;

    S.model = std::make_shared<const CliffordModel>(build_clifford_model(1));
    S.lambda_tm = lambda_connection(S.model, 2, sphere_lc_so_field(S.model));
    S.connection = S.lambda_tm;
    S.lambda_is_primary = true;
    S.K = sphere_rotation_field();
    S.vmap = symbol_field(S.model, 2, *S.K);

    for (int chart = 0; chart < 2; ++chart) {
        ZeroComponentSpec z;
        z.id = chart == 0 ? "pole_south" : "pole_north";
        z.isolated = true;
        z.codim = 2;
        z.tube_radius = p.tube;
        z.chart = chart;
        z.center = {0.0, 0.0};
        z.distance = sphere_point_distance(chart, 0.0, 0.0);
        S.components.push_back(std::move(z));
    }
    S.trunc_a = p.ta;
    S.trunc_b = p.tb;
    S.outside_hypothesis = true;

    S.tolerances["lemma1"] = 1e-2;
    S.tolerances["theorem1"] = 1e-2;
    S.tolerances["corollary1"] = 1e-2;
    S.tolerances["lemma4"] = 2e-2;
    S.tolerances["theorem2"] = 2e-2;
    return S;
}

Scenario build_s2_corollary1(const ScenarioConfig& cfg) {
    auto p = resolve_params(cfg, 96, 0.3);
    Scenario S;
    S.name = "s2_corollary1";
    S.summary = "round S^2, trivial line bundles, v with isolated zeros of winding +1 and -1";
    S.n = 1;
    S.dim = 2;
    S.mesh = octahedron_sphere();
    S.euler_char = euler_char_oracle(S.mesh);
    S.atlas = make_sphere_atlas(p.resolution, cfg.stencil_order);
    S.resolution = p.resolution;
    S.stencil_order = cfg.stencil_order;

    S.model = std::make_shared<const CliffordModel>(build_clifford_model(1));
    S.lambda_tm = lambda_connection(S.model, 2, sphere_lc_so_field(S.model));
    S.lambda_is_primary = false;

    // graded pair of trivial line bundles; E- carries the exact connection
    // form i beta so the plain Chern forms are nonzero pointwise
    BumpProfile psi{0.8, 1.3, 5};
    auto beta_home = [psi](double X, double Y, double out[2], double* dcoef) {
        double r = std::hypot(X, Y);
        double ps = psi(r);
        out[0] = -ps * Y;
        out[1] = ps * X;
        if (dcoef) *dcoef = psi.deriv(r) * r + 2.0 * ps;
    };
    GradedConnectionField conn;
    conn.dim = 2;
    conn.rank_p = 1;
    conn.rank_m = 1;
    conn.sample = [beta_home](int chart, const std::vector<double>& x, GradedConnSample& s) {
        for (int i = 0; i < 2; ++i) {
            s.omega_p[i].setZero();
            s.omega_m[i].setZero();
        }
        s.domega_p[0].setZero();
        s.domega_m[0].setZero();
        double b[2], dcoef = 0.0;
        if (chart == 0) {
            beta_home(x[0], x[1], b, &dcoef);
        } else {
            double r2 = x[0] * x[0] + x[1] * x[1];
            if (r2 < 1e-14) {
                b[0] = b[1] = 0.0;
                dcoef = 0.0;
            } else {
                double y[2], J[2][2];
                invert_chart_point(x[0], x[1], y, J);
                double bh[2];
                beta_home(y[0], y[1], bh, &dcoef);
                double detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0];
                b[0] = bh[0] * J[0][0] + bh[1] * J[1][0];
                b[1] = bh[0] * J[0][1] + bh[1] * J[1][1];
                dcoef *= detJ;
            }
        }
        s.omega_m[0](0, 0) = cplx(0.0, 1.0) * b[0];
        s.omega_m[1](0, 0) = cplx(0.0, 1.0) * b[1];
        s.domega_m[0](0, 0) = cplx(0.0, 1.0) * dcoef;
    };
    S.connection = conn;

    // v(z) = (z - a)(conj(z) - b) / (1 + |z|^2): winding +1 at a, -1 at b
    const cplx za(-0.6, 0.0), zb(0.6, 0.0);
    BundleMapField v;
    v.dim = 2;
    v.rank_p = 1;
    v.rank_m = 1;
    v.eval = [za, zb](int chart, const std::vector<double>& x, MatrixJet& jet) {
        jet.value = Mat::Zero(1, 1);
        jet.d.assign(2, Mat::Zero(1, 1));
        cplx z(x[0], x[1]);
        const cplx i1(0.0, 1.0);
        if (chart == 0) {
            double s = 1.0 / (1.0 + std::norm(z));
            double ds = -s * s;
            cplx F = (z - za) * (std::conj(z) - zb);
            cplx dFx = (std::conj(z) - zb) + (z - za);
            cplx dFy = i1 * (std::conj(z) - zb) - i1 * (z - za);
            jet.value(0, 0) = F * s;
            jet.d[0](0, 0) = dFx * s + F * ds * 2.0 * x[0];
            jet.d[1](0, 0) = dFy * s + F * ds * 2.0 * x[1];
        } else {
            // v = (1 - a w)(1 - b conj(w)) / (1 + |w|^2)
            double s = 1.0 / (1.0 + std::norm(z));
            double ds = -s * s;
            cplx G = (1.0 - za * z) * (1.0 - zb * std::conj(z));
            cplx dGx = -za * (1.0 - zb * std::conj(z)) - zb * (1.0 - za * z);
            cplx dGy = -za * i1 * (1.0 - zb * std::conj(z)) + zb * i1 * (1.0 - za * z);
            jet.value(0, 0) = G * s;
            jet.d[0](0, 0) = dGx * s + G * ds * 2.0 * x[0];
            jet.d[1](0, 0) = dGy * s + G * ds * 2.0 * x[1];
        }
    };
    S.vmap = v;

    ZeroComponentSpec zp;
    zp.id = "zero_plus";
    zp.isolated = true;
    zp.codim = 2;
    zp.tube_radius = p.tube;
    zp.chart = 0;
    zp.center = {-0.6, 0.0};
    zp.distance = sphere_point_distance(0, -0.6, 0.0);
    S.components.push_back(zp);

    ZeroComponentSpec zm = zp;
    zm.id = "zero_minus";
    zm.center = {0.6, 0.0};
    zm.distance = sphere_point_distance(0, 0.6, 0.0);
    S.components.push_back(zm);

    S.trunc_a = p.ta;
    S.trunc_b = p.tb;

    S.tolerances["lemma1"] = 1e-2;
    S.tolerances["theorem1"] = 1e-2;
    S.tolerances["corollary1"] = 1e-2;
    S.tolerances["lemma4"] = 2e-2;
    return S;
}

Scenario build_s2xs2(const ScenarioConfig& cfg) {
    auto p = resolve_params(cfg, 32, 0.4);
    Scenario S;
    S.name = "s2xs2_nonisolated";
    S.summary = "S^2 x S^2, rotation field on the second factor: Zero(K) is two spheres";
    S.n = 2;
    S.dim = 4;
    S.mesh = product_mesh(octahedron_sphere(), octahedron_sphere());
    S.euler_char = euler_char_oracle(S.mesh);
    auto sphere = make_sphere_atlas(p.resolution, cfg.stencil_order);
    S.atlas = make_product_atlas(sphere, sphere);
    S.resolution = p.resolution;
    S.stencil_order = cfg.stencil_order;

    S.model = std::make_shared<const CliffordModel>(build_clifford_model(2));
    S.lambda_tm = lambda_connection(S.model, 4, product_sphere_lc_so_field(S.model));
    S.connection = S.lambda_tm;
    S.lambda_is_primary = true;

    FrameVectorField K;
    K.eval = [](int chart, const std::vector<double>& x, Eigen::VectorXd& xi,
                Eigen::VectorXd& eta, Eigen::MatrixXd& dxi, Eigen::MatrixXd& deta) {
        xi.setZero();
        eta.setZero();
        dxi.setZero();
        deta.setZero();
        int cb = chart % 2;
        double v[2], dv[2][2];
        rotation_components(cb, x[2], x[3], v, dv);
        xi[2] = v[0];
        xi[3] = v[1];
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 2; ++i) dxi(2 + a, 2 + i) = dv[a][i];
    };
    S.K = K;
    S.vmap = symbol_field(S.model, 4, K);

    for (int cb = 0; cb < 2; ++cb) {
        ZeroComponentSpec z;
        z.id = cb == 0 ? "sphere_x_south" : "sphere_x_north";
        z.isolated = false;
        z.codim = 2;
        z.tube_radius = p.tube;
        z.distance = product_pole_distance(cb);
        z.fiber_axes = {2, 3};
        z.fiber_center = {0.0, 0.0};
        z.base_charts = {cb, 2 + cb}; // product charts ca*2+cb with matching cb
        z.normal_euler = nullptr;     // trivial flat normal bundle
        S.components.push_back(std::move(z));
    }
    S.trunc_a = p.ta;
    S.trunc_b = p.tb;

    S.tolerances["lemma1"] = 5e-2;
    S.tolerances["theorem1"] = 5e-2;
    S.tolerances["lemma4"] = 0.5;
    S.tolerances["theorem2"] = 0.25;
    return S;
}

} // namespace

std::vector<std::pair<std::string, std::string>> list_scenarios() {
    std::vector<std::pair<std::string, std::string>> out = {
        {"s2_corollary1",
         "round S^2, trivial line bundles, v with isolated zeros of winding +1 and -1"},
        {"s2_rotation_isolated", "round S^2, rotation field with isolated zeros at both poles"},
        {"s2xs2_nonisolated",
         "S^2 x S^2, rotation field on the second factor: Zero(K) is two spheres"},
        {"t2_nonvanishing", "flat T^2 with a nonvanishing constant field (empty zero set)"},
        {"t2_oriented_frame",
         "flat T^2, K from a global oriented orthonormal frame (h = 0, Z(v) empty)"},
    };
    return out;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario S;
    if (cfg.name == "t2_nonvanishing") S = build_torus_scenario(cfg, false);
    else if (cfg.name == "t2_oriented_frame") S = build_torus_scenario(cfg, true);
    else if (cfg.name == "s2_rotation_isolated") S = build_s2_rotation(cfg);
    else if (cfg.name == "s2_corollary1") S = build_s2_corollary1(cfg);
    else if (cfg.name == "s2xs2_nonisolated") S = build_s2xs2(cfg);
    else throw config_error("unknown scenario: " + cfg.name);
    S.global_tolerance = cfg.tolerance;
    return S;
}

} // namespace cw
