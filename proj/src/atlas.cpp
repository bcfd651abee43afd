#include "chernweil/atlas.hpp"

#include <cmath>

#include "chernweil/parallel.hpp"
#include "chernweil/profile_fn.hpp"

namespace cw {

void Atlas::finalize() {
    space->validate();
    int nc = num_charts();
    pou_values.assign(nc, {});
    quad_weights.assign(nc, {});
    active.assign(nc, {});
    for (int c = 0; c < nc; ++c) {
        const GridShape& g = space->charts[c];
        std::size_t nn = g.num_nodes();
        pou_values[c].resize(nn);
        quad_weights[c].resize(nn);
        auto& pv = pou_values[c];
        auto& qw = quad_weights[c];
        const auto& geom = charts[c];
        parallel_for(nn, [&](std::size_t n) {
            auto idx = g.unflat(n);
            auto x = g.coords(idx);
            pv[n] = geom.pou ? geom.pou(x) : 1.0;
            double w = 1.0;
            for (int a = 0; a < g.dim(); ++a) {
                double h = g.spacing(a);
                if (!g.periodic[a] && (idx[a] == 0 || idx[a] == g.res[a] - 1)) h *= 0.5;
                w *= h;
            }
            qw[n] = w;
        });
        for (std::size_t n = 0; n < nn; ++n)
            if (pv[n] > 0.0) active[c].push_back(n);
    }
}

double Atlas::pou_sum_at(int c, const std::vector<double>& x) const {
    double total = charts[c].pou ? charts[c].pou(x) : 1.0;
    for (const auto& t : transitions) {
        if (t.from != c) continue;
        if (!t.in_domain(x)) continue;
        auto y = t.map(x);
        total += charts[t.to].pou ? charts[t.to].pou(y) : 1.0;
    }
    return total;
}

cplx Atlas::integrate_top_form(const ScalarForm& w) const {
    int deg = 0;
    if (!w.pure_degree(&deg) || deg != manifold_dim)
        throw contract_error("integrate_top_form: form degree does not match manifold dimension");
    MultiIndex top((1u << manifold_dim) - 1u);
    cplx total(0.0);
    for (int c = 0; c < num_charts(); ++c) {
        const auto* comp = w.component(c, top);
        if (!comp) continue;
        const auto& act = active[c];
        const auto& pv = pou_values[c];
        const auto& qw = quad_weights[c];
        cplx chart_sum = parallel_pairwise_sum<cplx>(act.size(), [&](std::size_t i) {
            std::size_t n = act[i];
            return pv[n] * qw[n] * (*comp)[n];
        });
        total += charts[c].orientation * chart_sum;
    }
    return total;
}

cplx Atlas::integrate_region(const ScalarForm& w, const RegionMask& mask) const {
    int deg = 0;
    if (!w.pure_degree(&deg) || deg != manifold_dim)
        throw contract_error("integrate_region: form degree does not match manifold dimension");
    for (int c = 0; c < num_charts(); ++c)
        for (std::size_t n : active[c]) {
            double m = mask.values[c][n];
            if (m < -1e-12 || m > 1.0 + 1e-12)
                throw contract_error("integrate_region: mask value outside [0,1]");
        }
    MultiIndex top((1u << manifold_dim) - 1u);
    cplx total(0.0);
    for (int c = 0; c < num_charts(); ++c) {
        const auto* comp = w.component(c, top);
        if (!comp) continue;
        const auto& act = active[c];
        const auto& pv = pou_values[c];
        const auto& qw = quad_weights[c];
        const auto& mv = mask.values[c];
        cplx chart_sum = parallel_pairwise_sum<cplx>(act.size(), [&](std::size_t i) {
            std::size_t n = act[i];
            return mv[n] * pv[n] * qw[n] * (*comp)[n];
        });
        total += charts[c].orientation * chart_sum;
    }
    return total;
}

// ---- interpolation ----------------------------------------------------------

namespace {

// separable 4-point Lagrange interpolation on a uniform grid
cplx interpolate_on_grid(const GridShape& g, const std::vector<cplx>& comp,
                         const std::vector<double>& x) {
    int dim = g.dim();
    std::vector<std::array<int, 4>> taps(dim);
    std::vector<std::array<double, 4>> wts(dim);
    for (int a = 0; a < dim; ++a) {
        double h = g.spacing(a);
        double u = (x[a] - g.lo[a]) / h;
        int j0 = static_cast<int>(std::floor(u)) - 1;
        if (!g.periodic[a]) j0 = std::clamp(j0, 0, g.res[a] - 4);
        double t = u - j0;
        for (int k = 0; k < 4; ++k) {
            int j = j0 + k;
            if (g.periodic[a]) j = ((j % g.res[a]) + g.res[a]) % g.res[a];
            taps[a][k] = j;
            double w = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != k) w *= (t - m) / double(k - m);
            wts[a][k] = w;
        }
    }
    cplx total(0.0);
    int combos = 1 << (2 * dim); // 4^dim
    std::vector<int> idx(dim);
    for (int s = 0; s < combos; ++s) {
        double w = 1.0;
        int code = s;
        for (int a = 0; a < dim; ++a) {
            int k = code & 3;
            code >>= 2;
            idx[a] = taps[a][k];
            w *= wts[a][k];
        }
        total += w * comp[g.flat(idx)];
    }
    return total;
}

} // namespace

cplx Atlas::interpolate(int c, const std::vector<cplx>& comp, const std::vector<double>& x) const {
    return interpolate_on_grid(space->charts[c], comp, x);
}

// ---- boundary spheres -------------------------------------------------------

namespace {

double minor_det(const Eigen::MatrixXd& tangents, MultiIndex I) {
    auto axes = I.axes();
    int k = static_cast<int>(axes.size());
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int cc = 0; cc < k; ++cc) sub(r, cc) = tangents(axes[r], cc);
    return sub.determinant();
}

} // namespace

cplx integrate_boundary_sphere(const ScalarForm& w, const BoundarySphere& s) {
    int deg = 0;
    if (!w.pure_degree(&deg) || deg != s.sphere_dim)
        throw contract_error("integrate_boundary_sphere: form degree must equal sphere dimension");
    const GridShape& g = w.space()->charts[s.chart];
    for (int a = 0; a < g.dim(); ++a)
        for (const auto& node : s.nodes)
            if (!g.periodic[a] && (node.x[a] < g.lo[a] || node.x[a] > g.hi[a]))
                throw contract_error("integrate_boundary_sphere: sphere leaves its chart");

    cplx total(0.0);
    for (const auto& [mask, comp] : w.chart(s.chart)) {
        MultiIndex I(mask);
        cplx part = pairwise_sum<cplx>(s.nodes.size(), [&](std::size_t i) {
            const auto& node = s.nodes[i];
            return node.weight * minor_det(node.tangents, I) *
                   interpolate_on_grid(g, comp, node.x);
        });
        total += part;
    }
    return total;
}

cplx integrate_boundary_sphere(
    const std::function<cplx(const std::vector<double>&, MultiIndex)>& comp_fn,
    const BoundarySphere& s, int ambient_dim) {
    auto masks = multi_indices(ambient_dim, s.sphere_dim);
    cplx total(0.0);
    for (MultiIndex I : masks) {
        cplx part = pairwise_sum<cplx>(s.nodes.size(), [&](std::size_t i) {
            const auto& node = s.nodes[i];
            double mdet = minor_det(node.tangents, I);
            if (mdet == 0.0) return cplx(0.0);
            return node.weight * mdet * comp_fn(node.x, I);
        });
        total += part;
    }
    return total;
}

BoundarySphere make_circle(int chart, const std::vector<double>& center, double radius,
                           int num_points) {
    BoundarySphere s;
    s.chart = chart;
    s.center = center;
    s.radius = radius;
    s.sphere_dim = 1;
    int dim = static_cast<int>(center.size());
    double dth = 2.0 * M_PI / num_points;
    for (int k = 0; k < num_points; ++k) {
        double th = k * dth;
        BoundarySphere::QNode q;
        q.x = center;
        q.x[0] += radius * std::cos(th);
        q.x[1] += radius * std::sin(th);
        q.tangents = Eigen::MatrixXd::Zero(dim, 1);
        q.tangents(0, 0) = -radius * std::sin(th);
        q.tangents(1, 0) = radius * std::cos(th);
        q.weight = dth;
        s.nodes.push_back(std::move(q));
    }
    return s;
}

BoundarySphere make_sphere3(int chart, const std::vector<double>& center, double radius,
                            int res_theta, int res_phi) {
    BoundarySphere s;
    s.chart = chart;
    s.center = center;
    s.radius = radius;
    s.sphere_dim = 3;

    std::vector<double> tn, tw;
    gauss_legendre(res_theta, tn, tw);

    double dphi = 2.0 * M_PI / res_phi;
    for (int it = 0; it < res_theta; ++it) {
        double th = tn[it] * (M_PI / 2.0);
        double wth = tw[it] * (M_PI / 2.0);
        double ct = std::cos(th), st = std::sin(th);
        for (int i1 = 0; i1 < res_phi; ++i1) {
            double p1 = i1 * dphi;
            double c1 = std::cos(p1), s1 = std::sin(p1);
            for (int i2 = 0; i2 < res_phi; ++i2) {
                double p2 = i2 * dphi;
                double c2 = std::cos(p2), s2 = std::sin(p2);
                BoundarySphere::QNode q;
                q.x = center;
                q.x[0] += radius * ct * c1;
                q.x[1] += radius * ct * s1;
                q.x[2] += radius * st * c2;
                q.x[3] += radius * st * s2;
                // tangent order (theta, phi2, phi1) gives the induced boundary
                // orientation (outward normal first is positively oriented)
                q.tangents = Eigen::MatrixXd::Zero(4, 3);
                q.tangents(0, 0) = -radius * st * c1;
                q.tangents(1, 0) = -radius * st * s1;
                q.tangents(2, 0) = radius * ct * c2;
                q.tangents(3, 0) = radius * ct * s2;
                q.tangents(2, 1) = -radius * st * s2;
                q.tangents(3, 1) = radius * st * c2;
                q.tangents(0, 2) = -radius * ct * s1;
                q.tangents(1, 2) = radius * ct * c1;
                q.weight = wth * dphi * dphi;
                s.nodes.push_back(std::move(q));
            }
        }
    }
    return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate, on [-1,1]
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (1.0 - x); // mirror so nodes increase on [0,1]
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

// ---- factories --------------------------------------------------------------

Atlas make_torus_atlas(int k, int res, int stencil_order) {
    auto sp = std::make_shared<FormSpace>();
    GridShape g;
    g.lo.assign(k, 0.0);
    g.hi.assign(k, 2.0 * M_PI);
    g.res.assign(k, res);
    g.periodic.assign(k, true);
    sp->charts = {g};
    sp->stencil_order = stencil_order;

    Atlas a;
    a.space = sp;
    a.manifold_dim = k;
    ChartGeometry geom;
    geom.pou = [](const std::vector<double>&) { return 1.0; };
    geom.metric = [k](const std::vector<double>&) {
        return Eigen::MatrixXd::Identity(k, k).eval();
    };
    geom.orientation = 1.0;
    a.charts = {geom};
    a.finalize();
    return a;
}

void stereo_frame_rotation(double x, double y, double& c, double& s) {
    double r2 = x * x + y * y;
    c = (y * y - x * x) / r2;
    s = 2.0 * x * y / r2;
}

namespace {

std::vector<double> stereo_map(const std::vector<double>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    return {x[0] / r2, -x[1] / r2};
}

Eigen::MatrixXd stereo_jacobian(const std::vector<double>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    double r4 = r2 * r2;
    Eigen::MatrixXd J(2, 2);
    J(0, 0) = (x[1] * x[1] - x[0] * x[0]) / r4;
    J(0, 1) = -2.0 * x[0] * x[1] / r4;
    J(1, 0) = 2.0 * x[0] * x[1] / r4;
    J(1, 1) = (x[1] * x[1] - x[0] * x[0]) / r4;
    return J;
}

} // namespace

Atlas make_sphere_atlas(int res, int stencil_order, SpherePouParams pp) {
    auto sp = std::make_shared<FormSpace>();
    GridShape g;
    g.lo = {-pp.box, -pp.box};
    g.hi = {pp.box, pp.box};
    g.res = {res, res};
    g.periodic = {false, false};
    sp->charts = {g, g};
    sp->stencil_order = stencil_order;

    BumpProfile bump{pp.r_full, pp.r_zero, pp.order};
    auto pou_fn = [bump](const std::vector<double>& x) {
        double r = std::hypot(x[0], x[1]);
        double own = bump(r);
        if (own == 0.0) return 0.0;
        double other = (r == 0.0) ? 0.0 : bump(1.0 / r);
        return own / (own + other);
    };
    auto metric_fn = [](const std::vector<double>& x) {
        double l = stereo_lambda(x[0], x[1]);
        return (l * l * Eigen::MatrixXd::Identity(2, 2)).eval();
    };

    Atlas a;
    a.space = sp;
    a.manifold_dim = 2;
    ChartGeometry geom;
    geom.pou = pou_fn;
    geom.metric = metric_fn;
    geom.orientation = 1.0;
    a.charts = {geom, geom};

    double box = pp.box;
    auto in_dom = [box](const std::vector<double>& x) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        if (r2 < 1e-16) return false;
        return std::abs(x[0]) / r2 <= box && std::abs(x[1]) / r2 <= box;
    };
    for (int dir = 0; dir < 2; ++dir) {
        ChartTransition t;
        t.from = dir;
        t.to = 1 - dir;
        t.in_domain = in_dom;
        t.map = stereo_map;
        t.jacobian = stereo_jacobian;
        a.transitions.push_back(t);
    }
    a.finalize();
    return a;
}

Atlas make_product_atlas(const Atlas& a, const Atlas& b) {
    auto sp = std::make_shared<FormSpace>();
    sp->stencil_order = a.space->stencil_order;
    int da = a.manifold_dim, db = b.manifold_dim;

    Atlas p;
    p.manifold_dim = da + db;
    int nb = b.num_charts();

    for (int ca = 0; ca < a.num_charts(); ++ca)
        for (int cb = 0; cb < b.num_charts(); ++cb) {
            const GridShape& ga = a.space->charts[ca];
            const GridShape& gb = b.space->charts[cb];
            GridShape g;
            g.lo = ga.lo;
            g.hi = ga.hi;
            g.res = ga.res;
            g.periodic = ga.periodic;
            g.lo.insert(g.lo.end(), gb.lo.begin(), gb.lo.end());
            g.hi.insert(g.hi.end(), gb.hi.begin(), gb.hi.end());
            g.res.insert(g.res.end(), gb.res.begin(), gb.res.end());
            g.periodic.insert(g.periodic.end(), gb.periodic.begin(), gb.periodic.end());
            sp->charts.push_back(g);

            ChartGeometry geom;
            auto pa = a.charts[ca].pou;
            auto pb = b.charts[cb].pou;
            geom.pou = [pa, pb, da, db](const std::vector<double>& x) {
                std::vector<double> xa(x.begin(), x.begin() + da);
                std::vector<double> xb(x.begin() + da, x.end());
                return (pa ? pa(xa) : 1.0) * (pb ? pb(xb) : 1.0);
            };
            auto ma = a.charts[ca].metric;
            auto mb = b.charts[cb].metric;
            geom.metric = [ma, mb, da, db](const std::vector<double>& x) {
                std::vector<double> xa(x.begin(), x.begin() + da);
                std::vector<double> xb(x.begin() + da, x.end());
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(da + db, da + db);
                m.topLeftCorner(da, da) = ma(xa);
                m.bottomRightCorner(db, db) = mb(xb);
                return m;
            };
            geom.orientation = a.charts[ca].orientation * b.charts[cb].orientation;
            p.charts.push_back(geom);
        }

    // transitions between product charts that differ in at most the factor
    // charts for which a factor transition exists
    auto factor_transition = [](const Atlas& f, int from, int to) -> const ChartTransition* {
        for (const auto& t : f.transitions)
            if (t.from == from && t.to == to) return &t;
        return nullptr;
    };
    for (int ca = 0; ca < a.num_charts(); ++ca)
        for (int cb = 0; cb < b.num_charts(); ++cb)
            for (int dA = 0; dA < a.num_charts(); ++dA)
                for (int dB = 0; dB < b.num_charts(); ++dB) {
                    if (ca == dA && cb == dB) continue;
                    const ChartTransition* ta = (ca == dA) ? nullptr : factor_transition(a, ca, dA);
                    const ChartTransition* tb = (cb == dB) ? nullptr : factor_transition(b, cb, dB);
                    if (ca != dA && !ta) continue;
                    if (cb != dB && !tb) continue;
                    ChartTransition t;
                    t.from = ca * nb + cb;
                    t.to = dA * nb + dB;
                    t.in_domain = [ta, tb, da](const std::vector<double>& x) {
                        std::vector<double> xa(x.begin(), x.begin() + da);
                        std::vector<double> xb(x.begin() + da, x.end());
                        if (ta && !ta->in_domain(xa)) return false;
                        if (tb && !tb->in_domain(xb)) return false;
                        return true;
                    };
                    t.map = [ta, tb, da](const std::vector<double>& x) {
                        std::vector<double> xa(x.begin(), x.begin() + da);
                        std::vector<double> xb(x.begin() + da, x.end());
                        auto ya = ta ? ta->map(xa) : xa;
                        auto yb = tb ? tb->map(xb) : xb;
                        ya.insert(ya.end(), yb.begin(), yb.end());
                        return ya;
                    };
                    t.jacobian = [ta, tb, da, db](const std::vector<double>& x) {
                        std::vector<double> xa(x.begin(), x.begin() + da);
                        std::vector<double> xb(x.begin() + da, x.end());
                        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(da + db, da + db);
                        J.topLeftCorner(da, da) =
                            ta ? ta->jacobian(xa) : Eigen::MatrixXd::Identity(da, da).eval();
                        J.bottomRightCorner(db, db) =
                            tb ? tb->jacobian(xb) : Eigen::MatrixXd::Identity(db, db).eval();
                        return J;
                    };
                    p.transitions.push_back(t);
                }
    p.space = sp;
    p.finalize();
    return p;
}

Atlas make_disk_bundle_atlas(int base_res, int fiber_res, double F, int stencil_order,
                             SpherePouParams pp) {
    auto sp = std::make_shared<FormSpace>();
    GridShape g;
    g.lo = {-pp.box, -pp.box, -F, -F};
    g.hi = {pp.box, pp.box, F, F};
    g.res = {base_res, base_res, fiber_res, fiber_res};
    g.periodic = {false, false, false, false};
    sp->charts = {g, g};
    sp->stencil_order = stencil_order;

    BumpProfile bump{pp.r_full, pp.r_zero, pp.order};
    auto pou_fn = [bump](const std::vector<double>& x) {
        double r = std::hypot(x[0], x[1]);
        double own = bump(r);
        if (own == 0.0) return 0.0;
        double other = (r == 0.0) ? 0.0 : bump(1.0 / r);
        return own / (own + other);
    };
    auto metric_fn = [](const std::vector<double>& x) {
        double l = stereo_lambda(x[0], x[1]);
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
        m(0, 0) = m(1, 1) = l * l;
        return m;
    };

    Atlas a;
    a.space = sp;
    a.manifold_dim = 4;
    ChartGeometry geom;
    geom.pou = pou_fn;
    geom.metric = metric_fn;
    geom.orientation = 1.0;
    a.charts = {geom, geom};

    double box = pp.box;
    auto in_dom = [box, F](const std::vector<double>& x) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        if (r2 < 1e-16) return false;
        return std::abs(x[0]) / r2 <= box && std::abs(x[1]) / r2 <= box &&
               std::abs(x[2]) <= F && std::abs(x[3]) <= F;
    };
    auto full_map = [](const std::vector<double>& x) {
        auto y = stereo_map({x[0], x[1]});
        double c, s;
        stereo_frame_rotation(x[0], x[1], c, s);
        return std::vector<double>{y[0], y[1], c * x[2] - s * x[3], s * x[2] + c * x[3]};
    };
    auto full_jac = [](const std::vector<double>& x) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 4);
        J.topLeftCorner(2, 2) = stereo_jacobian({x[0], x[1]});
        double c, s;
        stereo_frame_rotation(x[0], x[1], c, s);
        J(2, 2) = c;
        J(2, 3) = -s;
        J(3, 2) = s;
        J(3, 3) = c;
        double X = x[0], Y = x[1], r2 = X * X + Y * Y, r4 = r2 * r2;
        double dcdx = -4.0 * X * Y * Y / r4, dcdy = 4.0 * X * X * Y / r4;
        double dsdx = 2.0 * Y * (Y * Y - X * X) / r4, dsdy = 2.0 * X * (X * X - Y * Y) / r4;
        J(2, 0) = dcdx * x[2] - dsdx * x[3];
        J(2, 1) = dcdy * x[2] - dsdy * x[3];
        J(3, 0) = dsdx * x[2] + dcdx * x[3];
        J(3, 1) = dsdy * x[2] + dcdy * x[3];
        return J;
    };
    for (int dir = 0; dir < 2; ++dir) {
        ChartTransition t;
        t.from = dir;
        t.to = 1 - dir;
        t.in_domain = in_dom;
        t.map = full_map;
        t.jacobian = full_jac;
        a.transitions.push_back(t);
    }
    a.finalize();
    return a;
}

} // namespace cw
