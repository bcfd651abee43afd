#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "chernweil/atlas.hpp"
#include "chernweil/mesh.hpp"

using namespace cw;

namespace {

// sample a scalar form from per-chart analytic coefficients
ScalarForm sample_form(const Atlas& atlas, int degree,
                       const std::function<cplx(int, const std::vector<double>&, MultiIndex)>& fn) {
    ScalarForm f(atlas.space);
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const GridShape& g = atlas.grid(c);
        for (auto I : multi_indices(g.dim(), degree)) {
            auto& comp = f.ensure(c, I, cplx(0.0));
            for (std::size_t n = 0; n < g.num_nodes(); ++n)
                comp[n] = fn(c, g.coords(g.unflat(n)), I);
        }
    }
    return f;
}

// embedding of the sphere atlas charts into R^3 (chart 1 carries the
// conjugated coordinate)
void sphere_embed(int chart, const std::vector<double>& x, double p[3]) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    double d = 1.0 + r2;
    if (chart == 0) {
        p[0] = 2.0 * x[0] / d;
        p[1] = 2.0 * x[1] / d;
        p[2] = (r2 - 1.0) / d;
    } else {
        p[0] = 2.0 * x[0] / d;
        p[1] = -2.0 * x[1] / d;
        p[2] = (1.0 - r2) / d;
    }
}

} // namespace

TEST_CASE("quadrature weights sum to the box volume") {
    auto t = make_torus_atlas(2, 32);
    double total = 0.0;
    for (double w : t.quad_weights[0]) total += w;
    CHECK(total == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));

    auto s = make_sphere_atlas(24);
    total = 0.0;
    for (double w : s.quad_weights[0]) total += w;
    CHECK(total == doctest::Approx(4.4 * 4.4).epsilon(1e-12));
}

TEST_CASE("normalized area form on the torus integrates to one") {
    auto t = make_torus_atlas(2, 32);
    double norm = 1.0 / (4.0 * M_PI * M_PI);
    auto f = sample_form(t, 2, [&](int, const std::vector<double>&, MultiIndex) {
        return cplx(norm);
    });
    CHECK(std::abs(t.integrate_top_form(f) - cplx(1.0)) < 1e-10);
}

TEST_CASE("round sphere area") {
    auto s = make_sphere_atlas(96);
    auto area = sample_form(s, 2, [](int, const std::vector<double>& x, MultiIndex) {
        double l = stereo_lambda(x[0], x[1]);
        return cplx(l * l);
    });
    cplx val = s.integrate_top_form(area);
    CHECK(std::abs(val - cplx(4.0 * M_PI)) / (4.0 * M_PI) < 1e-4);
}

TEST_CASE("partition of unity sums to one at random physical points") {
    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto s = make_sphere_atlas(32);
    for (int k = 0; k < 1000; ++k) {
        double p[3];
        double nrm = 0.0;
        for (auto& v : p) {
            v = gauss(rng);
        }
        nrm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        for (auto& v : p) v /= nrm;
        // chart 0 coordinates (projection from the north pole)
        if (std::abs(1.0 - p[2]) < 1e-6) continue;
        std::vector<double> x = {p[0] / (1.0 - p[2]), p[1] / (1.0 - p[2])};
        if (std::abs(x[0]) > 2.2 || std::abs(x[1]) > 2.2) {
            // use chart 1 instead
            x = {p[0] / (1.0 + p[2]), -p[1] / (1.0 + p[2])};
            CHECK(std::abs(s.pou_sum_at(1, x) - 1.0) < 1e-12);
        } else {
            CHECK(std::abs(s.pou_sum_at(0, x) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("stokes: the integral of an exact form over the sphere vanishes") {
    // the test form mixes azimuthal harmonics so no cancellation hides the
    // discretization error; resolution 192 brings the residual under 1e-6
    auto s = make_sphere_atlas(192);
    auto f = sample_form(s, 0, [](int c, const std::vector<double>& x, MultiIndex) {
        double p[3];
        sphere_embed(c, x, p);
        return cplx(std::exp(0.5 * (p[2] + 0.7 * p[0])) * (1.0 + 0.3 * p[1]));
    });
    auto g = sample_form(s, 0, [](int c, const std::vector<double>& x, MultiIndex) {
        double p[3];
        sphere_embed(c, x, p);
        return cplx(p[1] + 0.4 * p[2] * p[2] + 0.25 * p[0] * p[1]);
    });
    auto eta = wedge(f, exterior_derivative(g));
    cplx val = s.integrate_top_form(exterior_derivative(eta));
    CHECK(std::abs(val) < 1e-6);
}

TEST_CASE("region masks split an integral additively") {
    auto s = make_sphere_atlas(48);
    auto area = sample_form(s, 2, [](int, const std::vector<double>& x, MultiIndex) {
        double l = stereo_lambda(x[0], x[1]);
        return cplx(l * l);
    });
    RegionMask m, one_minus, ones, zeros;
    for (int c = 0; c < s.num_charts(); ++c) {
        const GridShape& g = s.grid(c);
        std::vector<double> mv(g.num_nodes()), cv(g.num_nodes()), ov(g.num_nodes(), 1.0),
            zv(g.num_nodes(), 0.0);
        for (std::size_t n = 0; n < g.num_nodes(); ++n) {
            auto x = g.coords(g.unflat(n));
            double t = 0.5 * (1.0 + std::tanh(x[0]));
            mv[n] = t;
            cv[n] = 1.0 - t;
        }
        m.values.push_back(mv);
        one_minus.values.push_back(cv);
        ones.values.push_back(ov);
        zeros.values.push_back(zv);
    }
    cplx full = s.integrate_top_form(area);
    CHECK(std::abs(s.integrate_region(area, ones) - full) < 1e-13);
    CHECK(std::abs(s.integrate_region(area, zeros)) == 0.0);
    cplx a = s.integrate_region(area, m), b = s.integrate_region(area, one_minus);
    CHECK(std::abs(a + b - full) < 1e-12);

    RegionMask bad = ones;
    bad.values[0][s.active[0][0]] = 1.5;
    CHECK_THROWS_AS(s.integrate_region(area, bad), contract_error);
}

TEST_CASE("gauss curvature density integrates to the euler number") {
    std::vector<double> errs;
    for (int res : {32, 64}) {
        auto s = make_sphere_atlas(res);
        auto dens = sample_form(s, 2, [](int, const std::vector<double>& x, MultiIndex) {
            double l = stereo_lambda(x[0], x[1]);
            return cplx(l * l / (2.0 * M_PI)); // K = 1 on the unit sphere
        });
        errs.push_back(std::abs(s.integrate_top_form(dens) - cplx(2.0)));
    }
    CHECK(errs[1] < 1e-3);
    CHECK(errs[1] < errs[0]);
}

TEST_CASE("boundary circle integrals") {
    auto sphere = make_sphere_atlas(96);
    auto circ = make_circle(0, {0.0, 0.0}, 1.0, 256);

    SUBCASE("winding form integrates to 2 pi") {
        auto dtheta = [](const std::vector<double>& x, MultiIndex I) {
            double r2 = x[0] * x[0] + x[1] * x[1];
            if (I.mask() == 1u) return cplx(-x[1] / r2);
            return cplx(x[0] / r2);
        };
        cplx val = integrate_boundary_sphere(dtheta, circ, 2);
        CHECK(std::abs(val - cplx(2.0 * M_PI)) < 1e-10);
    }
    SUBCASE("exact forms integrate to zero") {
        auto df = [](const std::vector<double>& x, MultiIndex I) {
            // d of f = exp(x) sin(y)
            if (I.mask() == 1u) return cplx(std::exp(x[0]) * std::sin(x[1]));
            return cplx(std::exp(x[0]) * std::cos(x[1]));
        };
        CHECK(std::abs(integrate_boundary_sphere(df, circ, 2)) < 1e-8);
    }
    SUBCASE("grid-form pullback matches the analytic value") {
        auto omega = sample_form(sphere, 1, [](int, const std::vector<double>& x, MultiIndex I) {
            if (I.mask() == 1u) return cplx(-x[1]);
            return cplx(x[0]);
        });
        // loop of radius 1 of the rotation covector: integral = 2 pi r^2
        cplx val = integrate_boundary_sphere(omega, circ);
        CHECK(std::abs(val - cplx(2.0 * M_PI)) < 1e-6);
    }
}

TEST_CASE("three-sphere volume form") {
    for (double r : {0.7, 1.0}) {
        auto s3 = make_sphere3(0, {0.0, 0.0, 0.0, 0.0}, r, 24, 48);
        auto vol = [r](const std::vector<double>& x, MultiIndex I) {
            // (1/r) * sum_i (-1)^i x_i dx^{complement}
            int missing = -1;
            for (int a = 0; a < 4; ++a)
                if (!I.contains(a)) missing = a;
            double sgn = (missing % 2 == 0) ? 1.0 : -1.0;
            return cplx(sgn * x[missing] / r);
        };
        cplx val = integrate_boundary_sphere(vol, s3, 4);
        double expect = 2.0 * M_PI * M_PI * r * r * r;
        CHECK(std::abs(val - cplx(expect)) / expect < 1e-5);
        CHECK(val.real() > 0.0); // induced orientation is positive
    }
}

TEST_CASE("overlap consistency of a global form under transition pullback") {
    auto s = make_sphere_atlas(64);
    // the area form in both charts
    auto area = sample_form(s, 2, [](int, const std::vector<double>& x, MultiIndex) {
        double l = stereo_lambda(x[0], x[1]);
        return cplx(l * l);
    });
    const auto& t = s.transitions[0]; // chart 0 -> chart 1
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    int tested = 0;
    while (tested < 200) {
        std::vector<double> x = {u(rng), u(rng)};
        double r = std::hypot(x[0], x[1]);
        if (r < 0.7 || r > 1.4) continue;
        if (!t.in_domain(x)) continue;
        ++tested;
        auto y = t.map(x);
        double det = t.jacobian(x).determinant();
        CHECK(det > 0.0);
        // 2-form pullback: coeff_0(x) = coeff_1(T(x)) * det J
        double l0 = stereo_lambda(x[0], x[1]);
        double l1 = stereo_lambda(y[0], y[1]);
        CHECK(std::abs(l0 * l0 - l1 * l1 * det) < 1e-12);
        // and the sampled grid values agree after interpolation within
        // the discretization tolerance
        const auto* c1 = area.component(1, MultiIndex::from_axes({0, 1}));
        REQUIRE(c1);
        cplx interp = s.interpolate(1, *c1, y);
        CHECK(std::abs(cplx(l0 * l0) - interp * det) < 1e-4);
    }
}

TEST_CASE("euler characteristic oracle") {
    CHECK(euler_char_oracle(octahedron_sphere()) == 2);
    CHECK(euler_char_oracle(grid_torus(8)) == 0);
    CHECK(euler_char_oracle(product_mesh(octahedron_sphere(), octahedron_sphere())) == 4);

    SimplicialMesh bad = octahedron_sphere();
    bad.cells[1].pop_back(); // drop an edge: faces lose a side
    CHECK_THROWS_AS(euler_char_oracle(bad), std::invalid_argument);
}

TEST_CASE("product atlas partition of unity") {
    auto s = make_sphere_atlas(16);
    auto p = make_product_atlas(s, s);
    CHECK(p.num_charts() == 4);
    CHECK(p.manifold_dim == 4);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> x = {u(rng), u(rng), u(rng), u(rng)};
        CHECK(std::abs(p.pou_sum_at(0, x) - 1.0) < 1e-12);
    }
}

TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
    std::vector<double> xs, ws;
    gauss_legendre(8, xs, ws);
    double s0 = 0.0, s7 = 0.0;
    for (int i = 0; i < 8; ++i) {
        s0 += ws[i];
        s7 += ws[i] * std::pow(xs[i], 7);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s7 == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}
