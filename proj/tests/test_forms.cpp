#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "chernweil/forms.hpp"

using namespace cw;

namespace {

FormSpacePtr make_space(int dim, int res, bool periodic, int order = 4) {
    auto sp = std::make_shared<FormSpace>();
    GridShape g;
    g.lo.assign(dim, 0.0);
    g.hi.assign(dim, 2.0 * M_PI);
    g.res.assign(dim, res);
    g.periodic.assign(dim, periodic);
    sp->charts = {g};
    sp->stencil_order = order;
    return sp;
}

ScalarForm sample_scalar(const FormSpacePtr& sp, MultiIndex I,
                         const std::function<cplx(const std::vector<double>&)>& fn) {
    ScalarForm f(sp);
    const GridShape& g = sp->charts[0];
    auto& comp = f.ensure(0, I, cplx(0.0));
    for (std::size_t n = 0; n < g.num_nodes(); ++n) comp[n] = fn(g.coords(g.unflat(n)));
    return f;
}

int brute_force_sign(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> cat = a;
    cat.insert(cat.end(), b.begin(), b.end());
    int sign = 1;
    for (std::size_t i = 0; i < cat.size(); ++i)
        for (std::size_t j = i + 1; j < cat.size(); ++j) {
            if (cat[i] == cat[j]) return 0;
            if (cat[i] > cat[j]) sign = -sign;
        }
    return sign;
}

} // namespace

TEST_CASE("wedge sign matches permutation parity") {
    for (std::uint32_t ma = 0; ma < 32; ++ma)
        for (std::uint32_t mb = 0; mb < 32; ++mb) {
            MultiIndex I(ma), J(mb);
            CHECK(wedge_sign(I, J) == brute_force_sign(I.axes(), J.axes()));
        }
}

TEST_CASE("multi index invariants") {
    CHECK_THROWS(MultiIndex::from_axes({1, 1}));
    CHECK_THROWS(MultiIndex::from_axes({2, 1}));
    CHECK(MultiIndex::from_axes({0, 2}).degree() == 2);
}

TEST_CASE("wedge basics") {
    auto sp = make_space(2, 16, true);
    auto dx = sample_scalar(sp, MultiIndex::from_axes({0}),
                            [](const std::vector<double>&) { return cplx(1.0); });
    auto dy = sample_scalar(sp, MultiIndex::from_axes({1}),
                            [](const std::vector<double>&) { return cplx(1.0); });

    SUBCASE("dx ^ dx = 0") {
        auto w = wedge(dx, dx);
        CHECK(max_abs_interior(w) == 0.0);
    }
    SUBCASE("dx ^ dy = -(dy ^ dx)") {
        auto a = wedge(dx, dy);
        auto b = wedge(dy, dx);
        const auto* ca = a.component(0, MultiIndex::from_axes({0, 1}));
        const auto* cb = b.component(0, MultiIndex::from_axes({0, 1}));
        REQUIRE(ca);
        REQUIRE(cb);
        for (std::size_t n = 0; n < ca->size(); ++n) CHECK((*ca)[n] == -(*cb)[n]);
    }
    SUBCASE("bilinearity") {
        auto a = scaled(dx, cplx(2.0));
        auto b = scaled(dy, cplx(3.0));
        auto w = wedge(a, b);
        const auto* c = w.component(0, MultiIndex::from_axes({0, 1}));
        REQUIRE(c);
        for (auto& v : *c) CHECK(v == cplx(6.0));
    }
}

TEST_CASE("odd self-wedge cancels exactly for random forms") {
    auto sp = make_space(3, 8, true);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarForm a(sp);
    for (int axis = 0; axis < 3; ++axis) {
        auto& comp = a.ensure(0, MultiIndex::from_axes({axis}), cplx(0.0));
        for (auto& v : comp) v = cplx(u(rng), u(rng));
    }
    auto w = wedge(a, a);
    CHECK(max_abs_interior(w) == 0.0);
}

TEST_CASE("exterior derivative") {
    auto sp = make_space(2, 32, false);

    SUBCASE("d of constant vanishes") {
        auto f = sample_scalar(sp, MultiIndex(0),
                               [](const std::vector<double>&) { return cplx(3.5); });
        CHECK(max_abs_interior(exterior_derivative(f)) < 1e-14);
    }
    SUBCASE("d(x dy) = dx^dy exactly on a polynomial stencil") {
        auto f = sample_scalar(sp, MultiIndex::from_axes({1}),
                               [](const std::vector<double>& x) { return cplx(x[0]); });
        auto df = exterior_derivative(f);
        const auto* c = df.component(0, MultiIndex::from_axes({0, 1}));
        REQUIRE(c);
        const GridShape& g = sp->charts[0];
        for (std::size_t n = 0; n < c->size(); ++n) {
            if (!g.interior(g.unflat(n), 2)) continue;
            CHECK(std::abs((*c)[n] - cplx(1.0)) < 1e-13);
        }
    }
    SUBCASE("top degree maps to the empty form") {
        auto f = sample_scalar(sp, MultiIndex::from_axes({0, 1}),
                               [](const std::vector<double>& x) { return cplx(std::sin(x[0])); });
        auto df = exterior_derivative(f);
        CHECK(df.degrees().empty());
    }
}

TEST_CASE("d of d is zero at machine precision; Leibniz residual converges at stencil order") {
    // Centered difference operators along distinct axes commute, so the
    // discrete d(d(w)) vanishes identically. The finite-difference error of
    // the operator itself is measured through the Leibniz-rule residual,
    // which decays at the nominal order.
    auto smooth1 = [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]) * std::cos(2.0 * x[1]), std::cos(x[0] + x[1]));
    };
    auto smooth2 = [](const std::vector<double>& x) {
        return cplx(std::cos(3.0 * x[0]) + std::sin(x[1]), std::sin(2.0 * x[0]));
    };

    std::vector<double> dd_norms, leibniz_norms;
    for (int res : {32, 64, 128}) {
        auto sp = make_space(2, res, true);
        auto f = sample_scalar(sp, MultiIndex::from_axes({0}), smooth1);
        auto& c1 = f.ensure(0, MultiIndex::from_axes({1}), cplx(0.0));
        const GridShape& g = sp->charts[0];
        for (std::size_t n = 0; n < g.num_nodes(); ++n) c1[n] = smooth2(g.coords(g.unflat(n)));

        dd_norms.push_back(max_abs_interior(exterior_derivative(exterior_derivative(f))));

        auto a = sample_scalar(sp, MultiIndex(0), smooth1);
        auto b = sample_scalar(sp, MultiIndex(0), smooth2);
        auto lhs = exterior_derivative(wedge(a, b));
        auto r1 = wedge(exterior_derivative(a), b);
        auto r2 = wedge(a, exterior_derivative(b));
        r1 += r2;
        r1 *= cplx(-1.0);
        lhs += r1;
        leibniz_norms.push_back(max_abs_interior(lhs));
    }

    for (double v : dd_norms) CHECK(v < 1e-12);

    double slope1 = std::log2(leibniz_norms[0] / leibniz_norms[1]);
    double slope2 = std::log2(leibniz_norms[1] / leibniz_norms[2]);
    CHECK(slope1 > 4.0 - 0.3);
    CHECK(slope2 > 4.0 - 0.3);
}

TEST_CASE("matrix exponential form") {
    auto sp2 = make_space(2, 8, true);
    auto sp4 = make_space(4, 8, true);

    SUBCASE("exp(0) is the identity zero-form") {
        MatrixForm W(sp2);
        auto e = matrix_exp_form(W, 3);
        const auto* c = e.component(0, MultiIndex(0));
        REQUIRE(c);
        for (const auto& m : *c) CHECK((m - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("dimension 2: series stops after the linear term") {
        MatrixForm W(sp2);
        auto& comp = W.ensure(0, MultiIndex::from_axes({0, 1}), Mat::Zero(1, 1));
        const GridShape& g = sp2->charts[0];
        for (std::size_t n = 0; n < g.num_nodes(); ++n)
            comp[n](0, 0) = cplx(std::sin(g.coords(g.unflat(n))[0]), 0.5);
        auto e = matrix_exp_form(W, 1);
        const auto* c0 = e.component(0, MultiIndex(0));
        const auto* c2 = e.component(0, MultiIndex::from_axes({0, 1}));
        REQUIRE(c0);
        REQUIRE(c2);
        for (std::size_t n = 0; n < c0->size(); ++n) {
            CHECK((*c0)[n](0, 0) == cplx(1.0));
            CHECK((*c2)[n](0, 0) == comp[n](0, 0));
        }
    }
    SUBCASE("dimension 4: exp(a) = 1 + a + a^a/2 against a brute-force oracle") {
        MatrixForm W(sp4);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto I : multi_indices(4, 2)) {
            auto& comp = W.ensure(0, I, Mat::Zero(1, 1));
            for (auto& m : comp) m(0, 0) = cplx(u(rng), u(rng));
        }
        auto e = matrix_exp_form(W, 1);
        // independent oracle: explicit repeated wedge
        auto w2 = wedge(W, W);
        const auto* etop = e.component(0, MultiIndex::from_axes({0, 1, 2, 3}));
        const auto* otop = w2.component(0, MultiIndex::from_axes({0, 1, 2, 3}));
        REQUIRE(etop);
        REQUIRE(otop);
        for (std::size_t n = 0; n < etop->size(); ++n)
            CHECK(std::abs((*etop)[n](0, 0) - 0.5 * (*otop)[n](0, 0)) < 1e-14);
    }
    SUBCASE("degree-0 part rejected") {
        MatrixForm W(sp2);
        W.ensure(0, MultiIndex(0), Mat::Identity(2, 2));
        CHECK_THROWS_AS(matrix_exp_form(W, 2), contract_error);
    }
}

TEST_CASE("supertrace") {
    auto sp = make_space(2, 8, true);
    GradingTag g = GradingTag::split(2, 3);
    g.validate();

    MatrixForm A(sp);
    auto& comp = A.ensure(0, MultiIndex(0), Mat::Zero(5, 5));
    Mat blockA = Mat::Random(2, 2), blockB = Mat::Random(3, 3), off = Mat::Random(2, 3);
    Mat m = Mat::Zero(5, 5);
    m.topLeftCorner(2, 2) = blockA;
    m.bottomRightCorner(3, 3) = blockB;
    for (auto& v : comp) v = m;

    SUBCASE("identity gives rank difference") {
        MatrixForm I(sp);
        auto& ic = I.ensure(0, MultiIndex(0), Mat::Identity(5, 5));
        (void)ic;
        auto tr = supertrace(I, g);
        const auto* c = tr.component(0, MultiIndex(0));
        for (auto& v : *c) CHECK(std::abs(v - cplx(2.0 - 3.0)) < 1e-14);
    }
    SUBCASE("block matrix traces subtract") {
        auto tr = supertrace(A, g);
        const auto* c = tr.component(0, MultiIndex(0));
        cplx expect = blockA.trace() - blockB.trace();
        for (auto& v : *c) CHECK(std::abs(v - expect) < 1e-13);
    }
    SUBCASE("odd matrix has zero supertrace") {
        MatrixForm B(sp);
        Mat modd = Mat::Zero(5, 5);
        modd.topRightCorner(2, 3) = off;
        modd.bottomLeftCorner(3, 2) = Mat::Random(3, 2);
        auto& bc = B.ensure(0, MultiIndex(0), modd);
        (void)bc;
        auto tr = supertrace(B, g);
        CHECK(max_abs_interior(tr) < 1e-14);
    }
    SUBCASE("projector mismatch throws") {
        MatrixForm B(sp);
        B.ensure(0, MultiIndex(0), Mat::Identity(4, 4));
        CHECK_THROWS_AS(supertrace(B, g), contract_error);
    }
}

TEST_CASE("trace powers are conjugation invariant at every node") {
    auto sp = make_space(4, 6, true);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    MatrixForm W(sp);
    for (auto I : multi_indices(4, 2)) {
        auto& comp = W.ensure(0, I, Mat::Zero(3, 3));
        for (auto& m : comp)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) m(r, c) = cplx(u(rng), u(rng));
    }
    // pointwise invertible gauge with mild conditioning
    const GridShape& g = sp->charts[0];
    std::vector<Mat> gauge(g.num_nodes());
    for (auto& m : gauge) {
        m = Mat::Identity(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) += 0.4 * cplx(u(rng), u(rng));
    }
    MatrixForm Wg(sp);
    for (auto I : multi_indices(4, 2)) {
        const auto* src = W.component(0, I);
        auto& dst = Wg.ensure(0, I, Mat::Zero(3, 3));
        for (std::size_t n = 0; n < src->size(); ++n)
            dst[n] = gauge[n].inverse() * (*src)[n] * gauge[n];
    }

    auto t1 = trace(wedge(W, W));
    auto t2 = trace(wedge(Wg, Wg));
    const auto* c1 = t1.component(0, MultiIndex::from_axes({0, 1, 2, 3}));
    const auto* c2 = t2.component(0, MultiIndex::from_axes({0, 1, 2, 3}));
    REQUIRE(c1);
    REQUIRE(c2);
    for (std::size_t n = 0; n < c1->size(); ++n) CHECK(std::abs((*c1)[n] - (*c2)[n]) < 1e-9);
}
