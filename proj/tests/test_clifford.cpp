#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "chernweil/clifford.hpp"

using namespace cw;

TEST_CASE("clifford relations hold exactly for n = 1..3") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        auto m = build_clifford_model(n);
        int n2 = 2 * n;
        Mat id = Mat::Identity(m.dim, m.dim);

        for (int a = 0; a < n2; ++a)
            for (int b = 0; b < n2; ++b) {
                Mat anti = m.c[a] * m.c[b] + m.c[b] * m.c[a];
                Mat expect = (a == b) ? (-2.0 * id).eval() : Mat::Zero(m.dim, m.dim).eval();
                CHECK((anti - expect).cwiseAbs().maxCoeff() == 0.0);
            }

        CHECK((m.tau * m.tau - id).cwiseAbs().maxCoeff() == 0.0);
        for (int a = 0; a < n2; ++a) {
            Mat anti = m.c[a] * m.tau + m.tau * m.c[a];
            CHECK(anti.cwiseAbs().maxCoeff() == 0.0);
        }

        CHECK(std::abs(m.proj_plus.trace() - cplx(m.half)) == 0.0);
        CHECK(std::abs(m.proj_minus.trace() - cplx(m.half)) == 0.0);

        // generators are real antisymmetric
        for (int a = 0; a < n2; ++a) {
            CHECK((m.c[a] + m.c[a].transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(m.c[a].imag().cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("lambda basis is unitary and blocks come out clean") {
    for (int n : {1, 2}) {
        auto m = build_clifford_model(n);
        Mat gram = m.U.adjoint() * m.U - Mat::Identity(m.dim, m.dim);
        CHECK(gram.cwiseAbs().maxCoeff() < 1e-14);

        // tau diagonalizes to diag(I, -I)
        Mat tb = m.block_full_to_lambda(m.tau);
        Mat expect = Mat::Zero(m.dim, m.dim);
        expect.topLeftCorner(m.half, m.half) = Mat::Identity(m.half, m.half);
        expect.bottomRightCorner(m.half, m.half) = -Mat::Identity(m.half, m.half);
        CHECK((tb - expect).cwiseAbs().maxCoeff() < 1e-14);

        // so generators commute with tau and are block diagonal
        for (std::size_t p = 0; p < m.so_pairs.size(); ++p) {
            Mat comm = m.so_full[p] * m.tau - m.tau * m.so_full[p];
            CHECK(comm.cwiseAbs().maxCoeff() == 0.0);
            Mat lb = m.block_full_to_lambda(m.so_full[p]);
            CHECK(lb.topRightCorner(m.half, m.half).cwiseAbs().maxCoeff() < 1e-14);
            CHECK(lb.bottomLeftCorner(m.half, m.half).cwiseAbs().maxCoeff() < 1e-14);
        }

        // generators are odd: Lambda-diagonal blocks of c(e_a) vanish
        for (int a = 0; a < 2 * n; ++a) {
            Mat cb = m.block_full_to_lambda(m.c[a]);
            CHECK(cb.topLeftCorner(m.half, m.half).cwiseAbs().maxCoeff() < 1e-14);
            CHECK(cb.bottomRightCorner(m.half, m.half).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("tau is independent of the basis ordering with equal orientation") {
    for (int n : {1, 2}) {
        auto m = build_clifford_model(n);
        int n2 = 2 * n;
        cplx in = 1.0;
        for (int k = 0; k < n; ++k) in *= cplx(0.0, 1.0);

        auto tau_from = [&](const std::vector<int>& order) {
            Mat p = Mat::Identity(m.dim, m.dim);
            for (int a : order) p = p * m.c[a];
            return (in * p).eval();
        };

        std::vector<int> rot(n2);
        for (int i = 0; i < n2; ++i) rot[i] = (i + 2) % n2; // even permutation
        CHECK((tau_from(rot) - m.tau).cwiseAbs().maxCoeff() == 0.0);

        std::vector<int> swapped(n2);
        for (int i = 0; i < n2; ++i) swapped[i] = i;
        std::swap(swapped[0], swapped[1]); // orientation-reversing
        CHECK((tau_from(swapped) + m.tau).cwiseAbs().maxCoeff() == 0.0);
    }

    // a rotated orthonormal frame with the same orientation gives the same tau
    auto m = build_clifford_model(2);
    double th = 0.7;
    std::vector<Mat> f(4);
    f[0] = std::cos(th) * m.c[0] + std::sin(th) * m.c[1];
    f[1] = -std::sin(th) * m.c[0] + std::cos(th) * m.c[1];
    f[2] = m.c[2];
    f[3] = m.c[3];
    Mat p = f[0] * f[1] * f[2] * f[3];
    Mat tau2 = cplx(0, 1) * cplx(0, 1) * p;
    CHECK((tau2 - m.tau).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("symbol at a point") {
    SUBCASE("zero section gives the zero matrix") {
        auto m = build_clifford_model(1);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
        CHECK(symbol_at_point(m, z, z).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("n=2, xi=e1, eta=0: v*v = I8") {
        auto m = build_clifford_model(2);
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(4), eta = Eigen::VectorXd::Zero(4);
        xi[0] = 1.0;
        Mat v = symbol_at_point(m, xi, eta);
        CHECK((v.adjoint() * v - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("n=2, xi=e1, eta=e2: singular symbol at h = 0") {
        auto m = build_clifford_model(2);
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(4), eta = Eigen::VectorXd::Zero(4);
        xi[0] = 1.0;
        eta[1] = 1.0;
        Mat v = symbol_at_point(m, xi, eta);
        Eigen::JacobiSVD<Mat> svd(v);
        CHECK(svd.singularValues()(m.half - 1) < 1e-12);
    }
    SUBCASE("n=1 determinant winds twice") {
        auto m = build_clifford_model(1);
        auto det_at = [&](double th) {
            Eigen::VectorXd xi(2), eta = Eigen::VectorXd::Zero(2);
            xi << std::cos(th), std::sin(th);
            return symbol_at_point(m, xi, eta).determinant();
        };
        cplx d0 = det_at(0.0);
        CHECK(std::abs(std::abs(d0) - 1.0) < 1e-13);
        for (double th : {0.3, 1.1, 2.5}) {
            cplx ratio = det_at(th) / d0;
            CHECK(std::abs(ratio - std::exp(cplx(0.0, 2.0 * th))) < 1e-12);
        }
    }
}

TEST_CASE("h value") {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd xi(2), eta(2);
    xi << 3.0, 0.0;
    eta << 0.0, 0.0;
    CHECK(h_value(xi, eta, id) == cplx(9.0, 0.0));
    eta = xi;
    CHECK(h_value(xi, eta, id) == cplx(0.0, 18.0));
    xi << 2.0, 0.0;
    eta << 0.0, 2.0;
    CHECK(h_value(xi, eta, id) == cplx(0.0, 0.0));
}

TEST_CASE("zero set classification (Lemma 3 cases)") {
    auto m1 = build_clifford_model(1);
    auto m2 = build_clifford_model(2);

    SUBCASE("n=1 oriented frame is the exceptional branch") {
        Eigen::VectorXd xi(2), eta(2);
        xi << 1.0, 0.0;
        eta << 0.0, 1.0;
        CHECK(classify_point(m1, xi, eta) == PointClass::zero_plus_frame);
        eta << 0.0, -1.0;
        CHECK(classify_point(m1, xi, eta) == PointClass::zero_noninvertible);
    }
    SUBCASE("n=2 frame pairs are genuine zeros") {
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(4), eta = Eigen::VectorXd::Zero(4);
        xi[0] = 1.0;
        eta[1] = 1.0;
        CHECK(classify_point(m2, xi, eta) == PointClass::zero_noninvertible);
    }
    SUBCASE("vanishing pair") {
        Eigen::VectorXd z2 = Eigen::VectorXd::Zero(2), z4 = Eigen::VectorXd::Zero(4);
        CHECK(classify_point(m1, z2, z2) == PointClass::zero_noninvertible);
        CHECK(classify_point(m2, z4, z4) == PointClass::zero_noninvertible);
    }
}

TEST_CASE("exhaustive Lemma 3 sweep: no violations over random and structured pairs") {
    std::mt19937 rng(20240801);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int n : {1, 2}) {
        auto m = build_clifford_model(n);
        int d = 2 * n;
        int regular = 0, zero = 0, plus = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            Eigen::VectorXd xi(d), eta(d);
            for (int i = 0; i < d; ++i) {
                xi[i] = gauss(rng);
                eta[i] = gauss(rng);
            }
            auto c = classify_point(m, xi, eta); // throws on violation
            if (c == PointClass::regular) ++regular;
            else if (c == PointClass::zero_noninvertible) ++zero;
            else ++plus;
        }
        CHECK(regular == 10000); // random pairs have h != 0 almost surely

        // structured families
        Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
        CHECK(classify_point(m, z, z) == PointClass::zero_noninvertible);
        for (int a = 0; a < d; ++a) {
            Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
            xi[a] = 2.0;
            CHECK(classify_point(m, xi, z) == PointClass::regular);
            CHECK(classify_point(m, xi, xi) == PointClass::regular); // parallel pair, h = 2i|xi|^2
            CHECK(classify_point(m, xi, (0.5 * xi).eval()) == PointClass::regular);
        }
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (a == b) continue;
                Eigen::VectorXd xi = Eigen::VectorXd::Zero(d), eta = Eigen::VectorXd::Zero(d);
                xi[a] = 1.5;
                eta[b] = 1.5;
                auto c = classify_point(m, xi, eta);
                if (n == 1) {
                    bool oriented = (xi[0] * eta[1] - xi[1] * eta[0]) > 0.0;
                    CHECK(c == (oriented ? PointClass::zero_plus_frame
                                         : PointClass::zero_noninvertible));
                } else {
                    CHECK(c == PointClass::zero_noninvertible);
                }
            }
    }
}

TEST_CASE("V^2 is positive off the zero set") {
    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n : {1, 2}) {
        auto m = build_clifford_model(n);
        int d = 2 * n;
        int tested = 0;
        while (tested < 1000) {
            Eigen::VectorXd xi(d), eta(d);
            for (int i = 0; i < d; ++i) {
                xi[i] = gauss(rng);
                eta[i] = gauss(rng);
            }
            cplx h = h_value(xi, eta, Eigen::MatrixXd::Identity(d, d));
            if (std::abs(h) < 1e-6) continue;
            ++tested;
            Mat v = symbol_at_point(m, xi, eta);
            // V = v + v^*, V^2 = diag(v^* v, v v^*); positivity of both blocks
            Mat a = v.adjoint() * v, b = v * v.adjoint();
            Eigen::SelfAdjointEigenSolver<Mat> ea(a), eb(b);
            CHECK(ea.eigenvalues().minCoeff() > 0.0);
            CHECK(eb.eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("model bounds") {
    CHECK_THROWS_AS(build_clifford_model(0), config_error);
    CHECK_THROWS_AS(build_clifford_model(5), config_error);
}
