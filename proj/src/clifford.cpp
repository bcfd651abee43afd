#include "chernweil/clifford.hpp"

#include <bit>
#include <cmath>

namespace cw {

namespace {

// sign for inserting/removing e^a at its sorted slot of subset mask S
int slot_sign(std::uint32_t S, int a) {
    int below = std::popcount(S & ((1u << a) - 1u));
    return (below & 1) ? -1 : 1;
}

Mat generator_matrix(int n2, int a) {
    int dim = 1 << n2;
    Mat c = Mat::Zero(dim, dim);
    for (std::uint32_t S = 0; S < static_cast<std::uint32_t>(dim); ++S) {
        if (S & (1u << a)) {
            // contraction term: -i_{e_a} e_S
            std::uint32_t T = S & ~(1u << a);
            c(T, S) += -double(slot_sign(S, a));
        } else {
            // wedge term: e^a ^ e_S
            std::uint32_t T = S | (1u << a);
            c(T, S) += double(slot_sign(S, a));
        }
    }
    return c;
}

// derivation extension of the so generator G_ab (G e^b = e^a, G e^a = -e^b)
Mat so_derivation(int n2, int a, int b) {
    int dim = 1 << n2;
    Mat L = Mat::Zero(dim, dim);
    auto replace = [&](std::uint32_t S, int from, int to, double coef) {
        if (!(S & (1u << from))) return;
        if (S & (1u << to)) return; // e^to already present: wedge kills it
        std::uint32_t T = (S & ~(1u << from)) | (1u << to);
        int lo = std::min(from, to), hi = std::max(from, to);
        std::uint32_t between = S & ~(1u << from);
        between &= ((1u << hi) - 1u) & ~((1u << (lo + 1)) - 1u);
        int sgn = (std::popcount(between) & 1) ? -1 : 1;
        L(T, S) += coef * sgn;
    };
    for (std::uint32_t S = 0; S < static_cast<std::uint32_t>(dim); ++S) {
        replace(S, b, a, +1.0); // G e^b = +e^a
        replace(S, a, b, -1.0); // G e^a = -e^b
    }
    return L;
}

} // namespace

int CliffordModel::pair_index(int a, int b) const {
    for (std::size_t i = 0; i < so_pairs.size(); ++i)
        if (so_pairs[i].first == a && so_pairs[i].second == b) return static_cast<int>(i);
    throw std::invalid_argument("no such so pair");
}

Mat CliffordModel::block_full_to_lambda(const Mat& M) const { return U.adjoint() * M * U; }

CliffordModel build_clifford_model(int n) {
    if (n < 1 || n > 4) throw config_error("clifford model supports n in 1..4");
    CliffordModel m;
    m.n = n;
    int n2 = 2 * n;
    m.dim = 1 << n2;
    m.half = m.dim / 2;

    for (int a = 0; a < n2; ++a) m.c.push_back(generator_matrix(n2, a));

    Mat prod = Mat::Identity(m.dim, m.dim);
    for (int a = 0; a < n2; ++a) prod = prod * m.c[a];
    cplx in = 1.0;
    for (int k = 0; k < n; ++k) in *= cplx(0.0, 1.0);
    m.tau = in * prod;

    Mat id = Mat::Identity(m.dim, m.dim);
    m.proj_plus = 0.5 * (id + m.tau);
    m.proj_minus = 0.5 * (id - m.tau);

    // tau pairs e_S with e_{S^c}; pick the representative with the smaller
    // mask, giving eigenvectors (e_S +- z e_{S^c}) with z = tau(S^c, S)
    std::uint32_t all = static_cast<std::uint32_t>(m.dim - 1);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t S = 0; S < static_cast<std::uint32_t>(m.dim); ++S)
        if (S < (all ^ S)) reps.push_back(S);

    Mat Utilde = Mat::Zero(m.dim, m.dim); // unnormalized, Utilde^* Utilde = 2I
    for (std::size_t k = 0; k < reps.size(); ++k) {
        std::uint32_t S = reps[k], Sc = all ^ S;
        cplx z = m.tau(Sc, S);
        Utilde(S, k) = 1.0;
        Utilde(Sc, k) = z;
        Utilde(S, m.half + k) = 1.0;
        Utilde(Sc, m.half + k) = -z;
    }
    m.U = Utilde / std::sqrt(2.0);

    auto lambda_block = [&](const Mat& M) { return (0.5 * (Utilde.adjoint() * M * Utilde)).eval(); };

    for (int a = 0; a < n2; ++a) {
        Mat tc = lambda_block(m.tau * m.c[a]);
        Mat cc = lambda_block(m.c[a]);
        m.tau_c_mp.push_back(tc.bottomLeftCorner(m.half, m.half));
        m.c_mp.push_back(cc.bottomLeftCorner(m.half, m.half));
    }

    for (int a = 0; a < n2; ++a)
        for (int b = a + 1; b < n2; ++b) {
            m.so_pairs.push_back({a, b});
            Mat L = so_derivation(n2, a, b);
            m.so_full.push_back(L);
            Mat Lb = lambda_block(L);
            m.so_pp.push_back(Lb.topLeftCorner(m.half, m.half));
            m.so_mm.push_back(Lb.bottomRightCorner(m.half, m.half));
        }
    return m;
}

cplx h_value(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
             const Eigen::MatrixXd& metric) {
    double xx = xi.dot(metric * xi);
    double ee = eta.dot(metric * eta);
    double xe = xi.dot(metric * eta);
    return cplx(xx - ee, 2.0 * xe);
}

Mat symbol_at_point(const CliffordModel& model, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& eta) {
    if (xi.size() != 2 * model.n || eta.size() != 2 * model.n)
        throw contract_error("symbol_at_point: vector dimension does not match the model");
    Mat v = Mat::Zero(model.half, model.half);
    for (int a = 0; a < 2 * model.n; ++a) {
        if (xi[a] != 0.0) v += xi[a] * model.tau_c_mp[a];
        if (eta[a] != 0.0) v += cplx(0.0, eta[a]) * model.c_mp[a];
    }
    return v;
}

PointClass classify_point(const CliffordModel& model, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& eta) {
    const double tol = 1e-12;
    double scale2 = xi.squaredNorm() + eta.squaredNorm();
    cplx h = h_value(xi, eta, Eigen::MatrixXd::Identity(xi.size(), xi.size()));
    bool h_zero = std::abs(h) <= tol * std::max(1.0, scale2);

    Mat v = symbol_at_point(model, xi, eta);
    Eigen::JacobiSVD<Mat> svd(v);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(model.half - 1);
    bool invertible = smax > 0.0 && smin > 1e-8 * smax;

    if (!invertible) {
        if (!h_zero)
            throw lemma_violation("Lemma 3 violation: h != 0 with singular symbol");
        return PointClass::zero_noninvertible;
    }
    if (!h_zero) return PointClass::regular;

    // h = 0 with invertible symbol: only the n = 1 oriented-frame case
    if (model.n != 1)
        throw lemma_violation("Lemma 3 violation: n >= 2 with h = 0 and invertible symbol");
    double s = std::sqrt(scale2);
    bool frame = std::abs(xi.norm() - eta.norm()) <= tol * std::max(1.0, s) &&
                 std::abs(xi.dot(eta)) <= tol * std::max(1.0, scale2) && xi.norm() > tol &&
                 (xi[0] * eta[1] - xi[1] * eta[0]) > tol;
    if (!frame)
        throw lemma_violation("Lemma 3 violation: invertible symbol at h = 0 without an oriented frame");
    return PointClass::zero_plus_frame;
}

const char* point_class_name(PointClass c) {
    switch (c) {
        case PointClass::regular: return "regular";
        case PointClass::zero_noninvertible: return "zero_noninvertible";
        default: return "zero_plus_frame";
    }
}

Mat exterior_rep(const Eigen::MatrixXd& A) {
    int n2 = static_cast<int>(A.rows());
    int dim = 1 << n2;
    Mat L = Mat::Zero(dim, dim);
    for (std::uint32_t S = 0; S < static_cast<std::uint32_t>(dim); ++S)
        for (std::uint32_t T = 0; T < static_cast<std::uint32_t>(dim); ++T) {
            if (std::popcount(S) != std::popcount(T)) continue;
            auto rows = MultiIndex(T).axes();
            auto cols = MultiIndex(S).axes();
            int k = static_cast<int>(rows.size());
            if (k == 0) {
                L(T, S) = 1.0;
                continue;
            }
            Eigen::MatrixXd sub(k, k);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) sub(r, c) = A(rows[r], cols[c]);
            L(T, S) = sub.determinant();
        }
    return L;
}

} // namespace cw
