#pragma once

#include <Eigen/Dense>
#include <vector>

#include "chernweil/forms.hpp"

namespace cw {

struct lemma_violation : std::logic_error {
    using std::logic_error::logic_error;
};

// Signature-graded exterior-algebra Clifford module in dimension 2n.
//
// Basis of Lambda(R^{2n})* indexed by subsets of {0,..,2n-1} in increasing
// mask order; generators act by c(e_a) = e^a wedge - i_{e_a} so that
// c(e_a)c(e_b) + c(e_b)c(e_a) = -2 delta_ab and c(e_a)^T = -c(e_a), all with
// integer entries. tau = i^n c(e_0)...c(e_{2n-1}) squares to the identity and
// anticommutes with every generator; Lambda_pm are its +-1 eigenspaces.
//
// All constant matrices below are exact: the generators are integer, tau is
// a Gaussian-integer matrix, and block forms are computed with unnormalized
// eigenvectors so only exact halvings occur.
struct CliffordModel {
    int n = 1;
    int dim = 4;   // 2^{2n}
    int half = 2;  // 2^{2n-1} = rank of each of Lambda_pm

    std::vector<Mat> c;  // generators, size 2n
    Mat tau;
    Mat proj_plus, proj_minus;
    Mat U; // unitary, columns = [Lambda+ basis | Lambda- basis]

    // constants in the Lambda basis
    std::vector<Mat> tau_c_mp; // (tau c(e_a)) block Lambda+ -> Lambda-
    std::vector<Mat> c_mp;     // c(e_a) block Lambda+ -> Lambda-

    // derivation representations of the so(2n) generators (a<b pairs in
    // lexicographic order), full and Lambda-block forms
    std::vector<std::pair<int, int>> so_pairs;
    std::vector<Mat> so_full;
    std::vector<Mat> so_pp, so_mm;

    int pair_index(int a, int b) const; // a<b

    Mat block_full_to_lambda(const Mat& M) const; // U^* M U, exact for integer M
};

CliffordModel build_clifford_model(int n);

// h(K,K) = |xi|^2 - |eta|^2 + 2i <xi,eta> in the supplied metric
cplx h_value(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta, const Eigen::MatrixXd& metric);

// the Lambda- x Lambda+ block of tau c(xi) + i c(eta), components orthonormal
Mat symbol_at_point(const CliffordModel& model, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& eta);

enum class PointClass { regular, zero_noninvertible, zero_plus_frame };

// Zero-set classification: regular iff h != 0 and the symbol is invertible;
// noninvertible symbol means a genuine zero of v_K; h = 0 with invertible
// symbol is permitted only for n = 1 oriented frames. Inconsistent cases
// throw lemma_violation.
PointClass classify_point(const CliffordModel& model, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& eta);

const char* point_class_name(PointClass c);

// multiplicative extension of a linear map to the full exterior algebra
// (subset-minor matrix); used for frame-rotation bundle transitions
Mat exterior_rep(const Eigen::MatrixXd& A);

} // namespace cw
