#pragma once

#include <array>
#include <functional>
#include <optional>

#include "chernweil/atlas.hpp"
#include "chernweil/clifford.hpp"
#include "chernweil/forms.hpp"
#include "chernweil/profile_fn.hpp"

namespace cw {

// value and coordinate partials of a matrix function at a point
struct MatrixJet {
    Mat value;
    std::vector<Mat> d;
};

// canonical ordering of axis pairs i<j (mask order), shared by all 2-form
// component arrays
int pair_count(int dim);
int pair_slot(int dim, int i, int j);
const std::vector<std::pair<int, int>>& pair_axes(int dim);

// Z2-graded connection data at one point: per-axis 1-form blocks and the
// analytic exterior derivative of each block as per-pair 2-form components.
// Keeping d(omega) analytic makes curvature identities (conjugation under
// the deformed connection where rho = 1) hold to machine precision instead
// of stencil accuracy.
struct GradedConnSample {
    std::vector<Mat> omega_p, omega_m;
    std::vector<Mat> domega_p, domega_m;
    void resize(int dim, int rank_p, int rank_m);
};

struct GradedConnectionField {
    int dim = 0, rank_p = 0, rank_m = 0;
    std::function<void(int chart, const std::vector<double>& x, GradedConnSample&)> sample;
};

// bundle map v: E+ -> E- with analytic partials
struct BundleMapField {
    int dim = 0, rank_p = 0, rank_m = 0;
    std::function<void(int chart, const std::vector<double>& x, MatrixJet&)> eval;
};

// scalar field with gradient (truncation profiles, distances)
struct ScalarGradField {
    std::function<double(int chart, const std::vector<double>& x, std::vector<double>* grad)>
        eval;
};

// truncation data: rho = 0 within distance a of the zero set, 1 beyond b
struct TruncationProfile {
    RampProfile ramp;
    ScalarGradField distance;
    ScalarGradField rho() const;
};

// The deformed connection: adds rho v^{-1}(d v + omega_- v - v omega_+) to
// the E+ block. Where rho = 1 the E+ curvature becomes v^{-1} R_- v exactly;
// on the zero set (rho = 0) the block connection is returned unchanged.
// v must be invertible wherever rho > 0 (condition threshold).
GradedConnectionField deformed_connection(const GradedConnectionField& base,
                                          const BundleMapField& v, const ScalarGradField& rho,
                                          double cond_threshold = 1e8);

// graded Chern character integrand at a point: per-mask coefficients of
// tr exp(c R_+) - tr exp(c R_-), c = i/(2 pi); dims <= 4
using MaskCoeffs = std::array<cplx, 16>;
void graded_ch_coeffs(const GradedConnSample& s, int dim, MaskCoeffs& out);
MaskCoeffs graded_ch_at(const GradedConnectionField& conn, int chart,
                        const std::vector<double>& x);

ScalarForm graded_ch_form(const Atlas& atlas, const GradedConnectionField& conn);

// one-pass streaming evaluation over the atlas quadrature (never materializes
// matrix forms; used for the 4-dimensional scenarios)
struct GradedChScan {
    cplx global{0.0};
    std::vector<cplx> regions;
    double sup_where_rho_one = 0.0;
    std::size_t rho_one_nodes = 0;
};
GradedChScan scan_graded_ch(const Atlas& atlas, const GradedConnectionField& conn,
                            const std::vector<const RegionMask*>& regions = {},
                            const ScalarGradField* rho = nullptr);

// Transgression of the straight-line path between two connections on the
// same graded bundle. Returns the integral over the region of the exact
// correction form; equals integral(region, ch(to) - ch(from)) up to
// discretization. The t-integral uses Gauss-Legendre; an 8- vs 16-node
// disagreement above t_quad_tol is a configuration error.
cplx transgression_value(const Atlas& atlas, const GradedConnectionField& from,
                         const GradedConnectionField& to, const RegionMask& region,
                         double t_quad_tol = 1e-8);

// Boundary degree integral around an isolated zero:
//   deg = (-1)^{n-1} * ( -(i/2pi)^n (n-1)!/(2n-1)! oint tr((v^{-1} dv)^{2n-1}) )
// rounded to the nearest integer; a pre-rounding residual above residual_tol
// reports a non-integral degree.
struct DegreeResult {
    long degree = 0;
    double residual = 0.0;
    cplx normalized{0.0};
};
DegreeResult degree_at_zero(
    const std::function<void(const std::vector<double>&, MatrixJet&)>& v_jet,
    const BoundarySphere& sphere, int n, double residual_tol = 0.05);

// ---- array-backed operations -------------------------------------------------

// R = d omega + omega ^ omega, with the finite-difference exterior derivative
MatrixForm curvature_form(const MatrixForm& omega);

// tr or tr_s of exp((i/2pi) R)
ScalarForm chern_character_form(const MatrixForm& curvature, int rank,
                                const GradingTag* grading = nullptr);

// Pfaffian of R/(2 pi) for a metric connection on an oriented real bundle of
// rank 2 or 4; curvature matrices must be antisymmetric within skew_tol
ScalarForm euler_form(const MatrixForm& curvature, double skew_tol = 1e-8);

// ---- bundle descriptions ------------------------------------------------------

struct BundleSpec {
    int rank = 1;
    bool complex_field = true;
    // transition matrix g_{to from} at from-chart coordinates
    std::function<Mat(int from, int to, const std::vector<double>& x)> transition;
    std::function<Mat(int chart, const std::vector<double>& x)> fiber_metric;

    void validate_cocycle(const Atlas& atlas, int samples, double tol) const;
};

// v_to(T x) g_+ = g_- v_from(x) within tol at sampled overlap points
void validate_map_equivariance(const Atlas& atlas, const BundleSpec& plus,
                               const BundleSpec& minus, const BundleMapField& v, int samples,
                               double tol);

// ---- clifford-model bridges ---------------------------------------------------

// orthonormal-frame vector pair (xi, eta) with analytic partials, per chart
struct FrameVectorField {
    std::function<void(int chart, const std::vector<double>& x, Eigen::VectorXd& xi,
                       Eigen::VectorXd& eta, Eigen::MatrixXd& dxi, Eigen::MatrixXd& deta)>
        eval;
};

// so(2n)-valued metric connection in an orthonormal frame: coefficients per
// (frame pair, axis) plus analytic 2-form d-coefficients per (frame pair,
// axis pair)
struct SoConnectionField {
    std::function<void(int chart, const std::vector<double>& x, Eigen::MatrixXd& omega,
                       Eigen::MatrixXd& domega)>
        eval;
};

// induced connection on the signature-graded exterior algebra bundle
GradedConnectionField lambda_connection(std::shared_ptr<const CliffordModel> model, int dim,
                                        const SoConnectionField& so);

// v_K = tau c(xi) + i c(eta) as a bundle map Lambda+ -> Lambda-
BundleMapField symbol_field(std::shared_ptr<const CliffordModel> model, int dim,
                            const FrameVectorField& K);

} // namespace cw
