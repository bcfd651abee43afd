#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "chernweil/forms.hpp"

namespace cw {

// Chart-level analytic data on top of the grid shape. The partition-of-unity
// weight is an analytic callback; node values are cached by the atlas.
struct ChartGeometry {
    std::function<double(const std::vector<double>&)> pou;
    std::function<Eigen::MatrixXd(const std::vector<double>&)> metric; // g_ij at a point
    double orientation = 1.0;
};

// Transition between two charts of an atlas: defined where `in_domain` holds,
// with forward map and Jacobian d(to)/d(from).
struct ChartTransition {
    int from = 0;
    int to = 0;
    std::function<bool(const std::vector<double>&)> in_domain;
    std::function<std::vector<double>(const std::vector<double>&)> map;
    std::function<Eigen::MatrixXd(const std::vector<double>&)> jacobian;
};

// Per-chart node mask with values in [0,1], used to localize integrals.
struct RegionMask {
    std::vector<std::vector<double>> values;
};

// Round (2n-1)-sphere in a single chart's coordinates, with a parametrization
// quadrature carrying the induced boundary orientation (outward normal first).
struct BoundarySphere {
    int chart = 0;
    std::vector<double> center;
    double radius = 1.0;
    int sphere_dim = 1;

    struct QNode {
        std::vector<double> x;      // chart coordinates of the sphere point
        Eigen::MatrixXd tangents;   // dim x sphere_dim, columns = dp/du_j
        double weight;              // parameter-space quadrature weight
    };
    std::vector<QNode> nodes;
};

class Atlas {
public:
    FormSpacePtr space;
    std::vector<ChartGeometry> charts;
    std::vector<ChartTransition> transitions;
    int manifold_dim = 0;

    // node caches
    std::vector<std::vector<double>> pou_values;   // per chart per node
    std::vector<std::vector<double>> quad_weights; // trapezoid product weights
    std::vector<std::vector<std::size_t>> active;  // nodes with pou > 0

    void finalize(); // builds the caches; call after charts are set

    int num_charts() const { return static_cast<int>(charts.size()); }
    const GridShape& grid(int c) const { return space->charts[c]; }

    std::vector<double> node_coords(int c, std::size_t n) const {
        return grid(c).coords(grid(c).unflat(n));
    }

    // partition-of-unity total at a physical point given by chart coordinates
    double pou_sum_at(int c, const std::vector<double>& x) const;

    cplx integrate_top_form(const ScalarForm& w) const;
    cplx integrate_region(const ScalarForm& w, const RegionMask& mask) const;

    // separable 4-point Lagrange interpolation of a component array
    cplx interpolate(int c, const std::vector<cplx>& comp, const std::vector<double>& x) const;
};

cplx integrate_boundary_sphere(const ScalarForm& w, const BoundarySphere& s);

// analytic variant: comp_fn(x, I) returns the coefficient of dx^I at chart
// coordinates x, for every multi-index I of degree equal to the sphere
// dimension over `ambient_dim` axes
cplx integrate_boundary_sphere(
    const std::function<cplx(const std::vector<double>&, MultiIndex)>& comp_fn,
    const BoundarySphere& s, int ambient_dim);

// sphere parametrization factories
BoundarySphere make_circle(int chart, const std::vector<double>& center, double radius,
                           int num_points);
BoundarySphere make_sphere3(int chart, const std::vector<double>& center, double radius,
                            int res_theta, int res_phi);

// Gauss-Legendre rule on [0,1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// ---- atlas factories --------------------------------------------------------

struct SpherePouParams {
    double box = 2.2;     // chart half-width
    double r_full = 1.0;  // bump is 1 inside this chart radius
    double r_zero = 1.5;  // bump is 0 outside this chart radius
    int order = 9;        // smoothstep order of the transition
};

// flat torus (S^1)^k, one periodic chart [0,2pi)^k
Atlas make_torus_atlas(int k, int res, int stencil_order = 4);

// round 2-sphere, two stereographic charts glued along the equatorial band;
// chart 1 carries the conjugated coordinate so that transitions preserve
// orientation
Atlas make_sphere_atlas(int res, int stencil_order = 4, SpherePouParams pou = {});

// product of two atlases (used for S2 x S2): product charts, weights and
// partition of unity
Atlas make_product_atlas(const Atlas& a, const Atlas& b);

// total space of the tangent disk bundle over S2: two charts
// (stereographic base) x (fiber box), fiber coordinates in the orthonormal
// frame so transitions rotate fibers. Used for fiber-integration diagnostics.
Atlas make_disk_bundle_atlas(int base_res, int fiber_res, double fiber_half_width,
                             int stencil_order = 4, SpherePouParams pou = {});

// conformal factor of the round metric in stereographic coordinates
inline double stereo_lambda(double x, double y) { return 2.0 / (1.0 + x * x + y * y); }

// rotation angle of the orthonormal-frame transition of the sphere atlas
// (chart 0 -> chart 1) at chart-0 coordinates
void stereo_frame_rotation(double x, double y, double& c, double& s);

} // namespace cw
