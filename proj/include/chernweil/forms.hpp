#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chernweil/multi_index.hpp"

namespace cw {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct contract_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform tensor-product grid on a coordinate box. Periodic axes identify
// hi with lo (spacing (hi-lo)/res); bounded axes include both endpoints
// (spacing (hi-lo)/(res-1)).
struct GridShape {
    std::vector<double> lo, hi;
    std::vector<int> res;
    std::vector<bool> periodic;

    int dim() const { return static_cast<int>(res.size()); }

    std::size_t num_nodes() const {
        std::size_t n = 1;
        for (int r : res) n *= static_cast<std::size_t>(r);
        return n;
    }

    double spacing(int axis) const {
        return periodic[axis] ? (hi[axis] - lo[axis]) / res[axis]
                              : (hi[axis] - lo[axis]) / (res[axis] - 1);
    }

    // flat index with axis 0 fastest
    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int a = dim() - 1; a >= 0; --a) f = f * res[a] + idx[a];
        return f;
    }
    std::vector<int> unflat(std::size_t f) const {
        std::vector<int> idx(dim());
        for (int a = 0; a < dim(); ++a) {
            idx[a] = static_cast<int>(f % res[a]);
            f /= res[a];
        }
        return idx;
    }
    std::vector<double> coords(const std::vector<int>& idx) const {
        std::vector<double> x(dim());
        for (int a = 0; a < dim(); ++a) x[a] = lo[a] + idx[a] * spacing(a);
        return x;
    }

    // Nodes at which a centered stencil of half-width `margin` fits along
    // every bounded axis.
    bool interior(const std::vector<int>& idx, int margin) const {
        for (int a = 0; a < dim(); ++a) {
            if (periodic[a]) continue;
            if (idx[a] < margin || idx[a] >= res[a] - margin) return false;
        }
        return true;
    }
};

// The discretization context shared by all forms of one computation: chart
// shapes plus the finite-difference order. Forms hold a pointer to their
// space; operations on forms from different spaces are configuration errors.
struct FormSpace {
    std::vector<GridShape> charts;
    int stencil_order = 4; // 2 or 4

    int dim() const { return charts.empty() ? 0 : charts[0].dim(); }
    int stencil_margin() const { return stencil_order / 2; }
    void validate() const;
};
using FormSpacePtr = std::shared_ptr<const FormSpace>;

// Z2 grading data for supertraces: complementary idempotent projectors.
struct GradingTag {
    Mat projector_plus;
    Mat projector_minus;

    static GradingTag split(int rank_plus, int rank_minus);
    void validate(double tol = 1e-12) const;
    int rank() const { return static_cast<int>(projector_plus.rows()); }
};

// Sparse-by-degree differential form: per chart, a map from multi-index to
// the per-node coefficient array. T is cplx for scalar forms and Mat for
// matrix-valued forms. Mixed degrees are allowed (Chern characters are
// inhomogeneous); helpers expose the set of degrees present.
template <typename T>
class Form {
public:
    Form() = default;
    explicit Form(FormSpacePtr space) : space_(std::move(space)) {
        data_.resize(space_->charts.size());
    }

    const FormSpacePtr& space() const { return space_; }
    int num_charts() const { return static_cast<int>(data_.size()); }

    using Component = std::vector<T>;
    using ChartData = std::map<std::uint32_t, Component>;

    const ChartData& chart(int c) const { return data_[c]; }
    ChartData& chart(int c) { return data_[c]; }

    const Component* component(int c, MultiIndex I) const {
        auto it = data_[c].find(I.mask());
        return it == data_[c].end() ? nullptr : &it->second;
    }
    Component& ensure(int c, MultiIndex I, const T& zero);

    std::vector<int> degrees() const;
    bool pure_degree(int* deg_out = nullptr) const;

    Form& operator+=(const Form& other);
    Form& operator*=(const cplx& s);

private:
    FormSpacePtr space_;
    std::vector<ChartData> data_;
};

using ScalarForm = Form<cplx>;
using MatrixForm = Form<Mat>;

// zero-element factories given a representative coefficient kind
inline cplx zero_like(const cplx&) { return cplx(0.0, 0.0); }
inline Mat zero_like(const Mat& m) { return Mat::Zero(m.rows(), m.cols()); }

// ---- operations -----------------------------------------------------------

// Graded product. Scalar forms commute up to (-1)^{pq}; matrix coefficients
// multiply. Contributions of the unordered mask pair {I,J} are accumulated
// together so that the scalar alternation a^a = 0 (odd degree) cancels
// exactly in floating point.
ScalarForm wedge(const ScalarForm& a, const ScalarForm& b);
MatrixForm wedge(const MatrixForm& a, const MatrixForm& b);
MatrixForm wedge(const ScalarForm& a, const MatrixForm& b);

// Centered finite-difference exterior derivative of the configured order.
// Coefficients at bounded-axis edge nodes (where the stencil does not fit)
// are zero; integration and norms only consult interior nodes.
ScalarForm exterior_derivative(const ScalarForm& f);
MatrixForm exterior_derivative(const MatrixForm& f);

// Finite exponential sum_{k<=dim/2} W^{^k}/k! of a matrix form with even
// degrees >= 2; exact because the series is nilpotent above top degree.
// A degree-0 part is rejected.
MatrixForm matrix_exp_form(const MatrixForm& W, int rank);

ScalarForm trace(const MatrixForm& A);
ScalarForm supertrace(const MatrixForm& A, const GradingTag& g);

// max |coefficient| over interior nodes of all charts and all components
double max_abs_interior(const ScalarForm& f);
double max_abs_interior(const MatrixForm& f);

ScalarForm scaled(const ScalarForm& f, cplx s);
MatrixForm scaled(const MatrixForm& f, cplx s);

} // namespace cw
