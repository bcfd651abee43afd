#include "chernweil/forms.hpp"

#include <algorithm>
#include <cmath>

namespace cw {

void FormSpace::validate() const {
    if (stencil_order != 2 && stencil_order != 4)
        throw config_error("stencil order must be 2 or 4");
    for (const auto& g : charts) {
        if (g.dim() == 0) throw config_error("empty chart");
        for (int a = 0; a < g.dim(); ++a) {
            int need = stencil_order + 1;
            if (g.res[a] < need)
                throw config_error("grid too coarse for stencil: axis resolution " +
                                   std::to_string(g.res[a]));
            if (!(g.hi[a] > g.lo[a])) throw config_error("degenerate axis box");
        }
    }
}

GradingTag GradingTag::split(int rank_plus, int rank_minus) {
    int r = rank_plus + rank_minus;
    GradingTag g;
    g.projector_plus = Mat::Zero(r, r);
    g.projector_minus = Mat::Zero(r, r);
    g.projector_plus.topLeftCorner(rank_plus, rank_plus) = Mat::Identity(rank_plus, rank_plus);
    g.projector_minus.bottomRightCorner(rank_minus, rank_minus) =
        Mat::Identity(rank_minus, rank_minus);
    return g;
}

void GradingTag::validate(double tol) const {
    int r = rank();
    if (projector_minus.rows() != r || projector_plus.cols() != r || projector_minus.cols() != r)
        throw contract_error("grading projector dimension mismatch");
    Mat sum = projector_plus + projector_minus - Mat::Identity(r, r);
    Mat idp = projector_plus * projector_plus - projector_plus;
    Mat idm = projector_minus * projector_minus - projector_minus;
    Mat prod = projector_plus * projector_minus;
    if (sum.cwiseAbs().maxCoeff() > tol || idp.cwiseAbs().maxCoeff() > tol ||
        idm.cwiseAbs().maxCoeff() > tol || prod.cwiseAbs().maxCoeff() > tol)
        throw contract_error("grading projectors are not complementary idempotents");
}

template <typename T>
typename Form<T>::Component& Form<T>::ensure(int c, MultiIndex I, const T& zero) {
    auto it = data_[c].find(I.mask());
    if (it == data_[c].end()) {
        Component comp(space_->charts[c].num_nodes(), zero);
        it = data_[c].emplace(I.mask(), std::move(comp)).first;
    }
    return it->second;
}

template <typename T>
std::vector<int> Form<T>::degrees() const {
    std::vector<int> out;
    for (const auto& cd : data_)
        for (const auto& [mask, comp] : cd) {
            int d = MultiIndex(mask).degree();
            if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

template <typename T>
bool Form<T>::pure_degree(int* deg_out) const {
    auto ds = degrees();
    if (ds.size() > 1) return false;
    if (deg_out) *deg_out = ds.empty() ? 0 : ds[0];
    return true;
}

template <typename T>
Form<T>& Form<T>::operator+=(const Form<T>& other) {
    if (space_ != other.space_) throw config_error("forms live on different spaces");
    for (int c = 0; c < num_charts(); ++c)
        for (const auto& [mask, comp] : other.data_[c]) {
            auto it = data_[c].find(mask);
            if (it == data_[c].end()) {
                data_[c][mask] = comp;
            } else {
                for (std::size_t i = 0; i < comp.size(); ++i) it->second[i] += comp[i];
            }
        }
    return *this;
}

template <typename T>
Form<T>& Form<T>::operator*=(const cplx& s) {
    for (auto& cd : data_)
        for (auto& [mask, comp] : cd)
            for (auto& v : comp) v = v * s;
    return *this;
}

template class Form<cplx>;
template class Form<Mat>;

// ---- wedge ------------------------------------------------------------------

namespace {

inline cplx product_zero(const cplx&, const cplx&) { return cplx(0.0); }
inline Mat product_zero(const Mat& x, const Mat& y) { return Mat::Zero(x.rows(), y.cols()); }
inline Mat product_zero(const cplx&, const Mat& y) { return Mat::Zero(y.rows(), y.cols()); }

template <typename A, typename B, typename R>
Form<R> wedge_impl(const Form<A>& a, const Form<B>& b) {
    if (a.space() != b.space()) throw config_error("wedge of forms on different spaces");
    bool same_object = false;
    if constexpr (std::is_same_v<A, B>)
        same_object = static_cast<const void*>(&a) == static_cast<const void*>(&b);

    Form<R> out(a.space());
    for (int c = 0; c < a.num_charts(); ++c) {
        for (const auto& [ma, ca] : a.chart(c)) {
            for (const auto& [mb, cb] : b.chart(c)) {
                // For a^a, visit each unordered mask pair once and accumulate
                // (I,J) and (J,I) together; the odd-degree scalar alternation
                // then cancels exactly in floating point.
                if (same_object && mb < ma) continue;
                MultiIndex I(ma), J(mb);
                int s_ij = wedge_sign(I, J);
                if (s_ij == 0) continue;
                R zero = product_zero(ca[0], cb[0]);
                auto& acc = out.ensure(c, I.unite(J), zero);

                if (same_object && ma != mb) {
                    int s_ji = wedge_sign(J, I);
                    for (std::size_t n = 0; n < ca.size(); ++n) {
                        R term = double(s_ij) * (ca[n] * cb[n]);
                        if constexpr (std::is_same_v<A, B>)
                            term += double(s_ji) * (cb[n] * ca[n]);
                        acc[n] += term;
                    }
                } else {
                    for (std::size_t n = 0; n < ca.size(); ++n)
                        acc[n] += double(s_ij) * (ca[n] * cb[n]);
                }
            }
        }
    }
    return out;
}

} // namespace

ScalarForm wedge(const ScalarForm& a, const ScalarForm& b) {
    return wedge_impl<cplx, cplx, cplx>(a, b);
}

MatrixForm wedge(const MatrixForm& a, const MatrixForm& b) {
    // validate matrix chain compatibility lazily (Eigen asserts on mismatch);
    // explicit check for a clearer error
    for (int c = 0; c < a.num_charts(); ++c) {
        if (a.chart(c).empty() || b.chart(c).empty()) continue;
        int acols = static_cast<int>(a.chart(c).begin()->second[0].cols());
        int brows = static_cast<int>(b.chart(c).begin()->second[0].rows());
        if (acols != brows) throw config_error("matrix dimension mismatch in wedge");
    }
    return wedge_impl<Mat, Mat, Mat>(a, b);
}

MatrixForm wedge(const ScalarForm& a, const MatrixForm& b) {
    return wedge_impl<cplx, Mat, Mat>(a, b);
}

// ---- exterior derivative ----------------------------------------------------

namespace {

// centered first-derivative stencil applied along one axis
template <typename T>
std::vector<T> axis_derivative(const GridShape& g, const std::vector<T>& f, int axis, int order,
                               const T& zero) {
    std::vector<T> out(f.size(), zero);
    double h = g.spacing(axis);
    int n = g.res[axis];
    bool per = g.periodic[axis];
    int m = order / 2;

    // iterate lines along `axis`
    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= g.res[a];
    std::size_t outer = g.num_nodes() / g.res[axis];

    auto line_base = [&](std::size_t line) {
        // decompose line index into (low part below axis, high part above)
        std::size_t lowsz = stride;
        std::size_t lo = line % lowsz;
        std::size_t hi = line / lowsz;
        return lo + hi * (stride * g.res[axis]);
    };

    for (std::size_t line = 0; line < outer; ++line) {
        std::size_t base = line_base(line);
        auto at = [&](int i) -> const T& {
            if (per) i = ((i % n) + n) % n;
            return f[base + static_cast<std::size_t>(i) * stride];
        };
        int lo_i = per ? 0 : m;
        int hi_i = per ? n : n - m;
        for (int i = lo_i; i < hi_i; ++i) {
            T d = zero;
            if (order == 2) {
                d = (at(i + 1) - at(i - 1)) * (1.0 / (2.0 * h));
            } else {
                d = (at(i - 2) - at(i + 2)) * (1.0 / (12.0 * h)) +
                    (at(i + 1) - at(i - 1)) * (8.0 / (12.0 * h));
            }
            out[base + static_cast<std::size_t>(i) * stride] = d;
        }
    }
    return out;
}

template <typename T>
Form<T> d_impl(const Form<T>& f) {
    const auto& sp = f.space();
    sp->validate();
    Form<T> out(sp);
    for (int c = 0; c < f.num_charts(); ++c) {
        const GridShape& g = sp->charts[c];
        for (const auto& [mask, comp] : f.chart(c)) {
            MultiIndex I(mask);
            if (I.degree() >= g.dim()) continue; // top degree: d is the empty form
            T zero = zero_like(comp[0]);
            for (int axis = 0; axis < g.dim(); ++axis) {
                if (I.contains(axis)) continue;
                int s = axis_prepend_sign(axis, I);
                auto deriv = axis_derivative(g, comp, axis, sp->stencil_order, zero);
                auto& acc = out.ensure(c, I.with_axis(axis), zero);
                for (std::size_t n = 0; n < deriv.size(); ++n) acc[n] += double(s) * deriv[n];
            }
        }
    }
    return out;
}

} // namespace

ScalarForm exterior_derivative(const ScalarForm& f) { return d_impl(f); }
MatrixForm exterior_derivative(const MatrixForm& f) { return d_impl(f); }

// ---- exponential, traces ----------------------------------------------------

MatrixForm matrix_exp_form(const MatrixForm& W, int rank) {
    for (int c = 0; c < W.num_charts(); ++c)
        if (W.component(c, MultiIndex(0)))
            throw contract_error("matrix_exp_form: degree-0 part present, split it off first");

    const auto& sp = W.space();
    MatrixForm result(sp);
    Mat id = Mat::Identity(rank, rank);
    for (int c = 0; c < result.num_charts(); ++c) {
        auto& comp = result.ensure(c, MultiIndex(0), Mat::Zero(rank, rank));
        for (auto& m : comp) m = id;
    }

    int dim = sp->dim();
    MatrixForm term = result; // W^0 = identity
    for (int k = 1; 2 * k <= dim; ++k) {
        term = wedge(term, W);
        term *= cplx(1.0 / k, 0.0);
        bool any = false;
        for (int c = 0; c < term.num_charts(); ++c)
            if (!term.chart(c).empty()) any = true;
        if (!any) break;
        result += term;
    }
    return result;
}

namespace {

ScalarForm traced(const MatrixForm& A, const Mat* weight_plus, const Mat* weight_minus) {
    ScalarForm out(A.space());
    for (int c = 0; c < A.num_charts(); ++c) {
        for (const auto& [mask, comp] : A.chart(c)) {
            auto& acc = out.ensure(c, MultiIndex(mask), cplx(0.0));
            for (std::size_t n = 0; n < comp.size(); ++n) {
                cplx t(0.0);
                if (weight_plus) {
                    t += ((*weight_plus) * comp[n]).trace();
                    if (weight_minus) t -= ((*weight_minus) * comp[n]).trace();
                } else {
                    t = comp[n].trace();
                }
                acc[n] += t;
            }
        }
    }
    return out;
}

} // namespace

ScalarForm trace(const MatrixForm& A) { return traced(A, nullptr, nullptr); }

ScalarForm supertrace(const MatrixForm& A, const GradingTag& g) {
    for (int c = 0; c < A.num_charts(); ++c) {
        if (A.chart(c).empty()) continue;
        if (A.chart(c).begin()->second[0].rows() != g.rank())
            throw contract_error("supertrace: projector dimension mismatch");
    }
    return traced(A, &g.projector_plus, &g.projector_minus);
}

// ---- norms, scaling ---------------------------------------------------------

namespace {

template <typename T>
double max_abs_impl(const Form<T>& f) {
    const auto& sp = f.space();
    int margin = sp->stencil_margin();
    double best = 0.0;
    for (int c = 0; c < f.num_charts(); ++c) {
        const GridShape& g = sp->charts[c];
        for (const auto& [mask, comp] : f.chart(c)) {
            for (std::size_t n = 0; n < comp.size(); ++n) {
                if (!g.interior(g.unflat(n), margin)) continue;
                double v;
                if constexpr (std::is_same_v<T, cplx>) {
                    v = std::abs(comp[n]);
                } else {
                    v = comp[n].cwiseAbs().maxCoeff();
                }
                best = std::max(best, v);
            }
        }
    }
    return best;
}

} // namespace

double max_abs_interior(const ScalarForm& f) { return max_abs_impl(f); }
double max_abs_interior(const MatrixForm& f) { return max_abs_impl(f); }

ScalarForm scaled(const ScalarForm& f, cplx s) {
    ScalarForm g = f;
    g *= s;
    return g;
}
MatrixForm scaled(const MatrixForm& f, cplx s) {
    MatrixForm g = f;
    g *= s;
    return g;
}

} // namespace cw
