#include "chernweil/bundle.hpp"

#include <cmath>
#include <random>

#include "chernweil/parallel.hpp"

namespace cw {

namespace {

constexpr cplx kChernScale{0.0, 1.0 / (2.0 * M_PI)}; // i / (2 pi)

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline cplx trace_of_product(const Mat& a, const Mat& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

} // namespace

int pair_count(int dim) { return dim * (dim - 1) / 2; }

const std::vector<std::pair<int, int>>& pair_axes(int dim) {
    static std::vector<std::vector<std::pair<int, int>>> cache(9);
    auto& v = cache[dim];
    if (v.empty()) {
        for (auto I : multi_indices(dim, 2)) {
            auto ax = I.axes();
            v.push_back({ax[0], ax[1]});
        }
    }
    return v;
}

int pair_slot(int dim, int i, int j) {
    const auto& pairs = pair_axes(dim);
    for (std::size_t s = 0; s < pairs.size(); ++s)
        if (pairs[s].first == i && pairs[s].second == j) return static_cast<int>(s);
    throw std::invalid_argument("pair_slot: bad axes");
}

void GradedConnSample::resize(int dim, int rank_p, int rank_m) {
    int np = pair_count(dim);
    if (static_cast<int>(omega_p.size()) == dim && static_cast<int>(domega_p.size()) == np &&
        !omega_p.empty() && omega_p[0].rows() == rank_p && omega_m[0].rows() == rank_m)
        return; // already shaped; samplers overwrite every entry
    omega_p.assign(dim, Mat::Zero(rank_p, rank_p));
    omega_m.assign(dim, Mat::Zero(rank_m, rank_m));
    domega_p.assign(np, Mat::Zero(rank_p, rank_p));
    domega_m.assign(np, Mat::Zero(rank_m, rank_m));
}

ScalarGradField TruncationProfile::rho() const {
    if (!(ramp.a < ramp.b) || ramp.a < 0.0)
        throw config_error("truncation profile requires 0 <= a < b");
    RampProfile r = ramp;
    auto dist = distance;
    ScalarGradField out;
    out.eval = [r, dist](int chart, const std::vector<double>& x, std::vector<double>* grad) {
        if (!grad) return r(dist.eval(chart, x, nullptr));
        std::vector<double> dg(x.size(), 0.0);
        double t = dist.eval(chart, x, &dg);
        double val = r(t);
        double dv = r.deriv(t);
        for (std::size_t i = 0; i < x.size(); ++i) (*grad)[i] = dv * dg[i];
        return val;
    };
    return out;
}

GradedConnectionField deformed_connection(const GradedConnectionField& base,
                                          const BundleMapField& v, const ScalarGradField& rho,
                                          double cond_threshold) {
    if (base.rank_p != v.rank_p || base.rank_m != v.rank_m)
        throw config_error("deformed_connection: rank mismatch between connection and map");
    GradedConnectionField out;
    out.dim = base.dim;
    out.rank_p = base.rank_p;
    out.rank_m = base.rank_m;
    int dim = base.dim;

    out.sample = [base, v, rho, cond_threshold, dim](int chart, const std::vector<double>& x,
                                                     GradedConnSample& s) {
        base.sample(chart, x, s);
        thread_local std::vector<double> grad;
        grad.assign(dim, 0.0);
        double r = rho.eval(chart, x, &grad);
        if (r == 0.0) return; // on the zero set the block connection is kept

        thread_local MatrixJet vj;
        v.eval(chart, x, vj);
        const Mat& B = vj.value;

        Eigen::PartialPivLU<Mat> lu(B);
        double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < B.rows(); ++i) {
            double d = std::abs(lu.matrixLU()(i, i));
            dmax = std::max(dmax, d);
            dmin = std::min(dmin, d);
        }
        if (!(dmin > 0.0) || dmax / dmin > cond_threshold)
            throw contract_error("truncation region touches zero set");

        int rp = static_cast<int>(B.rows());
        thread_local Mat Vinv;
        thread_local std::vector<Mat> Dv, Q, P;
        thread_local Mat dDv;
        if (static_cast<int>(Dv.size()) != dim || Dv.empty() || Dv[0].rows() != rp) {
            Dv.assign(dim, Mat::Zero(rp, rp));
            Q.assign(dim, Mat::Zero(rp, rp));
            P.assign(dim, Mat::Zero(rp, rp));
            dDv.resize(rp, rp);
            Vinv.resize(rp, rp);
        }
        Vinv = lu.inverse();
        for (int i = 0; i < dim; ++i) {
            Dv[i] = vj.d[i];
            Dv[i].noalias() += s.omega_m[i] * B;
            Dv[i].noalias() -= B * s.omega_p[i];
            Q[i].noalias() = Vinv * Dv[i];
            P[i].noalias() = Vinv * vj.d[i];
        }

        const auto& pairs = pair_axes(dim);
        for (std::size_t slot = 0; slot < pairs.size(); ++slot) {
            auto [i, j] = pairs[slot];
            dDv.noalias() = s.domega_m[slot] * B;
            dDv.noalias() -= s.omega_m[i] * vj.d[j];
            dDv.noalias() += s.omega_m[j] * vj.d[i];
            dDv.noalias() -= vj.d[i] * s.omega_p[j];
            dDv.noalias() += vj.d[j] * s.omega_p[i];
            dDv.noalias() -= B * s.domega_p[slot];
            if (grad[i] != 0.0) s.domega_p[slot] += grad[i] * Q[j];
            if (grad[j] != 0.0) s.domega_p[slot] -= grad[j] * Q[i];
            s.domega_p[slot].noalias() -= r * (P[i] * Q[j]);
            s.domega_p[slot].noalias() += r * (P[j] * Q[i]);
            s.domega_p[slot].noalias() += r * (Vinv * dDv);
        }
        for (int i = 0; i < dim; ++i) s.omega_p[i] += r * Q[i];
    };
    return out;
}

void graded_ch_coeffs(const GradedConnSample& s, int dim, MaskCoeffs& out) {
    out.fill(cplx(0.0));
    int rp = static_cast<int>(s.omega_p.empty() ? 0 : s.omega_p[0].rows());
    int rm = static_cast<int>(s.omega_m.empty() ? 0 : s.omega_m[0].rows());
    out[0] = cplx(double(rp - rm));

    const auto& pairs = pair_axes(dim);
    int np = static_cast<int>(pairs.size());
    thread_local std::vector<Mat> Wp, Wm;
    thread_local std::vector<std::uint32_t> masks;
    if (static_cast<int>(Wp.size()) != np || Wp.empty() || Wp[0].rows() != rp) {
        Wp.assign(np, Mat::Zero(std::max(rp, 1), std::max(rp, 1)));
        Wm.assign(np, Mat::Zero(std::max(rm, 1), std::max(rm, 1)));
        masks.assign(np, 0);
    }

    for (int slot = 0; slot < np; ++slot) {
        auto [i, j] = pairs[slot];
        masks[slot] = (1u << i) | (1u << j);
        Wp[slot] = s.domega_p[slot];
        Wp[slot].noalias() += s.omega_p[i] * s.omega_p[j];
        Wp[slot].noalias() -= s.omega_p[j] * s.omega_p[i];
        Wm[slot] = s.domega_m[slot];
        Wm[slot].noalias() += s.omega_m[i] * s.omega_m[j];
        Wm[slot].noalias() -= s.omega_m[j] * s.omega_m[i];
        out[masks[slot]] += kChernScale * (Wp[slot].trace() - Wm[slot].trace());
    }
    if (dim >= 4) {
        cplx c2 = 0.5 * kChernScale * kChernScale;
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < np; ++q) {
                if (masks[p] & masks[q]) continue;
                int sgn = wedge_sign(MultiIndex(masks[p]), MultiIndex(masks[q]));
                out[masks[p] | masks[q]] +=
                    c2 * double(sgn) *
                    (trace_of_product(Wp[p], Wp[q]) - trace_of_product(Wm[p], Wm[q]));
            }
    }
}

MaskCoeffs graded_ch_at(const GradedConnectionField& conn, int chart,
                        const std::vector<double>& x) {
    thread_local GradedConnSample s;
    s.resize(conn.dim, conn.rank_p, conn.rank_m);
    conn.sample(chart, x, s);
    MaskCoeffs out;
    graded_ch_coeffs(s, conn.dim, out);
    return out;
}

ScalarForm graded_ch_form(const Atlas& atlas, const GradedConnectionField& conn) {
    ScalarForm f(atlas.space);
    int dim = conn.dim;
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const GridShape& g = atlas.grid(c);
        std::vector<std::vector<cplx>*> comps(1u << dim, nullptr);
        for (int deg = 0; deg <= dim; deg += 2)
            for (auto I : multi_indices(dim, deg)) comps[I.mask()] = &f.ensure(c, I, cplx(0.0));
        parallel_for(g.num_nodes(), [&](std::size_t n) {
            thread_local GradedConnSample s;
            s.resize(dim, conn.rank_p, conn.rank_m);
            auto x = g.coords(g.unflat(n));
            conn.sample(c, x, s);
            MaskCoeffs out;
            graded_ch_coeffs(s, dim, out);
            for (std::uint32_t m = 0; m < (1u << dim); ++m)
                if (comps[m]) (*comps[m])[n] = out[m];
        });
    }
    return f;
}

namespace {

struct ScanAccum {
    cplx global{0.0};
    std::array<cplx, 6> reg{};
    double sup = 0.0;
    std::size_t rho1 = 0;

    ScanAccum& operator+=(const ScanAccum& o) {
        global += o.global;
        for (std::size_t i = 0; i < reg.size(); ++i) reg[i] += o.reg[i];
        sup = std::max(sup, o.sup);
        rho1 += o.rho1;
        return *this;
    }
    ScanAccum operator+(const ScanAccum& o) const {
        ScanAccum r = *this;
        r += o;
        return r;
    }
};

} // namespace

GradedChScan scan_graded_ch(const Atlas& atlas, const GradedConnectionField& conn,
                            const std::vector<const RegionMask*>& regions,
                            const ScalarGradField* rho) {
    if (regions.size() > 6) throw config_error("scan_graded_ch: too many regions");
    int dim = conn.dim;
    std::uint32_t top = (1u << dim) - 1u;

    ScanAccum total;
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const GridShape& g = atlas.grid(c);
        const auto& act = atlas.active[c];
        const auto& pv = atlas.pou_values[c];
        const auto& qw = atlas.quad_weights[c];
        double orient = atlas.charts[c].orientation;

        ScanAccum chart_sum = parallel_pairwise_sum<ScanAccum>(
            act.size(),
            [&](std::size_t k) {
                std::size_t n = act[k];
                thread_local GradedConnSample s;
                s.resize(dim, conn.rank_p, conn.rank_m);
                auto x = g.coords(g.unflat(n));
                conn.sample(c, x, s);
                MaskCoeffs out;
                graded_ch_coeffs(s, dim, out);

                ScanAccum a;
                cplx weighted = orient * pv[n] * qw[n] * out[top];
                a.global = weighted;
                for (std::size_t r = 0; r < regions.size(); ++r)
                    a.reg[r] = weighted * (*regions[r]).values[c][n];
                if (rho) {
                    double rv = rho->eval(c, x, nullptr);
                    if (rv >= 1.0) {
                        double m = 0.0;
                        for (auto& v : out) m = std::max(m, std::abs(v));
                        a.sup = m;
                        a.rho1 = 1;
                    }
                }
                return a;
            },
            32);
        total += chart_sum;
    }

    GradedChScan scan;
    scan.global = total.global;
    scan.regions.assign(total.reg.begin(), total.reg.begin() + regions.size());
    scan.sup_where_rho_one = total.sup;
    scan.rho_one_nodes = total.rho1;
    return scan;
}

namespace {

ScalarForm transgression_form(const Atlas& atlas, const GradedConnectionField& from,
                              const GradedConnectionField& to, int t_nodes) {
    int dim = from.dim;
    std::vector<double> tn, tw;
    gauss_legendre(t_nodes, tn, tw);
    const auto& pairs = pair_axes(dim);
    int np = static_cast<int>(pairs.size());

    ScalarForm T(atlas.space);
    for (int c = 0; c < atlas.num_charts(); ++c) {
        const GridShape& g = atlas.grid(c);
        std::vector<std::vector<cplx>*> comps(1u << dim, nullptr);
        for (int deg = 1; deg <= dim; deg += 2)
            for (auto I : multi_indices(dim, deg)) comps[I.mask()] = &T.ensure(c, I, cplx(0.0));
        parallel_for(g.num_nodes(), [&](std::size_t n) {
            thread_local GradedConnSample b, d;
            b.resize(dim, from.rank_p, from.rank_m);
            d.resize(dim, to.rank_p, to.rank_m);
            auto x = g.coords(g.unflat(n));
            from.sample(c, x, b);
            to.sample(c, x, d);

            MaskCoeffs out;
            out.fill(cplx(0.0));
            for (int i = 0; i < dim; ++i) {
                cplx tr_a = (d.omega_p[i] - b.omega_p[i]).trace();
                out[1u << i] = kChernScale * tr_a;
            }
            if (dim >= 4) {
                for (int it = 0; it < t_nodes; ++it) {
                    double t = tn[it], w = tw[it];
                    for (int slot = 0; slot < np; ++slot) {
                        auto [pi, pj] = pairs[slot];
                        Mat om_i = b.omega_p[pi] + t * (d.omega_p[pi] - b.omega_p[pi]);
                        Mat om_j = b.omega_p[pj] + t * (d.omega_p[pj] - b.omega_p[pj]);
                        Mat dom = b.domega_p[slot] + t * (d.domega_p[slot] - b.domega_p[slot]);
                        Mat W = dom + om_i * om_j - om_j * om_i;
                        std::uint32_t pmask = (1u << pi) | (1u << pj);
                        for (int i = 0; i < dim; ++i) {
                            if (pmask & (1u << i)) continue;
                            Mat a_i = d.omega_p[i] - b.omega_p[i];
                            int sgn = wedge_sign(MultiIndex(1u << i), MultiIndex(pmask));
                            out[pmask | (1u << i)] += kChernScale * kChernScale * w *
                                                      double(sgn) * trace_of_product(a_i, W);
                        }
                    }
                }
            }
            for (std::uint32_t m = 0; m < (1u << dim); ++m)
                if (comps[m]) (*comps[m])[n] = out[m];
        });
    }
    return T;
}

} // namespace

cplx transgression_value(const Atlas& atlas, const GradedConnectionField& from,
                         const GradedConnectionField& to, const RegionMask& region,
                         double t_quad_tol) {
    auto v8 = atlas.integrate_region(exterior_derivative(transgression_form(atlas, from, to, 8)),
                                     region);
    auto v16 = atlas.integrate_region(
        exterior_derivative(transgression_form(atlas, from, to, 16)), region);
    if (std::abs(v8 - v16) > t_quad_tol)
        throw config_error("transgression t-quadrature did not converge");
    return v16;
}

DegreeResult degree_at_zero(
    const std::function<void(const std::vector<double>&, MatrixJet&)>& v_jet,
    const BoundarySphere& sphere, int n, double residual_tol) {
    int sd = sphere.sphere_dim;
    if (sd != 2 * n - 1) throw config_error("degree_at_zero: sphere dimension must be 2n-1");

    cplx raw = pairwise_sum<cplx>(sphere.nodes.size(), [&](std::size_t k) {
        const auto& node = sphere.nodes[k];
        thread_local MatrixJet vj;
        v_jet(node.x, vj);
        Eigen::PartialPivLU<Mat> lu(vj.value);
        thread_local std::vector<Mat> A;
        A.assign(sd, Mat());
        int ambient = static_cast<int>(node.x.size());
        for (int j = 0; j < sd; ++j) {
            Mat pull = Mat::Zero(vj.value.rows(), vj.value.cols());
            for (int i = 0; i < ambient; ++i)
                if (node.tangents(i, j) != 0.0) pull += node.tangents(i, j) * vj.d[i];
            A[j] = lu.solve(pull);
        }
        cplx f(0.0);
        if (sd == 1) {
            f = A[0].trace();
        } else {
            // antisymmetrized trace over the three tangent slots
            static const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                           {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
            for (int p = 0; p < 6; ++p) {
                double sgn = p < 3 ? 1.0 : -1.0;
                f += sgn * (A[perm[p][0]] * A[perm[p][1]] * A[perm[p][2]]).trace();
            }
        }
        return node.weight * f;
    });

    cplx prefactor = -std::pow(kChernScale, n) * (factorial(n - 1) / factorial(2 * n - 1));
    double flip = (n % 2 == 1) ? 1.0 : -1.0; // (-1)^{n-1}
    cplx normalized = flip * prefactor * raw;

    DegreeResult res;
    res.normalized = normalized;
    res.degree = std::lround(normalized.real());
    res.residual = std::abs(normalized - cplx(double(res.degree)));
    if (res.residual >= residual_tol)
        throw contract_error("non-integral degree (sphere too coarse or crosses zero set)");
    return res;
}

// ---- array-backed operations --------------------------------------------------

MatrixForm curvature_form(const MatrixForm& omega) {
    MatrixForm R = exterior_derivative(omega);
    R += wedge(omega, omega);
    return R;
}

ScalarForm chern_character_form(const MatrixForm& curvature, int rank,
                                const GradingTag* grading) {
    MatrixForm scaled_R = scaled(curvature, kChernScale);
    MatrixForm e = matrix_exp_form(scaled_R, rank);
    return grading ? supertrace(e, *grading) : trace(e);
}

ScalarForm euler_form(const MatrixForm& curvature, double skew_tol) {
    int rank = 0;
    for (int c = 0; c < curvature.num_charts(); ++c)
        if (!curvature.chart(c).empty())
            rank = static_cast<int>(curvature.chart(c).begin()->second[0].rows());
    if (rank != 2 && rank != 4) throw config_error("euler_form supports ranks 2 and 4");

    // skewness check over interior nodes
    const auto& sp = curvature.space();
    int margin = sp->stencil_margin();
    for (int c = 0; c < curvature.num_charts(); ++c) {
        const GridShape& g = sp->charts[c];
        for (const auto& [mask, comp] : curvature.chart(c))
            for (std::size_t n = 0; n < comp.size(); ++n) {
                if (!g.interior(g.unflat(n), margin)) continue;
                double skew = (comp[n] + comp[n].transpose()).cwiseAbs().maxCoeff();
                double imag = comp[n].imag().cwiseAbs().maxCoeff();
                if (skew > skew_tol || imag > skew_tol)
                    throw contract_error("euler_form: curvature is not real antisymmetric");
            }
    }

    auto entry = [&](int i, int j) {
        ScalarForm f(curvature.space());
        for (int c = 0; c < curvature.num_charts(); ++c)
            for (const auto& [mask, comp] : curvature.chart(c)) {
                auto& dst = f.ensure(c, MultiIndex(mask), cplx(0.0));
                for (std::size_t n = 0; n < comp.size(); ++n) dst[n] = comp[n](i, j);
            }
        return f;
    };

    double norm = 1.0 / (2.0 * M_PI);
    if (rank == 2) {
        ScalarForm pf = entry(0, 1);
        pf *= cplx(norm);
        return pf;
    }
    // rank 4: Pf = A01^A23 - A02^A13 + A03^A12
    auto a01 = entry(0, 1), a23 = entry(2, 3), a02 = entry(0, 2), a13 = entry(1, 3),
         a03 = entry(0, 3), a12 = entry(1, 2);
    ScalarForm pf = wedge(a01, a23);
    ScalarForm t2 = wedge(a02, a13);
    t2 *= cplx(-1.0);
    ScalarForm t3 = wedge(a03, a12);
    pf += t2;
    pf += t3;
    pf *= cplx(norm * norm);
    return pf;
}

// ---- bundle validators ----------------------------------------------------------

void BundleSpec::validate_cocycle(const Atlas& atlas, int samples, double tol) const {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // inverse consistency on every overlap
    for (const auto& t : atlas.transitions) {
        const GridShape& g = atlas.grid(t.from);
        int done = 0, guard = 0;
        while (done < samples && guard < samples * 200) {
            ++guard;
            std::vector<double> x(g.dim());
            for (int a = 0; a < g.dim(); ++a) x[a] = g.lo[a] + u(rng) * (g.hi[a] - g.lo[a]);
            if (!t.in_domain(x)) continue;
            if (atlas.charts[t.from].pou(x) <= 0.0) continue;
            ++done;
            auto y = t.map(x);
            Mat fwd = transition(t.from, t.to, x);
            Mat bwd = transition(t.to, t.from, y);
            if (!fwd.allFinite() ||
                (fwd * bwd - Mat::Identity(rank, rank)).cwiseAbs().maxCoeff() > tol)
                throw contract_error("bundle transition cocycle violated");
        }
    }
    // cocycle condition on triple overlaps
    for (const auto& t1 : atlas.transitions)
        for (const auto& t2 : atlas.transitions) {
            if (t2.from != t1.to) continue;
            const ChartTransition* direct = nullptr;
            for (const auto& t3 : atlas.transitions)
                if (t3.from == t1.from && t3.to == t2.to) direct = &t3;
            if (!direct || t2.to == t1.from) continue;
            const GridShape& g = atlas.grid(t1.from);
            int done = 0, guard = 0;
            while (done < samples && guard < samples * 200) {
                ++guard;
                std::vector<double> x(g.dim());
                for (int a = 0; a < g.dim(); ++a) x[a] = g.lo[a] + u(rng) * (g.hi[a] - g.lo[a]);
                if (!t1.in_domain(x) || !direct->in_domain(x)) continue;
                auto y = t1.map(x);
                if (!t2.in_domain(y)) continue;
                ++done;
                Mat lhs = transition(direct->from, direct->to, x);
                Mat rhs = transition(t2.from, t2.to, y) * transition(t1.from, t1.to, x);
                if ((lhs - rhs).cwiseAbs().maxCoeff() > tol)
                    throw contract_error("bundle transition cocycle violated on a triple overlap");
            }
        }
}

void validate_map_equivariance(const Atlas& atlas, const BundleSpec& plus,
                               const BundleSpec& minus, const BundleMapField& v, int samples,
                               double tol) {
    std::mt19937 rng(54321);
    for (const auto& t : atlas.transitions) {
        const GridShape& g = atlas.grid(t.from);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int done = 0, guard = 0;
        while (done < samples && guard < samples * 200) {
            ++guard;
            std::vector<double> x(g.dim());
            for (int a = 0; a < g.dim(); ++a) x[a] = g.lo[a] + u(rng) * (g.hi[a] - g.lo[a]);
            if (!t.in_domain(x)) continue;
            if (atlas.charts[t.from].pou(x) <= 0.0) continue;
            ++done;
            auto y = t.map(x);
            MatrixJet va, vb;
            v.eval(t.from, x, va);
            v.eval(t.to, y, vb);
            Mat lhs = vb.value * plus.transition(t.from, t.to, x);
            Mat rhs = minus.transition(t.from, t.to, x) * va.value;
            if ((lhs - rhs).cwiseAbs().maxCoeff() > tol)
                throw contract_error("bundle map is not transition equivariant");
        }
    }
}

// ---- clifford-model bridges -----------------------------------------------------

GradedConnectionField lambda_connection(std::shared_ptr<const CliffordModel> model, int dim,
                                        const SoConnectionField& so) {
    GradedConnectionField conn;
    conn.dim = dim;
    conn.rank_p = model->half;
    conn.rank_m = model->half;
    int nso = static_cast<int>(model->so_pairs.size());
    int nax = pair_count(dim);
    conn.sample = [so, model, dim, nso, nax](int chart, const std::vector<double>& x,
                                             GradedConnSample& s) {
        thread_local Eigen::MatrixXd om, dom;
        om.resize(nso, dim);
        dom.resize(nso, nax);
        so.eval(chart, x, om, dom);
        for (int i = 0; i < dim; ++i) {
            s.omega_p[i].setZero();
            s.omega_m[i].setZero();
            for (int p = 0; p < nso; ++p) {
                if (om(p, i) == 0.0) continue;
                s.omega_p[i] += om(p, i) * model->so_pp[p];
                s.omega_m[i] += om(p, i) * model->so_mm[p];
            }
        }
        for (int slot = 0; slot < nax; ++slot) {
            s.domega_p[slot].setZero();
            s.domega_m[slot].setZero();
            for (int p = 0; p < nso; ++p) {
                if (dom(p, slot) == 0.0) continue;
                s.domega_p[slot] += dom(p, slot) * model->so_pp[p];
                s.domega_m[slot] += dom(p, slot) * model->so_mm[p];
            }
        }
    };
    return conn;
}

BundleMapField symbol_field(std::shared_ptr<const CliffordModel> model, int dim,
                            const FrameVectorField& K) {
    BundleMapField v;
    v.dim = dim;
    v.rank_p = model->half;
    v.rank_m = model->half;
    int n2 = 2 * model->n;
    v.eval = [model, K, dim, n2](int chart, const std::vector<double>& x, MatrixJet& jet) {
        thread_local Eigen::VectorXd xi, eta;
        thread_local Eigen::MatrixXd dxi, deta;
        xi.resize(n2);
        eta.resize(n2);
        dxi.resize(n2, dim);
        deta.resize(n2, dim);
        K.eval(chart, x, xi, eta, dxi, deta);

        if (jet.value.rows() != model->half || static_cast<int>(jet.d.size()) != dim) {
            jet.value = Mat::Zero(model->half, model->half);
            jet.d.assign(dim, Mat::Zero(model->half, model->half));
        } else {
            jet.value.setZero();
            for (auto& m : jet.d) m.setZero();
        }
        for (int a = 0; a < n2; ++a) {
            if (xi[a] != 0.0) jet.value += xi[a] * model->tau_c_mp[a];
            if (eta[a] != 0.0) jet.value += cplx(0.0, eta[a]) * model->c_mp[a];
            for (int i = 0; i < dim; ++i) {
                if (dxi(a, i) != 0.0) jet.d[i] += dxi(a, i) * model->tau_c_mp[a];
                if (deta(a, i) != 0.0) jet.d[i] += cplx(0.0, deta(a, i)) * model->c_mp[a];
            }
        }
    };
    return v;
}

} // namespace cw
