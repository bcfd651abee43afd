#include "chernweil/verifier.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "chernweil/parallel.hpp"

namespace cw {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; } // (-1)^n

std::string fmt(cplx v) {
    std::ostringstream os;
    os.precision(6);
    os << v.real();
    if (std::abs(v.imag()) > 1e-12) os << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
    return os.str();
}

CheckResult finalize(CheckResult r, const Timer& t) {
    r.abs_error = std::abs(r.lhs - r.rhs);
    r.pass = r.abs_error <= r.tolerance;
    r.seconds = t.seconds();
    return r;
}

} // namespace

TubeMasks tube_masks(const Scenario& S) {
    const Atlas& atlas = S.atlas;
    TubeMasks out;
    out.complement.values.resize(atlas.num_charts());
    for (std::size_t k = 0; k < S.components.size(); ++k) {
        RegionMask m;
        m.values.resize(atlas.num_charts());
        out.component.push_back(std::move(m));
    }

    for (int c = 0; c < atlas.num_charts(); ++c) {
        const GridShape& g = atlas.grid(c);
        std::size_t nn = g.num_nodes();
        for (auto& m : out.component) m.values[c].assign(nn, 0.0);
        out.complement.values[c].assign(nn, 1.0);

        for (std::size_t n : atlas.active[c]) {
            auto x = g.coords(g.unflat(n));
            double total = 0.0;
            for (std::size_t k = 0; k < S.components.size(); ++k) {
                const auto& comp = S.components[k];
                RampProfile ramp{S.trunc_b, comp.tube_radius, 5};
                double d = comp.distance.eval(c, x, nullptr);
                double mval = 1.0 - ramp(d);
                out.component[k].values[c][n] = mval;
                total += mval;
            }
            if (total > 1.0 + 1e-12) throw contract_error("overlapping tubes");
            out.complement.values[c][n] = 1.0 - total;
        }
    }
    return out;
}

const TubeMasks& ScenarioData::masks() {
    if (!masks_) masks_ = tube_masks(S_);
    return *masks_;
}

const ScalarGradField& ScenarioData::rho() {
    if (!rho_) rho_ = make_rho_field(S_.components, S_.trunc_a, S_.trunc_b);
    return *rho_;
}

const GradedConnectionField& ScenarioData::deformed() {
    if (!deformed_) {
        if (!S_.vmap) throw config_error("scenario supplies no bundle map");
        deformed_ = deformed_connection(S_.connection, *S_.vmap, rho());
    }
    return *deformed_;
}

GradedChScan ScenarioData::run_scan(const GradedConnectionField& conn, bool with_rho) {
    std::vector<const RegionMask*> regions;
    for (const auto& m : masks().component) regions.push_back(&m);
    regions.push_back(&masks().complement);
    return scan_graded_ch(S_.atlas, conn, regions, with_rho ? &rho() : nullptr);
}

const GradedChScan& ScenarioData::plain_scan() {
    if (!plain_) plain_ = run_scan(S_.connection, false);
    return *plain_;
}

const GradedChScan& ScenarioData::deformed_scan() {
    if (!deformed_scan_) deformed_scan_ = run_scan(deformed(), true);
    return *deformed_scan_;
}

const GradedChScan& ScenarioData::lambda_plain_scan() {
    if (S_.lambda_is_primary) return plain_scan();
    if (!lambda_plain_) lambda_plain_ = run_scan(S_.lambda_tm, false);
    return *lambda_plain_;
}

const GradedConnectionField& ScenarioData::lambda_deformed() {
    if (S_.lambda_is_primary) return deformed();
    if (!S_.K) throw config_error("scenario supplies no section pair K");
    if (!lambda_deformed_) {
        BundleMapField v = symbol_field(S_.model, S_.dim, *S_.K);
        lambda_deformed_ = deformed_connection(S_.lambda_tm, v, rho());
    }
    return *lambda_deformed_;
}

const GradedChScan& ScenarioData::lambda_deformed_scan() {
    if (S_.lambda_is_primary) return deformed_scan();
    if (!lambda_deformed_scan_) lambda_deformed_scan_ = run_scan(lambda_deformed(), true);
    return *lambda_deformed_scan_;
}

cplx refined_tube_integral(const Scenario& S, const GradedConnectionField& conn,
                           const ZeroComponentSpec& comp, int disk_res) {
    std::uint32_t top = (1u << S.dim) - 1u;
    if (comp.isolated) {
        if (S.dim != 2) throw config_error("refined tube quadrature: isolated tubes need dim 2");
        int nres = disk_res > 0 ? disk_res : std::max(129, S.resolution) | 1;
        double R = comp.tube_radius;
        double h = 2.0 * R / (nres - 1);
        return parallel_pairwise_sum<cplx>(static_cast<std::size_t>(nres) * nres,
                                           [&](std::size_t k) {
                                               int i = static_cast<int>(k % nres);
                                               int j = static_cast<int>(k / nres);
                                               double u = -R + i * h, v = -R + j * h;
                                               if (u * u + v * v > R * R) return cplx(0.0);
                                               std::vector<double> x = {comp.center[0] + u,
                                                                        comp.center[1] + v};
                                               double w = h * h;
                                               if (i == 0 || i == nres - 1) w *= 0.5;
                                               if (j == 0 || j == nres - 1) w *= 0.5;
                                               auto coeffs = graded_ch_at(conn, comp.chart, x);
                                               return w * coeffs[top];
                                           });
    }
    // product tube: atlas base grid x dedicated fiber grid
    int fres = disk_res > 0 ? disk_res : 49;
    double F = comp.tube_radius;
    double fh = 2.0 * F / (fres - 1);
    cplx total(0.0);
    for (int pc : comp.base_charts) {
        const GridShape& g = S.atlas.grid(pc);
        std::size_t nbase = static_cast<std::size_t>(g.res[0]) * g.res[1];
        total += parallel_pairwise_sum<cplx>(nbase, [&](std::size_t k) {
            int i = static_cast<int>(k % g.res[0]);
            int j = static_cast<int>(k / g.res[0]);
            std::vector<double> x = {g.lo[0] + i * g.spacing(0), g.lo[1] + j * g.spacing(1),
                                     comp.fiber_center[0], comp.fiber_center[1]};
            double pou = S.atlas.charts[pc].pou(x);
            if (pou <= 0.0) return cplx(0.0);
            double wb = pou * g.spacing(0) * g.spacing(1);
            cplx fiber_sum(0.0);
            for (int a = 0; a < fres; ++a)
                for (int b = 0; b < fres; ++b) {
                    double u = -F + a * fh, v = -F + b * fh;
                    if (u * u + v * v > F * F) continue;
                    x[2] = comp.fiber_center[0] + u;
                    x[3] = comp.fiber_center[1] + v;
                    double wf = fh * fh;
                    if (a == 0 || a == fres - 1) wf *= 0.5;
                    if (b == 0 || b == fres - 1) wf *= 0.5;
                    auto coeffs = graded_ch_at(conn, pc, x);
                    fiber_sum += wf * coeffs[top];
                }
            return wb * fiber_sum;
        });
    }
    return total;
}

const std::vector<cplx>& ScenarioData::refined_tubes() {
    if (!tubes_) {
        std::vector<cplx> vals;
        for (const auto& comp : S_.components)
            vals.push_back(refined_tube_integral(S_, deformed(), comp));
        tubes_ = std::move(vals);
    }
    return *tubes_;
}

const std::vector<cplx>& ScenarioData::lambda_refined_tubes() {
    if (S_.lambda_is_primary) return refined_tubes();
    if (!lambda_tubes_) {
        std::vector<cplx> vals;
        for (const auto& comp : S_.components)
            vals.push_back(refined_tube_integral(S_, lambda_deformed(), comp));
        lambda_tubes_ = std::move(vals);
    }
    return *lambda_tubes_;
}

namespace {

cplx sum_of(const std::vector<cplx>& v) {
    cplx t(0.0);
    for (const auto& x : v) t += x;
    return t;
}

} // namespace

CheckResult check_lemma1(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "lemma1";
    r.tolerance = S.tolerance_for("lemma1", S.dim >= 4 ? 5e-2 : 1e-2);
    r.lhs = D.plain_scan().global;
    r.rhs = sum_of(D.refined_tubes());
    cplx compl_int = D.deformed_scan().regions.back();
    std::ostringstream note;
    note << "complement integral " << fmt(compl_int);
    r.note = note.str();
    return finalize(std::move(r), t);
}

CheckResult check_complement_vanishing(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "lemma1_complement_vanishing";
    r.tolerance = S.tolerance_for("complement_sup", 1e-8);
    r.lhs = cplx(D.deformed_scan().sup_where_rho_one);
    r.rhs = cplx(0.0);
    std::ostringstream note;
    note << "sup of the deformed character integrand over " << D.deformed_scan().rho_one_nodes
         << " nodes with rho = 1";
    r.note = note.str();
    return finalize(std::move(r), t);
}

CheckResult check_theorem1(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "theorem1";
    r.tolerance = S.tolerance_for("theorem1", S.dim >= 4 ? 5e-2 : 1e-2);
    r.lhs = D.plain_scan().global;
    const auto& per_comp = D.refined_tubes();
    r.rhs = sum_of(per_comp);
    std::ostringstream note;
    note << "localized pairings (tube semantics):";
    for (std::size_t k = 0; k < S.components.size(); ++k)
        note << " " << S.components[k].id << "=" << fmt(per_comp[k]);
    if (S.components.empty()) note << " none (empty zero set)";
    r.note = note.str();
    return finalize(std::move(r), t);
}

std::vector<DegreeResult> component_degrees(const Scenario& S, double radius_scale,
                                            int circle_points) {
    if (!S.vmap) throw config_error("scenario supplies no bundle map");
    std::vector<DegreeResult> out;
    for (const auto& comp : S.components) {
        if (!comp.isolated) throw contract_error("degree of a non-isolated component");
        double radius = radius_scale * comp.tube_radius;
        if (S.dim == 2) {
            auto circ = make_circle(comp.chart, comp.center, radius, circle_points);
            auto vj = [&](const std::vector<double>& x, MatrixJet& jet) {
                S.vmap->eval(comp.chart, x, jet);
            };
            out.push_back(degree_at_zero(vj, circ, S.n));
        } else {
            auto sph = make_sphere3(comp.chart, comp.center, radius, 24, 48);
            auto vj = [&](const std::vector<double>& x, MatrixJet& jet) {
                S.vmap->eval(comp.chart, x, jet);
            };
            out.push_back(degree_at_zero(vj, sph, S.n));
        }
    }
    return out;
}

CheckResult check_corollary1(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "corollary1";
    r.tolerance = S.tolerance_for("corollary1", 1e-2);
    r.lhs = D.plain_scan().global;

    long deg_sum = 0;
    std::ostringstream note;
    auto degs = component_degrees(S, 0.5);
    auto degs2 = component_degrees(S, 1.0); // doubled radius must agree
    note << "degrees:";
    for (std::size_t k = 0; k < degs.size(); ++k) {
        if (degs[k].degree != degs2[k].degree)
            throw contract_error("degree is not radius independent");
        deg_sum += degs[k].degree;
        note << " " << S.components[k].id << "=" << degs[k].degree;
    }
    // The tube integral of the deformed character around an isolated zero
    // equals minus the counterclockwise winding degree, so the global number
    // is -sum(deg). With the boundary circle oriented as the boundary of the
    // complement this is the (-1)^{n-1} sum of the classical statement.
    r.rhs = cplx(-double(deg_sum));
    note << "; sum=" << deg_sum << " (rhs = -sum, ccw orientation)";
    r.note = note.str();
    return finalize(std::move(r), t);
}

CheckResult check_lemma4(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "lemma4";
    r.tolerance = S.tolerance_for("lemma4", 2e-2);
    r.lhs = D.lambda_plain_scan().global;
    double factor = sign_pow(S.n) * std::pow(2.0, S.n); // (-2)^n
    r.rhs = cplx(factor * double(S.euler_char));
    std::ostringstream note;
    note << "(-2)^n chi with mesh-oracle chi = " << S.euler_char;
    r.note = note.str();
    return finalize(std::move(r), t);
}

CheckResult check_theorem2(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "theorem2";
    r.tolerance = S.tolerance_for("theorem2", S.dim >= 4 ? 0.25 : 2e-2);
    cplx tubes = sum_of(D.lambda_refined_tubes());
    double factor = sign_pow(S.n) * std::pow(2.0, S.n);
    r.lhs = tubes / factor;
    r.rhs = cplx(double(S.euler_char));
    std::ostringstream note;
    note << "chi recovered from " << S.components.size() << " tube integrals";
    if (S.outside_hypothesis) note << "; outside theorem hypothesis (n = 1)";
    r.note = note.str();
    return finalize(std::move(r), t);
}

CheckResult check_zero_set_declaration(ScenarioData& D) {
    Timer t;
    const Scenario& S = D.scenario();
    CheckResult r;
    r.name = "zero_set_declaration";
    r.tolerance = 0.0;
    int bad = 0, tested = 0, plus_frame = 0;

    auto singular = [&](int chart, const std::vector<double>& x) {
        MatrixJet jet;
        S.vmap->eval(chart, x, jet);
        Eigen::JacobiSVD<Mat> svd(jet.value);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(svd.singularValues().size() - 1);
        return !(smax > 0.0) || smin < 1e-6 * smax;
    };

    // The classification at a sample point: for scenarios driven by a section
    // pair the Lemma 3 classifier runs (and may throw lemma_violation); for
    // custom maps a singular-value test stands in.
    auto classify_bad_off_tube = [&](int chart, const std::vector<double>& x) {
        if (S.K && S.lambda_is_primary) {
            Eigen::VectorXd xi(2 * S.n), eta(2 * S.n);
            Eigen::MatrixXd dxi(2 * S.n, S.dim), deta(2 * S.n, S.dim);
            S.K->eval(chart, x, xi, eta, dxi, deta);
            auto c = classify_point(*S.model, xi, eta);
            if (c == PointClass::zero_plus_frame) ++plus_frame;
            return c == PointClass::zero_noninvertible;
        }
        return singular(chart, x);
    };

    std::mt19937 rng(2024);
    for (int c = 0; c < S.atlas.num_charts(); ++c) {
        const auto& act = S.atlas.active[c];
        if (act.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, act.size() - 1);
        int per_chart = 500 / S.atlas.num_charts() + 1;
        for (int k = 0; k < per_chart; ++k) {
            std::size_t n = act[pick(rng)];
            auto x = S.atlas.grid(c).coords(S.atlas.grid(c).unflat(n));
            bool inside_tube = false;
            for (const auto& comp : S.components)
                if (comp.distance.eval(c, x, nullptr) <= comp.tube_radius) inside_tube = true;
            if (inside_tube) continue;
            ++tested;
            if (classify_bad_off_tube(c, x)) ++bad;
        }
    }

    // declared components must be singular on the nose
    int on_tested = 0;
    for (const auto& comp : S.components) {
        if (comp.isolated) {
            ++on_tested;
            if (!singular(comp.chart, comp.center)) ++bad;
        } else {
            for (int pc : comp.base_charts) {
                const GridShape& g = S.atlas.grid(pc);
                for (int i = 2; i < g.res[0] - 2; i += 5)
                    for (int j = 2; j < g.res[1] - 2; j += 5) {
                        std::vector<double> x = {g.lo[0] + i * g.spacing(0),
                                                 g.lo[1] + j * g.spacing(1),
                                                 comp.fiber_center[0], comp.fiber_center[1]};
                        ++on_tested;
                        if (!singular(pc, x)) ++bad;
                    }
            }
        }
    }

    r.lhs = cplx(double(bad));
    r.rhs = cplx(0.0);
    std::ostringstream note;
    note << tested << " off-tube and " << on_tested << " on-component samples";
    if (plus_frame > 0) note << "; " << plus_frame << " oriented-frame points (Z+ branch)";
    if (bad > 0) note << "; zero-set mismatch";
    r.note = note.str();
    return finalize(std::move(r), t);
}

std::vector<CheckResult> check_lemma2_diagnostic(ScenarioData& D) {
    const Scenario& S = D.scenario();
    std::vector<CheckResult> out;
    for (std::size_t k = 0; k < S.components.size(); ++k) {
        Timer t;
        const auto& comp = S.components[k];
        CheckResult r;
        r.name = "lemma2_diagnostic:" + comp.id;
        r.diagnostic = true;
        r.tolerance = S.tolerance_for("lemma2", 5e-2);

        if (comp.isolated) {
            // zero-dimensional X: fiber integration over the whole tube is
            // the tube integral itself; the euler-class comparison is
            // degenerate and skipped
            cplx tube = D.refined_tubes()[k];
            r.lhs = tube;
            r.rhs = tube;
            r.pass = true;
            r.note = "degenerate: isolated point, fiber integral equals the tube integral "
                     "(value " +
                     fmt(tube) + ")";
            r.seconds = t.seconds();
            out.push_back(std::move(r));
            continue;
        }

        if (comp.codim % 2 != 0) {
            r.pass = false;
            r.note = "diagnostic undefined: odd codimension";
            r.seconds = t.seconds();
            out.push_back(std::move(r));
            continue;
        }

        // fiber integration of the deformed character over a dedicated fiber
        // grid, against the euler form of the normal bundle
        const auto& conn = D.deformed();
        int fib_res = 25;
        double F = comp.tube_radius;
        double fh = 2.0 * F / (fib_res - 1);

        cplx lhs(0.0), rhs(0.0);
        for (int pc : comp.base_charts) {
            const GridShape& g = S.atlas.grid(pc);
            for (int i = 0; i < g.res[0]; ++i)
                for (int j = 0; j < g.res[1]; ++j) {
                    std::vector<double> base = {g.lo[0] + i * g.spacing(0),
                                                g.lo[1] + j * g.spacing(1)};
                    std::vector<double> x0 = {base[0], base[1], comp.fiber_center[0],
                                              comp.fiber_center[1]};
                    double pou = S.atlas.charts[pc].pou(x0);
                    if (pou <= 0.0) continue;
                    double wbase = g.spacing(0) * g.spacing(1) * pou;

                    // u0 = fiber integral of the fiber-axes component
                    cplx u0(0.0);
                    std::vector<double> x = x0;
                    for (int a = 0; a < fib_res; ++a)
                        for (int b = 0; b < fib_res; ++b) {
                            x[2] = -F + a * fh;
                            x[3] = -F + b * fh;
                            double wf = fh * fh;
                            if (a == 0 || a == fib_res - 1) wf *= 0.5;
                            if (b == 0 || b == fib_res - 1) wf *= 0.5;
                            auto coeffs = graded_ch_at(conn, pc, x);
                            u0 += wf * coeffs[0b1100];
                        }
                    cplx e_val = comp.normal_euler ? comp.normal_euler(pc, base) : cplx(0.0);
                    lhs += wbase * e_val * u0;

                    auto rest = graded_ch_at(conn, pc, x0);
                    rhs += wbase * rest[0b0011];
                }
        }
        r.lhs = rhs; // restriction-side periods
        r.rhs = lhs; // euler wedge fiber-integral side
        r.abs_error = std::abs(r.lhs - r.rhs);
        r.pass = true; // reported, never gating
        std::ostringstream note;
        note << "restriction periods vs e(N) x fiber integral; residual " << r.abs_error;
        r.note = note.str();
        r.seconds = t.seconds();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckResult> run_all_checks(const Scenario& S) {
    ScenarioData D(S);
    std::vector<CheckResult> out;
    if (S.vmap) out.push_back(check_zero_set_declaration(D));
    if (S.vmap) {
        out.push_back(check_lemma1(D));
        out.push_back(check_complement_vanishing(D));
        auto diags = check_lemma2_diagnostic(D);
        out.insert(out.end(), diags.begin(), diags.end());
        out.push_back(check_theorem1(D));
        bool all_isolated = !S.components.empty();
        for (const auto& c : S.components) all_isolated = all_isolated && c.isolated;
        if (all_isolated || S.components.empty()) out.push_back(check_corollary1(D));
    }
    out.push_back(check_lemma4(D));
    if (S.K) out.push_back(check_theorem2(D));
    return out;
}

} // namespace cw
