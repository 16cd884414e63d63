#include "spps/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "spps/bounded.hpp"
#include "spps/oracle.hpp"
#include "spps/table.hpp"

namespace spps {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <class S>
std::string fmt_part(const S& v, bool imag_part) {
    if constexpr (ScalarTraits<S>::exact) {
        return rational_to_string(imag_part ? v.imag() : v.real());
    } else {
        return fmt_double(imag_part ? v.imag() : v.real());
    }
}

/// Rows of string cells, emitted as CSV or padded columns.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& out, bool pretty) const {
        if (!pretty) {
            write_csv_row(out, header_);
            for (const auto& r : rows_) write_csv_row(out, r);
            return;
        }
        std::vector<size_t> widths(header_.size(), 0);
        auto grow = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size() && i < widths.size(); ++i)
                widths[i] = std::max(widths[i], r[i].size());
        };
        grow(header_);
        for (const auto& r : rows_) grow(r);
        auto pad = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) {
                out << r[i];
                if (i + 1 < r.size()) out << std::string(widths[i] - r[i].size() + 2, ' ');
            }
            out << '\n';
        };
        pad(header_);
        for (const auto& r : rows_) pad(r);
    }

private:
    static void write_csv_row(std::ostream& out, const std::vector<std::string>& r) {
        for (size_t i = 0; i < r.size(); ++i) {
            out << r[i];
            if (i + 1 < r.size()) out << ',';
        }
        out << '\n';
    }
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

template <class S>
struct Built {
    Problem<S> prob;
    SeedSolution<S> seed;
    SppsTable<S> table;
    LambdaPolySolution<S> u1;
    LambdaPolySolution<S> u2;
};

template <class S>
Built<S> build_all(const ProblemFile& pf, const CommandOptions& opt) {
    Problem<S> prob = expand_problem<S>(pf);
    SeedSolution<S> seed = resolve_seed(prob, opt.rng_state);
    SppsTable<S> table = build_table(prob.coeffs, seed,
                                     prob.n0, default_max_order(prob.coeffs.window(), prob.n0),
                                     std::max(opt.tol, seed.residual_bound));
    LambdaPolySolution<S> u1 = assemble_u1(table);
    LambdaPolySolution<S> u2 = assemble_u2(table);
    return Built<S>{std::move(prob), std::move(seed), std::move(table), std::move(u1), std::move(u2)};
}

// ---------------------------------------------------------------- solve ----

template <class S>
int solve_impl(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    Built<S> b = build_all<S>(pf, opt);
    if (b.prob.lambdas.empty()) throw ParseError("lambdas", "solve requires a nonempty lambda list");
    Table table({"lambda_re", "lambda_im", "n", "u1_re", "u1_im", "u2_re", "u2_im", "residual"});
    bool all_ok = true;
    for (const S& lam : b.prob.lambdas) {
        Sequence<S> e1 = eval_solution(b.u1, lam);
        Sequence<S> e2 = eval_solution(b.u2, lam);
        const IndexWindow& w = b.prob.coeffs.window();
        for (int n = w.lo; n <= w.hi; ++n) {
            double res = 0.0;
            if (w.interior(n))
                res = std::max(relative_residual(b.prob.coeffs, e1, lam, n),
                               relative_residual(b.prob.coeffs, e2, lam, n));
            all_ok = all_ok && res <= opt.tol;
            table.add_row({fmt_part(lam, false), fmt_part(lam, true), std::to_string(n),
                           fmt_part(e1.at(n), false), fmt_part(e1.at(n), true),
                           fmt_part(e2.at(n), false), fmt_part(e2.at(n), true), fmt_double(res)});
        }
    }
    table.write(out, opt.pretty);
    return all_ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- eigen ----

template <class S>
int eigen_impl(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    Built<S> b = build_all<S>(pf, opt);
    if (!b.prob.bc) throw ParseError("boundary", "eigen requires a boundary condition");
    Table table({"index", "lambda_re", "lambda_im", "residual", "boundary_error", "multiple"});
    int code = kExitOk;
    EigenResult res;
    try {
        res = solve_eigen(b.prob.coeffs, b.table, *b.prob.bc, 1e-12, 400);
    } catch (const NoConvergence& e) {
        // Partial results, flagged via exit code.
        for (size_t i = 0; i < e.partial_roots.size(); ++i)
            table.add_row({std::to_string(i), fmt_double(e.partial_roots[i].real()),
                           fmt_double(e.partial_roots[i].imag()), "nan", "nan", "1"});
        table.write(out, opt.pretty);
        return kExitNumerical;
    }
    for (size_t i = 0; i < res.eigenvalues.size(); ++i) {
        if (res.residuals[i] > opt.tol) code = kExitNumerical;
        table.add_row({std::to_string(i), fmt_double(res.eigenvalues[i].real()),
                       fmt_double(res.eigenvalues[i].imag()), fmt_double(res.residuals[i]),
                       fmt_double(res.boundary_errors[i]),
                       res.multiplicity_flags[i] ? "1" : "0"});
    }
    table.write(out, opt.pretty);
    return code;
}

// -------------------------------------------------------------- bounded ----

template <class S>
int bounded_impl(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    Problem<S> prob = expand_problem<S>(pf);
    const IndexWindow& w = prob.coeffs.window();
    SeedSolution<S> seed =
        prob.explicit_seed
            ? certify_seed(prob.coeffs, prob.lambda0, *prob.explicit_seed)
            : certify_seed(prob.coeffs, prob.lambda0,
                           Sequence<S>::constant(w.lo, w.hi, ScalarTraits<S>::from_int(1)));
    SppsTable<S> t = build_table(prob.coeffs, seed, prob.n0, default_max_order(w, prob.n0),
                                 std::max(opt.tol, seed.residual_bound));

    Table table({"section", "key", "value"});
    bool necessary_violated = false;
    bool have_necessary = false;
    try {
        auto [dbl, inv] = bounded::necessary_diagnostic(prob.coeffs);
        have_necessary = true;
        auto emit_series = [&](const char* name, const bounded::SeriesDiagnostic& d) {
            size_t tail = std::min<size_t>(d.partial_sums.size(), 5);
            for (size_t i = d.partial_sums.size() - tail; i < d.partial_sums.size(); ++i)
                table.add_row({name, std::to_string(d.start + static_cast<int>(i)),
                               fmt_double(d.partial_sums[i])});
            bool div = d.practically_divergent(opt.div_threshold);
            table.add_row({name, "practically_divergent", div ? "1" : "0"});
            necessary_violated = necessary_violated || div;
        };
        emit_series("necessary_double_rp", dbl);
        emit_series("necessary_inv_p", inv);
    } catch (const std::invalid_argument& e) {
        table.add_row({"necessary", "skipped", e.what()});
    }

    bounded::BoundCertificate cert = bounded::sufficiency_certificate(prob.coeffs, t, w.hi);
    bounded::BoundCertificate phi = bounded::phi_bounded_certificate(prob.coeffs, t, w.hi);
    auto emit_cert = [&](const char* name, const bounded::BoundCertificate& c) {
        table.add_row({name, "valid", c.valid ? "1" : "0"});
        table.add_row({name, "n_star", std::to_string(c.n_star)});
        table.add_row({name, "delta", fmt_double(c.delta)});
        table.add_row({name, "solution_bound", fmt_double(c.solution_bound)});
        table.add_row({name, "horizon", std::to_string(c.horizon)});
    };
    emit_cert("certificate", cert);
    emit_cert("phi_certificate", phi);

    std::string status = cert.valid               ? "certified"
                         : necessary_violated     ? "necessary-condition-violated"
                         : have_necessary         ? "inconclusive"
                                                  : "inconclusive";
    table.add_row({"summary", "status", status});
    table.write(out, opt.pretty);
    return status == "inconclusive" ? kExitInconclusive : kExitOk;
}

// --------------------------------------------------------------- verify ----

struct Discrepancy {
    double value = 0.0;
    std::string location = "-";
    void consider(double v, const std::string& loc) {
        if (v > value) {
            value = v;
            location = loc;
        }
    }
};

template <class S>
int verify_impl(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    Built<S> b = build_all<S>(pf, opt);
    const IndexWindow& w = b.prob.coeffs.window();
    std::vector<S> lambdas = b.prob.lambdas;
    if (lambdas.empty()) lambdas.push_back(b.prob.lambda0 + ScalarTraits<S>::from_int(1));

    Table table({"check", "max_discrepancy", "location", "status"});
    bool all_ok = true;
    auto report = [&](const char* check, const Discrepancy& d, double tol) {
        bool ok = d.value <= tol;
        all_ok = all_ok && ok;
        table.add_row({check, fmt_double(d.value), d.location, ok ? "pass" : "FAIL"});
    };

    Discrepancy d_oracle, d_resid, d_ref;
    bool have_ref = false;
    for (const S& lam : lambdas) {
        Sequence<S> e1 = eval_solution(b.u1, lam);
        Sequence<S> e2 = eval_solution(b.u2, lam);
        std::string lam_tag = fmt_part(lam, false);
        for (const Sequence<S>* e : {&e1, &e2}) {
            Sequence<S> direct =
                oracle::oracle_solution(b.prob.coeffs, lam, e->at(w.lo), e->at(w.lo + 1));
            double scale = 1.0;
            for (int n = w.lo; n <= w.hi; ++n)
                scale = std::max(scale, ScalarTraits<S>::abs_value(e->at(n)));
            for (int n = w.lo; n <= w.hi; ++n)
                d_oracle.consider(ScalarTraits<S>::abs_value(e->at(n) - direct.at(n)) / scale,
                                  "(n=" + std::to_string(n) + ", lambda=" + lam_tag + ")");
        }
        for (int n = w.lo + 1; n <= w.hi - 1; ++n) {
            double r = std::max(relative_residual(b.prob.coeffs, e1, lam, n),
                                relative_residual(b.prob.coeffs, e2, lam, n));
            d_resid.consider(r, "(n=" + std::to_string(n) + ", lambda=" + lam_tag + ")");
        }
        if (b.prob.reference == "laguerre") {
            have_ref = true;
            for (int n = w.lo; n <= w.hi; ++n) {
                S combo = e1.at(n) - lam * e2.at(n);
                S closed = laguerre_closed_form(n - w.lo, lam);
                d_ref.consider(ScalarTraits<S>::abs_value(combo - closed),
                               "(n=" + std::to_string(n) + ", lambda=" + lam_tag + ")");
            }
        }
    }
    report("spps_vs_oracle", d_oracle, opt.tol);
    report("jacobi_residual", d_resid, opt.tol);

    if (b.prob.bc) {
        CharPoly<S> cp = char_poly(b.u1, b.u2, *b.prob.bc);
        std::vector<Complex> roots;
        if (cp.degree() >= 1) roots = find_roots(to_complex_coeffs(cp));
        Complex lam0 = ScalarTraits<S>::to_complex(b.prob.lambda0);
        for (Complex& z : roots) z += lam0;

        if (b.prob.reference == "delta2_dirichlet") {
            have_ref = true;
            int N = b.prob.bc->right.site + 1 - w.lo;
            for (int k = 1; k <= N - 1; ++k) {
                double s = std::sin(k * std::numbers::pi / (2.0 * N));
                Complex expected(-4.0 * s * s, 0.0);
                double best = 1e300;
                for (const Complex& z : roots) best = std::min(best, std::abs(z - expected));
                d_ref.consider(best, "eigen k=" + std::to_string(k));
            }
        }
        // Shooting cross-check for real problems in floating-point mode.
        if constexpr (!ScalarTraits<S>::exact) {
            bool real_problem = true;
            for (int n = w.lo; n <= w.hi - 1 && real_problem; ++n)
                real_problem = ScalarTraits<S>::is_real(b.prob.coeffs.p().at(n));
            for (int n = w.lo + 1; n <= w.hi && real_problem; ++n)
                real_problem = ScalarTraits<S>::is_real(b.prob.coeffs.q().at(n)) &&
                               ScalarTraits<S>::is_real(b.prob.coeffs.r().at(n));
            if (real_problem && !roots.empty()) {
                double lam_lo = 1e300, lam_hi = -1e300;
                for (const Complex& z : roots)
                    if (std::abs(z.imag()) < 1e-8) {
                        lam_lo = std::min(lam_lo, z.real());
                        lam_hi = std::max(lam_hi, z.real());
                    }
                if (lam_lo <= lam_hi) {
                    double span = std::max(1.0, lam_hi - lam_lo);
                    Discrepancy d_shoot;
                    std::vector<double> shots = oracle::shooting_eigen_real(
                        b.prob.coeffs, *b.prob.bc, lam_lo - 0.05 * span, lam_hi + 0.05 * span, 512);
                    for (double s : shots) {
                        double best = 1e300;
                        for (const Complex& z : roots) best = std::min(best, std::abs(z - Complex(s)));
                        d_shoot.consider(best, "shooting lambda=" + fmt_double(s));
                    }
                    report("shooting_vs_roots", d_shoot, std::max(opt.tol, 1e-8));
                }
            }
        }
    }
    if (have_ref) report("closed_form_reference", d_ref, opt.tol);
    table.write(out, opt.pretty);
    return all_ok ? kExitOk : kExitNumerical;
}

// ----------------------------------------------------------------- demo ----

using GR = GaussianRational;

int demo_delta2(std::ostream& out, const CommandOptions& opt) {
    // Second difference equation: p == q-free, r == 1, u0 == 1, n0 = 0.
    IndexWindow w(-6, 12);
    CoefficientSet<GR> c(w, Sequence<GR>::constant(w.lo, w.hi - 1, GR(1)),
                         Sequence<GR>::constant(w.lo + 1, w.hi, GR(0)),
                         Sequence<GR>::constant(w.lo + 1, w.hi, GR(1)));
    SeedSolution<GR> seed = certify_seed(c, GR(0), Sequence<GR>::constant(w.lo, w.hi, GR(1)));
    SppsTable<GR> t = build_table(c, seed, 0, default_max_order(w, 0));
    Table table({"kind", "k", "n", "computed", "closed_form", "match"});
    bool all_match = true;
    for (int k = 1; k <= 5; ++k) {
        for (int n = w.lo; n <= w.hi; ++n) {
            GR x = t.x(2 * k).at(n);
            GR cf = falling_factorial<GR>(n + k - 1, 2 * k) /
                    falling_factorial<GR>(2 * k, 2 * k);  // (2k)!
            bool ok = x == cf;
            all_match = all_match && ok;
            table.add_row({"X2k", std::to_string(k), std::to_string(n), fmt_part(x, false),
                           fmt_part(cf, false), ok ? "1" : "0"});
            GR y = t.y(2 * k + 1).at(n);
            GR cfy = falling_factorial<GR>(n + k, 2 * k + 1) /
                     falling_factorial<GR>(2 * k + 1, 2 * k + 1);
            ok = y == cfy;
            all_match = all_match && ok;
            table.add_row({"Y2k1", std::to_string(k), std::to_string(n), fmt_part(y, false),
                           fmt_part(cfy, false), ok ? "1" : "0"});
        }
    }
    table.write(out, opt.pretty);
    return all_match ? kExitOk : kExitNumerical;
}

int demo_laguerre(std::ostream& out, const CommandOptions& opt) {
    const int N = 10;
    IndexWindow w(0, N);
    auto p = Sequence<GR>::generate(w.lo, w.hi - 1, [](int n) { return GR(n + 1); });
    auto q = Sequence<GR>::constant(w.lo + 1, w.hi, GR(0));
    Sequence<GR> u0 = Sequence<GR>::constant(w.lo, w.hi, GR(1));

    // Sign-absorbed tables (r == +1): these are the tables whose entries obey
    // X^(2k)(n) = n^(k)/(k!)^2 - Y^(2k-1)(n) and Y^(2n-1)(n) = 1/n!.
    CoefficientSet<GR> c_abs(w, p, q, Sequence<GR>::constant(w.lo + 1, w.hi, GR(1)));
    SppsTable<GR> t_abs =
        build_table(c_abs, certify_seed(c_abs, GR(0), u0), 0, default_max_order(w, 0));
    Table table({"kind", "k", "n", "computed", "closed_form", "match"});
    bool all_match = true;
    for (int k = 1; k <= N; ++k)
        for (int n = w.lo; n <= w.hi; ++n) {
            GR lhs = t_abs.x(2 * k).at(n) + t_abs.y(2 * k - 1).at(n);
            GR fact_k = falling_factorial<GR>(k, k);
            GR rhs = falling_factorial<GR>(n, k) / (fact_k * fact_k);
            bool ok = lhs == rhs;
            all_match = all_match && ok;
            table.add_row({"eqx", std::to_string(k), std::to_string(n), fmt_part(lhs, false),
                           fmt_part(rhs, false), ok ? "1" : "0"});
        }
    for (int n = 1; n <= N; ++n) {
        GR lhs = t_abs.y(2 * n - 1).at(n);
        GR rhs = GR(1) / falling_factorial<GR>(n, n);
        bool ok = lhs == rhs;
        all_match = all_match && ok;
        table.add_row({"Y_diag", std::to_string(n), std::to_string(n), fmt_part(lhs, false),
                       fmt_part(rhs, false), ok ? "1" : "0"});
    }

    // Signed equation (r == -1): u1 - lambda*u2 is the Laguerre polynomial.
    CoefficientSet<GR> c_sl(w, p, q, Sequence<GR>::constant(w.lo + 1, w.hi, GR(-1)));
    SppsTable<GR> t_sl =
        build_table(c_sl, certify_seed(c_sl, GR(0), u0), 0, default_max_order(w, 0));
    LambdaPolySolution<GR> u1 = assemble_u1(t_sl);
    LambdaPolySolution<GR> u2 = assemble_u2(t_sl);
    for (long lv : {1L, 2L, 3L}) {
        GR lam(lv);
        Sequence<GR> e1 = eval_solution(u1, lam);
        Sequence<GR> e2 = eval_solution(u2, lam);
        for (int n = w.lo; n <= w.hi; ++n) {
            GR combo = e1.at(n) - lam * e2.at(n);
            GR closed = laguerre_closed_form(n, lam);
            bool ok = combo == closed;
            all_match = all_match && ok;
            table.add_row({"laguerre_lam" + std::to_string(lv), "-", std::to_string(n),
                           fmt_part(combo, false), fmt_part(closed, false), ok ? "1" : "0"});
        }
    }
    table.write(out, opt.pretty);
    return all_match ? kExitOk : kExitNumerical;
}

// ------------------------------------------------------------- dispatch ----

std::string effective_mode(const ProblemFile& pf, const CommandOptions& opt) {
    return opt.mode_override.value_or(pf.mode);
}

template <class Fn>
int dispatch(const ProblemFile& pf, const CommandOptions& opt, Fn&& fn) {
    if (effective_mode(pf, opt) == "rational")
        return fn.template operator()<GaussianRational>();
    return fn.template operator()<Complex>();
}

}  // namespace

int cmd_solve(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    return dispatch(pf, opt, [&]<class S>() { return solve_impl<S>(pf, out, opt); });
}
int cmd_eigen(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    return dispatch(pf, opt, [&]<class S>() { return eigen_impl<S>(pf, out, opt); });
}
int cmd_bounded(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    return dispatch(pf, opt, [&]<class S>() { return bounded_impl<S>(pf, out, opt); });
}
int cmd_verify(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt) {
    return dispatch(pf, opt, [&]<class S>() { return verify_impl<S>(pf, out, opt); });
}
int cmd_demo(const std::string& name, std::ostream& out, const CommandOptions& opt) {
    if (name == "delta2") return demo_delta2(out, opt);
    if (name == "laguerre") return demo_laguerre(out, opt);
    return kExitUsage;
}

}  // namespace spps
