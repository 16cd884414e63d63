#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spps/bounded.hpp"
#include "spps/commands.hpp"
#include "spps/oracle.hpp"
#include "spps/table.hpp"

namespace py = pybind11;

namespace {

using spps::Complex;
using Coeffs = spps::CoefficientSet<Complex>;
using Seq = spps::Sequence<Complex>;
using Seed = spps::SeedSolution<Complex>;
using Table = spps::SppsTable<Complex>;
using Poly = spps::LambdaPolySolution<Complex>;
using BC = spps::BoundaryCondition<Complex>;

Coeffs make_coefficients(int lo, int hi, const std::vector<Complex>& p,
                         const std::vector<Complex>& q, const std::vector<Complex>& r) {
    return Coeffs(spps::IndexWindow(lo, hi), Seq(lo, p), Seq(lo + 1, q), Seq(lo + 1, r));
}

BC make_bc(Complex la, Complex lb, int lsite, Complex ra, Complex rb, int rsite) {
    BC bc;
    bc.left.alpha = la;
    bc.left.beta = lb;
    bc.left.site = lsite;
    bc.right.alpha = ra;
    bc.right.beta = rb;
    bc.right.site = rsite;
    return bc;
}

}  // namespace

PYBIND11_MODULE(_spps, m) {
    m.doc() = "Finite-sum series solver for second-order difference equations";

    py::class_<Coeffs>(m, "CoefficientSet")
        .def(py::init(&make_coefficients), py::arg("lo"), py::arg("hi"), py::arg("p"), py::arg("q"),
             py::arg("r"))
        .def_property_readonly("lo", [](const Coeffs& c) { return c.window().lo; })
        .def_property_readonly("hi", [](const Coeffs& c) { return c.window().hi; });

    py::class_<Seed>(m, "SeedSolution")
        .def_property_readonly("values", [](const Seed& s) { return s.u0.values(); })
        .def_readonly("residual_bound", &Seed::residual_bound)
        .def_readonly("min_abs", &Seed::min_abs);

    py::class_<BC>(m, "BoundaryCondition")
        .def(py::init(&make_bc), py::arg("left_alpha"), py::arg("left_beta"), py::arg("left_site"),
             py::arg("right_alpha"), py::arg("right_beta"), py::arg("right_site"));

    m.def("build_seed", &spps::build_seed_complex<Complex>, py::arg("coeffs"), py::arg("lambda0"),
          py::arg("init_u") = std::pair<Complex, Complex>{1.0, 0.0},
          py::arg("init_v") = std::pair<Complex, Complex>{0.0, 1.0});
    m.def("seed_from_values", [](const Coeffs& c, Complex lambda0, const std::vector<Complex>& u0) {
        return spps::certify_seed(c, lambda0, Seq(c.window().lo, u0));
    });

    m.def(
        "solve_pair",
        [](const Coeffs& c, const Seed& seed, int n0, Complex lam) {
            Table t = spps::build_table(c, seed, n0, spps::default_max_order(c.window(), n0));
            Seq u1 = spps::eval_solution(spps::assemble_u1(t), lam);
            Seq u2 = spps::eval_solution(spps::assemble_u2(t), lam);
            return py::make_tuple(u1.values(), u2.values());
        },
        py::arg("coeffs"), py::arg("seed"), py::arg("n0"), py::arg("lam"),
        "Evaluate the independent solution pair (u1, u2) at a spectral parameter value");

    m.def(
        "eigenvalues",
        [](const Coeffs& c, const Seed& seed, int n0, const BC& bc) {
            Table t = spps::build_table(c, seed, n0, spps::default_max_order(c.window(), n0));
            spps::EigenResult r = spps::solve_eigen(c, t, bc);
            return py::make_tuple(r.eigenvalues, r.residuals);
        },
        py::arg("coeffs"), py::arg("seed"), py::arg("n0"), py::arg("bc"));

    m.def(
        "oracle_solution",
        [](const Coeffs& c, Complex lam, Complex v_lo, Complex v_lo1) {
            return spps::oracle::oracle_solution(c, lam, v_lo, v_lo1).values();
        },
        py::arg("coeffs"), py::arg("lam"), py::arg("v_lo"), py::arg("v_lo1"));
    m.def("shooting_eigen_real", &spps::oracle::shooting_eigen_real<Complex>, py::arg("coeffs"),
          py::arg("bc"), py::arg("lam_lo"), py::arg("lam_hi"), py::arg("grid"));
    m.def("max_relative_residual", [](const Coeffs& c, const std::vector<Complex>& u, Complex lam) {
        return spps::max_relative_residual(c, Seq(c.window().lo, u), lam);
    });

    m.def(
        "bounded_certificate",
        [](const Coeffs& c, int horizon) {
            Seq u0 = Seq::constant(c.window().lo, c.window().hi, Complex(1.0));
            Seed seed = spps::certify_seed(c, Complex(0.0), u0);
            Table t = spps::build_table(c, seed, c.window().lo,
                                        spps::default_max_order(c.window(), c.window().lo));
            auto cert = spps::bounded::sufficiency_certificate(c, t, horizon);
            py::dict d;
            d["valid"] = cert.valid;
            d["n_star"] = cert.n_star;
            d["delta"] = cert.delta;
            d["solution_bound"] = cert.solution_bound;
            d["horizon"] = cert.horizon;
            return d;
        },
        py::arg("coeffs"), py::arg("horizon"));

    m.def("laguerre_closed_form",
          [](int n, Complex lam) { return spps::laguerre_closed_form<Complex>(n, lam); });
    m.def("falling_factorial",
          [](long n, int k) { return spps::falling_factorial<Complex>(n, k).real(); });

    m.def("run_command", [](const std::string& cmd, const std::string& problem_json, double tol) {
        spps::ProblemFile pf = spps::parse_problem(nlohmann::json::parse(problem_json));
        spps::CommandOptions opt;
        opt.tol = tol;
        std::ostringstream out;
        int rc = 1;
        if (cmd == "solve") rc = spps::cmd_solve(pf, out, opt);
        else if (cmd == "eigen") rc = spps::cmd_eigen(pf, out, opt);
        else if (cmd == "bounded") rc = spps::cmd_bounded(pf, out, opt);
        else if (cmd == "verify") rc = spps::cmd_verify(pf, out, opt);
        else throw std::invalid_argument("unknown command: " + cmd);
        return py::make_tuple(rc, out.str());
    }, py::arg("command"), py::arg("problem_json"), py::arg("tol") = 1e-10);
}
