#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spps/commands.hpp"

namespace {

struct GlobalArgs {
    std::string file;
    std::string out;
    std::string mode;
    std::string demo_name;
    spps::CommandOptions opt;
};

int run(const std::string& cmd, const GlobalArgs& args) {
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!args.out.empty()) {
        file_out.open(args.out);
        if (!file_out) {
            std::cerr << "spps: cannot open output file '" << args.out << "'\n";
            return spps::kExitUsage;
        }
        out = &file_out;
    }
    spps::CommandOptions opt = args.opt;
    if (!args.mode.empty()) opt.mode_override = args.mode;
    opt.rng_state = spps::seed_search_state_from_env();

    try {
        if (cmd == "demo") {
            int rc = spps::cmd_demo(args.demo_name, *out, opt);
            if (rc == spps::kExitUsage)
                std::cerr << "spps: unknown demo '" << args.demo_name
                          << "' (expected laguerre or delta2)\n";
            return rc;
        }
        if (args.file.empty()) {
            std::cerr << "spps: " << cmd << " requires --file\n";
            return spps::kExitUsage;
        }
        spps::ProblemFile pf = spps::load_problem_file(args.file);
        if (cmd == "solve") return spps::cmd_solve(pf, *out, opt);
        if (cmd == "eigen") return spps::cmd_eigen(pf, *out, opt);
        if (cmd == "bounded") return spps::cmd_bounded(pf, *out, opt);
        if (cmd == "verify") return spps::cmd_verify(pf, *out, opt);
        return spps::kExitUsage;
    } catch (const spps::ParseError& e) {
        std::cerr << "spps: parse error at " << e.what() << "\n";
        return spps::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "spps: " << e.what() << "\n";
        return spps::kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-sum series solver for second-order difference equations"};
    app.require_subcommand(1);

    GlobalArgs args;
    auto add_common = [&](CLI::App* sub, bool needs_file) {
        if (needs_file) sub->add_option("--file", args.file, "problem file (JSON)");
        sub->add_option("--tol", args.opt.tol, "relative tolerance")->capture_default_str();
        sub->add_option("--mode", args.mode, "override arithmetic mode (float|rational)");
        sub->add_option("--out", args.out, "write output to file instead of stdout");
        sub->add_flag("--pretty", args.opt.pretty, "aligned columns instead of CSV");
    };
    add_common(app.add_subcommand("solve", "evaluate the solution pair at each lambda"), true);
    add_common(app.add_subcommand("eigen", "two-point eigenvalue problem"), true);
    CLI::App* bounded = app.add_subcommand("bounded", "boundedness diagnostics and certificates");
    add_common(bounded, true);
    bounded->add_option("--div-threshold", args.opt.div_threshold,
                        "partial-sum growth reported as practical divergence")
        ->capture_default_str();
    add_common(app.add_subcommand("verify", "cross-check series solutions against the recurrence"),
               true);
    CLI::App* demo = app.add_subcommand("demo", "built-in closed-form regressions");
    demo->add_option("name", args.demo_name, "laguerre | delta2")->required();
    add_common(demo, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : spps::kExitUsage;
    }
    return run(app.get_subcommands().front()->get_name(), args);
}
