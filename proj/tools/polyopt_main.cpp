#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyopt/certificates.hpp"
#include "polyopt/conic_io.hpp"
#include "polyopt/instance_io.hpp"
#include "polyopt/runner.hpp"

using namespace polyopt;

namespace {

struct InstanceArgs {
    std::string file;
    int example = 0;
    int ball_n = 0;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("-i,--instance", file, "instance file (see README for the format)");
        cmd->add_option("--example", example, "embedded instance 1, 2 or 3")
            ->check(CLI::Range(1, 3));
        cmd->add_option("--ball-n", ball_n, "random ball-shell instance with this many variables");
        cmd->add_option("--seed", seed, "seed for --ball-n");
    }

    PopInstance load() const {
        if (example) return embedded_instance(example);
        if (ball_n) return gen_ball(ball_n, seed);
        if (file.empty()) throw CLI::ValidationError("need --instance, --example or --ball-n");
        std::ifstream in(file);
        if (!in) throw CLI::ValidationError("cannot open " + file);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_instance(buf.str(), file);
    }
};

Family parse_family(const std::string& s) {
    if (s == "qm") return Family::QM;
    if (s == "po") return Family::PO;
    throw CLI::ValidationError("family must be qm or po");
}

GramCone parse_cone(const std::string& s) {
    if (s == "lp" || s == "nonneg") return GramCone::Scalar;
    if (s == "dsos") return GramCone::Dsos;
    if (s == "sdsos") return GramCone::Sdsos;
    if (s == "sos") return GramCone::Sos;
    throw CLI::ValidationError("cone must be one of lp|dsos|sdsos|sos");
}

int resolve_level(const PopInstance& inst, Family family, int r, int dhat_opt) {
    if (r >= 0) return r;
    if (dhat_opt > 0) return level_for_dhat(inst, family, dhat_opt);
    throw CLI::ValidationError("need --r or --dhat");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchies of LP/SOCP/SDP relaxation bounds for polynomial optimization"};
    app.require_subcommand(1);

    std::string family_s = "po", cone_s = "sos", format_s = "cbf", out_file;
    int r = -1, dhat_opt = 0, dhat_max = 4, r_min = 0, r_max = 2;
    double tol = 1e-8;
    bool json = false;

    InstanceArgs inst_args;

    auto* bound = app.add_subcommand("bound", "solve one hierarchy level and print the bound");
    inst_args.attach(bound);
    bound->add_option("--family", family_s, "qm or po");
    bound->add_option("--cone", cone_s, "lp|dsos|sdsos|sos");
    bound->add_option("--r", r, "hierarchy level");
    bound->add_option("--dhat", dhat_opt, "pick the level by comparison degree");
    bound->add_option("--tol", tol, "solver tolerance");
    bound->add_flag("--json", json, "emit one JSON line instead of text");

    auto* sweep_cmd = app.add_subcommand("sweep", "solve a range of levels of one hierarchy");
    inst_args.attach(sweep_cmd);
    sweep_cmd->add_option("--family", family_s, "qm or po");
    sweep_cmd->add_option("--cone", cone_s, "lp|dsos|sdsos|sos");
    sweep_cmd->add_option("--r-min", r_min, "first level");
    sweep_cmd->add_option("--r-max", r_max, "last level");
    sweep_cmd->add_option("--tol", tol, "solver tolerance");

    auto* compare_cmd =
        app.add_subcommand("compare", "all six hierarchies, rows aligned by comparison degree");
    inst_args.attach(compare_cmd);
    compare_cmd->add_option("--dhat", dhat_max, "largest comparison degree");
    compare_cmd->add_option("--tol", tol, "solver tolerance");
    compare_cmd->add_flag("--json", json, "emit JSON lines instead of the table");

    auto* gen = app.add_subcommand("gen-ball", "emit a random ball-shell instance file");
    int gen_n = 10;
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "variable count")->required();
    gen->add_option("--seed", gen_seed, "stream seed");
    gen->add_option("-o,--output", out_file, "write to a file instead of stdout");

    auto* export_cmd = app.add_subcommand("export", "write one level's conic program to a file");
    inst_args.attach(export_cmd);
    export_cmd->add_option("--family", family_s, "qm or po");
    export_cmd->add_option("--cone", cone_s, "lp|dsos|sdsos|sos");
    export_cmd->add_option("--r", r, "hierarchy level");
    export_cmd->add_option("--dhat", dhat_opt, "pick the level by comparison degree");
    export_cmd->add_option("--format", format_s, "sdpa or cbf");
    export_cmd->add_option("-o,--output", out_file, "output path");

    auto* verify_cmd =
        app.add_subcommand("verify", "solve, decode and verify the certificate; print the report");
    inst_args.attach(verify_cmd);
    verify_cmd->add_option("--family", family_s, "qm or po");
    verify_cmd->add_option("--cone", cone_s, "lp|dsos|sdsos|sos");
    verify_cmd->add_option("--r", r, "hierarchy level");
    verify_cmd->add_option("--dhat", dhat_opt, "pick the level by comparison degree");
    verify_cmd->add_option("--tol", tol, "verification tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            PopInstance inst = gen_ball(gen_n, gen_seed);
            std::string text = serialize_instance(inst);
            if (out_file.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_file);
                out << text;
            }
            return 0;
        }
        PopInstance inst = inst_args.load();
        if (bound->parsed()) {
            HierarchySpec spec{parse_family(family_s), parse_cone(cone_s),
                               resolve_level(inst, parse_family(family_s), r, dhat_opt)};
            RunOptions opts;
            opts.solver.tol = tol;
            RunResult rr = run(inst, spec, opts);
            if (json) {
                std::cout << rr.to_json() << "\n";
            } else {
                std::cout << hierarchy_name(spec) << " r=" << rr.r << " dhat=" << rr.dhat << " "
                          << status_name(rr.status);
                if (rr.bound) std::cout << " bound=" << *rr.bound;
                std::cout << " verify=" << (rr.verified ? "pass" : "fail")
                          << " build=" << rr.build_seconds << "s solve=" << rr.solve_seconds
                          << "s\n";
                if (!rr.error.empty()) std::cout << "error: " << rr.error << "\n";
            }
            return rr.status == SolveStatus::NumericalError && !rr.error.empty() ? 1 : 0;
        }
        if (sweep_cmd->parsed()) {
            RunOptions opts;
            opts.solver.tol = tol;
            for (const auto& rr :
                 sweep(inst, parse_family(family_s), parse_cone(cone_s), r_min, r_max, opts))
                std::cout << rr.to_json() << "\n";
            return 0;
        }
        if (compare_cmd->parsed()) {
            RunOptions opts;
            opts.solver.tol = tol;
            auto rows = compare(inst, dhat_max, opts);
            if (json) {
                for (const auto& row : rows)
                    for (const auto& rr : row) std::cout << rr.to_json() << "\n";
            } else {
                std::cout << format_table(inst, rows);
            }
            return 0;
        }
        if (export_cmd->parsed()) {
            Family family = parse_family(family_s);
            HierarchySpec spec{family, parse_cone(cone_s),
                               resolve_level(inst, family, r, dhat_opt)};
            BuildResult build = build_hierarchy(inst, spec);
            ConicFormat format =
                format_s == "sdpa" ? ConicFormat::SdpaSparse : ConicFormat::Cbf;
            std::string text = export_program(build.program, format);
            if (out_file.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_file);
                out << text;
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            Family family = parse_family(family_s);
            HierarchySpec spec{family, parse_cone(cone_s),
                               resolve_level(inst, family, r, dhat_opt)};
            BuildResult build = build_hierarchy(inst, spec);
            Solution sol = solve(build.program);
            if (sol.status != SolveStatus::Optimal) {
                std::cout << "{\"status\":\"" << status_name(sol.status) << "\"}\n";
                return 1;
            }
            Certificate cert = decode(sol, build.decoder);
            VerifyReport rep = verify(inst, cert, tol);
            std::cout << rep.to_json() << "\n";
            return rep.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
