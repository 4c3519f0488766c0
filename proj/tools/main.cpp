#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace openarc::cli;

namespace {

void problem_flags(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--arc", cfg.arc, "strip, spiral, parabola, halfcircle or circlecavity")->capture_default_str();
    cmd->add_option("--arc-params", cfg.arc_params, "family parameters, comma separated")->delimiter(',');
    auto* ratio = cmd->add_option("--ratio", cfg.ratio, "arc length over wavelength");
    auto* k = cmd->add_option("--k", cfg.k, "wavenumber");
    ratio->excludes(k);
    cmd->add_option("--n", cfg.n, "grid size (comma list for converge)")->delimiter(',')->required();
}

void solver_flags(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--pol", cfg.pol, "TE or TM")->capture_default_str();
    cmd->add_option("--form", cfg.form, "S, N, NS or ATK")->capture_default_str();
    cmd->add_option("--inc-deg", cfg.inc_deg, "propagation direction of the plane wave")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "GMRES relative tolerance")->capture_default_str();
    cmd->add_option("--maxit", cfg.maxit, "GMRES iteration limit")->capture_default_str();
    cmd->add_option("--obs", cfg.obs, "far-field observation count")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Scattering by open arcs"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "solve one problem; writes farfield.csv, density.csv, report.txt");
    problem_flags(solve, cfg);
    solver_flags(solve, cfg);
    solve->add_flag("--self-check", cfg.self_check, "estimate eps_r against a run at 2n");

    auto* spectrum = app.add_subcommand("spectrum", "dense eigenvalues; writes eigs_<op>.csv");
    problem_flags(spectrum, cfg);
    spectrum->add_option("--op", cfg.ops, "S, N, NS, S0invS (comma list)")->delimiter(',');

    auto* converge = app.add_subcommand("converge", "far-field errors against the largest n; writes converge.csv");
    problem_flags(converge, cfg);
    solver_flags(converge, cfg);

    auto* fieldmap = app.add_subcommand("fieldmap", "total field on a rectangle; writes fieldmap.csv/.pgm/.meta");
    problem_flags(fieldmap, cfg);
    solver_flags(fieldmap, cfg);
    fieldmap->add_option("--rect", cfg.rect, "x0,y0,x1,y1")->delimiter(',')->required();
    fieldmap->add_option("--res", cfg.res, "WxH")->capture_default_str();

    auto* tables = app.add_subcommand("tables", "iteration tables; writes tables.csv");
    tables->add_option("--table", cfg.table, "strip-te, spiral-te, strip-tm, spiral-tm or atkinson")->required();
    tables->add_option("--cap", cfg.cap, "largest L/lambda row to run")->capture_default_str();
    tables->add_option("--inc-deg", cfg.inc_deg)->capture_default_str();
    tables->add_option("--tol", cfg.tol)->capture_default_str();
    tables->add_option("--maxit", cfg.maxit)->capture_default_str();
    tables->add_option("--obs", cfg.obs)->capture_default_str();

    for (auto* cmd : {solve, spectrum, converge, fieldmap, tables}) {
        cmd->add_option("--out", cfg.out, "output directory")->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(cfg, std::cout);
        if (*spectrum) return cmd_spectrum(cfg, std::cout);
        if (*converge) return cmd_converge(cfg, std::cout);
        if (*fieldmap) return cmd_fieldmap(cfg, std::cout);
        if (*tables) return cmd_tables(cfg, std::cout);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
