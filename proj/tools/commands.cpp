#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace openarc::cli {

namespace {

struct Problem {
    Arc arc;
    double k;
    double ratio;
};

std::string upper(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

Problem make_problem(const RunConfig& cfg)
{
    if (cfg.ratio.has_value() == cfg.k.has_value()) {
        throw UsageError("give exactly one of --ratio and --k");
    }
    Arc arc = [&] {
        try {
            return make_arc(parse_arc_kind(cfg.arc), cfg.arc_params);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (cfg.ratio) {
        if (!(*cfg.ratio > 0.0)) {
            throw UsageError("--ratio must be positive");
        }
        const double k = wavenumber_for_ratio(arc, *cfg.ratio);
        return {std::move(arc), k, *cfg.ratio};
    }
    if (!(*cfg.k > 0.0) || !std::isfinite(*cfg.k)) {
        throw UsageError("--k must be positive");
    }
    const double ratio = *cfg.k * arc.length() / (2.0 * std::numbers::pi);
    return {std::move(arc), *cfg.k, ratio};
}

int single_n(const RunConfig& cfg)
{
    if (cfg.n.size() != 1) {
        throw UsageError("give exactly one --n");
    }
    if (!is_admissible_grid_size(cfg.n[0])) {
        throw UsageError("--n " + std::to_string(cfg.n[0]) + " is not admissible (5-smooth and >= 4)");
    }
    return cfg.n[0];
}

void check_solver_flags(const RunConfig& cfg)
{
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) {
        throw UsageError("--tol must lie in (0, 1)");
    }
    if (cfg.maxit < 1) {
        throw UsageError("--maxit must be positive");
    }
    if (cfg.obs < 1) {
        throw UsageError("--obs must be positive");
    }
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.out);
    std::ofstream f(cfg.out / name, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + (cfg.out / name).string());
    }
    return f;
}

void write_far_field(const RunConfig& cfg, const FarField& ff)
{
    std::ofstream f = open_output(cfg, "farfield.csv");
    f << "angle_deg,re,im\n";
    for (std::size_t i = 0; i < ff.values.size(); ++i) {
        f << format_double(ff.angles[i]) << ',' << format_double(ff.values[i].real()) << ','
          << format_double(ff.values[i].imag()) << '\n';
    }
}

void write_density(const RunConfig& cfg, const Solution& sol)
{
    std::ofstream f = open_output(cfg, "density.csv");
    f << "j,theta,re,im\n";
    const ThetaGrid& g = *sol.grid();
    for (int j = 0; j < g.size(); ++j) {
        f << j << ',' << format_double(g.nodes()[j]) << ',' << format_double(sol.density.values[j].real()) << ','
          << format_double(sol.density.values[j].imag()) << '\n';
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

struct TableRow {
    double ratio;
    int n;
};

}  // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Formulation formulation_for(const std::string& pol, const std::string& form)
{
    const std::string p = upper(pol);
    const std::string f = upper(form);
    if (p == "TE") {
        if (f == "S") return Formulation::TE_S;
        if (f == "NS") return Formulation::TE_NS;
        if (f == "ATK") return Formulation::TE_ATKINSON;
    } else if (p == "TM") {
        if (f == "N") return Formulation::TM_N;
        if (f == "NS") return Formulation::TM_NS;
    } else {
        throw UsageError("--pol must be TE or TM");
    }
    throw UsageError("--form " + form + " is not available for " + p);
}

int cmd_solve(const RunConfig& cfg, std::ostream& log)
{
    check_solver_flags(cfg);
    const Problem p = make_problem(cfg);
    const int n = single_n(cfg);
    const Formulation f = formulation_for(cfg.pol, cfg.form);
    const Incidence inc{cfg.inc_deg, p.k};

    const Solution sol = solve(f, p.arc, inc, make_grid(n), cfg.tol, cfg.maxit);
    const FarField ff = far_field(sol, cfg.obs);
    write_far_field(cfg, ff);
    write_density(cfg, sol);

    std::optional<double> eps;
    if (cfg.self_check) {
        const Solution ref = solve(f, p.arc, inc, make_grid(2 * n), cfg.tol, cfg.maxit);
        eps = relative_far_field_error(ff, far_field(ref, cfg.obs));
    }

    std::ofstream r = open_output(cfg, "report.txt");
    r << "formulation: " << to_string(f) << '\n';
    r << "arc: " << to_string(p.arc.kind()) << '\n';
    r << "n: " << n << '\n';
    r << "k: " << format_double(p.k) << '\n';
    r << "L_over_lambda: " << format_double(p.ratio) << '\n';
    r << "inc_deg: " << format_double(cfg.inc_deg) << '\n';
    r << "converged: " << (sol.report.converged ? "true" : "false") << '\n';
    r << "iterations: " << sol.report.iterations << '\n';
    r << "final_residual: "
      << format_double(sol.report.residuals.empty() ? 0.0 : sol.report.residuals.back()) << '\n';
    r << "true_residual: " << format_double(sol.report.true_residual) << '\n';
    r << "mat_seconds: " << format_double(sol.mat_seconds) << '\n';
    r << "solve_seconds: " << format_double(sol.report.elapsed.count()) << '\n';
    if (eps) {
        r << "eps_r_estimate: " << format_double(*eps) << '\n';
    }

    log << to_string(f) << " n=" << n << " iterations=" << sol.report.iterations << '\n';
    if (!sol.report.converged) {
        log << "error: GMRES did not converge in " << cfg.maxit << " iterations\n";
        return 2;
    }
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log)
{
    const Problem p = make_problem(cfg);
    const int n = single_n(cfg);
    if (n > dense_cap) {
        throw UsageError("--n exceeds the dense cap of " + std::to_string(dense_cap));
    }
    if (cfg.ops.empty()) {
        throw UsageError("no spectrum operator requested");
    }
    const ArcOperators ops(p.arc, p.k, make_grid(n));
    for (const std::string& name : cfg.ops) {
        CMatrix m;
        if (name == "S") {
            m = ops.s_matrix().entries;
        } else if (name == "N") {
            m = assemble_dense([&](const CVector& v) { return ops.apply_N(v); }, n, dense_cap);
        } else if (name == "NS") {
            m = assemble_dense([&](const CVector& v) { return ops.apply_NS(v); }, n, dense_cap);
        } else if (name == "S0invS") {
            m = assemble_dense([&](const CVector& v) { return ops.apply_S_S0tau_inverse(v); }, n, dense_cap);
        } else {
            throw UsageError("unknown spectrum operator " + name + " (S, N, NS, S0invS)");
        }
        std::vector<std::complex<double>> eigs = eig_dense(m, dense_cap);
        std::sort(eigs.begin(), eigs.end(), [](auto a, auto b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        std::ofstream f = open_output(cfg, "eigs_" + name + ".csv");
        f << "re,im\n";
        for (auto z : eigs) {
            f << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
        log << name << ": " << eigs.size() << " eigenvalues\n";
    }
    return 0;
}

int cmd_converge(const RunConfig& cfg, std::ostream& log)
{
    check_solver_flags(cfg);
    const Problem p = make_problem(cfg);
    if (cfg.n.size() < 2) {
        throw UsageError("converge needs at least two values of --n");
    }
    std::vector<int> sizes;
    std::ostringstream notes;
    for (int requested : cfg.n) {
        if (requested < 4) {
            throw UsageError("--n values must be at least 4");
        }
        const int n = largest_admissible_at_most(requested);
        if (n != requested) {
            notes << "substituted: " << requested << " -> " << n << '\n';
        }
        sizes.push_back(n);
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 2) {
        throw UsageError("converge needs at least two distinct admissible sizes");
    }
    const int reference = sizes.back();

    std::vector<Formulation> forms;
    for (const std::string& f : split(cfg.form, ',')) {
        forms.push_back(formulation_for(cfg.pol, f));
    }

    const Incidence inc{cfg.inc_deg, p.k};
    int status = 0;
    std::ofstream csv = open_output(cfg, "converge.csv");
    csv << "formulation,n,eps_r\n";
    for (Formulation f : forms) {
        const Solution ref = solve(f, p.arc, inc, make_grid(reference), cfg.tol, cfg.maxit);
        status = ref.report.converged ? status : 2;
        const FarField ref_ff = far_field(ref, cfg.obs);
        for (int n : sizes) {
            if (n == reference) {
                continue;
            }
            const Solution sol = solve(f, p.arc, inc, make_grid(n), cfg.tol, cfg.maxit);
            status = sol.report.converged ? status : 2;
            const double eps = relative_far_field_error(far_field(sol, cfg.obs), ref_ff);
            csv << to_string(f) << ',' << n << ',' << format_double(eps) << '\n';
            log << to_string(f) << " n=" << n << " eps_r=" << eps << '\n';
        }
    }
    std::ofstream meta = open_output(cfg, "converge.meta");
    meta << "reference_n: " << reference << '\n' << notes.str();
    if (status != 0) {
        log << "error: at least one solve did not converge\n";
    }
    return status;
}

int cmd_fieldmap(const RunConfig& cfg, std::ostream& log)
{
    check_solver_flags(cfg);
    const Problem p = make_problem(cfg);
    const int n = single_n(cfg);
    if (cfg.rect.size() != 4) {
        throw UsageError("--rect takes x0,y0,x1,y1");
    }
    int width = 0;
    int height = 0;
    char tail = 0;
    if (std::sscanf(cfg.res.c_str(), "%dx%d%c", &width, &height, &tail) != 2 || width < 1 || height < 1) {
        throw UsageError("--res takes WxH with positive integers");
    }
    const Rectangle rect{cfg.rect[0], cfg.rect[1], cfg.rect[2], cfg.rect[3], width, height};
    if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) {
        throw UsageError("--rect needs x1 > x0 and y1 > y0");
    }

    const Formulation f = formulation_for(cfg.pol, cfg.form);
    const Solution sol = solve(f, p.arc, {cfg.inc_deg, p.k}, make_grid(n), cfg.tol, cfg.maxit);
    const FieldMap map = near_field(sol, rect);

    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& v : map.values) {
        if (v) {
            lo = std::min(lo, std::abs(*v));
            hi = std::max(hi, std::abs(*v));
        }
    }
    if (lo > hi) {
        lo = hi = 0.0;
    }

    std::ofstream csv = open_output(cfg, "fieldmap.csv");
    csv << "x,y,re,im,abs\n";
    std::string pixels(map.values.size(), static_cast<char>(128));
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        csv << format_double(map.points[i].x) << ',' << format_double(map.points[i].y) << ',';
        if (!map.values[i]) {
            csv << ",,\n";
            continue;
        }
        const std::complex<double> v = *map.values[i];
        csv << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v))
            << '\n';
        const double scaled = hi > lo ? (std::abs(v) - lo) / (hi - lo) : 0.0;
        pixels[i] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(scaled, 0.0, 1.0))));
    }

    std::ofstream pgm = open_output(cfg, "fieldmap.pgm");
    pgm << "P5\n" << width << ' ' << height << "\n255\n";
    pgm.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));

    std::ofstream meta = open_output(cfg, "fieldmap.meta");
    meta << "min: " << format_double(lo) << "\nmax: " << format_double(hi) << "\nwidth: " << width
         << "\nheight: " << height << '\n';

    log << "fieldmap " << width << 'x' << height << " iterations=" << sol.report.iterations << '\n';
    if (!sol.report.converged) {
        log << "error: GMRES did not converge in " << cfg.maxit << " iterations\n";
        return 2;
    }
    return 0;
}

int cmd_tables(const RunConfig& cfg, std::ostream& log)
{
    check_solver_flags(cfg);
    ArcKind kind;
    std::vector<Formulation> forms;
    if (cfg.table == "strip-te") {
        kind = ArcKind::Strip;
        forms = {Formulation::TE_S, Formulation::TE_NS};
    } else if (cfg.table == "spiral-te") {
        kind = ArcKind::Spiral;
        forms = {Formulation::TE_S, Formulation::TE_NS};
    } else if (cfg.table == "strip-tm") {
        kind = ArcKind::Strip;
        forms = {Formulation::TM_N, Formulation::TM_NS};
    } else if (cfg.table == "spiral-tm") {
        kind = ArcKind::Spiral;
        forms = {Formulation::TM_N, Formulation::TM_NS};
    } else if (cfg.table == "atkinson") {
        kind = ArcKind::Spiral;
        forms = {Formulation::TE_ATKINSON};
    } else {
        throw UsageError("--table must be one of strip-te, spiral-te, strip-tm, spiral-tm, atkinson");
    }
    const Arc arc = make_arc(kind);

    std::vector<TableRow> rows;
    for (TableRow row : {TableRow{50.0, 400}, TableRow{200.0, 1600}, TableRow{800.0, 6400}}) {
        if (row.ratio <= cfg.cap) {
            rows.push_back(row);
        }
    }
    if (rows.empty()) {
        throw UsageError("--cap excludes every row");
    }

    int status = 0;
    std::ofstream csv = open_output(cfg, "tables.csv");
    csv << "L_over_lambda,n,formulation,iterations,mat_seconds,solve_seconds,eps_r\n";
    for (const TableRow& row : rows) {
        const double k = wavenumber_for_ratio(arc, row.ratio);
        const Incidence inc{cfg.inc_deg, k};
        auto ops = std::make_shared<const ArcOperators>(arc, k, make_grid(row.n));
        auto ref_ops = std::make_shared<const ArcOperators>(arc, k, make_grid(2 * row.n));
        for (Formulation f : forms) {
            const Solution sol = solve(f, ops, inc, cfg.tol, cfg.maxit);
            const Solution ref = solve(f, ref_ops, inc, cfg.tol, cfg.maxit);
            status = sol.report.converged && ref.report.converged ? status : 2;
            const double eps = relative_far_field_error(far_field(sol, cfg.obs), far_field(ref, cfg.obs));
            csv << format_double(row.ratio) << ',' << row.n << ',' << to_string(f) << ',' << sol.report.iterations
                << ',' << format_double(ops->assembly_seconds()) << ',' << format_double(sol.report.elapsed.count())
                << ',' << format_double(eps) << '\n';
            log << format_double(row.ratio) << ' ' << row.n << ' ' << to_string(f) << " it=" << sol.report.iterations
                << " eps_r=" << eps << '\n';
        }
    }
    if (status != 0) {
        log << "error: at least one solve did not converge\n";
    }
    return status;
}

}  // namespace openarc::cli
