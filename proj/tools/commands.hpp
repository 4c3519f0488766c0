#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "openarc/scattering.hpp"

namespace openarc::cli {

/// Bad flags or flag combinations. main() maps it to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string arc = "strip";
    std::vector<double> arc_params;
    std::optional<double> ratio;  // L / lambda
    std::optional<double> k;
    std::string pol = "TE";
    std::string form = "S";  // S, N, NS or ATK; converge also takes a comma list
    std::vector<int> n;
    double inc_deg = 90.0;
    double tol = 1e-8;
    int maxit = 2000;
    int obs = 360;
    std::filesystem::path out = ".";
    bool self_check = false;
    std::vector<double> rect;  // x0, y0, x1, y1
    std::string res = "200x200";
    std::string table;
    double cap = 200.0;
    std::vector<std::string> ops{"NS"};  // spectrum operators
};

/// Largest matrix the spectrum command hands to the dense eigensolver.
inline constexpr int dense_cap = 2048;

Formulation formulation_for(const std::string& pol, const std::string& form);

/// Each command writes into cfg.out (created if missing) and returns the
/// process exit code: 0 on success, 2 when a solve did not converge.
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_converge(const RunConfig& cfg, std::ostream& log);
int cmd_fieldmap(const RunConfig& cfg, std::ostream& log);
int cmd_tables(const RunConfig& cfg, std::ostream& log);

/// "%.17g"
std::string format_double(double x);

}  // namespace openarc::cli
