#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ugks/config.hpp"
#include "ugks/diffusion.hpp"
#include "ugks/kinetic_scheme.hpp"
#include "ugks/m1_scheme.hpp"
#include "ugks/m2_scheme.hpp"

namespace ugks {

using SchemeState = std::variant<KineticField, M1Field, M2Field, DiffusionState>;

// Grid, quadrature, opacity and boundary data for a config.
Problem make_problem(const CaseConfig& cfg);

// Cell averages of the initial (rho, rho u); the kinetic field samples the
// M1 ansatz of those moments on the velocity nodes.
SchemeState build_initial_state(const CaseConfig& cfg, const Problem& pb);

struct Profile {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<double> j;  // empty for diffusion-ref
    std::vector<double> q;  // empty unless the scheme carries q
};

struct MonitorRow {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double entropy = 0.0;
    // Smallest distance to the realizability boundary over non-vacuum cells;
    // NaN when the scheme has no velocity moment.
    double min_margin = 0.0;
};

struct RunRecord {
    CaseConfig config;
    std::vector<double> times;
    std::vector<Profile> profiles;
    std::vector<MonitorRow> monitors;
    double wall_seconds = 0.0;
};

Profile profile_of(const SchemeState& state, const Problem& pb, double t);
double mass_of(const SchemeState& state, const Problem& pb);
double entropy_monitor(const SchemeState& state, const Problem& pb, const CaseConfig& cfg);
double realizability_margin(const SchemeState& state, const Problem& pb, const CaseConfig& cfg);

// Step size before clipping to output times.
double scheme_dt(const CaseConfig& cfg, const Problem& pb);

SchemeState advance(const SchemeState& state, const Problem& pb, const CaseConfig& cfg, double dt);

// Runs to t_end, recording a profile at each planned time and monitors every
// step. Scheme errors are rethrown with the step and time prepended.
RunRecord run_case(const CaseConfig& cfg);

double l2_error(const std::vector<double>& a, const std::vector<double>& b, double dx);

// Cell averages of a fine profile onto nx_coarse cells (an exact divisor).
std::vector<double> restrict_average(const std::vector<double>& fine, int nx_coarse);

struct ConvergenceResult {
    std::vector<int> meshes;
    std::vector<double> dx;
    std::vector<double> errors;
    int reference_nx = 0;
    double slope = 0.0;
};

// Runs the template at each mesh and at reference_nx, compares densities at
// t_end, and fits log(error) against log(dx) by least squares.
ConvergenceResult convergence_study(const CaseConfig& tmpl, const std::vector<int>& meshes,
                                    int reference_nx);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// CSV text, 17 significant digits.
std::string profile_csv(const Profile& p);
std::string monitors_csv(const std::vector<MonitorRow>& rows);

// Writes config.txt, one profile_t<time>.csv per output time, and monitors.csv.
void write_run(const RunRecord& rec, const std::string& dir);
std::string profile_filename(double t);

}  // namespace ugks
