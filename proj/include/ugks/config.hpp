#pragma once

#include <string>
#include <vector>

#include "ugks/ugks_core.hpp"

namespace ugks {

struct InitialSpec {
    enum class Kind { zero, sine, constant };
    Kind kind = Kind::zero;
    // sine: rho = rho0 + amp sin(2 pi x), u = u0.  constant: rho = rho0, u = u0.
    double rho0 = 0.0;
    double amp = 0.0;
    double u0 = 0.0;
};

struct CaseConfig {
    std::string name = "custom";
    std::string scheme = "ugks";  // ugks | ugks-m1 | ugks-m1-o2 | ugks-m2 | diffusion-ref
    int nx = 200;
    int nv = 50;
    double eta = 1.0;
    double epsilon = 1.0;
    double sigma = 1.0;
    bool periodic = true;
    BoundarySpec left;
    BoundarySpec right;
    InitialSpec initial;
    double t_end = 1.0;
    std::vector<double> output_times{1.0};
    double cfl_safety = 0.9;
    std::string limiter = "van_leer";
    double beta_eps = 0.0;
    double rho_eps = 1e-12;
    bool clamp_u = false;
    double m2_tol = 1e-10;
    int m2_max_iter = 10000;
};

const std::vector<std::string>& case_names();
const std::vector<std::string>& scheme_names();

// Named presets. Throws ConfigError for an unknown name.
CaseConfig preset(const std::string& name);

// Applies one key=value setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(CaseConfig& cfg, const std::string& key, const std::string& value);
// "key=value" form, as passed to --set.
void apply_assignment(CaseConfig& cfg, const std::string& assignment);

// Flat text: one key = value per line, '#' starts a comment.
void apply_config_text(CaseConfig& cfg, const std::string& text);
void apply_config_file(CaseConfig& cfg, const std::string& path);

// Range and consistency checks. Throws ConfigError.
void validate(const CaseConfig& cfg);

// Sorted output times no later than t_end, always ending at t_end.
std::vector<double> output_plan(const CaseConfig& cfg);

// Text that apply_config_text reads back to the same config.
std::string to_text(const CaseConfig& cfg);

std::string format_boundary(const BoundarySpec& b);
std::string format_initial(const InitialSpec& s);

}  // namespace ugks
