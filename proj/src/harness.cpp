#include "ugks/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ugks/errors.hpp"

namespace ugks {
namespace {

m1::ClosureThresholds thresholds(const CaseConfig& c) {
    m1::ClosureThresholds th;
    th.beta_eps = c.beta_eps;
    th.rho_eps = c.rho_eps;
    return th;
}

M1Options m1_options(const CaseConfig& c) {
    M1Options o;
    o.order = c.scheme == "ugks-m1-o2" ? 2 : 1;
    o.clamp_u = c.clamp_u;
    o.thresholds = thresholds(c);
    return o;
}

M2Options m2_options(const CaseConfig& c) {
    M2Options o;
    o.inversion.tol = c.m2_tol;
    o.inversion.max_iter = c.m2_max_iter;
    o.rho_eps = c.rho_eps;
    return o;
}

// Exact cell averages of rho and rho u.
std::vector<m1::MomentVector> initial_moments(const CaseConfig& c, const SpatialGrid& g) {
    std::vector<m1::MomentVector> U(g.nx);
    const auto& s = c.initial;
    const double dx = g.dx();
    for (int i = 0; i < g.nx; ++i) {
        double rho = 0.0;
        switch (s.kind) {
            case InitialSpec::Kind::zero:
                break;
            case InitialSpec::Kind::constant:
                rho = s.rho0;
                break;
            case InitialSpec::Kind::sine: {
                const double a = g.x_min + i * dx;
                const double k = 2.0 * std::numbers::pi;
                rho = s.rho0 + s.amp * (std::cos(k * a) - std::cos(k * (a + dx))) / (k * dx);
                break;
            }
        }
        U[i] = {rho, rho * s.u0};
    }
    return U;
}

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

std::string sci(double v) {
    if (!std::isfinite(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

Problem make_problem(const CaseConfig& c) {
    validate(c);
    Problem pb;
    pb.grid.nx = c.nx;
    pb.quad = make_velocity_quadrature(c.nv);
    pb.params.eta = c.eta;
    pb.params.epsilon = c.epsilon;
    pb.params.sigma.assign(c.nx, c.sigma);
    pb.bc.periodic = c.periodic;
    pb.bc.left = c.left;
    pb.bc.right = c.right;
    return pb;
}

SchemeState build_initial_state(const CaseConfig& c, const Problem& pb) {
    const auto U = initial_moments(c, pb.grid);
    const auto th = thresholds(c);
    const int nx = pb.grid.nx;
    if (c.scheme == "ugks") {
        const int nv = static_cast<int>(pb.quad.size());
        KineticField f(nx, nv);
        for (int i = 0; i < nx; ++i) {
            const auto lam = m1::entropic_from_moments(U[i], th);
            if (!lam) continue;
            auto cell = f.cell(i);
            for (int k = 0; k < nv; ++k) cell[k] = std::exp(lam->alpha + lam->beta * pb.quad.nodes[k]);
        }
        sync_density(f, pb.quad);
        return f;
    }
    if (c.scheme == "ugks-m1" || c.scheme == "ugks-m1-o2") return M1Field{U};
    if (c.scheme == "ugks-m2") {
        M2Field m;
        m.U.resize(nx);
        for (int i = 0; i < nx; ++i) m.U[i] = {U[i].rho, U[i].j, m1::closure_q(U[i], th)};
        return m;
    }
    if (c.scheme == "diffusion-ref") {
        DiffusionState d;
        for (const auto& u : U) d.rho.push_back(u.rho);
        return d;
    }
    throw ConfigError("unknown scheme '" + c.scheme + "'");
}

Profile profile_of(const SchemeState& state, const Problem& pb, double t) {
    Profile p;
    p.t = t;
    const int nx = pb.grid.nx;
    for (int i = 0; i < nx; ++i) p.x.push_back(pb.grid.center(i));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KineticField>) {
                std::vector<double> g(s.nv);
                for (int i = 0; i < nx; ++i) {
                    const auto f = s.cell(i);
                    p.rho.push_back(s.rho[i]);
                    for (int k = 0; k < s.nv; ++k) g[k] = pb.quad.nodes[k] * f[k];
                    p.j.push_back(pb.quad.average(g));
                    for (int k = 0; k < s.nv; ++k) g[k] *= pb.quad.nodes[k];
                    p.q.push_back(pb.quad.average(g));
                }
            } else if constexpr (std::is_same_v<T, M1Field>) {
                for (const auto& u : s.U) {
                    p.rho.push_back(u.rho);
                    p.j.push_back(u.j);
                }
            } else if constexpr (std::is_same_v<T, M2Field>) {
                for (const auto& u : s.U) {
                    p.rho.push_back(u.rho);
                    p.j.push_back(u.j);
                    p.q.push_back(u.q);
                }
            } else {
                p.rho = s.rho;
            }
        },
        state);
    return p;
}

double mass_of(const SchemeState& state, const Problem& pb) {
    const auto p = profile_of(state, pb, 0.0);
    double m = 0.0;
    for (double r : p.rho) m += r;
    return m * pb.grid.dx();
}

double entropy_monitor(const SchemeState& state, const Problem& pb, const CaseConfig& c) {
    const double dx = pb.grid.dx();
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KineticField>) {
                return kinetic_entropy(s, pb);
            } else if constexpr (std::is_same_v<T, M1Field>) {
                return m1_entropy(s, dx, thresholds(c));
            } else if constexpr (std::is_same_v<T, M2Field>) {
                return m2_entropy(s, dx, m2_options(c));
            } else {
                // isotropic f = rho
                double h = 0.0;
                for (double r : s.rho)
                    if (r > 0.0) h += r * std::log(r) - r;
                return h * dx;
            }
        },
        state);
}

double realizability_margin(const SchemeState& state, const Problem& pb, const CaseConfig& c) {
    if (std::holds_alternative<DiffusionState>(state)) return quiet_nan();
    const auto p = profile_of(state, pb, 0.0);
    double margin = 1.0;
    for (std::size_t i = 0; i < p.rho.size(); ++i) {
        const double rho = p.rho[i];
        if (std::fabs(rho) < c.rho_eps) continue;
        if (rho < 0.0) return std::min(margin, rho);
        const double u = p.j[i] / rho;
        margin = std::min(margin, 1.0 - std::fabs(u));
        if (std::holds_alternative<M2Field>(state)) {
            const double r = p.q[i] / rho;
            margin = std::min({margin, r - u * u, 1.0 - r});
        }
    }
    return margin;
}

double scheme_dt(const CaseConfig& c, const Problem& pb) {
    const double dt = stable_dt(pb.grid, pb.params, c.cfl_safety);
    if (c.scheme == "diffusion-ref") return std::min(dt, c.cfl_safety * diffusion_stable_dt(pb));
    return dt;
}

SchemeState advance(const SchemeState& state, const Problem& pb, const CaseConfig& c, double dt) {
    return std::visit(
        [&](const auto& s) -> SchemeState {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KineticField>) {
                return step_kinetic(s, pb, dt);
            } else if constexpr (std::is_same_v<T, M1Field>) {
                return step_m1(s, pb, dt, m1_options(c));
            } else if constexpr (std::is_same_v<T, M2Field>) {
                return step_m2(s, pb, dt, m2_options(c));
            } else {
                return step_diffusion(s, pb, dt);
            }
        },
        state);
}

RunRecord run_case(const CaseConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const Problem pb = make_problem(c);
    SchemeState state = build_initial_state(c, pb);
    RunRecord rec;
    rec.config = c;
    rec.times = output_plan(c);

    const double base_dt = scheme_dt(c, pb);
    auto monitor = [&](long step, double t, double dt) {
        if (auto* m = std::get_if<M2Field>(&state)) m->lambda = invert_field(*m, m2_options(c));
        rec.monitors.push_back({step, t, dt, mass_of(state, pb), entropy_monitor(state, pb, c),
                                realizability_margin(state, pb, c)});
    };

    double t = 0.0;
    long step = 0;
    try {
        monitor(0, 0.0, 0.0);
        for (double target : rec.times) {
            while (t < target) {
                double dt = base_dt;
                // land exactly; also absorb a sliver that would leave a tiny last step
                const bool land = t + dt * (1.0 + 1e-9) >= target;
                if (land) dt = target - t;
                state = advance(state, pb, c, dt);
                t = land ? target : t + dt;
                monitor(++step, t, dt);
            }
            rec.profiles.push_back(profile_of(state, pb, target));
        }
    } catch (const NumericalError& e) {
        std::ostringstream os;
        os.precision(17);
        os << c.scheme << ", step " << step + 1 << " from t = " << t << ": " << e.what();
        throw NumericalError(os.str());
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

double l2_error(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    if (a.size() != b.size()) throw std::invalid_argument("l2_error: profiles differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s * dx);
}

std::vector<double> restrict_average(const std::vector<double>& fine, int nx_coarse) {
    const int nf = static_cast<int>(fine.size());
    if (nx_coarse <= 0 || nf % nx_coarse != 0)
        throw ConfigError("restriction needs the coarse mesh to divide the fine one");
    const int r = nf / nx_coarse;
    std::vector<double> out(nx_coarse, 0.0);
    for (int i = 0; i < nx_coarse; ++i) {
        for (int k = 0; k < r; ++k) out[i] += fine[i * r + k];
        out[i] /= r;
    }
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("least_squares_slope: need two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

ConvergenceResult convergence_study(const CaseConfig& tmpl, const std::vector<int>& meshes,
                                    int reference_nx) {
    if (meshes.size() < 2) throw ConfigError("convergence study needs at least two meshes");
    for (int m : meshes) {
        if (m < 3 || reference_nx % m != 0)
            throw ConfigError("mesh " + std::to_string(m) + " does not divide the reference mesh");
        if (reference_nx < 8 * m)
            throw ConfigError("reference mesh must be at least 8 times the finest mesh");
    }
    auto final_rho = [&](int nx) {
        CaseConfig c = tmpl;
        c.nx = nx;
        c.output_times = {c.t_end};
        return run_case(c).profiles.back().rho;
    };
    ConvergenceResult res;
    res.reference_nx = reference_nx;
    const auto ref = final_rho(reference_nx);
    std::vector<double> lx, ly;
    for (int m : meshes) {
        const double dx = 1.0 / m;
        const double e = l2_error(final_rho(m), restrict_average(ref, m), dx);
        res.meshes.push_back(m);
        res.dx.push_back(dx);
        res.errors.push_back(e);
        lx.push_back(std::log(dx));
        ly.push_back(std::log(e));
    }
    res.slope = least_squares_slope(lx, ly);
    return res;
}

std::string profile_csv(const Profile& p) {
    std::string out = "x,rho,j,q\n";
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        out += sci(p.x[i]) + "," + sci(p.rho[i]) + ",";
        if (!p.j.empty()) out += sci(p.j[i]);
        out += ",";
        if (!p.q.empty()) out += sci(p.q[i]);
        out += "\n";
    }
    return out;
}

std::string monitors_csv(const std::vector<MonitorRow>& rows) {
    std::string out = "step,t,dt,mass,entropy,min_margin\n";
    for (const auto& r : rows)
        out += std::to_string(r.step) + "," + sci(r.t) + "," + sci(r.dt) + "," + sci(r.mass) + "," +
               sci(r.entropy) + "," + sci(r.min_margin) + "\n";
    return out;
}

std::string profile_filename(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "profile_t%.10g.csv", t);
    return buf;
}

void write_run(const RunRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out << text;
    };
    put("config.txt", to_text(rec.config));
    for (const auto& p : rec.profiles) put(profile_filename(p.t), profile_csv(p));
    put("monitors.csv", monitors_csv(rec.monitors));
}

}  // namespace ugks
