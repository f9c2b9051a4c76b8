#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ugks/config.hpp"
#include "ugks/errors.hpp"
#include "ugks/harness.hpp"
#include "ugks/m1_closure.hpp"

using namespace ugks;

namespace {

CaseConfig small(const std::string& name, const std::string& scheme, int nx = 20) {
    auto c = preset(name);
    c.scheme = scheme;
    c.nx = nx;
    c.nv = 8;
    return c;
}

void configure(const std::vector<std::string>& sets) {
    auto c = preset("convergence");
    for (const auto& s : sets) apply_assignment(c, s);
    validate(c);
}

struct Csv {
    std::string header;
    std::vector<std::vector<double>> rows;  // empty fields read as NaN
};

Csv read_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    Csv out;
    std::getline(in, out.header);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
        if (!line.empty() && line.back() == ',') row.push_back(NAN);
        out.rows.push_back(row);
    }
    return out;
}

bool same(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(b));
}

}  // namespace

TEST_CASE("presets") {
    CHECK(case_names().size() == 4);
    for (const auto& n : case_names()) CHECK_NOTHROW(validate(preset(n)));
    CHECK_THROWS_AS(preset("nope"), ConfigError);

    const auto conv = preset("convergence");
    CHECK(conv.periodic);
    CHECK(conv.initial.kind == InitialSpec::Kind::sine);
    CHECK(conv.initial.rho0 == 0.5);
    CHECK(conv.initial.amp == 0.25);
    CHECK(conv.initial.u0 == 0.4);
    CHECK(conv.nx == 200);
    CHECK(conv.nv == 50);

    const auto tr = preset("transport");
    CHECK_FALSE(tr.periodic);
    CHECK(tr.initial.kind == InitialSpec::Kind::zero);
    CHECK(format_boundary(tr.right) == "half_indicator(-1,1)");
    CHECK(format_boundary(tr.left) == "zero");
    CHECK(tr.t_end == 4.0);

    const auto im = preset("intermediate");
    CHECK(im.eta == 0.1);
    CHECK(im.epsilon == 0.1);

    const auto df = preset("diffusion");
    CHECK(df.eta == 1e-8);
    CHECK(df.epsilon == 1e-8);
    CHECK(format_boundary(df.left) == "half_indicator(+1,1)");
    CHECK(df.t_end == 2.0);
}

TEST_CASE("config text round-trips") {
    for (const auto& n : case_names()) {
        auto c = preset(n);
        c.scheme = "ugks-m2";
        c.clamp_u = true;
        CaseConfig back;
        apply_config_text(back, to_text(c));
        CHECK(to_text(back) == to_text(c));
    }
    CaseConfig c;
    apply_config_text(c, "# comment\n  nx = 40  # trailing\n\nleft = isotropic(0.5)\nbc=dirichlet\n");
    CHECK(c.nx == 40);
    CHECK_FALSE(c.periodic);
    CHECK(c.left.kind == BoundarySpec::Kind::isotropic);
    CHECK(c.left.value == 0.5);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(configure({"colour=red"}), ConfigError);
    CHECK_THROWS_AS(configure({"nx=abc"}), ConfigError);
    CHECK_THROWS_AS(configure({"nx=12.5"}), ConfigError);
    CHECK_THROWS_AS(configure({"nx"}), ConfigError);
    CHECK_THROWS_AS(configure({"nx=2"}), ConfigError);
    CHECK_THROWS_AS(configure({"nv=7"}), ConfigError);
    CHECK_THROWS_AS(configure({"eta=0"}), ConfigError);
    CHECK_THROWS_AS(configure({"bc=open"}), ConfigError);
    CHECK_THROWS_AS(configure({"left=half_indicator(2,1)"}), ConfigError);
    CHECK_THROWS_AS(configure({"left=isotropic(1"}), ConfigError);
    CHECK_THROWS_AS(configure({"left=isotropic(-1)"}), ConfigError);
    CHECK_THROWS_AS(configure({"initial=sine(0.5,0.6,0)"}), ConfigError);
    CHECK_THROWS_AS(configure({"initial=constant(1,1)"}), ConfigError);
    CHECK_THROWS_AS(configure({"scheme=pn"}), ConfigError);
    CHECK_THROWS_AS(configure({"cfl_safety=1.5"}), ConfigError);
    CHECK_THROWS_AS(configure({"limiter=minmod"}), ConfigError);
    CHECK_THROWS_AS(configure({"clamp_u=maybe"}), ConfigError);
    CHECK_THROWS_AS(configure({"output_times=0.1,-1"}), ConfigError);
    CaseConfig c;
    CHECK_THROWS_AS(apply_config_text(c, "nx = 10\nfoo = 1\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("output plan") {
    auto c = preset("convergence");
    c.t_end = 1.0;
    c.output_times = {0.5, 0.1, 2.0, 0.1, 1.0};
    const auto p = output_plan(c);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == 0.1);
    CHECK(p[1] == 0.5);
    CHECK(p[2] == 1.0);
}

TEST_CASE("initial states") {
    SUBCASE("sine cell average where sin vanishes") {
        auto c = small("convergence", "ugks-m1", 5);
        const auto pb = make_problem(c);
        const auto st = build_initial_state(c, pb);
        const auto& s = std::get<M1Field>(st);
        CHECK(s.U[2].rho == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(s.U[2].j == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("m2 starts on the M1 closure") {
        auto c = small("convergence", "ugks-m2", 10);
        const auto pb = make_problem(c);
        const auto st = build_initial_state(c, pb);
        const auto& s = std::get<M2Field>(st);
        for (const auto& u : s.U)
            CHECK(u.q == doctest::Approx(m1::closure_q({u.rho, u.j})).epsilon(1e-14));
    }
    SUBCASE("kinetic field carries the M1 moments") {
        auto c = small("convergence", "ugks", 10);
        c.nv = 50;
        const auto pb = make_problem(c);
        const auto sk = build_initial_state(c, pb);
        const auto& f = std::get<KineticField>(sk);
        auto d = c;
        d.scheme = "ugks-m1";
        const auto m = std::get<M1Field>(build_initial_state(d, pb));
        for (int i = 0; i < 10; ++i) {
            std::vector<double> vf(pb.quad.size());
            for (std::size_t k = 0; k < vf.size(); ++k) vf[k] = pb.quad.nodes[k] * f.cell(i)[k];
            CHECK(f.rho[i] == doctest::Approx(m.U[i].rho).epsilon(1e-12));
            CHECK(pb.quad.average(vf) == doctest::Approx(m.U[i].j).epsilon(1e-12));
        }
    }
    SUBCASE("zero initial data") {
        for (const auto& scheme : scheme_names()) {
            auto c = small("transport", scheme);
            const auto pb = make_problem(c);
            const auto p = profile_of(build_initial_state(c, pb), pb, 0.0);
            for (double r : p.rho) CHECK(r == 0.0);
            for (double j : p.j) CHECK(j == 0.0);
            for (double q : p.q) CHECK(q == 0.0);
        }
    }
    SUBCASE("constant(1,0) is f = 1") {
        auto c = small("convergence", "ugks");
        apply_assignment(c, "initial=constant(1,0)");
        const auto pb = make_problem(c);
        const auto sk = build_initial_state(c, pb);
        const auto& f = std::get<KineticField>(sk);
        for (double v : f.f) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("l2 error and restriction") {
    const std::vector<double> a{0.1, 0.4, -0.3, 2.0};
    CHECK(l2_error(a, a, 0.25) == 0.0);
    std::vector<double> b(10, 1.0), c(10, 1.3);
    CHECK(l2_error(b, c, 0.1) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(l2_error(a, b, 0.1), std::invalid_argument);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> N;
    std::vector<double> x(37), y(37);
    double direct = 0.0;
    for (int i = 0; i < 37; ++i) {
        x[i] = N(rng);
        y[i] = N(rng);
        direct += (x[i] - y[i]) * (x[i] - y[i]) / 37.0;
    }
    CHECK(l2_error(x, y, 1.0 / 37) == doctest::Approx(std::sqrt(direct)).epsilon(1e-13));

    std::vector<double> fine(12);
    for (int i = 0; i < 12; ++i) fine[i] = i;
    const auto coarse = restrict_average(fine, 3);
    REQUIRE(coarse.size() == 3);
    CHECK(coarse[0] == 1.5);
    CHECK(coarse[1] == 5.5);
    CHECK(coarse[2] == 9.5);
    CHECK_THROWS_AS(restrict_average(fine, 5), ConfigError);

    const std::vector<double> lx{std::log(0.1), std::log(0.05), std::log(0.025)};
    const std::vector<double> ly{std::log(3 * 0.01), std::log(3 * 0.0025), std::log(3 * 0.000625)};
    CHECK(least_squares_slope(lx, ly) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("runs land on output times and are deterministic") {
    for (const auto& scheme : scheme_names()) {
        CAPTURE(scheme);
        auto c = small("intermediate", scheme);
        c.t_end = 0.05;
        c.output_times = {0.013, 0.03};
        const auto r1 = run_case(c);
        const auto r2 = run_case(c);
        REQUIRE(r1.times == output_plan(c));
        REQUIRE(r1.profiles.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(r1.profiles[k].t == r1.times[k]);
            CHECK(r1.profiles[k].rho == r2.profiles[k].rho);
            CHECK(r1.profiles[k].rho.size() == 20);
        }
        CHECK(r1.monitors.front().step == 0);
        CHECK(r1.monitors.front().t == 0.0);
        CHECK(r1.monitors.back().t == 0.05);
        for (std::size_t k = 1; k < r1.monitors.size(); ++k)
            CHECK(r1.monitors[k].t > r1.monitors[k - 1].t);
    }
}

TEST_CASE("monitors") {
    auto c = small("convergence", "ugks", 40);
    c.t_end = 0.3;
    const auto r = run_case(c);
    const double m0 = r.monitors.front().mass;
    // the sampled ansatz carries the quadrature error of 8 nodes
    CHECK(m0 == doctest::Approx(0.5).epsilon(1e-6));
    for (std::size_t k = 1; k < r.monitors.size(); ++k) {
        CHECK(std::fabs(r.monitors[k].mass - m0) < 1e-13);
        CHECK(r.monitors[k].entropy <= r.monitors[k - 1].entropy + 1e-10);
        CHECK(r.monitors[k].min_margin > 0.0);
    }
    auto d = small("convergence", "diffusion-ref", 40);
    d.t_end = 0.01;
    CHECK(std::isnan(run_case(d).monitors.back().min_margin));
}

TEST_CASE("csv layout") {
    auto c = small("intermediate", "ugks-m1");
    c.t_end = 0.01;
    c.output_times = {};
    const auto r = run_case(c);
    const auto text = profile_csv(r.profiles.back());
    CHECK(text.rfind("x,rho,j,q\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 21);
    // M1 carries no q column values
    CHECK(text.find(",\n") != std::string::npos);
    const auto mon = monitors_csv(r.monitors);
    CHECK(mon.rfind("step,t,dt,mass,entropy,min_margin\n", 0) == 0);
    CHECK(std::count(mon.begin(), mon.end(), '\n') == static_cast<long>(r.monitors.size() + 1));

    const auto dir = std::filesystem::temp_directory_path() / "ugks_harness_test";
    std::filesystem::remove_all(dir);
    write_run(r, dir.string());
    CHECK(std::filesystem::exists(dir / "config.txt"));
    CHECK(std::filesystem::exists(dir / "monitors.csv"));
    CHECK(std::filesystem::exists(dir / profile_filename(0.01)));
    std::filesystem::remove_all(dir);
}

TEST_CASE("golden transport runs") {
    const std::filesystem::path root = std::filesystem::path(UGKS_SOURCE_DIR) / "tests" / "golden";
    for (const auto& scheme : scheme_names()) {
        CAPTURE(scheme);
        const auto dir = root / ("transport_" + scheme);
        CaseConfig c;
        apply_config_file(c, (dir / "config.txt").string());
        const auto r = run_case(c);
        const auto want = read_csv(dir / profile_filename(c.t_end));
        const auto got = read_csv([&] {
            const auto tmp = std::filesystem::temp_directory_path() / ("ugks_golden_" + scheme + ".csv");
            std::ofstream(tmp) << profile_csv(r.profiles.back());
            return tmp;
        }());
        CHECK(got.header == want.header);
        REQUIRE(got.rows.size() == want.rows.size());
        for (std::size_t i = 0; i < want.rows.size(); ++i) {
            REQUIRE(got.rows[i].size() == want.rows[i].size());
            for (std::size_t k = 0; k < want.rows[i].size(); ++k) CHECK(same(got.rows[i][k], want.rows[i][k]));
        }
    }
}

TEST_CASE("transport: kinetic and M1 densities draw together") {
    auto k = preset("transport");
    k.nx = 100;
    auto m = k;
    m.scheme = "ugks-m1";
    const auto rk = run_case(k), rm = run_case(m);
    const double dx = 1.0 / k.nx;
    std::vector<double> dist;
    for (std::size_t n = 0; n < rk.times.size(); ++n) {
        const std::vector<double> zero(k.nx, 0.0);
        dist.push_back(l2_error(rk.profiles[n].rho, rm.profiles[n].rho, dx) /
                       l2_error(rk.profiles[n].rho, zero, dx));
    }
    // times 0.1, 0.4, 1.0, 1.6, 4.0; relative distance falls once the front has formed
    REQUIRE(rk.times.size() == 5);
    for (std::size_t n = 2; n < dist.size(); ++n) CHECK(dist[n] < dist[n - 1]);
    CHECK(dist[4] < 0.5 * dist[1]);
}

TEST_CASE("scheme failures carry step and time") {
    auto c = small("convergence", "ugks", 50);
    apply_assignment(c, "eta=1e-2");
    apply_assignment(c, "epsilon=1e-2");
    apply_assignment(c, "initial=sine(0.5,0.25,0)");
    c.t_end = 0.05;
    try {
        run_case(c);
        FAIL("expected a numerical failure");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("ugks, step ") != std::string::npos);
        CHECK(msg.find("from t = ") != std::string::npos);
    }
}

TEST_CASE("convergence study") {
    auto c = preset("convergence");
    c.scheme = "ugks-m1";
    CHECK_THROWS_AS(convergence_study(c, {25, 50}, 300), ConfigError);
    CHECK_THROWS_AS(convergence_study(c, {25, 50}, 200), ConfigError);

    // near the diffusion regime the time error is O(dx^2) and the
    // reconstruction order shows
    auto d = preset("convergence");
    d.scheme = "ugks-m1-o2";
    apply_assignment(d, "eta=1e-3");
    apply_assignment(d, "epsilon=1e-3");
    apply_assignment(d, "initial=sine(0.5,0.25,0)");
    d.t_end = 0.05;
    d.output_times = {};
    const auto r = convergence_study(d, {25, 50, 100}, 800);
    CHECK(r.errors.size() == 3);
    CHECK(r.slope >= 1.8);
}
