#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "tailwalk/errors.hpp"
#include "tailwalk/propagate.hpp"

using namespace tailwalk;
using std::numbers::pi;

namespace {

TailedSystem lollipop(int n) { return attach_tail({make_complete(n), n}); }

TruncatedHamiltonian rabi() {
    TruncatedHamiltonian h;
    h.n = 2;
    h.tail_len = 0;
    h.mat.resize(2, 2);
    h.mat << 0, 1, 1, 0;
    return h;
}

// single vertex with a tail: the free half-line
TailedSystem half_line() {
    FiniteGraph g;
    g.n = 1;
    return attach_tail({g, 1});
}

QuantumState unit_at(int index, int size) {
    QuantumState s;
    s.amp = Eigen::VectorXcd::Zero(size);
    s.amp(index) = 1.0;
    return s;
}

}  // namespace

TEST_CASE("evolve basics") {
    TruncatedHamiltonian h = rabi();
    QuantumState psi = unit_at(0, 2);

    SUBCASE("t = 0 returns the state unchanged") {
        QuantumState out = evolve(h, psi, 0.0);
        CHECK(out.amp == psi.amp);
    }
    SUBCASE("half Rabi period flips e1 to e2 up to the global phase -i") {
        QuantumState out = evolve(h, psi, pi / 2);
        CHECK(std::abs(out.amp(0)) < 1e-14);
        CHECK(std::abs(out.amp(1) - std::complex<double>(0, -1)) < 1e-14);
    }
    SUBCASE("second-order Taylor oracle at small t") {
        auto taylor_err = [](const TruncatedHamiltonian& h, const QuantumState& psi, double t) {
            Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h.size(), h.size());
            Eigen::MatrixXcd approx = id - std::complex<double>(0, t) * h.mat -
                                      (t * t / 2) * (h.mat * h.mat).cast<std::complex<double>>();
            return (evolve(h, psi, t).amp - approx * psi.amp).norm();
        };
        CHECK(taylor_err(h, psi, 0.01) <= 1e-6);

        TruncatedHamiltonian path = assemble(half_line(), std::nullopt, 29);  // norm < 2
        QuantumState e1 = unit_at(0, 30);
        double err = taylor_err(path, e1, 0.01);
        CHECK(err <= 1e-6);
        // remainder is cubic in t
        double err_half = taylor_err(path, e1, 0.005);
        CHECK(err_half < err / 6.0);
    }
}

TEST_CASE("unitarity, composition, energy conservation") {
    TailedSystem sys = lollipop(16);
    TruncatedHamiltonian h = assemble(sys, OracleSpec{1, 16.0}, 48);
    Propagator prop(h);
    QuantumState psi = principal_state(sys.rooted.graph, h.size());
    double e0 = std::real(psi.amp.dot(h.mat.cast<std::complex<double>>() * psi.amp));
    for (double t : {0.1, 0.35, 1.2, 3.7}) {
        QuantumState evolved = prop.apply(psi, t);
        CHECK(std::abs(evolved.norm() - 1.0) < 1e-10);
        double e = std::real(evolved.amp.dot(h.mat.cast<std::complex<double>>() * evolved.amp));
        CHECK(std::abs(e - e0) < 1e-9);
        QuantumState two_step = prop.apply(prop.apply(psi, t), 0.4);
        CHECK((two_step.amp - prop.apply(psi, t + 0.4).amp).norm() < 1e-9);
    }
}

TEST_CASE("min_truncation formula") {
    CHECK(min_truncation(0.0, 256) == 64);
    CHECK(min_truncation(pi * 16.0 / 2.0, 256) == 165);
    CHECK(min_truncation(100.0, 64) == 464);
    CHECK_THROWS_AS(min_truncation(-1.0, 4), InputError);
}

TEST_CASE("leakage") {
    SUBCASE("freshly built principal state has none") {
        TailedSystem sys = lollipop(8);
        QuantumState z1 = principal_state(sys.rooted.graph, 8 + 20);
        CHECK(leakage(z1, 20) == 0.0);
    }
    SUBCASE("free half-line, t=5: L=84 is quiet, L=8 trips the monitor") {
        {
            TruncatedHamiltonian h = assemble(half_line(), std::nullopt, 84);
            QuantumState out = evolve(h, unit_at(0, h.size()), 5.0);
            CHECK(leakage(out, 84) <= 1e-8);
        }
        {
            TruncatedHamiltonian h = assemble(half_line(), std::nullopt, 8);
            QuantumState out = evolve(h, unit_at(0, h.size()), 5.0);
            CHECK(leakage(out, 8) > 1e-3);
        }
    }
    SUBCASE("no tail means no leakage") {
        QuantumState s = unit_at(1, 4);
        CHECK(leakage(s, 0) == 0.0);
    }
}

TEST_CASE("fidelity_curve") {
    SUBCASE("no oracle, no search: fidelity stays small") {
        TailedSystem sys = lollipop(256);
        std::vector<double> grid = uniform_grid(2 * pi / (2 * std::sqrt(256.0)), 128);
        FidelityCurve c = fidelity_curve(sys, std::nullopt, 1, grid);
        double worst = *std::max_element(c.values.begin(), c.values.end());
        CHECK(worst <= 0.2);
        for (double l : c.leakage) CHECK(l <= 1e-8);
    }
    SUBCASE("n = 2 degenerate lollipop still runs") {
        TailedSystem sys = lollipop(2);
        std::vector<double> grid = uniform_grid(2.0, 64);
        FidelityCurve c = fidelity_curve(sys, OracleSpec{1, 2.0}, 1, grid);
        CHECK(c.values.size() == 64);
        for (double v : c.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
    SUBCASE("grid must be valid") {
        TailedSystem sys = lollipop(4);
        CHECK_THROWS_AS(fidelity_curve(sys, std::nullopt, 1, {}), InputError);
        CHECK_THROWS_AS(fidelity_curve(sys, std::nullopt, 1, {1.0, 0.5}), InputError);
    }
}

TEST_CASE("peak") {
    SUBCASE("two-level flip: |sin t| peaks at pi/2 with value 1") {
        FidelityCurve c;
        c.times = uniform_grid(3.0, 200);
        for (double t : c.times) {
            c.values.push_back(std::abs(std::sin(t)));
            c.leakage.push_back(0.0);
        }
        PeakResult p = peak(c, [](double t) { return std::abs(std::sin(t)); });
        CHECK(std::abs(p.t_star - pi / 2) < 1e-6);
        CHECK(p.f_star == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(p.degenerate);
    }
    SUBCASE("all-zero curve is flagged") {
        FidelityCurve c;
        c.times = {0.0, 1.0, 2.0};
        c.values = {0.0, 0.0, 0.0};
        c.leakage = {0.0, 0.0, 0.0};
        CHECK(peak(c).degenerate);
    }
    SUBCASE("refinement beats the grid argmax on a real curve") {
        TailedSystem sys = lollipop(64);
        std::vector<double> grid = uniform_grid(2 * pi / 16.0, 48);  // deliberately coarse
        WalkRun run = run_walk(sys, OracleSpec{1, 64.0}, 1, grid);
        PeakResult coarse = peak(run.curve);
        PeakResult refined = peak(run.curve, [&](double t) { return run.sim.fidelity(t); });
        CHECK(refined.f_star >= coarse.f_star);
        CHECK(std::abs(refined.t_star - pi / 16.0) < 0.01);
    }
}

TEST_CASE("doubling the truncation leaves the curve unchanged when leakage is quiet") {
    const int n = 64;
    TailedSystem sys = lollipop(n);
    OracleSpec oracle{1, 64.0};
    double t_max = 2 * pi / (2 * std::sqrt(double(n)));
    std::vector<double> grid = uniform_grid(t_max, 64);
    int L = min_truncation(t_max, n);
    FidelityCurve a = WalkSimulator(sys, oracle, 1, L).curve(grid);
    FidelityCurve b = WalkSimulator(sys, oracle, 1, 2 * L).curve(grid);
    for (size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.leakage[i] <= 1e-8);
        CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-6);
    }
}

TEST_CASE("curve export format") {
    FidelityCurve c;
    c.times = {0.0, 0.5};
    c.values = {0.25, 0.5};
    c.leakage = {0.0, 1e-12};
    std::string csv = curve_csv(c);
    CHECK(csv.rfind("t,fidelity,leakage\n", 0) == 0);
    CHECK(csv.find("0.5,0.5,1e-12") != std::string::npos);
}
