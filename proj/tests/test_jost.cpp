#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "tailwalk/errors.hpp"
#include "tailwalk/jost.hpp"

using namespace tailwalk;

namespace {

TailedSystem lollipop(int n) { return attach_tail({make_complete(n), n}); }

EventuallyFreeJacobi marked_jacobi(int n, double gamma) {
    return reduce(lollipop(n), OracleSpec{1, gamma}).jacobi;
}

EventuallyFreeJacobi root_jacobi(int n, double gamma) {
    return reduce(lollipop(n), OracleSpec{n, gamma}).jacobi;
}

// Closed forms for y0 with the oracle on a clique vertex (quartic) and on the
// attachment vertex (cubic); ascending coefficients, overall scale arbitrary.
std::vector<double> quartic_closed_form(double n, double g) {
    return {1.0, 3 - n - g, (n - 3) * g + 5 - 2 * n, (n - 3) * g + 4 - 2 * n, 2 - n};
}
std::vector<double> cubic_closed_form(double n, double g) {
    return {1.0, 2 - n - g, (n - 2) * (g - 1), -g};
}

// max coefficient difference after normalizing both to leading coefficient 1
double normalized_diff(const LaurentPoly& p, std::vector<double> want) {
    REQUIRE(p.min_degree == 0);
    REQUIRE(p.coeffs.size() == want.size());
    double lead = p.coeffs.back();
    double wlead = want.back();
    double worst = 0.0;
    for (size_t i = 0; i < want.size(); ++i)
        worst = std::max(worst, std::abs(p.coeffs[i] / lead - want[i] / wlead));
    return worst;
}

EventuallyFreeJacobi free_jacobi() { return EventuallyFreeJacobi{1, {0.0}, {}}; }

}  // namespace

TEST_CASE("free matrix: y0 = 1, empty point spectrum") {
    std::vector<LaurentPoly> ys = jost_polynomials(free_jacobi());
    REQUIRE(ys.size() == 3);
    CHECK(ys[0].min_degree == 0);
    REQUIRE(ys[0].coeffs.size() == 1);
    CHECK(ys[0].coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(point_spectrum(free_jacobi()).states.empty());
}

TEST_CASE("closed forms at n=4, gamma=4") {
    SUBCASE("attachment-vertex cubic: -4x^3 + 6x^2 - 6x + 1") {
        LaurentPoly y0 = jost_polynomials(root_jacobi(4, 4.0))[0];
        CHECK(normalized_diff(y0, {1, -6, 6, -4}) < 1e-12);
    }
    SUBCASE("clique-vertex quartic: -2x^4 + 0x^3 + x^2 - 5x + 1") {
        LaurentPoly y0 = jost_polynomials(marked_jacobi(4, 4.0))[0];
        CHECK(normalized_diff(y0, {1, -5, 1, 0, -2}) < 1e-12);
    }
    SUBCASE("y1 for the rank-2 matrix is (x - gamma x^2)/sqrt(n-1)") {
        std::vector<LaurentPoly> ys = jost_polynomials(root_jacobi(4, 4.0));
        for (double x : {0.1, -0.37, 0.92})
            CHECK(ys[1](x) == doctest::Approx((x - 4.0 * x * x) / std::sqrt(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("closed-form match over n in {4,8,16,32,64}, gamma = n") {
    for (int n : {4, 8, 16, 32, 64}) {
        double g = n;
        CHECK(normalized_diff(jost_polynomials(marked_jacobi(n, g))[0],
                              quartic_closed_form(n, g)) < 1e-10);
        CHECK(normalized_diff(jost_polynomials(root_jacobi(n, g))[0],
                              cubic_closed_form(n, g)) < 1e-10);
    }
}

TEST_CASE("point spectrum of the marked lollipop, n=256") {
    EventuallyFreeJacobi j = marked_jacobi(256, 256.0);
    PointSpectrum ps = point_spectrum(j);
    REQUIRE(ps.states.size() == 2);
    CHECK(ps.grazing_roots.empty());
    // lambda sorted descending; lambda+ comes from the smaller root
    CHECK(ps.states[0].lambda > ps.states[1].lambda);
    CHECK(ps.states[0].x < ps.states[1].x);
    CHECK(std::abs(ps.states[0].lambda - (256.0 + 16.0)) < 3.0);
    CHECK(std::abs(ps.states[1].lambda - (256.0 - 16.0)) < 3.0);
    // roots sit at 1/n -+ n^{-3/2} up to o(n^{-3/2})
    double scale = std::pow(256.0, 1.5);
    CHECK(std::abs((ps.states[0].x - 1.0 / 256) * scale + 1.0) < 0.2);
    CHECK(std::abs((ps.states[1].x - 1.0 / 256) * scale - 1.0) < 0.2);

    SUBCASE("eigenvalues match the dense truncated matrix, L = 4n") {
        const int rows = j.horizon + 4 * 256;
        Eigen::VectorXd tdiag(rows), tsub(rows - 1);
        for (int k = 1; k <= rows; ++k) tdiag(k - 1) = j.b(k);
        for (int k = 1; k < rows; ++k) tsub(k - 1) = j.a(k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(tdiag, tsub, Eigen::EigenvaluesOnly);
        std::vector<double> outside;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) > 2.05) outside.push_back(es.eigenvalues()(i));
        REQUIRE(outside.size() == 2);
        CHECK(std::abs(outside[1] - ps.states[0].lambda) < 1e-6);
        CHECK(std::abs(outside[0] - ps.states[1].lambda) < 1e-6);
    }
    SUBCASE("y0 changes sign across each root (simplicity)") {
        LaurentPoly y0 = jost_polynomials(j)[0];
        for (const BoundState& s : ps.states) {
            double h = 1e-7;
            CHECK(y0(s.x - h) * y0(s.x + h) < 0);
        }
    }
}

TEST_CASE("attachment-vertex placement has the same root asymptotics") {
    PointSpectrum ps = point_spectrum(root_jacobi(256, 256.0));
    REQUIRE(ps.states.size() == 2);
    double scale = std::pow(256.0, 1.5);
    for (const BoundState& s : ps.states) {
        CHECK(s.x > 0);
        CHECK(s.x < 1);
        double dev = std::abs((s.x - 1.0 / 256) * scale);
        CHECK(dev > 0.5);
        CHECK(dev < 1.5);
    }
}

TEST_CASE("bound states satisfy the three-term recurrence and decay geometrically") {
    EventuallyFreeJacobi j = marked_jacobi(64, 64.0);
    PointSpectrum ps = point_spectrum(j);
    REQUIRE(ps.states.size() == 2);
    for (const BoundState& s : ps.states) {
        double max_y = 0.0;
        for (int k = 1; k <= j.horizon + 6; ++k) max_y = std::max(max_y, std::abs(s.component(k)));
        for (int k = 2; k <= j.horizon + 5; ++k) {
            double lhs = j.a(k - 1) * s.component(k - 1) + j.b(k) * s.component(k) +
                         j.a(k) * s.component(k + 1) - s.lambda * s.component(k);
            REQUIRE(std::abs(lhs) <= 1e-10 * max_y);
        }
        // row 1 holds because y0(x) = 0
        double row1 = (s.lambda - j.b(1)) * s.component(1) - j.a(1) * s.component(2);
        CHECK(std::abs(row1) <= 1e-10 * max_y);
        // geometric tail beyond the horizon
        for (int k = j.horizon; k <= j.horizon + 4; ++k) {
            CHECK(s.component(k + 1) / s.component(k) == doctest::Approx(s.x).epsilon(1e-10));
            CHECK(std::abs(s.component(k)) <= 1.0000001 * std::pow(std::abs(s.x), k));
        }
    }
}

TEST_CASE("normalized bound state is an eigenvector of the truncated operator") {
    EventuallyFreeJacobi j = marked_jacobi(32, 32.0);
    PointSpectrum ps = point_spectrum(j);
    for (const BoundState& s : ps.states) {
        const int rows = 64;
        Eigen::VectorXd v(rows);
        for (int k = 1; k <= rows; ++k) v(k - 1) = s.normalized(k);
        Eigen::VectorXd res = j.truncated(rows) * v - s.lambda * v;
        CHECK(res.norm() <= 1e-8);
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);  // geometric tail sum is already negligible
    }
}

TEST_CASE("sign profile is (+,-,+) at (-1, 1/n, 1) for gamma = n") {
    for (int n : {16, 64, 256}) {
        EventuallyFreeJacobi j = marked_jacobi(n, double(n));
        std::vector<double> probes{-1.0, 1.0 / n, 1.0};
        std::vector<int> signs = sign_profile(j, probes);
        CHECK(signs == std::vector<int>{1, -1, 1});
    }
    std::vector<double> probes{-1.0, 0.25, 1.0};
    CHECK(sign_profile(free_jacobi(), probes) == std::vector<int>{1, 1, 1});
}

TEST_CASE("bound subspace overlap") {
    EventuallyFreeJacobi j = marked_jacobi(64, 64.0);
    PointSpectrum ps = point_spectrum(j);
    REQUIRE(ps.states.size() == 2);

    SUBCASE("a bound state overlaps itself with weight 1") {
        const BoundState& s = ps.states[0];
        const int len = 40;
        Eigen::VectorXcd coords(len);
        for (int k = 1; k <= len; ++k) coords(k - 1) = s.normalized(k);
        CHECK(bound_subspace_overlap(coords, {s}) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("orthogonal state gives 0") {
        // difference of the two normalized states, orthogonalized against both
        const int len = 48;
        Eigen::VectorXcd a(len), b(len);
        for (int k = 1; k <= len; ++k) {
            a(k - 1) = ps.states[0].normalized(k);
            b(k - 1) = ps.states[1].normalized(k);
        }
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(len);
        v(5) = 1.0;
        v -= a.dot(v) * a / a.squaredNorm();
        v -= b.dot(v) * b / b.squaredNorm();
        v -= a.dot(v) * a / a.squaredNorm();
        CHECK(bound_subspace_overlap(v, ps.states) < 1e-12);
    }
    SUBCASE("the uniform interior vector concentrates on the bound pair as n grows") {
        double prev = 0.0;
        for (int n : {16, 64, 256}) {
            PointSpectrum sp = point_spectrum(marked_jacobi(n, double(n)));
            Eigen::VectorXcd coords = Eigen::VectorXcd::Zero(3);
            coords(1) = 1.0;  // jacobi index 2
            double ov = bound_subspace_overlap(coords, sp.states);
            CHECK(ov > 0.9);
            CHECK(ov <= 1.0 + 1e-12);
            CHECK(ov > prev);
            prev = ov;
        }
        CHECK(prev > 0.995);
    }
}

TEST_CASE("root deviations shrink toward -+1 monotonically") {
    double prev_minus = 1e9, prev_plus = 1e9;
    for (int n : {64, 256, 1024}) {
        PointSpectrum ps = point_spectrum(marked_jacobi(n, double(n)));
        REQUIRE(ps.states.size() == 2);
        double scale = std::pow(double(n), 1.5);
        double dev_minus = std::abs((ps.states[0].x - 1.0 / n) * scale + 1.0);
        double dev_plus = std::abs((ps.states[1].x - 1.0 / n) * scale - 1.0);
        CHECK(dev_minus < prev_minus);
        CHECK(dev_plus < prev_plus);
        prev_minus = dev_minus;
        prev_plus = dev_plus;
    }
}

TEST_CASE("single-site perturbation in closed form") {
    // y0 = 1 - b1 x: a bound state at x = 1/b1 exactly when |b1| > 1
    SUBCASE("negative diagonal gives a negative root") {
        PointSpectrum ps = point_spectrum(EventuallyFreeJacobi{1, {-3.0}, {}});
        REQUIRE(ps.states.size() == 1);
        CHECK(ps.states[0].x == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
        CHECK(ps.states[0].lambda == doctest::Approx(-10.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("sub-unit diagonal has no bound state") {
        CHECK(point_spectrum(EventuallyFreeJacobi{1, {0.5}, {}}).states.empty());
    }
}

TEST_CASE("random jacobi matrices: point spectrum agrees with the dense truncation") {
    std::mt19937 rng(987123);
    std::uniform_real_distribution<double> db(-3.0, 3.0), da(0.1, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        EventuallyFreeJacobi j;
        j.horizon = 1 + int(rng() % 5);
        for (int k = 0; k < j.horizon; ++k) j.diag.push_back(db(rng));
        for (int k = 0; k + 1 < j.horizon; ++k) j.offdiag.push_back(da(rng));
        PointSpectrum ps = point_spectrum(j);

        const int rows = j.horizon + 400;
        Eigen::VectorXd tdiag(rows), tsub(rows - 1);
        for (int k = 1; k <= rows; ++k) tdiag(k - 1) = j.b(k);
        for (int k = 1; k < rows; ++k) tsub(k - 1) = j.a(k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(tdiag, tsub, Eigen::EigenvaluesOnly);

        // avoid the band edge where truncation converges slowly: compare both
        // directions for |lambda| >= 2.2 only
        for (const BoundState& s : ps.states) {
            if (std::abs(s.lambda) < 2.2) continue;
            double best = 1e30;
            for (int i = 0; i < rows; ++i)
                best = std::min(best, std::abs(es.eigenvalues()(i) - s.lambda));
            REQUIRE(best < 1e-6);
        }
        for (int i = 0; i < rows; ++i) {
            double v = es.eigenvalues()(i);
            if (std::abs(v) < 2.2) continue;
            double best = 1e30;
            for (const BoundState& s : ps.states) best = std::min(best, std::abs(s.lambda - v));
            REQUIRE(best < 1e-6);
        }
    }
}

TEST_CASE("invalid jacobi matrices are rejected") {
    EventuallyFreeJacobi bad{2, {1.0, 2.0}, {-0.5}};
    CHECK_THROWS_AS(jost_polynomials(bad), InputError);
    EventuallyFreeJacobi mismatched{2, {1.0}, {}};
    CHECK_THROWS_AS(jost_polynomials(mismatched), InputError);
}

TEST_CASE("spectrum export holds states and polynomial coefficients") {
    EventuallyFreeJacobi j = marked_jacobi(16, 16.0);
    std::string out = spectrum_json(point_spectrum(j), jost_polynomials(j));
    CHECK(out.find("bound_states") != std::string::npos);
    CHECK(out.find("\"lambda\"") != std::string::npos);
    CHECK(out.find("polynomials") != std::string::npos);
}
