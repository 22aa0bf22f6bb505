#include "tailwalk/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "tailwalk/errors.hpp"

namespace tailwalk {

Propagator::Propagator(const TruncatedHamiltonian& h) : es_(spectral_decompose(h)) {}

QuantumState Propagator::apply(const QuantumState& psi, double t) const {
    if (psi.amp.size() != es_.vectors.rows())
        throw InputError("evolve: state size does not match the Hamiltonian");
    if (t == 0.0) return psi;
    Eigen::VectorXcd c = es_.vectors.transpose() * psi.amp;
    for (int i = 0; i < c.size(); ++i)
        c(i) *= std::polar(1.0, -es_.values(i) * t);
    return QuantumState{es_.vectors * c};
}

QuantumState evolve(const TruncatedHamiltonian& h, const QuantumState& psi, double t) {
    return Propagator(h).apply(psi, t);
}

int min_truncation(double t_max, int /*n*/) {
    if (t_max < 0) throw InputError("min_truncation: negative time");
    return static_cast<int>(std::ceil(4.0 * t_max)) + 64;
}

double leakage(const QuantumState& psi, int tail_len, int guard) {
    if (tail_len <= 0) return 0.0;
    int g = std::min(guard, tail_len);
    if (g >= psi.amp.size()) throw InputError("leakage: guard exceeds state size");
    return psi.amp.tail(g).squaredNorm();
}

WalkSimulator::WalkSimulator(const TailedSystem& sys, const std::optional<OracleSpec>& oracle,
                             int w, int tail_len)
    : h_(assemble(sys, oracle, tail_len)),
      prop_(h_),
      z1_(principal_state(sys.rooted.graph, h_.size())),
      w_(w) {
    if (w < 1 || w > sys.rooted.graph.n) throw InputError("target vertex out of range");
    if (std::abs(z1_.norm() - 1.0) > 1e-12)
        throw NumericalError("initial state is not unit norm");
}

double WalkSimulator::fidelity(double t) const {
    return std::abs(prop_.apply(z1_, t).amp(w_ - 1));
}

double WalkSimulator::leakage_at(double t) const {
    return leakage(prop_.apply(z1_, t), h_.tail_len);
}

FidelityCurve WalkSimulator::curve(const std::vector<double>& grid) const {
    FidelityCurve c;
    c.times = grid;
    c.values.reserve(grid.size());
    c.leakage.reserve(grid.size());
    for (double t : grid) {
        QuantumState psi = prop_.apply(z1_, t);
        c.values.push_back(std::abs(psi.amp(w_ - 1)));
        c.leakage.push_back(leakage(psi, h_.tail_len));
    }
    return c;
}

WalkRun run_walk(const TailedSystem& sys, const std::optional<OracleSpec>& oracle, int w,
                 const std::vector<double>& grid, double leak_tol) {
    if (grid.empty()) throw InputError("run_walk: empty time grid");
    if (std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<double>()) != grid.end())
        throw InputError("run_walk: time grid must be strictly increasing");
    double t_max = grid.back();
    int tail = sys.tail_present ? min_truncation(t_max, sys.rooted.graph.n) : 0;
    for (int attempt = 0;; ++attempt) {
        WalkSimulator sim(sys, oracle, w, tail);
        FidelityCurve c = sim.curve(grid);
        double worst = c.leakage.empty() ? 0.0
                                         : *std::max_element(c.leakage.begin(), c.leakage.end());
        if (worst <= leak_tol || !sys.tail_present)
            return WalkRun{std::move(sim), std::move(c)};
        if (attempt == kMaxDoublings)
            throw TruncationError("run_walk: leakage above tolerance after " +
                                  std::to_string(kMaxDoublings) + " doublings");
        tail *= 2;
    }
}

FidelityCurve fidelity_curve(const TailedSystem& sys, const std::optional<OracleSpec>& oracle,
                             int w, const std::vector<double>& grid, double leak_tol) {
    return run_walk(sys, oracle, w, grid, leak_tol).curve;
}

PeakResult peak(const FidelityCurve& curve, const std::function<double(double)>& eval) {
    if (curve.times.empty() || curve.values.empty())
        throw InputError("peak: empty curve");
    auto it = std::max_element(curve.values.begin(), curve.values.end());
    size_t i = static_cast<size_t>(it - curve.values.begin());
    PeakResult r{curve.times[i], curve.values[i], false};
    if (r.f_star < 1e-15) {
        r.degenerate = true;
        return r;
    }
    if (!eval) return r;

    double a = curve.times[i > 0 ? i - 1 : i];
    double b = curve.times[i + 1 < curve.times.size() ? i + 1 : i];
    if (b - a <= 1e-6) return r;
    constexpr double gr = 0.6180339887498949;  // golden ratio - 1
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > 1e-6) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    double t = 0.5 * (a + b);
    double f = eval(t);
    if (f >= r.f_star) {
        r.t_star = t;
        r.f_star = f;
    }
    return r;
}

std::vector<double> uniform_grid(double t_max, int steps) {
    if (steps < 2 || t_max <= 0) throw InputError("uniform_grid: need t_max > 0 and >= 2 steps");
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) g[i] = t_max * (static_cast<double>(i) / (steps - 1));
    return g;
}

std::string curve_csv(const FidelityCurve& curve) {
    std::string out = "t,fidelity,leakage\n";
    char buf[128];
    for (size_t i = 0; i < curve.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", curve.times[i], curve.values[i],
                      curve.leakage[i]);
        out += buf;
    }
    return out;
}

}  // namespace tailwalk
