// propagate.hpp — unitary evolution on truncated systems, fidelity curves,
// leakage monitoring, peak detection.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailwalk/operators.hpp"

namespace tailwalk {

struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;   // F(t) = |<e_w, psi(t)>|
    std::vector<double> leakage;  // boundary mass per time
};

// One eigendecomposition, reused for every evolution time.
class Propagator {
  public:
    explicit Propagator(const TruncatedHamiltonian& h);
    QuantumState apply(const QuantumState& psi, double t) const;
    const EigenSystem& eigensystem() const { return es_; }

  private:
    EigenSystem es_;
};

QuantumState evolve(const TruncatedHamiltonian& h, const QuantumState& psi, double t);

// Tail length for evolutions up to t_max: ceil(4 t_max) + 64 (ballistic front at
// speed <= 2 sites per unit time plus margin). Callers double and retry when the
// leakage monitor still fires, at most six times.
int min_truncation(double t_max, int n);

// Squared norm on the last `guard` tail sites (all of them if fewer).
double leakage(const QuantumState& psi, int tail_len, int guard = 16);

inline constexpr double kLeakageTol = 1e-8;
inline constexpr int kMaxDoublings = 6;

// Assembled walk instance: Hamiltonian, propagator, initial state z1, target w.
class WalkSimulator {
  public:
    WalkSimulator(const TailedSystem& sys, const std::optional<OracleSpec>& oracle, int w,
                  int tail_len);

    double fidelity(double t) const;
    double leakage_at(double t) const;
    FidelityCurve curve(const std::vector<double>& grid) const;
    QuantumState state_at(double t) const { return prop_.apply(z1_, t); }

    const TruncatedHamiltonian& hamiltonian() const { return h_; }
    const EigenSystem& eigensystem() const { return prop_.eigensystem(); }
    const QuantumState& initial_state() const { return z1_; }
    int target() const { return w_; }

  private:
    TruncatedHamiltonian h_;
    Propagator prop_;
    QuantumState z1_;
    int w_;
};

// Builds the simulator with leakage-safe truncation (doubling retries) and returns
// both it and the sampled curve.
struct WalkRun {
    WalkSimulator sim;
    FidelityCurve curve;
};
WalkRun run_walk(const TailedSystem& sys, const std::optional<OracleSpec>& oracle, int w,
                 const std::vector<double>& grid, double leak_tol = kLeakageTol);

FidelityCurve fidelity_curve(const TailedSystem& sys, const std::optional<OracleSpec>& oracle,
                             int w, const std::vector<double>& grid,
                             double leak_tol = kLeakageTol);

struct PeakResult {
    double t_star = 0.0;
    double f_star = 0.0;
    bool degenerate = false;  // all-zero curve
};

// Grid argmax; when an evaluator is supplied the bracketing cells are refined by
// golden-section search to 1e-6 in t.
PeakResult peak(const FidelityCurve& curve, const std::function<double(double)>& eval = {});

std::vector<double> uniform_grid(double t_max, int steps);
std::string curve_csv(const FidelityCurve& curve);

}  // namespace tailwalk
