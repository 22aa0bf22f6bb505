// experiments.hpp — search, obliviousness, and lower-bound experiment drivers with
// machine-readable reports.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailwalk/jost.hpp"
#include "tailwalk/propagate.hpp"

namespace tailwalk {

enum class Placement { CliqueVertex, Root, NoTail };

std::string to_string(Placement p);
std::optional<Placement> placement_from_string(const std::string& s);

struct SearchReport {
    int n = 0;
    double gamma = 0.0;
    Placement placement = Placement::CliqueVertex;
    double t_star = 0.0;
    double f_star = 0.0;
    double predicted_t = 0.0;  // pi / (2 sqrt(n)) for the unnormalized adjacency
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double overlap_initial = 0.0;
    double overlap_target = 0.0;
    double epsilon1 = 0.0;
    double x_plus = 0.0;  // NaN for no-tail placement
    double x_minus = 0.0;
};

// Grid defaults: 512 uniform points over [0, 2 * predicted_t].
inline constexpr int kDefaultTimeSteps = 512;

SearchReport run_search(int n, double gamma, Placement placement);

struct ObliviousReport {
    SearchReport clique_vertex, root, no_tail;
    double t_rel_root_vs_clique = 0.0;
    double t_rel_no_tail_vs_clique = 0.0;
    double t_rel_no_tail_vs_root = 0.0;
    double f_diff_root_vs_clique = 0.0;
    double f_diff_no_tail_vs_clique = 0.0;
    double f_diff_no_tail_vs_root = 0.0;
};

ObliviousReport run_oblivious(int n, double gamma);

struct LowerBoundReport {
    int n = 0;  // order of the base graph G
    int d = 0;
    double gamma = 0.0;
    double t0 = 0.0;  // measured fidelity-peak time
    double epsilon1 = 0.0;
    std::vector<double> times;
    std::vector<double> m_values;  // M(t) = ||psi_w(t) - psi_0(t)||^2
    double max_derivative = 0.0;   // max forward finite-difference slope of M
    double bound_rhs = 0.0;        // 2 gamma epsilon1
    double product = 0.0;          // gamma * t0 * epsilon1
    double m_at_t0 = 0.0;
    double lower_rhs = 0.0;  // 2 (1 - epsilon1)
    double lambda1 = 0.0;
    double beta1_z1_distance = 0.0;
    double fidelity_at_t0 = 0.0;
    double inv_gamma_epsilon1 = 0.0;
    std::vector<std::string> warnings;
};

// Cone of a d-regular graph with a tail at the conical vertex; compares the marked
// evolution of the top bound state beta1 against its free phase evolution.
LowerBoundReport run_lower_bound(const FiniteGraph& g, double gamma, int w);

struct SweepEntry {
    int n = 0;
    std::optional<SearchReport> report;
    std::string error;  // set when the run failed
};

struct SweepResult {
    std::string gamma_rule;
    Placement placement = Placement::CliqueVertex;
    std::vector<SweepEntry> entries;
};

// One run_search per n, executed in parallel (TAILWALK_THREADS caps the worker
// count); per-n failures are recorded and the sweep continues.
SweepResult sweep(const std::vector<int>& ns, const std::string& gamma_rule, Placement placement);

// "n", "n+c", "n-c", or a literal number.
double eval_gamma_rule(const std::string& rule, int n);

std::string report_json(const SearchReport& r);
std::string report_json(const ObliviousReport& r);
std::string report_json(const LowerBoundReport& r);
std::string sweep_json(const SweepResult& r);
std::string sweep_csv(const SweepResult& r);
std::string lower_bound_csv(const LowerBoundReport& r);

}  // namespace tailwalk
