#include "tailwalk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "json.hpp"

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double predicted_peak_time(int n) { return std::numbers::pi / (2.0 * std::sqrt(double(n))); }

QuantumState basis_state(int index, int size) {
    QuantumState s;
    s.amp = Eigen::VectorXcd::Zero(size);
    s.amp(index - 1) = 1.0;
    return s;
}

// Bound state mapped back to vertex coordinates, truncated at `size` and renormalized.
QuantumState embed_bound_state(const GolinskiiDecomposition& dec, const BoundState& s, int size) {
    const int n = static_cast<int>(dec.graph_basis.rows());
    const int m = dec.graph_dim();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd head(m);
    for (int k = 1; k <= m; ++k) head(k - 1) = s.component(k);
    v.head(n) = dec.graph_basis * head;
    for (int i = 0; i < size - n; ++i) v(n + i) = s.component(m + 1 + i);
    v /= v.norm();
    QuantumState out;
    out.amp = v.cast<std::complex<double>>();
    return out;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

nlohmann::ordered_json search_json_obj(const SearchReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = "search";
    j["n"] = r.n;
    j["gamma"] = r.gamma;
    j["placement"] = to_string(r.placement);
    j["t_star"] = r.t_star;
    j["F_star"] = r.f_star;
    j["lambda_plus"] = r.lambda_plus;
    j["lambda_minus"] = r.lambda_minus;
    j["overlap_initial"] = r.overlap_initial;
    j["overlap_target"] = r.overlap_target;
    j["epsilon1"] = r.epsilon1;
    j["predicted_t"] = r.predicted_t;
    j["x_plus"] = r.x_plus;
    j["x_minus"] = r.x_minus;
    return j;
}

}  // namespace

std::string to_string(Placement p) {
    switch (p) {
        case Placement::CliqueVertex: return "clique-vertex";
        case Placement::Root: return "root";
        case Placement::NoTail: return "no-tail";
    }
    return "?";
}

std::optional<Placement> placement_from_string(const std::string& s) {
    if (s == "clique-vertex") return Placement::CliqueVertex;
    if (s == "root") return Placement::Root;
    if (s == "no-tail") return Placement::NoTail;
    return std::nullopt;
}

double eval_gamma_rule(const std::string& rule, int n) {
    if (rule.empty()) throw InputError("empty gamma rule");
    if (rule == "n") return double(n);
    if (rule[0] == 'n' && rule.size() > 1 && (rule[1] == '+' || rule[1] == '-')) {
        size_t pos = 0;
        double c = 0;
        try {
            c = std::stod(rule.substr(2), &pos);
        } catch (const std::exception&) {
            throw InputError("bad gamma rule '" + rule + "'");
        }
        if (pos != rule.size() - 2) throw InputError("bad gamma rule '" + rule + "'");
        return rule[1] == '+' ? n + c : n - c;
    }
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(rule, &pos);
    } catch (const std::exception&) {
        throw InputError("bad gamma rule '" + rule + "'");
    }
    if (pos != rule.size()) throw InputError("bad gamma rule '" + rule + "'");
    return v;
}

SearchReport run_search(int n, double gamma, Placement placement) {
    if (n < 4) throw InputError("run_search: n must be at least 4");
    if (!(gamma > 0)) throw InputError("run_search: gamma must be positive");

    RootedGraph rg{make_complete(n), n};
    const int w = placement == Placement::Root ? n : 1;
    TailedSystem sys =
        placement == Placement::NoTail ? without_tail(rg) : attach_tail(rg);
    OracleSpec oracle{w, gamma};

    SearchReport r;
    r.n = n;
    r.gamma = gamma;
    r.placement = placement;
    r.predicted_t = predicted_peak_time(n);
    r.epsilon1 = 1.0 / std::sqrt(double(n));

    std::vector<double> grid = uniform_grid(2.0 * r.predicted_t, kDefaultTimeSteps);
    WalkRun run = run_walk(sys, oracle, w, grid);
    PeakResult pk = peak(run.curve, [&](double t) { return run.sim.fidelity(t); });
    if (pk.degenerate) throw NumericalError("run_search: degenerate (all-zero) fidelity curve");
    r.t_star = pk.t_star;
    r.f_star = pk.f_star;

    if (placement == Placement::NoTail) {
        const EigenSystem& es = run.sim.eigensystem();
        const int last = static_cast<int>(es.values.size()) - 1;
        r.lambda_plus = es.values(last);
        r.lambda_minus = es.values(last - 1);
        r.x_plus = kNaN;
        r.x_minus = kNaN;
        auto top2_overlap = [&](const Eigen::VectorXcd& v) {
            double o = 0.0;
            for (int j : {last, last - 1}) {
                std::complex<double> ip = es.vectors.col(j).cast<std::complex<double>>().dot(v);
                o += std::norm(ip);
            }
            return o;
        };
        r.overlap_initial = top2_overlap(run.sim.initial_state().amp);
        r.overlap_target = top2_overlap(basis_state(w, n).amp);
        return r;
    }

    GolinskiiDecomposition dec = reduce(sys, oracle);
    PointSpectrum ps = point_spectrum(dec.jacobi);
    r.lambda_plus = ps.states.empty() ? kNaN : ps.states.front().lambda;
    r.lambda_minus = ps.states.size() < 2 ? kNaN : ps.states[1].lambda;
    if (ps.states.empty()) {
        r.x_plus = r.x_minus = kNaN;
    } else {
        auto [mn, mx] = std::minmax_element(
            ps.states.begin(), ps.states.end(),
            [](const BoundState& a, const BoundState& b) { return a.x < b.x; });
        r.x_minus = mn->x;
        r.x_plus = mx->x;
    }
    QuantumState z1 = principal_state(rg.graph, n);
    r.overlap_initial = bound_subspace_overlap(to_jacobi_coords(z1, dec).jacobi, ps.states);
    r.overlap_target =
        bound_subspace_overlap(to_jacobi_coords(basis_state(w, n), dec).jacobi, ps.states);
    return r;
}

ObliviousReport run_oblivious(int n, double gamma) {
    if (n < 8) throw InputError("run_oblivious: n must be at least 8");
    ObliviousReport r;
    r.clique_vertex = run_search(n, gamma, Placement::CliqueVertex);
    r.root = run_search(n, gamma, Placement::Root);
    r.no_tail = run_search(n, gamma, Placement::NoTail);
    r.t_rel_root_vs_clique = rel_diff(r.root.t_star, r.clique_vertex.t_star);
    r.t_rel_no_tail_vs_clique = rel_diff(r.no_tail.t_star, r.clique_vertex.t_star);
    r.t_rel_no_tail_vs_root = rel_diff(r.no_tail.t_star, r.root.t_star);
    r.f_diff_root_vs_clique = std::abs(r.root.f_star - r.clique_vertex.f_star);
    r.f_diff_no_tail_vs_clique = std::abs(r.no_tail.f_star - r.clique_vertex.f_star);
    r.f_diff_no_tail_vs_root = std::abs(r.no_tail.f_star - r.root.f_star);
    return r;
}

LowerBoundReport run_lower_bound(const FiniteGraph& g, double gamma, int w) {
    validate(g);
    if (!is_regular(g) || !g.loops.empty())
        throw InputError("run_lower_bound: the base graph must be regular and loop-free");
    if (w < 1 || w > g.n) throw InputError("run_lower_bound: marked vertex out of range");
    if (!(gamma > 0)) throw InputError("run_lower_bound: gamma must be positive");

    LowerBoundReport r;
    r.n = g.n;
    r.d = g.degree(1);
    r.gamma = gamma;
    if (double(r.d) < 2.0 * std::sqrt(double(g.n)))
        r.warnings.push_back("degree " + std::to_string(r.d) + " is below 2*sqrt(n); the bound regime needs d >> sqrt(n)");

    RootedGraph cone = make_cone(g);
    TailedSystem sys = attach_tail(cone);
    const int n_cone = cone.graph.n;

    GolinskiiDecomposition dec = reduce(sys, std::nullopt);
    PointSpectrum ps = point_spectrum(dec.jacobi);
    if (ps.states.empty())
        throw NumericalError("run_lower_bound: unmarked operator has no bound state");
    const BoundState& top = ps.states.front();
    r.lambda1 = top.lambda;

    const double t_pred = predicted_peak_time(n_cone);
    std::vector<double> grid = uniform_grid(2.0 * t_pred, kDefaultTimeSteps);
    int tail = min_truncation(grid.back(), n_cone);

    for (int attempt = 0;; ++attempt) {
        const int size = n_cone + tail;
        TruncatedHamiltonian hw = assemble(sys, OracleSpec{w, gamma}, tail);
        Propagator prop(hw);
        QuantumState beta1 = embed_bound_state(dec, top, size);
        QuantumState z1 = principal_state(g, size);
        r.epsilon1 = std::abs(z1.amp(w - 1));
        r.beta1_z1_distance = (beta1.amp - z1.amp).norm();

        r.times = grid;
        r.m_values.clear();
        r.m_values.reserve(grid.size());
        std::vector<double> fid(grid.size()), leak(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) {
            QuantumState psi = prop.apply(beta1, grid[i]);
            fid[i] = std::abs(psi.amp(w - 1));
            leak[i] = leakage(psi, tail);
            Eigen::VectorXcd free_phase =
                std::polar(1.0, -r.lambda1 * grid[i]) * beta1.amp;
            r.m_values.push_back((psi.amp - free_phase).squaredNorm());
        }
        double worst = *std::max_element(leak.begin(), leak.end());
        if (worst > kLeakageTol) {
            if (attempt == kMaxDoublings)
                throw TruncationError("run_lower_bound: leakage above tolerance after doublings");
            tail *= 2;
            continue;
        }

        FidelityCurve curve{grid, fid, leak};
        PeakResult pk = peak(curve, [&](double t) { return std::abs(prop.apply(beta1, t).amp(w - 1)); });
        r.t0 = pk.t_star;
        r.fidelity_at_t0 = pk.f_star;
        {
            QuantumState psi = prop.apply(beta1, r.t0);
            Eigen::VectorXcd free_phase = std::polar(1.0, -r.lambda1 * r.t0) * beta1.amp;
            r.m_at_t0 = (psi.amp - free_phase).squaredNorm();
        }
        break;
    }

    r.max_derivative = 0.0;
    for (size_t i = 0; i + 1 < r.times.size(); ++i) {
        double slope = (r.m_values[i + 1] - r.m_values[i]) / (r.times[i + 1] - r.times[i]);
        r.max_derivative = std::max(r.max_derivative, slope);
    }
    r.bound_rhs = 2.0 * gamma * r.epsilon1;
    r.product = gamma * r.t0 * r.epsilon1;
    r.lower_rhs = 2.0 * (1.0 - r.epsilon1);
    r.inv_gamma_epsilon1 = 1.0 / (gamma * r.epsilon1);
    return r;
}

SweepResult sweep(const std::vector<int>& ns, const std::string& gamma_rule,
                  Placement placement) {
    if (ns.empty()) throw InputError("sweep: empty n list");
    if (std::adjacent_find(ns.begin(), ns.end(), std::greater_equal<int>()) != ns.end())
        throw InputError("sweep: n list must be strictly increasing");

    SweepResult res;
    res.gamma_rule = gamma_rule;
    res.placement = placement;
    res.entries.resize(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) res.entries[i].n = ns[i];

    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("TAILWALK_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ns.size())));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= ns.size()) return;
            try {
                res.entries[i].report =
                    run_search(ns[i], eval_gamma_rule(gamma_rule, ns[i]), placement);
            } catch (const std::exception& e) {
                res.entries[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return res;
}

std::string report_json(const SearchReport& r) { return search_json_obj(r).dump(2) + "\n"; }

std::string report_json(const ObliviousReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = "oblivious";
    j["n"] = r.clique_vertex.n;
    j["gamma"] = r.clique_vertex.gamma;
    j["reports"] = {search_json_obj(r.clique_vertex), search_json_obj(r.root),
                    search_json_obj(r.no_tail)};
    j["t_star_rel_diff"] = {{"root_vs_clique_vertex", r.t_rel_root_vs_clique},
                            {"no_tail_vs_clique_vertex", r.t_rel_no_tail_vs_clique},
                            {"no_tail_vs_root", r.t_rel_no_tail_vs_root}};
    j["F_star_diff"] = {{"root_vs_clique_vertex", r.f_diff_root_vs_clique},
                        {"no_tail_vs_clique_vertex", r.f_diff_no_tail_vs_clique},
                        {"no_tail_vs_root", r.f_diff_no_tail_vs_root}};
    return j.dump(2) + "\n";
}

std::string report_json(const LowerBoundReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = "lowerbound";
    j["n"] = r.n;
    j["d"] = r.d;
    j["gamma"] = r.gamma;
    j["t0"] = r.t0;
    j["epsilon1"] = r.epsilon1;
    j["m_at_t0"] = r.m_at_t0;
    j["lower_rhs"] = r.lower_rhs;
    j["max_derivative"] = r.max_derivative;
    j["bound_rhs"] = r.bound_rhs;
    j["product"] = r.product;
    j["lambda1"] = r.lambda1;
    j["beta1_z1_distance"] = r.beta1_z1_distance;
    j["fidelity_at_t0"] = r.fidelity_at_t0;
    j["inv_gamma_epsilon1"] = r.inv_gamma_epsilon1;
    j["warnings"] = r.warnings;
    j["m_curve"] = {{"t", r.times}, {"m", r.m_values}};
    return j.dump(2) + "\n";
}

namespace {

void append_sweep_row(std::string& out, const SweepEntry& e, const SweepResult& r) {
    char buf[512];
    if (!e.report) {
        std::string msg = e.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::snprintf(buf, sizeof buf, "%d,,%s,,,,,,,,,,,,\"error: %s\"\n", e.n,
                      to_string(r.placement).c_str(), msg.c_str());
        out += buf;
        return;
    }
    const SearchReport& s = *e.report;
    double rootn = std::sqrt(double(s.n));
    double xpd = (s.x_plus - 1.0 / s.n) * rootn * rootn * rootn;
    double xmd = (s.x_minus - 1.0 / s.n) * rootn * rootn * rootn;
    std::snprintf(buf, sizeof buf,
                  "%d,%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,ok\n",
                  s.n, s.gamma, to_string(s.placement).c_str(), s.t_star, s.f_star, s.predicted_t,
                  s.lambda_plus, s.lambda_minus, s.overlap_initial, s.overlap_target, s.epsilon1,
                  s.t_star * rootn, xpd, xmd);
    out += buf;
}

}  // namespace

std::string sweep_csv(const SweepResult& r) {
    std::string out =
        "n,gamma,placement,t_star,F_star,predicted_t,lambda_plus,lambda_minus,"
        "overlap_initial,overlap_target,epsilon1,t_star_sqrt_n,x_plus_dev,x_minus_dev,status\n";
    for (const SweepEntry& e : r.entries) append_sweep_row(out, e, r);
    return out;
}

std::string sweep_json(const SweepResult& r) {
    nlohmann::ordered_json j;
    j["experiment"] = "sweep";
    j["gamma_rule"] = r.gamma_rule;
    j["placement"] = to_string(r.placement);
    j["entries"] = nlohmann::ordered_json::array();
    for (const SweepEntry& e : r.entries) {
        if (e.report) {
            nlohmann::ordered_json obj = search_json_obj(*e.report);
            double rootn = std::sqrt(double(e.report->n));
            obj["t_star_sqrt_n"] = e.report->t_star * rootn;
            obj["x_plus_dev"] = (e.report->x_plus - 1.0 / e.report->n) * rootn * rootn * rootn;
            obj["x_minus_dev"] = (e.report->x_minus - 1.0 / e.report->n) * rootn * rootn * rootn;
            obj["status"] = "ok";
            j["entries"].push_back(std::move(obj));
        } else {
            j["entries"].push_back({{"n", e.n}, {"status", "error"}, {"error", e.error}});
        }
    }
    return j.dump(2) + "\n";
}

std::string lower_bound_csv(const LowerBoundReport& r) {
    std::string out = "t,M\n";
    char buf[96];
    for (size_t i = 0; i < r.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", r.times[i], r.m_values[i]);
        out += buf;
    }
    return out;
}

}  // namespace tailwalk
