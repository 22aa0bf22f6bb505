// tailwalk — CLI front end: build systems, run experiments, emit CSV/JSON/SVG.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tailwalk/errors.hpp"
#include "tailwalk/experiments.hpp"
#include "tailwalk/svg.hpp"

namespace {

using namespace tailwalk;

// Write-temp-then-rename so partially written files are never observed.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f) throw InputError("cannot write output file '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Placement parse_placement(const std::string& s) {
    auto p = placement_from_string(s);
    if (!p) throw InputError("unknown placement '" + s + "' (clique-vertex | root | no-tail)");
    return *p;
}

// empty string means the subcommand default
void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
    if (fmt.empty()) return;
    for (const char* a : allowed)
        if (fmt == a) return;
    throw InputError("unsupported format '" + fmt + "'");
}

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw InputError("bad n list entry '" + tok + "'");
        }
    }
    return out;
}

struct Options {
    int n = 0;
    std::string gamma = "n";
    std::string placement = "clique-vertex";
    std::string n_list;
    std::string input;
    std::string output;
    std::string format;
    int w = 0;
    double t_max = 0.0;
    int t_steps = kDefaultTimeSteps;
    int truncation = 0;
    double leak_tol = kLeakageTol;
};

// (system, oracle, target) from either the generated clique family or a graph file.
struct BuiltSystem {
    TailedSystem sys;
    std::optional<OracleSpec> oracle;
    int w = 0;
    int n = 0;
};

BuiltSystem build_system(const Options& o, Placement p) {
    BuiltSystem b;
    if (!o.input.empty()) {
        RootedGraph rg = parse_graph(read_file(o.input));
        b.n = rg.graph.n;
        b.w = o.w > 0 ? o.w : (p == Placement::Root ? rg.root : 1);
        b.sys = (p == Placement::NoTail) ? without_tail(rg) : attach_tail(rg);
    } else {
        if (o.n < 2) throw InputError("need --n >= 2 (or --input FILE)");
        RootedGraph rg{make_complete(o.n), o.n};
        b.n = o.n;
        b.w = o.w > 0 ? o.w : (p == Placement::Root ? o.n : 1);
        b.sys = (p == Placement::NoTail) ? without_tail(rg) : attach_tail(rg);
    }
    double gamma = eval_gamma_rule(o.gamma, b.n);
    if (gamma > 0) b.oracle = OracleSpec{b.w, gamma};
    return b;
}

int cmd_search(const Options& o) {
    require_format(o.format, {"json", "svg"});
    Placement p = parse_placement(o.placement);
    SearchReport r = run_search(o.n, eval_gamma_rule(o.gamma, o.n), p);
    if (o.format == "svg") {
        BuiltSystem b = build_system(o, p);
        std::vector<double> grid = uniform_grid(2.0 * r.predicted_t, o.t_steps);
        FidelityCurve c = fidelity_curve(b.sys, b.oracle, b.w, grid);
        write_output(o.output, render_curve_svg(c, r.predicted_t));
    } else {
        write_output(o.output, report_json(r));
    }
    return 0;
}

int cmd_oblivious(const Options& o) {
    ObliviousReport r = run_oblivious(o.n, eval_gamma_rule(o.gamma, o.n));
    write_output(o.output, report_json(r));
    return 0;
}

int cmd_spectrum(const Options& o) {
    require_format(o.format, {"json", "svg"});
    Placement p = parse_placement(o.placement);
    if (p == Placement::NoTail) throw InputError("spectrum needs a tailed placement");
    BuiltSystem b = build_system(o, p);
    GolinskiiDecomposition dec = reduce(b.sys, b.oracle);
    PointSpectrum ps = point_spectrum(dec.jacobi);
    if (o.format == "svg")
        write_output(o.output, render_spectrum_svg(ps.states));
    else
        write_output(o.output, spectrum_json(ps, jost_polynomials(dec.jacobi)));
    return 0;
}

int cmd_reduce(const Options& o) {
    Placement p = parse_placement(o.placement);
    if (p == Placement::NoTail) throw InputError("reduce needs a tailed placement");
    BuiltSystem b = build_system(o, p);
    write_output(o.output, decomposition_json(reduce(b.sys, b.oracle)));
    return 0;
}

int cmd_lowerbound(const Options& o) {
    require_format(o.format, {"json", "csv", "svg"});
    FiniteGraph g;
    int n_sys = 0;
    if (!o.input.empty()) {
        RootedGraph rg = parse_graph(read_file(o.input));
        g = rg.graph;
        n_sys = g.n + 1;
    } else {
        if (o.n < 3) throw InputError("need --n >= 3 (cone order) or --input FILE");
        g = make_complete(o.n - 1);
        n_sys = o.n;
    }
    LowerBoundReport r = run_lower_bound(g, eval_gamma_rule(o.gamma, n_sys), o.w > 0 ? o.w : 1);
    for (const std::string& warn : r.warnings) std::cerr << "warning: " << warn << "\n";
    if (o.format == "csv")
        write_output(o.output, lower_bound_csv(r));
    else if (o.format == "svg")
        write_output(o.output, render_curve_svg(r.times, r.m_values, r.t0, "M(t)"));
    else
        write_output(o.output, report_json(r));
    return 0;
}

int cmd_sweep(const Options& o) {
    require_format(o.format, {"csv", "json"});
    SweepResult r = sweep(parse_n_list(o.n_list), o.gamma, parse_placement(o.placement));
    write_output(o.output, o.format == "json" ? sweep_json(r) : sweep_csv(r));
    return 0;
}

int cmd_evolve(const Options& o) {
    require_format(o.format, {"csv", "svg"});
    Placement p = parse_placement(o.placement);
    BuiltSystem b = build_system(o, p);
    double t_max = o.t_max > 0 ? o.t_max
                               : 2.0 * std::numbers::pi / (2.0 * std::sqrt(double(b.n)));
    std::vector<double> grid = uniform_grid(t_max, o.t_steps);
    FidelityCurve c;
    if (o.truncation > 0) {
        WalkSimulator sim(b.sys, b.oracle, b.w, b.sys.tail_present ? o.truncation : 0);
        c = sim.curve(grid);
    } else {
        c = fidelity_curve(b.sys, b.oracle, b.w, grid, o.leak_tol);
    }
    if (o.format == "svg")
        write_output(o.output, render_curve_svg(c, std::numeric_limits<double>::quiet_NaN()));
    else
        write_output(o.output, curve_csv(c));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-time quantum-walk spatial search on graphs with semi-infinite tails"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool needs_n) {
        if (needs_n) cmd->add_option("--n", o.n, "graph order");
        cmd->add_option("--gamma", o.gamma, "oracle weight rule: 'n', 'n+c', 'n-c', or a number")
            ->capture_default_str();
        cmd->add_option("--output", o.output, "output path (default: stdout)");
        return cmd;
    };

    CLI::App* c_search = add_common(app.add_subcommand("search", "run one spatial search"), true);
    c_search->add_option("--placement", o.placement, "clique-vertex | root | no-tail")
        ->capture_default_str();
    c_search->add_option("--format", o.format, "json | svg (default json)");
    c_search->add_option("--t-steps", o.t_steps, "time grid points")->capture_default_str();

    CLI::App* c_obl =
        add_common(app.add_subcommand("oblivious", "compare the three oracle placements"), true);
    (void)c_obl;

    CLI::App* c_spec = add_common(
        app.add_subcommand("spectrum", "bound states and Jost polynomials"), true);
    c_spec->add_option("--placement", o.placement, "clique-vertex | root")->capture_default_str();
    c_spec->add_option("--format", o.format, "json | svg (default json)");
    c_spec->add_option("--input", o.input, "rooted graph file (overrides --n)");
    c_spec->add_option("--w", o.w, "oracle vertex override");

    CLI::App* c_red = add_common(
        app.add_subcommand("reduce", "export the Jacobi decomposition"), true);
    c_red->add_option("--placement", o.placement, "clique-vertex | root")->capture_default_str();
    c_red->add_option("--input", o.input, "rooted graph file (overrides --n)");
    c_red->add_option("--w", o.w, "oracle vertex override");

    CLI::App* c_low = add_common(
        app.add_subcommand("lowerbound", "search-time lower-bound diagnostics on a cone"), true);
    c_low->description("cone of K_{n-1} for --n, or cone of the regular graph in --input");
    c_low->add_option("--input", o.input, "regular base graph file (overrides --n)");
    c_low->add_option("--w", o.w, "marked vertex (default 1)");
    c_low->add_option("--format", o.format, "json | csv | svg (default json)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "run search over a list of orders");
    c_sweep->add_option("--n-list", o.n_list, "comma-separated orders, increasing")->required();
    c_sweep->add_option("--gamma", o.gamma, "oracle weight rule")->capture_default_str();
    c_sweep->add_option("--placement", o.placement, "clique-vertex | root | no-tail")
        ->capture_default_str();
    c_sweep->add_option("--format", o.format, "csv | json (default csv)");
    c_sweep->add_option("--output", o.output, "output path (default: stdout)");

    CLI::App* c_evo = add_common(app.add_subcommand("evolve", "export a fidelity curve"), true);
    c_evo->add_option("--placement", o.placement, "clique-vertex | root | no-tail")
        ->capture_default_str();
    c_evo->add_option("--input", o.input, "rooted graph file (overrides --n)");
    c_evo->add_option("--w", o.w, "target vertex override");
    c_evo->add_option("--t-max", o.t_max, "largest evolution time");
    c_evo->add_option("--t-steps", o.t_steps, "time grid points")->capture_default_str();
    c_evo->add_option("--truncation", o.truncation, "tail truncation override");
    c_evo->add_option("--leakage-tol", o.leak_tol, "boundary-mass tolerance")
        ->capture_default_str();
    c_evo->add_option("--format", o.format, "csv | svg (default csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_search)) return cmd_search(o);
        if (app.got_subcommand(c_obl)) return cmd_oblivious(o);
        if (app.got_subcommand(c_spec)) return cmd_spectrum(o);
        if (app.got_subcommand(c_red)) return cmd_reduce(o);
        if (app.got_subcommand(c_low)) return cmd_lowerbound(o);
        if (app.got_subcommand(c_sweep)) return cmd_sweep(o);
        if (app.got_subcommand(c_evo)) return cmd_evolve(o);
    } catch (const TruncationError& e) {
        std::cerr << "truncation failure: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
