#include "tailwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tailwalk/errors.hpp"

namespace tailwalk {

bool FiniteGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

int FiniteGraph::degree(int u) const {
    int d = 0;
    for (const auto& [a, b] : edges)
        if (a == u || b == u) ++d;
    return d;
}

FiniteGraph make_complete(int n) {
    if (n < 2) throw InputError("complete graph needs order >= 2, got " + std::to_string(n));
    FiniteGraph g;
    g.n = n;
    g.edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v) g.edges.emplace_back(u, v);
    return g;
}

RootedGraph make_cone(const FiniteGraph& g) {
    validate(g);
    FiniteGraph c = g;
    c.n = g.n + 1;
    for (int u = 1; u <= g.n; ++u) c.edges.emplace_back(u, c.n);
    std::sort(c.edges.begin(), c.edges.end());
    return RootedGraph{std::move(c), g.n + 1};
}

TailedSystem attach_tail(const RootedGraph& r) { return TailedSystem{r, true}; }
TailedSystem without_tail(const RootedGraph& r) { return TailedSystem{r, false}; }

bool is_connected(const FiniteGraph& g) {
    if (g.n <= 0) return false;
    std::vector<std::vector<int>> adj(g.n + 1);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(g.n + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int count = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++count;
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return count == g.n;
}

bool is_regular(const FiniteGraph& g) {
    std::vector<int> deg(g.n + 1, 0);
    for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    for (int u = 2; u <= g.n; ++u)
        if (deg[u] != deg[1]) return false;
    if (!g.loops.empty()) {
        if (static_cast<int>(g.loops.size()) != g.n) return false;
        double w0 = g.loops.begin()->second;
        for (const auto& [u, w] : g.loops)
            if (w != w0) return false;
    }
    return true;
}

void validate(const FiniteGraph& g) {
    if (g.n < 1) throw InputError("graph needs at least one vertex");
    std::pair<int, int> prev{0, 0};
    for (const auto& e : g.edges) {
        auto [u, v] = e;
        if (u < 1 || v < 1 || u > g.n || v > g.n)
            throw InputError("edge endpoint out of range 1.." + std::to_string(g.n));
        if (u >= v) throw InputError("edges must be stored as u < v");
        if (e == prev) throw InputError("duplicate edge");
        prev = e;
    }
    if (!std::is_sorted(g.edges.begin(), g.edges.end()))
        throw InputError("edge list must be sorted");
    for (const auto& [u, w] : g.loops) {
        if (u < 1 || u > g.n) throw InputError("loop vertex out of range");
        if (!std::isfinite(w)) throw InputError("loop weight must be finite");
    }
    if (!is_connected(g)) throw InputError("graph is not connected");
}

namespace {

// Strips comments/whitespace; returns contentful tokens per line with line numbers.
std::vector<std::pair<int, std::vector<std::string>>> tokenize(const std::string& text) {
    std::vector<std::pair<int, std::vector<std::string>>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) out.emplace_back(lineno, std::move(toks));
    }
    return out;
}

int parse_int(const std::string& s, int lineno, const char* what) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(lineno, std::string("expected ") + what + ", got '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError(lineno, std::string("trailing characters after ") + what + " '" + s + "'");
    return v;
}

double parse_double(const std::string& s, int lineno, const char* what) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(lineno, std::string("expected ") + what + ", got '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError(lineno, std::string("trailing characters after ") + what + " '" + s + "'");
    return v;
}

}  // namespace

RootedGraph parse_graph(const std::string& text) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "empty graph file");
    size_t i = 0;

    auto& [hline, htoks] = lines[i++];
    if (htoks.size() != 2) throw ParseError(hline, "expected header 'n m'");
    FiniteGraph g;
    g.n = parse_int(htoks[0], hline, "vertex count");
    int m = parse_int(htoks[1], hline, "edge count");
    if (g.n < 1) throw ParseError(hline, "vertex count must be positive");
    if (m < 0) throw ParseError(hline, "edge count must be nonnegative");

    for (int e = 0; e < m; ++e) {
        if (i >= lines.size()) throw ParseError(hline, "fewer edge lines than declared");
        auto& [lno, toks] = lines[i++];
        if (toks.size() != 2) throw ParseError(lno, "expected edge 'u v'");
        int u = parse_int(toks[0], lno, "vertex");
        int v = parse_int(toks[1], lno, "vertex");
        if (u < 1 || u > g.n || v < 1 || v > g.n)
            throw ParseError(lno, "vertex out of range 1.." + std::to_string(g.n));
        if (u == v) throw ParseError(lno, "self-edges go on 'loop' lines");
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
        throw ParseError(hline, "duplicate edge in list");

    std::optional<int> root;
    while (i < lines.size()) {
        auto& [lno, toks] = lines[i++];
        if (toks[0] == "loop") {
            if (toks.size() != 3) throw ParseError(lno, "expected 'loop u weight'");
            int u = parse_int(toks[1], lno, "vertex");
            if (u < 1 || u > g.n) throw ParseError(lno, "loop vertex out of range");
            double w = parse_double(toks[2], lno, "loop weight");
            if (!g.loops.emplace(u, w).second) throw ParseError(lno, "duplicate loop vertex");
        } else if (toks[0] == "root") {
            if (toks.size() != 2) throw ParseError(lno, "expected 'root r'");
            root = parse_int(toks[1], lno, "root vertex");
            if (i != lines.size()) throw ParseError(lines[i].first, "content after 'root' line");
        } else {
            throw ParseError(lno, "unrecognized line '" + toks[0] + "'");
        }
    }
    int last = lines.back().first;
    if (!root) throw ParseError(last, "missing 'root r' line");
    if (*root < 1 || *root > g.n) throw ParseError(last, "root out of range");
    if (!is_connected(g)) throw ParseError(last, "graph is not connected");
    return RootedGraph{std::move(g), *root};
}

std::string serialize_graph(const RootedGraph& rg) {
    const FiniteGraph& g = rg.graph;
    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d %zu\n", g.n, g.edges.size());
    out += buf;
    for (const auto& [u, v] : g.edges) {
        std::snprintf(buf, sizeof buf, "%d %d\n", u, v);
        out += buf;
    }
    for (const auto& [u, w] : g.loops) {
        std::snprintf(buf, sizeof buf, "loop %d %.17g\n", u, w);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "root %d\n", rg.root);
    out += buf;
    return out;
}

}  // namespace tailwalk
