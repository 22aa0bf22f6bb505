// graph.hpp — finite rooted graphs, weighted self-loops, tail attachment, file I/O.
//
// Vertices are labeled 1..n; the conventional root is the last vertex n. A tailed
// system stands for the infinite graph obtained by attaching a half-infinite path
// at the root (tail sites n+1, n+2, ...); the tail itself is never materialized here.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tailwalk {

struct FiniteGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // normalized u < v, sorted, unique
    std::map<int, double> loops;             // vertex -> weight

    bool has_edge(int u, int v) const;
    int degree(int u) const;  // neighbor count, loops excluded

    bool operator==(const FiniteGraph&) const = default;
};

struct RootedGraph {
    FiniteGraph graph;
    int root = 0;

    bool operator==(const RootedGraph&) const = default;
};

struct TailedSystem {
    RootedGraph rooted;
    bool tail_present = false;
};

// Marked vertex w with self-loop weight gamma >= 0.
struct OracleSpec {
    int w = 0;
    double gamma = 0.0;
};

// Complete graph K_n, empty loops. Throws InputError for n < 2.
FiniteGraph make_complete(int n);

// Cone K_1 + G: new vertex n+1 adjacent to every vertex of G, taken as root.
RootedGraph make_cone(const FiniteGraph& g);

TailedSystem attach_tail(const RootedGraph& r);
TailedSystem without_tail(const RootedGraph& r);

bool is_connected(const FiniteGraph& g);
bool is_regular(const FiniteGraph& g);

// Throws InputError if g violates an invariant (range, duplicates, connectivity).
void validate(const FiniteGraph& g);

// Edge-list text format:
//   first line "n m", then m lines "u v", optional lines "loop u weight",
//   final line "root r"; '#' starts a comment.
RootedGraph parse_graph(const std::string& text);
std::string serialize_graph(const RootedGraph& g);

}  // namespace tailwalk
