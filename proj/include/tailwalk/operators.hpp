// operators.hpp — truncated Hamiltonians, quantum states, dense eigendecomposition.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "tailwalk/graph.hpp"

namespace tailwalk {

// Finite section of the adjacency operator: graph block (rows 0..n-1 for vertices
// 1..n) followed by tail_len tail sites. Last tail row is a hard wall; accuracy is
// the caller's business via leakage monitoring.
struct TruncatedHamiltonian {
    Eigen::MatrixXd mat;
    int n = 0;
    int tail_len = 0;

    int size() const { return n + tail_len; }
};

struct QuantumState {
    Eigen::VectorXcd amp;

    double norm() const { return amp.norm(); }
};

// Adjacency + stored loops + oracle loop + tail tridiagonal. tail_len must be >= 1
// when the system carries a tail and 0 otherwise.
TruncatedHamiltonian assemble(const TailedSystem& sys, const std::optional<OracleSpec>& oracle,
                              int tail_len);

// Graph block only (n x n): adjacency, stored loops, oracle loop.
Eigen::MatrixXd graph_matrix(const FiniteGraph& g, const std::optional<OracleSpec>& oracle);

// Principal eigenvector of the graph adjacency, zero-padded to `size`. Uniform for
// regular graphs; shifted power iteration (deterministic all-ones start) otherwise.
QuantumState principal_state(const FiniteGraph& g, int size);

struct EigenSystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
};

EigenSystem spectral_decompose(const Eigen::MatrixXd& sym);
EigenSystem spectral_decompose(const TruncatedHamiltonian& h);

}  // namespace tailwalk
