// reduction.hpp — orthogonal splitting of a tailed system into a finite complement
// block and an eventually-free Jacobi matrix carrying the search dynamics.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tailwalk/operators.hpp"

namespace tailwalk {

// Semi-infinite symmetric tridiagonal operator equal to the free Jacobi matrix
// (zero diagonal, unit off-diagonal) beyond the horizon K. Only the first K
// diagonal and K-1 off-diagonal entries are stored.
struct EventuallyFreeJacobi {
    int horizon = 1;              // K >= 1
    std::vector<double> diag;     // b_1..b_K
    std::vector<double> offdiag;  // a_1..a_{K-1}, all > 0

    double b(int k) const { return k <= horizon ? diag[k - 1] : 0.0; }
    double a(int k) const { return k <= horizon - 1 ? offdiag[k - 1] : 1.0; }

    // Dense truncation of the first `rows` rows/columns.
    Eigen::MatrixXd truncated(int rows) const;
};

// Change of basis splitting the tailed operator: `graph_basis` columns are the
// Jacobi basis vectors restricted to graph vertices (column k-1 <-> Jacobi index
// k; the root sits at the tail interface, column m-1); tail sites map to
// themselves. The complement of the Jacobi subspace inside the graph block is
// returned diagonalized.
struct GolinskiiDecomposition {
    EventuallyFreeJacobi jacobi;
    Eigen::MatrixXd graph_basis;         // n x m
    Eigen::VectorXd complement_values;   // ascending, size n-m
    Eigen::MatrixXd complement_vectors;  // n x (n-m), vertex coordinates

    int graph_dim() const { return static_cast<int>(graph_basis.cols()); }
};

// Lanczos tridiagonalization (full reorthogonalization) of the graph block from
// the root vector, stopped at breakdown; basis ordered interior-first so the root
// lands at the tail interface.
GolinskiiDecomposition reduce(const TailedSystem& sys, const std::optional<OracleSpec>& oracle);

struct JacobiCoords {
    Eigen::VectorXcd jacobi;      // m + tail entries
    Eigen::VectorXcd complement;  // n - m entries
};

JacobiCoords to_jacobi_coords(const QuantumState& state, const GolinskiiDecomposition& dec);

std::string decomposition_json(const GolinskiiDecomposition& dec);

}  // namespace tailwalk
