#include "tailwalk/operators.hpp"

#include <cmath>

#include "tailwalk/errors.hpp"

namespace tailwalk {

Eigen::MatrixXd graph_matrix(const FiniteGraph& g, const std::optional<OracleSpec>& oracle) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g.n, g.n);
    for (const auto& [u, v] : g.edges) h(u - 1, v - 1) = h(v - 1, u - 1) = 1.0;
    for (const auto& [u, w] : g.loops) h(u - 1, u - 1) += w;
    if (oracle) {
        if (oracle->w < 1 || oracle->w > g.n)
            throw InputError("oracle vertex " + std::to_string(oracle->w) + " out of range 1.." +
                             std::to_string(g.n));
        if (oracle->gamma < 0) throw InputError("oracle weight must be nonnegative");
        h(oracle->w - 1, oracle->w - 1) += oracle->gamma;
    }
    return h;
}

TruncatedHamiltonian assemble(const TailedSystem& sys, const std::optional<OracleSpec>& oracle,
                              int tail_len) {
    const FiniteGraph& g = sys.rooted.graph;
    if (sys.tail_present && tail_len < 1)
        throw TruncationError("assemble: tail present but truncation length is 0");
    if (!sys.tail_present && tail_len != 0)
        throw InputError("assemble: tail length given for a system without tail");

    const int n = g.n;
    const int size = n + tail_len;
    TruncatedHamiltonian h;
    h.n = n;
    h.tail_len = tail_len;
    h.mat = Eigen::MatrixXd::Zero(size, size);
    h.mat.topLeftCorner(n, n) = graph_matrix(g, oracle);
    int prev = sys.rooted.root - 1;
    for (int k = 0; k < tail_len; ++k) {
        int site = n + k;
        h.mat(prev, site) = h.mat(site, prev) = 1.0;
        prev = site;
    }
    return h;
}

QuantumState principal_state(const FiniteGraph& g, int size) {
    if (size < g.n) throw InputError("principal_state: size smaller than graph order");
    if (!is_connected(g)) throw InputError("principal_state: graph is not connected");

    Eigen::VectorXd v;
    if (is_regular(g)) {
        v = Eigen::VectorXd::Constant(g.n, 1.0 / std::sqrt(double(g.n)));
    } else {
        Eigen::MatrixXd a = graph_matrix(g, std::nullopt);
        // Shift makes the iteration matrix primitive; without it bipartite graphs
        // oscillate between the +/- lambda_1 eigenvectors.
        double shift = a.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
        v = Eigen::VectorXd::Ones(g.n);
        v.normalize();
        const int cap = 500000;
        bool converged = false;
        for (int it = 0; it < cap; ++it) {
            Eigen::VectorXd w = a * v + shift * v;
            v = w.normalized();
            Eigen::VectorXd av = a * v;
            double lam = v.dot(av);
            if ((av - lam * v).norm() <= 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericalError("principal_state: power iteration did not converge");
        if (v.sum() < 0) v = -v;  // Perron vector is positive
    }
    QuantumState s;
    s.amp = Eigen::VectorXcd::Zero(size);
    s.amp.head(g.n) = v.cast<std::complex<double>>();
    return s;
}

EigenSystem spectral_decompose(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("spectral_decompose: eigensolver failed");
    return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

EigenSystem spectral_decompose(const TruncatedHamiltonian& h) { return spectral_decompose(h.mat); }

}  // namespace tailwalk
