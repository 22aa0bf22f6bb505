#include "tailwalk/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "tailwalk/errors.hpp"

namespace tailwalk {

Eigen::MatrixXd EventuallyFreeJacobi::truncated(int rows) const {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, rows);
    for (int k = 1; k <= rows; ++k) {
        t(k - 1, k - 1) = b(k);
        if (k < rows) t(k - 1, k) = t(k, k - 1) = a(k);
    }
    return t;
}

GolinskiiDecomposition reduce(const TailedSystem& sys, const std::optional<OracleSpec>& oracle) {
    if (!sys.tail_present) throw InputError("reduce: system has no tail");
    const FiniteGraph& g = sys.rooted.graph;
    validate(g);
    const int n = g.n;
    const Eigen::MatrixXd h = graph_matrix(g, oracle);
    const double scale = std::max(1.0, h.cwiseAbs().rowwise().sum().maxCoeff());
    const double breakdown = 1e-10 * scale;

    // Lanczos from the root vector, full reorthogonalization (two passes).
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v(sys.rooted.root - 1) = 1.0;
    basis.push_back(v);
    while (true) {
        const Eigen::VectorXd& cur = basis.back();
        Eigen::VectorXd w = h * cur;
        alpha.push_back(cur.dot(w));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) w -= u.dot(w) * u;
        double nrm = w.norm();
        if (nrm < breakdown) break;
        if (static_cast<int>(basis.size()) == n)
            throw NumericalError("reduce: reorthogonalization failure (no breakdown at full dimension)");
        beta.push_back(nrm);
        basis.push_back(w / nrm);
    }
    const int m = static_cast<int>(basis.size());

    GolinskiiDecomposition dec;
    dec.jacobi.horizon = m;
    dec.jacobi.diag.assign(alpha.rbegin(), alpha.rend());
    dec.jacobi.offdiag.assign(beta.rbegin(), beta.rend());

    dec.graph_basis.resize(n, m);
    for (int k = 0; k < m; ++k) dec.graph_basis.col(k) = basis[m - 1 - k];

    // Complement = orthogonal complement of the Krylov space, diagonalized.
    const int c = n - m;
    if (c > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(dec.graph_basis);
        Eigen::MatrixXd q = qr.householderQ();
        Eigen::MatrixXd w = q.rightCols(c);
        EigenSystem es = spectral_decompose(Eigen::MatrixXd(w.transpose() * h * w));
        dec.complement_values = es.values;
        dec.complement_vectors = w * es.vectors;
        // Eigensolver leaves the sign free; first non-negligible vertex amplitude positive.
        for (int j = 0; j < c; ++j) {
            auto col = dec.complement_vectors.col(j);
            double thresh = 1e-8 * col.cwiseAbs().maxCoeff();
            for (int i = 0; i < n; ++i) {
                if (std::abs(col(i)) > thresh) {
                    if (col(i) < 0) dec.complement_vectors.col(j) = -col;
                    break;
                }
            }
        }
    } else {
        dec.complement_values.resize(0);
        dec.complement_vectors.resize(n, 0);
    }
    return dec;
}

JacobiCoords to_jacobi_coords(const QuantumState& state, const GolinskiiDecomposition& dec) {
    const int n = static_cast<int>(dec.graph_basis.rows());
    const int m = dec.graph_dim();
    if (state.amp.size() < n) throw InputError("to_jacobi_coords: basis/state size mismatch");
    const int tail = static_cast<int>(state.amp.size()) - n;

    JacobiCoords out;
    out.jacobi.resize(m + tail);
    Eigen::VectorXcd head = state.amp.head(n);
    for (int k = 0; k < m; ++k)
        out.jacobi(k) = dec.graph_basis.col(k).cast<std::complex<double>>().dot(head);
    out.jacobi.tail(tail) = state.amp.tail(tail);
    out.complement = dec.complement_vectors.cast<std::complex<double>>().adjoint() * head;
    return out;
}

std::string decomposition_json(const GolinskiiDecomposition& dec) {
    nlohmann::ordered_json j;
    j["K"] = dec.jacobi.horizon;
    j["b"] = dec.jacobi.diag;
    j["a"] = dec.jacobi.offdiag;
    j["complement_eigenvalues"] =
        std::vector<double>(dec.complement_values.data(),
                            dec.complement_values.data() + dec.complement_values.size());
    nlohmann::ordered_json basis = nlohmann::ordered_json::array();
    for (int k = 0; k < dec.graph_dim(); ++k) {
        nlohmann::ordered_json entry;
        entry["index"] = k + 1;
        nlohmann::ordered_json support = nlohmann::ordered_json::array();
        for (int i = 0; i < dec.graph_basis.rows(); ++i) {
            double amp = dec.graph_basis(i, k);
            if (std::abs(amp) > 1e-14) support.push_back({{"vertex", i + 1}, {"amp", amp}});
        }
        entry["support"] = std::move(support);
        basis.push_back(std::move(entry));
    }
    j["basis"] = std::move(basis);
    return j.dump(2) + "\n";
}

}  // namespace tailwalk
