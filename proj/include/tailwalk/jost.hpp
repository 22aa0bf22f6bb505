// jost.hpp — Jost polynomials of an eventually-free Jacobi matrix, their roots in
// the open unit interval, and the resulting point spectrum with bound states.
//
// The Jost solution y(x) solves J y = (x + 1/x) y with y_k(x) = x^k beyond the
// horizon; eigenvalues of J are exactly lambda = x + 1/x over the roots x of
// y_0 in (-1,1)\{0}, all real and simple. Convention here: a_0 = 1, so y_0 is
// the row-1 defect (lambda - b_1) y_1 - a_1 y_2.
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "tailwalk/reduction.hpp"

namespace tailwalk {

// Real polynomial times x^min_degree; coeffs[i] multiplies x^(min_degree+i).
struct LaurentPoly {
    int min_degree = 0;
    std::vector<double> coeffs{0.0};

    double operator()(double x) const;
    int degree() const { return min_degree + static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const;

    static LaurentPoly monomial(int k);
};

// Square-summable eigenvector of J at lambda = x + 1/x. Components are the
// unnormalized Jost values: head holds y_1..y_K, beyond which y_k = x^k.
struct BoundState {
    double x = 0.0;
    double lambda = 0.0;
    std::vector<double> head;
    double tail_ratio = 0.0;  // = x
    double norm = 0.0;        // l2 norm of the full vector

    double component(int k) const;   // y_k, k >= 1
    double normalized(int k) const { return component(k) / norm; }
};

// y_0..y_{K+1} by downward recurrence from y_{K+1} = x^{K+1}, y_K = x^K.
std::vector<LaurentPoly> jost_polynomials(const EventuallyFreeJacobi& j);

struct PointSpectrum {
    std::vector<BoundState> states;     // sorted by lambda descending
    std::vector<double> grazing_roots;  // |x| >= 1 - 1e-12: band edge, unreliable
};

// All roots of y_0 in (-1,1)\{0} by sign-change bisection on a sample set made of
// a uniform grid plus the critical points of y_0 (so clustered root pairs are
// always bracketed), refined to 1e-14 and polished with one Newton step.
PointSpectrum point_spectrum(const EventuallyFreeJacobi& j);

// Signs of y_0 at the probe points: -1, 0, +1.
std::vector<int> sign_profile(const EventuallyFreeJacobi& j, std::span<const double> probes);

// sum_j |<state, y_j / ||y_j||>|^2 over the given bound states; coords are in the
// Jacobi basis (index k = coords[k-1]).
double bound_subspace_overlap(const Eigen::VectorXcd& coords,
                              const std::vector<BoundState>& states);

std::string spectrum_json(const PointSpectrum& ps, const std::vector<LaurentPoly>& polys);

}  // namespace tailwalk
