#include "tailwalk/jost.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "json.hpp"

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

std::vector<double> trimmed(std::vector<double> c, int& min_degree) {
    double mx = 0.0;
    for (double v : c) mx = std::max(mx, std::abs(v));
    const double thresh = 1e-13 * std::max(1.0, mx);
    size_t lo = 0;
    while (lo + 1 < c.size() && std::abs(c[lo]) <= thresh) ++lo;
    size_t hi = c.size();
    while (hi > lo + 1 && std::abs(c[hi - 1]) <= thresh) --hi;
    min_degree += static_cast<int>(lo);
    std::vector<double> out(c.begin() + lo, c.begin() + hi);
    if (out.size() == 1 && std::abs(out[0]) <= thresh) {
        out[0] = 0.0;
        min_degree = 0;
    }
    return out;
}

LaurentPoly make_trimmed(int min_degree, std::vector<double> c) {
    LaurentPoly p;
    p.min_degree = min_degree;
    p.coeffs = trimmed(std::move(c), p.min_degree);
    return p;
}

// (x + 1/x) * p
LaurentPoly lift(const LaurentPoly& p) {
    std::vector<double> r(p.coeffs.size() + 2, 0.0);
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
        r[i] += p.coeffs[i];      // x^{-1} part
        r[i + 2] += p.coeffs[i];  // x part
    }
    return make_trimmed(p.min_degree - 1, std::move(r));
}

// p + s * q
LaurentPoly axpy(const LaurentPoly& p, double s, const LaurentPoly& q) {
    int lo = std::min(p.min_degree, q.min_degree);
    int hi = std::max(p.degree(), q.degree());
    std::vector<double> r(static_cast<size_t>(hi - lo + 1), 0.0);
    for (size_t i = 0; i < p.coeffs.size(); ++i) r[p.min_degree - lo + i] += p.coeffs[i];
    for (size_t i = 0; i < q.coeffs.size(); ++i) r[q.min_degree - lo + i] += s * q.coeffs[i];
    return make_trimmed(lo, std::move(r));
}

LaurentPoly scaled(const LaurentPoly& p, double s) {
    LaurentPoly r = p;
    for (double& c : r.coeffs) c *= s;
    return r;
}

double eval_poly(std::span<const double> c, double x) {
    double p = 0.0;
    for (size_t i = c.size(); i-- > 0;) p = p * x + c[i];
    return p;
}

std::vector<double> derivative(std::span<const double> c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return d;
}

double bisect_root(std::span<const double> c, double a, double b) {
    double fa = eval_poly(c, a);
    while (b - a > 1e-14) {
        double mid = 0.5 * (a + b);
        double fm = eval_poly(c, mid);
        if (fm == 0.0) return mid;
        if ((fa < 0) == (fm < 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// All real roots of the plain polynomial c inside [lo, hi]. The sample set is a
// uniform grid plus the critical points (roots of c', found recursively), so
// between consecutive samples the polynomial is monotone and every simple root
// produces a sign change.
std::vector<double> real_roots(const std::vector<double>& cin, double lo, double hi) {
    int mindeg = 0;
    std::vector<double> c = trimmed(std::vector<double>(cin), mindeg);
    // x^mindeg factor only adds a root at 0
    int deg = static_cast<int>(c.size()) - 1;
    std::vector<double> roots;
    if (mindeg > 0 && lo <= 0.0 && 0.0 <= hi) roots.push_back(0.0);
    if (deg == 0) return roots;
    if (deg == 1) {
        double r = -c[0] / c[1];
        if (lo <= r && r <= hi) roots.push_back(r);
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    std::vector<double> samples = real_roots(derivative(c), lo, hi);
    int grid = 10 * deg + 64;
    for (int i = 0; i <= grid; ++i)
        samples.push_back(lo + (hi - lo) * (static_cast<double>(i) / grid));
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                  samples.end());

    std::vector<double> vals(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) vals[i] = eval_poly(c, samples[i]);
    for (size_t i = 0; i < samples.size(); ++i) {
        if (vals[i] == 0.0) {
            roots.push_back(samples[i]);
            continue;
        }
        if (i + 1 < samples.size() && vals[i + 1] != 0.0 && (vals[i] < 0) != (vals[i + 1] < 0)) {
            double r = bisect_root(c, samples[i], samples[i + 1]);
            // one Newton polish, kept inside the bracket
            std::vector<double> d = derivative(c);
            double dp = eval_poly(d, r);
            if (dp != 0.0) {
                double rn = r - eval_poly(c, r) / dp;
                if (rn >= samples[i] && rn <= samples[i + 1] &&
                    std::abs(eval_poly(c, rn)) <= std::abs(eval_poly(c, r)))
                    r = rn;
            }
            roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                roots.end());
    return roots;
}

void check_valid(const EventuallyFreeJacobi& j) {
    if (j.horizon < 1 || static_cast<int>(j.diag.size()) != j.horizon ||
        static_cast<int>(j.offdiag.size()) != j.horizon - 1)
        throw InputError("invalid Jacobi matrix: entry counts do not match the horizon");
    for (double a : j.offdiag)
        if (!(a > 0.0)) throw InputError("invalid Jacobi matrix: off-diagonal entries must be positive");
}

}  // namespace

double LaurentPoly::operator()(double x) const {
    double p = eval_poly(coeffs, x);
    return min_degree == 0 ? p : p * std::pow(x, min_degree);
}

bool LaurentPoly::is_zero() const {
    for (double c : coeffs)
        if (c != 0.0) return false;
    return true;
}

LaurentPoly LaurentPoly::monomial(int k) {
    LaurentPoly p;
    p.min_degree = k;
    p.coeffs = {1.0};
    return p;
}

double BoundState::component(int k) const {
    if (k <= static_cast<int>(head.size())) return head[k - 1];
    return std::pow(x, k);
}

std::vector<LaurentPoly> jost_polynomials(const EventuallyFreeJacobi& j) {
    check_valid(j);
    const int K = j.horizon;
    std::vector<LaurentPoly> ys(K + 2);
    ys[K + 1] = LaurentPoly::monomial(K + 1);
    ys[K] = LaurentPoly::monomial(K);
    for (int k = K; k >= 1; --k) {
        LaurentPoly num = axpy(lift(ys[k]), -j.b(k), ys[k]);
        num = axpy(num, -j.a(k), ys[k + 1]);
        ys[k - 1] = (k >= 2) ? scaled(num, 1.0 / j.a(k - 1)) : num;
    }
    if (ys[0].min_degree < 0)
        throw NumericalError("jost_polynomials: y0 has a Laurent part");
    return ys;
}

PointSpectrum point_spectrum(const EventuallyFreeJacobi& j) {
    const int K = j.horizon;
    std::vector<LaurentPoly> ys = jost_polynomials(j);
    const LaurentPoly& y0 = ys[0];
    if (y0.min_degree > 0 || y0.coeffs[0] == 0.0)
        throw NumericalError("point_spectrum: y0(0) = 0, inconsistent Jost function");

    PointSpectrum ps;
    for (double x : real_roots(y0.coeffs, -1.0, 1.0)) {
        if (x == 0.0) continue;
        if (std::abs(x) >= 1.0 - 1e-12) {
            ps.grazing_roots.push_back(x);
            continue;
        }
        BoundState s;
        s.x = x;
        s.lambda = x + 1.0 / x;
        s.tail_ratio = x;
        s.head.resize(K);
        for (int k = 1; k <= K; ++k) s.head[k - 1] = ys[k](x);
        double head2 = 0.0;
        for (double h : s.head) head2 += h * h;
        s.norm = std::sqrt(head2 + std::pow(x, 2 * (K + 1)) / (1.0 - x * x));
        ps.states.push_back(std::move(s));
    }
    std::sort(ps.states.begin(), ps.states.end(),
              [](const BoundState& a, const BoundState& b) { return a.lambda > b.lambda; });
    return ps;
}

std::vector<int> sign_profile(const EventuallyFreeJacobi& j, std::span<const double> probes) {
    LaurentPoly y0 = jost_polynomials(j)[0];
    std::vector<int> signs;
    signs.reserve(probes.size());
    for (double x : probes) {
        double v = y0(x);
        signs.push_back(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
    }
    return signs;
}

double bound_subspace_overlap(const Eigen::VectorXcd& coords,
                              const std::vector<BoundState>& states) {
    double total = 0.0;
    for (const BoundState& s : states) {
        std::complex<double> ip = 0.0;
        const int K = static_cast<int>(s.head.size());
        double xpow = std::pow(s.x, K + 1);
        for (int i = 0; i < coords.size(); ++i) {
            int k = i + 1;
            double comp;
            if (k <= K) {
                comp = s.head[i];
            } else {
                comp = xpow;
                xpow *= s.x;
            }
            ip += std::conj(coords(i)) * comp;
        }
        double a = std::abs(ip) / s.norm;
        total += a * a;
    }
    return total;
}

std::string spectrum_json(const PointSpectrum& ps, const std::vector<LaurentPoly>& polys) {
    nlohmann::ordered_json j;
    j["bound_states"] = nlohmann::ordered_json::array();
    for (const BoundState& s : ps.states) {
        j["bound_states"].push_back({{"x", s.x},
                                     {"lambda", s.lambda},
                                     {"head", s.head},
                                     {"norm", s.norm}});
    }
    j["grazing_roots"] = ps.grazing_roots;
    j["polynomials"] = nlohmann::ordered_json::array();
    for (const LaurentPoly& p : polys)
        j["polynomials"].push_back({{"min_degree", p.min_degree}, {"coeffs", p.coeffs}});
    return j.dump(2) + "\n";
}

}  // namespace tailwalk
