#pragma once

#include "nikishin/hierarchy.hpp"
#include "nikishin/index.hpp"
#include "nikishin/linalg.hpp"
#include "nikishin/polynomial.hpp"

#include <optional>
#include <vector>

namespace nikishin {

struct QnRecord {
    int n = 0, p = 1, ell = 0, d = 0;
    ChebSeries Qd_cheb;           // reduced polynomial on [a_0, b_0]
    Poly Qd;                      // same, monic monomial form in tau
    std::vector<real> segment_zeros;
    std::vector<complex> star_zeros;
    std::optional<real> a_n;
    real pivot_ratio = 1;
    real ortho_residual = 0;

    // Q_n(z) = z^ell Qd(z^(p+1)) in monomial form.
    Poly Qn() const {
        Poly q;
        q.c.assign(n + 1, real(0));
        for (int i = 0; i <= d; ++i) q.c[ell + (p + 1) * i] = Qd.c[i];
        return q;
    }
    complex eval_Qn(const complex& z) const {
        return pow_int(z, ell) * Qd(pow_int(z, p + 1));
    }
};

// Roots of z^(p+1) = tau.
inline std::vector<complex> star_roots(const real& tau, int p) {
    std::vector<complex> out;
    real r = boost::multiprecision::pow(abs(tau), real(1) / (p + 1));
    real pi = pi_value();
    for (int m = 0; m <= p; ++m) {
        real th = tau > 0 ? real(2 * pi * m / (p + 1)) : real(pi * (2 * m + 1) / (p + 1));
        out.push_back(polar(r, th));
    }
    return out;
}

inline std::vector<real> zeros_segment(const QnRecord& rec) {
    if (rec.d == 0) return {};
    std::vector<real> z = cheb_real_roots(rec.Qd_cheb);
    const real& a = rec.Qd_cheb.a;
    const real& b = rec.Qd_cheb.b;
    bool ok = static_cast<int>(z.size()) == rec.d;
    for (size_t i = 0; ok && i < z.size(); ++i) {
        if (!(z[i] > a && z[i] < b)) ok = false;
        if (i && !(z[i] > z[i - 1])) ok = false;
    }
    if (!ok)
        throw structural_error("reduced polynomial at n=" + std::to_string(rec.n) + " does not have " +
                               std::to_string(rec.d) + " simple zeros inside (a0,b0)");
    return z;
}

inline std::vector<complex> lift_to_star(const QnRecord& rec) {
    std::vector<complex> out(rec.ell, complex(real(0)));
    for (const real& t : rec.segment_zeros)
        for (const complex& z : star_roots(t, rec.p)) out.push_back(z);
    return out;
}

// Chebyshev values T_0..T_deg at the level nodes, mapped from [a,b].
inline Matrix chebyshev_table(const DiscreteMeasure& m, int deg) {
    Matrix T(m.size(), std::vector<real>(deg + 1));
    for (size_t q = 0; q < m.size(); ++q) {
        real x = (2 * m.nodes[q] - m.a - m.b) / (m.b - m.a);
        T[q][0] = 1;
        if (deg >= 1) T[q][1] = x;
        for (int i = 2; i <= deg; ++i) T[q][i] = 2 * x * T[q][i - 1] - T[q][i - 2];
    }
    return T;
}

inline real chebyshev_lead(int i, const real& a, const real& b) {
    // leading monomial coefficient of T_i((2t - a - b)/(b - a))
    if (i == 0) return real(1);
    return boost::multiprecision::pow(real(2), i - 1) * boost::multiprecision::pow(real(2) / (b - a), i);
}

// Largest relative defect of the reduced orthogonality conditions.
inline real orthogonality_residual(const MuHierarchy& H, const QnRecord& rec) {
    int p = H.p();
    real worst = 0;
    const auto& nodes = H.mu(0, 0).nodes;
    std::vector<real> qv(nodes.size());
    for (size_t q = 0; q < nodes.size(); ++q) qv[q] = rec.Qd_cheb(nodes[q]);
    for (int j = 0; j < p; ++j) {
        const auto& m = H.mu(0, j);
        SRange s = condition_range(rec.n, j, p);
        if (s.count() <= 0) continue;
        std::vector<real> term(m.size()), sum(s.count(), real(0)), mag(s.count(), real(0));
        for (size_t q = 0; q < m.size(); ++q) term[q] = m.weights[q] * qv[q] * boost::multiprecision::pow(m.nodes[q], s.lo);
        for (long e = 0; e < s.count(); ++e) {
            for (size_t q = 0; q < m.size(); ++q) {
                sum[e] += term[q];
                mag[e] += abs(term[q]);
                term[q] *= m.nodes[q];
            }
            if (mag[e] > 0) worst = std::max(worst, real(abs(sum[e]) / mag[e]));
        }
    }
    return worst;
}

inline QnRecord solve_Qd(const MuHierarchy& H, int n) {
    if (n < 0) throw validation_error("n must be nonnegative");
    int p = H.p();
    QnRecord rec;
    rec.n = n;
    rec.p = p;
    rec.ell = n % (p + 1);
    rec.d = (n - rec.ell) / (p + 1);
    const real& a = H.system().intervals[0].a;
    const real& b = H.system().intervals[0].b;
    int d = rec.d;
    rec.Qd_cheb.a = a;
    rec.Qd_cheb.b = b;
    if (d == 0) {
        rec.Qd_cheb.c = {real(1)};
        rec.Qd = Poly::monomial(0);
        rec.star_zeros = lift_to_star(rec);
        return rec;
    }
    const DiscreteMeasure& base = H.mu(0, 0);
    Matrix T = chebyshev_table(base, d);
    Matrix A;
    std::vector<real> rhs;
    for (int j = 0; j < p; ++j) {
        const auto& m = H.mu(0, j);
        SRange s = condition_range(n, j, p);
        for (long t = 0; t < s.count(); ++t) {
            std::vector<real> row(d, real(0));
            real r = 0;
            for (size_t q = 0; q < m.size(); ++q) {
                real w = m.weights[q] * T[q][t];
                if (s.lo != 0) w *= boost::multiprecision::pow(m.nodes[q], s.lo);
                for (int i = 0; i < d; ++i) row[i] += w * T[q][i];
                r -= w * T[q][d];
            }
            A.push_back(std::move(row));
            rhs.push_back(r);
        }
    }
    if (static_cast<long>(A.size()) != z_count(n, 0, p))
        throw structural_error("condition count mismatch at n=" + std::to_string(n));
    if (static_cast<int>(A.size()) != d)
        throw structural_error("condition count differs from d at n=" + std::to_string(n));
    SolveResult sol = solve_linear(A, rhs);
    rec.pivot_ratio = sol.pivot_ratio;
    real threshold = boost::multiprecision::pow(epsilon_value(), real(0.75));
    if (!(sol.pivot_ratio > threshold))
        throw normality_error(n, "normality check failed at n=" + std::to_string(n));
    real lead = chebyshev_lead(d, a, b);
    rec.Qd_cheb.c.resize(d + 1);
    for (int i = 0; i < d; ++i) rec.Qd_cheb.c[i] = sol.x[i] / lead;
    rec.Qd_cheb.c[d] = real(1) / lead;
    rec.Qd = rec.Qd_cheb.to_monomial();
    rec.Qd.c[d] = 1;
    rec.segment_zeros = zeros_segment(rec);
    rec.star_zeros = lift_to_star(rec);
    rec.ortho_residual = orthogonality_residual(H, rec);
    return rec;
}

struct NormalityEntry {
    int n;
    real pivot_ratio;
    real ortho_residual;
    unsigned bits;
    bool ok;
};

struct NormalityReport {
    bool all_normal = true;
    std::vector<NormalityEntry> entries;
};

// Solves every n <= n_max; a singular system is retried once at doubled precision.
inline NormalityReport check_normality(const MuHierarchy& H, int n_max) {
    NormalityReport rep;
    unsigned bits = precision_bits();
    for (int n = 0; n <= n_max; ++n) {
        try {
            QnRecord r = solve_Qd(H, n);
            rep.entries.push_back({n, r.pivot_ratio, r.ortho_residual, bits, true});
        } catch (const normality_error&) {
            precision_scope scope(2 * bits);
            MuHierarchy H2(H.system(), H.order());
            try {
                QnRecord r = solve_Qd(H2, n);
                rep.entries.push_back({n, r.pivot_ratio, r.ortho_residual, 2 * bits, true});
            } catch (const normality_error&) {
                rep.entries.push_back({n, real(0), real(0), 2 * bits, false});
                rep.all_normal = false;
            }
        }
    }
    return rep;
}

inline std::vector<QnRecord> solve_range(const MuHierarchy& H, int n_max) {
    std::vector<QnRecord> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(solve_Qd(H, n));
    return out;
}

}  // namespace nikishin
