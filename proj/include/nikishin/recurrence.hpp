#pragma once

#include "nikishin/mop.hpp"

#include <map>
#include <string>
#include <vector>

namespace nikishin {

struct RecurrenceSequence {
    int p = 1;
    std::map<int, real> a;
    std::map<int, real> residuals;
};

struct AnExtraction {
    real a_n;
    real residual;  // relative to the largest coefficient of z Q_n
};

// z Q_n = Q_{n+1} + a_n Q_{n-p}
inline AnExtraction extract_an(const Poly& Qnp1, const Poly& Qn, const Poly& Qnmp) {
    int m = Qnmp.degree();
    Poly R = Qn.shift_up() - Qnp1;
    AnExtraction out;
    out.a_n = R.c.at(m) / Qnmp.lead();
    Poly D = R - out.a_n * Qnmp;
    real worst = 0, scale = 0;
    for (const auto& c : D.c) worst = std::max(worst, real(abs(c)));
    for (const auto& c : Qn.c) scale = std::max(scale, real(abs(c)));
    out.residual = scale > 0 ? real(worst / scale) : worst;
    return out;
}

// Same coefficient read from the reduced polynomials: avoids forming Q_n for large n.
inline real extract_an_reduced(const QnRecord& rn, const QnRecord& rnp1) {
    if (rn.ell < rn.p) {
        // same d, and the T_d terms cancel: a_n is the tau^{d-1} coefficient of Qd - Qd'
        const auto& c = rn.Qd_cheb.c;
        const auto& c1 = rnp1.Qd_cheb.c;
        int d = rn.d;
        if (d == 0) return real(0);
        real a = rn.Qd_cheb.a, b = rn.Qd_cheb.b;
        return chebyshev_lead(d - 1, a, b) * (c[d - 1] - c1[d - 1]);
    }
    // ell = p: z Q_n - Q_{n+1} = z^0 (tau Qd - Qd''(tau)), tau = z^{p+1}; coefficient of tau^d
    const auto& c = rn.Qd_cheb.c;
    const auto& c1 = rnp1.Qd_cheb.c;
    int d = rn.d;
    real a = rn.Qd_cheb.a, b = rn.Qd_cheb.b;
    // tau T_i = (b-a)/4 (T_{i+1} + T_{i-1}) + (a+b)/2 T_i, reading tau^d via T_d and T_{d+1} terms
    std::vector<real> tq(d + 2, real(0));
    real h = (b - a) / 4, m = (a + b) / 2;
    for (int i = 0; i <= d; ++i) {
        if (i == 0) {
            tq[1] += 2 * h * c[0];
        } else {
            tq[i + 1] += h * c[i];
            tq[i - 1] += h * c[i];
        }
        tq[i] += m * c[i];
    }
    // both monic of degree d+1, so difference has degree <= d
    return chebyshev_lead(d, a, b) * (tq[d] - c1[d]);
}

inline std::vector<Poly> generate_by_recurrence(int p, const std::map<int, real>& a, int N) {
    std::vector<Poly> Q;
    for (int l = 0; l <= std::min(p, N); ++l) Q.push_back(Poly::monomial(l));
    for (int n = p; n + 1 <= N; ++n) {
        auto it = a.find(n);
        if (it == a.end()) throw validation_error("missing recurrence coefficient a_" + std::to_string(n));
        Q.push_back(Q[n].shift_up() - it->second * Q[n - p]);
    }
    return Q;
}

struct HessenbergResult {
    Matrix H;
    Poly charpoly;  // monic, ascending
};

// Characteristic polynomial det(x I - A) by the division-free Berkowitz algorithm.
inline Poly berkowitz_charpoly(const Matrix& A) {
    size_t n = A.size();
    std::vector<real> C{real(1)};
    if (n == 0) return Poly({real(1)});
    C.push_back(-A[0][0]);
    for (size_t r = 1; r < n; ++r) {
        std::vector<real> t(r + 2, real(0));
        t[0] = 1;
        t[1] = -A[r][r];
        std::vector<real> v(r);
        for (size_t i = 0; i < r; ++i) v[i] = A[i][r];
        for (size_t k = 2; k <= r + 1; ++k) {
            real s = 0;
            for (size_t i = 0; i < r; ++i) s += A[r][i] * v[i];
            t[k] = -s;
            std::vector<real> nv(r, real(0));
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < r; ++j) nv[i] += A[i][j] * v[j];
            v = std::move(nv);
        }
        std::vector<real> NC(r + 2, real(0));
        for (size_t i = 0; i < r + 2; ++i)
            for (size_t j = 0; j <= std::min(i, r); ++j) NC[i] += t[i - j] * C[j];
        C = std::move(NC);
    }
    Poly out;
    out.c.assign(C.rbegin(), C.rend());
    return out;
}

inline HessenbergResult hessenberg_truncation(int p, const std::map<int, real>& a, int n) {
    HessenbergResult r;
    r.H.assign(n, std::vector<real>(n, real(0)));
    for (int i = 0; i + 1 < n; ++i) r.H[i][i + 1] = 1;
    for (int i = p; i < n; ++i) {
        auto it = a.find(i);
        if (it == a.end()) throw validation_error("missing recurrence coefficient a_" + std::to_string(i));
        r.H[i][i - p] = it->second;
    }
    r.charpoly = berkowitz_charpoly(r.H);
    return r;
}

struct InterlacingReport {
    bool ok = true;
    int rays_checked = 0;
    std::string detail;
};

inline int ray_index(const complex& z, int p) {
    real t = arg(z) * (p + 1) / (2 * pi_value());
    long m = boost::multiprecision::lround(t);
    return static_cast<int>(mod_pos(m, p + 1));
}

// Nonzero roots of Q_n and Q_{n+1} alternate along each ray.
inline InterlacingReport interlacing_check(const QnRecord& rn, const QnRecord& rnp1) {
    InterlacingReport rep;
    int p = rn.p;
    std::vector<std::vector<std::pair<real, int>>> rays(p + 1);
    for (const auto* rec : {&rn, &rnp1}) {
        int tag = rec == &rn ? 0 : 1;
        for (const auto& z : rec->star_zeros) {
            if (z.re == 0 && z.im == 0) continue;
            rays[ray_index(z, p)].push_back({abs(z), tag});
        }
    }
    for (int m = 0; m <= p; ++m) {
        auto& v = rays[m];
        std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.first < y.first; });
        ++rep.rays_checked;
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            if (v[i].second == v[i + 1].second || !(v[i].first < v[i + 1].first)) {
                rep.ok = false;
                rep.detail = "ray " + std::to_string(m) + ": ordering breaks at position " + std::to_string(i);
                return rep;
            }
        }
        int cn = 0, cn1 = 0;
        for (auto& e : v) (e.second ? cn1 : cn)++;
        if (std::abs(cn - cn1) > 1) {
            rep.ok = false;
            rep.detail = "ray " + std::to_string(m) + ": zero counts differ by more than one";
            return rep;
        }
    }
    return rep;
}

// a_n from consecutive records; fills rec.a_n and the sequence.
inline RecurrenceSequence recurrence_from_records(std::vector<QnRecord>& recs) {
    RecurrenceSequence seq;
    if (recs.empty()) return seq;
    int p = recs[0].p;
    seq.p = p;
    for (size_t n = p; n + 1 < recs.size(); ++n) {
        real a;
        real res;
        if (n <= 60) {
            auto e = extract_an(recs[n + 1].Qn(), recs[n].Qn(), recs[n - p].Qn());
            a = e.a_n;
            res = e.residual;
        } else {
            a = extract_an_reduced(recs[n], recs[n + 1]);
            res = -1;
        }
        if (!(a > 0)) throw structural_error("nonpositive recurrence coefficient a_" + std::to_string(n));
        recs[n].a_n = a;
        seq.a[static_cast<int>(n)] = a;
        if (res >= 0) seq.residuals[static_cast<int>(n)] = res;
    }
    return seq;
}

}  // namespace nikishin
