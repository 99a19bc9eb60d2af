#pragma once

#include "nikishin/asymptotics.hpp"
#include "nikishin/second_kind.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace nikishin {

struct HPApproximant {
    int n = 0, p = 1;
    std::vector<long> multiindex;
    Poly denominator;             // Q_n
    std::vector<Poly> numerators; // Q_{n,j}, j = 0..p-1
};

// Q_{n,j}(z) = int (Q_n(z) - Q_n(t))/(z - t) ds_j(t), from the star moments of s_j.
inline std::vector<Poly> numerators(const MuHierarchy& H, const QnRecord& rec) {
    int p = H.p(), n = rec.n;
    Poly Q = rec.Qn();
    std::vector<Poly> out;
    for (int j = 0; j < p; ++j) {
        Poly N;
        N.c.assign(std::max(n, 1), real(0));
        for (int i = 0; i < n; ++i)
            for (int m = i + 1; m <= n; ++m) {
                if (Q.c[m] == 0) continue;
                N.c[i] += Q.c[m] * H.star_moment(j, m - 1 - i);
            }
        out.push_back(std::move(N));
    }
    return out;
}

inline HPApproximant build_hp(const MuHierarchy& H, const QnRecord& rec) {
    HPApproximant a;
    a.n = rec.n;
    a.p = H.p();
    a.multiindex = hp_multiindex(rec.n, a.p);
    a.denominator = rec.Qn();
    a.numerators = numerators(H, rec);
    return a;
}

// Laurent coefficients of Q_n shat_j - Q_{n,j} at infinity: coefficient of z^{-r} is
// int Q_n(t) t^{r-1} ds_j(t). Returns the largest relative size for r = 1..n_j.
inline real laurent_order_defect(const MuHierarchy& H, const QnRecord& rec, int j) {
    Poly Q = rec.Qn();
    long nj = hp_multiindex(rec.n, H.p()).at(j);
    real worst = 0;
    for (long r = 1; r <= nj; ++r) {
        real s = 0, mag = 0;
        for (int m = 0; m <= rec.n; ++m) {
            if (Q.c[m] == 0) continue;
            real t = Q.c[m] * H.star_moment(j, m + static_cast<int>(r) - 1);
            s += t;
            mag += abs(t);
        }
        if (mag > 0) worst = std::max(worst, real(abs(s) / mag));
    }
    return worst;
}

// Phi_{n,j+1}(z) = int Q_n(t)/(z - t) ds_j(t) by pulling s_j back to the segment ray by ray:
// int F ds_j = (1/(p+1)) sum_m w^{-mj} int F(w^m tau^{1/(p+1)}) tau^{-j/(p+1)} dmu_{0,j}(tau).
inline complex phi_direct(const MuHierarchy& H, const QnRecord& rec, int j, const complex& z) {
    int p = H.p();
    const auto& m = H.mu(0, j);
    std::vector<complex> w(p + 1);
    for (int r = 0; r <= p; ++r) w[r] = root_of_unity(r, p + 1);
    complex s(real(0));
    for (size_t q = 0; q < m.size(); ++q) {
        real rho = boost::multiprecision::pow(m.nodes[q], real(1) / (p + 1));
        real scale = m.weights[q] / boost::multiprecision::pow(rho, j);
        complex inner(real(0));
        for (int r = 0; r <= p; ++r) {
            complex t = w[r] * rho;
            complex wr = w[(p + 1 - (r * j) % (p + 1)) % (p + 1)];  // w^{-rj}
            inner += wr * rec.eval_Qn(t) / (z - t);
        }
        s += inner * scale;
    }
    return s / real(p + 1);
}

// Phi_{n,k}(z) = sum_{i=1}^k (-1)^{i-1} shat_{i,k-1}(z) Psi_{n,i}(z), shat_{k,k-1} = 1.
inline complex phi_via_psi(const SecondKindFamily& fam, int k, const complex& z) {
    const MuHierarchy& H = fam.hierarchy();
    complex s(real(0));
    for (int i = 1; i <= k; ++i) {
        complex f = i == k ? complex(real(1)) : H.s_hat(i, k - 1, z);
        complex term = f * fam.Psi(i, z);
        if (i % 2 == 0) term = -term;
        s += term;
    }
    return s;
}

inline complex phi_eval(const SecondKindFamily& fam, int k, const complex& z) { return phi_via_psi(fam, k, z); }

struct RemainderValues {
    complex from_numerators;  // shat_j - Q_{n,j}/Q_n
    complex from_phi;         // Phi_{n,j+1}/Q_n, Phi through the Psi sum
    complex from_phi_direct;  // Phi_{n,j+1}/Q_n, Phi by direct quadrature
    real path_difference;     // relative gap between the first two
    real phi_difference;      // relative gap between the two Phi evaluations
};

inline void check_remainder_point(const QnRecord& rec, const StarSystem& sys, const complex& z) {
    real rad = real("1e-3") * boost::multiprecision::pow(sys.intervals[0].b - sys.intervals[0].a, real(1) / (sys.p + 1));
    for (const auto& t : rec.star_zeros)
        if (abs(z - t) < rad) throw pole_proximity_error("evaluation point too close to a zero of Q_n");
}

inline RemainderValues remainder(const SecondKindFamily& fam, const HPApproximant& hp, int j, const complex& z) {
    const MuHierarchy& H = fam.hierarchy();
    const QnRecord& rec = fam.record();
    check_remainder_point(rec, H.system(), z);
    RemainderValues r;
    complex Qz = rec.eval_Qn(z);
    r.from_numerators = H.s_hat(0, j, z) - hp.numerators.at(j)(z) / Qz;
    complex phi = phi_via_psi(fam, j + 1, z);
    complex phid = phi_direct(H, rec, j, z);
    r.from_phi = phi / Qz;
    r.from_phi_direct = phid / Qz;
    r.path_difference = abs(r.from_numerators - r.from_phi) / abs(r.from_phi);
    r.phi_difference = abs(phi - phid) / abs(phid);
    return r;
}

// log of the predicted limit of |delta_{n,j}(z)|^{1/n}
inline double hp_log_prediction(const EquilibriumResult& eq, std::complex<double> z) {
    int p = static_cast<int>(eq.measures.size());
    std::complex<double> tau = std::pow(z, p + 1);
    double U0 = potential(eq.measures[0], tau) / (p + 1);
    double U1 = p > 1 ? potential(eq.measures[1], tau) / (p + 1) : 0.0;
    return -U1 + 2 * U0 - 2.0 / (p + 1) * eq.constants[0];
}

// |Psi_{n,i+1}(z) / Psi_{n,1}(z)| for i = 1..p-1
inline std::vector<real> dominance_ratios(const SecondKindFamily& fam, const complex& z) {
    std::vector<real> out;
    real base = abs(fam.Psi(1, z));
    for (int i = 2; i <= fam.p(); ++i) out.push_back(abs(fam.Psi(i, z)) / base);
    return out;
}

}  // namespace nikishin
