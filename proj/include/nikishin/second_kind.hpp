#pragma once

#include "nikishin/contour.hpp"
#include "nikishin/mop.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nikishin {

// Functions of the second kind for one index n, all levels k = 0..p.
// Level k values are cached at the Gauss nodes of sigma*_k.
class SecondKindFamily {
public:
    SecondKindFamily(const MuHierarchy& H, QnRecord rec) : H_(&H), rec_(std::move(rec)) {
        p_ = H.p();
        n_ = rec_.n;
        ell_ = rec_.ell;
        vals_.resize(p_);
        sw_.resize(p_);
        for (int k = 0; k < p_; ++k) {
            const auto& m = H.sigma_star(k);
            sw_[k] = m.weights;
            if (k < ell_)
                for (size_t i = 0; i < m.size(); ++i) sw_[k][i] *= m.nodes[i];
            vals_[k].resize(m.size());
            for (size_t i = 0; i < m.size(); ++i) vals_[k][i] = k == 0 ? rec_.Qd_cheb(m.nodes[i]) : psi(k, m.nodes[i]);
        }
        coef_.resize(p_);
        for (int k = 0; k < p_; ++k) {
            coef_[k].resize(vals_[k].size());
            for (size_t i = 0; i < vals_[k].size(); ++i) coef_[k][i] = sw_[k][i] * vals_[k][i];
        }
        zeros_.resize(p_);
        zeros_[0] = rec_.segment_zeros;
        for (int k = 1; k < p_; ++k) zeros_[k] = locate_zeros(k);
        K_.assign(p_ + 2, real(1));  // index k+1 holds K_{n,k}
        for (int k = 0; k < p_; ++k) {
            real s = 0;
            const auto& m = H.sigma_star(k);
            for (size_t i = 0; i < m.size(); ++i)
                s += abs(P(k, m.nodes[i]) * vals_[k][i] / P(k + 1, m.nodes[i]) * sw_[k][i]);
            if (!(s > 0)) throw structural_error("nonpositive normalization integral at n=" + std::to_string(n_));
            K_[k + 1] = 1 / boost::multiprecision::sqrt(s);
        }
        eps_.assign(p_, 0);
        for (int k = 0; k < p_; ++k) eps_[k] = empirical_eps(k);
    }

    const MuHierarchy& hierarchy() const { return *H_; }
    const QnRecord& record() const { return rec_; }
    int n() const { return n_; }
    int p() const { return p_; }
    int ell() const { return ell_; }

    // weights of sigma_{n,k} at the level-k nodes
    const std::vector<real>& sigma_weights(int k) const { return sw_.at(k); }
    const std::vector<real>& level_values(int k) const { return vals_.at(k); }
    const std::vector<real>& nodes(int k) const { return H_->sigma_star(k).nodes; }

    real psi(int k, const real& x) const {
        if (k == 0) return rec_.Qd_cheb(x);
        const auto& m = H_->sigma_star(k - 1);
        check_pole(m, complex(x));
        real s = 0;
        for (size_t i = 0; i < m.size(); ++i) s += sw_[k - 1][i] * vals_[k - 1][i] / (x - m.nodes[i]);
        return ell_ < k ? real(x * s) : s;
    }

    complex psi(int k, const complex& z) const {
        if (k == 0) return rec_.Qd_cheb(z);
        const auto& m = H_->sigma_star(k - 1);
        check_pole(m, z);
        real sr = 0, si = 0;
        for (size_t i = 0; i < m.size(); ++i) {
            real dx = z.re - m.nodes[i];
            real c = coef_[k - 1][i] / (dx * dx + z.im * z.im);
            sr += c * dx;
            si -= c * z.im;
        }
        complex s(sr, si);
        return ell_ < k ? z * s : s;
    }

    // Psi_{n,k}(z) = z^(ell-k) psi_{n,k}(z^(p+1))
    complex Psi(int k, const complex& z) const { return pow_int(z, ell_ - k) * psi(k, pow_int(z, p_ + 1)); }

    // zeros of P_{n,k}; empty for k = -1, p
    const std::vector<real>& zeros(int k) const {
        static const std::vector<real> none;
        if (k < 0 || k >= p_) return none;
        return zeros_[k];
    }
    Poly Pnk(int k) const { return Poly::from_roots(zeros(k)); }
    real P(int k, const real& x) const { return eval_from_roots(zeros(k), x); }
    complex P(int k, const complex& z) const { return eval_from_roots(zeros(k), z); }

    // H_{n,k} = P_{n,k-1} psi_{n,k} / P_{n,k}
    real Hnk(int k, const real& x) const {
        if (k == 0) return real(1);
        return P(k - 1, x) * psi(k, x) / P(k, x);
    }
    complex Hnk(int k, const complex& z) const {
        if (k == 0) return complex(real(1));
        return P(k - 1, z) * psi(k, z) / P(k, z);
    }

    real K(int k) const { return K_.at(k + 1); }
    real kappa(int k) const { return K(k) / K(k - 1); }
    int eps(int k) const { return eps_.at(k); }
    complex hnk(int k, const complex& z) const { return Hnk(k, z) * (K(k - 1) * K(k - 1)); }
    real hnk(int k, const real& x) const { return Hnk(k, x) * K(k - 1) * K(k - 1); }

    // d nu_{n,k} weights at the level-k nodes, literal formula
    std::vector<real> nu_weights(int k) const {
        const auto& m = H_->sigma_star(k);
        std::vector<real> w(m.size());
        for (size_t i = 0; i < m.size(); ++i) {
            const real& t = m.nodes[i];
            w[i] = hnk(k, t) * sw_[k][i] / (P(k - 1, t) * P(k + 1, t));
        }
        return w;
    }

    // int p_{n,k}^2 d|nu_{n,k}|
    real orthonormality(int k) const {
        auto w = nu_weights(k);
        const auto& m = H_->sigma_star(k);
        real s = 0, ka = kappa(k);
        for (size_t i = 0; i < m.size(); ++i) {
            real pv = ka * P(k, m.nodes[i]);
            s += pv * pv * abs(w[i]);
        }
        return s;
    }

    // right-hand side of the integral representation of h_{n,k}, 1 <= k <= p
    complex hnk_integral(int k, const complex& z) const {
        const auto& m = H_->sigma_star(k - 1);
        auto w = nu_weights(k - 1);
        check_pole(m, z);
        complex s(real(0));
        real ka = kappa(k - 1);
        for (size_t i = 0; i < m.size(); ++i) {
            real pv = ka * P(k - 1, m.nodes[i]);
            s += complex(pv * pv * abs(w[i])) / complex(z.re - m.nodes[i], z.im);
        }
        s *= real(eps(k - 1));
        return ell_ < k ? z * s : s;
    }

private:
    std::vector<real> locate_zeros(int k) const {
        long Z = z_count(n_, k, p_);
        if (Z == 0) return {};
        const auto& I = H_->system().intervals[k];
        auto f = [&](const real& x) { return psi(k, x); };
        std::vector<real> r;
        for (int pts = std::max<int>(8 * Z, 32); pts <= 8192; pts *= 2) {
            r = scan_roots(f, I.a, I.b, pts);
            if (static_cast<long>(r.size()) >= Z) break;
        }
        if (static_cast<long>(r.size()) != Z)
            throw structural_error("psi_{" + std::to_string(n_) + "," + std::to_string(k) + "} has " +
                                   std::to_string(r.size()) + " sign changes in (a_k,b_k), expected " +
                                   std::to_string(Z));
        return r;
    }

    int empirical_eps(int k) const {
        const auto& m = H_->sigma_star(k);
        real num = 0, den = 0;
        for (size_t i = 0; i < m.size(); ++i) {
            num += abs(m.weights[i]) * m.nodes[i];
            den += abs(m.weights[i]);
        }
        real bary = num / den;
        // nearest node to the barycenter that is not a near-zero of P_{n,k}
        size_t best = 0;
        real bd = -1;
        for (size_t i = 0; i < m.size(); ++i) {
            real dz = abs(m.nodes[i] - bary);
            if (bd < 0 || dz < bd) {
                bool clash = false;
                for (const auto& z : zeros(k))
                    if (abs(z - m.nodes[i]) < real("1e-6") * (m.b - m.a)) clash = true;
                if (!clash) {
                    bd = dz;
                    best = i;
                }
            }
        }
        const real& t = m.nodes[best];
        real v = hnk(k, t) * sw_[k][best] / (P(k - 1, t) * P(k + 1, t));
        return sign_of(v);
    }

    const MuHierarchy* H_;
    QnRecord rec_;
    int p_ = 1, n_ = 0, ell_ = 0;
    std::vector<std::vector<real>> vals_, sw_, coef_, zeros_;
    std::vector<real> K_;
    std::vector<int> eps_;
};

// Bundle view of one level.
struct SecondKindBundle {
    int n, k;
    Poly Pnk;
    real Knk, kappank;
    int eps_nk;
    std::function<complex(const complex&)> psi_evaluator;
    std::function<complex(const complex&)> hnk_evaluator;
};

inline SecondKindBundle make_bundle(std::shared_ptr<const SecondKindFamily> fam, int k) {
    SecondKindBundle b;
    b.n = fam->n();
    b.k = k;
    b.Pnk = fam->Pnk(k);
    b.Knk = fam->K(k);
    b.kappank = fam->kappa(k);
    b.eps_nk = k < fam->p() ? fam->eps(k) : 0;
    b.psi_evaluator = [fam, k](const complex& z) { return fam->psi(k, z); };
    b.hnk_evaluator = [fam, k](const complex& z) { return fam->hnk(k, z); };
    return b;
}

inline complex psi_eval(const SecondKindFamily& fam, int k, const complex& z) { return fam.psi(k, z); }
inline complex hnk_eval(const SecondKindBundle& b, const complex& z) { return b.hnk_evaluator(z); }

struct NormalizationRow {
    int k;
    real K, kappa;
    int eps;
};

inline std::vector<NormalizationRow> compute_normalization(const SecondKindFamily& fam) {
    std::vector<NormalizationRow> out;
    for (int k = 0; k < fam.p(); ++k) out.push_back({k, fam.K(k), fam.kappa(k), fam.eps(k)});
    return out;
}

inline Poly find_Pnk(const SecondKindFamily& fam, int k) { return fam.Pnk(k); }

// Probe circles: radii are multiples of the largest |endpoint| (of its (p+1)-th root on the star).
struct ProbeSpec {
    real outer = real("1.3"), inner = real("0.6");
    int per_circle = 6;
    real offset = real("0.1");
};

// Off-cut test points in the segment plane: two circles, none on the real axis.
inline std::vector<complex> secondkind_test_points(const StarSystem& sys, const ProbeSpec& ps = {}) {
    std::vector<complex> out;
    real R = 0;
    for (const auto& I : sys.intervals) R = std::max(R, real(std::max(abs(I.a), abs(I.b))));
    real pi = pi_value();
    for (int i = 0; i < ps.per_circle; ++i) {
        real th = pi * (2 * i + 1) / ps.per_circle + ps.offset;
        out.push_back(polar(real(R * ps.outer), th));
        out.push_back(polar(real(R * ps.inner), real(th + 2 * ps.offset)));
    }
    return out;
}

// psi_{n,k} = psi_{n+1,k} + a_n psi_{n-p,k}  (ell <= p-1), or z psi_{n,k} = ... (ell = p);
// returns the largest relative defect over the points.
inline real secondkind_recurrence_check(const SecondKindFamily& fnmp, const SecondKindFamily& fn,
                                        const SecondKindFamily& fnp1, int k, const real& a_n,
                                        const std::vector<complex>& points) {
    real worst = 0;
    bool top = fn.ell() == fn.p();
    for (const auto& z : points) {
        complex lhs = fn.psi(k, z);
        if (top) lhs = lhs * z;
        complex r1 = fnp1.psi(k, z), r2 = fnmp.psi(k, z) * a_n;
        real scale = std::max({abs(lhs), abs(r1), abs(r2)});
        real d = abs(lhs - r1 - r2);
        if (scale > 0) worst = std::max(worst, real(d / scale));
    }
    return worst;
}

struct AuditReport {
    real weighted_residual = 0;  // int psi tau^s dsigma/P_{k+1}, s < Z(n,k)
    real plain_residual = 0;     // int psi tau^s dsigma, s < Z(n,k) - Z(n,k+1)
    real hierarchy_residual = 0; // int psi tau^s dmu_{k,j}, reduced ranges
    long weighted_count = 0, plain_count = 0, hierarchy_count = 0;
};

inline AuditReport orthogonality_audit(const SecondKindFamily& fam, int k) {
    AuditReport rep;
    int p = fam.p(), n = fam.n();
    const auto& x = fam.nodes(k);
    const auto& v = fam.level_values(k);
    const auto& w = fam.sigma_weights(k);
    auto relres = [&](const std::vector<real>& base, long s0, long count, real& out) {
        std::vector<real> t(base);
        for (size_t i = 0; i < t.size(); ++i) t[i] *= boost::multiprecision::pow(x[i], s0);
        for (long s = 0; s < count; ++s) {
            real sum = 0, mag = 0;
            for (size_t i = 0; i < t.size(); ++i) {
                sum += t[i];
                mag += abs(t[i]);
                t[i] *= x[i];
            }
            if (mag > 0) out = std::max(out, real(abs(sum) / mag));
        }
    };
    std::vector<real> b1(x.size()), b2(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        b2[i] = v[i] * w[i];
        b1[i] = b2[i] / fam.P(k + 1, x[i]);
    }
    rep.weighted_count = z_count(n, k, p);
    relres(b1, 0, rep.weighted_count, rep.weighted_residual);
    rep.plain_count = z_count(n, k, p) - z_count(n, k + 1, p);
    relres(b2, 0, rep.plain_count, rep.plain_residual);
    for (int j = k; j < p; ++j) {
        const auto& m = fam.hierarchy().mu(k, j);
        std::vector<real> b3(x.size());
        for (size_t i = 0; i < x.size(); ++i) b3[i] = v[i] * m.weights[i];
        SRange s = condition_range(n, j, p);
        rep.hierarchy_count += s.count();
        relres(b3, s.lo, s.count(), rep.hierarchy_residual);
    }
    return rep;
}

// For k = n mod p: int psi_{n+1,k} tau^(Z(n,k)-Z(n,k+1)-[ell=p]) dsigma_{n,k} = 0 (relative residual).
inline real shifted_moment_check(const SecondKindFamily& fn, const SecondKindFamily& fnp1) {
    int p = fn.p(), n = fn.n();
    int k = n % p;
    long e = z_count(n, k, p) - z_count(n, k + 1, p) - (fn.ell() == p ? 1 : 0);
    const auto& x = fn.nodes(k);
    const auto& w = fn.sigma_weights(k);
    const auto& v = fnp1.level_values(k);
    real sum = 0, mag = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        real t = v[i] * boost::multiprecision::pow(x[i], e) * w[i];
        sum += t;
        mag += abs(t);
    }
    return mag > 0 ? real(abs(sum) / mag) : real(0);
}

struct ZeroCountAudit {
    long expected = 0;
    double local_winding = 0;     // zeros inside the rectangle around (a_k,b_k)
    double elsewhere = 0;         // zeros off the cut, origin and rectangle
    bool elsewhere_checked = false;
    long scan_count = 0;
    bool ok = false;
};

// Argument-principle audit of the zero count of psi_{n,k} on (a_k,b_k).
inline ZeroCountAudit zero_count_audit(const SecondKindFamily& fam, int k) {
    ZeroCountAudit A;
    int p = fam.p();
    A.expected = z_count(fam.n(), k, p);
    A.scan_count = static_cast<long>(fam.zeros(k).size());
    const auto& sys = fam.hierarchy().system();
    const Interval& I = sys.intervals[k];
    real len = I.b - I.a;
    auto f = [&](const complex& z) { return fam.psi(k, z); };
    real x0, x1;
    bool even = k % 2 == 0;
    if (k == 0) {
        x0 = I.a - len / 10;
        x1 = I.b + len / 10;
    } else {
        const Interval& C = sys.intervals[k - 1];
        if (even) {
            real gap = I.a - C.b;
            x0 = I.a > 0 ? real(I.a - std::min(gap, I.a) / 2) : real(len / 1000);
            x1 = I.b + len / 10;
        } else {
            real gap = C.a - I.b;
            x1 = I.b < 0 ? real(I.b + std::min(gap, real(-I.b)) / 2) : real(-len / 1000);
            x0 = I.a - len / 10;
        }
    }
    real h = len / 4;
    A.local_winding = winding_number(f, rectangle(x0, x1, -h, h));
    bool ok = std::lround(A.local_winding) == A.expected && std::abs(A.local_winding - A.expected) < 1e-6;
    if (k >= 1 && I.a != 0 && I.b != 0) {
        const Interval& C = sys.intervals[k - 1];
        real lo = std::min(C.a, real(0)), hi = std::max(C.b, real(0));
        real gap = even ? real(I.a - hi) : real(lo - I.b);
        real mgn = std::min(gap / 4, (hi - lo) / 10);
        real R = 0;
        for (const auto& J : sys.intervals) R = std::max(R, real(std::max(abs(J.a), abs(J.b))));
        R *= 8;
        double big = winding_number(f, circle(R, 256), 4);
        double small = winding_number(f, rectangle(lo - mgn, hi + mgn, -mgn, mgn));
        A.elsewhere = big - small - A.local_winding;
        A.elsewhere_checked = true;
        ok = ok && std::abs(A.elsewhere) < 1e-6;
    }
    A.ok = ok && A.scan_count == A.expected;
    return A;
}

// Least-squares slope of log|psi_{n,k}(R e^{i theta})| against log R, R in [1e3, 1e6].
inline double decay_slope(const SecondKindFamily& fam, int k, double theta = 0.7) {
    std::vector<double> X, Y;
    for (int i = 0; i <= 12; ++i) {
        real lr = real(3) + real(i) / 4;
        real R = boost::multiprecision::pow(real(10), lr);
        complex z = polar(R, real(theta));
        X.push_back(boost::multiprecision::log(R).convert_to<double>());
        Y.push_back(log_abs(fam.psi(k, z)).convert_to<double>());
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < X.size(); ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= X.size();
    my /= Y.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < X.size(); ++i) {
        sxy += (X[i] - mx) * (Y[i] - my);
        sxx += (X[i] - mx) * (X[i] - mx);
    }
    return sxy / sxx;
}

// Closed-form sign ledgers.
inline int sign_H_closed(long n, int j, int p) {
    long ell = n % (p + 1);
    return j <= ell ? (j % 2 ? -1 : 1) : 1;
}

inline int sign_H_recursive(long n, int j, int p) {
    long ell = n % (p + 1);
    int s = 1;
    for (int i = 1; i <= j; ++i) {
        long e = (i + 1) * (z_count(n, i - 2, p) - z_count(n, i, p)) + (i <= ell ? 1 : 0);
        if (e % 2) s = -s;
    }
    return s;
}

// sign(P_{n,k-1} P_{n,k+1}) on Delta_k
inline int sign_PP_general(long n, int k, int p) {
    if (k % 2 == 0) return 1;
    return (z_count(n, k - 1, p) - z_count(n, k + 1, p)) % 2 ? -1 : 1;
}

// the three-case form, stated for k = n mod p
inline int sign_PP_cases(long n, int k, int p) {
    long ell = n % (p + 1);
    if (k % 2 == 0) return 1;
    return k == ell ? 1 : -1;
}

inline int eps_predicted(long n, int k, int p) {
    long ell = n % (p + 1);
    int s = sign_H_recursive(n, k, p) * sign_PP_general(n, k, p);
    if (k < ell && k % 2) s = -s;
    return s;
}

struct SignLedgerRow {
    int n, k;
    int H_empirical;   // 0 if the sign was not constant on the sampled points
    int H_recursive, H_closed;
    bool closed_in_scope;  // k <= n mod p
    int PP_empirical, PP_general, PP_cases;
    int eps_empirical, eps_pred;
};

inline int sampled_sign(const std::function<real(const real&)>& f, const Interval& I, const std::vector<real>& avoid) {
    std::vector<real> pts;
    int N = 40;
    for (int i = 1; i < N; ++i) pts.push_back(I.a + (I.b - I.a) * real(i) / N);
    int s = 0;
    for (const auto& x : pts) {
        bool near = false;
        for (const auto& z : avoid)
            if (abs(z - x) < (I.b - I.a) * real("1e-4")) near = true;
        if (near) continue;
        int t = sign_of(f(x));
        if (t == 0) continue;
        if (s == 0) s = t;
        else if (s != t) return 0;
    }
    return s;
}

inline SignLedgerRow sign_ledger(const SecondKindFamily& fam, int k) {
    SignLedgerRow r;
    int p = fam.p();
    long n = fam.n();
    r.n = static_cast<int>(n);
    r.k = k;
    const Interval& I = fam.hierarchy().system().intervals[k];
    r.H_empirical = sampled_sign([&](const real& x) { return fam.Hnk(k, x); }, I, fam.zeros(k));
    r.H_recursive = sign_H_recursive(n, k, p);
    r.H_closed = sign_H_closed(n, k, p);
    r.closed_in_scope = k <= n % p;
    r.PP_empirical = sampled_sign([&](const real& x) { return real(fam.P(k - 1, x) * fam.P(k + 1, x)); }, I, {});
    r.PP_general = sign_PP_general(n, k, p);
    r.PP_cases = sign_PP_cases(n, k, p);
    r.eps_empirical = fam.eps(k);
    r.eps_pred = eps_predicted(n, k, p);
    return r;
}

// Zeros of P_{n,k} and P_{n+1,k} strictly alternate (empirical probe only).
inline bool pnk_interlacing_probe(const SecondKindFamily& fn, const SecondKindFamily& fnp1, int k) {
    const auto& a = fn.zeros(k);
    const auto& b = fnp1.zeros(k);
    if (a.empty() || b.empty()) return true;
    long diff = static_cast<long>(b.size()) - static_cast<long>(a.size());
    if (diff < -1 || diff > 1) return false;
    std::vector<std::pair<real, int>> all;
    for (const auto& x : a) all.push_back({x, 0});
    for (const auto& x : b) all.push_back({x, 1});
    std::sort(all.begin(), all.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    for (size_t i = 0; i + 1 < all.size(); ++i)
        if (all[i].second == all[i + 1].second || all[i].first == all[i + 1].first) return false;
    return true;
}

}  // namespace nikishin
