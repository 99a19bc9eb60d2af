#pragma once

#include "nikishin/equilibrium.hpp"
#include "nikishin/recurrence.hpp"
#include "nikishin/second_kind.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace nikishin {

struct EmpiricalMeasure {
    std::vector<double> atoms;  // sorted
    double lo = 0, hi = 1;

    static EmpiricalMeasure from(const std::vector<real>& pts, double lo, double hi) {
        EmpiricalMeasure m;
        m.lo = lo;
        m.hi = hi;
        for (const auto& x : pts) m.atoms.push_back(x.convert_to<double>());
        std::sort(m.atoms.begin(), m.atoms.end());
        for (double x : m.atoms)
            if (x < lo || x > hi) throw validation_error("empirical measure: atom outside the interval");
        return m;
    }
    size_t size() const { return atoms.size(); }
};

// Kolmogorov distance sup |F_emp - F| for a continuous nondecreasing target CDF F with F(hi) = 1.
inline double weakstar_distance(const EmpiricalMeasure& emp, const std::function<double(double)>& F) {
    size_t n = emp.size();
    if (n == 0) return 1;
    double d = 0;
    for (size_t i = 0; i < n; ++i) {
        double f = F(emp.atoms[i]);
        d = std::max({d, std::fabs(f - double(i) / n), std::fabs(f - double(i + 1) / n)});
    }
    return d;
}

// Same, against a grid measure normalized to unit mass.
inline double weakstar_distance(const EmpiricalMeasure& emp, const GridMeasure& target) {
    double tot = target.total();
    return weakstar_distance(emp, [&](double x) { return target.cdf(x) / tot; });
}

// Rotationally symmetric lift of a segment measure to the star {z : z^(p+1) in [lo, hi]}.
struct StarMeasure {
    GridMeasure base;
    int p = 1;

    // mass of the part of one ray with |z| <= s
    double ray_cdf(double s) const {
        double r = std::pow(s, p + 1);
        double m = base.hi <= 0 ? base.total() - base.cdf(-r) : base.cdf(r);
        return m / (p + 1);
    }
    // U^{lift}(z) = U^{base}(z^(p+1)) / (p+1)
    double potential(std::complex<double> z) const {
        return nikishin::potential(base, std::pow(z, p + 1)) / (p + 1);
    }
    // direct evaluation by quadrature on the rays
    double potential_direct(std::complex<double> z, int pts_per_cell = 8) const {
        std::vector<double> gx(pts_per_cell), gw(pts_per_cell);
        {
            // Gauss-Legendre nodes by Newton on P_n
            int n = pts_per_cell;
            for (int i = 0; i < n; ++i) {
                double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
                double dp = 0;
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1, p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1);
                    double dx = p1 / dp;
                    x -= dx;
                    if (std::fabs(dx) < 1e-16) break;
                }
                gx[i] = x;
                gw[i] = 2 / ((1 - x * x) * dp * dp);
            }
        }
        double odd = base.hi <= 0 ? 1.0 : 0.0;
        double s = 0;
        for (int m = 0; m <= p; ++m) {
            std::complex<double> dir = std::polar(1.0, M_PI * (2 * m + odd) / (p + 1));
            for (size_t c = 0; c < base.cells(); ++c) {
                double dens = base.density(c) / (p + 1);
                for (int q = 0; q < pts_per_cell; ++q) {
                    double tau = base.mid(c) + 0.5 * base.width(c) * gx[q];
                    std::complex<double> t = dir * std::pow(std::fabs(tau), 1.0 / (p + 1));
                    s += 0.5 * base.width(c) * gw[q] * dens * std::log(1 / std::abs(z - t));
                }
            }
        }
        return s;
    }
};

inline StarMeasure star_lift(const GridMeasure& m, int p) { return {m, p}; }

// Kolmogorov distance between the zero counting measure of P_{n,k} and p/(p-k) mu_k.
inline double check_zero_distribution(const SecondKindFamily& fam, int k, const EquilibriumResult& eq) {
    const auto& I = fam.hierarchy().system().intervals.at(k);
    auto emp = EmpiricalMeasure::from(fam.zeros(k), I.a.convert_to<double>(), I.b.convert_to<double>());
    return weakstar_distance(emp, eq.measures.at(k));
}

inline double check_zero_distribution(const QnRecord& rec, const EquilibriumResult& eq) {
    auto emp = EmpiricalMeasure::from(rec.segment_zeros, rec.Qd_cheb.a.convert_to<double>(),
                                      rec.Qd_cheb.b.convert_to<double>());
    return weakstar_distance(emp, eq.measures.at(0));
}

// Zero counting measure of Q_n against the lifted mu_0, ray by ray (the ell zeros at the
// origin are shared equally between the rays).
inline double check_star_zero_distribution(const QnRecord& rec, const EquilibriumResult& eq) {
    int p = rec.p;
    StarMeasure target{eq.measures.at(0), p};
    double tot = target.base.total();
    std::vector<std::vector<double>> rays(p + 1);
    for (const auto& z : rec.star_zeros) {
        if (abs(z) == 0) continue;
        rays[ray_index(z, p)].push_back(abs(z).convert_to<double>());
    }
    double n = rec.n, origin = rec.ell / (n * (p + 1));
    double worst = 0;
    for (auto& r : rays) {
        std::sort(r.begin(), r.end());
        for (size_t i = 0; i < r.size(); ++i) {
            double f = target.ray_cdf(r[i]) / tot;
            worst = std::max({worst, std::fabs(f - origin - i / n), std::fabs(f - origin - (i + 1) / n)});
        }
    }
    return worst;
}

// log of the predicted limit of |psi_{n,k}(z)|^{1/Z(n,0)}
inline double psi_log_prediction(const EquilibriumResult& eq, int k, std::complex<double> z) {
    int p = static_cast<int>(eq.measures.size());
    double v = 0;
    if (k < p) v -= potential(eq.measures[k], z);
    if (k >= 1) v += potential(eq.measures[k - 1], z);
    for (int j = 0; j < k; ++j) v -= 2 * eq.constants[j];
    return v;
}

// log of the predicted limit of |Psi_{n,k}(z)|^{1/n}
inline double Psi_log_prediction(const EquilibriumResult& eq, int k, std::complex<double> z) {
    int p = static_cast<int>(eq.measures.size());
    return psi_log_prediction(eq, k, std::pow(z, p + 1)) / (p + 1);
}

struct NthRootRow {
    std::complex<double> z;
    double observed, predicted;  // logs
};

struct NthRootCheck {
    std::vector<NthRootRow> rows;
    double max_error = 0;  // max |observed - predicted| / max(1, |predicted|)
};

// |psi_{n,k}(z)|^{1/Z(n,0)} against the potential prediction, in log space.
inline NthRootCheck check_nthroot_psi(const SecondKindFamily& fam, int k, const EquilibriumResult& eq,
                                      const std::vector<complex>& probes) {
    NthRootCheck out;
    long Z0 = z_count(fam.n(), 0, fam.p());
    if (Z0 == 0) throw validation_error("nth-root check needs Z(n,0) > 0");
    for (const auto& z : probes) {
        double obs = log_abs(fam.psi(k, z)).convert_to<double>() / Z0;
        double pred = psi_log_prediction(eq, k, to_std(z));
        out.rows.push_back({to_std(z), obs, pred});
        out.max_error = std::max(out.max_error, std::fabs(obs - pred) / std::max(1.0, std::fabs(pred)));
    }
    return out;
}

// |Psi_{n,k}(z)|^{1/n} on the star.
inline NthRootCheck check_nthroot_Psi(const SecondKindFamily& fam, int k, const EquilibriumResult& eq,
                                      const std::vector<complex>& probes) {
    NthRootCheck out;
    if (fam.n() == 0) throw validation_error("nth-root check needs n > 0");
    for (const auto& z : probes) {
        double obs = log_abs(fam.Psi(k, z)).convert_to<double>() / fam.n();
        double pred = Psi_log_prediction(eq, k, to_std(z));
        out.rows.push_back({to_std(z), obs, pred});
        out.max_error = std::max(out.max_error, std::fabs(obs - pred) / std::max(1.0, std::fabs(pred)));
    }
    return out;
}

// (1/Z(n,0)) log K_{n,k} against sum_{j<=k} w_j
struct KRootRow {
    int k;
    double observed, predicted;
};
inline std::vector<KRootRow> check_K_root(const SecondKindFamily& fam, const EquilibriumResult& eq) {
    std::vector<KRootRow> out;
    long Z0 = z_count(fam.n(), 0, fam.p());
    double pred = 0;
    for (int k = 0; k < fam.p(); ++k) {
        pred += eq.constants[k];
        out.push_back({k, boost::multiprecision::log(fam.K(k)).convert_to<double>() / Z0, pred});
    }
    return out;
}

struct GeometricMeanRow {
    int k, m;
    double geometric_mean, predicted, rel_error;
};

// (prod_{j=1}^m a_{pj+k})^{1/m} against exp(-(2p/(p+1)) sum_{j<=k} w_j)
inline GeometricMeanRow check_an_geometric_mean(const RecurrenceSequence& seq, int k, int m,
                                                const std::vector<double>& w) {
    int p = seq.p;
    real s = 0;
    for (int j = 1; j <= m; ++j) {
        auto it = seq.a.find(p * j + k);
        if (it == seq.a.end()) throw validation_error("a_" + std::to_string(p * j + k) + " not available");
        s += boost::multiprecision::log(it->second);
    }
    double gm = std::exp(s.convert_to<double>() / m);
    double ws = 0;
    for (int j = 0; j <= k; ++j) ws += w.at(j);
    double pred = std::exp(-2.0 * p / (p + 1) * ws);
    return {k, m, gm, pred, std::fabs(gm - pred) / pred};
}

inline GeometricMeanRow check_an_geometric_mean(const RecurrenceSequence& seq, int k, int m,
                                                const EquilibriumResult& eq) {
    return check_an_geometric_mean(seq, k, m, eq.constants);
}

// Probes on the star plane: two circles, angles pushed midway between neighbouring rays of
// Gamma_0 and Gamma_1 when they come within a quarter spacing of one.
inline std::vector<complex> star_test_points(const StarSystem& sys, const ProbeSpec& ps = {}) {
    int p = sys.p;
    real R = 0;
    for (const auto& I : sys.intervals) R = std::max(R, real(std::max(abs(I.a), abs(I.b))));
    real Rz = boost::multiprecision::pow(R, real(1) / (p + 1));
    std::vector<complex> out;
    real pi = pi_value(), step = pi / (p + 1);
    for (int i = 0; i < ps.per_circle; ++i) {
        real th = pi * (2 * i + 1) / ps.per_circle + ps.offset / 2;
        real cell = boost::multiprecision::floor(th / step);
        real frac = th / step - cell;
        if (frac < real("0.25") || frac > real("0.75")) th = (cell + real("0.5")) * step;
        out.push_back(polar(real(Rz * ps.outer), th));
        out.push_back(polar(real(Rz * (ps.inner + real("0.1"))), th));
    }
    return out;
}

}  // namespace nikishin
