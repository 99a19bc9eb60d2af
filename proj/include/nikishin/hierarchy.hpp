#pragma once

#include "nikishin/star_system.hpp"

#include <vector>

namespace nikishin {

// Discretized hierarchy: level k carries the Gauss nodes of sigma*_k; mu(k, j) for
// k <= j reuses those nodes with weights w_i tau_i muhat_{k+1,j}(tau_i).
class MuHierarchy {
public:
    MuHierarchy() = default;
    MuHierarchy(const StarSystem& sys, int quad_order) : sys_(validate_system(sys)), order_(quad_order) {
        int p = sys_.p;
        base_.resize(p);
        for (int k = 0; k < p; ++k)
            base_[k] = segment_quadrature(sys_.densities[k], sys_.intervals[k].a, sys_.intervals[k].b, quad_order);
        table_.assign(p, std::vector<DiscreteMeasure>(p));
        for (int k = p - 1; k >= 0; --k) {
            table_[k][k] = base_[k];
            for (int j = k + 1; j < p; ++j) {
                DiscreteMeasure m = base_[k];
                const DiscreteMeasure& inner = table_[k + 1][j];
                for (size_t i = 0; i < m.size(); ++i) m.weights[i] *= m.nodes[i] * cauchy_transform(inner, m.nodes[i]);
                m.declared_sign = m.observed_sign();
                table_[k][j] = std::move(m);
            }
        }
    }

    const StarSystem& system() const { return sys_; }
    int p() const { return sys_.p; }
    int order() const { return order_; }
    const DiscreteMeasure& sigma_star(int k) const { return base_.at(k); }
    const DiscreteMeasure& mu(int k, int j) const { return table_.at(k).at(j); }

    // muhat_{k,j}(z)
    complex mu_hat(int k, int j, const complex& z) const { return cauchy_transform(mu(k, j), z); }

    // shat_{k,j}(z) = z^(p+k-j) muhat_{k,j}(z^(p+1))
    complex s_hat(int k, int j, const complex& z) const {
        int p = sys_.p;
        return pow_int(z, p + k - j) * mu_hat(k, j, pow_int(z, p + 1));
    }

    // int t^(j + i(p+1)) ds_j(t) = int tau^i dmu_{0,j}(tau)
    real ray_moment(int j, int i) const { return mu(0, j).moment(i); }

    // int t^l ds_j(t); zero unless l = j mod (p+1)
    real star_moment(int j, int l) const {
        int q = sys_.p + 1;
        if (l < j || (l - j) % q != 0) return real(0);
        return ray_moment(j, (l - j) / q);
    }

private:
    StarSystem sys_;
    int order_ = 0;
    std::vector<DiscreteMeasure> base_;
    std::vector<std::vector<DiscreteMeasure>> table_;
};

inline MuHierarchy build_mu_hierarchy(const StarSystem& sys, int quad_order) { return MuHierarchy(sys, quad_order); }

}  // namespace nikishin
