/**
 * @file bernoulli.hpp
 * @brief Streamline equation y' = a(z)/y + y/F near the point of total
 * reflection: closed form through u = y^2 and an RK4 companion.
 *
 * a(z) is a polynomial; the named preset is a(z) = z (1 + 2 pi f z).
 */
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wolter/types.hpp"

namespace wolter {

struct BernoulliParams {
    /// a(z) = sum a_coeffs[i] z^i
    std::vector<double> a_coeffs{0.0, 1.0};
    /// b(z) = 1/F
    double F = 1.0;
    double z_min = 0.0;
    double z_max = 1.0;
    /// y(z_min)
    double y0 = 1.0;

    static BernoulliParams wolter_preset(double f, double F, double z_min, double z_max, double y0) {
        return {{0.0, 1.0, kTwoPi * f}, F, z_min, z_max, y0};
    }

    double a(double z) const {
        double v = 0.0;
        for (auto it = a_coeffs.rbegin(); it != a_coeffs.rend(); ++it) v = v * z + *it;
        return v;
    }
    double b() const { return 1.0 / F; }

    void validate() const {
        if (F == 0.0 || !std::isfinite(F)) throw std::invalid_argument("BernoulliParams: F must be finite and nonzero");
        if (!(z_min < z_max)) throw std::invalid_argument("BernoulliParams: need z_min < z_max");
    }
};

/// u(z) = C exp(2 (z - z_min) / F) + P(z), P the polynomial particular
/// solution of u' = 2u/F + 2a(z).
class BernoulliClosedForm {
public:
    explicit BernoulliClosedForm(BernoulliParams params) : p_(std::move(params)) {
        p_.validate();
        const std::size_t deg = p_.a_coeffs.size();
        poly_.assign(deg, 0.0);
        // (i+1) p_{i+1} - (2/F) p_i = 2 c_i, solved from the top degree down
        double next = 0.0;
        for (std::size_t k = deg; k-- > 0;) {
            poly_[k] = 0.5 * p_.F * (static_cast<double>(k + 1) * next - 2.0 * p_.a_coeffs[k]);
            next = poly_[k];
        }
        C_ = p_.y0 * p_.y0 - particular(p_.z_min);
        sign_ = p_.y0 < 0.0 ? -1.0 : 1.0;
        locate_branch_end();
    }

    const BernoulliParams& params() const { return p_; }
    /// Coefficients of P(z), lowest degree first.
    const std::vector<double>& particular_coeffs() const { return poly_; }
    double constant() const { return C_; }

    double particular(double z) const {
        double v = 0.0;
        for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) v = v * z + *it;
        return v;
    }

    double u(double z) const { return C_ * std::exp(2.0 * (z - p_.z_min) / p_.F) + particular(z); }

    /// y(z) on the regular branch; NaN at or past the branch end.
    double operator()(double z) const {
        if (branch_end_ && z >= *branch_end_) return std::numeric_limits<double>::quiet_NaN();
        const double v = u(z);
        if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return sign_ * std::sqrt(v);
    }

    /// First z in the domain where u reaches 0 (the streamline hits y = 0).
    const std::optional<double>& branch_end() const { return branch_end_; }

private:
    void locate_branch_end() {
        if (p_.y0 == 0.0) {
            branch_end_ = p_.z_min;
            return;
        }
        constexpr int kScan = 4096;
        const double dz = (p_.z_max - p_.z_min) / kScan;
        double lo = p_.z_min;
        for (int i = 1; i <= kScan; ++i) {
            const double hi = p_.z_min + dz * i;
            if (u(hi) <= 0.0) {
                double a = lo;
                double c = hi;
                for (int it = 0; it < 200 && c - a > 1e-15 * (1.0 + std::abs(c)); ++it) {
                    const double mid = 0.5 * (a + c);
                    if (u(mid) > 0.0)
                        a = mid;
                    else
                        c = mid;
                }
                branch_end_ = c;
                return;
            }
            lo = hi;
        }
    }

    BernoulliParams p_;
    std::vector<double> poly_;
    double C_ = 0.0;
    double sign_ = 1.0;
    std::optional<double> branch_end_;
};

inline BernoulliClosedForm bernoulli_closed_form(const BernoulliParams& params) { return BernoulliClosedForm(params); }

struct BernoulliSamples {
    std::vector<double> z;
    std::vector<double> y;
    /// The next step would reach or cross y = 0; the samples stop before it.
    bool singular_approach = false;
};

/// Classical RK4 on y' = a(z)/y + y/F from z_min to z_max. The last step is
/// shortened to land on z_max.
inline BernoulliSamples bernoulli_rk4(const BernoulliParams& params, double step) {
    params.validate();
    if (!(step > 0.0)) throw std::invalid_argument("bernoulli_rk4: step must be positive");
    const double b = params.b();
    auto rhs = [&](double z, double y) { return params.a(z) / y + b * y; };

    BernoulliSamples out;
    double z = params.z_min;
    double y = params.y0;
    out.z.push_back(z);
    out.y.push_back(y);
    if (std::abs(y) < 1e-8) {
        out.singular_approach = true;
        return out;
    }
    const auto n = static_cast<std::size_t>(std::ceil((params.z_max - params.z_min) / step - 1e-9));
    for (std::size_t i = 0; i < n; ++i) {
        const double z_next = (i + 1 == n) ? params.z_max : params.z_min + static_cast<double>(i + 1) * step;
        const double h = z_next - z;
        // a stage on the other side of y = 0 means the step crosses the singularity
        bool crossed = false;
        auto stage = [&](double yy) {
            crossed = crossed || !std::isfinite(yy) || (yy > 0.0) != (y > 0.0);
            return yy;
        };
        const double k1 = rhs(z, y);
        const double k2 = rhs(z + 0.5 * h, stage(y + 0.5 * h * k1));
        const double k3 = rhs(z + 0.5 * h, stage(y + 0.5 * h * k2));
        const double k4 = rhs(z + h, stage(y + h * k3));
        const double y_next = stage(y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
        if (crossed || std::abs(y_next) < 1e-8) {
            out.singular_approach = true;
            return out;
        }
        y = y_next;
        z = z_next;
        out.z.push_back(z);
        out.y.push_back(y);
    }
    return out;
}

}  // namespace wolter
