#pragma once

// Periodic cubic spline on a uniform grid (cyclic tridiagonal solve).

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tanglelab {

class PeriodicSpline {
  public:
    // values[i] at x_i = i * period / n, i = 0..n-1.
    PeriodicSpline(double period, std::vector<double> values)
        : period_(period), y_(std::move(values)) {
        const std::size_t n = y_.size();
        if (n < 3) throw std::domain_error("PeriodicSpline: need at least 3 nodes");
        h_ = period_ / static_cast<double>(n);
        // Second derivatives m satisfy m_{i-1} + 4 m_i + m_{i+1} = rhs_i (cyclic).
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ym = y_[(i + n - 1) % n], yp = y_[(i + 1) % n];
            rhs[i] = 6.0 * (ym - 2.0 * y_[i] + yp) / (h_ * h_);
        }
        m_ = solve_cyclic(rhs);
    }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double t = std::fmod(x, period_);
        if (t < 0.0) t += period_;
        std::size_t j = static_cast<std::size_t>(t / h_);
        if (j >= n) j = n - 1;
        const double dx = t - j * h_;
        const double dx1 = h_ - dx;
        const std::size_t jp = (j + 1) % n;
        return (m_[j] * dx1 * dx1 * dx1 + m_[jp] * dx * dx * dx) / (6.0 * h_) +
               (y_[j] / h_ - m_[j] * h_ / 6.0) * dx1 + (y_[jp] / h_ - m_[jp] * h_ / 6.0) * dx;
    }

  private:
    // Tridiagonal (1, 4, 1) with periodic corners, via Sherman-Morrison.
    std::vector<double> solve_cyclic(const std::vector<double>& r) const {
        const std::size_t n = r.size();
        const double gamma = -4.0;
        std::vector<double> bb(n, 4.0);
        bb[0] = 4.0 - gamma;
        bb[n - 1] = 4.0 - 1.0 / gamma;
        auto tridiag = [&](const std::vector<double>& d) {
            std::vector<double> x(n), cp(n);
            double beta = bb[0];
            x[0] = d[0] / beta;
            for (std::size_t i = 1; i < n; ++i) {
                cp[i] = 1.0 / beta;
                beta = bb[i] - cp[i];
                x[i] = (d[i] - x[i - 1]) / beta;
            }
            for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i + 1] * x[i + 1];
            return x;
        };
        std::vector<double> x = tridiag(r);
        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = 1.0;
        std::vector<double> z = tridiag(u);
        const double fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
        for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
        return x;
    }

    double period_, h_;
    std::vector<double> y_, m_;
};

}  // namespace tanglelab
