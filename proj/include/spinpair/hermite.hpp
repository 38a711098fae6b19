#ifndef SPINPAIR_HERMITE_HPP
#define SPINPAIR_HERMITE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spinpair {

// Cubic Hermite interpolant on a uniform grid t_i = t0 + i*h, with values
// and first derivatives stored at the nodes. Immutable after construction,
// safe to evaluate concurrently.
template <class T>
class HermiteSeries {
public:
    HermiteSeries() = default;
    HermiteSeries(double t0, double h, std::vector<T> values, std::vector<T> slopes)
        : t0_(t0), h_(h), v_(std::move(values)), d_(std::move(slopes)) {
        if (v_.size() != d_.size() || v_.size() < 2)
            throw std::invalid_argument("HermiteSeries: bad node arrays");
        if (!(h_ > 0.0)) throw std::invalid_argument("HermiteSeries: bad step");
        prefix_.resize(v_.size());
        prefix_[0] = T{};
        for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
            const T seg = h_ * (0.5 * (v_[i] + v_[i + 1])) +
                          (h_ * h_ / 12.0) * (d_[i] - d_[i + 1]);
            prefix_[i + 1] = prefix_[i] + seg;  // exact for the cubic segment
        }
    }

    double t_max() const { return t0_ + h_ * static_cast<double>(v_.size() - 1); }
    std::size_t size() const { return v_.size(); }

    T operator()(double t) const {
        std::size_t i;
        double s;
        locate(t, i, s);
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * v_[i] + (h10 * h_) * d_[i] + h01 * v_[i + 1] + (h11 * h_) * d_[i + 1];
    }

    // Integral of the interpolant over [t0, t]; exact for the piecewise cubic.
    T integral_prefix(double t) const {
        std::size_t i;
        double s;
        locate(t, i, s);
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double s4 = s2 * s2;
        const double H00 = 0.5 * s4 - s3 + s;
        const double H10 = 0.25 * s4 - (2.0 / 3.0) * s3 + 0.5 * s2;
        const double H01 = -0.5 * s4 + s3;
        const double H11 = 0.25 * s4 - s3 / 3.0;
        return prefix_[i] + h_ * (H00 * v_[i] + (H10 * h_) * d_[i] +
                                  H01 * v_[i + 1] + (H11 * h_) * d_[i + 1]);
    }

private:
    void locate(double t, std::size_t& i, double& s) const {
        const double x = (t - t0_) / h_;
        if (x < 0.0 || x > static_cast<double>(v_.size() - 1) + 1e-9)
            throw std::out_of_range("HermiteSeries: evaluation outside grid");
        i = static_cast<std::size_t>(std::max(x, 0.0));
        if (i >= v_.size() - 1) i = v_.size() - 2;
        s = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
    }

    double t0_ = 0.0;
    double h_ = 1.0;
    std::vector<T> v_, d_, prefix_;
};

}  // namespace spinpair

#endif
