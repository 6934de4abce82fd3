#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace stratwelfare {

// Correctly rounded floating-point summation (Shewchuk partials, as in
// Python's math.fsum). The rounded result depends only on the multiset of
// addends, never on their order, and is monotone in every addend. Score
// totals are compared for exact ties, so both properties are load-bearing:
// a candidate's total must not depend on which voter happens to be voter 0.
//
// Requires strict IEEE-754 double arithmetic; do not build with -ffast-math.
class ExactSum {
public:
    ExactSum() = default;

    void add(double x) {
        std::size_t kept = 0;
        for (std::size_t j = 0; j < partials_.size(); ++j) {
            double y = partials_[j];
            if (std::fabs(x) < std::fabs(y)) {
                std::swap(x, y);
            }
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) {
                partials_[kept++] = lo;
            }
            x = hi;
        }
        partials_.resize(kept);
        partials_.push_back(x);
    }

    [[nodiscard]] double value() const { return round(partials_.data(), partials_.size()); }

    // Rounded value of (this + x) without modifying this accumulator.
    [[nodiscard]] double value_plus(double x) const {
        ExactSum copy = *this;
        copy.add(x);
        return copy.value();
    }

private:
    static double round(const double* p, std::size_t n) {
        if (n == 0) {
            return 0.0;
        }
        --n;
        double hi = p[n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = p[--n];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) {
                break;
            }
        }
        // Half-way case: the discarded tail decides the rounding direction.
        if (n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            const double yr = x - hi;
            if (y == yr) {
                hi = x;
            }
        }
        return hi;
    }

    std::vector<double> partials_;
};

}  // namespace stratwelfare
