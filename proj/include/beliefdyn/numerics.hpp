#pragma once

#include <cmath>

namespace beliefdyn {

/// Neumaier compensated accumulator. Sums whose terms cancel in pairs
/// (weighted log-ratios of opposing agents) come out exact instead of
/// carrying O(ulp(max partial)) noise.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace beliefdyn
