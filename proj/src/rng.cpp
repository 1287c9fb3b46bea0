#include "sasaki/rng.hpp"

#include <cmath>

namespace sasaki {

double NormalSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1)
    double u1 = 1.0 - rng_.uniform();
    double u2 = rng_.uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

}  // namespace sasaki
