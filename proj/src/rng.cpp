#include "pgarch/rng.hpp"

#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>

namespace pgarch {

double draw_epsilon(const InnovationDist& dist, CounterRng& rng) {
    switch (dist.kind) {
        case InnovationDist::Kind::Gaussian:
            return boost::random::normal_distribution<double>(0.0, 1.0)(rng);
        case InnovationDist::Kind::StudentT: {
            const double t = boost::random::student_t_distribution<double>(dist.nu)(rng);
            return t * std::sqrt((dist.nu - 2.0) / dist.nu);
        }
        case InnovationDist::Kind::Unit:
            return (rng() >> 63) != 0U ? 1.0 : -1.0;
    }
    return 0.0;
}

}  // namespace pgarch
