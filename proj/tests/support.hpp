#pragma once

#include <cstdint>

#include "drinf/numkernel.hpp"
#include "drinf/rng.hpp"

namespace testing_support {

// Gaussian data for property tests; stream lane keeps fixtures apart.
inline drinf::DataMatrix gaussian_data(std::size_t n, std::size_t m, std::uint64_t seed,
                                       double shift = 0.0) {
    drinf::Philox rng(drinf::stream_for(seed, 0, drinf::Purpose::data, 7));
    drinf::Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index k = 0; k < x.cols(); ++k) {
            x(i, k) = rng.normal() + shift + 0.3 * static_cast<double>(k);
        }
    }
    return drinf::DataMatrix(x);
}

}  // namespace testing_support
