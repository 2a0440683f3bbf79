#pragma once

#include <vector>

namespace tasep2
{
    /// Integrated densities h_i(u) on a grid of u = n / t. Used both for the
    /// hydrodynamic prediction and for empirical measurements.
    struct HeightProfile
    {
        std::vector<double> u;
        std::vector<double> h_white;
        std::vector<double> h_black;
        std::vector<double> h_star;
        double t = 0.0;
        int n_samples = 0;

        std::size_t size() const noexcept { return u.size(); }
    };
}
