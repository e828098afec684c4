#pragma once

#include <vector>

#include "mwo/holo/grid.hpp"

namespace mwo::holo {

// In-place DFT over the grid (1D or 2D, x fastest). forward is unnormalized,
// inverse divides by the sample count, so inverse(forward(x)) == x.
void fft_forward(std::vector<Complex>& data, const Grid& grid);
void fft_inverse(std::vector<Complex>& data, const Grid& grid);

// Spatial frequencies (cycles per length) in FFT order for one axis.
std::vector<double> fft_frequencies(std::size_t n, double spacing);

}  // namespace mwo::holo
