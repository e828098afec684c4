#pragma once

#include <iosfwd>
#include <string>

#include "mwo/holo/grid.hpp"

namespace mwo::holo {

// CSV: header "x,re,im,intensity" (1D) or "x,y,re,im,intensity" (2D), SI lengths.
void write_field_csv(std::ostream& out, const ScalarField& f);

// Binary, little-endian: "MWHOLO01", u32 dim, u32 nx, u32 ny, u32 reserved,
// f64 spacing (32 bytes), then (re, im, |psi|^2) f64 triplets, x fastest.
// 2D requires equal spacing on both axes.
void write_field_binary(std::ostream& out, const ScalarField& f);
ScalarField read_field_binary(std::istream& in, double wavelength = 0.0);

}  // namespace mwo::holo
