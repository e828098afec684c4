#include "mwo/holo/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "mwo/csv.hpp"
#include "mwo/error.hpp"

namespace mwo::holo {

namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

constexpr char kMagic[8] = {'M', 'W', 'H', 'O', 'L', 'O', '0', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw PreconditionError("field binary: truncated input");
  return v;
}

}  // namespace

void write_field_csv(std::ostream& out, const ScalarField& f) {
  f.validate();
  const Grid& g = f.grid;
  if (g.dim == 1)
    write_csv_row(out, {"x", "re", "im", "intensity"});
  else
    write_csv_row(out, {"x", "y", "re", "im", "intensity"});
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const auto a = f.amplitude[g.index(i, j)];
      std::vector<std::string> row{format_double(g.x(i))};
      if (g.dim == 2) row.push_back(format_double(g.y(j)));
      row.push_back(format_double(a.real()));
      row.push_back(format_double(a.imag()));
      row.push_back(format_double(std::norm(a)));
      write_csv_row(out, row);
    }
  if (!out) throw std::ios_base::failure("field csv: write failed");
}

void write_field_binary(std::ostream& out, const ScalarField& f) {
  f.validate();
  const Grid& g = f.grid;
  if (g.dim == 2 && g.dx != g.dy) throw PreconditionError("field binary: 2D fields need equal spacing on both axes");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
  put<std::uint32_t>(out, 0);
  put<double>(out, g.dx);
  for (const auto& a : f.amplitude) {
    put<double>(out, a.real());
    put<double>(out, a.imag());
    put<double>(out, std::norm(a));
  }
  if (!out) throw std::ios_base::failure("field binary: write failed");
}

ScalarField read_field_binary(std::istream& in, double wavelength) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw PreconditionError("field binary: bad magic");
  const auto dim = get<std::uint32_t>(in);
  const auto nx = get<std::uint32_t>(in);
  const auto ny = get<std::uint32_t>(in);
  get<std::uint32_t>(in);
  const auto dx = get<double>(in);
  const Grid g = dim == 1 ? Grid::line(nx, dx) : Grid::plane(nx, ny, dx, dx);
  if (dim == 1 && ny != 1) throw PreconditionError("field binary: 1D header with ny != 1");
  ScalarField f{g, std::vector<Complex>(g.size()), wavelength, {}};
  for (auto& a : f.amplitude) {
    const double re = get<double>(in), im = get<double>(in);
    get<double>(in);
    a = {re, im};
  }
  return f;
}

}  // namespace mwo::holo
