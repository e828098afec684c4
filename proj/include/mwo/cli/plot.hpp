#pragma once

#include <string>

namespace mwo::cli {

// Renders figure "fig1" (side-mode population panels from fwm outputs) or
// "fig2" (reconstructed intensity with the object rectangle inset) from the
// CSVs a manifest lists. Writes <manifest dir>/<figure>.svg and returns its
// path. Nothing is written when a CSV is empty or lacks a column.
std::string plot(const std::string& manifest_path, const std::string& figure);

}  // namespace mwo::cli
