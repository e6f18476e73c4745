#pragma once

#include <filesystem>

#include "pvinspect/raster.hpp"

namespace pvinspect::io {

/// Loads a raster file as-is: 16-bit single channel -> Gray16, 8-bit single
/// channel -> Gray8, anything with color -> RGB8. Throws Error on failure.
Image read_image(const std::filesystem::path& path);

/// Writes by extension (PNG, TIFF, JPEG). 16-bit rasters need PNG or TIFF.
void write_image(const std::filesystem::path& path, const Image& img);

}  // namespace pvinspect::io
