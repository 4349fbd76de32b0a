#pragma once

#include <filesystem>

#include "biomaudit/types.hpp"

namespace biomaudit {

/// Decodes a PNG or JPEG file into an RGB buffer. Grayscale sources are
/// expanded to three identical channels. Throws MissingFile,
/// UnsupportedFormat (magic bytes are neither PNG nor JPEG) or DecodeError.
PixelBuffer decode_image(const std::filesystem::path& path);

/// Writes an RGB buffer as a PNG file. Throws WriteError.
void write_png(const std::filesystem::path& path, const PixelBuffer& img);

}  // namespace biomaudit
