#pragma once

#include <string>

#include "mvd/image.hpp"

namespace mvd {

// MVIMG1 container: 6-byte magic "MVIMG1", u8 tag length, ASCII manifold
// tag, three little-endian u32 (n1, n2, point_len), then
// n1*n2*point_len little-endian float64, pixels columnwise, point
// components contiguous per pixel.
ManifoldImage read_mvimg(const std::string& path);
void write_mvimg(const std::string& path, const ManifoldImage& image);

}  // namespace mvd
