#ifndef RFNET_KERNEL_IO_HPP
#define RFNET_KERNEL_IO_HPP

#include <iosfwd>
#include <string>

#include "rfnet/scalespace.hpp"

namespace rfnet {

/// Plain-text kernel dump, one file per kernel:
///   RFK1 order_x order_y sigma radius normalized
/// followed by 2*radius+1 rows of 2*radius+1 space-separated taps,
/// 17 significant digits (doubles round-trip exactly).
void write_kernel(std::ostream& os, const Kernel2D& kernel);
void write_kernel_file(const std::string& path, const Kernel2D& kernel);
Kernel2D read_kernel(std::istream& is);
Kernel2D read_kernel_file(const std::string& path);

}  // namespace rfnet

#endif
