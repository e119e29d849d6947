#include "rfnet/kernel_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rfnet/errors.hpp"

namespace rfnet {

void write_kernel(std::ostream& os, const Kernel2D& kernel) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", kernel.sigma);
    os << "RFK1 " << kernel.order_x << ' ' << kernel.order_y << ' ' << buf << ' '
       << kernel.radius << ' ' << (kernel.l2_normalized ? 1 : 0) << '\n';
    const int side = kernel.side();
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            std::snprintf(buf, sizeof buf, "%.17g", kernel.taps[static_cast<size_t>(y) * side + x]);
            os << buf << (x + 1 < side ? " " : "\n");
        }
    }
}

void write_kernel_file(const std::string& path, const Kernel2D& kernel) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open kernel file for writing: " + path);
    write_kernel(os, kernel);
    if (!os) throw DataError("write failed: " + path);
}

Kernel2D read_kernel(std::istream& is) {
    std::string magic;
    is >> magic;
    if (magic != "RFK1") throw DataError("kernel file: expected RFK1 header, got '" + magic + "'");
    Kernel2D k;
    int normalized = 0;
    if (!(is >> k.order_x >> k.order_y >> k.sigma >> k.radius >> normalized))
        throw DataError("kernel file: malformed header line");
    k.l2_normalized = normalized != 0;
    const size_t n = static_cast<size_t>(k.side()) * k.side();
    k.taps.resize(n);
    for (size_t i = 0; i < n; ++i)
        if (!(is >> k.taps[i])) throw DataError("kernel file: truncated tap matrix");
    return k;
}

Kernel2D read_kernel_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open kernel file: " + path);
    return read_kernel(is);
}

}  // namespace rfnet
