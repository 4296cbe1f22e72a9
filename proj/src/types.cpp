#include "specreg/types.hpp"

#include <cmath>
#include <string>

namespace specreg {

Kernel4D::Kernel4D(int k_, int g_, int h_) : k(k_), g(g_), h(h_) {
    if (k < 1 || g < 1 || h < 1)
        throw Error(Errc::invalid_argument, "kernel dimensions must be positive");
    data.assign(static_cast<std::size_t>(k) * k * g * h, 0.0);
}

void Kernel4D::validate() const {
    if (k < 1 || g < 1 || h < 1)
        throw Error(Errc::invalid_argument, "kernel dimensions must be positive");
    const std::size_t want = static_cast<std::size_t>(k) * k * g * h;
    if (data.size() != want)
        throw Error(Errc::dimension_mismatch,
                    "kernel data length " + std::to_string(data.size()) +
                        " does not match declared shape (" + std::to_string(want) + " entries)");
    for (double v : data)
        if (!std::isfinite(v))
            throw Error(Errc::non_finite, "kernel contains a non-finite entry");
}

Tensor3::Tensor3(int N_, int c_) : N(N_), c(c_) {
    if (N < 1 || c < 1)
        throw Error(Errc::invalid_argument, "tensor dimensions must be positive");
    data.assign(static_cast<std::size_t>(N) * N * c, 0.0);
}

void Tensor3::validate() const {
    if (N < 1 || c < 1)
        throw Error(Errc::invalid_argument, "tensor dimensions must be positive");
    const std::size_t want = static_cast<std::size_t>(N) * N * c;
    if (data.size() != want)
        throw Error(Errc::dimension_mismatch,
                    "tensor data length " + std::to_string(data.size()) +
                        " does not match declared shape (" + std::to_string(want) + " entries)");
    for (double v : data)
        if (!std::isfinite(v))
            throw Error(Errc::non_finite, "tensor contains a non-finite entry");
}

} // namespace specreg
