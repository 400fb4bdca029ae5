#include "moveseg/morphology.hpp"

#include <algorithm>

namespace moveseg {

namespace {

void check_kernel(int kernel_size) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw ValidationError("morphology: kernel_size must be odd and >= 1");
}

// Square SE separates into a horizontal and a vertical 1-D pass.
// `erode_pass` true computes AND over the window (outside = false),
// false computes OR (outside contributes nothing).
BinaryMask pass_1d(const BinaryMask& in, int radius, bool horizontal, bool erode_pass) {
    BinaryMask out(in.width, in.height);
    const int limit = horizontal ? in.width : in.height;
    const int other = horizontal ? in.height : in.width;
    for (int a = 0; a < other; ++a) {
        for (int b = 0; b < limit; ++b) {
            bool acc = erode_pass;
            for (int d = -radius; d <= radius; ++d) {
                int bb = b + d;
                bool v = false;
                if (bb >= 0 && bb < limit)
                    v = horizontal ? in.at(bb, a) : in.at(a, bb);
                if (erode_pass)
                    acc = acc && v;
                else
                    acc = acc || v;
                if (acc != erode_pass)
                    break;
            }
            if (horizontal)
                out.set(b, a, acc);
            else
                out.set(a, b, acc);
        }
    }
    return out;
}

} // namespace

BinaryMask erode(const BinaryMask& mask, int kernel_size) {
    check_kernel(kernel_size);
    int r = kernel_size / 2;
    if (r == 0)
        return mask;
    return pass_1d(pass_1d(mask, r, true, true), r, false, true);
}

BinaryMask dilate(const BinaryMask& mask, int kernel_size) {
    check_kernel(kernel_size);
    int r = kernel_size / 2;
    if (r == 0)
        return mask;
    return pass_1d(pass_1d(mask, r, true, false), r, false, false);
}

} // namespace moveseg
