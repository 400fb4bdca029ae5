#pragma once

#include <string>

#include "moveseg/raster.hpp"

namespace moveseg {

// Binary portable anymaps, maxval 255. The writer emits the canonical header
// "P5\n<w> <h>\n255\n" (P6 alike) with a single whitespace byte before the
// sample block, so write(read(f)) == f for canonical files.

RasterU8 read_pnm(const std::string& path);       // P5 -> 1 channel, P6 -> 3
void write_pnm(const std::string& path, const RasterU8& raster);

// BinaryMask as P5 with {0, 255}; on read, values >= 128 are true.
BinaryMask read_mask_pgm(const std::string& path);
void write_mask_pgm(const std::string& path, const BinaryMask& mask);

// ProbMap as P5 with value = round(255 * p); on read, p = value / 255.
ProbMap read_prob_pgm(const std::string& path);
void write_prob_pgm(const std::string& path, const ProbMap& prob);

} // namespace moveseg
