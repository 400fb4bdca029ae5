#include "moveseg/pnm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace moveseg {

namespace {

// Next whitespace-separated token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c))
            continue;
        tok.push_back(static_cast<char>(c));
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
            tok.push_back(static_cast<char>(in.get()));
        return tok;
    }
    return tok;
}

int parse_int(const std::string& tok, const std::string& path) {
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw IoError(path + ": malformed PNM header token '" + tok + "'");
    }
}

RasterU8 read_pnm_stream(std::istream& in, const std::string& path) {
    std::string magic = next_token(in);
    int channels;
    if (magic == "P5")
        channels = 1;
    else if (magic == "P6")
        channels = 3;
    else
        throw IoError(path + ": unsupported PNM magic '" + magic + "'");
    int w = parse_int(next_token(in), path);
    int h = parse_int(next_token(in), path);
    int maxval = parse_int(next_token(in), path);
    if (w < 1 || h < 1)
        throw IoError(path + ": invalid PNM dimensions");
    if (maxval != 255)
        throw IoError(path + ": only maxval 255 supported");
    in.get(); // single whitespace byte after the maxval token
    RasterU8 raster(w, h, channels);
    in.read(reinterpret_cast<char*>(raster.data.data()),
            static_cast<std::streamsize>(raster.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.data.size()))
        throw IoError(path + ": truncated PNM sample block");
    return raster;
}

} // namespace

RasterU8 read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    return read_pnm_stream(in, path);
}

void write_pnm(const std::string& path, const RasterU8& raster) {
    if (raster.channels != 1 && raster.channels != 3)
        throw ValidationError("write_pnm: channels must be 1 or 3");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    out << (raster.channels == 1 ? "P5" : "P6") << '\n'
        << raster.width << ' ' << raster.height << '\n'
        << "255" << '\n';
    out.write(reinterpret_cast<const char*>(raster.data.data()),
              static_cast<std::streamsize>(raster.data.size()));
    if (!out)
        throw IoError(path + ": write failed");
}

BinaryMask read_mask_pgm(const std::string& path) {
    RasterU8 raster = read_pnm(path);
    if (raster.channels != 1)
        throw IoError(path + ": mask must be a P5 graymap");
    BinaryMask mask(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.data.size(); ++i)
        mask.data[i] = raster.data[i] >= 128 ? 1 : 0;
    return mask;
}

void write_mask_pgm(const std::string& path, const BinaryMask& mask) {
    RasterU8 raster(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        raster.data[i] = mask.data[i] ? 255 : 0;
    write_pnm(path, raster);
}

ProbMap read_prob_pgm(const std::string& path) {
    RasterU8 raster = read_pnm(path);
    if (raster.channels != 1)
        throw IoError(path + ": probability map must be a P5 graymap");
    ProbMap prob(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.data.size(); ++i)
        prob.data[i] = raster.data[i] / 255.0;
    return prob;
}

void write_prob_pgm(const std::string& path, const ProbMap& prob) {
    prob.validate();
    RasterU8 raster(prob.width, prob.height, 1);
    for (std::size_t i = 0; i < prob.data.size(); ++i)
        raster.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * prob.data[i]));
    write_pnm(path, raster);
}

} // namespace moveseg
