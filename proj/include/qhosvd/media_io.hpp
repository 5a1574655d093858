#pragma once

/**
 * QTN1 tensor files and RGB frame conversion.
 *
 * QTN1 layout, all integers and floats little-endian:
 *   "QTN1" | u8 order N | N x u64 dims | prod(dims) x (f64 w, x, y, z)
 * with entries in generalized column-major order (first index fastest).
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhosvd/qtensor.hpp"

namespace qhosvd {

void write_tensor(const QTensor& t, std::ostream& out);
// Throws ParseError with a distinct kind for each malformation.
[[nodiscard]] QTensor read_tensor(std::istream& in);

void write_tensor_file(const QTensor& t, const std::string& path);
[[nodiscard]] QTensor read_tensor_file(const std::string& path);

// 8-bit RGB image, rows top to bottom, pixels interleaved.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb;  // size 3 * width * height

    bool operator==(const Image&) const = default;
};

// Binary PPM (P6) with maxval 255.
[[nodiscard]] Image read_ppm(std::istream& in);
[[nodiscard]] Image read_ppm_file(const std::string& path);
void write_ppm(const Image& img, std::ostream& out);
void write_ppm_file(const Image& img, const std::string& path);

// Pure tensor of dims (frames, rows, cols); i, j, k carry R, G, B / 255.
[[nodiscard]] QTensor frames_to_tensor(const std::vector<Image>& frames);

// Inverse of frames_to_tensor: imaginary parts clamped to [0, 1], scaled by
// 255 and rounded half to even. The real part is ignored.
[[nodiscard]] std::vector<Image> tensor_to_frames(const QTensor& t);

// All *.ppm files of a directory, in lexicographic order of file name.
[[nodiscard]] std::vector<Image> load_frame_directory(const std::string& dir);
// Writes frame_0000.ppm, frame_0001.ppm, ... into dir (created if needed).
void write_frame_directory(const std::vector<Image>& frames, const std::string& dir);

// Smoothly moving color gradients; deterministic.
[[nodiscard]] std::vector<Image> synthetic_gradient_video(std::size_t frames, std::size_t height, std::size_t width);

}  // namespace qhosvd
