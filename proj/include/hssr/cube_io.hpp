#pragma once

// Cube persistence, band export, and synthetic ground-truth generation.
//
// File format "HSCUBE01": 8-byte ASCII magic, then h, w, b as unsigned
// 32-bit little-endian integers, one dtype byte (0x01 = IEEE float64
// little-endian), then h*w*b payload values in cube memory order (band
// fastest). The header is 21 bytes, so a file holds 21 + 8*h*w*b bytes.
// Round trips are bitwise exact.

#include <array>
#include <cstdint>
#include <string>

#include "hssr/cube.hpp"

namespace hssr {

inline constexpr std::array<unsigned char, 8> kCubeMagic = {'H', 'S', 'C', 'U',
                                                            'B', 'E', '0', '1'};
inline constexpr unsigned char kCubeDtypeF64 = 0x01;
inline constexpr std::size_t kCubeHeaderBytes = 21;

void write_cube(const Cube& x, const std::string& path);
Cube read_cube(const std::string& path);

// Writes one band as an 8-bit binary PGM, rescaled so the band minimum maps
// to 0 and the maximum to 255; a constant band maps to 128.
void export_band(const Cube& x, int band, const std::string& path);

struct SynthConfig {
  Shape dims = {32, 32, 8};
  std::array<int, 3> rank = {4, 4, 2};   // per-mode target ranks
  double smoothness = 2.0;               // neighbor-averaging passes on factors
  std::uint64_t seed = 7;
  bool normalize = true;                 // rescale to [0, 1]
};

// Random core-times-factors construction with mode-i unfolding rank at most
// rank[i] (plus one when normalization shifts the values). Smoothing is
// applied to the factor matrices, so it lowers total variation without
// raising rank. Deterministic for a fixed seed.
Cube synth_cube(const SynthConfig& cfg);

}  // namespace hssr
