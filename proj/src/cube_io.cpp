#include "hssr/cube_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "hssr/rng.hpp"

namespace hssr {

namespace {

constexpr std::size_t kMaxElements = std::size_t{1} << 28;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
  }
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

// One edge-repeating three-tap averaging pass along the rows of a factor.
void average_pass(Eigen::MatrixXd& u) {
  const Eigen::Index n = u.rows();
  if (n == 1) return;
  Eigen::MatrixXd out(n, u.cols());
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index lo = std::max<Eigen::Index>(t - 1, 0);
    const Eigen::Index hi = std::min<Eigen::Index>(t + 1, n - 1);
    out.row(t) = (u.row(lo) + u.row(t) + u.row(hi)) / 3.0;
  }
  u = std::move(out);
}

void smooth_factor(Eigen::MatrixXd& u, double smoothness) {
  const int rounds = static_cast<int>(std::floor(smoothness));
  for (int r = 0; r < rounds; ++r) average_pass(u);
  const double frac = smoothness - rounds;
  if (frac > 0.0) {
    Eigen::MatrixXd averaged = u;
    average_pass(averaged);
    u = (1.0 - frac) * u + frac * averaged;
  }
}

}  // namespace

void write_cube(const Cube& x, const std::string& path) {
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!std::isfinite(x.data()[n])) {
      throw std::invalid_argument("write_cube: non-finite value at linear index " +
                                  std::to_string(n));
    }
  }
  std::vector<unsigned char> bytes;
  bytes.reserve(kCubeHeaderBytes + 8 * x.size());
  bytes.insert(bytes.end(), kCubeMagic.begin(), kCubeMagic.end());
  put_u32(bytes, static_cast<std::uint32_t>(x.height()));
  put_u32(bytes, static_cast<std::uint32_t>(x.width()));
  put_u32(bytes, static_cast<std::uint32_t>(x.bands()));
  bytes.push_back(kCubeDtypeF64);
  for (std::size_t n = 0; n < x.size(); ++n) put_f64(bytes, x.data()[n]);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("write_cube: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write_cube: short write to " + path);
}

Cube read_cube(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("read_cube: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kCubeHeaderBytes) {
    throw FormatError("read_cube: " + path + " holds " +
                      std::to_string(bytes.size()) +
                      " bytes, header needs 21 (offset 0)");
  }
  if (!std::equal(kCubeMagic.begin(), kCubeMagic.end(), bytes.begin())) {
    throw FormatError("read_cube: bad magic at offset 0 in " + path);
  }
  const std::uint32_t h = get_u32(bytes.data() + 8);
  const std::uint32_t w = get_u32(bytes.data() + 12);
  const std::uint32_t b = get_u32(bytes.data() + 16);
  if (h == 0 || w == 0 || b == 0) {
    throw FormatError("read_cube: zero dim in header (offset 8) of " + path);
  }
  if (bytes[20] != kCubeDtypeF64) {
    throw FormatError("read_cube: unsupported dtype byte at offset 20 in " +
                      path);
  }
  const std::uint64_t plane = static_cast<std::uint64_t>(h) * w;
  if (plane > kMaxElements) {
    throw FormatError("read_cube: dims in header (offset 8) overflow sane "
                      "cube size in " + path);
  }
  const std::uint64_t count = plane * b;
  if (count > kMaxElements) {
    throw FormatError("read_cube: dims in header (offset 8) overflow sane "
                      "cube size in " + path);
  }
  const std::uint64_t expected = kCubeHeaderBytes + 8 * count;
  if (bytes.size() != expected) {
    throw FormatError("read_cube: payload of " + path + " has " +
                      std::to_string(bytes.size() - kCubeHeaderBytes) +
                      " bytes at offset 21, expected " +
                      std::to_string(8 * count));
  }
  std::vector<double> values(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    values[n] = get_f64(bytes.data() + kCubeHeaderBytes + 8 * n);
    if (!std::isfinite(values[n])) {
      throw FormatError("read_cube: non-finite value at offset " +
                        std::to_string(kCubeHeaderBytes + 8 * n) + " in " +
                        path);
    }
  }
  return Cube({static_cast<int>(h), static_cast<int>(w), static_cast<int>(b)},
              std::move(values));
}

void export_band(const Cube& x, int band, const std::string& path) {
  if (band < 0 || band >= x.bands()) {
    throw std::invalid_argument("export_band: band " + std::to_string(band) +
                                " out of range [0, " +
                                std::to_string(x.bands()) + ")");
  }
  const Shape s = x.shape();
  double lo = x(0, 0, band), hi = lo;
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      lo = std::min(lo, x(i, j, band));
      hi = std::max(hi, x(i, j, band));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("export_band: cannot open " + path);
  out << "P5\n" << s.w << " " << s.h << "\n255\n";
  const double range = hi - lo;
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      const unsigned char byte =
          range == 0.0 ? static_cast<unsigned char>(128)
                       : static_cast<unsigned char>(
                             std::lround((x(i, j, band) - lo) / range * 255.0));
      out.put(static_cast<char>(byte));
    }
  }
  if (!out) throw FormatError("export_band: short write to " + path);
}

Cube synth_cube(const SynthConfig& cfg) {
  const Shape s = cfg.dims;
  if (s.h <= 0 || s.w <= 0 || s.b <= 0) {
    throw ShapeError("synth_cube: dims must be positive");
  }
  const int ext[3] = {s.h, s.w, s.b};
  for (int m = 0; m < 3; ++m) {
    if (cfg.rank[m] < 1 || cfg.rank[m] > ext[m]) {
      throw std::invalid_argument("synth_cube: rank exceeds dimension for mode " +
                                  std::to_string(m + 1));
    }
  }
  if (cfg.smoothness < 0.0) {
    throw std::invalid_argument("synth_cube: smoothness must be nonnegative");
  }

  GaussianStream rng(cfg.seed);
  const int r1 = cfg.rank[0], r2 = cfg.rank[1], r3 = cfg.rank[2];
  std::vector<double> core(static_cast<std::size_t>(r1) * r2 * r3);
  for (double& v : core) v = rng.normal();
  Eigen::MatrixXd u1(s.h, r1), u2(s.w, r2), u3(s.b, r3);
  for (Eigen::Index i = 0; i < u1.rows(); ++i)
    for (Eigen::Index a = 0; a < u1.cols(); ++a) u1(i, a) = rng.normal();
  for (Eigen::Index i = 0; i < u2.rows(); ++i)
    for (Eigen::Index a = 0; a < u2.cols(); ++a) u2(i, a) = rng.normal();
  for (Eigen::Index i = 0; i < u3.rows(); ++i)
    for (Eigen::Index a = 0; a < u3.cols(); ++a) u3(i, a) = rng.normal();

  smooth_factor(u1, cfg.smoothness);
  smooth_factor(u2, cfg.smoothness);
  smooth_factor(u3, cfg.smoothness);

  // Contract core with the factors one mode at a time.
  auto core_at = [&](int a, int b2, int c) {
    return core[(static_cast<std::size_t>(a) * r2 + b2) * r3 + c];
  };
  std::vector<double> t1(static_cast<std::size_t>(s.h) * r2 * r3, 0.0);
  for (int i = 0; i < s.h; ++i)
    for (int b2 = 0; b2 < r2; ++b2)
      for (int c = 0; c < r3; ++c) {
        double acc = 0.0;
        for (int a = 0; a < r1; ++a) acc += u1(i, a) * core_at(a, b2, c);
        t1[(static_cast<std::size_t>(i) * r2 + b2) * r3 + c] = acc;
      }
  std::vector<double> t2(static_cast<std::size_t>(s.h) * s.w * r3, 0.0);
  for (int i = 0; i < s.h; ++i)
    for (int j = 0; j < s.w; ++j)
      for (int c = 0; c < r3; ++c) {
        double acc = 0.0;
        for (int b2 = 0; b2 < r2; ++b2)
          acc += u2(j, b2) * t1[(static_cast<std::size_t>(i) * r2 + b2) * r3 + c];
        t2[(static_cast<std::size_t>(i) * s.w + j) * r3 + c] = acc;
      }
  Cube out(s);
  for (int i = 0; i < s.h; ++i)
    for (int j = 0; j < s.w; ++j)
      for (int k = 0; k < s.b; ++k) {
        double acc = 0.0;
        for (int c = 0; c < r3; ++c)
          acc += u3(k, c) * t2[(static_cast<std::size_t>(i) * s.w + j) * r3 + c];
        out(i, j, k) = acc;
      }

  if (cfg.normalize) {
    const auto [lo_it, hi_it] =
        std::minmax_element(out.values().begin(), out.values().end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (range == 0.0) {
      for (std::size_t n = 0; n < out.size(); ++n) out.data()[n] = 0.5;
    } else {
      for (std::size_t n = 0; n < out.size(); ++n)
        out.data()[n] = (out.data()[n] - lo) / range;
    }
  }
  return out;
}

}  // namespace hssr
