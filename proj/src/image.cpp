#include "blockstab/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blockstab {

namespace {

// Reads the next header integer, skipping whitespace and '#' comments.
int header_int(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == EOF) throw ImageError("truncated image header");
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else {
      break;
    }
  }
  int v = 0;
  if (!(in >> v) || v < 0) throw ImageError("bad image header value");
  return v;
}

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> values;
};

Raster read_netpbm(const std::string& path, char ascii, char binary, int channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != ascii && magic[1] != binary))
    throw ImageError(path + ": unsupported image type");
  Raster r;
  r.channels = channels;
  r.width = header_int(in);
  r.height = header_int(in);
  const int maxval = header_int(in);
  if (r.width == 0 || r.height == 0 || maxval == 0 || maxval > 65535) throw ImageError(path + ": bad dimensions");
  const std::size_t count = static_cast<std::size_t>(r.width) * r.height * channels;
  r.values.resize(count);
  if (magic[1] == ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      int v = 0;
      if (!(in >> v) || v < 0 || v > maxval) throw ImageError(path + ": bad pixel value");
      r.values[i] = v;
    }
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw ImageError(path + ": truncated pixel data");
    for (std::size_t i = 0; i < count; ++i)
      r.values[i] = bytes == 1 ? raw[i] : raw[2 * i] * 256.0 + raw[2 * i + 1];
  }
  return r;
}

int clamp_byte(double v) { return static_cast<int>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

GrayImage read_pgm(const std::string& path) {
  Raster r = read_netpbm(path, '2', '5', 1);
  return {r.width, r.height, std::move(r.values)};
}

RgbImage read_ppm(const std::string& path) {
  const Raster r = read_netpbm(path, '3', '6', 3);
  RgbImage img{r.width, r.height, {}};
  img.pixels.resize(static_cast<std::size_t>(r.width) * r.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = {r.values[3 * i], r.values[3 * i + 1], r.values[3 * i + 2]};
  return img;
}

void write_pgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path);
  if (!out) throw ImageError("cannot write " + path);
  out << "P2\n" << image.width << ' ' << image.height << "\n255\n";
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) out << (c ? " " : "") << clamp_byte(image.at(r, c));
    out << '\n';
  }
}

void write_ppm(const std::string& path, const RgbImage& image) {
  std::ofstream out(path);
  if (!out) throw ImageError("cannot write " + path);
  out << "P3\n" << image.width << ' ' << image.height << "\n255\n";
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      const auto& p = image.at(r, c);
      out << (c ? " " : "") << clamp_byte(p[0]) << ' ' << clamp_byte(p[1]) << ' ' << clamp_byte(p[2]);
    }
    out << '\n';
  }
}

}  // namespace blockstab
