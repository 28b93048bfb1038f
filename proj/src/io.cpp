#include "lgs/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lgs {

namespace {

std::uint8_t quantize(double v) {
  v = std::min(std::max(v, 0.0), 1.0);
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

std::vector<std::uint8_t> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read error: " + path);
  return bytes;
}

void writeFile(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write error: " + path);
}

// ---------------------------------------------------------------- PNM ----

// Skips whitespace and '#' comments, then parses one unsigned decimal.
std::size_t pnmToken(const std::vector<std::uint8_t>& b, std::size_t pos, long& value) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= b.size() || !std::isdigit(b[pos]))
    throw std::invalid_argument("malformed PNM header");
  value = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    value = value * 10 + (b[pos] - '0');
    if (value > 1'000'000'000) throw std::invalid_argument("malformed PNM header");
    ++pos;
  }
  return pos;
}

Image decodePnm(const std::vector<std::uint8_t>& b) {
  const bool color = b[1] == '6';
  long w = 0, h = 0, maxval = 0;
  std::size_t pos = 2;
  pos = pnmToken(b, pos, w);
  pos = pnmToken(b, pos, h);
  pos = pnmToken(b, pos, maxval);
  if (w < 1 || h < 1) throw std::invalid_argument("PNM: bad dimensions");
  if (maxval != 255)
    throw std::invalid_argument("PNM: only maxval 255 (8-bit) is supported");
  ++pos;  // single whitespace byte after maxval
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                           (color ? 3 : 1);
  if (pos + need > b.size()) throw std::invalid_argument("PNM: truncated payload");
  Plane r(h, w), g(h, w), bl(h, w);
  const std::uint8_t* p = b.data() + pos;
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      if (color) {
        r(i, j) = *p++ / 255.0;
        g(i, j) = *p++ / 255.0;
        bl(i, j) = *p++ / 255.0;
      } else {
        r(i, j) = g(i, j) = bl(i, j) = *p++ / 255.0;
      }
    }
  return Image(std::move(r), std::move(g), std::move(bl));
}

// ---------------------------------------------------------------- PNG ----

constexpr std::uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t getU32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void putChunk(std::vector<std::uint8_t>& out, const char type[4],
              const std::vector<std::uint8_t>& data) {
  putU32(out, static_cast<std::uint32_t>(data.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), data.begin(), data.end());
  out.insert(out.end(), body.begin(), body.end());
  putU32(out, static_cast<std::uint32_t>(
                  crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

// zlib stream made of stored (uncompressed) deflate blocks. Byte-exact
// output forever, with no dependence on a compressor's heuristics.
std::vector<std::uint8_t> zlibStored(const std::vector<std::uint8_t>& data) {
  std::vector<std::uint8_t> out{0x78, 0x01};
  std::size_t pos = 0;
  do {
    const std::size_t len = std::min<std::size_t>(data.size() - pos, 65535);
    const bool final = pos + len == data.size();
    out.push_back(final ? 1 : 0);
    out.push_back(static_cast<std::uint8_t>(len & 0xff));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(~len & 0xff));
    out.push_back(static_cast<std::uint8_t>((~len >> 8) & 0xff));
    out.insert(out.end(), data.begin() + pos, data.begin() + pos + len);
    pos += len;
  } while (pos < data.size());
  putU32(out, static_cast<std::uint32_t>(
                  adler32(1, data.data(), static_cast<uInt>(data.size()))));
  return out;
}

std::vector<std::uint8_t> zlibInflate(const std::vector<std::uint8_t>& data,
                                      std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf outLen = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &outLen, data.data(), static_cast<uLong>(data.size()));
  if (rc != Z_OK || outLen != expected)
    throw std::invalid_argument("PNG: truncated or corrupt compressed payload");
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  return pb <= pc ? b : c;
}

Image decodePng(const std::vector<std::uint8_t>& b) {
  if (b.size() < 8 + 25 || std::memcmp(b.data(), kPngSig, 8) != 0)
    throw std::invalid_argument("PNG: bad signature");
  std::size_t pos = 8;
  std::uint32_t w = 0, h = 0;
  int bitDepth = 0, colorType = 0, interlace = 0;
  bool sawIhdr = false, sawIend = false;
  std::vector<std::uint8_t> idat;
  while (pos + 12 <= b.size()) {
    const std::uint32_t len = getU32(&b[pos]);
    if (pos + 12 + len > b.size()) throw std::invalid_argument("PNG: truncated chunk");
    const char* type = reinterpret_cast<const char*>(&b[pos + 4]);
    const std::uint8_t* data = &b[pos + 8];
    const std::uint32_t crcStored = getU32(&b[pos + 8 + len]);
    if (crc32(0, &b[pos + 4], static_cast<uInt>(len + 4)) != crcStored)
      throw std::invalid_argument("PNG: chunk CRC mismatch");
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw std::invalid_argument("PNG: bad IHDR");
      w = getU32(data);
      h = getU32(data + 4);
      bitDepth = data[8];
      colorType = data[9];
      interlace = data[12];
      sawIhdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      sawIend = true;
      break;
    }
    pos += 12 + len;
  }
  if (!sawIhdr || !sawIend || w == 0 || h == 0)
    throw std::invalid_argument("PNG: missing or truncated chunks");
  if (bitDepth != 8) throw std::invalid_argument("PNG: only bit depth 8 is supported");
  if (colorType != 0 && colorType != 2)
    throw std::invalid_argument("PNG: only grayscale and RGB color types are supported");
  if (interlace != 0) throw std::invalid_argument("PNG: interlaced images are not supported");

  const std::size_t bpp = colorType == 2 ? 3 : 1;
  const std::size_t stride = static_cast<std::size_t>(w) * bpp;
  std::vector<std::uint8_t> raw = zlibInflate(idat, (stride + 1) * h);

  std::vector<std::uint8_t> prev(stride, 0), cur(stride);
  Plane r(h, w), g(h, w), bl(h, w);
  for (std::uint32_t i = 0; i < h; ++i) {
    const std::uint8_t* row = &raw[(stride + 1) * i];
    const std::uint8_t filter = row[0];
    for (std::size_t x = 0; x < stride; ++x) {
      const int rawv = row[1 + x];
      const int a = x >= bpp ? cur[x - bpp] : 0;
      const int up = prev[x];
      const int c = x >= bpp ? prev[x - bpp] : 0;
      int v = 0;
      switch (filter) {
        case 0: v = rawv; break;
        case 1: v = rawv + a; break;
        case 2: v = rawv + up; break;
        case 3: v = rawv + (a + up) / 2; break;
        case 4: v = rawv + paeth(a, up, c); break;
        default: throw std::invalid_argument("PNG: unknown row filter");
      }
      cur[x] = static_cast<std::uint8_t>(v);
    }
    for (std::uint32_t j = 0; j < w; ++j) {
      if (bpp == 3) {
        r(i, j) = cur[3 * j] / 255.0;
        g(i, j) = cur[3 * j + 1] / 255.0;
        bl(i, j) = cur[3 * j + 2] / 255.0;
      } else {
        r(i, j) = g(i, j) = bl(i, j) = cur[j] / 255.0;
      }
    }
    std::swap(prev, cur);
  }
  return Image(std::move(r), std::move(g), std::move(bl));
}

bool hasSuffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<std::uint8_t> encodePpm(const Image& img) {
  std::string header = "P6\n" + std::to_string(img.cols()) + " " +
                       std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(img.size()) * 3);
  for (Index i = 0; i < img.rows(); ++i)
    for (Index j = 0; j < img.cols(); ++j) {
      out.push_back(quantize(img.r(i, j)));
      out.push_back(quantize(img.g(i, j)));
      out.push_back(quantize(img.b(i, j)));
    }
  return out;
}

std::vector<std::uint8_t> encodePgm(const Plane& plane) {
  std::string header = "P5\n" + std::to_string(plane.cols()) + " " +
                       std::to_string(plane.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(plane.size()));
  for (Index i = 0; i < plane.rows(); ++i)
    for (Index j = 0; j < plane.cols(); ++j) out.push_back(quantize(plane(i, j)));
  return out;
}

std::vector<std::uint8_t> encodePng(const Image& img) {
  std::vector<std::uint8_t> out(kPngSig, kPngSig + 8);
  std::vector<std::uint8_t> ihdr;
  putU32(ihdr, static_cast<std::uint32_t>(img.cols()));
  putU32(ihdr, static_cast<std::uint32_t>(img.rows()));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type: truecolor
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace
  putChunk(out, "IHDR", ihdr);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(img.rows()) *
              (static_cast<std::size_t>(img.cols()) * 3 + 1));
  for (Index i = 0; i < img.rows(); ++i) {
    raw.push_back(0);  // filter: none
    for (Index j = 0; j < img.cols(); ++j) {
      raw.push_back(quantize(img.r(i, j)));
      raw.push_back(quantize(img.g(i, j)));
      raw.push_back(quantize(img.b(i, j)));
    }
  }
  putChunk(out, "IDAT", zlibStored(raw));
  putChunk(out, "IEND", {});
  return out;
}

Image decodeImage(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2) throw std::invalid_argument("unrecognized image data");
  if (bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) return decodePnm(bytes);
  if (bytes[0] == 0x89 && bytes[1] == 'P') return decodePng(bytes);
  if (bytes[0] == 'P')
    throw std::invalid_argument("PNM: only binary P5/P6 are supported");
  throw std::invalid_argument("unrecognized image format (expected PNG or binary PNM)");
}

Image loadImage(const std::string& path) { return decodeImage(readFile(path)); }

void saveImage(const Image& img, const std::string& path) {
  if (hasSuffix(path, ".png")) {
    writeFile(path, encodePng(img));
  } else if (hasSuffix(path, ".ppm") || hasSuffix(path, ".pnm")) {
    writeFile(path, encodePpm(img));
  } else if (hasSuffix(path, ".pgm")) {
    if ((img.r != img.g).any() || (img.r != img.b).any())
      throw std::invalid_argument("saveImage: PGM requires identical channels: " + path);
    writeFile(path, encodePgm(img.r));
  } else {
    throw std::invalid_argument("saveImage: unsupported extension (png/ppm/pnm/pgm): " +
                                path);
  }
}

void savePlanePgm(const Plane& plane, const std::string& path) {
  writeFile(path, encodePgm(plane));
}

}  // namespace lgs
