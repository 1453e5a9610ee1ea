// SPDX-License-Identifier: Apache-2.0
#include "saccade/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include "saccade/error.hpp"

namespace saccade {

namespace {

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_raw(const std::filesystem::path& file, char magic, int w, int h,
               const std::vector<unsigned char>& bytes) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << 'P' << magic << '\n' << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + file.string());
}

struct Raw {
  int width = 0, height = 0, channels = 0, maxval = 0;
  std::vector<double> values;
};

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::filesystem::path& file) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("truncated pixmap header in " + file.string());
  return tok;
}

int parse_int(const std::string& s, const std::filesystem::path& file) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size() || v <= 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad pixmap header field '" + s + "' in " + file.string());
  }
}

Raw read_raw(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open pixmap: " + file.string());
  const std::string magic = next_token(in, file);
  Raw raw;
  if (magic == "P5") {
    raw.channels = 1;
  } else if (magic == "P6") {
    raw.channels = 3;
  } else {
    throw IoError("unsupported pixmap magic '" + magic + "' in " + file.string());
  }
  raw.width = parse_int(next_token(in, file), file);
  raw.height = parse_int(next_token(in, file), file);
  raw.maxval = parse_int(next_token(in, file), file);
  if (raw.maxval > 65535) throw IoError("pixmap maxval too large in " + file.string());
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height * raw.channels;
  const std::size_t bytes_per = raw.maxval < 256 ? 1 : 2;
  std::vector<unsigned char> bytes(n * bytes_per);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw IoError("truncated pixmap data in " + file.string());
  }
  raw.values.resize(n);
  const double maxval = raw.maxval;
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bytes_per == 1 ? bytes[i] : (unsigned{bytes[2 * i]} << 8) | bytes[2 * i + 1];
    raw.values[i] = std::min(1.0, v / maxval);
  }
  return raw;
}

}  // namespace

double quantize_unit(double v) { return to_byte(v) / 255.0; }

void write_pnm(const std::filesystem::path& file, const Frame& frame) {
  if (frame.channels != 1 && frame.channels != 3) throw ConfigError("pixmap needs 1 or 3 channels");
  std::vector<unsigned char> bytes(frame.data.size());
  std::transform(frame.data.begin(), frame.data.end(), bytes.begin(), to_byte);
  write_raw(file, frame.channels == 1 ? '5' : '6', frame.width, frame.height, bytes);
}

Frame read_pnm(const std::filesystem::path& file) {
  Raw raw = read_raw(file);
  Frame f;
  f.width = raw.width;
  f.height = raw.height;
  f.channels = raw.channels;
  f.data = std::move(raw.values);
  return f;
}

void write_pgm(const std::filesystem::path& file, const PixelMap& map) {
  std::vector<unsigned char> bytes(map.values.size());
  std::transform(map.values.begin(), map.values.end(), bytes.begin(), to_byte);
  write_raw(file, '5', map.width, map.height, bytes);
}

PixelMap read_pgm(const std::filesystem::path& file) {
  Raw raw = read_raw(file);
  if (raw.channels != 1) throw IoError("expected a gray (P5) map: " + file.string());
  PixelMap m;
  m.width = raw.width;
  m.height = raw.height;
  m.values = std::move(raw.values);
  return m;
}

}  // namespace saccade
