#pragma once

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalelaws/image_cube.hpp"
#include "scalelaws/version.hpp"

namespace scalelaws {

enum class DType { u8, u16, u32, f64 };

inline const char* dtype_name(DType t) {
  switch (t) {
    case DType::u8: return "u8";
    case DType::u16: return "u16";
    case DType::u32: return "u32";
    case DType::f64: return "f64";
  }
  throw std::logic_error("unreachable dtype");
}

inline DType parse_dtype(const std::string& s) {
  if (s == "u8") return DType::u8;
  if (s == "u16") return DType::u16;
  if (s == "u32") return DType::u32;
  if (s == "f64") return DType::f64;
  throw std::runtime_error("unknown dtype: " + s);
}

inline std::size_t dtype_size(DType t) {
  switch (t) {
    case DType::u8: return 1;
    case DType::u16: return 2;
    case DType::u32: return 4;
    case DType::f64: return 8;
  }
  throw std::logic_error("unreachable dtype");
}

// RAW payloads travel with a same-stem .json sidecar: "dir/frac.bin" <->
// "dir/frac.json".
inline std::string sidecar_path(const std::string& payload_path) {
  const std::size_t slash = payload_path.find_last_of("/\\");
  const std::size_t dot = payload_path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return payload_path + ".json";
  return payload_path.substr(0, dot) + ".json";
}

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0)
    in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw std::runtime_error("read failed: " + path);
  return bytes;
}

inline std::uint64_t load_scalar(const std::uint8_t* p, std::size_t width,
                                 bool little) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const std::size_t shift = little ? i : width - 1 - i;
    v |= static_cast<std::uint64_t>(p[i]) << (8 * shift);
  }
  return v;
}

inline void store_scalar(std::uint8_t* p, std::size_t width, bool little,
                         std::uint64_t v) {
  for (std::size_t i = 0; i < width; ++i) {
    const std::size_t shift = little ? i : width - 1 - i;
    p[i] = static_cast<std::uint8_t>((v >> (8 * shift)) & 0xFF);
  }
}

// PNM header token reader: skips whitespace and '#' comments.
inline std::string pnm_token(const std::vector<std::uint8_t>& bytes,
                             std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() &&
           std::isspace(static_cast<int>(bytes[pos])))
      ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string tok;
  while (pos < bytes.size() &&
         !std::isspace(static_cast<int>(bytes[pos])) && bytes[pos] != '#')
    tok.push_back(static_cast<char>(bytes[pos++]));
  if (tok.empty()) throw std::runtime_error("truncated PNM header");
  return tok;
}

inline std::int64_t pnm_int(const std::vector<std::uint8_t>& bytes,
                            std::size_t& pos) {
  const std::string tok = pnm_token(bytes, pos);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("bad PNM header value: " + tok);
  }
  if (used != tok.size())
    throw std::runtime_error("bad PNM header value: " + tok);
  return v;
}

inline ImageCube load_pnm(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  std::size_t pos = 0;
  const std::string magic = pnm_token(bytes, pos);
  std::int64_t channels = 0;
  if (magic == "P5")
    channels = 1;
  else if (magic == "P6")
    channels = 3;
  else
    throw std::runtime_error("unsupported PNM magic: " + magic);
  const std::int64_t w = pnm_int(bytes, pos);
  const std::int64_t h = pnm_int(bytes, pos);
  const std::int64_t maxval = pnm_int(bytes, pos);
  if (w < 2 || h < 2)
    throw std::runtime_error("PNM image must be at least 2x2");
  if (maxval < 1 || maxval > 65535)
    throw std::runtime_error("PNM maxval out of range (1..65535)");
  // Exactly one whitespace byte separates header and payload.
  if (pos >= bytes.size() || !std::isspace(static_cast<int>(bytes[pos])))
    throw std::runtime_error("malformed PNM header");
  ++pos;
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;  // 16-bit: big-endian
  const std::size_t n_samples = static_cast<std::size_t>(w) *
                                static_cast<std::size_t>(h) *
                                static_cast<std::size_t>(channels);
  if (bytes.size() - pos != n_samples * sample_bytes)
    throw std::runtime_error("PNM payload size mismatch");
  ImageCube im = make_cube(w, h, channels);
  for (std::size_t i = 0; i < n_samples; ++i)
    im.data[i] = static_cast<double>(load_scalar(
        bytes.data() + pos + i * sample_bytes, sample_bytes, false));
  im.dynamics = im.max_sample() + 1.0;
  im.check();
  return im;
}

inline ImageCube load_raw(const std::string& path) {
  nlohmann::json meta;
  const std::string side = sidecar_path(path);
  try {
    std::ifstream in(side);
    if (!in) throw std::runtime_error("cannot open sidecar: " + side);
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad sidecar " + side + ": " + e.what());
  }
  const auto require = [&](const char* key) -> const nlohmann::json& {
    if (!meta.contains(key))
      throw std::runtime_error("sidecar missing field '" + std::string(key) +
                               "': " + side);
    return meta.at(key);
  };
  const std::int64_t w = require("width").get<std::int64_t>();
  const std::int64_t h = require("height").get<std::int64_t>();
  const std::int64_t c = require("channels").get<std::int64_t>();
  const DType dtype = parse_dtype(require("dtype").get<std::string>());
  const std::string endian = require("endianness").get<std::string>();
  if (endian != "little" && endian != "big")
    throw std::runtime_error("sidecar endianness must be little|big");
  const bool little = endian == "little";
  if (require("layout").get<std::string>() != "row-major-channel-last")
    throw std::runtime_error("unsupported layout in sidecar: " + side);
  if (w < 2 || h < 2 || c < 1)
    throw std::runtime_error("sidecar declares invalid dimensions");

  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  const std::size_t n_samples = static_cast<std::size_t>(w) *
                                static_cast<std::size_t>(h) *
                                static_cast<std::size_t>(c);
  const std::size_t width = dtype_size(dtype);
  if (bytes.size() != n_samples * width)
    throw std::runtime_error("raw payload size mismatch: " + path);
  ImageCube im = make_cube(w, h, c);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::uint64_t v =
        load_scalar(bytes.data() + i * width, width, little);
    im.data[i] = dtype == DType::f64 ? std::bit_cast<double>(v)
                                     : static_cast<double>(v);
  }
  double dyn = im.max_sample() + 1.0;
  if (meta.contains("dynamics")) {
    const double d = meta.at("dynamics").get<double>();
    if (std::isfinite(d) && d > im.max_sample()) dyn = d;
  }
  im.dynamics = dyn;
  im.check();
  return im;
}

}  // namespace detail

// Reads a PNM (binary P5/P6, maxval <= 65535) or RAW+sidecar image.
// `format` is "auto" (sniff the magic bytes), "pnm", or "raw". 16-bit PNM
// samples are big-endian per the format; all samples are preserved exactly.
inline ImageCube load_image(const std::string& path,
                            const std::string& format = "auto") {
  if (format == "pnm") return detail::load_pnm(path);
  if (format == "raw") return detail::load_raw(path);
  if (format != "auto")
    throw std::runtime_error("unknown format hint: " + format);
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open: " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  if (probe.gcount() == 2 && magic[0] == 'P' &&
      (magic[1] == '5' || magic[1] == '6'))
    return detail::load_pnm(path);
  return detail::load_raw(path);
}

// Returns the sidecar's provenance string, if the image has one.
inline std::string load_provenance(const std::string& path) {
  std::ifstream in(sidecar_path(path));
  if (!in) return "";
  try {
    nlohmann::json meta;
    in >> meta;
    if (meta.contains("provenance") && meta.at("provenance").is_string())
      return meta.at("provenance").get<std::string>();
  } catch (const nlohmann::json::exception&) {
  }
  return "";
}

// Writes `im` as RAW payload + JSON sidecar (little-endian). Integer dtypes
// refuse non-integral or out-of-range samples rather than rounding; use f64
// for fractional data (e.g. block-reduced levels). Round-trips through
// load_image are bit-exact for every dtype.
inline void save_image(const ImageCube& im, const std::string& path,
                       DType dtype = DType::f64,
                       const std::string& provenance = "") {
  im.check();
  if (dtype != DType::f64) {
    const double limit =
        dtype == DType::u8 ? 255.0 : dtype == DType::u16 ? 65535.0 : 4294967295.0;
    for (const double v : im.data)
      if (std::floor(v) != v || v < 0.0 || v > limit)
        throw std::invalid_argument(
            std::string("save_image: samples do not fit dtype ") +
            dtype_name(dtype) + " exactly; refusing to round");
  }
  const std::size_t width = dtype_size(dtype);
  std::vector<std::uint8_t> bytes(im.data.size() * width);
  for (std::size_t i = 0; i < im.data.size(); ++i) {
    const std::uint64_t v = dtype == DType::f64
                                ? std::bit_cast<std::uint64_t>(im.data[i])
                                : static_cast<std::uint64_t>(im.data[i]);
    detail::store_scalar(bytes.data() + i * width, width, true, v);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);

  nlohmann::json meta;
  meta["width"] = im.width;
  meta["height"] = im.height;
  meta["channels"] = im.channels;
  meta["dtype"] = dtype_name(dtype);
  meta["endianness"] = "little";
  meta["layout"] = "row-major-channel-last";
  meta["dynamics"] = im.dynamics;
  meta["tool_version"] = kVersion;
  if (!provenance.empty()) meta["provenance"] = provenance;
  std::ofstream sout(sidecar_path(path), std::ios::binary);
  if (!sout)
    throw std::runtime_error("cannot open for writing: " + sidecar_path(path));
  sout << meta.dump(2) << "\n";
  if (!sout)
    throw std::runtime_error("write failed: " + sidecar_path(path));
}

// Smallest dtype that stores every sample exactly: u8/u16/u32 for integral
// data in range, f64 otherwise.
inline DType minimal_dtype(const ImageCube& im) {
  double m = 0.0;
  for (const double v : im.data) {
    if (std::floor(v) != v || v < 0.0) return DType::f64;
    if (v > m) m = v;
  }
  if (m <= 255.0) return DType::u8;
  if (m <= 65535.0) return DType::u16;
  if (m <= 4294967295.0) return DType::u32;
  return DType::f64;
}

}  // namespace scalelaws
