// SPDX-License-Identifier: Apache-2.0
//
// PCD v0.7 reader/writer. Supports DATA ascii and binary; binary_compressed
// is rejected. Recognized fields are x y z, rgb/rgba (packed 0x00RRGGBB),
// normal_x normal_y normal_z and curvature; any other field is skipped.
#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "semloc/cloud/point_cloud.hpp"

namespace semloc {

enum class PcdEncoding { ascii, binary };

struct PcdLoadInfo {
  std::size_t declared_points = 0;
  std::size_t dropped_invalid = 0;  ///< rows with non-finite x/y/z
};

namespace detail {

struct PcdField {
  std::string name;
  int size = 4;
  char type = 'F';
  int count = 1;
  std::size_t offset = 0;  // byte offset within a binary record
  std::size_t column = 0;  // first token index within an ascii row
};

struct PcdHeader {
  std::vector<PcdField> fields;
  std::size_t width = 0, height = 1, points = 0;
  bool points_given = false;
  double viewpoint[3] = {0, 0, 0};
  std::string data;
  std::optional<std::string> label;
  std::size_t record_size = 0;
  std::size_t columns = 0;

  const PcdField* find(const std::string& name) const {
    for (const auto& f : fields)
      if (f.name == name) return &f;
    return nullptr;
  }
};

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("malformed PCD header: bad " + what + " value '" + s + "'");
  return v;
}

inline bool valid_type_size(char type, int size) {
  switch (type) {
    case 'F': return size == 4 || size == 8;
    case 'I':
    case 'U': return size == 1 || size == 2 || size == 4 || size == 8;
    default: return false;
  }
}

inline PcdHeader parse_pcd_header(std::istream& is, const std::string& path) {
  PcdHeader h;
  std::vector<std::string> sizes, types, counts;
  bool have_fields = false, have_width = false, have_data = false;
  std::string line;
  while (!have_data && std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto toks = split_ws(line.substr(1));
      if (toks.size() >= 2 && toks[0] == "label") h.label = line.substr(line.find("label") + 6);
      continue;
    }
    auto toks = split_ws(line);
    const std::string key = toks[0];
    std::vector<std::string> vals(toks.begin() + 1, toks.end());
    if (key == "VERSION") {
      if (vals.size() != 1 || (vals[0] != "0.7" && vals[0] != ".7"))
        throw DataError(path + ": unsupported PCD version (need 0.7)");
    } else if (key == "FIELDS") {
      for (const auto& v : vals) h.fields.push_back({v});
      have_fields = !vals.empty();
    } else if (key == "SIZE") {
      sizes = vals;
    } else if (key == "TYPE") {
      types = vals;
    } else if (key == "COUNT") {
      counts = vals;
    } else if (key == "WIDTH") {
      if (vals.size() != 1) throw DataError(path + ": malformed PCD header: WIDTH");
      h.width = parse_size(vals[0], "WIDTH");
      have_width = true;
    } else if (key == "HEIGHT") {
      if (vals.size() != 1) throw DataError(path + ": malformed PCD header: HEIGHT");
      h.height = parse_size(vals[0], "HEIGHT");
    } else if (key == "VIEWPOINT") {
      if (vals.size() != 7) throw DataError(path + ": malformed PCD header: VIEWPOINT needs 7 values");
      for (int i = 0; i < 3; ++i) h.viewpoint[i] = std::stod(vals[static_cast<std::size_t>(i)]);
    } else if (key == "POINTS") {
      if (vals.size() != 1) throw DataError(path + ": malformed PCD header: POINTS");
      h.points = parse_size(vals[0], "POINTS");
      h.points_given = true;
    } else if (key == "DATA") {
      if (vals.size() != 1) throw DataError(path + ": malformed PCD header: DATA");
      h.data = vals[0];
      have_data = true;
    } else {
      throw DataError(path + ": malformed PCD header: unknown key '" + key + "'");
    }
  }
  if (!have_fields || !have_width || !have_data)
    throw DataError(path + ": malformed PCD header: FIELDS, WIDTH and DATA are required");
  if (h.data == "binary_compressed")
    throw DataError(path + ": unsupported DATA encoding binary_compressed");
  if (h.data != "ascii" && h.data != "binary")
    throw DataError(path + ": unsupported DATA encoding '" + h.data + "'");

  const std::size_t nf = h.fields.size();
  if (sizes.size() != nf || types.size() != nf || (!counts.empty() && counts.size() != nf))
    throw DataError(path + ": COUNT/SIZE/TYPE inconsistent with declared FIELDS");
  for (std::size_t i = 0; i < nf; ++i) {
    auto& f = h.fields[i];
    f.size = static_cast<int>(parse_size(sizes[i], "SIZE"));
    if (types[i].size() != 1) throw DataError(path + ": malformed TYPE '" + types[i] + "'");
    f.type = types[i][0];
    f.count = counts.empty() ? 1 : static_cast<int>(parse_size(counts[i], "COUNT"));
    if (!valid_type_size(f.type, f.size) || f.count < 1)
      throw DataError(path + ": COUNT/SIZE inconsistent for field '" + f.name + "'");
    f.offset = h.record_size;
    f.column = h.columns;
    h.record_size += static_cast<std::size_t>(f.size * f.count);
    h.columns += static_cast<std::size_t>(f.count);
  }
  for (const char* axis : {"x", "y", "z"}) {
    const auto* f = h.find(axis);
    if (!f) throw DataError(path + ": PCD file lacks field '" + std::string(axis) + "'");
    if (f->count != 1) throw DataError(path + ": COUNT of field '" + std::string(axis) + "' must be 1");
  }
  for (const char* name : {"rgb", "rgba"}) {
    if (const auto* f = h.find(name); f && (f->size != 4 || f->count != 1))
      throw DataError(path + ": packed color field must be a single 4-byte value");
  }
  if (!h.points_given) h.points = h.width * h.height;
  if (h.points != h.width * h.height)
    throw DataError(path + ": point count mismatch (POINTS " + std::to_string(h.points) +
                    " vs WIDTH*HEIGHT " + std::to_string(h.width * h.height) + ")");
  return h;
}

inline double decode_binary(const char* p, const PcdField& f) {
  auto load = [p]<typename T>(T) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return static_cast<double>(binary::byteswap_if_needed(v));
  };
  switch (f.type) {
    case 'F': return f.size == 4 ? load(float{}) : load(double{});
    case 'I':
      switch (f.size) {
        case 1: return load(std::int8_t{});
        case 2: return load(std::int16_t{});
        case 4: return load(std::int32_t{});
        default: return load(std::int64_t{});
      }
    default:
      switch (f.size) {
        case 1: return load(std::uint8_t{});
        case 2: return load(std::uint16_t{});
        case 4: return load(std::uint32_t{});
        default: return load(std::uint64_t{});
      }
  }
}

inline Rgb unpack_rgb(std::uint32_t bits) {
  return {static_cast<std::uint8_t>((bits >> 16) & 0xff), static_cast<std::uint8_t>((bits >> 8) & 0xff),
          static_cast<std::uint8_t>(bits & 0xff)};
}

inline std::uint32_t pack_rgb(const Rgb& c) {
  return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | std::uint32_t{c.b};
}

}  // namespace detail

/// Reads a PCD v0.7 file. Rows with non-finite coordinates are dropped and counted.
inline PointCloud load_pcd(const std::string& path, PcdLoadInfo* info = nullptr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError(path + ": cannot open PCD file");
  const detail::PcdHeader h = detail::parse_pcd_header(is, path);

  const auto* fx = h.find("x");
  const auto* fy = h.find("y");
  const auto* fz = h.find("z");
  const auto* frgb = h.find("rgb") ? h.find("rgb") : h.find("rgba");
  const auto* fnx = h.find("normal_x");
  const auto* fny = h.find("normal_y");
  const auto* fnz = h.find("normal_z");
  const auto* fcurv = h.find("curvature");
  const bool with_normals = fnx && fny && fnz;

  std::vector<Point3> points;
  std::vector<Normal3> normals;
  points.reserve(h.points);
  std::size_t dropped = 0;

  auto emit = [&](auto&& value_of, auto&& rgb_bits_of) {
    Point3 p(static_cast<float>(value_of(*fx)), static_cast<float>(value_of(*fy)),
             static_cast<float>(value_of(*fz)));
    if (!p.finite()) {
      ++dropped;
      return;
    }
    if (frgb) p.color = detail::unpack_rgb(rgb_bits_of(*frgb));
    points.push_back(p);
    if (with_normals) {
      Normal3 n;
      n.nx = static_cast<float>(value_of(*fnx));
      n.ny = static_cast<float>(value_of(*fny));
      n.nz = static_cast<float>(value_of(*fnz));
      n.curvature = fcurv ? static_cast<float>(value_of(*fcurv)) : 0.f;
      normals.push_back(n.valid() ? n : Normal3::invalid());
    }
  };

  if (h.data == "ascii") {
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
      auto toks = detail::split_ws(line);
      if (toks.empty()) continue;
      ++rows;
      if (rows > h.points) break;
      if (toks.size() != h.columns)
        throw DataError(path + ": row " + std::to_string(rows) + " has " + std::to_string(toks.size()) +
                        " values, expected " + std::to_string(h.columns));
      auto value_of = [&](const detail::PcdField& f) {
        const std::string& t = toks[f.column];
        try {
          return std::stod(t);
        } catch (const std::exception&) {
          if (t == "nan" || t == "NaN" || t == "-nan") return static_cast<double>(NAN);
          throw DataError(path + ": bad numeric token '" + t + "'");
        }
      };
      auto rgb_bits_of = [&](const detail::PcdField& f) -> std::uint32_t {
        const double v = value_of(f);
        if (f.type == 'F') return std::bit_cast<std::uint32_t>(static_cast<float>(v));
        return static_cast<std::uint32_t>(v);
      };
      emit(value_of, rgb_bits_of);
    }
    if (rows != h.points)
      throw DataError(path + ": point count mismatch (declared " + std::to_string(h.points) + ", found " +
                      (rows > h.points ? "more" : std::to_string(rows)) + ")");
  } else {
    std::vector<char> payload(h.record_size * h.points);
    is.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(is.gcount()) != payload.size())
      throw DataError(path + ": point count mismatch (binary payload shorter than " +
                      std::to_string(h.points) + " records)");
    for (std::size_t r = 0; r < h.points; ++r) {
      const char* rec = payload.data() + r * h.record_size;
      auto value_of = [&](const detail::PcdField& f) { return detail::decode_binary(rec + f.offset, f); };
      auto rgb_bits_of = [&](const detail::PcdField& f) {
        std::uint32_t bits;
        std::memcpy(&bits, rec + f.offset, 4);
        return binary::byteswap_if_needed(bits);
      };
      emit(value_of, rgb_bits_of);
    }
  }

  PointCloud cloud(std::move(points), frgb != nullptr);
  if (with_normals) cloud.set_normals(std::move(normals));
  cloud.set_viewpoint(Point3(static_cast<float>(h.viewpoint[0]), static_cast<float>(h.viewpoint[1]),
                             static_cast<float>(h.viewpoint[2])));
  if (h.label) cloud.set_label(*h.label);
  if (info) {
    info->declared_points = h.points;
    info->dropped_invalid = dropped;
  }
  return cloud;
}

/// Writes a PCD v0.7 file. Binary output reproduces the cloud bit-exactly on
/// load; ascii uses 9 significant digits, which is also exact for floats.
inline void save_pcd(const PointCloud& cloud, const std::string& path,
                     PcdEncoding encoding = PcdEncoding::binary) {
  if (cloud.empty()) throw InvalidArgument("save_pcd: cloud is empty");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError(path + ": cannot open for writing");

  const bool color = cloud.has_color();
  const bool normals = cloud.has_normals();
  std::string fields = "x y z", sizes = "4 4 4", types = "F F F", counts = "1 1 1";
  if (color) {
    fields += " rgb";
    sizes += " 4";
    types += " F";
    counts += " 1";
  }
  if (normals) {
    fields += " normal_x normal_y normal_z curvature";
    sizes += " 4 4 4 4";
    types += " F F F F";
    counts += " 1 1 1 1";
  }
  const auto& vp = cloud.viewpoint();
  os << "# .PCD v0.7 - Point Cloud Data file format\n";
  if (cloud.label()) os << "# label " << *cloud.label() << "\n";
  char vpbuf[128];
  std::snprintf(vpbuf, sizeof vpbuf, "%.9g %.9g %.9g", vp.x, vp.y, vp.z);
  os << "VERSION 0.7\nFIELDS " << fields << "\nSIZE " << sizes << "\nTYPE " << types << "\nCOUNT " << counts
     << "\nWIDTH " << cloud.size() << "\nHEIGHT 1\nVIEWPOINT " << vpbuf << " 1 0 0 0\nPOINTS " << cloud.size()
     << "\nDATA " << (encoding == PcdEncoding::ascii ? "ascii" : "binary") << "\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud[i];
    std::vector<float> row{p.x, p.y, p.z};
    if (color) row.push_back(std::bit_cast<float>(detail::pack_rgb(p.color)));
    if (normals) {
      const Normal3& n = cloud.normals()[i];
      row.insert(row.end(), {n.nx, n.ny, n.nz, n.curvature});
    }
    if (encoding == PcdEncoding::binary) {
      for (float v : row) binary::write(os, v);
    } else {
      char buf[32];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (std::isnan(row[c]))
          std::snprintf(buf, sizeof buf, "nan");
        else
          std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(row[c]));
        os << (c ? " " : "") << buf;
      }
      os << '\n';
    }
  }
  if (!os) throw DataError(path + ": write failed");
}

}  // namespace semloc
