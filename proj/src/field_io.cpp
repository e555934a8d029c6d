#include "deadcore/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

constexpr char kMagic[4] = {'D', 'C', 'L', 'F'};
constexpr std::uint16_t kVersion = 1;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ArgumentError("bad number in CSV: " + s);
  return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw ArgumentError("cannot open for writing: " + path);
  return os;
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ArgumentError("truncated DCLF file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

GridPtr rebuild_grid(int N, double h, double x0, double y0) {
  const double c = -0.5 * (N - 1) * h;
  const double tol = 1e-12 * std::max(1.0, std::abs(c));
  if (std::abs(x0 - c) <= tol && std::abs(y0 - c) <= tol) {
    auto g = Grid::disk_with_spacing(N, h);
    if (g->x0() == x0 && g->y0() == y0) return g;
  }
  return Grid::box(N, h, x0, y0);
}

}  // namespace

void write_field_csv(const Field& f, const std::string& path) {
  auto os = open_out(path);
  const Grid& g = f.grid();
  os << "i,j,x,y,value\n";
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i)
      os << i << ',' << j << ',' << fmt(g.x(i)) << ',' << fmt(g.y(j)) << ',' << fmt(f(i, j)) << '\n';
  if (!os) throw ArgumentError("write failed: " + path);
}

Field read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot open field CSV: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "i,j,x,y,value") throw ArgumentError("field CSV header mismatch");
  struct Row {
    int i, j;
    double x, y, v;
  };
  std::vector<Row> rows;
  int N = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[5];
    for (auto& c : cell)
      if (!std::getline(ss, c, ',')) throw ArgumentError("field CSV row has fewer than 5 columns");
    Row r{std::stoi(cell[0]), std::stoi(cell[1]), parse_double(cell[2]), parse_double(cell[3]),
          parse_double(cell[4])};
    N = std::max({N, r.i + 1, r.j + 1});
    rows.push_back(r);
  }
  if (N < 5 || rows.size() != static_cast<std::size_t>(N) * N) throw ArgumentError("field CSV is not a full N x N grid");
  double x0 = 0, y0 = 0, x1 = 0;
  for (const auto& r : rows) {
    if (r.i == 0 && r.j == 0) {
      x0 = r.x;
      y0 = r.y;
    }
    if (r.i == N - 1 && r.j == 0) x1 = r.x;
  }
  const double h = (x1 - x0) / (N - 1);
  GridPtr grid = rebuild_grid(N, h, x0, y0);
  Field f(grid);
  for (const auto& r : rows) f(r.i, r.j) = r.v;
  return f;
}

void write_field_binary(const Field& f, const std::string& path) {
  auto os = open_out(path, std::ios::out | std::ios::binary);
  const Grid& g = f.grid();
  os.write(kMagic, 4);
  put_le<std::uint16_t>(os, kVersion);
  put_le<double>(os, static_cast<double>(g.N()));
  put_le<double>(os, g.h());
  for (double v : f.values()) put_le<double>(os, v);
  if (!os) throw ArgumentError("write failed: " + path);
}

Field read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ArgumentError("cannot open DCLF file: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ArgumentError("not a DCLF file");
  const auto version = get_le<std::uint16_t>(is);
  if (version != kVersion) throw ArgumentError("unsupported DCLF version");
  const double Nd = get_le<double>(is);
  const double h = get_le<double>(is);
  if (!(Nd >= 5) || Nd != std::floor(Nd) || Nd > 1e5 || !(h > 0)) throw ArgumentError("bad DCLF header");
  const int N = static_cast<int>(Nd);
  GridPtr grid = Grid::disk_with_spacing(N, h);
  std::vector<double> vals(static_cast<std::size_t>(N) * N);
  for (auto& v : vals) v = get_le<double>(is);
  return Field(grid, std::move(vals));
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw ArgumentError("table header and column count differ");
  auto os = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw ArgumentError("table columns differ in length");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << fmt(columns[c][r]);
    os << '\n';
  }
  if (!os) throw ArgumentError("write failed: " + path);
}

}  // namespace deadcore
