#include "uhop/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace uhop {

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  require(static_cast<bool>(in), errc::malformed_file, "truncated header in " + path);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

std::vector<double> parse_row(const std::string& line, const std::string& path) {
  std::vector<double> values;
  const char* p = line.c_str();
  while (*p != '\0') {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    require(end != p, errc::malformed_file, "bad numeric field in " + path);
    values.push_back(v);
    p = end;
    if (*p == ',') ++p;
  }
  return values;
}

}  // namespace

PatternSet load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), errc::io_failure, "cannot open " + path);

  const std::uint32_t magic = read_u32_be(in, path);
  require(magic == 0x00000803u, errc::malformed_file,
          "bad IDX magic in " + path + " (expected image file 0x00000803)");
  const std::uint32_t count = read_u32_be(in, path);
  const std::uint32_t rows = read_u32_be(in, path);
  const std::uint32_t cols = read_u32_be(in, path);
  require(count > 0, errc::malformed_file, "IDX file has zero images: " + path);
  require(rows > 0 && cols > 0, errc::malformed_file, "IDX file has empty images: " + path);

  const std::size_t d = std::size_t(rows) * cols;
  std::vector<unsigned char> buf(d * count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  require(static_cast<std::size_t>(in.gcount()) == buf.size(), errc::malformed_file,
          "truncated IDX payload in " + path);

  Matrix data(static_cast<Index>(d), static_cast<Index>(count));
  for (std::uint32_t n = 0; n < count; ++n)
    for (std::size_t i = 0; i < d; ++i)
      data(static_cast<Index>(i), n) = buf[std::size_t(n) * d + i] / 255.0;
  return PatternSet(std::move(data));
}

namespace {

Matrix load_csv_matrix(const std::string& path, bool header_rows_first) {
  std::ifstream in(path);
  require(static_cast<bool>(in), errc::io_failure, "cannot open " + path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::malformed_file, "empty file " + path);
  const std::vector<double> header = parse_row(line, path);
  require(header.size() == 2, errc::malformed_file, "expected two header fields in " + path);
  const Index a = static_cast<Index>(header[0]);
  const Index b = static_cast<Index>(header[1]);
  require(a >= 1 && b >= 1, errc::malformed_file, "bad dimensions in " + path);

  const Index n_lines = header_rows_first ? a : b;
  const Index n_fields = header_rows_first ? b : a;
  Matrix out(a, b);
  for (Index r = 0; r < n_lines; ++r) {
    require(static_cast<bool>(std::getline(in, line)), errc::malformed_file,
            "missing data line in " + path);
    const std::vector<double> row = parse_row(line, path);
    require(static_cast<Index>(row.size()) == n_fields, errc::malformed_file,
            "wrong field count in " + path);
    for (Index c = 0; c < n_fields; ++c) {
      if (header_rows_first)
        out(r, c) = row[static_cast<std::size_t>(c)];
      else
        out(c, r) = row[static_cast<std::size_t>(c)];  // file line = one column
    }
  }
  return out;
}

void save_csv_matrix(const Matrix& m, Index header_a, Index header_b, bool lines_are_rows,
                     const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), errc::io_failure, "cannot write " + path);
  out << header_a << ',' << header_b << '\n';
  const Index n_lines = lines_are_rows ? m.rows() : m.cols();
  const Index n_fields = lines_are_rows ? m.cols() : m.rows();
  for (Index l = 0; l < n_lines; ++l) {
    for (Index f = 0; f < n_fields; ++f) {
      if (f > 0) out << ',';
      out << format_value(lines_are_rows ? m(l, f) : m(f, l));
    }
    out << '\n';
  }
  require(static_cast<bool>(out), errc::io_failure, "write failure on " + path);
}

}  // namespace

PatternSet load_pattern_csv(const std::string& path) {
  // header "d,M", then one line per memory column
  return PatternSet(load_csv_matrix(path, /*header_rows_first=*/false));
}

void save_pattern_csv(const PatternSet& ps, const std::string& path) {
  save_csv_matrix(ps.data, ps.dim(), ps.count(), /*lines_are_rows=*/false, path);
}

FeatureMap load_feature_map_csv(const std::string& path) {
  // header "D_Phi,d", then one line per row of W
  return FeatureMap(load_csv_matrix(path, /*header_rows_first=*/true));
}

void save_feature_map_csv(const FeatureMap& fm, const std::string& path) {
  save_csv_matrix(fm.W, fm.feature_dim(), fm.input_dim(), /*lines_are_rows=*/true, path);
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace uhop
