#include "kpunct/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

namespace kpunct {

namespace {

constexpr std::uint32_t kVersion = 1;

void wr_bytes(std::ofstream& os, const void* p, std::size_t bytes) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
}

template <class T>
void wr(std::ofstream& os, const T& v) {
  wr_bytes(os, &v, sizeof(T));
}

void rd_bytes(std::ifstream& is, void* p, std::size_t bytes,
              const std::string& what) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
  if (!is) throw FormatError("truncated file while reading " + what);
}

template <class T>
T rd(std::ifstream& is, const std::string& what) {
  T v;
  rd_bytes(is, &v, sizeof(T), what);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  return is;
}

void wr_magic(std::ofstream& os, const char magic[4]) {
  wr_bytes(os, magic, 4);
  wr(os, kVersion);
}

void expect_magic(std::ifstream& is, const char magic[4],
                  const std::string& path) {
  char got[4];
  rd_bytes(is, got, 4, "magic");
  if (std::memcmp(got, magic, 4) != 0)
    throw FormatError(path + ": bad magic");
  const auto version = rd<std::uint32_t>(is, "version");
  if (version != kVersion)
    throw FormatError(path + ": unsupported version " + std::to_string(version));
}

void finish_read(std::ifstream& is, const std::string& path) {
  is.peek();
  if (!is.eof()) throw FormatError(path + ": trailing bytes");
}

// Keeps corrupt size fields from turning into huge allocations.
void check_extent(std::uint64_t value, const char* what,
                  const std::string& path) {
  if (value > (1ull << 32))
    throw FormatError(path + ": implausible " + what + " " +
                      std::to_string(value));
}

struct MaskHeader {
  std::uint8_t kind;  // 0 data, 1 kernel
  std::uint8_t diag;
  std::uint16_t reserved16;
  std::uint32_t reserved32;  // keeps the layout free of implicit padding
  std::uint64_t rows;
  std::uint64_t cols;
};

}  // namespace

void save_data_mask(const std::string& path, const DataMask& m) {
  auto os = open_out(path);
  wr_magic(os, "PNCM");
  wr(os, MaskHeader{0, 0, 0, 0, m.rows(), m.cols()});
  wr_bytes(os, m.words().data(), m.words().size() * 8);
  if (!os) throw ConfigError("write failed for " + path);
}

DataMask load_data_mask(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "PNCM", path);
  const auto h = rd<MaskHeader>(is, "mask header");
  if (h.kind != 0) throw FormatError(path + ": not a data mask");
  if (h.rows == 0 || h.cols == 0) throw FormatError(path + ": empty mask");
  check_extent(h.rows, "row count", path);
  check_extent(h.cols, "column count", path);
  DataMask m(h.rows, h.cols);
  rd_bytes(is, m.words().data(), m.words().size() * 8, "mask bits");
  finish_read(is, path);
  // bits past rows*cols must be zero padding
  const std::size_t used = h.rows * h.cols;
  if (used % 64 != 0) {
    const std::uint64_t tail = m.words().back() >> (used % 64);
    if (tail != 0) throw FormatError(path + ": nonzero padding bits");
  }
  return m;
}

void save_kernel_mask(const std::string& path, const KernelMask& m) {
  auto os = open_out(path);
  wr_magic(os, "PNCM");
  wr(os, MaskHeader{1, static_cast<std::uint8_t>(m.diag ? 1 : 0), 0, 0, m.n, m.n});
  // strict upper triangle, row-major rank order
  const std::uint64_t nbits = m.n * (m.n - 1) / 2;
  std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
  for (const auto& ij : m.pairs) {
    const std::uint64_t i = ij.first, j = ij.second;
    const std::uint64_t q =
        i * m.n - i * (i + 1) / 2 + (j - i - 1);
    words[q >> 6] |= 1ull << (q & 63);
  }
  wr_bytes(os, words.data(), words.size() * 8);
  if (!os) throw ConfigError("write failed for " + path);
}

KernelMask load_kernel_mask(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "PNCM", path);
  const auto h = rd<MaskHeader>(is, "mask header");
  if (h.kind != 1) throw FormatError(path + ": not a kernel mask");
  if (h.rows != h.cols || h.rows == 0)
    throw FormatError(path + ": kernel mask must be square");
  check_extent(h.rows, "mask size", path);
  KernelMask m;
  m.n = h.rows;
  m.diag = h.diag != 0;
  const std::uint64_t nbits = m.n * (m.n - 1) / 2;
  std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
  rd_bytes(is, words.data(), words.size() * 8, "mask bits");
  finish_read(is, path);
  if (nbits % 64 != 0 && !words.empty() && (words.back() >> (nbits % 64)) != 0)
    throw FormatError(path + ": nonzero padding bits");
  std::uint64_t q = 0;
  for (std::uint32_t i = 0; i + 1 < m.n; ++i)
    for (std::uint32_t j = i + 1; j < m.n; ++j, ++q)
      if ((words[q >> 6] >> (q & 63)) & 1u) m.pairs.emplace_back(i, j);
  return m;
}

namespace {

struct KernelHeader {
  std::uint8_t scalar_kind;  // 0 real, 1 complex
  std::uint8_t has_diag;
  std::uint16_t reserved16;
  std::uint32_t reserved32;
  std::uint64_t n;
  std::uint64_t nnz;
  std::uint64_t flop_count;
};

template <class Scalar>
constexpr std::uint8_t scalar_kind_of() {
  return is_complex<Scalar>::value ? 1 : 0;
}

}  // namespace

template <class Scalar>
void save_kernel(const std::string& path, const PuncturedKernel<Scalar>& k) {
  auto os = open_out(path);
  wr_magic(os, "PNCK");
  wr(os, KernelHeader{scalar_kind_of<Scalar>(),
                      static_cast<std::uint8_t>(k.has_diag ? 1 : 0), 0, 0,
                      k.n, k.cols.size(), k.flop_count});
  wr_bytes(os, k.row_ptr.data(), k.row_ptr.size() * 8);
  wr_bytes(os, k.cols.data(), k.cols.size() * 4);
  wr_bytes(os, k.vals.data(), k.vals.size() * sizeof(Scalar));
  if (k.has_diag) wr_bytes(os, k.diag.data(), k.diag.size() * 8);
  if (!os) throw ConfigError("write failed for " + path);
}

template <class Scalar>
PuncturedKernel<Scalar> load_kernel(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "PNCK", path);
  const auto h = rd<KernelHeader>(is, "kernel header");
  if (h.scalar_kind != scalar_kind_of<Scalar>())
    throw FormatError(path + ": scalar kind mismatch");
  if (h.n == 0) throw FormatError(path + ": empty kernel");
  check_extent(h.n, "kernel size", path);
  check_extent(h.nnz, "entry count", path);
  PuncturedKernel<Scalar> k;
  k.n = h.n;
  k.has_diag = h.has_diag != 0;
  k.flop_count = h.flop_count;
  k.row_ptr.resize(h.n + 1);
  k.cols.resize(h.nnz);
  k.vals.resize(h.nnz);
  rd_bytes(is, k.row_ptr.data(), k.row_ptr.size() * 8, "row offsets");
  rd_bytes(is, k.cols.data(), k.cols.size() * 4, "columns");
  rd_bytes(is, k.vals.data(), k.vals.size() * sizeof(Scalar), "values");
  if (k.has_diag) {
    k.diag.resize(h.n);
    rd_bytes(is, k.diag.data(), k.diag.size() * 8, "diagonal");
  }
  finish_read(is, path);
  if (k.row_ptr.front() != 0 || k.row_ptr.back() != h.nnz)
    throw FormatError(path + ": inconsistent row offsets");
  for (std::size_t i = 0; i < h.n; ++i) {
    if (k.row_ptr[i] > k.row_ptr[i + 1])
      throw FormatError(path + ": row offsets not monotone");
    for (std::uint64_t t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      if (k.cols[t] <= i || k.cols[t] >= h.n)
        throw FormatError(path + ": column index outside the upper triangle");
  }
  return k;
}

namespace {

struct MatrixHeader {
  std::uint8_t scalar_kind;
  std::uint8_t reserved8;
  std::uint16_t reserved16;
  std::uint32_t reserved32;
  std::uint64_t rows;
  std::uint64_t cols;
};

}  // namespace

template <class Scalar>
void save_matrix(const std::string& path, const DataMatrix<Scalar>& x) {
  auto os = open_out(path);
  wr_magic(os, "PNCX");
  wr(os, MatrixHeader{scalar_kind_of<Scalar>(), 0, 0, 0,
                      static_cast<std::uint64_t>(x.rows()),
                      static_cast<std::uint64_t>(x.cols())});
  wr_bytes(os, x.data(), sizeof(Scalar) * static_cast<std::size_t>(x.size()));
  if (!os) throw ConfigError("write failed for " + path);
}

template <class Scalar>
DataMatrix<Scalar> load_matrix(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "PNCX", path);
  const auto h = rd<MatrixHeader>(is, "matrix header");
  if (h.scalar_kind != scalar_kind_of<Scalar>())
    throw FormatError(path + ": scalar kind mismatch");
  if (h.rows == 0 || h.cols == 0) throw FormatError(path + ": empty matrix");
  check_extent(h.rows, "row count", path);
  check_extent(h.cols, "column count", path);
  DataMatrix<Scalar> x(static_cast<Eigen::Index>(h.rows),
                       static_cast<Eigen::Index>(h.cols));
  rd_bytes(is, x.data(), sizeof(Scalar) * static_cast<std::size_t>(x.size()),
           "matrix values");
  finish_read(is, path);
  return x;
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    bool bad = false;
    std::size_t at = 0;
    while (at <= line.size()) {
      std::size_t comma = line.find(',', at);
      if (comma == std::string::npos) comma = line.size();
      std::size_t lo = at, hi = comma;
      while (lo < hi && (line[lo] == ' ' || line[lo] == '\t')) ++lo;
      while (hi > lo && (line[hi - 1] == ' ' || line[hi - 1] == '\t')) --hi;
      double v = 0.0;
      const auto rc = std::from_chars(line.data() + lo, line.data() + hi, v);
      if (rc.ec != std::errc() || rc.ptr != line.data() + hi) {
        bad = true;
        break;
      }
      row.push_back(v);
      at = comma + 1;
    }
    if (bad) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw FormatError(path + ": unparseable row");
    }
    first = false;
    if (!rows.empty() && rows.front().size() != row.size())
      throw FormatError(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path + ": no data rows");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return x;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw DimensionError("csv row arity mismatch");
  rows_.push_back(std::move(cells));
}

void CsvWriter::add_row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(fmt17(v));
  add_row(std::move(s));
}

void CsvWriter::save(const std::string& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < header_.size(); ++j)
    os << header_[j] << (j + 1 < header_.size() ? "," : "\n");
  for (const auto& row : rows_)
    for (std::size_t j = 0; j < row.size(); ++j)
      os << row[j] << (j + 1 < row.size() ? "," : "\n");
  if (!os) throw ConfigError("write failed for " + path);
}

template void save_kernel(const std::string&, const PuncturedKernel<double>&);
template void save_kernel(const std::string&,
                          const PuncturedKernel<std::complex<double>>&);
template PuncturedKernel<double> load_kernel(const std::string&);
template PuncturedKernel<std::complex<double>> load_kernel(const std::string&);
template void save_matrix(const std::string&, const DataMatrix<double>&);
template void save_matrix(const std::string&,
                          const DataMatrix<std::complex<double>>&);
template DataMatrix<double> load_matrix(const std::string&);
template DataMatrix<std::complex<double>> load_matrix(const std::string&);

}  // namespace kpunct
