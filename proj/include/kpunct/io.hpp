#pragma once

#include <string>
#include <vector>

#include "kpunct/kernel.hpp"
#include "kpunct/masks.hpp"

namespace kpunct {

// Binary containers (little-endian, version 1):
//   PNCM  bit masks (data mask or kernel-mask upper triangle)
//   PNCK  punctured kernel in CSR-over-upper-triangle form
//   PNCX  dense float64 matrix, column-major, real or complex
// Loaders validate magic, version and payload sizes and throw FormatError on
// anything inconsistent.

void save_data_mask(const std::string& path, const DataMask& m);
DataMask load_data_mask(const std::string& path);

void save_kernel_mask(const std::string& path, const KernelMask& m);
KernelMask load_kernel_mask(const std::string& path);

template <class Scalar>
void save_kernel(const std::string& path, const PuncturedKernel<Scalar>& k);
template <class Scalar>
PuncturedKernel<Scalar> load_kernel(const std::string& path);

template <class Scalar>
void save_matrix(const std::string& path, const DataMatrix<Scalar>& x);
template <class Scalar>
DataMatrix<Scalar> load_matrix(const std::string& path);

// Plain-text matrix reader: comma-separated values, one row of features per
// line, with an optional non-numeric header line that is skipped.
Eigen::MatrixXd load_matrix_csv(const std::string& path);

// Shortest round-trip decimal form (17 significant digits).
std::string fmt17(double v);

// Column-oriented CSV with a header row; all cells preformatted as strings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header)
      : header_(std::move(header)) {}
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& cells);
  std::size_t rows() const { return rows_.size(); }
  void save(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace kpunct
