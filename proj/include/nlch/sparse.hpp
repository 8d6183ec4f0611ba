#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlch {

/// Compressed sparse row matrix with 64-bit indices.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int64_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  std::size_t row_nnz(std::size_t i) const {
    return static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i]);
  }

  /// y = A x; throws std::invalid_argument on size mismatch.
  std::vector<double> multiply(std::span<const double> x) const;
  double row_sum(std::size_t i) const;
};

/// Writes rows, cols, nnz, row_ptr, col (int64) and val (float64), all little-endian.
void write_binary(const CsrMatrix& m, const std::filesystem::path& path);
CsrMatrix read_binary(const std::filesystem::path& path);

}  // namespace nlch
