#include "nlch/sparse.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols)
    throw std::invalid_argument("CsrMatrix::multiply: vector of size " + std::to_string(x.size()) +
                                ", matrix has " + std::to_string(cols) + " columns");
  std::vector<double> y(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
  return y;
}

double CsrMatrix::row_sum(std::size_t i) const {
  double acc = 0.0;
  for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k];
  return acc;
}

namespace {

template <class T>
void put(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <class T>
void get(std::ifstream& in, T* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

}  // namespace

void write_binary(const CsrMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::int64_t header[3] = {static_cast<std::int64_t>(m.rows),
                                  static_cast<std::int64_t>(m.cols),
                                  static_cast<std::int64_t>(m.nnz())};
  put(out, header, 3);
  put(out, m.row_ptr.data(), m.row_ptr.size());
  put(out, m.col.data(), m.col.size());
  put(out, m.val.data(), m.val.size());
  if (!out) throw IoError("write failed: " + path.string());
}

CsrMatrix read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::int64_t header[3];
  get(in, header, 3);
  if (!in || header[0] < 0 || header[1] < 0 || header[2] < 0)
    throw IoError("bad CSR header in " + path.string());
  CsrMatrix m;
  m.rows = static_cast<std::size_t>(header[0]);
  m.cols = static_cast<std::size_t>(header[1]);
  m.row_ptr.resize(m.rows + 1);
  m.col.resize(static_cast<std::size_t>(header[2]));
  m.val.resize(static_cast<std::size_t>(header[2]));
  get(in, m.row_ptr.data(), m.row_ptr.size());
  get(in, m.col.data(), m.col.size());
  get(in, m.val.data(), m.val.size());
  if (!in) throw IoError("truncated CSR file " + path.string());
  return m;
}

}  // namespace nlch
