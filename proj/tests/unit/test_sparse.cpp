#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nlch/error.hpp"
#include "nlch/sparse.hpp"

using namespace nlch;

namespace {

CsrMatrix small() {
  CsrMatrix a;
  a.rows = 2;
  a.cols = 3;
  a.row_ptr = {0, 2, 3};
  a.col = {0, 2, 1};
  a.val = {1.5, -2.0, 4.0};
  return a;
}

}  // namespace

TEST_CASE("csr multiply and row sums") {
  const auto a = small();
  const std::vector<double> x{1.0, 2.0, 3.0};
  const auto y = a.multiply(x);
  CHECK(y == std::vector<double>{1.5 - 6.0, 8.0});
  CHECK(a.row_sum(0) == -0.5);
  CHECK(a.row_nnz(1) == 1);
  CHECK_THROWS_AS(a.multiply(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("binary dump round trip") {
  const auto a = small();
  const auto path = std::filesystem::temp_directory_path() / "nlch_test_csr.bin";
  write_binary(a, path);
  CHECK(std::filesystem::file_size(path) == 8 * (3 + 3 + 3) + 8 * 3);
  const auto b = read_binary(path);
  CHECK(b.rows == 2);
  CHECK(b.cols == 3);
  CHECK(b.row_ptr == a.row_ptr);
  CHECK(b.col == a.col);
  CHECK(b.val == a.val);
  std::filesystem::remove(path);
}

TEST_CASE("binary dump errors") {
  CHECK_THROWS_AS(read_binary("/nonexistent/nlch.bin"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "nlch_test_short.bin";
  std::ofstream(path) << "abc";
  CHECK_THROWS_AS(read_binary(path), IoError);
  std::filesystem::remove(path);
}
