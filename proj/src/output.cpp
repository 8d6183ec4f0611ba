#include "nlch/output.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

#include "nlch/config.hpp"
#include "nlch/error.hpp"

namespace nlch {

namespace {

std::string sys_reason() { return std::strerror(errno); }

}  // namespace

DiagnosticsWriter::DiagnosticsWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "w");
  if (file_ == nullptr) throw IoError("cannot open " + path.string() + ": " + sys_reason());
  if (std::fprintf(file_, "%s\n", kDiagnosticsHeader) < 0)
    throw IoError("write failed on " + path.string());
}

DiagnosticsWriter::~DiagnosticsWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void DiagnosticsWriter::write(const DiagnosticsRecord& r) {
  if (file_ == nullptr) throw IoError(path_.string() + " is closed");
  const std::string row = format_record(r);
  if (std::fprintf(file_, "%s\n", row.c_str()) < 0) throw IoError("write failed on " + path_.string());
}

void DiagnosticsWriter::close() {
  if (file_ == nullptr) return;
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw IoError("cannot close " + path_.string() + ": " + sys_reason());
}

std::string format_record(const DiagnosticsRecord& r) {
  return std::to_string(r.step) + ',' + format_double(r.t) + ',' + format_double(r.mass) + ',' +
         format_double(r.energy) + ',' + format_double(r.mean_w) + ',' + std::to_string(r.pdas_iters) +
         ',' + format_double(r.projection_residual) + ',' + format_double(r.complementarity_residual) +
         ',' + format_double(r.interface_fraction) + ',' + std::to_string(r.sign_violations);
}

void write_snapshot_csv(const std::filesystem::path& path, const Mesh& mesh, const StepState& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + ": " + sys_reason());
  out << (mesh.dim == 1 ? "x,u,w,lambda\n" : "x,y,u,w,lambda\n");
  for (std::size_t j = 0; j < mesh.num_nodes(); ++j) {
    out << format_double(mesh.coords[j][0]) << ',';
    if (mesh.dim == 2) out << format_double(mesh.coords[j][1]) << ',';
    out << format_double(s.u[j]) << ',' << format_double(s.w[j]) << ',' << format_double(s.lambda[j])
        << '\n';
  }
  if (!out) throw IoError("write failed on " + path.string());
}

void write_snapshot_vtk(const std::filesystem::path& path, const Mesh& mesh, const StepState& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + ": " + sys_reason());
  const std::size_t nx = mesh.nodes_per_side;
  const std::size_t ny = mesh.dim == 2 ? nx : 1;
  const double origin = -static_cast<double>(mesh.layer_cells) * mesh.h;
  out << "# vtk DataFile Version 3.0\n"
      << "nlch step " << s.k << " t=" << format_double(s.t) << '\n'
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << nx << ' ' << ny << " 1\n"
      << "ORIGIN " << format_double(origin) << ' ' << format_double(mesh.dim == 2 ? origin : 0.0) << " 0\n"
      << "SPACING " << format_double(mesh.h) << ' ' << format_double(mesh.h) << " 1\n"
      << "POINT_DATA " << mesh.num_nodes() << '\n';
  auto field = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << format_double(x) << '\n';
  };
  field("u", s.u);
  field("w", s.w);
  field("lambda", s.lambda);
  if (!out) throw IoError("write failed on " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + ": " + sys_reason());
  out << text;
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace nlch
