#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "nlch/diagnostics.hpp"
#include "nlch/mesh.hpp"
#include "nlch/state.hpp"

namespace nlch {

inline constexpr const char* kDiagnosticsHeader =
    "step,t,mass,energy,mean_w,pdas_iters,projection_residual,complementarity_residual,"
    "interface_fraction,sign_violations";

/// Streams diagnostics.csv one row per step.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  ~DiagnosticsWriter();
  DiagnosticsWriter(const DiagnosticsWriter&) = delete;
  DiagnosticsWriter& operator=(const DiagnosticsWriter&) = delete;

  void write(const DiagnosticsRecord& r);
  void close();

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

std::string format_record(const DiagnosticsRecord& r);

/// x[,y],u,w,lambda for every node.
void write_snapshot_csv(const std::filesystem::path& path, const Mesh& mesh, const StepState& s);

/// Legacy ASCII VTK STRUCTURED_POINTS over the whole lattice.
void write_snapshot_vtk(const std::filesystem::path& path, const Mesh& mesh, const StepState& s);

/// Creates the directory (and parents); IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

/// Writes text to a file, replacing it; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nlch
