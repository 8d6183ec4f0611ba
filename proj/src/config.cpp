#include "nlch/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlch/error.hpp"

namespace nlch {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  return out;
}

// "name(arg)" -> arg, or nullopt-like empty flag.
bool call_form(const std::string& v, const std::string& name, std::string& arg) {
  if (v.size() < name.size() + 2 || v.compare(0, name.size() + 1, name + "(") != 0 || v.back() != ')')
    return false;
  arg = v.substr(name.size() + 1, v.size() - name.size() - 2);
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(NonlocalCase c) { return c == NonlocalCase::neumann ? "neumann" : "regional"; }

std::string to_string(Model m) {
  switch (m) {
    case Model::nonlocal: return "nonlocal";
    case Model::local: return "local";
    case Model::both: return "both";
  }
  return "nonlocal";
}

void RunConfig::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
  if (n_cells < 2) throw ConfigError("n_cells must be >= 2");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (!(epsilon2 > 0.0)) throw ConfigError("epsilon2 must be > 0");
  if (!(c_F >= 0.0)) throw ConfigError("c_F must be >= 0");
  if (!(T >= 0.0)) throw ConfigError("T must be >= 0");
  if (initial == InitialKind::file && initial_file.empty()) throw ConfigError("initial file path is empty");
  if (!write_csv && !write_vtk) throw ConfigError("formats must include csv or vtk");
  scheme_config().validate();
}

SchemeConfig RunConfig::scheme_config() const {
  SchemeConfig s;
  s.tau = tau;
  s.scheme = scheme;
  s.c_pdas = c_pdas;
  s.lin_tol = lin_tol;
  s.max_pdas_iters = max_pdas_iters;
  return s;
}

RunConfig preset(const std::string& name, const std::string& scale) {
  if (scale != "full" && scale != "desk") throw ConfigError("unknown scale '" + scale + "' (full or desk)");
  const bool full = scale == "full";
  RunConfig c;
  if (name == "ex1a" || name == "ex1b") {
    c.dim = 1;
    c.n_cells = full ? 512 : 256;
    c.tau = 2e-4;
    c.T = full ? 2.0 : 0.06;
    c.delta = 0.25;
    c.epsilon2 = 0.00175;
    c.initial = InitialKind::sinusoid;
    if (name == "ex1a") {
      c.which = NonlocalCase::neumann;
      c.c_F = 1.0;
    } else {
      c.which = NonlocalCase::regional;
      c.c_F = 0.4960;
    }
    c.snapshot_every = full ? 500 : 50;
  } else if (name == "ex2") {
    c.dim = 2;
    c.which = NonlocalCase::neumann;
    c.n_cells = full ? 207 : 64;
    c.tau = full ? 2e-3 : 2e-4;
    c.T = full ? 2.0 : 0.04;
    c.delta = 0.1;
    c.epsilon2 = 0.0003;
    c.c_F = 1.0;
    c.initial = InitialKind::random;
    c.snapshot_every = full ? 100 : 10;
  } else if (name == "ex3") {
    c.dim = 2;
    c.which = NonlocalCase::regional;
    c.n_cells = full ? 64 : 32;
    // tau = 0.01 is past the range where the implicit step has a unique
    // solution; the full preset falls back to the imex splitting.
    c.tau = full ? 0.01 : 2e-3;
    c.T = full ? 1.0 : 0.2;
    c.scheme = full ? Scheme::imex : Scheme::implicit;
    c.delta = 0.3;
    c.epsilon2 = 0.004;
    c.c_F = 0.9;
    c.c_F_cgamma = true;
    c.initial = InitialKind::random;
    c.snapshot_every = full ? 10 : 5;
  } else {
    throw ConfigError("unknown preset '" + name + "' (ex1a, ex1b, ex2, ex3)");
  }
  c.write_vtk = c.dim == 2;
  return c;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string v = boost::algorithm::trim_copy(value);
  std::string arg;
  if (key == "dim") {
    c.dim = to_int<int>(key, v);
  } else if (key == "n_cells") {
    c.n_cells = to_int<std::size_t>(key, v);
  } else if (key == "case") {
    if (v == "neumann" || v == "1")
      c.which = NonlocalCase::neumann;
    else if (v == "regional" || v == "2")
      c.which = NonlocalCase::regional;
    else
      throw ConfigError("case must be neumann or regional, got '" + v + "'");
  } else if (key == "delta") {
    c.delta = to_double(key, v);
  } else if (key == "epsilon2") {
    c.epsilon2 = to_double(key, v);
  } else if (key == "c_F") {
    const auto star = v.find('*');
    if (star != std::string::npos) {
      if (boost::algorithm::trim_copy(v.substr(star + 1)) != "cgamma")
        throw ConfigError("c_F rule must read '<factor>*cgamma', got '" + v + "'");
      c.c_F = to_double(key, boost::algorithm::trim_copy(v.substr(0, star)));
      c.c_F_cgamma = true;
    } else {
      c.c_F = to_double(key, v);
      c.c_F_cgamma = false;
    }
  } else if (key == "tau") {
    c.tau = to_double(key, v);
  } else if (key == "T") {
    c.T = to_double(key, v);
  } else if (key == "scheme") {
    c.scheme = parse_scheme(v);
  } else if (key == "initial") {
    if (v == "sinusoid") {
      c.initial = InitialKind::sinusoid;
    } else if (v == "random") {
      c.initial = InitialKind::random;
    } else if (call_form(v, "random", arg)) {
      c.initial = InitialKind::random;
      c.seed = to_int<std::uint64_t>(key, arg);
    } else if (call_form(v, "file", arg)) {
      c.initial = InitialKind::file;
      c.initial_file = arg;
    } else {
      throw ConfigError("initial must be sinusoid, random(<seed>) or file(<path>), got '" + v + "'");
    }
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "snapshot_every") {
    c.snapshot_every = to_int<std::size_t>(key, v);
  } else if (key == "output_dir") {
    c.output_dir = v;
  } else if (key == "formats") {
    c.write_csv = c.write_vtk = false;
    std::stringstream ss(v);
    std::string f;
    while (std::getline(ss, f, ',')) {
      boost::algorithm::trim(f);
      if (f == "csv")
        c.write_csv = true;
      else if (f == "vtk")
        c.write_vtk = true;
      else
        throw ConfigError("unknown format '" + f + "' (csv, vtk)");
    }
  } else if (key == "model") {
    if (v == "nonlocal")
      c.model = Model::nonlocal;
    else if (v == "local")
      c.model = Model::local;
    else if (v == "both")
      c.model = Model::both;
    else
      throw ConfigError("model must be nonlocal, local or both, got '" + v + "'");
  } else if (key == "c_pdas") {
    c.c_pdas = to_double(key, v);
  } else if (key == "lin_tol") {
    c.lin_tol = to_double(key, v);
  } else if (key == "max_pdas_iters") {
    c.max_pdas_iters = to_int<int>(key, v);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
    try {
      apply_setting(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const RunConfig& c) {
  std::ostringstream o;
  o << "dim = " << c.dim << '\n'
    << "n_cells = " << c.n_cells << '\n'
    << "case = " << to_string(c.which) << '\n'
    << "delta = " << format_double(c.delta) << '\n'
    << "epsilon2 = " << format_double(c.epsilon2) << '\n'
    << "c_F = " << format_double(c.c_F) << (c.c_F_cgamma ? "*cgamma" : "") << '\n'
    << "tau = " << format_double(c.tau) << '\n'
    << "T = " << format_double(c.T) << '\n'
    << "scheme = " << to_string(c.scheme) << '\n';
  switch (c.initial) {
    case InitialKind::sinusoid: o << "initial = sinusoid\n"; break;
    case InitialKind::random: o << "initial = random(" << c.seed << ")\n"; break;
    case InitialKind::file: o << "initial = file(" << c.initial_file.string() << ")\n"; break;
  }
  o << "snapshot_every = " << c.snapshot_every << '\n'
    << "output_dir = " << c.output_dir.string() << '\n'
    << "formats = " << (c.write_csv ? "csv" : "") << (c.write_csv && c.write_vtk ? "," : "")
    << (c.write_vtk ? "vtk" : "") << '\n'
    << "model = " << to_string(c.model) << '\n'
    << "c_pdas = " << format_double(c.c_pdas) << '\n'
    << "lin_tol = " << format_double(c.lin_tol) << '\n'
    << "max_pdas_iters = " << c.max_pdas_iters << '\n';
  return o.str();
}

}  // namespace nlch
