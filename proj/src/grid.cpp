#include "pwick/grid.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace pwick::kernels {

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::flat: return "flat";
    case Geometry::time_circle: return "time_circle";
    case Geometry::space_torus: return "space_torus";
    case Geometry::full_torus: return "full_torus";
  }
  return "?";
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::D: return "D";
    case KernelKind::thetaD: return "thetaD";
    case KernelKind::Dtheta: return "Dtheta";
    case KernelKind::piD: return "piD";
    case KernelKind::Dpi: return "Dpi";
  }
  return "?";
}

GridSpec GridSpec::flat2d(std::vector<double> time_points, std::vector<double> x_points,
                          QuadratureSpec quad) {
  GridSpec g;
  g.geometry = Geometry::flat;
  g.time_points = std::move(time_points);
  g.space_points.reserve(x_points.size());
  for (double x : x_points) g.space_points.push_back({x});
  g.quad = std::move(quad);
  return g;
}

void GridSpec::validate(int dim) const {
  require(!time_points.empty() && !space_points.empty(), "GridSpec: empty grid");
  for (std::size_t i = 1; i < time_points.size(); ++i) {
    require(time_points[i] > time_points[i - 1], "GridSpec: time points must be strictly ordered");
  }
  for (const auto& p : space_points) {
    require(static_cast<int>(p.size()) == dim - 1, "GridSpec: space point dimension mismatch");
    for (double c : p) require(is_finite(c), "GridSpec: non-finite space point");
  }
  for (std::size_t i = 1; i < space_points.size(); ++i) {
    require(space_points[i] > space_points[i - 1],
            "GridSpec: space points must be strictly ordered");
  }
  require(quad.momentum_cutoff >= 0.0, "GridSpec: momentum cutoff must be >= 0");
  require(quad.tail_target > 0.0, "GridSpec: tail target must be positive");
  if (geometry == Geometry::time_circle || geometry == Geometry::full_torus) {
    require(beta > 0.0, "GridSpec: beta must be positive for circle geometries");
    for (double t : time_points) {
      require(t >= -0.5 * beta && t <= 0.5 * beta,
              "GridSpec: circle time points must lie in the fundamental domain");
    }
  }
  if (geometry == Geometry::space_torus || geometry == Geometry::full_torus) {
    require(static_cast<int>(lengths.size()) == dim - 1, "GridSpec: torus lengths mismatch");
    for (double l : lengths) require(l > 0.0, "GridSpec: torus lengths must be positive");
  }
}

void dump_csv(const SampledKernel& k, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, "dump_csv: cannot open " + path);
  const int dsp = k.grid.space_points.empty() ? 0 : static_cast<int>(k.grid.space_points[0].size());
  std::fprintf(f, "t");
  for (int a = 0; a < dsp; ++a) std::fprintf(f, ",x%d", a + 1);
  std::fprintf(f, ",re,im\n");
  for (std::size_t it = 0; it < k.grid.time_points.size(); ++it) {
    for (std::size_t ix = 0; ix < k.grid.space_points.size(); ++ix) {
      std::fprintf(f, "%.17g", k.grid.time_points[it]);
      for (double c : k.grid.space_points[ix]) std::fprintf(f, ",%.17g", c);
      const complexd v = k.values[it][ix];
      std::fprintf(f, ",%.17g,%.17g\n", v.real(), v.imag());
    }
  }
  std::fclose(f);
}

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void dump_binary(const SampledKernel& k, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "dump_binary: cannot open " + path);
  os.write("PWICKKRN", 8);
  put<std::uint32_t>(os, 1);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(k.kind));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(k.grid.geometry));
  const std::uint32_t d = static_cast<std::uint32_t>(k.boost.dim);
  put(os, d);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(k.grid.time_points.size()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(k.grid.space_points.size()));
  put<double>(os, k.grid.beta);
  for (std::uint32_t a = 0; a + 1 < d; ++a) {
    put<double>(os, a < k.grid.lengths.size() ? k.grid.lengths[a] : 0.0);
  }
  for (double t : k.grid.time_points) put(os, t);
  for (const auto& p : k.grid.space_points) {
    for (double c : p) put(os, c);
  }
  for (const auto& row : k.values) {
    for (const complexd& v : row) {
      put(os, v.real());
      put(os, v.imag());
    }
  }
}

SampledKernel load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "load_binary: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  require(std::memcmp(magic, "PWICKKRN", 8) == 0, "load_binary: bad magic");
  require(get<std::uint32_t>(is) == 1, "load_binary: unsupported version");
  SampledKernel k;
  k.kind = static_cast<KernelKind>(get<std::uint8_t>(is));
  k.grid.geometry = static_cast<Geometry>(get<std::uint8_t>(is));
  const auto d = get<std::uint32_t>(is);
  const auto nt = get<std::uint32_t>(is);
  const auto nx = get<std::uint32_t>(is);
  k.grid.beta = get<double>(is);
  k.grid.lengths.resize(d - 1);
  for (auto& l : k.grid.lengths) l = get<double>(is);
  k.grid.time_points.resize(nt);
  for (auto& t : k.grid.time_points) t = get<double>(is);
  k.grid.space_points.assign(nx, std::vector<double>(d - 1));
  for (auto& p : k.grid.space_points) {
    for (auto& c : p) c = get<double>(is);
  }
  k.values.assign(nt, std::vector<complexd>(nx));
  for (auto& row : k.values) {
    for (auto& v : row) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      v = {re, im};
    }
  }
  require(is.good(), "load_binary: truncated file");
  return k;
}

}  // namespace pwick::kernels
