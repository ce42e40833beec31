#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwick/common.hpp"
#include "pwick/symbols.hpp"

namespace pwick::kernels {

enum class Geometry { flat, time_circle, space_torus, full_torus };
enum class KernelKind { D, thetaD, Dtheta, piD, Dpi };

std::string to_string(Geometry g);
std::string to_string(KernelKind k);

struct QuadratureSpec {
  std::string rule = "composite_gauss_legendre";
  int nodes_per_panel = 16;
  double panel_length = 2.0;
  // Momentum cutoff K; 0 means "derive from tail_target and the smallest
  // time argument".  Coincident-time evaluation requires an explicit K
  // (the d>=2 kernel is UV-divergent there).
  double momentum_cutoff = 0.0;
  double tail_target = 1e-10;
};

struct GridSpec {
  Geometry geometry = Geometry::flat;
  double beta = 0.0;             // time-circle circumference, if periodic in time
  std::vector<double> lengths;   // spatial circumferences, if toroidal
  // For kind D: first axis = time difference, second axis = space difference.
  // For thetaD/Dtheta: first axis = t + t' >= 0.
  // For piD/Dpi (d = 2): first axis = transverse time difference, space
  // points hold x1 + x1' >= 0.
  std::vector<double> time_points;
  std::vector<std::vector<double>> space_points;
  QuadratureSpec quad;

  static GridSpec flat2d(std::vector<double> time_points, std::vector<double> x_points,
                         QuadratureSpec quad = {});
  void validate(int dim) const;
};

struct SampledKernel {
  GridSpec grid;
  KernelKind kind = KernelKind::D;
  symbols::BoostSpec boost;
  std::vector<std::vector<complexd>> values;  // [time index][space index]
  double tail_estimate = 0.0;
  bool tail_ok = true;

  complexd at(std::size_t it, std::size_t ix) const { return values[it][ix]; }
};

// CSV dump: one row per (t, x) with columns t, x..., re, im.
void dump_csv(const SampledKernel& k, const std::string& path);

// Compact binary dump, little-endian:
//   magic "PWICKKRN" (8 bytes), u32 version = 1, u8 kind, u8 geometry,
//   u32 d, u32 n_time, u32 n_space, f64 beta, f64 lengths[d-1] (0 if flat),
//   f64 time[n_time], f64 space[n_space][d-1], f64 re,im pairs row-major.
void dump_binary(const SampledKernel& k, const std::string& path);
SampledKernel load_binary(const std::string& path);

}  // namespace pwick::kernels
