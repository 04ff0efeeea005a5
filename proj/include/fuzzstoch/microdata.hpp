#ifndef FUZZSTOCH_MICRODATA_HPP
#define FUZZSTOCH_MICRODATA_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzstoch {

struct Disk {
  double cx;  // μm
  double cy;  // μm
  double r;   // μm
};

/// Geometric description of a fiber cross section: disjoint disks in a
/// rectangle, all fully inside the domain.
struct FiberMap {
  double width;   // μm
  double height;  // μm
  std::vector<Disk> disks;
  double target_volume_fraction;

  /// Σ πr² / (width·height). Exact for disjoint interior disks.
  double area_fraction() const;
};

struct FiberMapSpec {
  double width = 1700.0;   // μm
  double height = 500.0;   // μm
  double volume_fraction = 0.63;
  double r_min = 2.0;  // μm
  double r_max = 5.0;  // μm
  std::uint64_t seed = 0;
  double overlap_tolerance = 0.0;  // μm of allowed pair overlap
  int max_sweeps = 20000;          // relaxation budget
};

/// Two-phase pixel grid; phases[row*width_px + col] is 0 (matrix) or
/// 1 (fiber), row-major from the bottom-left corner.
struct BinaryMap {
  std::uint32_t width_px = 0;
  std::uint32_t height_px = 0;
  double pixel_size = 1.0;  // μm
  std::vector<std::uint8_t> phases;

  double fiber_fraction() const;
};

struct PhaseModuli {
  double a_fiber = 24.0;   // GPa
  double a_matrix = 3.6;   // GPa
};

enum class Provenance { Extracted, Bootstrap, Homogenized };

/// M one-dimensional coefficient samples b_m(x_j) on a uniform grid of
/// element centers x_j = (j + 1/2)·h, j = 0..N_x-1, spanning [0, L].
struct SampleSet {
  int M = 0;
  double h = 10.0;  // μm
  double L = 0.0;   // μm
  std::vector<double> x;       // element centers, size N_x
  std::vector<double> values;  // row-major M × N_x, GPa⁻¹
  Provenance provenance = Provenance::Extracted;
  double homogenization_length = 0.0;  // μm, set when homogenized

  int points() const { return static_cast<int>(x.size()); }
  double sample(int m, int j) const {
    return values[static_cast<std::size_t>(m) * x.size() +
                  static_cast<std::size_t>(j)];
  }
  double& sample(int m, int j) {
    return values[static_cast<std::size_t>(m) * x.size() +
                  static_cast<std::size_t>(j)];
  }
};

/// Random dense packing of disks hitting the target area fraction within
/// 0.5% absolute. Deterministic given spec.seed.
FiberMap generate_microstructure(const FiberMapSpec& spec);

/// Pixel labeled fiber iff its center lies inside some disk.
BinaryMap rasterize(const FiberMap& map, double pixel_size);

/// Cut the map into horizontal strips and square elements; per element
/// store b = harmonic-average modulus inverted, i.e. the arithmetic mean
/// of pixel-wise 1/a.
SampleSet extract_1d_samples(const BinaryMap& map, const PhaseModuli& moduli,
                             double strip_height = 10.0,
                             double element = 10.0);

// BMAP container: magic "FSM1", little-endian u32 width_px, u32 height_px,
// u32 pixel_size_nm, then width×height phase bytes row-major.
void write_binary_map(const BinaryMap& map, const std::string& path);
BinaryMap ingest_binary_map(const std::string& path);

/// Concatenate ⌈L_out/src.L⌉ uniformly-with-replacement source samples and
/// trim the trailing excess. Deterministic given seed.
SampleSet bootstrap(const SampleSet& src, int M_out, double L_out,
                    std::uint64_t seed);

std::string sample_set_csv(const SampleSet& s);
SampleSet parse_sample_set_csv(const std::string& text,
                               Provenance provenance);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_MICRODATA_HPP
