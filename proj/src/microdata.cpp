#include "fuzzstoch/microdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"
#include "fuzzstoch/rng.hpp"

namespace fuzzstoch {

namespace {

constexpr double kPi = std::numbers::pi;
// Pair separations within this absolute slack (μm) count as contact.
constexpr double kContactSlack = 1e-9;

// RNG stream ids within the generator.
enum : std::uint64_t { kRadiusStream = 1, kPositionStream = 2,
                       kJiggleStream = 3 };

// Uniform cell grid over the domain for neighbor queries. Cell size is at
// least one disk diameter so overlaps only involve the 3x3 neighborhood.
class CellGrid {
 public:
  CellGrid(double width, double height, double cell)
      : cell_(cell),
        nx_(std::max(1, static_cast<int>(width / cell))),
        ny_(std::max(1, static_cast<int>(height / cell))),
        cells_(static_cast<std::size_t>(nx_) * ny_) {}

  void rebuild(const std::vector<Disk>& disks, double scale) {
    for (auto& c : cells_) c.clear();
    for (std::size_t i = 0; i < disks.size(); ++i) {
      cells_[index(disks[i].cx, disks[i].cy)].push_back(
          static_cast<int>(i));
    }
    (void)scale;
  }

  template <typename Fn>
  void for_neighbors(double x, double y, Fn&& fn) const {
    const int cx = clamp_x(static_cast<int>(x / cell_));
    const int cy = clamp_y(static_cast<int>(y / cell_));
    for (int gy = std::max(0, cy - 1); gy <= std::min(ny_ - 1, cy + 1);
         ++gy) {
      for (int gx = std::max(0, cx - 1); gx <= std::min(nx_ - 1, cx + 1);
           ++gx) {
        for (int id : cells_[static_cast<std::size_t>(gy) * nx_ + gx]) {
          fn(id);
        }
      }
    }
  }

  void move(int id, double old_x, double old_y, double new_x, double new_y) {
    const std::size_t a = index(old_x, old_y);
    const std::size_t b = index(new_x, new_y);
    if (a == b) return;
    auto& cell = cells_[a];
    cell.erase(std::find(cell.begin(), cell.end(), id));
    cells_[b].push_back(id);
  }

 private:
  std::size_t index(double x, double y) const {
    return static_cast<std::size_t>(clamp_y(static_cast<int>(y / cell_))) *
               nx_ +
           clamp_x(static_cast<int>(x / cell_));
  }
  int clamp_x(int v) const { return std::clamp(v, 0, nx_ - 1); }
  int clamp_y(int v) const { return std::clamp(v, 0, ny_ - 1); }

  double cell_;
  int nx_;
  int ny_;
  std::vector<std::vector<int>> cells_;
};

void clamp_into_domain(Disk& d, double radius, double width, double height) {
  d.cx = std::clamp(d.cx, radius, width - radius);
  d.cy = std::clamp(d.cy, radius, height - radius);
}

}  // namespace

double FiberMap::area_fraction() const {
  double area = 0.0;
  for (const auto& d : disks) area += kPi * d.r * d.r;
  return area / (width * height);
}

double BinaryMap::fiber_fraction() const {
  std::size_t count = 0;
  for (auto p : phases) count += p;
  return phases.empty()
             ? 0.0
             : static_cast<double>(count) / static_cast<double>(phases.size());
}

FiberMap generate_microstructure(const FiberMapSpec& spec) {
  if (!(spec.volume_fraction > 0.0 && spec.volume_fraction <= 0.64)) {
    throw DomainError("volume_fraction must be in (0, 0.64]");
  }
  if (!(spec.r_min >= 2.0 && spec.r_max <= 5.0 && spec.r_min <= spec.r_max)) {
    throw DomainError("radius range must be within [2, 5] μm");
  }
  const double domain_area = spec.width * spec.height;
  const double target_area = spec.volume_fraction * domain_area;

  // Draw radii until the cumulative disk area brackets the target, then
  // keep the count whose total is closer. Granularity is one disk, far
  // below the 0.5% attainment bound on realistic domains.
  std::vector<double> radii;
  {
    CounterRng rng(spec.seed, kRadiusStream);
    double area = 0.0;
    while (area < target_area) {
      const double r = spec.r_min + (spec.r_max - spec.r_min) * rng.uniform();
      radii.push_back(r);
      area += kPi * r * r;
    }
    if (radii.size() > 1) {
      const double last = kPi * radii.back() * radii.back();
      if (area - target_area > target_area - (area - last)) {
        radii.pop_back();
      }
    }
  }
  // Large disks first: they are the hardest to place.
  std::sort(radii.begin(), radii.end(), std::greater<double>());

  FiberMap map;
  map.width = spec.width;
  map.height = spec.height;
  map.target_volume_fraction = spec.volume_fraction;
  map.disks.resize(radii.size());
  {
    CounterRng rng(spec.seed, kPositionStream);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      map.disks[i].r = r;
      map.disks[i].cx = r + (spec.width - 2 * r) * rng.uniform();
      map.disks[i].cy = r + (spec.height - 2 * r) * rng.uniform();
    }
  }

  // Grow radii toward their final values, relaxing overlaps between steps
  // by pushing pairs apart; stalled clusters get a targeted jiggle.
  const double cell = 2.0 * spec.r_max;
  CellGrid grid(spec.width, spec.height, cell);
  grid.rebuild(map.disks, 1.0);

  const double tol = spec.overlap_tolerance;
  const std::size_t n_disks = map.disks.size();
  int sweeps_used = 0;
  double scale = n_disks <= 2 ? 1.0 : 0.3;
  CounterRng jiggle(spec.seed, kJiggleStream);
  std::vector<std::uint8_t> blocked(n_disks, 0);

  while (true) {
    std::size_t best_count = static_cast<std::size_t>(-1);
    int patience = 0;
    while (true) {
      if (++sweeps_used > spec.max_sweeps) {
        throw PackingFailure("packing did not converge within sweep budget "
                             "(scale " + std::to_string(scale) + ")");
      }
      std::size_t overlap_count = 0;
      for (std::size_t i = 0; i < n_disks; ++i) {
        Disk& di = map.disks[i];
        const double ri = di.r * scale;
        double push_x = 0.0;
        double push_y = 0.0;
        grid.for_neighbors(di.cx, di.cy, [&](int j) {
          if (static_cast<std::size_t>(j) == i) return;
          const Disk& dj = map.disks[static_cast<std::size_t>(j)];
          const double rj = dj.r * scale;
          const double dx = di.cx - dj.cx;
          const double dy = di.cy - dj.cy;
          const double dist2 = dx * dx + dy * dy;
          const double touch = ri + rj - tol;
          if (touch <= 0.0 || dist2 >= touch * touch) return;
          const double dist = std::sqrt(dist2);
          // Sub-picometer contacts count as resolved; exact kissing is
          // not representable and pushes below one ulp would never move
          // the centers.
          const double overlap = touch - dist;
          if (overlap <= kContactSlack) return;
          ++overlap_count;
          if (dist < 1e-9) {
            const double ang = 2.0 * kPi * jiggle.uniform();
            push_x += 0.5 * touch * std::cos(ang);
            push_y += 0.5 * touch * std::sin(ang);
          } else {
            const double push = 0.55 * overlap + kContactSlack;
            push_x += push * dx / dist;
            push_y += push * dy / dist;
          }
        });
        // Walls push too, so boundary disks end up fully inside.
        const double wall_x = std::clamp(di.cx, ri, spec.width - ri) - di.cx;
        const double wall_y = std::clamp(di.cy, ri, spec.height - ri) - di.cy;
        push_x += wall_x;
        push_y += wall_y;
        blocked[i] = push_x != 0.0 || push_y != 0.0;
        if (blocked[i]) {
          Disk moved = di;
          moved.cx += push_x;
          moved.cy += push_y;
          clamp_into_domain(moved, ri, spec.width, spec.height);
          grid.move(static_cast<int>(i), di.cx, di.cy, moved.cx, moved.cy);
          di = moved;
        }
      }
      if (overlap_count == 0) break;
      if (overlap_count < best_count) {
        best_count = overlap_count;
        patience = 0;
      } else if (++patience >= 40) {
        // Deadlock: nudge only the disks that are still colliding.
        for (std::size_t i = 0; i < n_disks; ++i) {
          if (!blocked[i]) continue;
          Disk& di = map.disks[i];
          const double amp = 0.3 * di.r * scale;
          Disk moved{di.cx + amp * (2.0 * jiggle.uniform() - 1.0),
                     di.cy + amp * (2.0 * jiggle.uniform() - 1.0), di.r};
          clamp_into_domain(moved, di.r * scale, spec.width, spec.height);
          grid.move(static_cast<int>(i), di.cx, di.cy, moved.cx, moved.cy);
          di = moved;
        }
        patience = 0;
        best_count = static_cast<std::size_t>(-1);
      }
    }
    if (scale >= 1.0) break;
    scale = std::min(1.0, scale * 1.02);
  }
  return map;
}

BinaryMap rasterize(const FiberMap& map, double pixel_size) {
  if (!(pixel_size > 0.0)) throw DomainError("pixel_size must be positive");
  BinaryMap out;
  out.width_px = static_cast<std::uint32_t>(std::llround(map.width /
                                                         pixel_size));
  out.height_px = static_cast<std::uint32_t>(std::llround(map.height /
                                                          pixel_size));
  out.pixel_size = pixel_size;
  out.phases.assign(static_cast<std::size_t>(out.width_px) * out.height_px,
                    0);
  for (const auto& d : map.disks) {
    const int px_lo = std::max(
        0, static_cast<int>(std::floor((d.cx - d.r) / pixel_size - 0.5)));
    const int px_hi = std::min(
        static_cast<int>(out.width_px) - 1,
        static_cast<int>(std::ceil((d.cx + d.r) / pixel_size)));
    const int py_lo = std::max(
        0, static_cast<int>(std::floor((d.cy - d.r) / pixel_size - 0.5)));
    const int py_hi = std::min(
        static_cast<int>(out.height_px) - 1,
        static_cast<int>(std::ceil((d.cy + d.r) / pixel_size)));
    const double r2 = d.r * d.r;
    for (int py = py_lo; py <= py_hi; ++py) {
      const double y = (py + 0.5) * pixel_size - d.cy;
      for (int px = px_lo; px <= px_hi; ++px) {
        const double x = (px + 0.5) * pixel_size - d.cx;
        if (x * x + y * y <= r2) {
          out.phases[static_cast<std::size_t>(py) * out.width_px + px] = 1;
        }
      }
    }
  }
  return out;
}

SampleSet extract_1d_samples(const BinaryMap& map, const PhaseModuli& moduli,
                             double strip_height, double element) {
  if (!(moduli.a_fiber > 0.0 && moduli.a_matrix > 0.0)) {
    throw DomainError("phase moduli must be positive");
  }
  // Work in integer nanometers so divisibility is exact.
  const long long px_nm = std::llround(map.pixel_size * 1000.0);
  const long long strip_nm = std::llround(strip_height * 1000.0);
  const long long elem_nm = std::llround(element * 1000.0);
  if (px_nm <= 0 || strip_nm % px_nm != 0 || elem_nm % px_nm != 0) {
    throw DimensionMismatch("strip/element size not a multiple of pixel size");
  }
  const long long strip_px = strip_nm / px_nm;
  const long long elem_px = elem_nm / px_nm;
  if (map.height_px % strip_px != 0 || map.width_px % elem_px != 0) {
    throw DimensionMismatch("map dimensions not divisible by strip/element");
  }

  SampleSet out;
  out.M = static_cast<int>(map.height_px / strip_px);
  out.h = element;
  out.L = static_cast<double>(map.width_px) * map.pixel_size;
  const int n_x = static_cast<int>(map.width_px / elem_px);
  out.x.resize(static_cast<std::size_t>(n_x));
  for (int j = 0; j < n_x; ++j) out.x[static_cast<std::size_t>(j)] =
      (j + 0.5) * element;
  out.values.resize(static_cast<std::size_t>(out.M) * n_x);
  out.provenance = Provenance::Extracted;

  const double b_fiber = 1.0 / moduli.a_fiber;
  const double b_matrix = 1.0 / moduli.a_matrix;
  for (int m = 0; m < out.M; ++m) {
    for (int j = 0; j < n_x; ++j) {
      double sum = 0.0;
      for (long long py = m * strip_px; py < (m + 1) * strip_px; ++py) {
        const std::size_t row = static_cast<std::size_t>(py) * map.width_px;
        for (long long px = j * elem_px; px < (j + 1) * elem_px; ++px) {
          sum += map.phases[row + static_cast<std::size_t>(px)] ? b_fiber
                                                                : b_matrix;
        }
      }
      out.sample(m, j) = sum / static_cast<double>(strip_px * elem_px);
    }
  }
  return out;
}

void write_binary_map(const BinaryMap& map, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + map.phases.size());
  const char magic[4] = {'F', 'S', 'M', '1'};
  bytes.insert(bytes.end(), magic, magic + 4);
  auto put_u32 = [&bytes](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      bytes.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
  };
  put_u32(map.width_px);
  put_u32(map.height_px);
  put_u32(static_cast<std::uint32_t>(std::llround(map.pixel_size * 1000.0)));
  bytes.insert(bytes.end(), map.phases.begin(), map.phases.end());
  write_binary_file(path, bytes);
}

BinaryMap ingest_binary_map(const std::string& path) {
  const auto bytes = read_binary_file(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "FSM1", 4) != 0) {
    throw FormatError("not a BMAP file (bad magic or truncated header)");
  }
  auto get_u32 = [&bytes](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(bytes[off + static_cast<std::size_t>(i)])
           << (8 * i);
    }
    return v;
  };
  BinaryMap map;
  map.width_px = get_u32(4);
  map.height_px = get_u32(8);
  map.pixel_size = static_cast<double>(get_u32(12)) / 1000.0;
  const std::size_t n =
      static_cast<std::size_t>(map.width_px) * map.height_px;
  if (bytes.size() != 16 + n) {
    throw FormatError("BMAP payload size mismatch");
  }
  map.phases.assign(bytes.begin() + 16, bytes.end());
  for (auto p : map.phases) {
    if (p > 1) throw LabelError("BMAP phase byte other than 0/1");
  }
  return map;
}

SampleSet bootstrap(const SampleSet& src, int M_out, double L_out,
                    std::uint64_t seed) {
  if (src.provenance != Provenance::Extracted) {
    throw DomainError("bootstrap source must be extracted samples");
  }
  if (L_out < src.L) throw DomainError("bootstrap length below source length");
  const int n_src = src.points();
  const int n_out = static_cast<int>(std::llround(L_out / src.h));
  const int segments = static_cast<int>(std::ceil(L_out / src.L - 1e-12));

  SampleSet out;
  out.M = M_out;
  out.h = src.h;
  out.L = L_out;
  out.x.resize(static_cast<std::size_t>(n_out));
  for (int j = 0; j < n_out; ++j) out.x[static_cast<std::size_t>(j)] =
      (j + 0.5) * src.h;
  out.values.resize(static_cast<std::size_t>(M_out) * n_out);
  out.provenance = Provenance::Bootstrap;

  for (int m = 0; m < M_out; ++m) {
    CounterRng rng(seed, 0x626f6f74ULL + static_cast<std::uint64_t>(m));
    int written = 0;
    for (int k = 0; k < segments && written < n_out; ++k) {
      const int pick = static_cast<int>(
          rng.below(static_cast<std::uint64_t>(src.M)));
      const int take = std::min(n_src, n_out - written);
      for (int j = 0; j < take; ++j) {
        out.sample(m, written + j) = src.sample(pick, j);
      }
      written += take;
    }
  }
  return out;
}

std::string sample_set_csv(const SampleSet& s) {
  std::string text = "x_um";
  for (int m = 1; m <= s.M; ++m) text += ",b_" + std::to_string(m);
  text += '\n';
  for (int j = 0; j < s.points(); ++j) {
    text += format_double(s.x[static_cast<std::size_t>(j)]);
    for (int m = 0; m < s.M; ++m) {
      text += ',';
      text += format_double(s.sample(m, j));
    }
    text += '\n';
  }
  return text;
}

SampleSet parse_sample_set_csv(const std::string& text,
                               Provenance provenance) {
  SampleSet s;
  s.provenance = provenance;
  std::size_t pos = 0;
  bool header = true;
  std::vector<std::vector<double>> columns_by_row;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (header) {
      if (cells.empty() || cells[0] != "x_um") {
        throw FormatError("sample CSV must start with x_um header");
      }
      s.M = static_cast<int>(cells.size()) - 1;
      header = false;
      continue;
    }
    if (static_cast<int>(cells.size()) != s.M + 1) {
      throw FormatError("sample CSV row width mismatch");
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      row[i] = parse_double(cells[i]);
    }
    columns_by_row.push_back(std::move(row));
  }
  if (header || columns_by_row.empty()) {
    throw FormatError("sample CSV has no data rows");
  }
  const int n_x = static_cast<int>(columns_by_row.size());
  s.x.resize(static_cast<std::size_t>(n_x));
  s.values.resize(static_cast<std::size_t>(s.M) * n_x);
  for (int j = 0; j < n_x; ++j) {
    s.x[static_cast<std::size_t>(j)] = columns_by_row[static_cast<std::size_t>(
        j)][0];
    for (int m = 0; m < s.M; ++m) {
      s.sample(m, j) =
          columns_by_row[static_cast<std::size_t>(j)][static_cast<std::size_t>(
              m + 1)];
    }
  }
  s.h = n_x > 1 ? s.x[1] - s.x[0] : 2.0 * s.x[0];
  s.L = s.h * n_x;
  return s;
}

}  // namespace fuzzstoch
