#include "firesquad/grid_map.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "firesquad/errors.hpp"

namespace firesquad {

// ---------------------------------------------------------------------------
// GridMap
// ---------------------------------------------------------------------------

GridMap::GridMap(int width, int height, double resolution, Vec2 origin, std::vector<std::uint8_t> occupied)
    : width_(width), height_(height), resolution_(resolution), origin_(origin), cells_(std::move(occupied)) {
  if (width < 1 || height < 1) throw InputError("map dimensions must be at least 1x1");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InputError("map resolution must be > 0");
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InputError("map cell count does not match dimensions");
  }
  for (auto &c : cells_) {
    c = c ? 1 : 0;
    occupied_count_ += c;
  }
}

bool GridMap::contains(Vec2 p) const {
  const Vec2 g = to_grid(p);
  return g.x >= 0.0 && g.y >= 0.0 && g.x <= width_ && g.y <= height_;
}

std::optional<Cell> GridMap::cell_at(Vec2 p) const {
  if (!contains(p)) return std::nullopt;
  const Vec2 g = to_grid(p);
  // The far edge belongs to the last cell.
  const int i = std::min(static_cast<int>(std::floor(g.x)), width_ - 1);
  const int j = std::min(static_cast<int>(std::floor(g.y)), height_ - 1);
  return Cell{i, j};
}

Vec2 GridMap::cell_center(Cell c) const {
  return origin_ + Vec2{(c.i + 0.5) * resolution_, (c.j + 0.5) * resolution_};
}

bool GridMap::blocked_at(Vec2 p) const {
  const auto c = cell_at(p);
  return !c || occupied(*c);
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

MapMetadata parse_map_metadata(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw InputError(std::string("map metadata: ") + e.what());
  }
  if (!root.IsMap()) throw InputError("map metadata: expected a mapping");
  MapMetadata meta;
  auto required = [&](const char *key) {
    const YAML::Node n = root[key];
    if (!n) throw InputError(std::string("map metadata: missing key '") + key + "'");
    try {
      return n.as<double>();
    } catch (const YAML::Exception &) {
      throw InputError(std::string("map metadata: key '") + key + "' is not a number");
    }
  };
  meta.resolution = required("resolution");
  meta.origin = {required("origin_x"), required("origin_y")};
  meta.occupied_threshold = required("occupied_threshold");
  if (root["image"]) meta.image = root["image"].as<std::string>();
  if (!(meta.resolution > 0.0)) throw InputError("map metadata: resolution must be > 0");
  if (!(meta.occupied_threshold >= 0.0 && meta.occupied_threshold <= 1.0)) {
    throw InputError("map metadata: occupied_threshold must lie in [0, 1]");
  }
  return meta;
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2) throw InputError("graymap: truncated header");
    std::string m{static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
    pos_ = 2;
    return m;
  }

  long header_int(const char *what) {
    skip_space_and_comments();
    long v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000) throw InputError(std::string("graymap: ") + what + " out of range");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw InputError(std::string("graymap: malformed header (") + what + ")");
    return v;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw InputError("graymap: malformed header (missing separator before data)");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GridMap load_map(std::span<const std::uint8_t> pgm, const MapMetadata &meta) {
  if (!(meta.occupied_threshold >= 0.0 && meta.occupied_threshold <= 1.0)) {
    throw InputError("occupied_threshold must lie in [0, 1]");
  }
  PgmReader reader(pgm);
  const std::string magic = reader.magic();
  if (magic != "P5" && magic != "P2") throw InputError("graymap: malformed header (expected P2 or P5)");
  const long width = reader.header_int("width");
  const long height = reader.header_int("height");
  const long maxval = reader.header_int("maxval");
  if (width < 1 || height < 1) throw InputError("graymap: dimensions must be positive");
  if (maxval < 1 || maxval > 65535) throw InputError("graymap: maxval must lie in [1, 65535]");

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<long> values;
  values.reserve(count);
  if (magic == "P5") {
    reader.single_whitespace();
    const auto data = reader.rest();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (data.size() != count * bpp) {
      throw InputError("graymap: dimension mismatch (expected " + std::to_string(count * bpp) +
                       " data bytes, found " + std::to_string(data.size()) + ")");
    }
    for (std::size_t k = 0; k < count; ++k) {
      values.push_back(bpp == 1 ? data[k] : (data[2 * k] << 8) | data[2 * k + 1]);
    }
  } else {
    const auto data = reader.rest();
    std::string text(data.begin(), data.end());
    std::istringstream in(text);
    long v = 0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw InputError("graymap: malformed ASCII sample");
    if (values.size() != count) {
      throw InputError("graymap: dimension mismatch (expected " + std::to_string(count) + " samples, found " +
                       std::to_string(values.size()) + ")");
    }
  }

  const int w = static_cast<int>(width);
  const int h = static_cast<int>(height);
  std::vector<std::uint8_t> occupied(count, 0);
  for (int row = 0; row < h; ++row) {
    const int j = h - 1 - row;
    for (int i = 0; i < w; ++i) {
      const long raw = values[static_cast<std::size_t>(row) * w + i];
      if (raw < 0 || raw > maxval) throw InputError("graymap: sample exceeds maxval");
      const double darkness = static_cast<double>(maxval - raw) / static_cast<double>(maxval);
      occupied[static_cast<std::size_t>(j) * w + i] = darkness >= meta.occupied_threshold ? 1 : 0;
    }
  }
  return GridMap(w, h, meta.resolution, meta.origin, std::move(occupied));
}

namespace {

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

GridMap load_map_file(const std::filesystem::path &metadata_path) {
  const MapMetadata meta = parse_map_metadata(read_text(metadata_path));
  if (meta.image.empty()) throw InputError("map metadata: missing key 'image' in " + metadata_path.string());
  const std::filesystem::path image = metadata_path.parent_path() / meta.image;
  const std::string bytes = read_text(image);
  const auto *begin = reinterpret_cast<const std::uint8_t *>(bytes.data());
  return load_map(std::span<const std::uint8_t>(begin, bytes.size()), meta);
}

std::vector<std::uint8_t> encode_pgm(const GridMap &map) {
  const std::string header =
      "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + map.cell_count());
  for (int row = 0; row < map.height(); ++row) {
    const int j = map.height() - 1 - row;
    for (int i = 0; i < map.width(); ++i) out.push_back(map.occupied(Cell{i, j}) ? 0 : 255);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distance field
// ---------------------------------------------------------------------------

DistanceField::DistanceField(int width, int height, double resolution, Vec2 origin, DistanceMetric metric,
                             std::vector<double> meters, std::vector<std::int32_t> nearest)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      metric_(metric),
      meters_(std::move(meters)),
      nearest_(std::move(nearest)) {}

double DistanceField::at(Vec2 p) const {
  const Vec2 g = (p - origin_) / resolution_;
  if (g.x < 0.0 || g.y < 0.0 || g.x > width_ || g.y > height_) return kNoObstacle;
  const int i = std::min(static_cast<int>(g.x), width_ - 1);
  const int j = std::min(static_cast<int>(g.y), height_ - 1);
  return at(Cell{i, j});
}

Vec2 DistanceField::gradient(Cell c) const {
  auto value = [&](int i, int j) { return at(Cell{i, j}); };
  if (!std::isfinite(value(c.i, c.j))) return {};
  auto diff = [&](int lo_i, int lo_j, int hi_i, int hi_j, double span) {
    return (value(hi_i, hi_j) - value(lo_i, lo_j)) / (span * resolution_);
  };
  Vec2 g;
  const int il = std::max(c.i - 1, 0), ih = std::min(c.i + 1, width_ - 1);
  const int jl = std::max(c.j - 1, 0), jh = std::min(c.j + 1, height_ - 1);
  if (ih > il) g.x = diff(il, c.j, ih, c.j, ih - il);
  if (jh > jl) g.y = diff(c.i, jl, c.i, jh, jh - jl);
  return g;
}

Vec2 DistanceField::obstacle_direction(Cell c) const {
  const Vec2 g = gradient(c);
  if (norm(g) < 1e-6) return {};
  return -normalized(g);
}

namespace {

constexpr double kFar = 1e30;

// Lower envelope of parabolas (q - p)^2 + f(p) over sites with f(p) < kFar.
void squared_distance_1d(const std::vector<double> &f, std::vector<double> &d, std::vector<std::int32_t> &arg,
                         std::vector<int> &v, std::vector<double> &z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFar) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * q - 2.0 * p);
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    if (s <= z[k]) {
      // Only possible for k == 0: the new parabola dominates everywhere.
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kFar);
    std::fill(arg.begin(), arg.end(), -1);
    return;
  }
  int m = 0;
  for (int q = 0; q < n; ++q) {
    while (z[m + 1] < q) ++m;
    const double dq = q - v[m];
    d[q] = dq * dq + f[v[m]];
    arg[q] = v[m];
  }
}

DistanceField euclidean_transform(const GridMap &map) {
  const int w = map.width();
  const int h = map.height();
  const std::size_t n = map.cell_count();
  std::vector<double> col_d(n, kFar);
  std::vector<std::int32_t> col_arg(n, -1);

  const int longest = std::max(w, h);
  std::vector<double> f(longest), d(longest);
  std::vector<std::int32_t> arg(longest);
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);

  f.resize(h);
  d.resize(h);
  arg.resize(h);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < h; ++j) f[j] = map.occupied(Cell{i, j}) ? 0.0 : kFar;
    squared_distance_1d(f, d, arg, v, z);
    for (int j = 0; j < h; ++j) {
      col_d[static_cast<std::size_t>(j) * w + i] = d[j];
      col_arg[static_cast<std::size_t>(j) * w + i] = arg[j];
    }
  }

  std::vector<double> meters(n, kNoObstacle);
  std::vector<std::int32_t> nearest(n, -1);
  f.resize(w);
  d.resize(w);
  arg.resize(w);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) f[i] = col_d[static_cast<std::size_t>(j) * w + i];
    squared_distance_1d(f, d, arg, v, z);
    for (int i = 0; i < w; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * w + i;
      if (arg[i] < 0) continue;
      meters[idx] = std::sqrt(d[i]) * map.resolution();
      const int src_i = arg[i];
      const int src_j = col_arg[static_cast<std::size_t>(j) * w + src_i];
      nearest[idx] = static_cast<std::int32_t>(static_cast<std::size_t>(src_j) * w + src_i);
    }
  }
  return DistanceField(w, h, map.resolution(), map.origin(), DistanceMetric::euclidean, std::move(meters),
                       std::move(nearest));
}

DistanceField chamfer_transform(const GridMap &map) {
  const int w = map.width();
  const int h = map.height();
  const std::size_t n = map.cell_count();
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> dist(n, kInf);
  std::vector<std::int32_t> nearest(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    if (map.occupied(k)) {
      dist[k] = 0;
      nearest[k] = static_cast<std::int32_t>(k);
    }
  }
  auto relax = [&](int i, int j, int di, int dj, int cost) {
    const int ni = i + di, nj = j + dj;
    if (ni < 0 || nj < 0 || ni >= w || nj >= h) return;
    const std::size_t self = static_cast<std::size_t>(j) * w + i;
    const std::size_t other = static_cast<std::size_t>(nj) * w + ni;
    if (dist[other] + cost < dist[self]) {
      dist[self] = dist[other] + cost;
      nearest[self] = nearest[other];
    }
  };
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      relax(i, j, -1, 0, 3);
      relax(i, j, -1, -1, 4);
      relax(i, j, 0, -1, 3);
      relax(i, j, 1, -1, 4);
    }
  }
  for (int j = h - 1; j >= 0; --j) {
    for (int i = w - 1; i >= 0; --i) {
      relax(i, j, 1, 0, 3);
      relax(i, j, 1, 1, 4);
      relax(i, j, 0, 1, 3);
      relax(i, j, -1, 1, 4);
    }
  }
  std::vector<double> meters(n, kNoObstacle);
  for (std::size_t k = 0; k < n; ++k) {
    if (dist[k] < kInf) meters[k] = dist[k] / 3.0 * map.resolution();
  }
  return DistanceField(w, h, map.resolution(), map.origin(), DistanceMetric::chamfer34, std::move(meters),
                       std::move(nearest));
}

}  // namespace

DistanceField distance_transform(const GridMap &map, DistanceMetric metric) {
  return metric == DistanceMetric::euclidean ? euclidean_transform(map) : chamfer_transform(map);
}

// ---------------------------------------------------------------------------
// Visibility
// ---------------------------------------------------------------------------

bool segment_touches_cell(Vec2 a, Vec2 b, Cell c, double eps) {
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  const double lo_x = c.i - eps, hi_x = c.i + 1 + eps;
  const double lo_y = c.j - eps, hi_y = c.j + 1 + eps;
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
    return true;
  };
  return clip(-dx, a.x - lo_x) && clip(dx, hi_x - a.x) && clip(-dy, a.y - lo_y) && clip(dy, hi_y - a.y) &&
         t0 <= t1;
}

namespace {

// Walks the cells whose interiors the segment crosses (grid coordinates),
// invoking visit(cell); stops early when visit returns false.
template <class Visit>
bool walk_cells(Vec2 ga, Vec2 gb, int width, int height, Visit &&visit) {
  int i = static_cast<int>(std::floor(ga.x));
  int j = static_cast<int>(std::floor(ga.y));
  const int ie = static_cast<int>(std::floor(gb.x));
  const int je = static_cast<int>(std::floor(gb.y));
  i = std::clamp(i, 0, width - 1);
  j = std::clamp(j, 0, height - 1);
  const int ie_c = std::clamp(ie, 0, width - 1);
  const int je_c = std::clamp(je, 0, height - 1);
  const double dx = gb.x - ga.x, dy = gb.y - ga.y;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double t_max_x = sx == 0 ? inf : (sx > 0 ? (i + 1 - ga.x) : (ga.x - i)) / std::abs(dx);
  double t_max_y = sy == 0 ? inf : (sy > 0 ? (j + 1 - ga.y) : (ga.y - j)) / std::abs(dy);
  const double t_dx = sx == 0 ? inf : 1.0 / std::abs(dx);
  const double t_dy = sy == 0 ? inf : 1.0 / std::abs(dy);
  const int max_steps = std::abs(ie_c - i) + std::abs(je_c - j) + 2;
  for (int step = 0; step <= max_steps; ++step) {
    if (!visit(Cell{i, j})) return false;
    if (i == ie_c && j == je_c) break;
    if (t_max_x < t_max_y) {
      t_max_x += t_dx;
      i += sx;
    } else {
      t_max_y += t_dy;
      j += sy;
    }
    if (i < 0 || j < 0 || i >= width || j >= height) break;
  }
  return true;
}

std::pair<Vec2, Vec2> canonical(Vec2 a, Vec2 b) {
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  return {a, b};
}

}  // namespace

bool line_of_sight(const GridMap &map, Vec2 a, Vec2 b) {
  if (!map.contains(a) || !map.contains(b)) return false;
  const auto [p, q] = canonical(map.to_grid(a), map.to_grid(b));
  return walk_cells(p, q, map.width(), map.height(), [&](Cell c) {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const Cell n{c.i + di, c.j + dj};
        if (!map.in_bounds(n) || !map.occupied(n)) continue;
        if (segment_touches_cell(p, q, n)) return false;
      }
    }
    return true;
  });
}

std::vector<Cell> supercover_cells(const GridMap &map, Vec2 a, Vec2 b) {
  std::vector<Cell> out;
  if (!map.contains(a) || !map.contains(b)) return out;
  const auto [p, q] = canonical(map.to_grid(a), map.to_grid(b));
  std::set<std::size_t> seen;
  walk_cells(p, q, map.width(), map.height(), [&](Cell c) {
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const Cell n{c.i + di, c.j + dj};
        if (!map.in_bounds(n) || !segment_touches_cell(p, q, n)) continue;
        if (seen.insert(map.index(n)).second) out.push_back(n);
      }
    }
    return true;
  });
  return out;
}

std::optional<Vec2> nearest_occupied_center(const GridMap &map, Vec2 p, double max_range) {
  const Vec2 g = map.to_grid(p);
  const int ci = static_cast<int>(std::floor(g.x));
  const int cj = static_cast<int>(std::floor(g.y));
  const double w = map.resolution();
  const int k_max = static_cast<int>(std::ceil(max_range / w)) + 1;
  double best = max_range * max_range;
  std::optional<Vec2> found;
  auto consider = [&](int i, int j) {
    const Cell c{i, j};
    if (!map.in_bounds(c) || !map.occupied(c)) return;
    const Vec2 center = map.cell_center(c);
    const double d2 = squared_norm(center - p);
    if (d2 < best || (!found && d2 <= best)) {
      best = d2;
      found = center;
    }
  };
  for (int k = 0; k <= k_max; ++k) {
    if (found && (k - 1.0) * w > std::sqrt(best)) break;
    if (k == 0) {
      consider(ci, cj);
      continue;
    }
    for (int d = -k; d <= k; ++d) {
      consider(ci + d, cj - k);
      consider(ci + d, cj + k);
    }
    for (int d = -k + 1; d <= k - 1; ++d) {
      consider(ci - k, cj + d);
      consider(ci + k, cj + d);
    }
  }
  return found;
}

}  // namespace firesquad
