#include "horolab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <ostream>
#include <sstream>

namespace horolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr char kLetters[] = "abcdABCD";

// Surface relation for opposite-side pairings of the regular octagon.
constexpr std::uint8_t kRelation[] = {0, 3, 6, 1, 4, 7, 2, 5};

double bisect_circumradius() {
  // Regular n-gon with interior angle alpha: cosh(R) = cot(pi/n) cot(alpha/2).
  // Solved by bisection on the angle relation instead of the closed form so
  // the octagon is built the same way for any (n, alpha).
  const double n = 8.0;
  const double target = kPi / 4.0;
  auto angle_for = [&](double radius) {
    // Right triangle (centre, side midpoint, vertex):
    // tanh(inradius) = tanh(R) cos(pi/n), cos(alpha/2) = cosh(inradius) sin(pi/n).
    const double inr = std::atanh(std::tanh(radius) * std::cos(kPi / n));
    return 2.0 * std::acos(std::min(1.0, std::cosh(inr) * std::sin(kPi / n)));
  };
  double lo = 1e-6;
  double hi = 20.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    // interior angle decreases as the polygon grows
    if (angle_for(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > 1e-14) throw Error(ErrorKind::NumericFailure, "octagon circumradius bisection did not converge");
  return 0.5 * (lo + hi);
}

}  // namespace

std::string word_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (auto j : w) s.push_back(kLetters[j]);
  return s.empty() ? std::string("e") : s;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& j : out) j = inverse_letter(j);
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto j : w) {
    if (!out.empty() && out.back() == inverse_letter(j)) {
      out.pop_back();
    } else {
      out.push_back(j);
    }
  }
  return out;
}

Isometry SurfaceGroup::word_isometry(const Word& w) const {
  Isometry g;
  for (auto j : w) g = g * generators[j];
  return g;
}

double SurfaceGroup::interior_angle(int k) const {
  const Point v = octagon[static_cast<std::size_t>(k)];
  const Isometry to_origin = Isometry::transvection(v).inverse();
  const Complex prev = to_origin.apply(octagon[static_cast<std::size_t>((k + 7) % 8)].z());
  const Complex next = to_origin.apply(octagon[static_cast<std::size_t>((k + 1) % 8)].z());
  return angle_gap(std::arg(prev), std::arg(next));
}

double SurfaceGroup::relation_defect() const { return word_isometry(relation).distance_from_identity(); }

bool SurfaceGroup::in_domain(Point z, double tol) const {
  if (!in_open_disk(z)) return false;
  const double own = std::norm(z.z());
  for (const auto& g : generators) {
    // d(0, g z) >= d(0, z) for every generator
    const Complex gz = g.apply(z.z());
    if (std::norm(gz) < own - tol) return false;
  }
  return true;
}

SurfaceGroup build_genus2_group() {
  SurfaceGroup group;
  group.circumradius = bisect_circumradius();
  group.inradius = std::atanh(std::tanh(group.circumradius) * std::cos(kPi / 8.0));
  const double euclid = std::tanh(0.5 * group.circumradius);
  for (int k = 0; k < kGeneratorCount; ++k) {
    group.octagon[static_cast<std::size_t>(k)] = Point::from(std::polar(euclid, kPi / 8.0 + k * kPi / 4.0));
    group.generators[static_cast<std::size_t>(k)] = Isometry::translation(k * kPi / 4.0, 2.0 * group.inradius);
  }
  group.relation.assign(std::begin(kRelation), std::end(kRelation));

  if (group.relation_defect() > 1e-9) {
    throw Error(ErrorKind::NumericFailure, "genus-2 relation does not close");
  }
  for (int k = 0; k < kGeneratorCount; ++k) {
    if (std::abs(group.interior_angle(k) - kPi / 4.0) > 1e-9) {
      throw Error(ErrorKind::NumericFailure, "octagon interior angle is not pi/4");
    }
  }
  // Generator j maps side (j+4) (vertices j+3, j+4) onto side j (vertices j-1, j).
  for (int j = 0; j < kGeneratorCount; ++j) {
    const auto& g = group.generators[static_cast<std::size_t>(j)];
    const Point a = g.apply(group.octagon[static_cast<std::size_t>((j + 3) % 8)]);
    const Point b = g.apply(group.octagon[static_cast<std::size_t>((j + 4) % 8)]);
    const Point c = group.octagon[static_cast<std::size_t>((j + 7) % 8)];
    const Point d = group.octagon[static_cast<std::size_t>(j)];
    auto close = [](Point p, Point q) { return std::hypot(p.u - q.u, p.v - q.v) < 1e-9; };
    const bool matched = (close(a, c) && close(b, d)) || (close(a, d) && close(b, c));
    if (!matched) throw Error(ErrorKind::NumericFailure, "side pairing does not map side onto side");
  }
  return group;
}

double octagon_defect_area() { return (8.0 - 2.0) * kPi - 8.0 * (kPi / 4.0); }

Reduction reduce_to_domain(const SurfaceGroup& group, Point z) {
  require_in_disk(z, "reduce_to_domain");
  Reduction out{z, Isometry::identity(), {}};
  Complex current = z.z();
  // d(0, .) is monotone in |.|; the orbit is discrete, so strict descent stops.
  for (int iter = 0; iter < 10000; ++iter) {
    double best = std::norm(current);
    int best_j = -1;
    for (int j = 0; j < kGeneratorCount; ++j) {
      const Complex w = group.generators[static_cast<std::size_t>(j)].apply(current);
      const double n = std::norm(w);
      if (n < best * (1.0 - 1e-14) - 1e-300) {
        best = n;
        best_j = j;
      }
    }
    if (best_j < 0) {
      out.point = Point::from(current);
      std::reverse(out.word.begin(), out.word.end());
      return out;
    }
    const auto& g = group.generators[static_cast<std::size_t>(best_j)];
    current = g.apply(current);
    out.isometry = g * out.isometry;
    out.word.push_back(static_cast<std::uint8_t>(best_j));
  }
  throw Error(ErrorKind::NumericFailure, "reduce_to_domain did not terminate");
}

double default_margin(const SurfaceGroup& group, Point x, Point y) {
  return group.circumradius + 2.0 * hyperbolic_distance(Point{}, y) + hyperbolic_distance(Point{}, x) + 0.25;
}

BudgetExceeded::BudgetExceeded(OrbitBall partial)
    : Error(ErrorKind::Budget, "orbit enumeration exceeded its node budget"), partial_(std::move(partial)) {}

namespace {

// Set of group elements keyed by sign-normalized coefficients quantized at
// kQuantum. Coordinates that land near a rounding edge are also probed in
// the neighbouring cell, so roundoff cannot split one element into two keys.
class ElementSet {
 public:
  struct Key {
    std::int64_t c[4];
    bool operator==(const Key& o) const { return std::memcmp(c, o.c, sizeof c) == 0; }
  };

  static constexpr double kQuantum = 1e-9;
  static constexpr double kEdge = 0.45;  // |frac| above this probes the neighbour

  ElementSet() { rehash(1u << 16); }

  std::size_t size() const { return keys_.size(); }

  // Inserts g unless an equal element is present; returns true on insertion.
  bool insert(const Isometry& g) {
    double raw[4] = {g.a().real(), g.a().imag(), g.b().real(), g.b().imag()};
    // Canonical sign: a.re > 0. Near a.re == 0 both signs are probed.
    const bool flip = raw[0] < 0.0;
    if (flip) for (double& r : raw) r = -r;
    const bool ambiguous_sign = std::abs(raw[0]) < 1e3 * kQuantum;

    std::int64_t base[4];
    std::int64_t alt[4];
    bool near_edge[4];
    for (int i = 0; i < 4; ++i) {
      const double s = raw[i] / kQuantum;
      base[i] = std::llround(s);
      const double frac = s - static_cast<double>(base[i]);
      near_edge[i] = std::abs(frac) > kEdge;
      alt[i] = base[i] + (frac > 0.0 ? 1 : -1);
    }
    Key primary{{base[0], base[1], base[2], base[3]}};
    bool found = contains(primary);
    const bool any_edge = near_edge[0] || near_edge[1] || near_edge[2] || near_edge[3];
    if (!found && (any_edge || ambiguous_sign)) {
      for (int mask = 0; mask < 16 && !found; ++mask) {
        bool usable = true;
        Key k{};
        for (int i = 0; i < 4; ++i) {
          if (mask & (1 << i)) {
            if (!near_edge[i]) { usable = false; break; }
            k.c[i] = alt[i];
          } else {
            k.c[i] = base[i];
          }
        }
        if (!usable) continue;
        if (mask != 0) found = contains(k);
        if (!found && ambiguous_sign) {
          Key neg{{-k.c[0], -k.c[1], -k.c[2], -k.c[3]}};
          found = contains(neg);
        }
      }
    }
    if (found) return false;
    if ((keys_.size() + 1) * 10 > slots_.size() * 7) rehash(slots_.size() * 2);
    place(primary, static_cast<std::uint32_t>(keys_.size()));
    keys_.push_back(primary);
    return true;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t hash(const Key& k) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto c : k.c) h = mix(h ^ mix(static_cast<std::uint64_t>(c)));
    return h;
  }

  bool contains(const Key& k) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash(k) & mask;; i = (i + 1) & mask) {
      const std::uint32_t s = slots_[i];
      if (s == kEmpty) return false;
      if (keys_[s] == k) return true;
    }
  }

  void place(const Key& k, std::uint32_t index) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = hash(k) & mask;
    while (slots_[i] != kEmpty) i = (i + 1) & mask;
    slots_[i] = index;
  }

  void rehash(std::size_t capacity) {
    slots_.assign(capacity, kEmpty);
    for (std::uint32_t i = 0; i < keys_.size(); ++i) place(keys_[i], i);
  }

  static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;
  std::vector<Key> keys_;
  std::vector<std::uint32_t> slots_;
};

struct FrontierNode {
  Isometry g;
  std::uint32_t id;
  std::uint8_t last;  // 0xFF for the identity
};

}  // namespace

OrbitBall enumerate_orbit(const SurfaceGroup& group, Point x, Point y, double radius,
                          const OrbitOptions& options) {
  require_in_disk(x, "enumerate_orbit centre");
  require_in_disk(y, "enumerate_orbit seed");
  if (!(radius >= 0.0)) throw Error(ErrorKind::Domain, "enumerate_orbit: radius must be >= 0");

  // a_t depends only on the orbits of x and y: enumerate between the reduced
  // representatives and map the results back. With x = A x', y = B y', the
  // element sigma in the reduced frame corresponds to gamma = A sigma B^-1.
  const Reduction rx = reduce_to_domain(group, x);
  const Reduction ry = reduce_to_domain(group, y);
  const Isometry a_map = rx.isometry.inverse();
  const Word a_word = inverse_word(rx.word);
  const Word b_inv_word = ry.word;
  const Point xr = rx.point;
  const Point yr = ry.point;

  OrbitBall ball;
  ball.center = x;
  ball.seed = y;
  ball.radius = radius;
  ball.margin = options.margin >= 0.0 ? options.margin : default_margin(group, xr, yr);

  const double expand_limit = std::cosh(radius + ball.margin);
  const double count_limit = std::cosh(radius);

  ElementSet seen;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint8_t> letter;
  struct Hit {
    std::uint32_t id;
    double cosh_d;
    Isometry g;
  };
  std::vector<Hit> hits;

  auto record = [&](const Isometry& g, std::uint32_t id) {
    const double c = cosh_distance_to_image(xr, g, yr);
    if (c <= count_limit) hits.push_back({id, c, g});
  };

  std::vector<FrontierNode> frontier;
  seen.insert(Isometry::identity());
  parent.push_back(0);
  letter.push_back(0xFF);
  record(Isometry::identity(), 0);
  if (cosh_distance(xr, yr) <= expand_limit) frontier.push_back({Isometry::identity(), 0, 0xFF});

  bool exhausted = false;
  std::vector<FrontierNode> next;
  while (!frontier.empty() && !exhausted) {
    next.clear();
    for (const auto& node : frontier) {
      for (std::uint8_t j = 0; j < kGeneratorCount; ++j) {
        if (node.last != 0xFF && j == inverse_letter(node.last)) continue;
        const Isometry child = node.g * group.generators[j];
        const double c = cosh_distance_to_image(xr, child, yr);
        if (c > expand_limit) continue;
        if (!seen.insert(child)) continue;
        const auto id = static_cast<std::uint32_t>(parent.size());
        parent.push_back(node.id);
        letter.push_back(j);
        if (c <= count_limit) hits.push_back({id, c, child});
        next.push_back({child, id, j});
        if (seen.size() > options.budget) {
          exhausted = true;
          break;
        }
      }
      if (exhausted) break;
    }
    frontier.swap(next);
  }
  ball.nodes_visited = seen.size();
  ball.complete = !exhausted;

  auto word_of = [&](std::uint32_t id) {
    Word w;
    while (id != 0) {
      w.push_back(letter[id]);
      id = parent[id];
    }
    std::reverse(w.begin(), w.end());
    return w;
  };

  ball.entries.reserve(hits.size());
  for (const auto& h : hits) {
    OrbitEntry e;
    e.point = (a_map * h.g).apply(yr);
    e.distance = std::acosh(std::max(1.0, h.cosh_d));
    Word full = a_word;
    const Word w = word_of(h.id);
    full.insert(full.end(), w.begin(), w.end());
    full.insert(full.end(), b_inv_word.begin(), b_inv_word.end());
    e.word = free_reduce(full);
    e.word_length = static_cast<int>(e.word.size());
    ball.entries.push_back(std::move(e));
  }
  std::sort(ball.entries.begin(), ball.entries.end(), [](const OrbitEntry& l, const OrbitEntry& r) {
    if (l.distance != r.distance) return l.distance < r.distance;
    return l.word < r.word;
  });

  if (exhausted) throw BudgetExceeded(std::move(ball));
  return ball;
}

GrowthSeries count_series(const SurfaceGroup& group, Point x, Point y, std::span<const double> t_grid,
                          const OrbitOptions& options) {
  if (t_grid.empty()) throw Error(ErrorKind::Domain, "count_series: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorKind::Domain, "count_series: time grid must increase");
  }
  const OrbitBall ball = enumerate_orbit(group, x, y, t_grid.back(), options);
  GrowthSeries series;
  series.label = SeriesLabel::OrbitCount;
  for (double t : t_grid) {
    const auto it = std::upper_bound(ball.entries.begin(), ball.entries.end(), t,
                                     [](double v, const OrbitEntry& e) { return v < e.distance; });
    series.samples.push_back({t, static_cast<double>(it - ball.entries.begin())});
  }
  return series;
}

void write_orbit_csv(std::ostream& out, const OrbitBall& ball) {
  out << "gamma_word,x_re,x_im,dist\n";
  std::ostringstream row;
  row.precision(17);
  for (const auto& e : ball.entries) {
    row.str("");
    row << word_string(e.word) << ',' << e.point.u << ',' << e.point.v << ',' << e.distance << '\n';
    out << row.str();
  }
}

}  // namespace horolab
