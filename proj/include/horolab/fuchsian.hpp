#pragma once

// Genus-2 cocompact Fuchsian group: the regular hyperbolic octagon with
// interior angles pi/4 and its opposite-side pairings, orbit enumeration and
// the lattice counting function a_t(x, y) = #{g : d(x, g y) <= t}.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "horolab/disk.hpp"
#include "horolab/error.hpp"
#include "horolab/series.hpp"

namespace horolab {

// Generator indices 0..7. Generator j translates by twice the inradius
// towards angle j*pi/4 and maps side (j+4)%8 onto side j, so j and j+4 are
// mutually inverse. Printed as letters "abcdABCD".
using Word = std::vector<std::uint8_t>;

inline constexpr int kGeneratorCount = 8;
inline constexpr std::uint8_t inverse_letter(std::uint8_t j) { return static_cast<std::uint8_t>((j + 4) % 8); }

std::string word_string(const Word& w);
Word inverse_word(const Word& w);
Word free_reduce(const Word& w);

struct SurfaceGroup {
  std::array<Isometry, kGeneratorCount> generators;
  std::array<Point, kGeneratorCount> octagon;  // vertex k at angle pi/8 + k*pi/4
  Word relation;
  double inradius = 0.0;      // hyperbolic distance centre -> side midpoint
  double circumradius = 0.0;  // hyperbolic distance centre -> vertex

  Isometry word_isometry(const Word& w) const;
  // Minimal translation length over the generators (= 2 * inradius).
  double min_translation() const { return 2.0 * inradius; }
  // Interior angle of the octagon at vertex k, measured numerically.
  double interior_angle(int k) const;
  // Max deviation of the relation product from +-identity.
  double relation_defect() const;
  // Closed Dirichlet domain of the origin (the octagon), with tolerance.
  bool in_domain(Point z, double tol = 1e-12) const;
};

// Builds the group and validates every invariant (relation, angles, side
// pairings); throws NumericFailure if any check fails.
SurfaceGroup build_genus2_group();

// (6 pi) - 8 * (pi/4): hyperbolic area of the octagon from its angle defect.
double octagon_defect_area();

struct Reduction {
  Point point;        // gamma * z, inside the octagon
  Isometry isometry;  // gamma
  Word word;          // gamma as a word, leftmost letter applied last
};

// Greedy descent: apply the generator that most decreases d(0, .) until no
// generator decreases it.
Reduction reduce_to_domain(const SurfaceGroup& group, Point z);

struct OrbitEntry {
  Point point;       // gamma * y
  double distance;   // d(x, gamma * y)
  int word_length;   // length of the freely reduced word for gamma
  Word word;
};

struct OrbitBall {
  Point center;
  Point seed;
  double radius = 0.0;
  double margin = 0.0;
  std::size_t nodes_visited = 0;
  bool complete = true;  // false when the enumeration hit its budget
  std::vector<OrbitEntry> entries;  // sorted by (distance, word)
};

struct OrbitOptions {
  double margin = -1.0;  // negative selects default_margin()
  std::size_t budget = 5'000'000;
};

// Margin that makes the pruned search complete: any tile crossed by the
// geodesic from x to gamma*y has its centre within the circumradius of it.
double default_margin(const SurfaceGroup& group, Point x, Point y);

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(OrbitBall partial);
  const OrbitBall& partial() const { return partial_; }

 private:
  OrbitBall partial_;
};

// Breadth-first search over reduced words; a node is expanded only while
// d(x, gamma y) <= R + margin. Group elements are deduplicated by their
// sign-normalized coefficients quantized at 1e-9.
OrbitBall enumerate_orbit(const SurfaceGroup& group, Point x, Point y, double radius,
                          const OrbitOptions& options = {});

// a_t(x, y) on an increasing grid, from a single enumeration at max(tGrid).
GrowthSeries count_series(const SurfaceGroup& group, Point x, Point y,
                          std::span<const double> t_grid, const OrbitOptions& options = {});

// CSV rows `gamma_word,x_re,x_im,dist`.
void write_orbit_csv(std::ostream& out, const OrbitBall& ball);

}  // namespace horolab
