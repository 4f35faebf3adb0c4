#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

/// Finite measure space of 2^K cells over [0, 1); cell i is
/// [i 2^-K, (i+1) 2^-K) and carries a nonnegative weight.
class DyadicSpace {
 public:
  static std::shared_ptr<const DyadicSpace> uniform(int resolution, double total = 1.0);
  /// Weights drawn from U(0.5, 1.5) and rescaled to sum to `total`.
  static std::shared_ptr<const DyadicSpace> random(int resolution, std::uint64_t seed,
                                                   double total = 1.0);
  static std::shared_ptr<const DyadicSpace> from_weights(std::vector<double> weights);

  int resolution() const { return resolution_; }
  std::size_t cells() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total() const { return total_; }
  double cell_width() const { return 1.0 / static_cast<double>(cells()); }
  double midpoint(std::size_t i) const { return (static_cast<double>(i) + 0.5) * cell_width(); }

  bool same_as(const DyadicSpace& other) const {
    return this == &other || weights_ == other.weights_;
  }

 private:
  DyadicSpace(int resolution, std::vector<double> weights);

  int resolution_;
  std::vector<double> weights_;
  double total_;
};

using SpaceHandle = std::shared_ptr<const DyadicSpace>;

/// Throws std::domain_error naming `op` unless both handles describe one space.
void require_same_space(const SpaceHandle& a, const SpaceHandle& b, const char* op);

class MeasurableSet {
 public:
  static MeasurableSet empty(SpaceHandle space);
  static MeasurableSet full(SpaceHandle space);
  /// Cells whose midpoint lies in [a, b).
  static MeasurableSet interval(SpaceHandle space, double a, double b);
  static MeasurableSet from_mask(SpaceHandle space, std::vector<std::uint8_t> mask);

  const SpaceHandle& space() const { return space_; }
  std::size_t size() const { return mask_.size(); }
  bool contains(std::size_t i) const { return mask_[i] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  std::size_t count() const;

  MeasurableSet complement() const;

  friend bool operator==(const MeasurableSet& a, const MeasurableSet& b) {
    return a.mask_ == b.mask_;
  }

 private:
  MeasurableSet(SpaceHandle space, std::vector<std::uint8_t> mask)
      : space_(std::move(space)), mask_(std::move(mask)) {}

  SpaceHandle space_;
  std::vector<std::uint8_t> mask_;
};

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_symmetric_difference(const MeasurableSet& a, const MeasurableSet& b);

double mu(const MeasurableSet& set);
double mu(const SpaceHandle& space, const MeasurableSet& set);
double symm_diff_measure(const MeasurableSet& a, const MeasurableSet& b);

/// A finitely generated sigma-subalgebra, stored as its atoms.
///
/// Labels are canonical: blocks are numbered in order of first occurrence,
/// so two partitions are equal exactly when their label arrays are.
class Partition {
 public:
  static Partition trivial(SpaceHandle space);
  static Partition finest(SpaceHandle space);
  /// n consecutive equal blocks; n must be a power of two <= 2^K.
  static Partition dyadic(SpaceHandle space, std::size_t n);
  /// dyadic(n) rotated right by `shift` cells (cyclically).
  static Partition shifted_dyadic(SpaceHandle space, std::size_t n, std::size_t shift);
  /// Each cell labelled uniformly at random from m labels.
  static Partition random(SpaceHandle space, std::size_t m, std::uint64_t seed);
  /// m contiguous blocks with random cut points.
  static Partition random_intervals(SpaceHandle space, std::size_t m, std::uint64_t seed);
  static Partition from_labels(SpaceHandle space, std::span<const int> labels);

  const SpaceHandle& space() const { return space_; }
  std::size_t cells() const { return labels_.size(); }
  std::size_t block_count() const { return block_measure_.size(); }
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  std::span<const std::uint32_t> block(std::size_t b) const {
    return {members_.data() + offsets_[b], members_.data() + offsets_[b + 1]};
  }
  double block_measure(std::size_t b) const { return block_measure_[b]; }
  MeasurableSet block_set(std::size_t b) const;

  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;
  /// True when `set` is a union of blocks.
  bool is_measurable(const MeasurableSet& set) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.labels_ == b.labels_;
  }

 private:
  Partition(SpaceHandle space, std::span<const int> raw_labels);

  SpaceHandle space_;
  std::vector<int> labels_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> members_;
  std::vector<double> block_measure_;
};

/// Common refinement: the sigma-algebra generated by both.
Partition join(const Partition& p, const Partition& q);
/// Finest common coarsening: the intersection of both sigma-algebras.
Partition meet(const Partition& p, const Partition& q);

class WindowTooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Intersection over m <= m_max of the tail joins over n >= m.
/// `m_max == 0` selects half the window. Throws WindowTooShort when the
/// last two outer iterates differ.
Partition upper_limit(std::span<const Partition> seq, std::size_t m_max = 0);
/// Join over m <= m_max of the tail meets over n >= m.
Partition lower_limit(std::span<const Partition> seq, std::size_t m_max = 0);

/// The union of P-blocks closest to `target` in symmetric-difference measure.
/// A block is taken iff strictly more of its mass lies inside the target.
MeasurableSet best_approx(const Partition& p, const MeasurableSet& target);

/// First index of the convergence tail: the last quarter of a window.
std::size_t tail_begin(std::size_t window);

struct AmuMembership {
  bool member = false;             // tail max < tol
  bool subsequence_member = false; // tail min < tol
  std::vector<double> distances;
};

AmuMembership amu_member(std::span<const Partition> seq, const MeasurableSet& target,
                         double tol);

}  // namespace orlicz
