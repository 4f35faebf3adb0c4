#include "orlicz/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace orlicz {

DyadicSpace::DyadicSpace(int resolution, std::vector<double> weights)
    : resolution_(resolution), weights_(std::move(weights)), total_(0.0) {
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::domain_error("cell weights must be finite and nonnegative");
    }
    total_ += w;
  }
  if (!(total_ > 0.0) || !std::isfinite(total_)) {
    throw std::domain_error("total measure must be finite and positive");
  }
}

std::shared_ptr<const DyadicSpace> DyadicSpace::uniform(int resolution, double total) {
  if (resolution < 0 || resolution > 24) throw std::domain_error("resolution K must be in [0, 24]");
  const std::size_t n = std::size_t{1} << resolution;
  return std::shared_ptr<const DyadicSpace>(
      new DyadicSpace(resolution, std::vector<double>(n, total / static_cast<double>(n))));
}

std::shared_ptr<const DyadicSpace> DyadicSpace::random(int resolution, std::uint64_t seed,
                                                      double total) {
  if (resolution < 0 || resolution > 24) throw std::domain_error("resolution K must be in [0, 24]");
  const std::size_t n = std::size_t{1} << resolution;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> w(n);
  for (auto& x : w) x = dist(rng);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x *= total / sum;
  return std::shared_ptr<const DyadicSpace>(new DyadicSpace(resolution, std::move(w)));
}

std::shared_ptr<const DyadicSpace> DyadicSpace::from_weights(std::vector<double> weights) {
  if (weights.empty() || !std::has_single_bit(weights.size())) {
    throw std::domain_error("weight count must be a power of two");
  }
  const int k = std::countr_zero(weights.size());
  return std::shared_ptr<const DyadicSpace>(new DyadicSpace(k, std::move(weights)));
}

void require_same_space(const SpaceHandle& a, const SpaceHandle& b, const char* op) {
  if (!a || !b || !a->same_as(*b)) {
    throw std::domain_error(std::string(op) + ": arguments live on different spaces");
  }
}

// --- sets -------------------------------------------------------------------

MeasurableSet MeasurableSet::empty(SpaceHandle space) {
  const auto n = space->cells();
  return MeasurableSet(std::move(space), std::vector<std::uint8_t>(n, 0));
}

MeasurableSet MeasurableSet::full(SpaceHandle space) {
  const auto n = space->cells();
  return MeasurableSet(std::move(space), std::vector<std::uint8_t>(n, 1));
}

MeasurableSet MeasurableSet::interval(SpaceHandle space, double a, double b) {
  std::vector<std::uint8_t> mask(space->cells());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double m = space->midpoint(i);
    mask[i] = (m >= a && m < b) ? 1 : 0;
  }
  return MeasurableSet(std::move(space), std::move(mask));
}

MeasurableSet MeasurableSet::from_mask(SpaceHandle space, std::vector<std::uint8_t> mask) {
  if (mask.size() != space->cells()) throw std::domain_error("mask length must equal 2^K");
  for (auto& m : mask) m = m ? 1 : 0;
  return MeasurableSet(std::move(space), std::move(mask));
}

std::size_t MeasurableSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

MeasurableSet MeasurableSet::complement() const {
  std::vector<std::uint8_t> out(mask_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask_[i] ? 0 : 1;
  return MeasurableSet(space_, std::move(out));
}

namespace {

template <class Op>
MeasurableSet combine(const MeasurableSet& a, const MeasurableSet& b, const char* name, Op op) {
  require_same_space(a.space(), b.space(), name);
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.contains(i), b.contains(i)) ? 1 : 0;
  return MeasurableSet::from_mask(a.space(), std::move(out));
}

}  // namespace

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
  return combine(a, b, "set_union", [](bool x, bool y) { return x || y; });
}

MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b) {
  return combine(a, b, "set_intersection", [](bool x, bool y) { return x && y; });
}

MeasurableSet set_symmetric_difference(const MeasurableSet& a, const MeasurableSet& b) {
  return combine(a, b, "set_symmetric_difference", [](bool x, bool y) { return x != y; });
}

double mu(const MeasurableSet& set) {
  const auto w = set.space()->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (set.contains(i)) sum += w[i];
  }
  return sum;
}

double mu(const SpaceHandle& space, const MeasurableSet& set) {
  require_same_space(space, set.space(), "mu");
  return mu(set);
}

double symm_diff_measure(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a.space(), b.space(), "symm_diff_measure");
  const auto w = a.space()->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (a.contains(i) != b.contains(i)) sum += w[i];
  }
  return sum;
}

// --- partitions -------------------------------------------------------------

Partition::Partition(SpaceHandle space, std::span<const int> raw_labels)
    : space_(std::move(space)) {
  if (raw_labels.size() != space_->cells()) {
    throw std::domain_error("partition label count must equal 2^K");
  }
  labels_.resize(raw_labels.size());
  std::unordered_map<int, int> canon;
  canon.reserve(64);
  int next = 0;
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto [it, inserted] = canon.try_emplace(raw_labels[i], next);
    if (inserted) ++next;
    labels_[i] = it->second;
  }

  const auto nb = static_cast<std::size_t>(next);
  offsets_.assign(nb + 1, 0);
  for (int l : labels_) ++offsets_[static_cast<std::size_t>(l) + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  members_.resize(labels_.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  block_measure_.assign(nb, 0.0);
  const auto w = space_->weights();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto b = static_cast<std::size_t>(labels_[i]);
    members_[fill[b]++] = static_cast<std::uint32_t>(i);
    block_measure_[b] += w[i];
  }
}

Partition Partition::trivial(SpaceHandle space) {
  std::vector<int> labels(space->cells(), 0);
  return Partition(std::move(space), labels);
}

Partition Partition::finest(SpaceHandle space) {
  std::vector<int> labels(space->cells());
  std::iota(labels.begin(), labels.end(), 0);
  return Partition(std::move(space), labels);
}

Partition Partition::dyadic(SpaceHandle space, std::size_t n) {
  return shifted_dyadic(std::move(space), n, 0);
}

Partition Partition::shifted_dyadic(SpaceHandle space, std::size_t n, std::size_t shift) {
  const auto cells = space->cells();
  if (n == 0 || !std::has_single_bit(n) || n > cells) {
    throw std::domain_error("dyadic partition size must be a power of two <= 2^K");
  }
  const std::size_t width = cells / n;
  std::vector<int> labels(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    labels[(i + shift) % cells] = static_cast<int>(i / width);
  }
  return Partition(std::move(space), labels);
}

Partition Partition::random(SpaceHandle space, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::domain_error("random partition needs m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, static_cast<int>(m) - 1);
  std::vector<int> labels(space->cells());
  for (auto& l : labels) l = dist(rng);
  return Partition(std::move(space), labels);
}

Partition Partition::random_intervals(SpaceHandle space, std::size_t m, std::uint64_t seed) {
  const auto cells = space->cells();
  if (m == 0 || m > cells) throw std::domain_error("random_intervals needs 1 <= m <= 2^K");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> cuts(cells - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(m - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> labels(cells);
  std::size_t b = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    while (b < cuts.size() && cuts[b] <= i) ++b;
    labels[i] = static_cast<int>(b);
  }
  return Partition(std::move(space), labels);
}

Partition Partition::from_labels(SpaceHandle space, std::span<const int> labels) {
  return Partition(std::move(space), labels);
}

MeasurableSet Partition::block_set(std::size_t b) const {
  std::vector<std::uint8_t> mask(cells(), 0);
  for (auto i : block(b)) mask[i] = 1;
  return MeasurableSet::from_mask(space_, std::move(mask));
}

bool Partition::refines(const Partition& coarser) const {
  require_same_space(space_, coarser.space_, "refines");
  std::vector<int> image(block_count(), -1);
  for (std::size_t i = 0; i < cells(); ++i) {
    auto& slot = image[static_cast<std::size_t>(labels_[i])];
    if (slot < 0) {
      slot = coarser.labels_[i];
    } else if (slot != coarser.labels_[i]) {
      return false;
    }
  }
  return true;
}

bool Partition::is_measurable(const MeasurableSet& set) const {
  require_same_space(space_, set.space(), "is_measurable");
  for (std::size_t b = 0; b < block_count(); ++b) {
    const auto cells_b = block(b);
    const bool first = set.contains(cells_b.front());
    for (auto i : cells_b) {
      if (set.contains(i) != first) return false;
    }
  }
  return true;
}

Partition join(const Partition& p, const Partition& q) {
  require_same_space(p.space(), q.space(), "join");
  const auto nq = static_cast<long long>(q.block_count());
  std::vector<int> raw(p.cells());
  std::unordered_map<long long, int> pairs;
  pairs.reserve(p.block_count() + q.block_count());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const long long key = static_cast<long long>(p.label(i)) * nq + q.label(i);
    auto [it, inserted] = pairs.try_emplace(key, static_cast<int>(pairs.size()));
    raw[i] = it->second;
  }
  return Partition::from_labels(p.space(), raw);
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Partition meet(const Partition& p, const Partition& q) {
  require_same_space(p.space(), q.space(), "meet");
  const auto np = p.block_count();
  DisjointSets ds(np + q.block_count());
  for (std::size_t i = 0; i < p.cells(); ++i) {
    ds.unite(static_cast<std::size_t>(p.label(i)), np + static_cast<std::size_t>(q.label(i)));
  }
  std::vector<int> raw(p.cells());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<int>(ds.find(static_cast<std::size_t>(p.label(i))));
  }
  return Partition::from_labels(p.space(), raw);
}

namespace {

template <class Inner, class Outer>
Partition tail_limit(std::span<const Partition> seq, std::size_t m_max, Inner inner, Outer outer,
                     const char* name) {
  if (seq.size() < 2) throw WindowTooShort(std::string(name) + ": window needs at least 2 entries");
  if (m_max == 0) m_max = seq.size() / 2;
  if (m_max >= seq.size()) {
    throw WindowTooShort(std::string(name) + ": m_max must be smaller than the window");
  }
  for (const auto& p : seq) require_same_space(seq.front().space(), p.space(), name);

  // tails[m] = inner over n >= m, for m <= m_max
  std::vector<Partition> tails;
  tails.reserve(m_max + 1);
  Partition acc = seq.back();
  for (std::size_t m = seq.size() - 1; m-- > 0;) {
    acc = inner(seq[m], acc);
    if (m <= m_max) tails.push_back(acc);
  }
  std::reverse(tails.begin(), tails.end());

  Partition current = tails.front();
  Partition previous = current;
  for (std::size_t m = 1; m <= m_max; ++m) {
    previous = current;
    current = outer(current, tails[m]);
  }
  if (!(previous == current)) {
    throw WindowTooShort(std::string(name) + ": sequence has not stabilized within the window");
  }
  return current;
}

}  // namespace

Partition upper_limit(std::span<const Partition> seq, std::size_t m_max) {
  return tail_limit(
      seq, m_max, [](const Partition& a, const Partition& b) { return join(a, b); },
      [](const Partition& a, const Partition& b) { return meet(a, b); }, "upper_limit");
}

Partition lower_limit(std::span<const Partition> seq, std::size_t m_max) {
  return tail_limit(
      seq, m_max, [](const Partition& a, const Partition& b) { return meet(a, b); },
      [](const Partition& a, const Partition& b) { return join(a, b); }, "lower_limit");
}

MeasurableSet best_approx(const Partition& p, const MeasurableSet& target) {
  require_same_space(p.space(), target.space(), "best_approx");
  const auto w = p.space()->weights();
  std::vector<std::uint8_t> mask(p.cells(), 0);
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    double inside = 0.0;
    double outside = 0.0;
    for (auto i : p.block(b)) (target.contains(i) ? inside : outside) += w[i];
    if (inside > outside) {
      for (auto i : p.block(b)) mask[i] = 1;
    }
  }
  return MeasurableSet::from_mask(p.space(), std::move(mask));
}

std::size_t tail_begin(std::size_t window) {
  const std::size_t quarter = std::max<std::size_t>(1, window / 4);
  return window > quarter ? window - quarter : 0;
}

AmuMembership amu_member(std::span<const Partition> seq, const MeasurableSet& target,
                         double tol) {
  if (seq.empty()) throw std::domain_error("amu_member: empty sequence");
  AmuMembership out;
  out.distances.reserve(seq.size());
  for (const auto& p : seq) out.distances.push_back(symm_diff_measure(best_approx(p, target), target));
  const auto first = out.distances.begin() + static_cast<std::ptrdiff_t>(tail_begin(seq.size()));
  const double tail_max = *std::max_element(first, out.distances.end());
  const double tail_min = *std::min_element(first, out.distances.end());
  out.member = tail_max < tol;
  out.subsequence_member = tail_min < tol;
  return out;
}

}  // namespace orlicz
