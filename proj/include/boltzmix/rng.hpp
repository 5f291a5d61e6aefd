#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace boltzmix {

/// Deterministic counter-free generator (xoshiro256++) with splitmix64
/// seeding. We own the full bit-to-double path so that identical seeds give
/// bit-identical streams independent of the standard library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 significant bits.
  double uniform();

  /// Uniform double in [a, b).
  double uniform(double a, double b);

  /// Standard normal via Box-Muller, one cached spare.
  double normal();

  Eigen::Vector3d normal3(double stddev);

  /// Uniformly distributed unit vector on S^2.
  Eigen::Vector3d isotropic_direction();

  /// Stream derived from (seed, stream_index); used to decorrelate replicas.
  static Rng substream(std::uint64_t seed, std::uint64_t stream_index);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace boltzmix
