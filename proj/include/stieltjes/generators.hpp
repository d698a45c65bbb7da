#pragma once

#include <cstdint>
#include <random>

#include "stieltjes/contractions.hpp"
#include "stieltjes/families.hpp"

namespace stieltjes {

// Seeded instance generation. Every draw goes through one mt19937_64 so a
// seed fixes the whole sequence.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  double normal();
  int integer(int lo, int hi);  // inclusive
  bool coin(double p);

  Matrix complex_matrix(Index rows, Index cols);
  Matrix unitary(Index n);
  // norm drawn uniformly from (0.3, 0.99)
  Matrix contraction(Index rows, Index cols);
  // Hermitian contraction; with probability 0.3 some eigenvalues sit at +-1
  Matrix hermitian_contraction(Index n);
  Matrix psd(Index n, Index rank);
  LinearRelation relation(Index n);
  // PSD operator part (+) multivalued part (probability 0.3)
  LinearRelation nonnegative_relation(Index n);
  LinearRelation nonnegative_relation(Index n, Index mul_dim);
  SelfadjointBlockSystem block_system(Index m, Index k);
  PassiveSelfadjointSystem system(Index m, Index k);
  StieltjesConstruction construction(Index m, Index k, bool identity_z = false);
  // R^{1/2}(I + iB)R^{1/2} with ||B|| <= tan(angle)
  Matrix sectorial(Index n, double angle);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace stieltjes
