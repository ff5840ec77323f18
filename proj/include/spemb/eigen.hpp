#pragma once

#include <spemb/error.hpp>
#include <spemb/graph.hpp>

#include <cstdint>
#include <vector>

namespace spemb {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

struct SolveSettings {
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 42;
};

class NotConvergedError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

namespace eigen {

struct Solution {
  /// Ascending by eigenvalue.
  std::vector<EigenPair> pairs;
  /// Block expansion steps performed.
  int iterations = 0;
};

/// Upper bound on the Laplacian spectrum: twice the largest weighted degree.
double spectrum_bound(const SparseSymMatrix& laplacian);

/// Eigenpairs 2 .. count+1 of a connected graph Laplacian.
///
/// Every returned pair satisfies ||L u - lambda u|| <= tol * max(1, bound) with
/// bound = spectrum_bound(L). Vectors are unit length, mutually orthogonal and
/// orthogonal to the constant vector. Each vector's entry of largest magnitude
/// (lowest index on ties) is positive. Results are bit-identical for a given
/// seed.
///
/// Throws DisconnectedGraphError when lambda_2 < 1e-10 * max(1, bound), and
/// NotConvergedError when max_iter block steps do not reach tol.
Solution smallest_nontrivial_pairs(const SparseSymMatrix& laplacian, std::size_t count,
                                   const SolveSettings& settings = {});

struct DenseSpectrum {
  std::vector<double> values;                ///< ascending
  std::vector<std::vector<double>> vectors;  ///< vectors[i] belongs to values[i]
};

/// Full eigendecomposition by cyclic Jacobi rotations. Limited to order 2000.
DenseSpectrum dense_eigen_oracle(const SparseSymMatrix& matrix);

/// Flips `v` so its entry of largest magnitude is positive. Entries within a
/// relative 1e-9 of the largest magnitude are ties, settled by lowest index.
void fix_sign(std::vector<double>& v);

}  // namespace eigen
}  // namespace spemb
