#include <spemb/eigen.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace spemb::eigen {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Grows an orthonormal basis V (all columns orthogonal to the constant vector)
// together with AV = L V.
class KrylovBasis {
 public:
  KrylovBasis(const SparseSymMatrix& op, std::size_t capacity)
      : op_(op), n_(static_cast<Eigen::Index>(op.order())), v_(n_, capacity), av_(n_, capacity) {}

  Eigen::Index size() const { return cols_; }
  Eigen::Index capacity() const { return v_.cols(); }
  const Matrix& v() const { return v_; }
  const Matrix& av() const { return av_; }

  /// Orthogonalizes each column of `block` against the basis (classical
  /// Gram-Schmidt, two passes) and appends the ones that survive. Returns the
  /// number of columns appended.
  Eigen::Index append(const Matrix& block) {
    const Eigen::Index start = cols_;
    for (Eigen::Index j = 0; j < block.cols() && cols_ < capacity(); ++j) {
      Vector w = block.col(j);
      const double initial = w.norm();
      if (!(initial > 0.0)) continue;
      for (int pass = 0; pass < 2; ++pass) {
        w.array() -= w.sum() / static_cast<double>(n_);
        if (cols_ > 0) {
          const Vector h = v_.leftCols(cols_).transpose() * w;
          w.noalias() -= v_.leftCols(cols_) * h;
        }
      }
      const double norm = w.norm();
      if (norm <= 1e-10 * initial) continue;
      v_.col(cols_) = w / norm;
      ++cols_;
    }
    for (Eigen::Index j = start; j < cols_; ++j) {
      op_.multiply(std::span<const double>(v_.col(j).data(), static_cast<std::size_t>(n_)),
                   std::span<double>(av_.col(j).data(), static_cast<std::size_t>(n_)));
    }
    return cols_ - start;
  }

  /// Replaces the basis with `x` (orthonormal, constant-free) and its image.
  void reset(const Matrix& x, const Matrix& ax) {
    cols_ = x.cols();
    v_.leftCols(cols_) = x;
    av_.leftCols(cols_) = ax;
  }

 private:
  const SparseSymMatrix& op_;
  Eigen::Index n_;
  Matrix v_;
  Matrix av_;
  Eigen::Index cols_ = 0;
};

Matrix random_block(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    }
  }
  return m;
}

}  // namespace

double spectrum_bound(const SparseSymMatrix& laplacian) { return 2.0 * laplacian.max_diagonal(); }

void fix_sign(std::vector<double>& v) {
  if (v.empty()) return;
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  // Magnitudes equal up to round-off count as a tie; the lowest index wins.
  std::size_t arg = 0;
  while (std::abs(v[arg]) < peak * (1.0 - 1e-9)) ++arg;
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

Solution smallest_nontrivial_pairs(const SparseSymMatrix& laplacian, std::size_t count,
                                   const SolveSettings& settings) {
  const std::size_t n = laplacian.order();
  if (count == 0) throw Error("eigenpair count must be positive");
  if (count + 1 > n) throw Error("need at least count + 1 nodes for count nontrivial eigenpairs");
  if (!(settings.tol > 0.0) || settings.max_iter < 1) throw Error("invalid solver settings");

  const double scale = std::max(1.0, spectrum_bound(laplacian));
  const double target = settings.tol * scale;

  // The constant vector spans the known null direction; everything happens in
  // its (n-1)-dimensional complement.
  const auto space = static_cast<Eigen::Index>(n - 1);
  const Eigen::Index nev = static_cast<Eigen::Index>(count);
  const Eigen::Index block = std::min<Eigen::Index>(nev + 2, space);
  const Eigen::Index capacity = std::min<Eigen::Index>(space, std::max<Eigen::Index>(12 * block, 96));
  const Eigen::Index keep = std::min<Eigen::Index>(capacity - 1, std::max<Eigen::Index>(nev + block, capacity / 3));

  std::mt19937_64 rng(settings.seed);
  KrylovBasis basis(laplacian, static_cast<std::size_t>(capacity));
  const auto rows = static_cast<Eigen::Index>(n);

  Solution out;
  Matrix pending = random_block(rows, block, rng);
  Eigen::Index last_begin = 0;
  while (true) {
    // Expand until the basis is full.
    while (basis.size() < basis.capacity()) {
      if (out.iterations >= settings.max_iter) {
        throw NotConvergedError("eigensolver did not converge within " + std::to_string(settings.max_iter) +
                                " iterations");
      }
      ++out.iterations;
      const Eigen::Index before = basis.size();
      if (basis.append(pending) == 0) {
        // Invariant subspace reached; continue from fresh directions.
        if (basis.append(random_block(rows, block, rng)) == 0) break;
      }
      last_begin = before;
      pending = basis.av().middleCols(last_begin, basis.size() - last_begin);
    }

    // Rayleigh-Ritz on the current basis.
    const Eigen::Index m = basis.size();
    Matrix h = basis.v().leftCols(m).transpose() * basis.av().leftCols(m);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> small(h);
    if (small.info() != Eigen::Success) throw NotConvergedError("projected eigenproblem failed");

    // A basis spanning the whole complement gives exact Ritz pairs; keep them all.
    const Eigen::Index k = m == space ? m : std::min(keep, m);
    const Matrix s = small.eigenvectors().leftCols(k);
    const Vector theta = small.eigenvalues().head(k);
    const Matrix x = basis.v().leftCols(m) * s;
    const Matrix ax = basis.av().leftCols(m) * s;
    const Matrix residual = ax - x * theta.asDiagonal();

    bool converged = true;
    for (Eigen::Index i = 0; i < nev; ++i) converged = converged && residual.col(i).norm() <= target;
    if (converged || m == space) {
      if (!converged) throw NotConvergedError("eigensolver stalled on the full subspace");
      for (Eigen::Index i = 0; i < nev; ++i) {
        EigenPair pair;
        pair.value = theta(i);
        pair.vector.assign(x.col(i).data(), x.col(i).data() + rows);
        fix_sign(pair.vector);
        out.pairs.push_back(std::move(pair));
      }
      break;
    }

    basis.reset(x, ax);
    pending = residual.leftCols(block);
  }

  if (out.pairs.front().value < 1e-10 * scale) {
    throw DisconnectedGraphError("graph is disconnected (lambda_2 = " + std::to_string(out.pairs.front().value) +
                                 "); bridge its components before embedding");
  }
  return out;
}

DenseSpectrum dense_eigen_oracle(const SparseSymMatrix& matrix) {
  const std::size_t n = matrix.order();
  if (n > 2000) throw Error("dense eigen oracle is limited to order 2000");

  std::vector<double> a = matrix.to_dense();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return s;
  };
  double total = 0.0;
  for (double x : a) total += x * x;

  for (int sweep = 0; sweep < 100 && off_norm2() > 1e-30 * total; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a[p * n + p] -= t * apq;
        a[q * n + q] += t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p], arq = a[r * n + q];
          a[r * n + p] = a[p * n + r] = c * arp - s * arq;
          a[r * n + q] = a[q * n + r] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r * n + p], vrq = v[r * n + q];
          v[r * n + p] = c * vrp - s * vrq;
          v[r * n + q] = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  DenseSpectrum out;
  for (std::size_t i : order) {
    out.values.push_back(a[i * n + i]);
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + i];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace spemb::eigen
