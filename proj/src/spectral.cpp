#include "qfern/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qfern/errors.hpp"
#include "qfern/format.hpp"
#include "qfern/kernels.hpp"
#include "qfern/parallel.hpp"

namespace qfern {

Matrix laplacian(const WeightedGraph& g) {
  if (g.directed) raise(Errc::directed_input, "laplacian: graph must be undirected (symmetrize first)");
  Matrix l(g.n, g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      double w = g.weights(i, j);
      degree += w;
      l(i, j) = -w;
    }
    l(i, i) = degree;
  }
  return l;
}

namespace {

double frobenius(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) s += m.data()[i] * m.data()[i];
  return std::sqrt(s);
}

double off_diagonal_norm(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

SpectralDecomposition eig_sym(const Matrix& l) {
  const std::size_t n = l.rows();
  if (n == 0 || l.cols() != n) raise(Errc::invalid_parameter, "eig_sym: matrix must be square and non-empty");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(l(i, j) - l(j, i)) > 1e-12)
        raise(Errc::non_symmetric_input, "eig_sym: input is not symmetric");

  Matrix a = l;
  Matrix vt = Matrix::identity(n);  // rows are eigenvectors while iterating

  const double stop = 1e-14 * std::max(1.0, frobenius(a));
  const double skip = stop / static_cast<double>(n * n);
  const int max_sweeps = 64;

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        double app = a(p, p);
        double aqq = a(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(tau) > 1e150)
          t = 1.0 / (2.0 * tau);
        else
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;

        kernels::rotate(a.row(p), a.row(q), n, c, s);
        a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == p || j == q) continue;
          a(j, p) = a(p, j);
          a(j, q) = a(q, j);
        }
        kernels::rotate(vt.row(p), vt.row(q), n, c, s);
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > stop)
    raise(Errc::convergence_failure, "eig_sym: Jacobi sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralDecomposition d;
  d.eigenvalues.resize(n);
  d.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    d.eigenvalues[k] = a(order[k], order[k]);
    const double* vec = vt.row(order[k]);
    double sign = 1.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (std::abs(vec[u]) > 1e-12) {
        sign = vec[u] > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t u = 0; u < n; ++u) d.eigenvectors(u, k) = sign * vec[u];
  }
  if (n >= 2) {
    d.lambda2 = d.eigenvalues[1];
    d.fiedler.resize(n);
    for (std::size_t u = 0; u < n; ++u) d.fiedler[u] = d.eigenvectors(u, 1);
  }
  if (n >= 3) d.degenerate_lambda2 = (d.eigenvalues[2] - d.eigenvalues[1]) <= 1e-9;
  return d;
}

namespace {

// Exactly one eigenvalue may sit below tolerance; two or more means the
// graph behind the Laplacian is disconnected.
void require_connected_spectrum(const SpectralDecomposition& d) {
  std::size_t zeros = 0;
  for (double v : d.eigenvalues)
    if (v < kZeroEigenvalueTol) ++zeros;
  if (zeros > 1)
    raise(Errc::disconnected_graph,
          "graph is disconnected (" + std::to_string(zeros) + " near-zero eigenvalues)",
          static_cast<long>(zeros));
  if (zeros == 0) raise(Errc::invalid_parameter, "input is not a Laplacian spectrum (no zero eigenvalue)");
}

std::vector<double> inverse_eigenvalues(const SpectralDecomposition& d) {
  std::vector<double> inv(d.eigenvalues.size(), 0.0);
  for (std::size_t i = 1; i < d.eigenvalues.size(); ++i) inv[i] = 1.0 / d.eigenvalues[i];
  return inv;
}

}  // namespace

Matrix pseudoinverse(const SpectralDecomposition& d) {
  require_connected_spectrum(d);
  const std::size_t n = d.eigenvalues.size();
  std::vector<double> inv = inverse_eigenvalues(d);
  Matrix out(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u; v < n; ++v) {
      double value = kernels::weighted_dot(d.eigenvectors.row(u), d.eigenvectors.row(v), inv.data(), n);
      out(u, v) = value;
      out(v, u) = value;
    }
  }
  return out;
}

double effective_resistance(const SpectralDecomposition& d, std::size_t u, std::size_t v) {
  const std::size_t n = d.eigenvalues.size();
  if (u >= n || v >= n || u == v)
    raise(Errc::invalid_node, "effective_resistance: invalid node pair (" + std::to_string(u) +
                                  ", " + std::to_string(v) + ")");
  require_connected_spectrum(d);
  std::vector<double> inv = inverse_eigenvalues(d);
  return kernels::weighted_sq_diff(d.eigenvectors.row(u), d.eigenvectors.row(v), inv.data(), n);
}

ResistanceMatrix resistance_matrix(const SpectralDecomposition& d) {
  require_connected_spectrum(d);
  const std::size_t n = d.eigenvalues.size();
  std::vector<double> inv = inverse_eigenvalues(d);
  ResistanceMatrix rm{Matrix(n, n)};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        rm.values(u, v) =
            kernels::weighted_sq_diff(d.eigenvectors.row(u), d.eigenvectors.row(v), inv.data(), n);
  });
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) rm.values(v, u) = rm.values(u, v);
  return rm;
}

double total_effective_resistance(const ResistanceMatrix& rm) {
  double sum = 0.0;
  for (std::size_t u = 0; u < rm.values.rows(); ++u)
    for (std::size_t v = u + 1; v < rm.values.cols(); ++v) sum += rm.values(u, v);
  return 2.0 * sum;
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream out;
  for (std::size_t u = 0; u < m.rows(); ++u) {
    for (std::size_t v = 0; v < m.cols(); ++v) out << (v ? "," : "") << fmt_g12(m(u, v));
    out << "\n";
  }
  return out.str();
}

std::string resistance_csv(const ResistanceMatrix& rm) { return matrix_csv(rm.values); }

}  // namespace qfern
