// Dense complex linear algebra for small qutrit Hilbert spaces (dimension 3^n, n <= 3).
//
// Basis convention used everywhere in this library: the product label
// |a>|b>|c> maps to flat index 9a + 3b + c (leftmost factor most significant).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qutrit {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double equality = 1e-12;
inline constexpr double hermitian = 1e-10;
inline constexpr double eigen_convergence = 1e-13;
inline constexpr double audit = 1e-9;
inline constexpr int max_jacobi_sweeps = 50;
}  // namespace tol

struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct contract_violation : std::logic_error {
  using std::logic_error::logic_error;
};
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(std::span<const Complex> values, const char* what) {
  for (const auto& z : values)
    if (!finite(z)) throw numerical_error(std::string(what) + ": non-finite entry");
}

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

}  // namespace detail

/// Pure state over a tensor product of qutrit factors.
class Ket {
 public:
  Ket() = default;

  Ket(std::vector<std::size_t> dims, std::vector<Complex> amplitudes)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (dims_.empty()) throw shape_error("Ket: no factors");
    for (auto d : dims_)
      if (d != 3) throw shape_error("Ket: every factor must be a qutrit");
    if (amps_.size() != detail::product(dims_)) throw shape_error("Ket: amplitude count does not match dims");
    detail::require_finite(amps_, "Ket");
  }

  /// Single-qutrit ket from three amplitudes.
  static Ket qutrit(Complex a, Complex b, Complex c) { return Ket({3}, {a, b, c}); }

  /// Computational basis state |labels[0]>|labels[1]>...
  static Ket basis(std::vector<std::size_t> labels) {
    std::vector<std::size_t> dims(labels.size(), 3);
    std::vector<Complex> amps(detail::product(dims));
    std::size_t idx = 0;
    for (auto l : labels) {
      if (l > 2) throw shape_error("Ket::basis: trit label out of range");
      idx = 3 * idx + l;
    }
    amps[idx] = 1.0;
    return Ket(std::move(dims), std::move(amps));
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_normalized(double tolerance = tol::equality) const { return std::abs(norm() - 1.0) <= tolerance; }

  Ket scaled(Complex factor) const {
    auto amps = amps_;
    for (auto& z : amps) z *= factor;
    return Ket(dims_, std::move(amps));
  }

  Ket normalized() const {
    const double n = norm();
    if (n == 0.0) throw numerical_error("Ket::normalized: zero vector");
    return scaled(1.0 / n);
  }

  friend bool operator==(const Ket&, const Ket&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<Complex> amps_;
};

/// Dense square operator, row-major, entry(r, c) = <r|O|c>.
class Operator {
 public:
  Operator() = default;

  explicit Operator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw shape_error("Operator: zero dimension");
  }

  Operator(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0 || entries_.size() != dim * dim) throw shape_error("Operator: entry count is not dim*dim");
    detail::require_finite(entries_, "Operator");
  }

  static Operator identity(std::size_t dim) {
    Operator o(dim);
    for (std::size_t i = 0; i < dim; ++i) o(i, i) = 1.0;
    return o;
  }

  static Operator diagonal(std::span<const Complex> diag) {
    Operator o(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) o(i, i) = diag[i];
    return o;
  }

  /// |k><k| for a ket k.
  static Operator projector(const Ket& k) {
    const auto n = k.size();
    Operator o(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) o(r, c) = k[r] * std::conj(k[c]);
    return o;
  }

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  std::span<const Complex> entries() const { return entries_; }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// max |O(r,c) - conj(O(c,r))|
  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  Operator scaled(Complex factor) const {
    auto e = entries_;
    for (auto& z : e) z *= factor;
    return Operator(dim_, std::move(e));
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim_ != b.dim_) throw shape_error("Operator product: dimension mismatch");
    Operator out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex ark = a(r, k);
        if (ark == 0.0) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  friend Operator operator+(const Operator& a, const Operator& b) {
    if (a.dim_ != b.dim_) throw shape_error("Operator sum: dimension mismatch");
    Operator out(a.dim_);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) out.entries_[i] = a.entries_[i] + b.entries_[i];
    return out;
  }

  friend Operator operator-(const Operator& a, const Operator& b) {
    if (a.dim_ != b.dim_) throw shape_error("Operator difference: dimension mismatch");
    Operator out(a.dim_);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) out.entries_[i] = a.entries_[i] - b.entries_[i];
    return out;
  }

  /// Largest entry-wise modulus.
  double max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
  }

  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

/// Hermitian operator with unit trace (within tolerance) tagged with its factor dims.
class DensityMatrix {
 public:
  DensityMatrix(Operator rho, std::vector<std::size_t> dims) : rho_(std::move(rho)), dims_(std::move(dims)) {
    if (detail::product(dims_) != rho_.dim()) throw shape_error("DensityMatrix: dims do not match operator size");
    if (rho_.hermiticity_defect() > tol::equality) throw contract_violation("DensityMatrix: operator is not Hermitian");
  }

  static DensityMatrix from_ket(const Ket& k) { return DensityMatrix(Operator::projector(k), k.dims()); }

  const Operator& op() const { return rho_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  double trace() const { return rho_.trace().real(); }

 private:
  Operator rho_;
  std::vector<std::size_t> dims_;
};

inline Ket tensor(const Ket& a, const Ket& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<Complex> amps(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) amps[i * b.size() + j] = a[i] * b[j];
  return Ket(std::move(dims), std::move(amps));
}

/// <a|b>
inline Complex inner(const Ket& a, const Ket& b) {
  if (a.dims() != b.dims()) throw shape_error("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline Ket apply(const Operator& o, const Ket& k) {
  if (o.dim() != k.size()) throw shape_error("apply: operator and ket dimensions differ");
  std::vector<Complex> out(k.size());
  for (std::size_t r = 0; r < o.dim(); ++r) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < o.dim(); ++c) s += o(r, c) * k[c];
    out[r] = s;
  }
  return Ket(k.dims(), std::move(out));
}

inline Operator dagger(const Operator& o) {
  Operator out(o.dim());
  for (std::size_t r = 0; r < o.dim(); ++r)
    for (std::size_t c = 0; c < o.dim(); ++c) out(c, r) = std::conj(o(r, c));
  return out;
}

inline Operator kron(const Operator& a, const Operator& b) {
  const auto n = a.dim() * b.dim();
  Operator out(n);
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac)
      for (std::size_t br = 0; br < b.dim(); ++br)
        for (std::size_t bc = 0; bc < b.dim(); ++bc)
          out(ar * b.dim() + br, ac * b.dim() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

namespace detail {

struct Split {
  std::size_t before, here, after;
};

inline Split split_at(std::span<const std::size_t> dims, std::size_t factor) {
  if (factor >= dims.size()) throw shape_error("invalid factor index");
  return {product(dims.subspan(0, factor)), dims[factor], product(dims.subspan(factor + 1))};
}

}  // namespace detail

/// Reduced density matrix over factor `keep`, all other factors traced out.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep, std::span<const std::size_t> dims) {
  if (detail::product(dims) != rho.op().dim()) throw shape_error("partial_trace: dims do not match operator");
  const auto [pre, d, post] = detail::split_at(dims, keep);
  Operator out(d);
  const auto& m = rho.op();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < pre; ++a)
        for (std::size_t b = 0; b < post; ++b) s += m((a * d + i) * post + b, (a * d + j) * post + b);
      out(i, j) = s;
    }
  return DensityMatrix(std::move(out), {d});
}

/// Transposes the indices of factor `party` only.
inline Operator partial_transpose(const DensityMatrix& rho, std::size_t party, std::span<const std::size_t> dims) {
  if (detail::product(dims) != rho.op().dim()) throw shape_error("partial_transpose: dims do not match operator");
  const auto [pre, d, post] = detail::split_at(dims, party);
  const auto& m = rho.op();
  Operator out(m.dim());
  for (std::size_t a = 0; a < pre; ++a)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t b = 0; b < post; ++b)
        for (std::size_t a2 = 0; a2 < pre; ++a2)
          for (std::size_t j = 0; j < d; ++j)
            for (std::size_t b2 = 0; b2 < post; ++b2)
              out((a * d + i) * post + b, (a2 * d + j) * post + b2) = m((a * d + j) * post + b, (a2 * d + i) * post + b2);
  return out;
}

/// Eigenvalues of a Hermitian operator in descending order, by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot element with a diagonal
/// unitary, then zeroes it with a real Givens rotation. Sweeps continue until
/// the largest off-diagonal modulus is at most tol::eigen_convergence.
inline std::vector<double> hermitian_eigenvalues(const Operator& o) {
  if (o.hermiticity_defect() > tol::hermitian) throw contract_violation("hermitian_eigenvalues: input is not Hermitian");
  const std::size_t n = o.dim();
  Operator a = o;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_diagonal_max = [&] {
    double m = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) m = std::max(m, std::abs(a(r, c)));
    return m;
  };

  int sweep = 0;
  while (off_diagonal_max() > tol::eigen_convergence) {
    if (sweep++ == tol::max_jacobi_sweeps) throw numerical_error("hermitian_eigenvalues: Jacobi did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = a(p, q) / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // G restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]; A <- G^H A G.
        const Complex g_pp = c, g_pq = s;
        const Complex g_qp = -s * std::conj(phase), g_qq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g_pp + akq * g_qp;
          a(k, q) = akp * g_pq + akq * g_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::stable_sort(eig.begin(), eig.end(), std::greater<>{});

  const double trace = o.trace().real();
  const double sum = std::accumulate(eig.begin(), eig.end(), 0.0);
  if (std::abs(sum - trace) > tol::hermitian * std::max(1.0, std::abs(trace)))
    throw numerical_error("hermitian_eigenvalues: eigenvalue sum drifted from trace");
  return eig;
}

/// Singular values in descending order: square roots of the eigenvalues of O^H O.
inline std::vector<double> singular_values(const Operator& o) {
  auto eig = hermitian_eigenvalues(dagger(o) * o);
  for (auto& e : eig) e = std::sqrt(std::max(e, 0.0));
  return eig;
}

/// True if every row and every column holds exactly one entry of modulus above `threshold`.
inline bool is_monomial(const Operator& o, double threshold = tol::equality) {
  const auto n = o.dim();
  std::vector<int> rows(n, 0), cols(n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (std::abs(o(r, c)) > threshold) {
        ++rows[r];
        ++cols[c];
      }
  auto one = [](int x) { return x == 1; };
  return std::all_of(rows.begin(), rows.end(), one) && std::all_of(cols.begin(), cols.end(), one);
}

}  // namespace qutrit
