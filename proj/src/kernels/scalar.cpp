#include "ccl/kernels.hpp"

namespace ccl::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(a.subspan(r * cols, cols), x);
  }
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = alpha * x[i] + beta * y[i];
}

void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull) {
  const bool with_target = !target.empty();
  for (std::size_t i = 0; i < n; ++i) {
    double* row = a.data() + i * n;
    const double* trow = with_target ? target.data() + i * n : nullptr;
    const double ei = e[i];
    const double xi = x[i];
    for (std::size_t j = 0; j < n; ++j) {
      double v = decay * row[j] + half_rate * (ei * x[j] + xi * e[j]);
      if (with_target) v += pull * trow[j];
      row[j] = v;
    }
  }
}

void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out) {
  sym_rank2_update(a, n, decay, half_rate, e, x, target, pull);
  gemv(a, n, n, v, out);
}

}  // namespace ccl::kernels::scalar
