#pragma once

#include <cmath>
#include <functional>
#include <string>

namespace gbvar {

/// Multiplier kernel: symmetric, K(0) = 1, nonincreasing on [0, inf),
/// integrable, with a nonnegative Fourier transform (so every Toeplitz
/// matrix K((s - t) / h) is positive semidefinite).
struct Kernel {
  std::string name;
  std::function<double(double)> eval;

  double operator()(double x) const { return eval(x); }
};

inline double gaussian_kernel_value(double x) { return std::exp(-0.5 * x * x); }

/// exp(-x^2 / 2); the default kernel.
Kernel gaussian_kernel();

/// Looks up a built-in kernel ("gaussian"). Throws InvalidArgument otherwise.
Kernel kernel_by_name(const std::string& name);

/// Numerical Fourier transform int K(t) exp(-2 pi i t xi) dt for a symmetric
/// kernel (real part only), trapezoid rule on [-half_width, half_width].
double kernel_fourier_transform(const Kernel& kernel, double xi, double half_width = 40.0,
                                double step = 1e-3);

struct KernelCheck {
  bool ok = true;
  std::string failure;
};

/// Grid checks of the kernel conditions: K(0) = 1, symmetry, monotone decay
/// on [0, 50], finite integral, and Fourier transform >= -1e-9 on [-10, 10].
KernelCheck check_kernel(const Kernel& kernel);

}  // namespace gbvar
