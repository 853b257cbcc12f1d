#include "gbvar/kernel.hpp"

#include <cmath>
#include <numbers>

#include "gbvar/error.hpp"

namespace gbvar {

Kernel gaussian_kernel() { return Kernel{"gaussian", &gaussian_kernel_value}; }

Kernel kernel_by_name(const std::string& name) {
  if (name == "gaussian") return gaussian_kernel();
  throw InvalidArgument("unknown kernel '" + name + "'");
}

double kernel_fourier_transform(const Kernel& kernel, double xi, double half_width, double step) {
  const auto steps = static_cast<long>(std::ceil(half_width / step));
  const double h = half_width / static_cast<double>(steps);
  // Symmetric integrand: 2 * int_0^L K(t) cos(2 pi t xi) dt.
  double sum = 0.5 * kernel(0.0);
  for (long s = 1; s <= steps; ++s) {
    const double t = h * static_cast<double>(s);
    const double w = s == steps ? 0.5 : 1.0;
    sum += w * kernel(t) * std::cos(2.0 * std::numbers::pi * t * xi);
  }
  return 2.0 * h * sum;
}

KernelCheck check_kernel(const Kernel& kernel) {
  KernelCheck out;
  auto fail = [&out](std::string why) {
    out.ok = false;
    out.failure = std::move(why);
    return out;
  };
  if (std::abs(kernel(0.0) - 1.0) > 1e-12) return fail("K(0) != 1");
  double previous = kernel(0.0);
  double integral = 0.0;
  const double dx = 1e-2;
  for (int s = 1; s <= 5000; ++s) {
    const double x = dx * s;
    const double v = kernel(x);
    if (std::abs(v - kernel(-x)) > 1e-12) return fail("K is not symmetric");
    if (v < 0.0) return fail("K is negative");
    if (v > previous + 1e-12) return fail("K increases on [0, inf)");
    integral += v * dx;
    previous = v;
  }
  if (!std::isfinite(integral)) return fail("integral of K diverges");
  if (previous > 1e-6) return fail("K does not decay on [0, 50]");
  for (int s = -100; s <= 100; ++s) {
    const double xi = 0.1 * s;
    if (kernel_fourier_transform(kernel, xi) < -1e-9) return fail("Fourier transform is negative");
  }
  return out;
}

}  // namespace gbvar
