#include <cmath>
#include <cstdint>
#include <sstream>

#include "roomgreen/core.hpp"
#include "roomgreen/errors.hpp"

namespace roomgreen {

void AxisBoundary::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InputError("axis length must be positive and finite");
  }
}

void RoomSpec::validate() const {
  if (axes.empty() || axes.size() > 3) {
    throw InputError("room must have 1, 2 or 3 axes, got " + std::to_string(axes.size()));
  }
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) {
    throw InputError("speed of sound must be positive");
  }
  for (const auto& axis : axes) axis.validate();
}

std::string RoomSpec::hash() const {
  std::ostringstream canon;
  canon.precision(17);
  canon << speed_of_sound;
  for (const auto& axis : axes) {
    canon << '|' << axis.length << ';' << axis.beta_minus.describe() << ';'
          << axis.beta_plus.describe();
    for (const auto* a : {&axis.beta_minus, &axis.beta_plus}) {
      for (const auto& r : a->rows()) {
        canon << ',' << r.frequency << ':' << r.beta.real() << ':' << r.beta.imag();
      }
    }
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canon.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

WaveContext make_wave_context(const RoomSpec& room, double frequency) {
  room.validate();
  if (!(frequency >= 0.0) || !std::isfinite(frequency)) {
    throw InputError("frequency must be non-negative, got " + std::to_string(frequency));
  }
  WaveContext ctx;
  ctx.frequency = frequency;
  ctx.wavenumber = 2.0 * kPi * frequency / room.speed_of_sound;
  ctx.q.reserve(room.axes.size());
  for (const auto& axis : room.axes) ctx.q.push_back(ctx.wavenumber * axis.length / kPi);
  return ctx;
}

GammaPair make_gamma(Complex gamma_minus, Complex gamma_plus) {
  GammaPair g;
  g.minus = gamma_minus;
  g.plus = gamma_plus;
  const Complex s = g.sum();
  if (s != Complex{}) g.parallel = g.product() / s;
  g.a12 = std::sqrt(std::abs(g.product())) / kPi;
  g.a11p = std::abs(s) / kPi;
  return g;
}

GammaPair make_gamma(const AxisBoundary& axis, const WaveContext& ctx) {
  axis.validate();
  const double kl = ctx.wavenumber * axis.length;
  GammaPair g = make_gamma(axis.beta_minus.at(ctx.frequency) * kl,
                           axis.beta_plus.at(ctx.frequency) * kl);
  g.length = axis.length;
  g.wavenumber = ctx.wavenumber;
  return g;
}

void SolverParams::validate() const {
  if (n_max < 0) throw InputError("n_max must be >= 0");
  if (n_newton < 0) throw InputError("n_newton must be >= 0");
  if (!(alpha_newton > 0.0 && alpha_newton <= 1.0)) {
    throw InputError("alpha_newton must lie in (0, 1]");
  }
  if (!(eps_newton > 0.0) || !(dedup_tol > 0.0) || !(zero_tol > 0.0)) {
    throw InputError("solver tolerances must be positive");
  }
}

}  // namespace roomgreen
