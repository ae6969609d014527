#include "roomgreen/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr double kWallTol = 1e-8;

ComplexL to_l(Complex z) { return {z.real(), z.imag()}; }

// (1/2i) ln((πq − γ)/(πq + γ)) = arctan(iγ/(πq)); empty on the ±i poles.
std::optional<ComplexL> atan_i_ratio(ComplexL pq, ComplexL gamma) {
  const ComplexL num = pq - gamma;
  const ComplexL den = pq + gamma;
  if (std::abs(num) == 0.0L || std::abs(den) == 0.0L) return std::nullopt;
  const ComplexL i{0.0L, 1.0L};
  return std::log(num / den) / (2.0L * i);
}

double wall_residual(ComplexL pq, ComplexL phase, ComplexL gamma) {
  const ComplexL i{0.0L, 1.0L};
  const ComplexL s = std::sin(phase);
  const ComplexL c = std::cos(phase);
  const long double scale = (std::abs(pq) + std::abs(gamma)) * std::max(std::abs(s), std::abs(c));
  if (scale == 0.0L) return 0.0;
  return static_cast<double>(std::abs(pq * s - i * gamma * c) / scale);
}

Complex reduce_phase(ComplexL b) {
  long double re = std::remainder(b.real(), 2.0L * kPiL);  // [-π, π]
  if (re <= -kPiL) re += 2.0L * kPiL;
  return {static_cast<double>(re), static_cast<double>(b.imag())};
}

}  // namespace

WallResiduals wall_residuals(Complex q_hat, Complex b_hat, const GammaPair& g) {
  const ComplexL pq = kPiL * to_l(q_hat);
  const ComplexL b = to_l(b_hat);
  return {wall_residual(pq, 0.5L * pq - b, to_l(g.minus)),
          wall_residual(pq, 0.5L * pq + b, to_l(g.plus))};
}

Complex b_from_q(const EigenRoot& root, const GammaPair& g) {
  const ComplexL pq = kPiL * to_l(root.q_hat);
  std::vector<Complex> options;
  if (auto a = atan_i_ratio(pq, to_l(g.plus))) options.push_back(reduce_phase(*a - 0.5L * pq));
  if (auto a = atan_i_ratio(pq, to_l(g.minus))) options.push_back(reduce_phase(0.5L * pq - *a));
  if (options.empty()) {
    throw LeftBcViolation("degenerate boundary data: iγ/(πq̂) = ±i at both walls");
  }
  Complex best = options.front();
  double best_res = std::numeric_limits<double>::infinity();
  for (Complex b : options) {
    const auto r = wall_residuals(root.q_hat, b, g);
    const double worst = std::max(r.left, r.right);
    if (worst < best_res) {
      best_res = worst;
      best = b;
    }
    if (worst <= kWallTol) break;  // the right-wall form is preferred
  }
  if (!(best_res <= kWallTol)) {
    std::ostringstream os;
    os.precision(12);
    os << "wall condition residual " << best_res << " at q = " << root.q_hat
       << " exceeds 1e-8 (spurious root?)";
    throw LeftBcViolation(os.str());
  }
  return best;
}

Complex lambda_of(Complex q_hat, Complex b_hat, double length) {
  const ComplexL pq = kPiL * to_l(q_hat);
  const ComplexL cos2b = std::cos(2.0L * to_l(b_hat));
  ComplexL sinc;
  if (std::abs(pq) < 1e-3L) {
    const ComplexL z2 = pq * pq;
    sinc = 1.0L - z2 / 6.0L + z2 * z2 / 120.0L - z2 * z2 * z2 / 5040.0L;
  } else {
    sinc = std::sin(pq) / pq;
  }
  const ComplexL lambda = 0.5L * static_cast<long double>(length) * (1.0L + sinc * cos2b);
  return {static_cast<double>(lambda.real()), static_cast<double>(lambda.imag())};
}

Complex lambda_of(const EigenRoot& root, Complex b_hat, double length) {
  return lambda_of(root.q_hat, b_hat, length);
}

namespace {
void check_domain(double length, double x) {
  if (!(std::abs(x) <= 0.5 * length * (1.0 + 1e-12))) {
    throw InputError("coordinate " + std::to_string(x) + " outside axis [-l/2, l/2] with l = " +
                     std::to_string(length));
  }
}
}  // namespace

Complex eigenfunction_eval(const ModalRoot& mode, double length, double x) {
  check_domain(length, x);
  return std::cos(kPi * mode.root.q_hat * x / length + mode.b_hat);
}

Complex eigenfunction_derivative(const ModalRoot& mode, double length, double x) {
  check_domain(length, x);
  const Complex k_hat = kPi * mode.root.q_hat / length;
  return -k_hat * std::sin(k_hat * x + mode.b_hat);
}

Basis1D build_basis(const AxisBoundary& axis, double frequency, double wavenumber,
                    const SolverParams& p) {
  Basis1D basis;
  basis.axis = axis;
  basis.frequency = frequency;
  basis.wavenumber = wavenumber;
  WaveContext ctx{frequency, wavenumber, {wavenumber * axis.length / kPi}};
  basis.gamma = make_gamma(axis, ctx);
  basis.roots = solve_axis(basis.gamma, p);
  basis.warnings = basis.roots.warnings;

  const double l = axis.length;
  if (axis.beta_minus.at(frequency) == Complex{} && axis.beta_plus.at(frequency) == Complex{}) {
    ModalRoot constant;
    constant.root.q_hat = 0.0;
    constant.root.group = Group::Constant;
    constant.root.k_hat = 0.0;
    constant.b_hat = 0.0;
    constant.lambda = l;
    basis.entries.push_back(constant);
    basis.has_constant_mode = true;
  }
  int defective = 0;
  for (const auto& r : basis.roots.roots) {
    ModalRoot m;
    m.root = r;
    m.b_hat = b_from_q(r, basis.gamma);
    m.lambda = lambda_of(r, m.b_hat, l);
    m.near_defective = std::abs(m.lambda) < kLambdaWarnTol * l;
    if (m.near_defective) ++defective;
    basis.entries.push_back(m);
  }
  if (defective > 0) {
    basis.warnings.push_back(std::to_string(defective) +
                             " near-defective eigenfunction(s): |Lambda| < 1e-6 l at f = " +
                             std::to_string(frequency) + " Hz");
  }
  return basis;
}

Basis1D build_basis(const RoomSpec& room, std::size_t axis_index, const WaveContext& ctx,
                    const SolverParams& p) {
  if (axis_index >= room.axes.size()) throw InputError("axis index out of range");
  return build_basis(room.axes[axis_index], ctx.frequency, ctx.wavenumber, p);
}

}  // namespace roomgreen
