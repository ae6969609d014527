#include "roomgreen/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

struct Homogeneous {
  Complex u;
  Complex du;
};

// u₋ and its x-derivative.
Homogeneous left_solution(double k, double length, Complex beta, double x) {
  const double s = k * (x + 0.5 * length);
  const Complex i{0.0, 1.0};
  return {std::cos(s) + i * beta * std::sin(s), k * (-std::sin(s) + i * beta * std::cos(s))};
}

// u₊ and its x-derivative.
Homogeneous right_solution(double k, double length, Complex beta, double x) {
  const double t = k * (0.5 * length - x);
  const Complex i{0.0, 1.0};
  return {std::cos(t) + i * beta * std::sin(t), k * (std::sin(t) - i * beta * std::cos(t))};
}

std::size_t intervals(double length, double frequency, double epw, double c) {
  const double n = std::ceil(length * frequency * epw / c - 1e-9);
  return std::max<std::size_t>(8, static_cast<std::size_t>(n));
}

// Band storage after LAPACK: element (r, c) at ab[c * ld + kv + r - c],
// kv = 2·band rows above the diagonal to hold pivoting fill.
class BandLu {
 public:
  BandLu(std::size_t n, std::size_t band)
      : n_(n), kl_(band), kv_(2 * band), ld_(3 * band + 1), ab_(n * ld_), piv_(n) {}

  Complex& at(std::size_t r, std::size_t c) { return ab_[c * ld_ + kv_ + r - c]; }

  void factor() {
    double scale = 0.0;
    for (Complex v : ab_) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-14 * scale;
    std::size_t ju = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t km = std::min(kl_, n_ - 1 - j);
      std::size_t p = j;
      double best = std::abs(at(j, j));
      for (std::size_t r = j + 1; r <= j + km; ++r) {
        const double v = std::abs(at(r, j));
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (!(best > tiny)) {
        throw SolveFailure("finite-difference system is singular at unknown " + std::to_string(j) +
                           " (discrete resonance)");
      }
      piv_[j] = p;
      ju = std::max(ju, std::min(n_ - 1, p + kl_));
      if (p != j) {
        for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(p, c));
      }
      const Complex inv = 1.0 / at(j, j);
      for (std::size_t r = j + 1; r <= j + km; ++r) at(r, j) *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const Complex u = at(j, c);
        if (u == Complex{}) continue;
        for (std::size_t r = j + 1; r <= j + km; ++r) at(r, c) -= at(r, j) * u;
      }
    }
  }

  void solve(std::vector<Complex>& b) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
      const std::size_t km = std::min(kl_, n_ - 1 - j);
      for (std::size_t r = j + 1; r <= j + km; ++r) b[r] -= at(r, j) * b[j];
    }
    for (std::size_t j = n_; j-- > 0;) {
      b[j] /= at(j, j);
      const std::size_t lo = j > kv_ ? j - kv_ : 0;
      for (std::size_t r = lo; r < j; ++r) b[r] -= at(r, j) * b[j];
    }
  }

 private:
  std::size_t n_, kl_, kv_, ld_;
  std::vector<Complex> ab_;
  std::vector<std::size_t> piv_;
};

}  // namespace

Complex green_1d_closed_form(const AxisBoundary& axis, const WaveContext& ctx, double x0, double x) {
  axis.validate();
  const double k = ctx.wavenumber;
  const double l = axis.length;
  if (!(k > 0.0)) throw InputError("closed-form reference needs k > 0");
  const double half = 0.5 * l * (1.0 + 1e-12);
  if (std::abs(x) > half || std::abs(x0) > half) {
    throw InputError("closed-form reference: coordinate outside [-l/2, l/2]");
  }
  const Complex bm = axis.beta_minus.at(ctx.frequency);
  const Complex bp = axis.beta_plus.at(ctx.frequency);
  const auto um0 = left_solution(k, l, bm, x0);
  const auto up0 = right_solution(k, l, bp, x0);
  const Complex w = um0.u * up0.du - um0.du * up0.u;
  const double scale = (1.0 + std::abs(bm)) * (1.0 + std::abs(bp));
  if (std::abs(w) < 1e-12 * k * scale) {
    std::ostringstream os;
    os << "Wronskian vanishes at f = " << ctx.frequency << " Hz (lossless resonance)";
    throw DegenerateWronskian(os.str());
  }
  const double lo = std::min(x, x0);
  const double hi = std::max(x, x0);
  return -left_solution(k, l, bm, lo).u * right_solution(k, l, bp, hi).u / w;
}

FdmSystem assemble_fdm_2d(const RoomSpec& room, const WaveContext& ctx, const Point& x0, double epw) {
  room.validate();
  if (room.dimension() != 2) throw InputError("finite-difference reference is 2D only");
  if (!(epw >= kMinEpw)) throw InputError("epw must be >= 10");
  if (!(ctx.frequency > 0.0)) throw InputError("finite-difference reference needs f > 0");
  const double lx = room.axes[0].length;
  const double ly = room.axes[1].length;
  if (std::abs(x0[0]) > 0.5 * lx || std::abs(x0[1]) > 0.5 * ly) {
    throw InputError("source lies outside the room");
  }
  const std::size_t nx = intervals(lx, ctx.frequency, epw, room.speed_of_sound);
  const std::size_t ny = intervals(ly, ctx.frequency, epw, room.speed_of_sound);
  const std::size_t unknowns = (nx + 1) * (ny + 1);
  if (unknowns > kMaxFdmUnknowns) {
    throw GridTooLarge("finite-difference grid needs " + std::to_string(unknowns) +
                       " unknowns, limit is " + std::to_string(kMaxFdmUnknowns));
  }

  FdmSystem s;
  s.hx = lx / static_cast<double>(nx);
  s.hy = ly / static_cast<double>(ny);
  for (std::size_t i = 0; i <= nx; ++i) s.x.push_back(-0.5 * lx + static_cast<double>(i) * s.hx);
  for (std::size_t j = 0; j <= ny; ++j) s.y.push_back(-0.5 * ly + static_cast<double>(j) * s.hy);
  s.x.back() = 0.5 * lx;
  s.y.back() = 0.5 * ly;

  const double k = ctx.wavenumber;
  const Complex ik{0.0, k};
  const Complex bxm = room.axes[0].beta_minus.at(ctx.frequency);
  const Complex bxp = room.axes[0].beta_plus.at(ctx.frequency);
  const Complex bym = room.axes[1].beta_minus.at(ctx.frequency);
  const Complex byp = room.axes[1].beta_plus.at(ctx.frequency);
  const double cx = 1.0 / (s.hx * s.hx);
  const double cy = 1.0 / (s.hy * s.hy);

  std::map<std::pair<std::size_t, std::size_t>, Complex> a;
  const auto add = [&](std::size_t r, std::size_t c, Complex v) { a[{r, c}] += v; };

  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      const std::size_t row = s.node(i, j);
      const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
      const double w = wx * wy;
      Complex diag = w * k * k;
      // x-direction: a ghost value G_in − 2h·ikβ·G_wall replaces the
      // missing neighbour at a wall.
      diag -= 2.0 * cx * w;
      if (i > 0) add(row, s.node(i - 1, j), cx * w);
      if (i < nx) add(row, s.node(i + 1, j), cx * w);
      if (i == 0) {
        add(row, s.node(1, j), cx * w);
        diag -= 2.0 * s.hx * ik * bxm * cx * w;
      }
      if (i == nx) {
        add(row, s.node(nx - 1, j), cx * w);
        diag -= 2.0 * s.hx * ik * bxp * cx * w;
      }
      diag -= 2.0 * cy * w;
      if (j > 0) add(row, s.node(i, j - 1), cy * w);
      if (j < ny) add(row, s.node(i, j + 1), cy * w);
      if (j == 0) {
        add(row, s.node(i, 1), cy * w);
        diag -= 2.0 * s.hy * ik * bym * cy * w;
      }
      if (j == ny) {
        add(row, s.node(i, ny - 1), cy * w);
        diag -= 2.0 * s.hy * ik * byp * cy * w;
      }
      add(row, row, diag);
    }
  }
  s.entries.reserve(a.size());
  for (const auto& [rc, v] : a) s.entries.push_back({rc.first, rc.second, v});

  // Bilinear spreading of the unit source: −φ_i(x0)/(hx hy) on the halved
  // rows is the lumped-mass discretisation of −δ.
  s.rhs.assign(unknowns, Complex{});
  const double fx = std::clamp((x0[0] + 0.5 * lx) / s.hx, 0.0, static_cast<double>(nx));
  const double fy = std::clamp((x0[1] + 0.5 * ly) / s.hy, 0.0, static_cast<double>(ny));
  const std::size_t i0 = std::min(static_cast<std::size_t>(fx), nx - 1);
  const std::size_t j0 = std::min(static_cast<std::size_t>(fy), ny - 1);
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);
  const double area = s.hx * s.hy;
  s.rhs[s.node(i0, j0)] -= (1 - tx) * (1 - ty) / area;
  s.rhs[s.node(i0 + 1, j0)] -= tx * (1 - ty) / area;
  s.rhs[s.node(i0, j0 + 1)] -= (1 - tx) * ty / area;
  s.rhs[s.node(i0 + 1, j0 + 1)] -= tx * ty / area;
  return s;
}

std::vector<Complex> solve_banded(std::size_t n, std::size_t band,
                                  const std::vector<FdmEntry>& entries, std::vector<Complex> rhs) {
  if (rhs.size() != n) throw InputError("solve_banded: rhs size mismatch");
  BandLu lu(n, band);
  for (const auto& e : entries) {
    const std::size_t d = e.row > e.col ? e.row - e.col : e.col - e.row;
    if (e.row >= n || e.col >= n || d > band) throw InputError("solve_banded: entry outside band");
    lu.at(e.row, e.col) += e.value;
  }
  lu.factor();
  lu.solve(rhs);
  return rhs;
}

namespace {

// Renumber so the shorter axis varies fastest and the bandwidth is minimal.
std::vector<Complex> solve_system(const FdmSystem& s) {
  const std::size_t nxn = s.x.size();
  const std::size_t nyn = s.y.size();
  if (nyn <= nxn) return solve_banded(s.unknowns(), nyn, s.entries, s.rhs);
  const auto perm = [&](std::size_t idx) {
    const std::size_t i = idx / nyn;
    const std::size_t j = idx % nyn;
    return j * nxn + i;
  };
  std::vector<FdmEntry> e;
  e.reserve(s.entries.size());
  for (const auto& t : s.entries) e.push_back({perm(t.row), perm(t.col), t.value});
  std::vector<Complex> b(s.unknowns());
  for (std::size_t idx = 0; idx < b.size(); ++idx) b[perm(idx)] = s.rhs[idx];
  const std::vector<Complex> sol = solve_banded(s.unknowns(), nxn, e, std::move(b));
  std::vector<Complex> out(s.unknowns());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = sol[perm(idx)];
  return out;
}

}  // namespace

FdmField fdm_green_2d(const RoomSpec& room, const WaveContext& ctx, const Point& x0, double epw) {
  const FdmSystem s = assemble_fdm_2d(room, ctx, x0, epw);
  FdmField out;
  std::vector<Complex> values;
  try {
    values = solve_system(s);
  } catch (const SolveFailure& e) {
    std::ostringstream os;
    os << "f = " << ctx.frequency << " Hz: " << e.what();
    throw SolveFailure(os.str());
  }
  out.x = s.x;
  out.y = s.y;
  out.field.dimension = 2;
  out.field.frequency = ctx.frequency;
  out.field.n_max = 0;
  out.field.room_hash = room.hash();
  out.field.term_count = 0;
  out.field.points.reserve(s.unknowns());
  for (double px : s.x) {
    for (double py : s.y) out.field.points.push_back({px, py, 0.0});
  }
  for (Complex v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw SolveFailure("finite-difference solution is not finite");
    }
  }
  out.field.values = std::move(values);
  return out;
}

Complex FdmField::at(double px, double py) const {
  const auto locate = [](const std::vector<double>& g, double v, std::size_t& i, double& t) {
    const double h = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
    const double f = std::clamp((v - g.front()) / h, 0.0, static_cast<double>(g.size() - 1));
    i = std::min(static_cast<std::size_t>(f), g.size() - 2);
    t = f - static_cast<double>(i);
  };
  std::size_t i = 0, j = 0;
  double tx = 0.0, ty = 0.0;
  locate(x, px, i, tx);
  locate(y, py, j, ty);
  const std::size_t ny = y.size();
  const auto& v = field.values;
  return (1 - tx) * (1 - ty) * v[i * ny + j] + tx * (1 - ty) * v[(i + 1) * ny + j] +
         (1 - tx) * ty * v[i * ny + j + 1] + tx * ty * v[(i + 1) * ny + j + 1];
}

std::vector<Complex> FdmField::sample(const std::vector<Point>& points) const {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(at(p[0], p[1]));
  return out;
}

}  // namespace roomgreen
