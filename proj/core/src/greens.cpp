#include "roomgreen/greens.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

std::string fmt_hz(double f) {
  std::ostringstream os;
  os.precision(10);
  os << f << " Hz";
  return os.str();
}

void check_inside(const RoomSpec& room, const Point& x, const char* what) {
  for (std::size_t j = 0; j < room.dimension(); ++j) {
    const double half = 0.5 * room.axes[j].length;
    if (!std::isfinite(x[j]) || std::abs(x[j]) > half * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << what << " coordinate " << x[j] << " on axis " << j << " lies outside [" << -half
         << ", " << half << "]";
      throw InputError(os.str());
    }
  }
}

// Per-axis tables: φ_n(x0)/Λ_n and φ_n at each distinct coordinate.
struct AxisTable {
  std::vector<Complex> k_sq;     // k̂²_n
  std::vector<Complex> src;      // φ_n(x0) / Λ_n
  std::vector<double> coords;    // distinct, sorted
  std::vector<Complex> phi;      // [n * coords.size() + c]
};

AxisTable tabulate(const Basis1D& b, double x0, std::vector<double> coords) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  AxisTable t;
  const std::size_t n = b.entries.size();
  t.k_sq.resize(n);
  t.src.resize(n);
  t.phi.resize(n * coords.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = b.entries[i];
    t.k_sq[i] = e.root.k_hat * e.root.k_hat;
    t.src[i] = eigenfunction_eval(e, b.length(), x0) / e.lambda;
    for (std::size_t c = 0; c < coords.size(); ++c) {
      t.phi[i * coords.size() + c] = eigenfunction_eval(e, b.length(), coords[c]);
    }
  }
  t.coords = std::move(coords);
  return t;
}

std::size_t index_of(const AxisTable& t, double x) {
  return static_cast<std::size_t>(std::lower_bound(t.coords.begin(), t.coords.end(), x) -
                                  t.coords.begin());
}

// 1/(Σ_j k̂²_{n_j} − k²) over the full tensor product, last axis fastest.
std::vector<Complex> inverse_denominators(const std::vector<AxisTable>& tables, double k,
                                          double frequency) {
  const double k2 = k * k;
  std::vector<Complex> sums{Complex{}};
  for (const auto& t : tables) {
    std::vector<Complex> next;
    next.reserve(sums.size() * t.k_sq.size());
    for (Complex s : sums) {
      for (Complex kk : t.k_sq) next.push_back(s + kk);
    }
    sums = std::move(next);
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const Complex d = sums[i] - k2;
    if (std::abs(d) < kDenomTol * k2) {
      std::ostringstream os;
      os << "near-resonant term " << i << " at f = " << fmt_hz(frequency)
         << ": |k_hat^2 - k^2| = " << std::abs(d) << " < " << kDenomTol << " k^2";
      throw NearResonance(os.str());
    }
    sums[i] = 1.0 / d;
  }
  return sums;
}

std::vector<std::vector<double>> coords_per_axis(std::size_t dim, const std::vector<Point>& pts) {
  std::vector<std::vector<double>> out(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    out[j].reserve(pts.size());
    for (const auto& p : pts) out[j].push_back(p[j]);
  }
  return out;
}

FieldGrid make_grid(const RoomSpec& room, const WaveContext& ctx, const RoomBasis& basis,
                    const SolverParams& p) {
  FieldGrid g;
  g.dimension = room.dimension();
  g.frequency = ctx.frequency;
  g.n_max = p.n_max;
  g.room_hash = room.hash();
  g.term_count = basis.term_count();
  g.warnings = basis.warnings();
  return g;
}

void check_finite(const FieldGrid& g) {
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (!std::isfinite(g.values[i].real()) || !std::isfinite(g.values[i].imag())) {
      throw NumericalError("non-finite Green's function value at point " + std::to_string(i) +
                           ", f = " + fmt_hz(g.frequency));
    }
  }
}

}  // namespace

std::size_t RoomBasis::term_count() const noexcept {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& a : axes) n *= a.entries.size();
  return n;
}

std::vector<std::string> RoomBasis::warnings() const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    for (const auto& w : axes[j].warnings) {
      out.push_back("f = " + fmt_hz(frequency) + ", axis " + std::to_string(j) + ": " + w);
    }
  }
  return out;
}

RoomBasis build_room_basis(const RoomSpec& room, const WaveContext& ctx, const SolverParams& p) {
  room.validate();
  p.validate();
  if (p.n_max < 1) throw InputError("green's function evaluation requires n_max >= 1");
  RoomBasis basis;
  basis.frequency = ctx.frequency;
  basis.wavenumber = ctx.wavenumber;
  for (std::size_t j = 0; j < room.dimension(); ++j) {
    try {
      basis.axes.push_back(build_basis(room, j, ctx, p));
    } catch (const CountMismatch& e) {
      throw CountMismatch("f = " + fmt_hz(ctx.frequency) + ", axis " + std::to_string(j) + ": " +
                              e.what(),
                          e.found(), e.expected());
    } catch (const InputError&) {
      throw;
    } catch (const NumericalError& e) {
      throw NumericalError("f = " + fmt_hz(ctx.frequency) + ", axis " + std::to_string(j) + ": " +
                           e.what());
    }
  }
  return basis;
}

std::vector<MultiIndexTerm> multi_index_terms(const RoomBasis& basis) {
  std::vector<MultiIndexTerm> out;
  const std::size_t d = basis.axes.size();
  if (d == 0) return out;
  out.reserve(basis.term_count());
  std::array<std::size_t, 3> idx{};
  for (;;) {
    MultiIndexTerm t;
    t.n = idx;
    t.k_hat_sq = 0.0;
    t.lambda_n = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto& e = basis.axes[j].entries[idx[j]];
      t.k_hat_sq += e.root.k_hat * e.root.k_hat;
      t.lambda_n *= e.lambda;
    }
    out.push_back(t);
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++idx[j] < basis.axes[j].entries.size()) break;
      idx[j] = 0;
      if (j == 0) return out;
    }
  }
}

std::vector<Complex> green_sum(const RoomBasis& basis, const Point& x0,
                               const std::vector<Point>& points) {
  const std::size_t d = basis.axes.size();
  if (d == 0 || d > 3) throw InputError("room dimension must be 1, 2 or 3");
  const auto coords = coords_per_axis(d, points);
  std::vector<AxisTable> tables;
  for (std::size_t j = 0; j < d; ++j) tables.push_back(tabulate(basis.axes[j], x0[j], coords[j]));
  const std::vector<Complex> inv = inverse_denominators(tables, basis.wavenumber, basis.frequency);

  // Fold the source factors into the denominator table once.
  std::vector<Complex> weight = inv;
  {
    std::size_t stride = weight.size();
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t n = tables[j].src.size();
      stride /= n;
      for (std::size_t i = 0; i < weight.size(); ++i) weight[i] *= tables[j].src[(i / stride) % n];
    }
  }

  std::vector<Complex> out(points.size());
  const std::size_t n0 = tables[0].src.size();
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    std::array<std::size_t, 3> c{};
    std::array<std::size_t, 3> nc{};
    for (std::size_t j = 0; j < d; ++j) {
      c[j] = index_of(tables[j], points[pi][j]);
      nc[j] = tables[j].coords.size();
    }
    const auto phi = [&](std::size_t j, std::size_t n) { return tables[j].phi[n * nc[j] + c[j]]; };
    Complex acc{};
    if (d == 1) {
      for (std::size_t a = 0; a < n0; ++a) acc += weight[a] * phi(0, a);
    } else if (d == 2) {
      const std::size_t n1 = tables[1].src.size();
      for (std::size_t a = 0; a < n0; ++a) {
        Complex inner{};
        const Complex* w = &weight[a * n1];
        for (std::size_t b = 0; b < n1; ++b) inner += w[b] * phi(1, b);
        acc += phi(0, a) * inner;
      }
    } else {
      const std::size_t n1 = tables[1].src.size();
      const std::size_t n2 = tables[2].src.size();
      for (std::size_t a = 0; a < n0; ++a) {
        Complex mid{};
        for (std::size_t b = 0; b < n1; ++b) {
          Complex inner{};
          const Complex* w = &weight[(a * n1 + b) * n2];
          for (std::size_t e = 0; e < n2; ++e) inner += w[e] * phi(2, e);
          mid += phi(1, b) * inner;
        }
        acc += phi(0, a) * mid;
      }
    }
    out[pi] = acc;
  }
  return out;
}

std::vector<Complex> green_sum_naive(const RoomBasis& basis, const Point& x0,
                                     const std::vector<Point>& points) {
  const std::size_t d = basis.axes.size();
  if (d == 0 || d > 3) throw InputError("room dimension must be 1, 2 or 3");
  const double k2 = basis.wavenumber * basis.wavenumber;
  const auto terms = multi_index_terms(basis);
  std::vector<Complex> out(points.size());
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    Complex acc{};
    for (const auto& t : terms) {
      const Complex den = t.k_hat_sq - k2;
      if (std::abs(den) < kDenomTol * k2) {
        throw NearResonance("near-resonant term at f = " + fmt_hz(basis.frequency));
      }
      Complex num = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& ax = basis.axes[j];
        const auto& e = ax.entries[t.n[j]];
        num *= eigenfunction_eval(e, ax.length(), points[pi][j]) *
               eigenfunction_eval(e, ax.length(), x0[j]);
      }
      acc += num / (t.lambda_n * den);
    }
    out[pi] = acc;
  }
  return out;
}

FieldGrid green_eval(const RoomSpec& room, const WaveContext& ctx, const Point& x0,
                     const std::vector<Point>& points, const SolverParams& p) {
  room.validate();
  check_inside(room, x0, "source");
  for (const auto& x : points) check_inside(room, x, "receiver");
  const RoomBasis basis = build_room_basis(room, ctx, p);
  FieldGrid g = make_grid(room, ctx, basis, p);
  g.points = points;
  g.values = green_sum(basis, x0, points);
  check_finite(g);
  return g;
}

FieldGrid green_eval_grid(const RoomSpec& room, const WaveContext& ctx, const Point& x0,
                          const std::vector<std::vector<double>>& axis_coords,
                          const SolverParams& p) {
  room.validate();
  const std::size_t d = room.dimension();
  if (axis_coords.size() != d) {
    throw InputError("grid needs one coordinate list per room axis");
  }
  check_inside(room, x0, "source");
  for (std::size_t j = 0; j < d; ++j) {
    if (axis_coords[j].empty()) throw InputError("grid axis " + std::to_string(j) + " is empty");
    const double half = 0.5 * room.axes[j].length;
    for (double x : axis_coords[j]) {
      if (!std::isfinite(x) || std::abs(x) > half * (1.0 + 1e-12)) {
        throw InputError("grid coordinate " + std::to_string(x) + " on axis " +
                         std::to_string(j) + " lies outside the room");
      }
    }
  }
  const RoomBasis basis = build_room_basis(room, ctx, p);
  FieldGrid g = make_grid(room, ctx, basis, p);

  std::vector<AxisTable> tables;
  for (std::size_t j = 0; j < d; ++j) tables.push_back(tabulate(basis.axes[j], x0[j], axis_coords[j]));
  std::vector<Complex> tensor = inverse_denominators(tables, basis.wavenumber, basis.frequency);

  // Contract one axis at a time: shape (…, N_j, …) → (…, P_j, …).
  std::vector<std::size_t> shape(d);
  for (std::size_t j = 0; j < d; ++j) shape[j] = tables[j].src.size();
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t nj = shape[j];
    const std::size_t pj = tables[j].coords.size();
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < j; ++a) outer *= shape[a];
    for (std::size_t a = j + 1; a < d; ++a) inner *= shape[a];
    std::vector<Complex> next(outer * pj * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t n = 0; n < nj; ++n) {
        const Complex* src = &tensor[(o * nj + n) * inner];
        for (std::size_t c = 0; c < pj; ++c) {
          const Complex f = tables[j].src[n] * tables[j].phi[n * pj + c];
          Complex* dst = &next[(o * pj + c) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += f * src[i];
        }
      }
    }
    tensor = std::move(next);
    shape[j] = pj;
  }

  // Map sorted-unique coordinates back to the caller's order.
  std::vector<std::vector<std::size_t>> pos(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (double x : axis_coords[j]) pos[j].push_back(index_of(tables[j], x));
  }
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= axis_coords[j].size();
  g.points.reserve(total);
  g.values.reserve(total);
  std::array<std::size_t, 3> idx{};
  for (std::size_t t = 0; t < total; ++t) {
    Point pt{};
    std::size_t flat = 0;
    for (std::size_t j = 0; j < d; ++j) {
      pt[j] = axis_coords[j][idx[j]];
      flat = flat * shape[j] + pos[j][idx[j]];
    }
    g.points.push_back(pt);
    g.values.push_back(tensor[flat]);
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < axis_coords[j].size()) break;
      idx[j] = 0;
    }
  }
  check_finite(g);
  return g;
}

TransferFunction transfer_function(const RoomSpec& room, const Point& x0, const Point& x,
                                   const std::vector<double>& freqs, const ParamsAt& params,
                                   unsigned jobs) {
  room.validate();
  check_inside(room, x0, "source");
  check_inside(room, x, "receiver");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0.0) || !std::isfinite(freqs[i])) {
      throw InputError("sweep frequencies must be positive and finite");
    }
    if (i > 0 && !(freqs[i] > freqs[i - 1])) {
      throw InputError("sweep frequencies must be strictly increasing");
    }
  }

  const std::size_t n = freqs.size();
  std::vector<std::optional<Complex>> values(n);
  std::vector<std::string> failure(n);
  std::vector<std::vector<std::string>> warn(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const WaveContext ctx = make_wave_context(room, freqs[i]);
        const RoomBasis basis = build_room_basis(room, ctx, params(freqs[i]));
        warn[i] = basis.warnings();
        const Complex v = green_sum(basis, x0, {x})[0];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NumericalError("non-finite value at f = " + fmt_hz(freqs[i]));
        }
        values[i] = v;
      } catch (const InputError&) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(n);
        return;
      } catch (const NumericalError& e) {
        std::string msg = e.what();
        if (msg.find("f = ") == std::string::npos) msg = "f = " + fmt_hz(freqs[i]) + ": " + msg;
        failure[i] = msg;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  TransferFunction tf;
  tf.frequencies = freqs;
  tf.values = std::move(values);
  tf.spl.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (tf.values[i]) {
      tf.spl[i] = spl({*tf.values[i]})[0];
    } else {
      tf.spl[i] = std::numeric_limits<double>::quiet_NaN();
      tf.failures.push_back(failure[i]);
    }
    for (auto& w : warn[i]) tf.warnings.push_back(std::move(w));
  }
  return tf;
}

TransferFunction transfer_function(const RoomSpec& room, const Point& x0, const Point& x,
                                   const std::vector<double>& freqs, const SolverParams& p,
                                   unsigned jobs) {
  return transfer_function(room, x0, x, freqs, [p](double) { return p; }, jobs);
}

std::vector<double> spl(const std::vector<Complex>& values, double p0) {
  if (!(p0 > 0.0)) throw InputError("reference pressure p0 must be positive");
  std::vector<double> out;
  out.reserve(values.size());
  for (Complex v : values) {
    const double a = std::abs(v);
    out.push_back(a == 0.0 ? -std::numeric_limits<double>::infinity() : 20.0 * std::log10(a / p0));
  }
  return out;
}

}  // namespace roomgreen
