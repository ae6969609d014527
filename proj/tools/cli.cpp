#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "csv.hpp"
#include "json.hpp"
#include "roomgreen/config.hpp"
#include "roomgreen/eigensolver.hpp"
#include "roomgreen/errors.hpp"
#include "roomgreen/greens.hpp"
#include "roomgreen/metrics.hpp"
#include "roomgreen/modal.hpp"
#include "roomgreen/modes.hpp"
#include "roomgreen/oracle.hpp"
#include "roomgreen/reference.hpp"

namespace roomgreen::cli {

namespace {

using json = nlohmann::json;

constexpr double kDefaultNmaxFactor = 3.0;
constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string config;
  std::optional<double> freq;
  std::optional<double> f_start, f_stop, f_step;
  std::string source;
  std::string receiver;
  std::optional<int> nmax;
  std::uint64_t seed = 1;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  double epw = 40.0;
  bool corner = false;

  std::optional<int> axis;
  std::string grid;
  std::string points;
  int n_first = 1;
  int n_last = 10;
  std::optional<double> re_min, re_max, im_min, im_max;
  std::vector<std::string> files;
  std::optional<double> exclude_radius;
  std::size_t samples = 0;
  int configs = 10;
};

struct Output {
  std::string csv;
  json meta = json::object();
  int exit_code = 0;
};

std::string num(double v) { return format_number(v); }

std::string fmt_hz(double f) { return "f = " + num(f) + " Hz"; }

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (v.empty()) throw InputError(std::string(what) + " is empty");
  return v;
}

// Conversion between corner-referenced input and room-centred internals.
struct Coords {
  const RoomSpec& room;
  bool corner;

  Point to_centre(const Point& p) const {
    Point q = p;
    if (corner) {
      for (std::size_t j = 0; j < room.dimension(); ++j) q[j] -= 0.5 * room.axes[j].length;
    }
    return q;
  }
  Point from_centre(const Point& p) const {
    Point q = p;
    if (corner) {
      for (std::size_t j = 0; j < room.dimension(); ++j) q[j] += 0.5 * room.axes[j].length;
    }
    return q;
  }
};

Point parse_point(const std::string& text, const RoomSpec& room, const char* what) {
  if (text.empty()) throw InputError(std::string("--") + what + " is required");
  const auto v = parse_list(text, what);
  if (v.size() < room.dimension() || v.size() > 3) {
    throw InputError(std::string("--") + what + " needs " + std::to_string(room.dimension()) +
                     " coordinates");
  }
  Point p{};
  for (std::size_t j = 0; j < v.size(); ++j) p[j] = v[j];
  return p;
}

Config load(const Options& o) {
  if (o.config.empty()) throw InputError("--config is required");
  return load_config(o.config);
}

double need_freq(const Options& o) {
  if (!o.freq) throw InputError("--freq is required");
  if (!(*o.freq > 0.0) || !std::isfinite(*o.freq)) throw InputError("--freq must be positive");
  return *o.freq;
}

SolverParams params_for(const Config& cfg, double f, const Options& o) {
  Config c = cfg;
  if (!c.explicit_n_max && !c.n_max_factor) c.n_max_factor = kDefaultNmaxFactor;
  SolverParams p = params_at(c, f);
  if (o.nmax) {
    if (*o.nmax < 0) throw InputError("--nmax must be >= 0");
    p.n_max = *o.nmax;
  }
  return p;
}

json params_json(const SolverParams& p) {
  return {{"n_max", p.n_max},         {"n_newton", p.n_newton}, {"alpha_newton", p.alpha_newton},
          {"eps_newton", p.eps_newton}, {"dedup_tol", p.dedup_tol}, {"zero_tol", p.zero_tol}};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::vector<std::size_t> axes_of(const RoomSpec& room, const Options& o) {
  if (o.axis) {
    if (*o.axis < 0 || static_cast<std::size_t>(*o.axis) >= room.dimension()) {
      throw InputError("--axis out of range for a " + std::to_string(room.dimension()) + "D room");
    }
    return {static_cast<std::size_t>(*o.axis)};
  }
  std::vector<std::size_t> all(room.dimension());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return all;
}

// Re-throws numerical errors with the frequency and axis in the message.
template <class F>
auto with_context(double f, std::size_t axis, F&& fn) {
  const std::string where = fmt_hz(f) + ", axis " + std::to_string(axis) + ": ";
  try {
    return fn();
  } catch (const CountMismatch& e) {
    throw CountMismatch(where + e.what(), e.found(), e.expected());
  } catch (const InputError&) {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  }
}

std::vector<std::string> coord_names(std::size_t d) {
  const std::vector<std::string> all{"x", "y", "z"};
  return {all.begin(), all.begin() + static_cast<long>(d)};
}

// Per-axis node lists: n points spanning each wall to wall.
std::vector<std::vector<double>> grid_axes(const RoomSpec& room, const std::string& spec,
                                           std::size_t fallback) {
  std::vector<std::size_t> counts(room.dimension(), fallback);
  if (!spec.empty()) {
    const auto v = parse_list(spec, "grid");
    if (v.size() != 1 && v.size() != room.dimension()) {
      throw InputError("--grid needs 1 or " + std::to_string(room.dimension()) + " counts");
    }
    for (std::size_t j = 0; j < counts.size(); ++j) {
      const double n = v.size() == 1 ? v[0] : v[j];
      if (!(n >= 2) || n != std::floor(n) || n > 1e6) throw InputError("--grid counts must be integers >= 2");
      counts[j] = static_cast<std::size_t>(n);
    }
  }
  std::vector<std::vector<double>> axes(room.dimension());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double l = room.axes[j].length;
    for (std::size_t i = 0; i < counts[j]; ++i) {
      axes[j].push_back(i + 1 == counts[j] ? 0.5 * l
                                           : -0.5 * l + l * static_cast<double>(i) /
                                                            static_cast<double>(counts[j] - 1));
    }
  }
  return axes;
}

std::vector<Point> read_points(const std::string& path, const RoomSpec& room, const Coords& cc) {
  const CsvTable t = read_csv(path);
  const auto names = coord_names(room.dimension());
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < names.size(); ++j) cols.push_back(t.has(names[j]) ? t.column(names[j]) : j);
  if (t.header.size() < names.size()) throw InputError(path + ": too few coordinate columns");
  std::vector<Point> pts;
  for (const auto& r : t.rows) {
    Point p{};
    for (std::size_t j = 0; j < cols.size(); ++j) p[j] = r[cols[j]];
    pts.push_back(cc.to_centre(p));
  }
  if (pts.empty()) throw InputError(path + " has no points");
  return pts;
}

std::string field_csv(const std::vector<Point>& pts, const std::vector<Complex>& values,
                      std::size_t d, const Coords& cc) {
  auto header = coord_names(d);
  header.push_back("re_g");
  header.push_back("im_g");
  CsvWriter w(header);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point p = cc.from_centre(pts[i]);
    std::vector<std::string> cells;
    for (std::size_t j = 0; j < d; ++j) cells.push_back(num(p[j]));
    cells.push_back(num(values[i].real()));
    cells.push_back(num(values[i].imag()));
    w.row(cells);
  }
  return w.text();
}

void base_meta(Output& o, const Config& cfg) {
  o.meta["config"] = json::parse(cfg.echo);
  o.meta["room_hash"] = cfg.room.hash();
}

// ---------------------------------------------------------------- commands

Output cmd_eigenvalues(const Options& o) {
  const Config cfg = load(o);
  const double f = need_freq(o);
  const SolverParams p = params_for(cfg, f, o);
  const WaveContext ctx = make_wave_context(cfg.room, f);
  Output out;
  base_meta(out, cfg);
  out.meta["frequency_hz"] = f;
  out.meta["solver"] = params_json(p);
  CsvWriter w({"axis", "index", "re_q", "im_q", "re_k", "im_k", "residual", "scaled_residual", "group"});
  json axes = json::array();
  json warnings = json::array();
  for (std::size_t j : axes_of(cfg.room, o)) {
    const GammaPair g = make_gamma(cfg.room.axes[j], ctx);
    const RootSet rs = with_context(f, j, [&] { return solve_axis(g, p); });
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      const auto& r = rs.roots[i];
      w.row({std::to_string(j), std::to_string(i), num(r.q_hat.real()), num(r.q_hat.imag()),
             num(r.k_hat.real()), num(r.k_hat.imag()), num(r.residual), num(r.scaled_residual),
             std::string(to_string(r.group))});
    }
    axes.push_back({{"axis", j},
                    {"gamma_minus", complex_json(g.minus)},
                    {"gamma_plus", complex_json(g.plus)},
                    {"a12", g.a12},
                    {"a11p", g.a11p},
                    {"expected", rs.expected},
                    {"counted", rs.counted},
                    {"fallback_used", rs.fallback_used},
                    {"count_from_oracle", rs.count_from_oracle}});
    for (const auto& s : rs.warnings) warnings.push_back(fmt_hz(f) + ", axis " + std::to_string(j) + ": " + s);
  }
  out.meta["axes"] = axes;
  out.meta["warnings"] = warnings;
  out.csv = w.text();
  return out;
}

Output cmd_roots_oracle(const Options& o) {
  const Config cfg = load(o);
  const double f = need_freq(o);
  const SolverParams p = params_for(cfg, f, o);
  const WaveContext ctx = make_wave_context(cfg.room, f);
  const std::size_t j = axes_of(cfg.room, o).front();
  const GammaPair g = make_gamma(cfg.room.axes[j], ctx);
  Output out;
  base_meta(out, cfg);
  out.meta["frequency_hz"] = f;
  out.meta["axis"] = j;
  const bool region_given = o.re_min || o.re_max || o.im_min || o.im_max;
  std::vector<Complex> roots;
  json clusters = json::array();
  if (region_given) {
    if (!(o.re_min && o.re_max && o.im_min && o.im_max)) {
      throw InputError("--re-min, --re-max, --im-min and --im-max must be given together");
    }
    const oracle::SearchRegion region{*o.re_min, *o.re_max, *o.im_min, *o.im_max};
    const auto e = with_context(f, j, [&] { return oracle::enumerate_roots(region, g); });
    roots = e.roots;
    out.meta["region"] = {*o.re_min, *o.re_max, *o.im_min, *o.im_max};
    out.meta["winding"] = e.winding;
    for (const auto& c : e.clusters) {
      clusters.push_back({{"center", complex_json(c.center)}, {"multiplicity", c.multiplicity}});
    }
  } else {
    const auto d = with_context(f, j, [&] { return oracle::disk_roots(g, p.n_max, p.zero_tol); });
    roots = d.roots;
    out.meta["disk_radius"] = p.n_max + 0.5;
    out.meta["unresolved"] = d.unresolved;
    out.meta["expected_count"] = expected_count(p.n_max, g);
  }
  out.meta["clusters"] = clusters;
  out.meta["count"] = roots.size();
  CsvWriter w({"index", "re_q", "im_q", "scaled_residual"});
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double sr = scaled_residual(ComplexL{roots[i].real(), roots[i].imag()}, g);
    w.row({std::to_string(i), num(roots[i].real()), num(roots[i].imag()), num(sr)});
  }
  out.csv = w.text();
  return out;
}

Output cmd_basis(const Options& o) {
  const Config cfg = load(o);
  const double f = need_freq(o);
  const SolverParams p = params_for(cfg, f, o);
  const WaveContext ctx = make_wave_context(cfg.room, f);
  Output out;
  base_meta(out, cfg);
  out.meta["frequency_hz"] = f;
  out.meta["solver"] = params_json(p);
  CsvWriter w({"axis", "index", "re_q", "im_q", "re_b", "im_b", "re_lambda", "im_lambda", "group",
               "near_defective"});
  json warnings = json::array();
  json axes = json::array();
  for (std::size_t j : axes_of(cfg.room, o)) {
    const Basis1D b = with_context(f, j, [&] { return build_basis(cfg.room, j, ctx, p); });
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      const auto& e = b.entries[i];
      w.row({std::to_string(j), std::to_string(i), num(e.root.q_hat.real()), num(e.root.q_hat.imag()),
             num(e.b_hat.real()), num(e.b_hat.imag()), num(e.lambda.real()), num(e.lambda.imag()),
             std::string(to_string(e.root.group)), e.near_defective ? "1" : "0"});
    }
    axes.push_back({{"axis", j},
                    {"entries", b.entries.size()},
                    {"constant_mode", b.has_constant_mode},
                    {"fallback_used", b.roots.fallback_used}});
    for (const auto& s : b.warnings) warnings.push_back(fmt_hz(f) + ", axis " + std::to_string(j) + ": " + s);
  }
  out.meta["axes"] = axes;
  out.meta["warnings"] = warnings;
  out.csv = w.text();
  return out;
}

Output cmd_green(const Options& o) {
  const Config cfg = load(o);
  const double f = need_freq(o);
  const SolverParams p = params_for(cfg, f, o);
  const WaveContext ctx = make_wave_context(cfg.room, f);
  const Coords cc{cfg.room, o.corner};
  const Point x0 = cc.to_centre(parse_point(o.source, cfg.room, "source"));
  FieldGrid g;
  if (!o.points.empty()) {
    if (!o.grid.empty()) throw InputError("--grid and --points are exclusive");
    g = green_eval(cfg.room, ctx, x0, read_points(o.points, cfg.room, cc), p);
  } else {
    g = green_eval_grid(cfg.room, ctx, x0, grid_axes(cfg.room, o.grid, 21), p);
  }
  Output out;
  base_meta(out, cfg);
  out.meta["frequency_hz"] = f;
  out.meta["solver"] = params_json(p);
  out.meta["source"] = {o.source};
  out.meta["corner_coords"] = o.corner;
  out.meta["term_count"] = g.term_count;
  out.meta["points"] = g.points.size();
  out.meta["warnings"] = g.warnings;
  out.csv = field_csv(g.points, g.values, cfg.room.dimension(), cc);
  return out;
}

std::vector<double> sweep(const Options& o) {
  if (o.freq) return {need_freq(o)};
  if (!o.f_start || !o.f_stop || !o.f_step) {
    throw InputError("--f-start, --f-stop and --f-step (or --freq) are required");
  }
  const double a = *o.f_start, b = *o.f_stop, h = *o.f_step;
  if (!(a > 0.0) || !(b >= a) || !(h > 0.0)) {
    throw InputError("sweep needs 0 < f-start <= f-stop and f-step > 0");
  }
  const double count = std::floor((b - a) / h + 1e-9) + 1.0;
  if (count > 1e7) throw InputError("sweep has too many frequencies");
  std::vector<double> f;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) f.push_back(a + h * static_cast<double>(i));
  return f;
}

Output cmd_tf(const Options& o) {
  const Config cfg = load(o);
  const Coords cc{cfg.room, o.corner};
  const Point x0 = cc.to_centre(parse_point(o.source, cfg.room, "source"));
  const Point x = cc.to_centre(parse_point(o.receiver, cfg.room, "receiver"));
  const auto freqs = sweep(o);
  // One truncation order for the whole sweep, resolved at the top frequency;
  // a per-frequency order steps the response wherever it changes.
  const SolverParams params = params_for(cfg, freqs.back(), o);
  const TransferFunction tf = transfer_function(cfg.room, x0, x, freqs, params, o.jobs);
  CsvWriter w({"f", "re_g", "im_g", "spl"});
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const auto& v = tf.values[i];
    w.row({num(freqs[i]), v ? num(v->real()) : "nan", v ? num(v->imag()) : "nan", num(tf.spl[i])});
  }
  Output out;
  base_meta(out, cfg);
  out.meta["frequencies"] = {{"start", freqs.front()}, {"stop", freqs.back()}, {"count", freqs.size()}};
  out.meta["solver"] = params_json(params);
  out.meta["n_max_rule"] = o.nmax ? "fixed" : (cfg.explicit_n_max ? "config" : "factor at top frequency");
  out.meta["source"] = o.source;
  out.meta["receiver"] = o.receiver;
  out.meta["corner_coords"] = o.corner;
  out.meta["warnings"] = tf.warnings;
  out.meta["failures"] = tf.failures;
  out.csv = w.text();
  if (!tf.failures.empty()) out.exit_code = 2;
  return out;
}

Output cmd_modes(const Options& o) {
  const Config cfg = load(o);
  const std::size_t j = axes_of(cfg.room, o).front();
  const auto& axis = cfg.room.axes[j];
  const double c = cfg.room.speed_of_sound;
  const auto fn = mode_frequencies(axis, c, o.n_first, o.n_last);
  const Complex bm = axis.beta_minus.at(0.0);
  const Complex bp = axis.beta_plus.at(0.0);
  CsvWriter w({"n", "re_q", "im_q", "f_hz", "delta_f_hz"});
  for (int n = o.n_first; n <= o.n_last; ++n) {
    const ModeValue m = mode_q(n, bm, bp);
    const double f = fn[static_cast<std::size_t>(n - o.n_first)];
    w.row({std::to_string(n), num(m.re_part), num(m.im_part), num(f), num(f - n * c / (2.0 * axis.length))});
  }
  Output out;
  base_meta(out, cfg);
  out.meta["axis"] = j;
  out.meta["reflection"] = {complex_json(reflection_coefficient(bm)), complex_json(reflection_coefficient(bp))};
  out.csv = w.text();
  return out;
}

Output cmd_reference(const Options& o) {
  const Config cfg = load(o);
  const double f = need_freq(o);
  const WaveContext ctx = make_wave_context(cfg.room, f);
  const Coords cc{cfg.room, o.corner};
  const Point x0 = cc.to_centre(parse_point(o.source, cfg.room, "source"));
  Output out;
  base_meta(out, cfg);
  out.meta["frequency_hz"] = f;
  out.meta["corner_coords"] = o.corner;
  std::vector<Point> pts;
  std::vector<Complex> values;
  if (cfg.room.dimension() == 1) {
    if (!o.points.empty()) {
      pts = read_points(o.points, cfg.room, cc);
    } else {
      const auto axes = grid_axes(cfg.room, o.grid, 201);
      for (double x : axes[0]) pts.push_back({x, 0.0, 0.0});
    }
    for (const auto& p : pts) {
      values.push_back(green_1d_closed_form(cfg.room.axes[0], ctx, x0[0], p[0]));
    }
    out.meta["method"] = "closed_form_1d";
  } else if (cfg.room.dimension() == 2) {
    if (!o.grid.empty()) throw InputError("--grid is not used by the 2D reference; the grid follows --epw");
    const FdmField fdm = fdm_green_2d(cfg.room, ctx, x0, o.epw);
    if (!o.points.empty()) {
      pts = read_points(o.points, cfg.room, cc);
      values = fdm.sample(pts);
    } else {
      pts = fdm.field.points;
      values = fdm.field.values;
    }
    out.meta["method"] = "fdm_2d";
    out.meta["epw"] = o.epw;
    out.meta["grid"] = {fdm.x.size(), fdm.y.size()};
  } else {
    throw InputError("no reference solver for 3D rooms");
  }
  out.csv = field_csv(pts, values, cfg.room.dimension(), cc);
  return out;
}

Output cmd_compare(const Options& o) {
  if (o.files.size() != 2) throw InputError("compare needs two CSV files: MODEL REFERENCE");
  const CsvTable a = read_csv(o.files[0]);
  const CsvTable b = read_csv(o.files[1]);
  if (a.rows.size() != b.rows.size()) throw InputError("compare: files have different row counts");
  const bool is_tf = a.has("f") && b.has("f");
  std::vector<std::string> coords;
  if (!is_tf) {
    for (const auto& n : coord_names(3)) {
      if (a.has(n) && b.has(n)) coords.push_back(n);
    }
  }
  const std::string key_col = is_tf ? "f" : "";
  std::optional<Point> source;
  if (o.exclude_radius) {
    if (is_tf) throw InputError("--exclude-radius applies to field grids only");
    const auto v = parse_list(o.source, "source");
    Point p{};
    for (std::size_t j = 0; j < std::min<std::size_t>(3, v.size()); ++j) p[j] = v[j];
    source = p;
  }

  std::vector<std::size_t> keep;
  std::size_t dropped_nan = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto match = [&](const std::string& n) {
      const double x = a.rows[i][a.column(n)];
      const double y = b.rows[i][b.column(n)];
      return std::abs(x - y) <= 1e-9 * (1.0 + std::abs(y));
    };
    if (is_tf && !match("f")) throw InputError("compare: frequency mismatch at row " + std::to_string(i + 1));
    for (const auto& n : coords) {
      if (!match(n)) throw InputError("compare: coordinate mismatch at row " + std::to_string(i + 1));
    }
    if (source) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < coords.size(); ++j) {
        const double dx = a.rows[i][a.column(coords[j])] - (*source)[j];
        d2 += dx * dx;
      }
      if (std::sqrt(d2) < *o.exclude_radius) continue;
    }
    const double v[4] = {a.rows[i][a.column("re_g")], a.rows[i][a.column("im_g")],
                         b.rows[i][b.column("re_g")], b.rows[i][b.column("im_g")]};
    if (std::any_of(std::begin(v), std::end(v), [](double x) { return !std::isfinite(x); })) {
      ++dropped_nan;
      continue;
    }
    keep.push_back(i);
  }
  if (o.samples > 0 && o.samples < keep.size()) {
    std::mt19937_64 rng(o.seed);
    std::vector<std::size_t> pick;
    std::sample(keep.begin(), keep.end(), std::back_inserter(pick), o.samples, rng);
    keep = std::move(pick);
  }
  std::vector<Complex> pa, pb;
  for (std::size_t i : keep) {
    pa.emplace_back(a.rows[i][a.column("re_g")], a.rows[i][a.column("im_g")]);
    pb.emplace_back(b.rows[i][b.column("re_g")], b.rows[i][b.column("im_g")]);
  }
  if (pa.empty()) throw InputError("compare: no rows left to compare");
  const double e = l2_relative_error(pa, pb);
  const double fr = frac(pa, pb);
  CsvWriter w({"rows", "l2_relative_error", "frac"});
  w.row({std::to_string(pa.size()), num(e), num(fr)});
  Output out;
  out.meta["kind"] = is_tf ? "transfer_function" : "field";
  out.meta["files"] = o.files;
  out.meta["rows_compared"] = pa.size();
  out.meta["rows_dropped_nonfinite"] = dropped_nan;
  out.meta["seed"] = o.seed;
  out.csv = w.text();
  return out;
}

// ---------------------------------------------------------------- selfcheck

AxisBoundary make_axis(double l, Complex bm, Complex bp) {
  return {l, Admittance::constant(bm), Admittance::constant(bp)};
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

Check check_rigid() {
  RoomSpec room;
  room.axes = {make_axis(1.0, 0.0, 0.0)};
  SolverParams p;
  p.n_max = 8;
  const Basis1D b = build_basis(room, 0, make_wave_context(room, 1000.0), p);
  double worst = 0.0;
  bool ok = b.has_constant_mode && b.entries.size() == 9 && b.roots.expected == 8;
  for (std::size_t i = 0; i < b.entries.size() && ok; ++i) {
    const auto& e = b.entries[i];
    worst = std::max(worst, std::abs(e.root.q_hat - static_cast<double>(i)));
    const double want = i == 0 ? 1.0 : 0.5;
    ok = ok && std::abs(e.lambda - want) < 1e-12;
  }
  ok = ok && worst < 1e-12;
  return {"rigid-wall roots, normalization and degenerate count", ok,
          "max |q - n| = " + num(worst) + ", entries = " + std::to_string(b.entries.size())};
}

Check check_oracle(std::uint64_t seed, int configs) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(0.0, 5.0), ph(-kPi, kPi), kl(1.0, 100.0);
  int bad = 0;
  double worst = 0.0;
  for (int c = 0; c < configs; ++c) {
    const Complex bm = std::polar(mod(rng), ph(rng));
    const Complex bp = std::polar(mod(rng), ph(rng));
    const double k = kl(rng);
    const GammaPair g = make_gamma(bm * k, bp * k);
    SolverParams p;
    p.n_max = 10;
    try {
      const RootSet rs = solve_axis(g, p);
      std::vector<Complex> a;
      for (const auto& r : rs.roots) {
        if (std::abs(r.q_hat) <= p.n_max + 0.5) a.push_back(r.q_hat);
      }
      const auto d = oracle::disk_roots(g, p.n_max, p.zero_tol);
      const auto cmp = oracle::compare_roots(a, d.roots, 1e-8);
      worst = std::max(worst, cmp.max_distance);
      if (cmp.only_in_a || cmp.only_in_b || d.unresolved) ++bad;
    } catch (const NumericalError&) {
      ++bad;
    }
  }
  return {"solver root sets equal winding-oracle enumeration", bad == 0,
          std::to_string(bad) + "/" + std::to_string(configs) + " mismatched, max distance " + num(worst)};
}

Check check_closed_form() {
  RoomSpec room;
  room.axes = {make_axis(1.0, {0.1, 0.1}, {0.2, 0.07})};
  const WaveContext ctx = make_wave_context(room, 1000.0);
  const double x0 = 0.1;
  const double lambda = room.speed_of_sound / ctx.frequency;
  std::vector<Point> pts;
  std::vector<Complex> ref;
  for (int i = 0; i < 200; ++i) {
    const double x = -0.5 + i / 199.0;
    if (std::abs(x - x0) < lambda / 4) continue;
    pts.push_back({x, 0.0, 0.0});
    ref.push_back(green_1d_closed_form(room.axes[0], ctx, x0, x));
  }
  SolverParams p;
  p.n_max = static_cast<int>(std::ceil(20 * ctx.q[0]));
  const double e = l2_relative_error(green_eval(room, ctx, {x0, 0, 0}, pts, p).values, ref);
  return {"1D series matches closed form", e < 1e-2, "relative L2 = " + num(e)};
}

Check check_reciprocity() {
  RoomSpec room;
  room.axes = {make_axis(1.0, {0.1, -0.03}, 1.0 / 6.0), make_axis(1.4, {0.08, 0.03}, {0.125, 0.125})};
  const WaveContext ctx = make_wave_context(room, 300.0);
  SolverParams p;
  p.n_max = 8;
  const RoomBasis b = build_room_basis(room, ctx, p);
  const Point a{0.2, 0.2, 0}, c{-0.3, 0.1, 0};
  const Complex g1 = green_sum(b, a, {c})[0];
  const Complex g2 = green_sum(b, c, {a})[0];
  const double rel = std::abs(g1 - g2) / std::abs(g1);
  return {"2D reciprocity G(x|x0) = G(x0|x)", rel < 1e-12, "relative difference " + num(rel)};
}

Check check_modes() {
  const auto f = mode_frequencies(make_axis(1.0, 0.0, 0.0), 343.0, 1, 3);
  const bool ok = std::abs(f[0] - 171.5) < 1e-9 && std::abs(f[1] - 343.0) < 1e-9 &&
                  std::abs(f[2] - 514.5) < 1e-9;
  return {"rigid mode frequencies n c / 2l", ok, num(f[0]) + ", " + num(f[1]) + ", " + num(f[2])};
}

Output cmd_selfcheck(const Options& o, std::ostream& os) {
  std::vector<Check> checks;
  const auto guard = [&](const std::string& name, auto fn) {
    try {
      checks.push_back(fn());
    } catch (const std::exception& e) {
      checks.push_back({name, false, e.what()});
    }
  };
  guard("rigid", check_rigid);
  guard("oracle", [&] { return check_oracle(o.seed, o.configs); });
  guard("closed-form", check_closed_form);
  guard("reciprocity", check_reciprocity);
  guard("modes", check_modes);
  std::size_t passed = 0;
  CsvWriter w({"check", "result", "detail"});
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    passed += c.pass;
    w.row({'"' + c.name + '"', c.pass ? "PASS" : "FAIL", '"' + c.detail + '"'});
  }
  os << "selfcheck: " << passed << "/" << checks.size() << " passed\n";
  Output out;
  out.meta["seed"] = o.seed;
  out.meta["passed"] = passed;
  out.meta["total"] = checks.size();
  out.csv = o.out.empty() ? std::string{} : w.text();
  out.exit_code = passed == checks.size() ? 0 : 2;
  return out;
}

// ---------------------------------------------------------------- plumbing

void write_outputs(const Options& o, Output& out, const std::vector<std::string>& args,
                   const std::string& command, double seconds, std::ostream& os) {
  if (o.out.empty()) {
    os << out.csv;
    return;
  }
  {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write " + o.out);
    f << out.csv;
  }
  out.meta["tool"] = {{"name", "roomgreen"}, {"version", kVersion}};
  out.meta["command"] = command;
  out.meta["argv"] = args;
  out.meta["seed"] = o.seed;
  out.meta["jobs"] = o.jobs;
  out.meta["timings"] = {{"wall_seconds", seconds}};
  if (!out.meta.contains("warnings")) out.meta["warnings"] = json::array();
  std::ofstream m(o.out + ".meta.json", std::ios::binary);
  if (!m) throw InputError("cannot write " + o.out + ".meta.json");
  m << out.meta.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Eigenvalues, Green's functions and transfer functions of rectangular rooms "
               "with complex wall admittance",
               "roomgreen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "room configuration (JSON)")->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "output CSV; a .meta.json sidecar is written next to it");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    s->add_flag("--corner-coords", o.corner, "coordinates are measured from the room corner");
  };
  const auto freq = [&](CLI::App* s) { s->add_option("--freq", o.freq, "frequency (Hz)"); };
  const auto nmax = [&](CLI::App* s) { s->add_option("--nmax", o.nmax, "truncation order"); };
  const auto axis = [&](CLI::App* s) { s->add_option("--axis", o.axis, "axis index (0-based)"); };
  const auto source = [&](CLI::App* s) { s->add_option("--source", o.source, "source point x,y,z"); };
  const auto points = [&](CLI::App* s) {
    s->add_option("--grid", o.grid, "points per axis, n or nx,ny[,nz]");
    s->add_option("--points", o.points, "CSV file of evaluation points (x,y,z columns)")
        ->check(CLI::ExistingFile);
  };

  auto* eig = app.add_subcommand("eigenvalues", "eigenvalue roots q per axis");
  common(eig), freq(eig), nmax(eig), axis(eig);

  auto* orc = app.add_subcommand("roots-oracle", "argument-principle root enumeration");
  common(orc), freq(orc), nmax(orc), axis(orc);
  orc->add_option("--re-min", o.re_min, "search rectangle, lower Re q");
  orc->add_option("--re-max", o.re_max, "search rectangle, upper Re q");
  orc->add_option("--im-min", o.im_min, "search rectangle, lower Im q");
  orc->add_option("--im-max", o.im_max, "search rectangle, upper Im q");

  auto* bas = app.add_subcommand("basis", "eigenfunction basis per axis");
  common(bas), freq(bas), nmax(bas), axis(bas);

  auto* grn = app.add_subcommand("green", "Green's function on a grid or point list");
  common(grn), freq(grn), nmax(grn), source(grn), points(grn);

  auto* tf = app.add_subcommand("tf", "transfer function sweep");
  common(tf), freq(tf), nmax(tf), source(tf);
  tf->add_option("--receiver", o.receiver, "receiver point x,y,z");
  tf->add_option("--f-start", o.f_start, "first frequency (Hz)");
  tf->add_option("--f-stop", o.f_stop, "last frequency (Hz)");
  tf->add_option("--f-step", o.f_step, "frequency step (Hz)");

  auto* mod = app.add_subcommand("modes", "closed-form resonance modes of one axis");
  common(mod), axis(mod);
  mod->add_option("--n-first", o.n_first, "first mode index");
  mod->add_option("--n-last", o.n_last, "last mode index");

  auto* ref = app.add_subcommand("reference", "closed-form (1D) or finite-difference (2D) reference");
  common(ref), freq(ref), source(ref), points(ref);
  ref->add_option("--epw", o.epw, "grid points per wavelength (2D)");

  auto* cmp = app.add_subcommand("compare", "relative L2 error and FRAC between two CSV files");
  common(cmp), source(cmp);
  cmp->add_option("files", o.files, "MODEL.csv REFERENCE.csv")->expected(2);
  cmp->add_option("--exclude-radius", o.exclude_radius, "drop points within this distance of --source");
  cmp->add_option("--samples", o.samples, "compare a seeded random subset of rows");

  auto* chk = app.add_subcommand("selfcheck", "run built-in consistency checks");
  common(chk);
  chk->add_option("--configs", o.configs, "random configurations for the oracle check");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string command;
  try {
    Output res;
    if (eig->parsed()) command = "eigenvalues", res = cmd_eigenvalues(o);
    else if (orc->parsed()) command = "roots-oracle", res = cmd_roots_oracle(o);
    else if (bas->parsed()) command = "basis", res = cmd_basis(o);
    else if (grn->parsed()) command = "green", res = cmd_green(o);
    else if (tf->parsed()) command = "tf", res = cmd_tf(o);
    else if (mod->parsed()) command = "modes", res = cmd_modes(o);
    else if (ref->parsed()) command = "reference", res = cmd_reference(o);
    else if (cmp->parsed()) command = "compare", res = cmd_compare(o);
    else command = "selfcheck", res = cmd_selfcheck(o, out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(o, res, args, command, secs, out);
    if (res.meta.contains("failures")) {
      for (const auto& f : res.meta["failures"]) err << "error: " << f.get<std::string>() << '\n';
    }
    return res.exit_code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, out, err);
}

}  // namespace roomgreen::cli
