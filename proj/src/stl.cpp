#include "stl.hpp"

#include <algorithm>
#include <cmath>

#include "textio.hpp"

namespace agewatch {

namespace {

double tricube(double u) {
  if (u >= 1.0) return 0.0;
  double t = 1.0 - u * u * u;
  return t * t * t;
}

int next_odd_at_least(double x) {
  int v = static_cast<int>(std::ceil(x));
  if (v < 1) v = 1;
  return (v % 2 == 0) ? v + 1 : v;
}

int largest_odd_at_most(int x) {
  if (x < 1) return 1;
  return (x % 2 == 0) ? x - 1 : x;
}

// Local fit at position x (possibly outside [0, n-1], used when extending
// cycle subseries by one cycle on each side). `rw` optionally scales the
// tricube weights for the robustness pass.
double loess_at(const std::vector<double>& y, const double* rw, int span, int degree,
                double x) {
  int n = static_cast<int>(y.size());
  int q = std::min(span, n);
  int start = static_cast<int>(std::lround(x)) - (q - 1) / 2;
  start = std::clamp(start, 0, n - q);

  double h = std::max(x - start, static_cast<double>(start + q - 1) - x);
  if (h <= 0.0) return y[start];

  double sw = 0.0, swx = 0.0, swy = 0.0;
  double w[2048];
  bool heap = q > 2048;
  std::vector<double> wbig;
  double* wp = w;
  if (heap) {
    wbig.resize(static_cast<std::size_t>(q));
    wp = wbig.data();
  }
  for (int j = 0; j < q; ++j) {
    double d = std::abs(static_cast<double>(start + j) - x) / h;
    double wj = tricube(d);
    if (rw) wj *= rw[start + j];
    wp[j] = wj;
    sw += wj;
    swx += wj * (start + j);
    swy += wj * y[static_cast<std::size_t>(start + j)];
  }
  if (sw <= 0.0) {
    // Every neighbor downweighted to zero; refit ignoring robustness.
    return loess_at(y, nullptr, span, degree, x);
  }
  double mean = swy / sw;
  if (degree == 0) return mean;

  double xbar = swx / sw;
  double sxx = 0.0, sxy = 0.0;
  for (int j = 0; j < q; ++j) {
    double dx = (start + j) - xbar;
    sxx += wp[j] * dx * dx;
    sxy += wp[j] * dx * (y[static_cast<std::size_t>(start + j)] - mean);
  }
  if (sxx <= 1e-9 * h * h) return mean;
  return mean + (sxy / sxx) * (x - xbar);
}

void validate_span(int span, int degree, int n) {
  if (span < 1 || span % 2 == 0) {
    throw Error(errc::invalid_span, "span " + std::to_string(span) + " must be odd");
  }
  if (span < degree + 1) {
    throw Error(errc::invalid_span,
                "span " + std::to_string(span) + " too small for degree " +
                    std::to_string(degree));
  }
  if (span > n) {
    throw Error(errc::invalid_span, "span " + std::to_string(span) + " exceeds length " +
                                        std::to_string(n));
  }
}

std::vector<double> loess_full(const std::vector<double>& y, const double* rw, int span,
                               int degree) {
  int n = static_cast<int>(y.size());
  int q = std::min(span, n);
  std::vector<double> out(static_cast<std::size_t>(n));
  int half = (q - 1) / 2;

  if (!rw && q >= 3) {
    // Interior windows are symmetric, so the degree-1 slope term vanishes at
    // the center and the fit reduces to one fixed normalized kernel.
    std::vector<double> kernel(static_cast<std::size_t>(q));
    double sw = 0.0;
    for (int j = 0; j < q; ++j) {
      kernel[static_cast<std::size_t>(j)] = tricube(std::abs(j - half) / static_cast<double>(half));
      sw += kernel[static_cast<std::size_t>(j)];
    }
    for (auto& k : kernel) k /= sw;
    for (int i = 0; i < n; ++i) {
      if (i < half || i >= n - half) {
        out[static_cast<std::size_t>(i)] = loess_at(y, rw, q, degree, i);
      } else {
        double acc = 0.0;
        for (int j = 0; j < q; ++j) {
          acc += kernel[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i - half + j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
      }
    }
    return out;
  }

  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = loess_at(y, rw, q, degree, i);
  }
  return out;
}

// Centered moving average; output shrinks by window-1.
std::vector<double> moving_average(const std::vector<double>& x, int window) {
  std::size_t w = static_cast<std::size_t>(window);
  std::vector<double> out(x.size() - w + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < w; ++i) acc += x[i];
  out[0] = acc / window;
  for (std::size_t i = w; i < x.size(); ++i) {
    acc += x[i] - x[i - w];
    out[i - w + 1] = acc / window;
  }
  return out;
}

}  // namespace

std::vector<double> loess_smooth(const std::vector<double>& values, int span, int degree) {
  if (degree != 0 && degree != 1) {
    throw Error(errc::invalid_argument, "degree must be 0 or 1");
  }
  validate_span(span, degree, static_cast<int>(values.size()));
  return loess_full(values, nullptr, span, degree);
}

Decomposition stl_decompose(const std::vector<double>& values, int period,
                            const StlConfig& cfg) {
  int n = static_cast<int>(values.size());
  if (period < 2) throw Error(errc::invalid_period, "period " + std::to_string(period));
  if (n < 2 * period) {
    throw Error(errc::series_too_short, std::to_string(n) + " samples < 2*period");
  }

  int s_span = cfg.seasonal_span;
  validate_span(s_span, cfg.seasonal_degree, n);  // cycle units; n bounds it loosely
  int t_span = cfg.trend_span;
  if (t_span == 0) {
    t_span = next_odd_at_least(1.5 * period / (1.0 - 1.5 / s_span));
    t_span = std::min(t_span, largest_odd_at_most(n));
  }
  validate_span(t_span, cfg.trend_degree, n);
  int l_span = cfg.lowpass_span;
  if (l_span == 0) l_span = std::min(next_odd_at_least(period), largest_odd_at_most(n));
  validate_span(l_span, cfg.lowpass_degree, n);
  if (cfg.inner_iterations < 1 || cfg.outer_iterations < 0) {
    throw Error(errc::invalid_argument, "iteration counts");
  }

  std::size_t un = static_cast<std::size_t>(n);
  std::size_t up = static_cast<std::size_t>(period);
  std::vector<double> trend(un, 0.0), seasonal(un, 0.0);
  std::vector<double> rw(un, 1.0);
  bool have_rw = false;

  for (int outer = 0; outer <= cfg.outer_iterations; ++outer) {
    for (int inner = 0; inner < cfg.inner_iterations; ++inner) {
      std::vector<double> detrended(un);
      for (std::size_t i = 0; i < un; ++i) detrended[i] = values[i] - trend[i];

      // Smooth each cycle subseries and extend it one cycle on both sides;
      // extended[x] corresponds to original index x - period.
      std::vector<double> extended(un + 2 * up);
      std::vector<double> sub, subrw;
      for (std::size_t k = 0; k < up; ++k) {
        sub.clear();
        subrw.clear();
        for (std::size_t i = k; i < un; i += up) {
          sub.push_back(detrended[i]);
          subrw.push_back(rw[i]);
        }
        int m = static_cast<int>(sub.size());
        int eff = std::min(s_span, largest_odd_at_most(m));
        const double* rwp = have_rw ? subrw.data() : nullptr;
        for (int j = -1; j <= m; ++j) {
          extended[static_cast<std::size_t>(j + 1) * up + k] =
              loess_at(sub, rwp, eff, cfg.seasonal_degree, j);
        }
      }

      auto low = moving_average(moving_average(moving_average(extended, period), period), 3);
      low = loess_full(low, nullptr, l_span, cfg.lowpass_degree);

      for (std::size_t i = 0; i < un; ++i) seasonal[i] = extended[i + up] - low[i];

      std::vector<double> deseasonalized(un);
      for (std::size_t i = 0; i < un; ++i) deseasonalized[i] = values[i] - seasonal[i];
      trend = loess_full(deseasonalized, have_rw ? rw.data() : nullptr, t_span,
                         cfg.trend_degree);
    }

    if (outer < cfg.outer_iterations) {
      std::vector<double> absres(un);
      for (std::size_t i = 0; i < un; ++i) {
        absres[i] = std::abs(values[i] - trend[i] - seasonal[i]);
      }
      std::vector<double> sorted = absres;
      std::sort(sorted.begin(), sorted.end());
      double med = (un % 2 == 1) ? sorted[un / 2]
                                 : 0.5 * (sorted[un / 2 - 1] + sorted[un / 2]);
      double scale = 1.0;
      for (double v : values) scale = std::max(scale, std::abs(v));
      double h = 6.0 * med;
      // A residual scale at rounding-noise level means the fit is already
      // essentially exact; reweighting against it only starves the windows.
      if (h > 1e-10 * scale) {
        // Clamp tails so near-exact fits keep full weight and gross outliers
        // drop out cleanly; otherwise noise-free inputs starve the windows.
        double lo = 0.001 * h, hi = 0.999 * h;
        for (std::size_t i = 0; i < un; ++i) {
          double r = absres[i];
          if (r <= lo) {
            rw[i] = 1.0;
          } else if (r >= hi) {
            rw[i] = 0.0;
          } else {
            double u = r / h;
            rw[i] = (1.0 - u * u) * (1.0 - u * u);
          }
        }
        have_rw = true;
      }
    }
  }

  // Center each disjoint full cycle at zero; the removed means land in the
  // residual through the closing identity below.
  std::size_t full_cycles = un / up;
  double last_mean = 0.0;
  for (std::size_t b = 0; b < full_cycles; ++b) {
    double mean = 0.0;
    for (std::size_t i = b * up; i < (b + 1) * up; ++i) mean += seasonal[i];
    mean /= static_cast<double>(period);
    for (std::size_t i = b * up; i < (b + 1) * up; ++i) seasonal[i] -= mean;
    last_mean = mean;
  }
  for (std::size_t i = full_cycles * up; i < un; ++i) seasonal[i] -= last_mean;

  Decomposition d;
  d.period = period;
  d.trend = std::move(trend);
  d.seasonal = std::move(seasonal);
  d.residual.resize(un);
  for (std::size_t i = 0; i < un; ++i) {
    d.residual[i] = values[i] - d.trend[i] - d.seasonal[i];
  }
  return d;
}

std::string components_to_csv(const Decomposition& d) {
  std::string out = "index,trend,seasonal,residual\n";
  for (std::size_t i = 0; i < d.trend.size(); ++i) {
    out += format_int(static_cast<std::int64_t>(i));
    out += ',';
    out += format_double(d.trend[i]);
    out += ',';
    out += format_double(d.seasonal[i]);
    out += ',';
    out += format_double(d.residual[i]);
    out += '\n';
  }
  return out;
}

void write_components_csv(const Decomposition& d, const std::string& path) {
  write_file(path, components_to_csv(d));
}

}  // namespace agewatch
