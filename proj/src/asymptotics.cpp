#include "berglab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "berglab/error.hpp"

namespace berglab {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::K1: return "K1";
    case Model::K2: return "K2";
    case Model::D1: return "D1";
    case Model::D2: return "D2";
  }
  return "?";
}

double model_shape(Model m, double x) {
  const double L = std::log(1.0 / x);
  const double LL = std::log(L);
  switch (m) {
    case Model::K1: return 1.0 / (x * x * L);
    case Model::K2: return 1.0 / (x * x * LL);
    case Model::D1: return LL;
    case Model::D2: return L / LL;
  }
  return 0.0;
}

namespace {

// Logs of data / shape; x^2 is kept out of the product so tiny x never underflows.
double log_ratio(Model m, const Sample& s) {
  const double L = std::log(1.0 / s.x);
  const double LL = std::log(L);
  const double lv = std::log(s.value);
  switch (m) {
    case Model::K1: return lv + 2.0 * std::log(s.x) + std::log(L);
    case Model::K2: return lv + 2.0 * std::log(s.x) + std::log(LL);
    case Model::D1: return lv - std::log(LL);
    case Model::D2: return lv - std::log(L) + std::log(LL);
  }
  return 0.0;
}

}  // namespace

AsymptoticFit fit_model(const std::vector<Sample>& samples, Model model) {
  if (samples.size() < 5) throw Error(ErrorCode::InsufficientSpan, "need at least 5 samples");
  std::set<int> bands;
  for (const auto& s : samples) {
    if (!(s.x > 0.0) || !(std::log(std::log(1.0 / s.x)) > 0.5)) {
      throw Error(ErrorCode::InsufficientSpan, "x = " + std::to_string(s.x) + " is not small enough");
    }
    if (!(s.value > 0.0)) throw Error(ErrorCode::PreconditionViolated, "values must be positive");
    bands.insert(s.band != 0 ? s.band : -1000 - static_cast<int>(std::floor(std::log10(s.x))));
  }
  if (bands.size() < 3) throw Error(ErrorCode::InsufficientSpan, "samples cover fewer than 3 bands");

  std::vector<double> lr;
  for (const auto& s : samples) lr.push_back(log_ratio(model, s));
  double mean = 0.0;
  for (double v : lr) mean += v;
  mean /= static_cast<double>(lr.size());
  AsymptoticFit f;
  f.model = model;
  f.C = std::exp(mean);
  std::vector<double> dev;
  for (double v : lr) dev.push_back(std::abs(v - mean));
  std::sort(dev.begin(), dev.end());
  const std::size_t n = dev.size();
  f.rel_residual = n % 2 ? dev[n / 2] : 0.5 * (dev[n / 2 - 1] + dev[n / 2]);
  const auto [lo, hi] = std::minmax_element(lr.begin(), lr.end());
  f.band_min = std::exp(*lo - mean);
  f.band_max = std::exp(*hi - mean);
  return f;
}

ModelSelection select_model(const std::vector<Sample>& samples, const std::vector<Model>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::PreconditionViolated, "no candidate models");
  ModelSelection sel;
  for (Model m : candidates) sel.fits.push_back(fit_model(samples, m));
  std::vector<std::size_t> order(sel.fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sel.fits[a].rel_residual < sel.fits[b].rel_residual;
  });
  sel.preferred = sel.fits[order[0]].model;
  if (order.size() > 1) {
    const double best = sel.fits[order[0]].rel_residual;
    const double second = sel.fits[order[1]].rel_residual;
    sel.margin = second > 0.0 ? best / second : 1.0;
  }
  sel.inconclusive = sel.margin > 0.8;
  return sel;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::PreconditionViolated, "linear fit needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace berglab
