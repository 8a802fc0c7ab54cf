#pragma once

#include <string_view>
#include <vector>

namespace berglab {

// K1: C/(x^2 log(1/x)), K2: C/(x^2 loglog(1/x)), D1: C loglog(1/x),
// D2: C log(1/x)/loglog(1/x).
enum class Model { K1, K2, D1, D2 };

std::string_view to_string(Model m);
double model_shape(Model m, double x);

struct Sample {
  double x = 0.0;
  double value = 0.0;
  int band = 0;  // scale band, 0 when unknown (decades are used instead)
};

struct AsymptoticFit {
  Model model = Model::K1;
  double C = 0.0;
  double rel_residual = 0.0;  // median |log(data / model)|
  double band_min = 0.0;      // data / model at the fitted C
  double band_max = 0.0;
  double band_ratio() const { return band_max / band_min; }
};

// Throws InsufficientSpan for fewer than 5 samples, fewer than 3 bands, or
// any x with loglog(1/x) <= 0.5; PreconditionViolated for nonpositive values.
AsymptoticFit fit_model(const std::vector<Sample>& samples, Model model);

struct ModelSelection {
  Model preferred = Model::K1;
  double margin = 1.0;  // best residual / second best
  bool inconclusive = true;
  std::vector<AsymptoticFit> fits;
};

ModelSelection select_model(const std::vector<Sample>& samples, const std::vector<Model>& candidates);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace berglab
