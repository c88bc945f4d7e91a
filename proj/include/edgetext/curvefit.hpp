#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgetext/geometry.hpp"

namespace edgetext {

// Which monomials x^i (1 <= i <= m) and whether the constant take part in a
// fit. Text form follows the plot tick labels: "m(j)" keeps the j highest
// degrees {m-j+1, ..., m}; a "+c" suffix adds the constant. "4(3)" is
// {x^2, x^3, x^4} with no constant, "2(2)+c" is the default {x, x^2, 1}.
// An explicit subset can be written "m[i,j,...]" (e.g. "3[1,3]+c").
class ParamMask {
 public:
  // Throws kInvalidArgument unless degrees is a non-empty subset of [1, m]
  // containing m.
  ParamMask(int highest_degree, std::vector<int> degrees, bool include_constant);

  static ParamMask parse(std::string_view text);
  static ParamMask top_degrees(int highest_degree, int count, bool include_constant);
  static ParamMask default_mask() { return top_degrees(2, 2, true); }
  // Constant-only fit; outside the m >= 1 family so it has its own factory.
  static ParamMask constant_only();

  int highest_degree() const { return highest_degree_; }
  const std::vector<int>& degrees() const { return degrees_; }
  bool has_constant() const { return include_constant_; }
  int free_count() const {
    return static_cast<int>(degrees_.size()) + (include_constant_ ? 1 : 0);
  }
  // Every basis function of other is also in this mask.
  bool contains(const ParamMask& other) const;
  std::string to_string() const;

  friend bool operator==(const ParamMask&, const ParamMask&) = default;

 private:
  ParamMask() = default;

  int highest_degree_ = 0;
  std::vector<int> degrees_;
  bool include_constant_ = false;
};

// f(x) = sum_i coefficients[i] * x^degrees[i] + constant
struct CurveParams {
  ParamMask mask = ParamMask::default_mask();
  std::vector<double> coefficients;  // aligned with mask.degrees()
  double constant = 0.0;             // zero unless mask.has_constant()

  static CurveParams zeros(const ParamMask& mask);
  // Layout: coefficients in ascending degree, then the constant if present.
  static CurveParams from_flat(const ParamMask& mask, std::span<const double> values);
  std::vector<double> flat() const;
  // Coefficient of x^degree, 0 when the degree is not in the mask.
  double coefficient(int degree) const;

  friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

double eval_poly(const CurveParams& params, double x);
std::vector<double> eval_poly(const CurveParams& params, std::span<const double> xs);

// Least-squares fit of y over the masked basis using a column-pivoted
// Householder QR. Throws kInsufficientPoints when there are fewer points than
// free parameters, kSingularFit when the design matrix is rank deficient.
CurveParams fit_poly(std::span<const Point2> points, const ParamMask& mask);

// Sum of squared residuals of params over points.
double fit_residual(std::span<const Point2> points, const CurveParams& params);

}  // namespace edgetext
