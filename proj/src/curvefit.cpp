#include "edgetext/curvefit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "edgetext/error.hpp"

namespace edgetext {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw Error(ErrorKind::kParse, "bad parameter mask '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

ParamMask::ParamMask(int highest_degree, std::vector<int> degrees, bool include_constant)
    : highest_degree_(highest_degree), degrees_(std::move(degrees)), include_constant_(include_constant) {
  std::sort(degrees_.begin(), degrees_.end());
  degrees_.erase(std::unique(degrees_.begin(), degrees_.end()), degrees_.end());
  if (highest_degree_ < 1 || degrees_.empty() || degrees_.front() < 1 ||
      degrees_.back() != highest_degree_) {
    throw Error(ErrorKind::kInvalidArgument,
                "mask degrees must be a non-empty subset of [1, m] containing m");
  }
}

ParamMask ParamMask::top_degrees(int highest_degree, int count, bool include_constant) {
  if (count < 1 || count > highest_degree) {
    throw Error(ErrorKind::kInvalidArgument, "mask count must lie in [1, m]");
  }
  std::vector<int> degrees;
  for (int d = highest_degree - count + 1; d <= highest_degree; ++d) degrees.push_back(d);
  return ParamMask(highest_degree, std::move(degrees), include_constant);
}

ParamMask ParamMask::constant_only() {
  ParamMask mask;
  mask.include_constant_ = true;
  return mask;
}

ParamMask ParamMask::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s == "c") return constant_only();

  bool constant = false;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "+c") {
    constant = true;
    s.remove_suffix(2);
  }
  const auto open = s.find_first_of("([");
  if (open == std::string_view::npos || open == 0) {
    throw Error(ErrorKind::kParse, "bad parameter mask '" + std::string(text) + "'");
  }
  const char close_char = s[open] == '(' ? ')' : ']';
  if (s.back() != close_char) {
    throw Error(ErrorKind::kParse, "bad parameter mask '" + std::string(text) + "'");
  }
  const int m = parse_int(s.substr(0, open), text);
  const std::string_view inner = s.substr(open + 1, s.size() - open - 2);
  try {
    if (close_char == ')') return top_degrees(m, parse_int(inner, text), constant);
    std::vector<int> degrees;
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      const auto comma = inner.find(',', pos);
      const auto piece = inner.substr(pos, comma == std::string_view::npos ? inner.npos : comma - pos);
      degrees.push_back(parse_int(piece, text));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return ParamMask(m, std::move(degrees), constant);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    throw Error(ErrorKind::kParse, "bad parameter mask '" + std::string(text) + "': " + e.what());
  }
}

bool ParamMask::contains(const ParamMask& other) const {
  if (other.include_constant_ && !include_constant_) return false;
  return std::includes(degrees_.begin(), degrees_.end(), other.degrees_.begin(), other.degrees_.end());
}

std::string ParamMask::to_string() const {
  if (degrees_.empty()) return "c";
  std::string out = std::to_string(highest_degree_);
  bool contiguous_top = true;
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] != highest_degree_ - static_cast<int>(degrees_.size()) + 1 + static_cast<int>(i)) {
      contiguous_top = false;
    }
  }
  if (contiguous_top) {
    out += "(" + std::to_string(degrees_.size()) + ")";
  } else {
    out += "[";
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(degrees_[i]);
    }
    out += "]";
  }
  if (include_constant_) out += "+c";
  return out;
}

CurveParams CurveParams::zeros(const ParamMask& mask) {
  return CurveParams{mask, std::vector<double>(mask.degrees().size(), 0.0), 0.0};
}

CurveParams CurveParams::from_flat(const ParamMask& mask, std::span<const double> values) {
  if (static_cast<int>(values.size()) != mask.free_count()) {
    throw Error(ErrorKind::kIncompatibleParams,
                "expected " + std::to_string(mask.free_count()) + " values for mask " +
                    mask.to_string() + ", got " + std::to_string(values.size()));
  }
  CurveParams p = zeros(mask);
  std::copy_n(values.begin(), p.coefficients.size(), p.coefficients.begin());
  if (mask.has_constant()) p.constant = values.back();
  return p;
}

std::vector<double> CurveParams::flat() const {
  std::vector<double> out = coefficients;
  if (mask.has_constant()) out.push_back(constant);
  return out;
}

double CurveParams::coefficient(int degree) const {
  const auto& d = mask.degrees();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == degree) return coefficients[i];
  }
  return 0.0;
}

double eval_poly(const CurveParams& params, double x) {
  const auto& degrees = params.mask.degrees();
  double y = params.mask.has_constant() ? params.constant : 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) y += params.coefficients[i] * ipow(x, degrees[i]);
  return y;
}

std::vector<double> eval_poly(const CurveParams& params, std::span<const double> xs) {
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double x : xs) ys.push_back(eval_poly(params, x));
  return ys;
}

CurveParams fit_poly(std::span<const Point2> points, const ParamMask& mask) {
  const int cols = mask.free_count();
  const auto rows = static_cast<Eigen::Index>(points.size());
  if (rows < cols) {
    throw Error(ErrorKind::kInsufficientPoints,
                std::to_string(points.size()) + " points for " + std::to_string(cols) +
                    " free parameters (mask " + mask.to_string() + ")");
  }
  const auto& degrees = mask.degrees();
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Point2& p = points[static_cast<std::size_t>(r)];
    for (std::size_t c = 0; c < degrees.size(); ++c) {
      design(r, static_cast<Eigen::Index>(c)) = ipow(p.x, degrees[c]);
    }
    if (mask.has_constant()) design(r, cols - 1) = 1.0;
    rhs(r) = p.y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    throw Error(ErrorKind::kSingularFit, "design matrix has rank " + std::to_string(qr.rank()) +
                                             " < " + std::to_string(cols) + " (mask " +
                                             mask.to_string() + ")");
  }
  const Eigen::VectorXd solution = qr.solve(rhs);
  std::vector<double> flat(solution.data(), solution.data() + solution.size());
  return CurveParams::from_flat(mask, flat);
}

double fit_residual(std::span<const Point2> points, const CurveParams& params) {
  double acc = 0.0;
  for (const auto& p : points) {
    const double r = p.y - eval_poly(params, p.x);
    acc += r * r;
  }
  return acc;
}

}  // namespace edgetext
