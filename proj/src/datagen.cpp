#include "prv/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "prv/error.hpp"
#include "prv/normal.hpp"
#include "prv/rng.hpp"

namespace prv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Standard normal mass beyond +-10 is below 1e-23.
constexpr double kTail = 10.0;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
double adaptive_gk(const F& fn, double a, double b, double tol, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[static_cast<std::size_t>(k)];
    const double pair = fn(centre - dx) + fn(centre + dx);
    kronrod += kWgk[static_cast<std::size_t>(k)] * pair;
    if (k % 2 == 1) gauss += kWg[static_cast<std::size_t>(k / 2)] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (std::abs(kronrod - gauss) <= tol || depth >= 60) return kronrod;
  return adaptive_gk(fn, a, centre, 0.5 * tol, depth + 1) +
         adaptive_gk(fn, centre, b, 0.5 * tol, depth + 1);
}

// P(lo < Z <= hi) computed on the tail that avoids cancellation.
double normal_mass(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (lo >= 0.0) return 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi / std::numbers::sqrt2) - std::erfc(-lo / std::numbers::sqrt2));
  return normal_cdf(hi) - normal_cdf(lo);
}

void check_cuts(const std::vector<double>& cuts, const char* axis) {
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (!std::isfinite(cuts[k]))
      throw Error(ErrorCode::BadParameter, std::string(axis) + " cutpoints must be finite");
    if (k > 0 && !(cuts[k] > cuts[k - 1]))
      throw Error(ErrorCode::BadParameter, std::string(axis) + " cutpoints must be strictly increasing");
  }
}

std::vector<double> with_infinite_ends(const std::vector<double>& cuts) {
  std::vector<double> edges;
  edges.reserve(cuts.size() + 2);
  edges.push_back(-kInf);
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(kInf);
  return edges;
}

}  // namespace

std::vector<double> quantile_cuts(int k) {
  if (k < 2) throw Error(ErrorCode::BadParameter, "need at least two bins");
  std::vector<double> cuts;
  for (int m = 1; m < k; ++m) cuts.push_back(normal_quantile(static_cast<double>(m) / k));
  return cuts;
}

double bvn_rectangle(double a0, double a1, double b0, double b1, double rho) {
  if (!(std::abs(rho) <= 1.0)) throw Error(ErrorCode::BadCorrelation, "need |rho| <= 1");
  if (!(a1 > a0) || !(b1 > b0)) return 0.0;

  if (rho == 1.0) return normal_mass(std::max(a0, b0), std::min(a1, b1));
  if (rho == -1.0) return normal_mass(std::max(a0, -b1), std::min(a1, -b0));
  if (rho == 0.0) return normal_mass(a0, a1) * normal_mass(b0, b1);

  const double lo = std::max(a0, -kTail);
  const double hi = std::min(a1, kTail);
  if (!(hi > lo)) return 0.0;
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  const auto integrand = [&](double x) {
    return normal_pdf(x) * normal_mass((b0 - rho * x) / s, (b1 - rho * x) / s);
  };
  return adaptive_gk(integrand, lo, hi, 1e-14, 0);
}

double bvn_cdf(double a, double b, double rho) { return bvn_rectangle(-kInf, a, -kInf, b, rho); }

ProbabilityTable bvn_table(const BvnSpec& spec) {
  if (!(std::abs(spec.rho) <= 1.0)) throw Error(ErrorCode::BadCorrelation, "need |rho| <= 1");
  check_cuts(spec.row_cuts, "row");
  check_cuts(spec.col_cuts, "column");
  const auto rows = with_infinite_ends(spec.row_cuts);
  const auto cols = with_infinite_ends(spec.col_cuts);
  Eigen::MatrixXd cells(static_cast<Eigen::Index>(rows.size() - 1),
                        static_cast<Eigen::Index>(cols.size() - 1));
  for (Eigen::Index i = 0; i < cells.rows(); ++i)
    for (Eigen::Index j = 0; j < cells.cols(); ++j)
      cells(i, j) = bvn_rectangle(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(i) + 1],
                                  cols[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(j) + 1],
                                  spec.rho);
  return ProbabilityTable::normalized(cells);
}

bool is_fixed_table(const std::string& name) {
  return name == "artificial-1a" || name == "artificial-1b" || name == "artificial-1c";
}

bool is_dataset(const std::string& name) {
  return name == "cannabis" || name == "occupational-1975" || name == "occupational-1985";
}

ProbabilityTable fixed_table(const std::string& name) {
  // Rows 2 and 3 are shared; the first row sets the strength of local association.
  Eigen::MatrixXd p(3, 3);
  if (name == "artificial-1a") {
    p << 0.005, 0.125, 0.370, 0.030, 0.050, 0.120, 0.045, 0.075, 0.180;
  } else if (name == "artificial-1b") {
    p << 0.005, 0.025, 0.470, 0.030, 0.050, 0.120, 0.045, 0.075, 0.180;
  } else if (name == "artificial-1c") {
    p << 0.000, 0.000, 0.500, 0.030, 0.050, 0.120, 0.045, 0.075, 0.180;
  } else {
    throw Error(ErrorCode::UnknownName, "unknown table '" + name + "'");
  }
  return ProbabilityTable(p);
}

ContingencyTable dataset(const std::string& name) {
  CountMatrix n;
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  if (name == "cannabis") {
    n.resize(4, 3);
    n << 204, 6, 1, 211, 13, 5, 357, 44, 38, 92, 34, 49;
    rows = {"At most once/month", "Twice/month", "Twice/week", "More often"};
    cols = {"Never", "Once or twice", "More often"};
  } else if (name == "occupational-1975" || name == "occupational-1985") {
    n.resize(4, 4);
    if (name == "occupational-1975") {
      n << 29, 43, 25, 35, 23, 159, 89, 52, 11, 69, 184, 44, 84, 323, 525, 613;
    } else {
      n << 46, 59, 34, 42, 20, 193, 79, 31, 9, 122, 202, 48, 47, 270, 412, 380;
    }
    rows = {"Capitalist", "New middle", "Working", "Old middle"};
    cols = rows;
  } else {
    throw Error(ErrorCode::UnknownName, "unknown dataset '" + name + "'");
  }
  return ContingencyTable(std::move(n), std::move(rows), std::move(cols));
}

ContingencyTable sample_multinomial(const ProbabilityTable& p, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "sample size must be >= 1");
  auto engine = stream_engine(seed, 0);
  return sample_multinomial(p, n, engine);
}

}  // namespace prv
