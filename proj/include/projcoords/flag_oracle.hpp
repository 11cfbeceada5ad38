#pragma once

// Flag geometry in RP^2, used as an independent certificate for the
// closed-form coordinate changes in pants_coords.hpp.
//
// A flag is a point together with a line through it. Lines are stored as
// covectors, so that for a flag F = (f1, f2) the 3-form f2 ^ f1' is the
// pairing <line, point'> and f1 ^ f1' ^ f1'' is a determinant. All invariants
// below are ratios of such quantities, hence independent of the chosen
// representatives.
//
// The normalized configuration of a pair of pants places the repelling fixed
// points of the three boundary holonomies at the coordinate points, the
// pairwise intersections of their flag lines at [1,-1,1], [x,1,-1] and
// [-x,x,1], and the third vertices of the adjacent triangles at
// [-1,b1,c1], [a2,-1,c2], [a3,b3,-1].

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "projcoords/errors.hpp"
#include "projcoords/pants_coords.hpp"
#include "projcoords/spectral.hpp"

namespace projcoords {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kDegeneracyThreshold = 1e-12;

inline Vec3 wedge2(const Vec3& u, const Vec3& v) { return u.cross(v); }

/// Determinant of the matrix with rows u, v, w.
inline double wedge3(const Vec3& u, const Vec3& v, const Vec3& w) {
  return u.dot(v.cross(w));
}

class ProjPoint {
 public:
  explicit ProjPoint(const Vec3& coords) : coords_(coords) {
    if (!coords.allFinite() || coords.norm() == 0.0) {
      throw Error(ErrorKind::InvalidValue,
                  "homogeneous coordinates must be finite and not all zero");
    }
  }
  ProjPoint(double x, double y, double z) : ProjPoint(Vec3(x, y, z)) {}

  const Vec3& coords() const { return coords_; }
  Vec3 unit() const { return coords_.normalized(); }

  /// Representative whose first non-negligible coordinate equals 1.
  Vec3 canonical() const {
    const Vec3 u = unit();
    for (int i = 0; i < 3; ++i) {
      if (std::abs(u[i]) > kDegeneracyThreshold) return u / u[i];
    }
    return u;
  }

 private:
  Vec3 coords_;
};

/// Sine of the angle between the two lines through the origin.
inline double projective_distance(const Vec3& a, const Vec3& b) {
  return a.normalized().cross(b.normalized()).norm();
}

inline bool approx_equal(const ProjPoint& a, const ProjPoint& b, double tol) {
  return projective_distance(a.coords(), b.coords()) <= tol;
}

class Flag {
 public:
  Flag(const ProjPoint& point, const Vec3& line) : point_(point), line_(line) {
    if (!line.allFinite() || line.norm() == 0.0) {
      throw Error(ErrorKind::InvalidValue, "flag line must be nonzero");
    }
    const double incidence = std::abs(line.normalized().dot(point.unit()));
    if (incidence > kDegeneracyThreshold) {
      std::ostringstream msg;
      msg << "flag point is not on its line (pairing " << incidence << ")";
      throw Error(ErrorKind::InvalidValue, msg.str());
    }
  }

  /// The flag at `point` whose line also passes through `other`.
  static Flag through(const ProjPoint& point, const Vec3& other) {
    return Flag(point, wedge2(point.coords(), other));
  }

  const ProjPoint& point() const { return point_; }
  const Vec3& line() const { return line_; }

 private:
  ProjPoint point_;
  Vec3 line_;
};

namespace detail {

inline double checked(double value, const char* what) {
  if (std::abs(value) < kDegeneracyThreshold) {
    throw Error(ErrorKind::DegenerateConfiguration,
                std::string(what) + " vanishes");
  }
  return value;
}

inline double checked_log(double ratio, const char* what) {
  if (!(ratio > 0.0)) {
    std::ostringstream msg;
    msg << what << " is not positive (" << ratio << ")";
    throw Error(ErrorKind::NonPositiveRatio, msg.str());
  }
  return std::log(ratio);
}

}  // namespace detail

/// Log of the triple ratio
///   (f1^(2) ^ f2^(1)) / (f2^(1) ^ f3^(2)) * (f1^(1) ^ f3^(2)) / (f1^(1) ^ f2^(2))
///   * (f2^(2) ^ f3^(1)) / (f1^(2) ^ f3^(1)).
inline double triple_ratio_log(const Flag& f1, const Flag& f2, const Flag& f3) {
  const Vec3 p1 = f1.point().unit();
  const Vec3 p2 = f2.point().unit();
  const Vec3 p3 = f3.point().unit();
  const Vec3 l1 = f1.line().normalized();
  const Vec3 l2 = f2.line().normalized();
  const Vec3 l3 = f3.line().normalized();
  using detail::checked;
  const double ratio = checked(l1.dot(p2), "<F1 line, F2 point>") /
                       checked(l3.dot(p2), "<F3 line, F2 point>") *
                       checked(l3.dot(p1), "<F3 line, F1 point>") /
                       checked(l2.dot(p1), "<F2 line, F1 point>") *
                       checked(l2.dot(p3), "<F2 line, F3 point>") /
                       checked(l1.dot(p3), "<F1 line, F3 point>");
  return detail::checked_log(ratio, "triple ratio");
}

struct ShearPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Shears along an oriented leaf shared by two triangles. `pos` and `neg` sit
/// at the positive and negative endpoints of the leaf, `up` at the third
/// vertex of the triangle on the T+ side and `down` is the point of the flag
/// at the third vertex on the T- side.
inline ShearPair shear_logs(const Flag& pos, const Flag& neg, const Flag& up,
                            const ProjPoint& down) {
  const Vec3 pp = pos.point().unit();
  const Vec3 pn = neg.point().unit();
  const Vec3 pu = up.point().unit();
  const Vec3 pd = down.unit();
  const Vec3 lp = pos.line().normalized();
  const Vec3 ln = neg.line().normalized();
  using detail::checked;
  const double vol_up = checked(wedge3(pp, pn, pu), "det(pos, neg, up)");
  const double vol_down = checked(wedge3(pp, pn, pd), "det(pos, neg, down)");
  const double neg_down = checked(ln.dot(pd), "<neg line, down>");
  const double neg_up = checked(ln.dot(pu), "<neg line, up>");
  const double pos_up = checked(lp.dot(pu), "<pos line, up>");
  const double pos_down = checked(lp.dot(pd), "<pos line, down>");
  return {
      detail::checked_log(-(vol_up / vol_down) * (neg_down / neg_up),
                          "sigma1 double ratio"),
      detail::checked_log(-(vol_down / vol_up) * (pos_up / pos_down),
                          "sigma2 double ratio"),
  };
}

// ---------------------------------------------------------------------------
// Normalized configuration

/// Shears and the T+ triangle invariant of a pair of pants; tau111(T-) is not
/// determined by the normalized configuration.
struct ConfigInvariants {
  std::array<double, 3> sigma1{};
  std::array<double, 3> sigma2{};
  double tau_plus = 0.0;
};

class PantsFlagConfig {
 public:
  PantsFlagConfig(double x, double a2, double a3, double b1, double b3,
                  double c1, double c2)
      : x_(x), a2_(a2), a3_(a3), b1_(b1), b3_(b3), c1_(c1), c2_(c2) {
    const std::array<double, 7> all{x, a2, a3, b1, b3, c1, c2};
    for (double v : all) {
      if (!(std::isfinite(v) && v > 0.0)) {
        throw Error(ErrorKind::InvalidValue,
                    "configuration scalars must be finite and positive");
      }
    }
    if (!(b1 > 1.0 && c2 > 1.0 && b3 > 1.0 && a2 > 1.0 && a3 > x &&
          x * c1 > 1.0)) {
      throw Error(ErrorKind::InvalidValue,
                  "configuration needs b1, c2, b3, a2 > 1, a3 > x, x*c1 > 1");
    }
  }

  double x() const { return x_; }
  double a2() const { return a2_; }
  double a3() const { return a3_; }
  double b1() const { return b1_; }
  double b3() const { return b3_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

  /// Internal parameter t = a2 b3 / a3.
  double t() const { return a2_ * b3_ / a3_; }

  /// F_k^(1): the coordinate point e_k.
  ProjPoint inner_point(std::size_t k) const {
    return ProjPoint(Vec3::Unit(static_cast<int>(k)));
  }

  /// F1^(2) ^ F3^(2), F1^(2) ^ F2^(2) and F2^(2) ^ F3^(2).
  Vec3 meet13() const { return {1.0, -1.0, 1.0}; }
  Vec3 meet12() const { return {x_, 1.0, -1.0}; }
  Vec3 meet23() const { return {-x_, x_, 1.0}; }

  Flag inner_flag(std::size_t k) const {
    switch (k) {
      case 0: return Flag::through(inner_point(0), meet13());
      case 1: return Flag::through(inner_point(1), meet12());
      default: return Flag::through(inner_point(2), meet13());
    }
  }

  /// F'_k^(1), third vertex of the triangle Delta_k.
  ProjPoint outer_point(std::size_t k) const {
    switch (k) {
      case 0: return ProjPoint(-1.0, b1_, c1_);
      case 1: return ProjPoint(a2_, -1.0, c2_);
      default: return ProjPoint(a3_, b3_, -1.0);
    }
  }

  /// Each intersection point lies on both flag lines; returns the three
  /// determinants det(e_k, meet, meet'), which vanish identically.
  std::array<double, 3> collinearity_residuals() const {
    return {wedge3(Vec3::UnitX(), meet13(), meet12()),
            wedge3(Vec3::UnitY(), meet12(), meet23()),
            wedge3(Vec3::UnitZ(), meet13(), meet23())};
  }

 private:
  double x_, a2_, a3_, b1_, b3_, c1_, c2_;
};

inline PantsFlagConfig config_from_fg(const std::array<double, 3>& sigma1,
                                      const std::array<double, 3>& sigma2,
                                      double tau_plus) {
  const double x = std::exp(tau_plus);
  return PantsFlagConfig(
      x,
      /*a2=*/std::exp(-sigma2[1]) + 1.0,
      /*a3=*/x * (std::exp(sigma1[2]) + 1.0),
      /*b1=*/std::exp(sigma1[0]) + 1.0,
      /*b3=*/std::exp(-sigma2[2]) + 1.0,
      /*c1=*/(std::exp(-sigma2[0]) + 1.0) / x,
      /*c2=*/std::exp(sigma1[1]) + 1.0);
}

inline PantsFlagConfig config_from_fg(const FGPants& f) {
  return config_from_fg(f.sigma1, f.sigma2, f.tau_plus);
}

/// Closed-form invariants of a configuration.
inline ConfigInvariants fg_from_config(const PantsFlagConfig& c) {
  ConfigInvariants out;
  out.sigma1 = {std::log(c.b1() - 1.0), std::log(c.c2() - 1.0),
                std::log(c.a3() / c.x() - 1.0)};
  out.sigma2 = {-std::log(c.x() * c.c1() - 1.0), -std::log(c.a2() - 1.0),
                -std::log(c.b3() - 1.0)};
  out.tau_plus = std::log(c.x());
  return out;
}

/// The same invariants recomputed from the flags with wedge products.
inline ConfigInvariants recompute_invariants(const PantsFlagConfig& c) {
  const std::array<Flag, 3> flags{c.inner_flag(0), c.inner_flag(1),
                                  c.inner_flag(2)};
  ConfigInvariants out;
  for (std::size_t k = 0; k < 3; ++k) {
    const ShearPair shear = shear_logs(flags[cyc_next(k)], flags[cyc_prev(k)],
                                       flags[k], c.outer_point(k));
    out.sigma1[k] = shear.sigma1;
    out.sigma2[k] = shear.sigma2;
  }
  out.tau_plus = triple_ratio_log(flags[0], flags[1], flags[2]);
  return out;
}

// ---------------------------------------------------------------------------
// Oracle

struct OracleReport {
  std::array<double, 3> sigma1_residual{};
  std::array<double, 3> sigma2_residual{};
  double tau_plus_residual = 0.0;
  /// |tau+ + tau- + sum log mu_i| with mu_i from the converted boundary data.
  double tau_sum_residual = 0.0;
  double max_residual = 0.0;
};

inline OracleReport oracle_check(const FGPants& f) {
  const FgDomainReport domain = validate_fg_domain(f);
  if (!domain.ok) {
    throw Error(ErrorKind::DomainViolation,
                "length functions must be positive\n" + domain.describe());
  }
  const ConfigInvariants again = recompute_invariants(config_from_fg(f));
  OracleReport report;
  for (std::size_t k = 0; k < 3; ++k) {
    report.sigma1_residual[k] = std::abs(again.sigma1[k] - f.sigma1[k]);
    report.sigma2_residual[k] = std::abs(again.sigma2[k] - f.sigma2[k]);
    report.max_residual = std::max({report.max_residual,
                                    report.sigma1_residual[k],
                                    report.sigma2_residual[k]});
  }
  report.tau_plus_residual = std::abs(again.tau_plus - f.tau_plus);

  const GoldmanPants g = fg_to_goldman(f);
  double log_mu_sum = 0.0;
  for (const BoundaryInvariant& b : g.boundary) {
    log_mu_sum += std::log(eigen_from_boundary(b).mu());
  }
  report.tau_sum_residual = std::abs(f.tau_plus + f.tau_minus + log_mu_sum);
  report.max_residual =
      std::max({report.max_residual, report.tau_plus_residual,
                report.tau_sum_residual});
  return report;
}

// ---------------------------------------------------------------------------
// Boundary holonomies

/// Real eigenvalues in increasing order with matching eigenvectors. Throws
/// NoValidBranch if the spectrum is not real.
struct RealEigen {
  std::array<double, 3> values{};
  std::array<Vec3, 3> vectors{};
};

inline RealEigen real_eigen(const Mat3& m, double imag_tol = 1e-9) {
  Eigen::EigenSolver<Mat3> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoValidBranch, "eigen decomposition failed");
  }
  std::array<int, 3> order{0, 1, 2};
  const auto values = solver.eigenvalues();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(values[i].imag()) > imag_tol * std::max(1.0, std::abs(values[i]))) {
      throw Error(ErrorKind::NoValidBranch, "spectrum is not real");
    }
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a].real() < values[b].real();
  });
  RealEigen out;
  for (int i = 0; i < 3; ++i) {
    out.values[i] = values[order[i]].real();
    out.vectors[i] = solver.eigenvectors().col(order[i]).real();
  }
  return out;
}

/// Unstable flag: the lowest eigenline inside the span of the two lowest.
inline Flag unstable_flag(const Mat3& m) {
  const RealEigen e = real_eigen(m);
  return Flag(ProjPoint(e.vectors[0]), wedge2(e.vectors[0], e.vectors[1]));
}

struct MonodromyBranch {
  Mat3 matrix = Mat3::Zero();
  double alpha = 0.0;  // scaling of the first mapped vertex
  double beta = 0.0;   // scaling of the second mapped vertex
  std::array<double, 3> spectrum{};
  bool spectrum_ok = false;
  /// Both scalings positive: the cone over Delta_{i+1} maps onto the cone
  /// over Delta_{i-1}, not onto its negative.
  bool cone_preserving = false;
};

struct MonodromyResult {
  std::array<Mat3, 3> matrices{};
  std::array<std::vector<MonodromyBranch>, 3> branches{};
  /// More than one branch passed the selection for this boundary.
  std::array<bool, 3> ambiguous{};
};

namespace detail {

inline bool spectrum_matches(const std::array<double, 3>& got,
                             const EigenTriple& want, double tol) {
  const std::array<double, 3> w{want.lambda(), want.mu(), want.nu()};
  for (int i = 0; i < 3; ++i) {
    if (!(got[i] > 0.0)) return false;
    if (std::abs(got[i] - w[i]) > tol * std::max(1.0, w[i])) return false;
  }
  return true;
}

}  // namespace detail

/// Holonomy of the i-th boundary: fixes e_i with eigenvalue lambda_i and maps
/// the triangle Delta_{i+1} onto Delta_{i-1}, sending e_{i-1} to F'_{i-1} and
/// F'_{i+1} to e_{i+1} (both pairs are lifts of the same puncture). The two
/// remaining projective scalings alpha, beta are fixed by det = 1 and
/// trace = lambda + mu + nu.
inline MonodromyResult reconstruct_monodromy(
    const PantsFlagConfig& c, const std::array<EigenTriple, 3>& spectra,
    double spectrum_tol = 1e-8) {
  MonodromyResult result;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t n = cyc_next(k);
    const std::size_t p = cyc_prev(k);
    const double lambda = spectra[k].lambda();
    const Vec3 fixed = c.inner_point(k).coords();
    const Vec3 src0 = c.inner_point(p).coords();
    const Vec3 dst0 = c.outer_point(p).coords();
    const Vec3 src1 = c.outer_point(n).coords();
    const Vec3 dst1 = c.inner_point(n).coords();

    Mat3 source;
    source << fixed, src0, src1;
    const double det_source = source.determinant();
    if (std::abs(det_source) < kDegeneracyThreshold) {
      throw Error(ErrorKind::DegenerateConfiguration,
                  "source triangle is degenerate");
    }
    Mat3 target;
    target << fixed, dst0, dst1;
    const double det_target = target.determinant();
    if (std::abs(det_target) < kDegeneracyThreshold) {
      throw Error(ErrorKind::DegenerateConfiguration,
                  "target triangle is degenerate");
    }
    const Mat3 source_inv = source.inverse();
    // det M = lambda * alpha * beta * det_target / det_source = 1, and
    // trace M = lambda + alpha * c_alpha + beta * c_beta.
    const double ab = det_source / (lambda * det_target);
    const double c_alpha = (source_inv * dst0)[1];
    const double c_beta = (source_inv * dst1)[2];
    const double trace_rest = spectra[k].mu() + spectra[k].nu();

    // c_alpha * alpha^2 - trace_rest * alpha + ab * c_beta = 0
    std::vector<double> alphas;
    const double qa = c_alpha;
    const double qb = -trace_rest;
    const double qc = ab * c_beta;
    if (std::abs(qa) < kDegeneracyThreshold) {
      if (std::abs(qb) > 0.0) alphas.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
        alphas.push_back(q / qa);
        if (q != 0.0) alphas.push_back(qc / q);
      }
    }

    std::vector<MonodromyBranch> selected;
    for (double alpha : alphas) {
      if (alpha == 0.0 || !std::isfinite(alpha)) continue;
      MonodromyBranch branch;
      branch.alpha = alpha;
      branch.beta = ab / alpha;
      Mat3 image;
      image << lambda * fixed, branch.alpha * dst0, branch.beta * dst1;
      branch.matrix = image * source_inv;
      try {
        branch.spectrum = real_eigen(branch.matrix).values;
        branch.spectrum_ok = detail::spectrum_matches(
            branch.spectrum, spectra[k], spectrum_tol);
      } catch (const Error&) {
        branch.spectrum_ok = false;
      }
      branch.cone_preserving = branch.alpha > 0.0 && branch.beta > 0.0;
      result.branches[k].push_back(branch);
      if (branch.spectrum_ok && branch.cone_preserving) {
        selected.push_back(branch);
      }
    }
    if (selected.empty()) {
      throw Error(ErrorKind::NoValidBranch,
                  "no scaling of the A" + std::to_string(k + 1) +
                      " holonomy has the prescribed spectrum");
    }
    result.matrices[k] = selected.front().matrix;
    result.ambiguous[k] = selected.size() > 1;
  }
  return result;
}

}  // namespace projcoords
