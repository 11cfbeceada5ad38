#pragma once

// Coordinates on the space of convex projective structures of a pair of pants
// and the closed-form changes between them.
//
// Goldman coordinates: three boundary pairs (lambda_i, tau_i) and the internal
// parameters (s, t). Fock-Goncharov coordinates: two shears sigma1(B_i),
// sigma2(B_i) on each of the three spiraling leaves and the triangle
// invariants tau111(T+), tau111(T-).
//
// Indexing: boundary A_i and leaf B_i with i = 1, 2, 3 are stored at array
// index i - 1. Indices are cyclic, so "i + 1" is cyc_next(k) and "i - 1" is
// cyc_prev(k). Leaf B_i runs from puncture i - 1 to puncture i + 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

#include "projcoords/errors.hpp"
#include "projcoords/spectral.hpp"

namespace projcoords {

constexpr std::size_t cyc_next(std::size_t k) { return (k + 1) % 3; }
constexpr std::size_t cyc_prev(std::size_t k) { return (k + 2) % 3; }

struct GoldmanPants {
  std::array<BoundaryInvariant, 3> boundary{};
  double s = 1.0;
  double t = 1.0;
};

/// Not validated on construction; see validate_fg_domain.
struct FGPants {
  std::array<double, 3> sigma1{};
  std::array<double, 3> sigma2{};
  double tau_plus = 0.0;
  double tau_minus = 0.0;
};

// ---------------------------------------------------------------------------
// Length functions and the valid domain

/// ell1(A_i) = -sigma1(B_{i+1}) - sigma2(B_{i-1}),
/// ell2(A_i) = -sigma2(B_{i+1}) - sigma1(B_{i-1}) - tau+ - tau-.
inline std::array<LengthPair, 3> fg_lengths(const FGPants& f) {
  std::array<LengthPair, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t n = cyc_next(k);
    const std::size_t p = cyc_prev(k);
    out[k].ell1 = -f.sigma1[n] - f.sigma2[p];
    out[k].ell2 = -f.sigma2[n] - f.sigma1[p] - f.tau_plus - f.tau_minus;
  }
  return out;
}

struct FgDomainReport {
  bool ok = false;
  std::array<LengthPair, 3> lengths{};

  /// One line per boundary, e.g. "A1: ell1=2 ell2=-4 (ell2 not positive)".
  std::string describe() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t k = 0; k < 3; ++k) {
      out << "A" << k + 1 << ": ell1=" << lengths[k].ell1
          << " ell2=" << lengths[k].ell2;
      if (!(lengths[k].ell1 > 0.0)) out << " (ell1 not positive)";
      if (!(lengths[k].ell2 > 0.0)) out << " (ell2 not positive)";
      if (k < 2) out << "\n";
    }
    return out.str();
  }
};

inline bool all_finite(const FGPants& f) {
  bool ok = std::isfinite(f.tau_plus) && std::isfinite(f.tau_minus);
  for (std::size_t k = 0; k < 3; ++k) {
    ok = ok && std::isfinite(f.sigma1[k]) && std::isfinite(f.sigma2[k]);
  }
  return ok;
}

/// Both length functions of every boundary must be strictly positive.
inline FgDomainReport validate_fg_domain(const FGPants& f) {
  FgDomainReport report;
  report.lengths = fg_lengths(f);
  report.ok = all_finite(f);
  for (const LengthPair& l : report.lengths) {
    report.ok = report.ok && l.ell1 > 0.0 && l.ell2 > 0.0;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fock-Goncharov -> Goldman

inline GoldmanPants fg_to_goldman(const FGPants& f) {
  const FgDomainReport domain = validate_fg_domain(f);
  if (!domain.ok) {
    throw Error(ErrorKind::DomainViolation,
                "length functions must be positive\n" + domain.describe());
  }
  const double tri = f.tau_plus + f.tau_minus;
  GoldmanPants g;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t n = cyc_next(k);
    const std::size_t p = cyc_prev(k);
    const double log_lambda = (f.sigma1[n] + 2.0 * f.sigma2[n] +
                               2.0 * f.sigma1[p] + f.sigma2[p] + 2.0 * tri) /
                              3.0;
    const double log_mu =
        (f.sigma1[n] - f.sigma2[n] - f.sigma1[p] + f.sigma2[p] - tri) / 3.0;
    const double log_nu = (-2.0 * f.sigma1[n] - f.sigma2[n] - f.sigma1[p] -
                           2.0 * f.sigma2[p] - tri) /
                          3.0;
    g.boundary[k] = {std::exp(log_lambda),
                     std::exp(log_mu) + std::exp(log_nu)};
    const WindowCheck check = check_window(g.boundary[k]);
    if (!check.ok) {
      throw Error(ErrorKind::DomainViolation,
                  "A" + std::to_string(k + 1) + " lands outside the window: " +
                      check.message(g.boundary[k].lambda, g.boundary[k].tau));
    }
  }
  const double sum1 = f.sigma1[0] + f.sigma1[1] + f.sigma1[2];
  const double sum2 = f.sigma2[0] + f.sigma2[1] + f.sigma2[2];
  g.s = std::exp((sum1 - sum2) / 6.0);
  g.t = std::exp(-f.tau_plus) * (std::exp(-f.sigma2[1]) + 1.0) *
        (std::exp(-f.sigma2[2]) + 1.0) / (std::exp(f.sigma1[2]) + 1.0);
  return g;
}

// ---------------------------------------------------------------------------
// Goldman -> Fock-Goncharov

/// Window for every boundary pair plus s, t > 0. Throws on the first failure.
inline std::array<EigenTriple, 3> validated_spectra(const GoldmanPants& g) {
  if (!(std::isfinite(g.s) && g.s > 0.0)) {
    throw Error(ErrorKind::InvalidValue, "internal parameter s must be > 0");
  }
  if (!(std::isfinite(g.t) && g.t > 0.0)) {
    throw Error(ErrorKind::InvalidValue, "internal parameter t must be > 0");
  }
  auto spectrum = [&](std::size_t k) {
    try {
      return eigen_from_boundary(g.boundary[k]);
    } catch (const Error& e) {
      throw Error(e.kind(), "A" + std::to_string(k + 1) + ": " + e.what());
    }
  };
  return {spectrum(0), spectrum(1), spectrum(2)};
}

inline FGPants goldman_to_fg(const GoldmanPants& g) {
  const std::array<EigenTriple, 3> e = validated_spectra(g);
  std::array<double, 3> log_lambda{};
  std::array<double, 3> log_mu{};
  for (std::size_t k = 0; k < 3; ++k) {
    log_lambda[k] = std::log(e[k].lambda());
    log_mu[k] = std::log(e[k].mu());
  }
  const double log_s = std::log(g.s);

  FGPants f;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t n = cyc_next(k);
    const std::size_t p = cyc_prev(k);
    const double half =
        0.5 * (log_lambda[p] - log_lambda[k] + log_lambda[n]);
    f.sigma1[k] = half + log_mu[p] + log_s;
    f.sigma2[k] = half + log_mu[n] - log_s;
  }

  const double numer =
      (std::exp(-f.sigma2[1]) + 1.0) * (std::exp(-f.sigma2[2]) + 1.0);
  const double denom = std::exp(f.sigma1[2]) + 1.0;
  const double mu_product = e[0].mu() * e[1].mu() * e[2].mu();
  f.tau_plus = std::log(numer / (g.t * denom));
  // mu product sits in the denominator; the other placement breaks
  // tau+ + tau- = -sum(log mu) whenever some mu_i != 1.
  f.tau_minus = std::log(g.t * denom / (mu_product * numer));

  const double mu_sum = log_mu[0] + log_mu[1] + log_mu[2];
  const double drift = std::abs(f.tau_plus + f.tau_minus + mu_sum);
  if (drift > 1e-9 * std::max(1.0, std::abs(f.tau_plus))) {
    throw std::logic_error("tau+ + tau- disagrees with -sum(log mu)");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Crossratio quadratics

/// rho_i = (e^{sigma1(B_{i+1})} + 1)(e^{-sigma2(B_{i-1})} + 1); equal to
/// b3*c2, a3*c1, a2*b1 of the normalized triangle configuration.
inline std::array<double, 3> crossratios(const FGPants& f) {
  std::array<double, 3> rho{};
  for (std::size_t k = 0; k < 3; ++k) {
    rho[k] = (std::exp(f.sigma1[cyc_next(k)]) + 1.0) *
             (std::exp(-f.sigma2[cyc_prev(k)]) + 1.0);
  }
  return rho;
}

struct QuadraticCoefficients {
  double quadratic = 0.0;  // lambda_{i-1} / lambda_{i+1}
  double linear = 0.0;     // tau_i * sqrt(lambda_i lambda_{i-1} / lambda_{i+1})
};

inline QuadraticCoefficients crossratio_coefficients(double lam_prev,
                                                     double lam_self,
                                                     double lam_next,
                                                     double tau_self) {
  return {lam_prev / lam_next,
          tau_self * std::sqrt(lam_self * lam_prev / lam_next)};
}

/// Positive root s of rho = 1 + tau_i sqrt(lam_i lam_{i-1}/lam_{i+1}) s
/// + (lam_{i-1}/lam_{i+1}) s^2.
inline double solve_s(double rho, double lam_prev, double lam_self,
                      double lam_next, double tau_self) {
  if (!(rho > 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "crossratio " << rho << " must exceed 1";
    throw Error(ErrorKind::NoPositiveRoot, msg.str());
  }
  const QuadraticCoefficients c =
      crossratio_coefficients(lam_prev, lam_self, lam_next, tau_self);
  if (!(c.quadratic > 0.0 && c.linear > 0.0)) {
    throw Error(ErrorKind::InvalidValue,
                "crossratio quadratic needs positive coefficients");
  }
  // a s^2 + b s + (1 - rho) = 0 with a, b > 0 > c. The product of the roots
  // is negative; the positive one is c / q with q = -(b + sqrt(b^2 - 4ac))/2.
  const double constant = 1.0 - rho;
  const double disc =
      c.linear * c.linear - 4.0 * c.quadratic * constant;
  const double q = -0.5 * (c.linear + std::sqrt(disc));
  return constant / q;
}

struct ConsistencyReport {
  std::array<double, 3> crossratio{};
  std::array<double, 3> residual{};     // |rho_i - rhs_i(s)|
  std::array<double, 3> recovered_s{};  // solve_s on equation i
  double max_residual = 0.0;
  double max_s_error = 0.0;
  /// The three quadratics involve (lambda_i, tau_i, s) only.
  static constexpr const char* note =
      "t does not enter the crossratio quadratics";
};

inline ConsistencyReport internal_consistency(const GoldmanPants& g) {
  const FGPants f = goldman_to_fg(g);
  ConsistencyReport report;
  report.crossratio = crossratios(f);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t n = cyc_next(k);
    const std::size_t p = cyc_prev(k);
    const QuadraticCoefficients c = crossratio_coefficients(
        g.boundary[p].lambda, g.boundary[k].lambda, g.boundary[n].lambda,
        g.boundary[k].tau);
    const double rhs = 1.0 + c.linear * g.s + c.quadratic * g.s * g.s;
    report.residual[k] = std::abs(report.crossratio[k] - rhs);
    report.recovered_s[k] =
        solve_s(report.crossratio[k], g.boundary[p].lambda,
                g.boundary[k].lambda, g.boundary[n].lambda, g.boundary[k].tau);
    report.max_residual = std::max(report.max_residual, report.residual[k]);
    report.max_s_error =
        std::max(report.max_s_error, std::abs(report.recovered_s[k] - g.s));
  }
  return report;
}

}  // namespace projcoords
