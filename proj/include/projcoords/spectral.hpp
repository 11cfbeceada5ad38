#pragma once

// Eigenvalue algebra for boundary holonomies. A boundary holonomy in SL(3,R)
// of a convex projective structure has three distinct positive eigenvalues
// lambda < mu < nu with lambda*mu*nu = 1. It is recorded either as that
// spectrum or as the pair (lambda, tau = mu + nu).

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "projcoords/errors.hpp"

namespace projcoords {

inline constexpr double kInvariantTolerance = 1e-12;
inline constexpr double kWindowMargin = 1e-12;

/// Sorted positive spectrum of a boundary holonomy.
class EigenTriple {
 public:
  EigenTriple(double lambda, double mu, double nu)
      : lambda_(lambda), mu_(mu), nu_(nu) {
    if (!(std::isfinite(lambda) && std::isfinite(mu) && std::isfinite(nu))) {
      throw Error(ErrorKind::InvalidValue, "eigenvalues must be finite");
    }
    if (!(0.0 < lambda && lambda < mu && mu < nu)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "eigenvalues must satisfy 0 < lambda < mu < nu, got (" << lambda
          << ", " << mu << ", " << nu << ")";
      throw Error(ErrorKind::InvalidValue, msg.str());
    }
    if (std::abs(lambda * mu * nu - 1.0) > kInvariantTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "eigenvalue product must be 1, got " << lambda * mu * nu;
      throw Error(ErrorKind::InvalidValue, msg.str());
    }
  }

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }

 private:
  double lambda_;
  double mu_;
  double nu_;
};

/// Goldman's boundary pair (lambda, tau). Plain data: the admissible window
/// 2/sqrt(lambda) < tau < lambda + 1/lambda^2 is checked by check_window and
/// enforced by every conversion, so out-of-window values can still be loaded
/// and diagnosed.
struct BoundaryInvariant {
  double lambda = 0.0;
  double tau = 0.0;
};

struct LengthPair {
  double ell1 = 0.0;  // log nu - log mu
  double ell2 = 0.0;  // log mu - log lambda
};

enum class WindowBound {
  None,
  NotFinite,
  LambdaNotPositive,
  LambdaNotBelowOne,
  Lower,
  Upper
};

struct WindowCheck {
  bool ok = false;
  WindowBound violated = WindowBound::None;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();

  std::string message(double lambda, double tau) const {
    std::ostringstream msg;
    msg.precision(17);
    switch (violated) {
      case WindowBound::None:
        msg << "window ok: " << lower << " < tau=" << tau << " < " << upper;
        break;
      case WindowBound::NotFinite:
        msg << "lambda and tau must be finite";
        break;
      case WindowBound::LambdaNotPositive:
        msg << "lambda=" << lambda << " is not positive";
        break;
      case WindowBound::LambdaNotBelowOne:
        msg << "lambda=" << lambda
            << " must be < 1 to be the smallest of a product-one spectrum";
        break;
      case WindowBound::Lower:
        msg << "window lower bound violated: tau=" << tau
            << " must exceed 2*lambda^(-1/2)=" << lower;
        break;
      case WindowBound::Upper:
        msg << "window upper bound violated: tau=" << tau
            << " must be below lambda+lambda^(-2)=" << upper;
        break;
    }
    return msg.str();
  }
};

/// Strict window test. Values within kWindowMargin of either bound count as
/// violations.
inline WindowCheck check_window(double lambda, double tau) {
  WindowCheck result;
  if (!std::isfinite(lambda) || !std::isfinite(tau)) {
    result.violated = WindowBound::NotFinite;
    return result;
  }
  if (!(lambda > 0.0)) {
    result.violated = WindowBound::LambdaNotPositive;
    return result;
  }
  result.lower = 2.0 / std::sqrt(lambda);
  result.upper = lambda + 1.0 / (lambda * lambda);
  // For lambda > 1 both inequalities can hold while mu, nu < lambda; the
  // upper bound only keeps lambda outside [mu, nu].
  if (!(lambda < 1.0 - kWindowMargin)) {
    result.violated = WindowBound::LambdaNotBelowOne;
  } else if (!(tau > result.lower + kWindowMargin)) {
    result.violated = WindowBound::Lower;
  } else if (!(tau < result.upper - kWindowMargin)) {
    result.violated = WindowBound::Upper;
  } else {
    result.ok = true;
  }
  return result;
}

inline WindowCheck check_window(const BoundaryInvariant& b) {
  return check_window(b.lambda, b.tau);
}

/// Recovers (lambda, mu, nu) from (lambda, tau): mu and nu are the roots of
/// z^2 - tau*z + 1/lambda. The small root is taken as 1/(lambda*nu) to avoid
/// cancellation.
inline EigenTriple eigen_from_boundary(const BoundaryInvariant& b) {
  const WindowCheck check = check_window(b);
  if (!check.ok) {
    throw Error(ErrorKind::WindowViolation, check.message(b.lambda, b.tau));
  }
  const double disc = b.tau * b.tau - 4.0 / b.lambda;
  const double nu = 0.5 * (b.tau + std::sqrt(disc));
  const double mu = 1.0 / (b.lambda * nu);
  return EigenTriple(b.lambda, mu, nu);
}

inline BoundaryInvariant boundary_from_eigen(const EigenTriple& e) {
  return {e.lambda(), e.mu() + e.nu()};
}

inline LengthPair length_functions(const EigenTriple& e) {
  return {std::log(e.nu()) - std::log(e.mu()),
          std::log(e.mu()) - std::log(e.lambda())};
}

/// Spectrum of the inverse matrix.
inline EigenTriple inverse_spectrum(const EigenTriple& e) {
  return EigenTriple(1.0 / e.nu(), 1.0 / e.mu(), 1.0 / e.lambda());
}

/// Boundary pair of the same curve with the opposite orientation, i.e. of the
/// inverse holonomy: (1/nu, 1/lambda + 1/mu).
inline BoundaryInvariant reverse_orientation(const BoundaryInvariant& b) {
  const EigenTriple e = eigen_from_boundary(b);
  return {1.0 / e.nu(), 1.0 / e.lambda() + 1.0 / e.mu()};
}

}  // namespace projcoords
