#pragma once

// Implementation of the projcoords command-line subcommands. Each command
// reads and writes files, reports on the given streams and returns the
// process exit status:
//
//   0  success
//   1  validation or oracle check failed
//   2  parse, schema or usage error
//   3  window, domain or closure violation
//   4  unknown or boundary curve passed to flow
//   5  render chart failure

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "projcoords/coordinate_file.hpp"
#include "projcoords/errors.hpp"
#include "projcoords/flag_oracle.hpp"
#include "projcoords/pants_coords.hpp"
#include "projcoords/render_svg.hpp"
#include "projcoords/surface.hpp"

namespace projcoords::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParse = 2,
  kExitDomain = 3,
  kExitCurve = 4,
  kExitChart = 5,
};

inline constexpr double kOracleTolerance = 1e-9;
inline constexpr double kQuadraticTolerance = 1e-9;
inline constexpr double kConvertedClosureTolerance = 1e-10;
inline constexpr double kSpectrumTolerance = 1e-8;
inline constexpr double kDeterminantTolerance = 1e-10;

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema:
    case ErrorKind::CountMismatch:
    case ErrorKind::SlotReuse:
    case ErrorKind::NonNegativeEuler:
    case ErrorKind::Disconnected:
      return kExitParse;
    case ErrorKind::UnknownCurve:
    case ErrorKind::BoundaryCurve:
      return kExitCurve;
    case ErrorKind::ChartFailure:
      return kExitChart;
    default:
      return kExitDomain;
  }
}

namespace detail {

inline std::optional<CoordinateFile> load(const std::string& path,
                                          std::ostream& err) {
  try {
    return load_coordinate_file(path);
  } catch (const Error& e) {
    err << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

inline SurfaceBD as_bd(const CoordinateFile& file) {
  if (const auto* b = std::get_if<SurfaceBD>(&file.values)) return *b;
  return goldman_to_bd(file.decomposition,
                       std::get<SurfaceGoldman>(file.values));
}

inline std::string sci(double v) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(3) << v;
  return out.str();
}

/// Collects PASS/FAIL lines for the validate report.
class Checklist {
 public:
  explicit Checklist(std::ostream& out) : out_(out) {}

  void record(bool ok, const std::string& item, const std::string& detail) {
    out_ << (ok ? "PASS " : "FAIL ") << item;
    if (!detail.empty()) out_ << "  " << detail;
    out_ << "\n";
    failures_ += ok ? 0 : 1;
  }

  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

inline void check_fg_pants(Checklist& checks, const std::string& label,
                           const FGPants& f) {
  const FgDomainReport domain = validate_fg_domain(f);
  std::string lengths = domain.describe();
  for (char& ch : lengths) ch = ch == '\n' ? ';' : ch;
  checks.record(domain.ok, "length positivity " + label, lengths);
  if (!domain.ok) return;

  const std::array<double, 3> rho = crossratios(f);
  const bool rho_ok = rho[0] > 1.0 && rho[1] > 1.0 && rho[2] > 1.0;
  checks.record(rho_ok, "crossratios > 1 " + label,
                "rho=(" + sci(rho[0]) + ", " + sci(rho[1]) + ", " +
                    sci(rho[2]) + ")");
  try {
    const ConsistencyReport report = internal_consistency(fg_to_goldman(f));
    checks.record(report.max_residual <= kQuadraticTolerance,
                  "crossratio quadratics " + label,
                  "max residual " + sci(report.max_residual) +
                      ", s recovered to " + sci(report.max_s_error));
  } catch (const Error& e) {
    checks.record(false, "crossratio quadratics " + label, e.what());
  }
}

}  // namespace detail

inline int cmd_convert(const std::string& input, CoordinateSystem target,
                       const std::string& output, std::ostream& out,
                       std::ostream& err) {
  auto file = detail::load(input, err);
  if (!file) return kExitParse;
  try {
    if (file->system() != target) {
      if (target == CoordinateSystem::BD) {
        file->values = goldman_to_bd(file->decomposition,
                                     std::get<SurfaceGoldman>(file->values));
      } else {
        file->values = bd_to_goldman(file->decomposition,
                                     std::get<SurfaceBD>(file->values));
      }
    }
  } catch (const Error& e) {
    err << input << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  try {
    save_coordinate_file(*file, output);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitParse;
  }
  out << "wrote " << output << " (" << to_string(target) << ")\n";
  return kExitOk;
}

inline int cmd_validate(const std::string& input, std::ostream& out,
                        std::ostream& err) {
  const auto file = detail::load(input, err);
  if (!file) return kExitParse;
  const PantsDecomposition& d = file->decomposition;
  detail::Checklist checks(out);
  out << "surface: genus " << d.genus() << ", " << d.boundary_count()
      << " boundary curve(s), " << d.pants_count() << " pants, system "
      << to_string(file->system()) << "\n";

  if (const auto* g = std::get_if<SurfaceGoldman>(&file->values)) {
    bool inputs_ok = true;
    for (std::size_t c = 0; c < d.curve_count(); ++c) {
      const BoundaryInvariant& b = g->curves[c];
      const WindowCheck w = check_window(b);
      checks.record(w.ok, "window curve '" + d.curve(c).key + "'",
                    w.message(b.lambda, b.tau));
      inputs_ok = inputs_ok && w.ok;
    }
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      const InternalParams& ip = g->pants[p];
      const bool ok = ip.s > 0.0 && ip.t > 0.0;
      checks.record(ok, "internal parameters pants '" + d.pants_keys()[p] + "'",
                    "s=" + detail::sci(ip.s) + " t=" + detail::sci(ip.t));
      inputs_ok = inputs_ok && ok;
    }
    if (inputs_ok) {
      const SurfaceBD b = goldman_to_bd(d, *g);
      for (std::size_t p = 0; p < d.pants_count(); ++p) {
        detail::check_fg_pants(checks, "pants '" + d.pants_keys()[p] + "'",
                               b.pants[p]);
      }
      const ClosureReport closure = validate_closure(d, b);
      for (const CurveClosure& c : closure.curves) {
        const double r = std::max(c.residual1, c.residual2);
        checks.record(r <= kConvertedClosureTolerance,
                      "closure curve '" + c.curve + "'",
                      "residual " + detail::sci(r));
      }
    }
  } else {
    const auto& b = std::get<SurfaceBD>(file->values);
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      detail::check_fg_pants(checks, "pants '" + d.pants_keys()[p] + "'",
                             b.pants[p]);
    }
    const ClosureReport closure = validate_closure(d, b);
    for (const CurveClosure& c : closure.curves) {
      checks.record(c.residual1 <= kClosureTolerance &&
                        c.residual2 <= kClosureTolerance,
                    "closure curve '" + c.curve + "'",
                    "|ell1-ell2'|=" + detail::sci(c.residual1) +
                        " |ell2-ell1'|=" + detail::sci(c.residual2));
    }
  }
  out << (checks.failures() == 0 ? "all checks passed"
                                 : std::to_string(checks.failures()) +
                                       " check(s) failed")
      << "\n";
  return checks.failures() == 0 ? kExitOk : kExitCheckFailed;
}

inline int cmd_oracle(const std::string& input, bool monodromy,
                      std::ostream& out, std::ostream& err) {
  const auto file = detail::load(input, err);
  if (!file) return kExitParse;
  const PantsDecomposition& d = file->decomposition;
  SurfaceBD b;
  try {
    b = detail::as_bd(*file);
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      const FgDomainReport domain = validate_fg_domain(b.pants[p]);
      if (!domain.ok) {
        throw Error(ErrorKind::DomainViolation,
                    "pants '" + d.pants_keys()[p] +
                        "': length functions must be positive\n" +
                        domain.describe());
      }
    }
  } catch (const Error& e) {
    err << input << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  bool ok = true;
  out << std::left << std::setw(12) << "pants" << std::setw(14) << "max shear"
      << std::setw(14) << "tau+" << std::setw(14) << "tau+ + tau-"
      << "status\n";
  for (std::size_t p = 0; p < d.pants_count(); ++p) {
    const std::string& key = d.pants_keys()[p];
    try {
      const OracleReport r = oracle_check(b.pants[p]);
      double shear = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        shear = std::max({shear, r.sigma1_residual[k], r.sigma2_residual[k]});
      }
      const bool pass = r.max_residual <= kOracleTolerance;
      ok = ok && pass;
      out << std::setw(12) << key << std::setw(14) << detail::sci(shear)
          << std::setw(14) << detail::sci(r.tau_plus_residual) << std::setw(14)
          << detail::sci(r.tau_sum_residual) << (pass ? "ok" : "FAIL") << "\n";
    } catch (const Error& e) {
      ok = false;
      out << std::setw(12) << key << "FAIL " << e.what() << "\n";
    }
  }

  if (monodromy) {
    for (std::size_t p = 0; p < d.pants_count(); ++p) {
      const std::string& key = d.pants_keys()[p];
      try {
        const GoldmanPants g = fg_to_goldman(b.pants[p]);
        const std::array<EigenTriple, 3> spectra = validated_spectra(g);
        const MonodromyResult m =
            reconstruct_monodromy(config_from_fg(b.pants[p]), spectra);
        for (std::size_t k = 0; k < 3; ++k) {
          const RealEigen e = real_eigen(m.matrices[k]);
          const std::array<double, 3> want{spectra[k].lambda(), spectra[k].mu(),
                                           spectra[k].nu()};
          double spectrum_residual = 0.0;
          for (int i = 0; i < 3; ++i) {
            spectrum_residual =
                std::max(spectrum_residual, std::abs(e.values[i] - want[i]));
          }
          const double det_residual =
              std::abs(m.matrices[k].determinant() - 1.0);
          const bool pass = spectrum_residual <= kSpectrumTolerance &&
                            det_residual <= kDeterminantTolerance;
          ok = ok && pass;
          out << "monodromy " << key << " A" << k + 1 << ": spectrum ("
              << detail::sci(e.values[0]) << ", " << detail::sci(e.values[1])
              << ", " << detail::sci(e.values[2]) << ") residual "
              << detail::sci(spectrum_residual) << ", det-1 "
              << detail::sci(det_residual)
              << (m.ambiguous[k] ? ", several branches match" : "")
              << (pass ? "  ok" : "  FAIL") << "\n";
        }
      } catch (const Error& e) {
        ok = false;
        out << "monodromy " << key << ": FAIL " << e.what() << "\n";
      }
    }
  }
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_flow(const std::string& input, const std::string& curve,
                    std::optional<double> twist, std::optional<double> bulge,
                    const std::string& output, std::ostream& out,
                    std::ostream& err) {
  auto file = detail::load(input, err);
  if (!file) return kExitParse;
  const PantsDecomposition& d = file->decomposition;
  try {
    d.internal_curve(curve);
    std::visit(
        [&](auto& values) {
          if (twist) values = twist_flow(d, values, curve, *twist);
          if (bulge) values = bulge_flow(d, values, curve, *bulge);
        },
        file->values);
    save_coordinate_file(*file, output);
  } catch (const Error& e) {
    err << input << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  out << "wrote " << output << " (" << to_string(file->system()) << ")\n";
  return kExitOk;
}

inline int cmd_render(const std::string& input,
                      const std::optional<std::string>& pants,
                      const std::string& output, std::ostream& out,
                      std::ostream& err) {
  const auto file = detail::load(input, err);
  if (!file) return kExitParse;
  const PantsDecomposition& d = file->decomposition;
  std::size_t index = 0;
  if (pants) {
    const auto found = d.find_pants(*pants);
    if (!found) {
      err << input << ": no pants named '" << *pants << "'\n";
      return kExitParse;
    }
    index = *found;
  }
  std::string svg;
  try {
    const FGPants f = detail::as_bd(*file).pants[index];
    const FgDomainReport domain = validate_fg_domain(f);
    if (!domain.ok) {
      throw Error(ErrorKind::DomainViolation,
                  "pants '" + d.pants_keys()[index] +
                      "': length functions must be positive\n" +
                      domain.describe());
    }
    svg = render_config_svg(config_from_fg(f),
                            "pants " + d.pants_keys()[index]);
  } catch (const Error& e) {
    err << input << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  std::ofstream svg_out(output);
  if (!svg_out) {
    err << "cannot write '" << output << "'\n";
    return kExitParse;
  }
  svg_out << svg;
  out << "wrote " << output << "\n";
  return kExitOk;
}

}  // namespace projcoords::cli
