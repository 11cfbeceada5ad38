#pragma once

// Surfaces glued from pairs of pants, and the Goldman / Bonahon-Dreyer
// coordinate bundles attached to a pants decomposition.
//
// Curve orientation convention: every internal curve has a plus slot and a
// minus slot. Its Goldman pair (lambda, tau) is stored as seen from the pants
// on the plus side; the pants on the minus side sees the reversed curve.
// Boundary curves have a single (plus) slot.
//
// Twist/bulge gauge: u = (sigma1(C) + sigma2(C)) / 2 and
// v = (sigma2(C) - sigma1(C)) / 6, i.e. the translation ambiguity of
// Goldman's (u, v) is fixed at the origin.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "projcoords/errors.hpp"
#include "projcoords/pants_coords.hpp"
#include "projcoords/spectral.hpp"

namespace projcoords {

inline constexpr double kClosureTolerance = 1e-9;

struct SlotRef {
  std::size_t pants = 0;
  std::size_t slot = 0;

  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

/// Transverse-arc datum of an internal curve: the spiraling leaf on the plus
/// side asymptotic to the positive end of the curve, and the leaf on the minus
/// side asymptotic to its negative end. Leaves are indexed 0..2 like B_1..B_3
/// of the respective pants; a leaf adjacent to slot k is B_{k+1} or B_{k-1}.
struct ArcDatum {
  std::size_t left_leaf = 0;
  std::size_t right_leaf = 0;

  friend bool operator==(const ArcDatum&, const ArcDatum&) = default;
};

/// Input to build_decomposition, with pants named by key.
struct DecompositionSpec {
  struct SlotName {
    std::string pants;
    std::size_t slot = 0;
  };
  struct Gluing {
    std::string curve;
    SlotName plus;
    SlotName minus;
    std::optional<ArcDatum> arc;
  };
  struct Boundary {
    std::string curve;
    SlotName slot;
  };

  std::vector<std::string> pants;
  std::vector<Gluing> gluings;
  std::vector<Boundary> boundary;
};

struct Curve {
  std::string key;
  SlotRef plus;
  std::optional<SlotRef> minus;  // empty for boundary curves
  ArcDatum arc;                  // meaningful for internal curves only

  bool internal() const { return minus.has_value(); }
};

/// Validated decomposition. Internal curves come first in curves(), in the
/// order of the gluings, followed by the boundary curves.
class PantsDecomposition {
 public:
  std::size_t genus() const { return genus_; }
  std::size_t boundary_count() const { return boundary_count_; }
  std::size_t pants_count() const { return pants_keys_.size(); }
  std::size_t internal_count() const { return internal_count_; }
  std::size_t curve_count() const { return curves_.size(); }
  int euler_characteristic() const { return -static_cast<int>(pants_count()); }

  const std::vector<std::string>& pants_keys() const { return pants_keys_; }
  const std::vector<Curve>& curves() const { return curves_; }
  const Curve& curve(std::size_t c) const { return curves_.at(c); }

  std::size_t curve_at(std::size_t pants, std::size_t slot) const {
    return slot_curve_.at(pants)[slot];
  }
  bool is_plus_slot(std::size_t pants, std::size_t slot) const {
    return curves_[curve_at(pants, slot)].plus == SlotRef{pants, slot};
  }

  std::optional<std::size_t> find_curve(std::string_view key) const {
    for (std::size_t c = 0; c < curves_.size(); ++c) {
      if (curves_[c].key == key) return c;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> find_pants(std::string_view key) const {
    for (std::size_t p = 0; p < pants_keys_.size(); ++p) {
      if (pants_keys_[p] == key) return p;
    }
    return std::nullopt;
  }

  /// Index of an internal curve, or UnknownCurve / BoundaryCurve.
  std::size_t internal_curve(std::string_view key) const {
    const auto c = find_curve(key);
    if (!c) {
      throw Error(ErrorKind::UnknownCurve,
                  "no curve named '" + std::string(key) + "'");
    }
    if (!curves_[*c].internal()) {
      throw Error(ErrorKind::BoundaryCurve,
                  "curve '" + std::string(key) + "' is a boundary curve");
    }
    return *c;
  }

 private:
  friend PantsDecomposition build_decomposition(const DecompositionSpec&);

  std::vector<std::string> pants_keys_;
  std::vector<Curve> curves_;
  std::vector<std::array<std::size_t, 3>> slot_curve_;
  std::size_t internal_count_ = 0;
  std::size_t genus_ = 0;
  std::size_t boundary_count_ = 0;
};

inline PantsDecomposition build_decomposition(const DecompositionSpec& spec) {
  PantsDecomposition d;
  const std::size_t pants = spec.pants.size();
  if (pants == 0) {
    throw Error(ErrorKind::NonNegativeEuler,
                "a decomposition needs at least one pair of pants");
  }
  std::map<std::string, std::size_t> pants_index;
  for (std::size_t p = 0; p < pants; ++p) {
    if (!pants_index.emplace(spec.pants[p], p).second) {
      throw Error(ErrorKind::InvalidValue,
                  "duplicate pants key '" + spec.pants[p] + "'");
    }
  }
  d.pants_keys_ = spec.pants;

  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  d.slot_curve_.assign(pants, {kUnassigned, kUnassigned, kUnassigned});

  auto resolve = [&](const DecompositionSpec::SlotName& name,
                     const std::string& curve) {
    const auto it = pants_index.find(name.pants);
    if (it == pants_index.end()) {
      throw Error(ErrorKind::InvalidValue, "curve '" + curve +
                                               "' refers to unknown pants '" +
                                               name.pants + "'");
    }
    if (name.slot > 2) {
      throw Error(ErrorKind::InvalidValue,
                  "curve '" + curve + "' uses slot " +
                      std::to_string(name.slot) + " (slots are 0, 1, 2)");
    }
    return SlotRef{it->second, name.slot};
  };
  auto claim = [&](SlotRef ref, std::size_t curve) {
    std::size_t& owner = d.slot_curve_[ref.pants][ref.slot];
    if (owner != kUnassigned) {
      throw Error(ErrorKind::SlotReuse,
                  "slot " + std::to_string(ref.slot) + " of pants '" +
                      d.pants_keys_[ref.pants] + "' is used by both '" +
                      d.curves_[owner].key + "' and '" +
                      d.curves_[curve].key + "'");
    }
    owner = curve;
  };
  auto add_curve = [&](Curve curve) {
    if (d.find_curve(curve.key)) {
      throw Error(ErrorKind::InvalidValue,
                  "duplicate curve key '" + curve.key + "'");
    }
    d.curves_.push_back(std::move(curve));
    return d.curves_.size() - 1;
  };

  for (const auto& gluing : spec.gluings) {
    Curve curve;
    curve.key = gluing.curve;
    curve.plus = resolve(gluing.plus, gluing.curve);
    curve.minus = resolve(gluing.minus, gluing.curve);
    if (curve.plus == *curve.minus) {
      throw Error(ErrorKind::SlotReuse,
                  "curve '" + gluing.curve + "' glues a slot to itself");
    }
    curve.arc = gluing.arc.value_or(
        ArcDatum{cyc_next(curve.plus.slot), cyc_next(curve.minus->slot)});
    auto adjacent = [](std::size_t leaf, std::size_t slot) {
      return leaf == cyc_next(slot) || leaf == cyc_prev(slot);
    };
    if (!adjacent(curve.arc.left_leaf, curve.plus.slot) ||
        !adjacent(curve.arc.right_leaf, curve.minus->slot)) {
      throw Error(ErrorKind::InvalidValue,
                  "arc datum of curve '" + gluing.curve +
                      "' must pick leaves adjacent to the glued slots");
    }
    const std::size_t c = add_curve(curve);
    claim(curve.plus, c);
    claim(*curve.minus, c);
  }
  d.internal_count_ = d.curves_.size();
  for (const auto& boundary : spec.boundary) {
    Curve curve;
    curve.key = boundary.curve;
    curve.plus = resolve(boundary.slot, boundary.curve);
    const std::size_t c = add_curve(curve);
    claim(curve.plus, c);
  }
  d.boundary_count_ = d.curves_.size() - d.internal_count_;

  for (std::size_t p = 0; p < pants; ++p) {
    for (std::size_t s = 0; s < 3; ++s) {
      if (d.slot_curve_[p][s] == kUnassigned) {
        throw Error(ErrorKind::CountMismatch,
                    "slot " + std::to_string(s) + " of pants '" +
                        d.pants_keys_[p] +
                        "' is neither glued nor a boundary curve");
      }
    }
  }

  // Connectedness through the gluings.
  std::vector<std::size_t> component(pants);
  for (std::size_t p = 0; p < pants; ++p) component[p] = p;
  auto root = [&](std::size_t p) {
    while (component[p] != p) p = component[p] = component[component[p]];
    return p;
  };
  for (std::size_t c = 0; c < d.internal_count_; ++c) {
    component[root(d.curves_[c].plus.pants)] =
        root(d.curves_[c].minus->pants);
  }
  for (std::size_t p = 1; p < pants; ++p) {
    if (root(p) != root(0)) {
      throw Error(ErrorKind::Disconnected,
                  "pants '" + d.pants_keys_[p] + "' is not connected to '" +
                      d.pants_keys_[0] + "'");
    }
  }

  // chi = 2 - 2g - n = -(number of pants).
  const long n = static_cast<long>(d.boundary_count_);
  const long twice_genus = static_cast<long>(pants) + 2 - n;
  if (twice_genus < 0 || twice_genus % 2 != 0 ||
      static_cast<long>(d.internal_count_) != 3 * (twice_genus / 2) + n - 3) {
    throw Error(ErrorKind::CountMismatch,
                std::to_string(pants) + " pants, " +
                    std::to_string(d.internal_count_) + " gluings and " +
                    std::to_string(n) + " boundary curves do not fit a surface");
  }
  d.genus_ = static_cast<std::size_t>(twice_genus / 2);
  return d;
}

// ---------------------------------------------------------------------------
// Coordinate bundles

struct InternalParams {
  double s = 1.0;
  double t = 1.0;
};

struct TwistBulge {
  double u = 0.0;
  double v = 0.0;
};

struct CurveShears {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Indexed like PantsDecomposition: curves[c] for every curve,
/// twist_bulge[c] for internal curves c < internal_count(), pants[p].
struct SurfaceGoldman {
  std::vector<BoundaryInvariant> curves;
  std::vector<InternalParams> pants;
  std::vector<TwistBulge> twist_bulge;

  std::size_t scalar_count() const {
    return 2 * (curves.size() + pants.size() + twist_bulge.size());
  }
};

struct SurfaceBD {
  std::vector<FGPants> pants;
  std::vector<CurveShears> curve_shears;  // internal curves only

  std::size_t scalar_count() const {
    return 8 * pants.size() + 2 * curve_shears.size();
  }
};

struct CoordinateCounts {
  long goldman_total = 0;
  long bd_raw = 0;
  long closure_constraints = 0;
};

inline CoordinateCounts coordinate_count(long genus, long boundary) {
  if (genus < 0 || boundary < 0 || 2 - 2 * genus - boundary >= 0) {
    throw Error(ErrorKind::NonNegativeEuler,
                "need 2 - 2g - n < 0, got g=" + std::to_string(genus) +
                    " n=" + std::to_string(boundary));
  }
  CoordinateCounts out;
  out.goldman_total = 16 * genus + 8 * boundary - 16;
  out.bd_raw = 22 * genus + 10 * boundary - 22;
  out.closure_constraints = 2 * (3 * genus + boundary - 3);
  const long chi = 2 - 2 * genus - boundary;
  if (out.goldman_total != -8 * chi ||
      out.bd_raw - out.closure_constraints != out.goldman_total) {
    throw std::logic_error("coordinate count identities failed");
  }
  return out;
}

inline CoordinateCounts coordinate_count(const PantsDecomposition& d) {
  return coordinate_count(static_cast<long>(d.genus()),
                          static_cast<long>(d.boundary_count()));
}

namespace detail {

inline void check_shape(const PantsDecomposition& d, const SurfaceGoldman& g) {
  if (g.curves.size() != d.curve_count() || g.pants.size() != d.pants_count() ||
      g.twist_bulge.size() != d.internal_count()) {
    throw Error(ErrorKind::InvalidValue,
                "Goldman coordinates do not match the decomposition");
  }
}

inline void check_shape(const PantsDecomposition& d, const SurfaceBD& b) {
  if (b.pants.size() != d.pants_count() ||
      b.curve_shears.size() != d.internal_count()) {
    throw Error(ErrorKind::InvalidValue,
                "Bonahon-Dreyer coordinates do not match the decomposition");
  }
}

}  // namespace detail

/// Boundary data of pants p in that pants' own convention.
inline GoldmanPants pants_goldman(const PantsDecomposition& d,
                                  const SurfaceGoldman& g, std::size_t p) {
  GoldmanPants out;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t c = d.curve_at(p, k);
    try {
      out.boundary[k] = d.is_plus_slot(p, k)
                            ? g.curves[c]
                            : reverse_orientation(g.curves[c]);
    } catch (const Error& e) {
      throw Error(e.kind(), "curve '" + d.curve(c).key + "': " + e.what());
    }
  }
  out.s = g.pants[p].s;
  out.t = g.pants[p].t;
  return out;
}

inline SurfaceBD goldman_to_bd(const PantsDecomposition& d,
                               const SurfaceGoldman& g) {
  detail::check_shape(d, g);
  for (std::size_t c = 0; c < d.curve_count(); ++c) {
    const WindowCheck check = check_window(g.curves[c]);
    if (!check.ok) {
      throw Error(ErrorKind::WindowViolation,
                  "curve '" + d.curve(c).key + "': " +
                      check.message(g.curves[c].lambda, g.curves[c].tau));
    }
  }
  SurfaceBD out;
  out.pants.reserve(d.pants_count());
  for (std::size_t p = 0; p < d.pants_count(); ++p) {
    const GoldmanPants local = pants_goldman(d, g, p);
    try {
      out.pants.push_back(goldman_to_fg(local));
    } catch (const Error& e) {
      throw Error(e.kind(), "pants '" + d.pants_keys()[p] + "': " + e.what());
    }
  }
  for (const TwistBulge& tb : g.twist_bulge) {
    out.curve_shears.push_back({tb.u - 3.0 * tb.v, tb.u + 3.0 * tb.v});
  }
  return out;
}

struct CurveClosure {
  std::string curve;
  LengthPair plus_side;
  LengthPair minus_side;
  double residual1 = 0.0;  // |ell1 - ell2'|
  double residual2 = 0.0;  // |ell2 - ell1'|
};

struct ClosureReport {
  std::vector<CurveClosure> curves;
  double max_residual = 0.0;

  bool ok(double tol = kClosureTolerance) const {
    return std::all_of(curves.begin(), curves.end(), [&](const auto& c) {
      return c.residual1 <= tol && c.residual2 <= tol;
    });
  }
};

/// The two pants adjacent to an internal curve must see the same spectrum up
/// to inversion, i.e. (ell1, ell2) on the plus side equals (ell2', ell1') on
/// the minus side.
inline ClosureReport validate_closure(const PantsDecomposition& d,
                                      const SurfaceBD& b) {
  detail::check_shape(d, b);
  ClosureReport report;
  for (std::size_t c = 0; c < d.internal_count(); ++c) {
    const Curve& curve = d.curve(c);
    CurveClosure item;
    item.curve = curve.key;
    item.plus_side = fg_lengths(b.pants[curve.plus.pants])[curve.plus.slot];
    item.minus_side =
        fg_lengths(b.pants[curve.minus->pants])[curve.minus->slot];
    item.residual1 = std::abs(item.plus_side.ell1 - item.minus_side.ell2);
    item.residual2 = std::abs(item.plus_side.ell2 - item.minus_side.ell1);
    report.max_residual = std::max(
        {report.max_residual, item.residual1, item.residual2});
    report.curves.push_back(std::move(item));
  }
  return report;
}

inline SurfaceGoldman bd_to_goldman(const PantsDecomposition& d,
                                    const SurfaceBD& b) {
  const ClosureReport closure = validate_closure(d, b);
  if (!closure.ok()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "boundary spectra disagree across curves:";
    for (const CurveClosure& c : closure.curves) {
      if (c.residual1 > kClosureTolerance || c.residual2 > kClosureTolerance) {
        msg << " '" << c.curve << "' (residuals " << c.residual1 << ", "
            << c.residual2 << ")";
      }
    }
    throw Error(ErrorKind::ClosureViolation, msg.str());
  }
  std::vector<GoldmanPants> local;
  local.reserve(d.pants_count());
  for (std::size_t p = 0; p < d.pants_count(); ++p) {
    try {
      local.push_back(fg_to_goldman(b.pants[p]));
    } catch (const Error& e) {
      throw Error(e.kind(), "pants '" + d.pants_keys()[p] + "': " + e.what());
    }
  }
  SurfaceGoldman out;
  for (const Curve& curve : d.curves()) {
    out.curves.push_back(local[curve.plus.pants].boundary[curve.plus.slot]);
  }
  for (const GoldmanPants& g : local) out.pants.push_back({g.s, g.t});
  for (const CurveShears& cs : b.curve_shears) {
    out.twist_bulge.push_back({0.5 * (cs.sigma1 + cs.sigma2),
                               (cs.sigma2 - cs.sigma1) / 6.0});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Twist and bulge flows along an internal curve

inline SurfaceGoldman twist_flow(const PantsDecomposition& d, SurfaceGoldman g,
                                 std::string_view curve, double u) {
  detail::check_shape(d, g);
  g.twist_bulge[d.internal_curve(curve)].u += u;
  return g;
}

inline SurfaceBD twist_flow(const PantsDecomposition& d, SurfaceBD b,
                            std::string_view curve, double u) {
  detail::check_shape(d, b);
  CurveShears& cs = b.curve_shears[d.internal_curve(curve)];
  cs.sigma1 += u;
  cs.sigma2 += u;
  return b;
}

inline SurfaceGoldman bulge_flow(const PantsDecomposition& d, SurfaceGoldman g,
                                 std::string_view curve, double v) {
  detail::check_shape(d, g);
  g.twist_bulge[d.internal_curve(curve)].v += v;
  return g;
}

inline SurfaceBD bulge_flow(const PantsDecomposition& d, SurfaceBD b,
                            std::string_view curve, double v) {
  detail::check_shape(d, b);
  CurveShears& cs = b.curve_shears[d.internal_curve(curve)];
  cs.sigma1 -= 3.0 * v;
  cs.sigma2 += 3.0 * v;
  return b;
}

}  // namespace projcoords
