#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "context.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "presheaf.hpp"
#include "transcript.hpp"

namespace kanlab {

/// ⟨1, i⟩: X -> X × I for i: X -> I.
inline PresheafMap graph_map(const PresheafContext& ctx, const PresheafMap& i) {
  if (!(i.target() == ctx.interval())) throw ContractError("graph_map: map does not land in the interval");
  return pair(identity(i.source()), i);
}

/// A generating trivial cofibration c ⊗_i δ: Z ⊔_C (C × I) -> Z × I, the
/// cogap map of
///
///     C ---⟨1, ic⟩---> C × I
///     |c                 |c × 1
///     Z ----⟨1, i⟩---> Z × I
struct GtcSpec {
  PresheafMap c;  // C -> Z
  PresheafMap i;  // Z -> I
  ConeResult z_times_i;
  ConeResult c_times_i;
  Square square;
  ConeResult domain;  // pushout of c and ⟨1, ic⟩; in1 from Z, in2 from C × I
  PresheafMap u;      // domain.apex -> Z × I
  std::optional<PresheafMap> point;  // set for the biased form c ⊗ p
  Transcript transcript;

  const Presheaf& D() const { return domain.apex; }
  const Presheaf& codomain() const { return z_times_i.apex; }
};

inline GtcSpec build_gtc(const PresheafContext& ctx, const PresheafMap& c, const PresheafMap& i) {
  if (!ctx.is_cofibration(c))
    throw PreconditionError("build_gtc: c is not in the cofibration class '" + ctx.cofibrations().name + "'");
  if (!(i.source() == c.target())) throw ContractError("build_gtc: i must start at the codomain of c");
  if (!(i.target() == ctx.interval())) throw ContractError("build_gtc: i must land in the interval");

  const auto& I = ctx.interval();
  const auto& C = c.source();
  const auto& Z = c.target();
  auto zi = product(Z, I);
  auto ci = product(C, I);
  Square sq{pair(identity(C), compose(i, c)), c, product_map(c, identity(I)), pair(identity(Z), i)};

  Transcript t;
  if (!t.add("square commutes", sq.commutes())) throw ConstructionError("build_gtc: defining square does not commute");
  auto po = pushout(sq.left, sq.top);
  t.add("pushout computed", true);
  auto u = cogap(po, sq.bottom, sq.right);
  if (!t.add("defining square is a pullback", check_pullback_square(sq)))
    throw ConstructionError("build_gtc: defining square is not a pullback");
  if (!t.add("c x 1 is a cofibration", ctx.is_cofibration(sq.right)))
    throw ConstructionError("build_gtc: c x 1 is not a cofibration");
  const bool restricts = compose(u, po.leg("in1")) == sq.bottom && compose(u, po.leg("in2")) == sq.right;
  if (!t.add("cogap restricts to <1,i> and c x 1", restricts))
    throw ConstructionError("build_gtc: cogap does not restrict to the square's legs");
  return GtcSpec{c, i, std::move(zi), std::move(ci), std::move(sq), std::move(po), std::move(u), std::nullopt, std::move(t)};
}

/// The biased pushout product c ⊗ p for a point p: 1 -> I, realized as
/// c ⊗_i δ with i constant at p.
inline GtcSpec biased_gtc(const PresheafContext& ctx, const PresheafMap& c, const PresheafMap& point) {
  if (!(point.target() == ctx.interval()) || !(point.source() == terminal(ctx.base())))
    throw ContractError("biased_gtc: point must be a map 1 -> I");
  auto spec = build_gtc(ctx, c, compose(point, to_terminal(c.target())));
  spec.point = point;
  return spec;
}

/// Isomorphism φ: D -> X with ⟨1, i⟩∘φ = u for a gtc whose c starts at the
/// initial presheaf.
inline std::optional<PresheafMap> graph_comparison(const PresheafContext& ctx, const GtcSpec& g) {
  return find_isomorphism_over(g.u, graph_map(ctx, g.i), ctx.budget());
}

/// The element of y([1]) at level [0] picking out endpoint eps, for simplex
/// and cube bases.
inline Elem endpoint_element(const IndexCategory& base, int eps) {
  const auto zero = base.object("[0]");
  const auto one = base.object("[1]");
  const std::string id = base.preset().kind == PresetInfo::Kind::cube ? "[0]->[1]:(" + std::to_string(eps) + ")"
                                                                      : "[0]->[1]:" + std::to_string(eps);
  const auto m = base.morphism_by_id(id);
  const auto& h = base.hom(zero, one);
  return static_cast<Elem>(std::find(h.begin(), h.end(), m) - h.begin());
}

/// The point 1 -> y([1]) at endpoint eps.
inline PresheafMap endpoint(const BasePtr& base, int eps) {
  return global_element(yoneda(base, "[1]"), endpoint_element(*base, eps));
}

/// ∂y([n]) -> y([n]): elements factoring through [n-1], for simplex and
/// cube bases.
inline PresheafMap boundary_inclusion(const BasePtr& base, std::size_t n) {
  const auto kind = base->preset().kind;
  if (kind != PresetInfo::Kind::simplex && kind != PresetInfo::Kind::cube)
    throw ContractError("boundary_inclusion needs a simplex or cube base");
  const auto top = base->object("[" + std::to_string(n) + "]");
  const auto y = yoneda(base, top);
  std::vector<std::vector<char>> member(base->object_count());
  for (ObjectId k = 0; k < member.size(); ++k) {
    member[k].assign(y.size(k), 0);
    if (n == 0) continue;
    const auto below = base->object("[" + std::to_string(n - 1) + "]");
    for (MorphismId tau : base->hom(below, top))
      for (MorphismId rho : base->hom(k, below)) member[k][yoneda_index(*base, base->compose(tau, rho))] = 1;
  }
  return subpresheaf(y, member);
}

/// The open prism inclusion Δⁿ × {ε} ∪ ∂Δⁿ × Δ¹ -> Δⁿ × Δ¹ as the gtc with
/// c the boundary inclusion and i constant at ε.
inline GtcSpec prism_gtc(const PresheafContext& ctx, std::size_t n, int eps) {
  const auto& base = ctx.base();
  if (base->preset().kind != PresetInfo::Kind::simplex) throw ContractError("prism_gtc needs a simplex base");
  if (base->preset().n < n + 1)
    throw SizeError("prism_gtc: truncation " + std::to_string(base->preset().n) + " is too small for n = " +
                    std::to_string(n));
  if (eps != 0 && eps != 1) throw ContractError("prism_gtc: eps must be 0 or 1");
  if (!(ctx.interval() == yoneda(base, "[1]"))) throw ContractError("prism_gtc: interval must be y([1])");
  return biased_gtc(ctx, boundary_inclusion(base, n), endpoint(base, eps));
}

} // namespace kanlab
