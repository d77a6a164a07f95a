#pragma once

#include <string>
#include <utility>

#include "context.hpp"
#include "errors.hpp"
#include "gtc.hpp"
#include "lifting.hpp"
#include "limits.hpp"
#include "transcript.hpp"

namespace kanlab {

/// The cube obtained by pulling the defining square of a gtc back along
/// p: X -> Z × I. Corners of the top face: X_C, X_{C×I}, X_Z, X.
struct FrobeniusCube {
  GtcSpec gtc;
  PresheafMap p;
  PresheafMap z;  // X -> Z
  PresheafMap t;  // X -> I
  PulledBackSquare pulled;
  PresheafMap a;      // X_Z -> X
  PresheafMap b;      // X_{C×I} -> X
  ConeResult x_d;     // pushout of the top face; in1 from X_Z, in2 from X_{C×I}
  PresheafMap pstar_u;          // X_D -> X, cogap of the top face
  ConeResult pulled_u;          // pullback of u along p; pr1 to X, pr2 to D
  PresheafMap xd_to_pullback;   // X_D -> pulled_u.apex, an isomorphism over X
  Transcript transcript;

  const Presheaf& X() const { return p.source(); }
  const Presheaf& XC() const { return pulled.tl.apex; }
  const Presheaf& XCI() const { return pulled.tr.apex; }
  const Presheaf& XZ() const { return pulled.bl.apex; }
  const Presheaf& XD() const { return x_d.apex; }
  const PresheafMap& e_z() const { return pulled.face.left; }   // X_C -> X_Z
  const PresheafMap& e_ci() const { return pulled.face.top; }   // X_C -> X_{C×I}
  const PresheafMap& q() const { return pulled.tr.leg("pr2"); }  // X_{C×I} -> C × I
};

inline FrobeniusCube build_cube(const PresheafContext& ctx, const GtcSpec& gtc, const PresheafMap& p) {
  if (!(p.target() == gtc.codomain())) throw ContractError("build_cube: p must land in Z x I");
  Transcript tr;
  auto face = [&](const std::string& name, const Square& sq) {
    if (!tr.add(name + " face is a pullback", check_pullback_square(sq)))
      throw ConstructionError("build_cube: " + name + " face is not a pullback");
  };
  auto pulled = pull_back_square(gtc.square, p);
  face("bottom", gtc.square);
  face("top", pulled.face);
  face("left", pulled.left_face);
  face("back", pulled.back_face);
  face("right", pulled.right_face);
  face("front", pulled.front_face);

  auto a = pulled.face.bottom;
  auto b = pulled.face.right;
  auto po = cogap_of_square(pulled.face);
  auto pb = pullback(p, gtc.u);
  const auto to_d = cogap(po.pushout, compose(gtc.domain.leg("in1"), pulled.bl.leg("pr2")),
                          compose(gtc.domain.leg("in2"), pulled.tr.leg("pr2")));
  auto cmp = gap(pb, po.cogap, to_d);
  if (!tr.add("X_D is the pullback of D", is_iso(cmp)))
    throw ConstructionError("build_cube: pushout of the top face is not the pullback of D");
  ctx.require_h2(b, "b: X_{CxI} -> X");
  tr.add("b is a cofibration", true);

  auto z = compose(gtc.z_times_i.leg("pr1"), p);
  auto t = compose(gtc.z_times_i.leg("pr2"), p);
  if (!tr.add("a equalizes iz and t", is_equalizer_fork(a, compose(gtc.i, z), t)))
    throw ConstructionError("build_cube: a is not an equalizer of iz and t");
  return FrobeniusCube{gtc,       p,  std::move(z),        std::move(t),   std::move(pulled), std::move(a), std::move(b),
                       std::move(po.pushout), std::move(po.cogap), std::move(pb), std::move(cmp), std::move(tr)};
}

/// H: X × I -> X with H∘⟨1,t⟩ = id and p∘H = z × 1, obtained from the
/// witness by presenting ⟨1,t⟩ as the gtc with c: 0 -> X.
inline PresheafMap construct_H(const PresheafContext& ctx, const FrobeniusCube& cube, const FibrationWitness& witness) {
  if (!(witness.map() == cube.p)) throw ContractError("construct_H: witness is for a different map");
  const auto& X = cube.X();
  const auto graph_gtc = build_gtc(ctx, from_initial(X), cube.t);
  const auto phi = graph_comparison(ctx, graph_gtc);
  if (!phi) throw ConstructionError("construct_H: graph of t is not presented by its gtc");
  const auto z_times_1 = product_map(cube.z, identity(ctx.interval()));
  LiftingProblem problem{graph_gtc.u, cube.p, *phi, z_times_1};
  auto H = witness.lift(problem, &graph_gtc);

  const auto xi = product(X, ctx.interval());
  const auto graph_t = graph_map(ctx, cube.t);
  if (!(compose(H, graph_t) == identity(X))) throw ConstructionError("construct_H: H o <1,t> != id");
  if (!(compose(cube.p, H) == z_times_1)) throw ConstructionError("construct_H: p o H != z x 1");
  if (!(compose(cube.z, H) == compose(cube.z, xi.leg("pr1")))) throw ConstructionError("construct_H: z o H != z o pr1");
  if (!(compose(cube.t, H) == xi.leg("pr2"))) throw ConstructionError("construct_H: t o H != pr2");
  return H;
}

/// Exhibits the pullback p*u of a gtc along a fibration as a retract of the
/// gtc v = b ⊗_{iz} δ.
struct RetractCertificate {
  FrobeniusCube cube;
  PresheafMap graph_t;   // ⟨1,t⟩: X -> X × I
  PresheafMap graph_iz;  // ⟨1,iz⟩: X -> X × I
  PresheafMap H;
  GtcSpec v;
  PresheafMap dagger1_left;   // X_Z -> X, equal to a
  PresheafMap dagger1_right;  // X -> X_Z
  PresheafMap dagger2_left;   // X_{C×I} -> X_{C×I} × I
  PresheafMap dagger2_right;  // X_{C×I} × I -> X_{C×I}
  PresheafMap corner_s;       // X_C -> X_{C×I} (corner of v's square)
  PresheafMap corner_r;       // X_{C×I} -> X_C
  RetractData retract;        // p*u as a retract of v.u
  Transcript transcript;
};

inline RetractCertificate pullback_gtc_retract(const PresheafContext& ctx, const GtcSpec& gtc,
                                               const FibrationWitness& witness) {
  auto cube = build_cube(ctx, gtc, witness.map());
  auto H = construct_H(ctx, cube, witness);
  Transcript tr;
  auto require = [&](const std::string& name, bool ok) {
    if (!tr.add(name, ok)) throw ConstructionError("pullback_gtc_retract: " + name);
  };
  const auto& I = ctx.interval();
  const auto& X = cube.X();
  const auto a = cube.a;
  const auto b = cube.b;
  const auto iz = compose(gtc.i, cube.z);
  auto v = build_gtc(ctx, b, iz);
  auto graph_t = graph_map(ctx, cube.t);
  auto graph_iz = graph_map(ctx, iz);
  require("dagger0: H o <1,t> = id", compose(H, graph_t) == identity(X));

  // right arrow: H∘⟨1,iz⟩ factored through a, the equalizer of iz and t
  const auto h_iz = compose(H, graph_iz);
  const auto eq = equalizer(iz, cube.t);
  const auto through_eq = factor_through_mono(eq.leg("incl"), h_iz);
  require("H o <1,iz> equalizes iz and t", through_eq.has_value());
  const auto a_to_eq = factor_through_mono(eq.leg("incl"), a);
  require("a is an equalizer of iz and t", a_to_eq.has_value() && is_iso(*a_to_eq));
  auto r1 = compose(inverse(*a_to_eq), *through_eq);
  require("dagger1 left square commutes", compose(graph_iz, a) == compose(graph_t, a));
  require("dagger1 right square commutes", compose(a, r1) == h_iz);
  require("dagger1 top composite is id", compose(r1, a) == identity(cube.XZ()));

  // the square for H, pulled back along c
  const auto& XCI = cube.XCI();
  const auto xci_i = product(XCI, I);
  const auto xi = product(X, I);
  const auto b_times_1 = product_map(b, identity(I));
  auto s2 = graph_map(ctx, compose(cube.t, b));
  const auto pr_c = compose(gtc.c_times_i.leg("pr1"), cube.q());
  auto r2 = gap(cube.pulled.tr, compose(H, b_times_1), pair(compose(pr_c, xci_i.leg("pr1")), xci_i.leg("pr2")));
  require("dagger2 left square commutes", compose(b_times_1, s2) == compose(graph_t, b));
  require("dagger2 right square commutes", compose(b, r2) == compose(H, b_times_1));
  require("dagger2 top composite is id", compose(r2, s2) == identity(XCI));
  require("X_{CxI} x I is the pullback of X x I along b",
          check_pullback_square(Square{xci_i.leg("pr1"), b_times_1, b, xi.leg("pr1")}));
  require("X_{CxI} is the pullback of z along c", check_pullback_square(Square{pr_c, b, gtc.c, cube.z}));

  // corners at C: both squares are pullbacks, so the maps are induced
  const auto& e_z = cube.e_z();
  const auto& e_ci = cube.e_ci();
  const auto v_pb = pullback(v.square.bottom, v.square.right);
  const auto v_cmp = gap(v_pb, v.square.left, v.square.top);
  auto corner_s = compose(inverse(v_cmp), gap(v_pb, compose(a, e_z), compose(s2, e_ci)));
  const auto top_pb = pullback(a, b);
  const auto top_cmp = gap(top_pb, e_z, e_ci);
  auto corner_r = compose(inverse(top_cmp), gap(top_pb, compose(r1, v.square.left), compose(r2, v.square.top)));
  require("corner retraction composite is id", compose(corner_r, corner_s) == identity(cube.XC()));
  require("section commutes with the squares",
          compose(v.square.left, corner_s) == compose(a, e_z) && compose(v.square.top, corner_s) == compose(s2, e_ci));
  require("retraction commutes with the squares", compose(e_z, corner_r) == compose(r1, v.square.left) &&
                                                      compose(e_ci, corner_r) == compose(r2, v.square.top));

  // functoriality of the pushout
  auto s_dom = cogap(cube.x_d, compose(v.domain.leg("in1"), a), compose(v.domain.leg("in2"), s2));
  auto r_dom = cogap(v.domain, compose(cube.x_d.leg("in1"), r1), compose(cube.x_d.leg("in2"), r2));
  RetractData data{std::move(s_dom), std::move(r_dom), graph_t, H};
  const auto rc = check_retract(cube.pstar_u, v.u, data);
  require("p*u is a retract of v", rc.ok());

  return RetractCertificate{std::move(cube),  std::move(graph_t), std::move(graph_iz), std::move(H),
                            std::move(v),     a,                  std::move(r1),       std::move(s2),
                            std::move(r2),    std::move(corner_s), std::move(corner_r), std::move(data),
                            std::move(tr)};
}

/// The retract data transported to the canonical pullback of u along p.
inline RetractData retract_onto_pullback(const RetractCertificate& cert) {
  const auto& phi = cert.cube.xd_to_pullback;
  const auto phi_inv = inverse(phi);
  return RetractData{compose(cert.retract.s_dom, phi_inv), compose(phi, cert.retract.r_dom), cert.retract.s_cod,
                     cert.retract.r_cod};
}

} // namespace kanlab
