#pragma once

// Pointwise residuals of the structure equations, curvature/torsion relations and
// Bismut-flat identities. Every function returns a nonnegative number that is zero
// in exact arithmetic when the identity holds, except where noted.
//
// Index conventions: frame slots a < n are e_a, slots n + a are ebar_a. Covariant
// derivatives T^k_{ij,l} are taken along E_l with the connection named by the function.

#include <vector>

#include "hflat/catalog.hpp"
#include "hflat/geometry.hpp"

namespace hflat {

// Structure equations (any metric).
double chern_structure_residual(PointGeometry& g);
double chern_bianchi_torsion_residual(PointGeometry& g);
/// Needs jet order >= 3.
double chern_bianchi_curvature_residual(PointGeometry& g);
double riemannian_structure_residual(PointGeometry& g);
double gauduchon_residual(PointGeometry& g);
double gray_residual(PointGeometry& g);
double chern_curvature_type_residual(PointGeometry& g);

// Curvature components against torsion and its Chern covariant derivatives.
double chern_curvature_torsion_dbar_residual(PointGeometry& g);
double riem_ijk_lbar_residual(PointGeometry& g);
double riem_ij_kbar_lbar_residual(PointGeometry& g);
double riem_i_jbar_k_lbar_residual(PointGeometry& g);
double riem_holomorphic_vanish_residual(PointGeometry& g);

// Norm relations.
double chern_torsion_norm_residual(PointGeometry& g);
double bismut_torsion_norm_residual(PointGeometry& g);
/// n = 2 only: |T|^2 = 2|eta|^2 and eta_1 = -T^2_12, eta_2 = T^1_12.
double surface_eta_residual(PointGeometry& g);
double bismut_torsion_skew_residual(PointGeometry& g);

// Identities that hold on Bismut-flat metrics (covariant derivatives with the Bismut connection).
double bismut_holomorphic_parallel_residual(PointGeometry& g);
double bismut_torsion_jacobi_residual(PointGeometry& g);
double bismut_dbar_symmetry_residual(PointGeometry& g);
double bismut_dbar_quadratic_residual(PointGeometry& g);
double bismut_eta_trace_residual(PointGeometry& g);
/// -i ddbar omega^{n-1} against (2/n) (sum eta_{i,ibar}) omega^n and (4/3n)(|T|^2 - 2|eta|^2) omega^n.
double bismut_ddbar_omega_residual(PointGeometry& g);
double agricola_friedrich_residual(PointGeometry& g);

// Flatness.
double chern_curvature_norm(PointGeometry& g);
double riemannian_curvature_norm(PointGeometry& g);
double bismut_curvature_norm(PointGeometry& g);
/// |T| when |eta| < 1e-10, else 0.
double balanced_kahler_residual(PointGeometry& g);

// Reference data of catalog models.
double reference_torsion_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g);
double reference_riemannian_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g);

/// Coefficient matrix of ddbar |T|^2 on phi_m ^ phibar_l, row-major n x n, from Bismut
/// covariant derivatives: sum T^i_{jk,lbar} conj(T^i_{jk,mbar}).
std::vector<cplx> psh_exact_side(PointGeometry& g);
/// Same matrix from a finite-difference real Hessian of |T|^2 (step h, one Richardson
/// extrapolation), transformed to the frame. Needs a holomorphic chart.
std::vector<cplx> psh_difference_side(const HermitianModel& m, const ChartPoint& p, PointGeometry& g,
                                      double h = 1e-4);
double psh_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g);
/// Smallest eigenvalue of the finite-difference complex Hessian (a signed quantity).
double psh_min_eigenvalue(const HermitianModel& m, const ChartPoint& p, PointGeometry& g);

}  // namespace hflat
