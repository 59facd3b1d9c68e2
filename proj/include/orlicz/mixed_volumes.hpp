#pragma once

#include <string>
#include <vector>

#include "orlicz/bodies.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

struct MixedVolumeResult {
  double value = 0.0;
  double integrand_min = 0.0;
  double integrand_max = 0.0;
  std::string provenance;  // "atoms:<k>" or "grid:<n>:<m>"
};

/// The measure dS(K, .) flattened to directions, h_K at those directions and masses.
struct KernelData {
  int dim = 0;
  bool atomic = false;
  std::vector<Vec> normals;
  std::vector<double> hK;
  std::vector<double> mass;  // atom mass or f_i w_i
  std::vector<double> f;     // density only
  std::optional<SphereGrid> grid;
  std::string provenance;
};

KernelData kernel_data(const ConvexBody& K, const SphereGrid* grid = nullptr);

/// Support / radial values of a body at the kernel's directions.  Grid-sampled
/// bodies on the kernel's grid are read directly.
std::vector<double> support_at(const ConvexBody& Q, const KernelData& kd);
std::vector<double> radial_at(const ConvexBody& L, const KernelData& kd);
std::vector<double> radial_at(const StarBody& L, const KernelData& kd);

/// (1/n) sum phi(h_Q/h_K) h_K dS(K, .).
MixedVolumeResult v_phi(const ConvexBody& K, const ConvexBody& Q, const OrliczFunction& phi,
                        const SphereGrid* grid = nullptr);
/// Same kernel with argument 1/(rho_L h_K), i.e. V_phi(K, L°).
MixedVolumeResult v_phi_polar(const ConvexBody& K, const StarBody& L, const OrliczFunction& phi,
                              const SphereGrid* grid = nullptr);
MixedVolumeResult v_phi_polar(const ConvexBody& K, const ConvexBody& L, const OrliczFunction& phi,
                              const SphereGrid* grid = nullptr);
/// Kernel on precomputed data; `ratio[j]` is the argument of phi at direction j.
MixedVolumeResult v_phi_kernel(const KernelData& kd, const std::vector<double>& ratio, const OrliczFunction& phi);

/// L_p mixed volume (1/n) int h_L^p h_K^{1-p} dS(K, .); with `polar` the
/// argument is rho_L^{-1} in place of h_L.
double v_p(const ConvexBody& K, const ConvexBody& L, double p, bool polar = false, const SphereGrid* grid = nullptr);
double v_p(const ConvexBody& K, const StarBody& L, double p, const SphereGrid* grid = nullptr);

/// n V_phi(K, B).
double s_phi(const ConvexBody& K, const OrliczFunction& phi, const SphereGrid* grid = nullptr);

/// Second argument of a mixed kernel slot: a convex body Q (argument h_Q/h_K)
/// or, with `polar`, a body whose radial function gives 1/(rho h_K).
struct KernelSlot {
  const ConvexBody* K = nullptr;
  const ConvexBody* Q = nullptr;
  const StarBody* star = nullptr;  // used instead of Q when set (always polar)
  bool polar = false;
  const OrliczFunction* phi = nullptr;
};

/// (1/n) int prod_k [phi_k(arg_k) h_{K_k} f_{K_k}]^{alpha_k} d sigma, all K_k
/// densities on one grid.  Multi-body uses alpha_k = 1/n; the i-th form uses
/// ((n-i)/n, i/n).
double mixed_kernel(const std::vector<KernelSlot>& slots, const std::vector<double>& alpha, const SphereGrid& grid);

double v_phi_multi(const std::vector<ConvexBody>& Ks, const std::vector<ConvexBody>& Qs,
                   const std::vector<OrliczFunction>& phis, const std::vector<bool>& polar_flags,
                   const SphereGrid& grid);

double v_phi_ith(const ConvexBody& K, const ConvexBody& L, const ConvexBody& Q1, const ConvexBody& Q2,
                 const OrliczFunction& phi1, const OrliczFunction& phi2, double i, bool polar1, bool polar2,
                 const SphereGrid& grid);

}  // namespace orlicz
