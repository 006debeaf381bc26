#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "utm/halfline.hpp"
#include "utm/profile.hpp"
#include "utm/signal.hpp"

namespace utm {

/// A function of the tangential variable x′ ∈ ℝ.
///
///   gaussian         w        e^{-(x′/w)²}
///   two_sided_exp    c        e^{-c|x′|}
///   plane_wave       alpha    e^{iαx′}
///
/// All accept `amp`. A plane wave has no L¹ transform; its slice weight is 1
/// at λ′ = α and 0 elsewhere, which is what a per-slice computation needs.
class Tangential {
 public:
  static Tangential closed_form(const std::string& id, Params params = {});
  static const std::vector<std::string>& registry();

  const std::string& id() const { return id_; }
  const Params& params() const { return params_; }

  cplx operator()(double x) const;
  /// ∫ e^{-iλ′x′} a(x′) dx′ (slice weight for plane waves).
  cplx transform(double lambda) const;

 private:
  double param(const std::string& key) const;
  std::string id_;
  Params params_;
};

/// Samples of u0 on a rectangular grid of ℝ × ℝ₊, row-major [x′][x_N].
struct SampledField {
  std::vector<double> tangential_grid;
  std::vector<double> normal_grid;
  std::vector<double> values;
  std::optional<double> normal_decay;  // decay hint for the normal tail
};

/// u0 = a(x′)·b(x_N), or sampled.
class HalfSpaceField {
 public:
  static HalfSpaceField separable(Tangential a, Profile b);
  static HalfSpaceField sampled(SampledField field);

  bool is_separable() const { return !samples_; }
  const Tangential& tangential() const;
  const Profile& normal() const;
  const SampledField& samples() const;

  /// û(λ′, λ_N), Im λ_N ≤ 0. Sampled data: trapezoid in x′ over rows
  /// transformed in x_N.
  cplx transform(double lambda_t, cplx lambda_n) const;
  bool is_trivially_zero() const;

 private:
  std::optional<Tangential> a_;
  std::optional<Profile> b_;
  std::optional<SampledField> samples_;
  std::vector<Profile> rows_;
};

/// g(x′, t) = a(x′)·γ(t).
struct SeparableSignal {
  Tangential a;
  TimeSignal gamma;

  /// ∫₀^t e^{ks} ĝ^{x′}(λ′, s) ds = â(λ′)·γ̃(k, t), scaled.
  ScaledComplex t_transform(double lambda_t, cplx k, double t) const;
};

/// u_t = Δu on ℝ × ℝ₊, u(x′, 0, t) = g(x′, t), u(·, 0) = u0.
struct HalfSpaceProblem2D {
  HalfSpaceProblem2D(HalfSpaceField u0, SeparableSignal g, double T, std::vector<double> lambda_t_grid);

  HalfSpaceField u0;
  SeparableSignal g;
  double T;
  std::vector<double> lambda_t_grid;
};

/// e^{|λ|²t} û(λ, t) − [û₀(λ) − h̃(λ, t) − iλ_N g̃(λ, t)] with |λ|² = λ′² + λ_N²
/// and h = u_{x_N}(x′, 0, ·).
RelationResidual halfspace_global_relation_residual(const HalfSpaceProblem2D& p, const SeparableSignal& h,
                                                    const HalfSpaceField& u_t, double lambda_t, cplx lambda_n,
                                                    double t);

/// u = e^{iax′} e^{−bx_N} e^{(b²−a²)t}: an exact solution for real a and b > 0.
HalfSpaceProblem2D manufactured_plane_wave(double a, double b, double T);
SeparableSignal manufactured_plane_wave_trace(double a, double b, double T);
HalfSpaceField manufactured_plane_wave_snapshot(double a, double b, double t);

struct SliceCertificate {
  double lambda_t = 0.0;
  cplx tangential_weight;  // â(λ′) for separable data
  CertificateReport report;
  /// F(λ′, T) = e^{λ′²T} ĝ^{x′}(λ′, T) in scaled form, when g is nonzero.
  std::optional<ScaledComplex> F;
};

struct HalfSpaceCertificate {
  std::vector<SliceCertificate> slices;
  Verdict verdict = Verdict::inconclusive;
  bool reduced_accuracy = false;  // sampled data
  std::string scan;
};

/// The 1-D certificate slice by slice: gap and M from û₀(λ′, ±λ_N).
HalfSpaceCertificate halfspace_obstruction_certificate(const HalfSpaceField& u0, std::span<const double> lambda_t_grid,
                                                       std::span<const double> normal_scan,
                                                       const SeparableSignal* g = nullptr, double T = 0.0,
                                                       double tolerance = kCertificateTol);

}  // namespace utm
