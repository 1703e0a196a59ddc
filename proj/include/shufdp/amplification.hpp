// Copyright 2026 The shufdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Closed-form privacy-amplification, variance, and parameter-planning
// calculus for the shuffle model, with and without shuffler-injected fake
// reports.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "shufdp/errors.hpp"

namespace shufdp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Mechanism { kGrr, kSolh };
enum class AmplifyMethod { kGrr, kUe, kSolh };
enum class AdversaryModel { kServer, kServerPlusUsers, kServerPlusAux };

inline const char* to_string(Mechanism m) {
  return m == Mechanism::kGrr ? "grr" : "solh";
}

// Shared parameter record.  m is the blanket mass the amplification
// bounds operate on.
struct AmplificationParams {
  uint64_t n = 0;
  double delta = 1e-9;
  double epsilon_l = 0;
  double epsilon_c = 0;
  double epsilon_s = kInf;
  uint64_t d = 0;
  uint32_t d_prime = 0;
  uint64_t n_r = 0;

  double m() const {
    return epsilon_c * epsilon_c * static_cast<double>(n - 1) /
           (14.0 * std::log(2.0 / delta));
  }
};

struct VarianceEstimate {
  double variance = kInf;
  bool feasible = false;
  Mechanism mechanism = Mechanism::kGrr;
};

// ---------------------------------------------------------------------------
// Amplification forward direction

inline double binomial_mechanism_eps(double n, double p, double delta) {
  if (!(n * p > 0)) throw InfeasibleError("binomial mechanism: n*p must be > 0");
  if (!(delta > 0 && delta < 1))
    throw InputError("binomial mechanism: delta must be in (0,1)");
  return std::sqrt(14.0 * std::log(2.0 / delta) / (n * p));
}

struct AmplifyResult {
  double eps_c = 0;     // min(raw, eps_l): effective central guarantee
  double raw = 0;       // the closed-form bound before the no-amplification cap
  bool amplified = false;
};

// d_or_dprime: d for GRR, ignored for UE, d' for SOLH.
inline AmplifyResult amplify(AmplifyMethod method, double eps_l, uint64_t n,
                             uint64_t d_or_dprime, double delta) {
  if (!(eps_l > 0)) throw InputError("amplify: eps_l must be > 0");
  if (n < 2) throw InputError("amplify: n must be >= 2");
  double nm1 = static_cast<double>(n - 1);
  double raw = 0;
  switch (method) {
    case AmplifyMethod::kGrr:
    case AmplifyMethod::kSolh:
      raw = std::sqrt(14.0 * std::log(2.0 / delta) *
                      (std::exp(eps_l) + static_cast<double>(d_or_dprime) - 1) /
                      nm1);
      break;
    case AmplifyMethod::kUe:
      raw = 2.0 * std::sqrt(14.0 * std::log(4.0 / delta) *
                            (std::exp(eps_l / 2) + 1) / nm1);
      break;
  }
  AmplifyResult res;
  res.raw = raw;
  res.amplified = raw < eps_l;
  res.eps_c = std::min(raw, eps_l);
  return res;
}

// Rows of the published amplification comparison: three bounds from prior
// work, each with its own validity condition.
enum class Table1Row { kEfmrtt, kCsuzz, kBbgn };

struct Table1Result {
  double eps_c = 0;
  bool condition_satisfied = false;
};

inline Table1Result amplify_table1(Table1Row row, double eps_l, uint64_t n,
                                   uint64_t d, double delta) {
  Table1Result res;
  double dn = static_cast<double>(n);
  switch (row) {
    case Table1Row::kEfmrtt:
      res.eps_c = std::sqrt(144.0 * std::log(1.0 / delta) * eps_l * eps_l / dn);
      res.condition_satisfied = eps_l < 0.5;
      break;
    case Table1Row::kCsuzz:
      res.eps_c =
          std::sqrt(32.0 * std::log(4.0 / delta) * (std::exp(eps_l) + 1) / dn);
      res.condition_satisfied =
          d == 2 && res.eps_c > std::sqrt(192.0 * std::log(4.0 / delta) / dn) &&
          res.eps_c < 1.0;
      break;
    case Table1Row::kBbgn:
      res.eps_c = amplify(AmplifyMethod::kGrr, eps_l, n, d, delta).raw;
      res.condition_satisfied =
          res.eps_c > std::sqrt(14.0 * std::log(2.0 / delta) *
                                static_cast<double>(d) /
                                static_cast<double>(n - 1)) &&
          res.eps_c <= 1.0;
      break;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Inverse direction

namespace detail {

inline double blanket_m(double eps_c, uint64_t n, double delta) {
  return eps_c * eps_c * static_cast<double>(n - 1) /
         (14.0 * std::log(2.0 / delta));
}

inline uint64_t min_n_for_m(double target_m, double eps_c, double delta) {
  double n = target_m * 14.0 * std::log(2.0 / delta) / (eps_c * eps_c) + 1;
  return static_cast<uint64_t>(std::ceil(n)) + 1;
}

}  // namespace detail

inline double invert_amplification(AmplifyMethod method, double eps_c,
                                   uint64_t n, uint64_t d_or_dprime,
                                   double delta) {
  if (method == AmplifyMethod::kUe) {
    double m_ue = eps_c * eps_c * static_cast<double>(n - 1) /
                  (56.0 * std::log(4.0 / delta));
    if (!(m_ue > 2))
      throw InfeasibleError(
          "invert: eps_c too small for UE at this n",
          static_cast<uint64_t>(std::ceil(2 * 56.0 * std::log(4.0 / delta) /
                                          (eps_c * eps_c))) +
              2);
    return 2.0 * std::log(m_ue - 1);
  }
  double m = detail::blanket_m(eps_c, n, delta);
  double D = static_cast<double>(d_or_dprime);
  if (!(m - D + 1 > 1))
    throw InfeasibleError("invert: eps_c too small for this domain at this n",
                          detail::min_n_for_m(D, eps_c, delta));
  return std::log(m - D + 1);
}

// ---------------------------------------------------------------------------
// Variance as a function of the central budget

inline VarianceEstimate var_grr(double eps_c, uint64_t n, uint64_t d,
                                double delta) {
  double m = detail::blanket_m(eps_c, n, delta);
  VarianceEstimate est;
  est.mechanism = Mechanism::kGrr;
  if (m <= static_cast<double>(d)) return est;
  double dd = static_cast<double>(d);
  est.variance = (m - 1) / (static_cast<double>(n) * (m - dd) * (m - dd));
  est.feasible = true;
  return est;
}

inline VarianceEstimate var_ue(double eps_c, uint64_t n, double delta) {
  double m_ue = eps_c * eps_c * static_cast<double>(n - 1) /
                (56.0 * std::log(4.0 / delta));
  VarianceEstimate est;
  est.mechanism = Mechanism::kGrr;  // tag unused for UE
  if (m_ue <= 2) return est;
  est.variance =
      (m_ue - 1) / (static_cast<double>(n) * (m_ue - 2) * (m_ue - 2));
  est.feasible = true;
  return est;
}

// The core objective Var(m, d') the hash-range tuning minimizes.
inline double var_solh_m(double m, double d_prime, uint64_t n) {
  return m * m /
         (static_cast<double>(n) * (m - d_prime) * (m - d_prime) *
          (d_prime - 1));
}

inline VarianceEstimate var_solh(double eps_c, uint64_t n, uint32_t d_prime,
                                 double delta) {
  VarianceEstimate est;
  est.mechanism = Mechanism::kSolh;
  if (d_prime < 2) return est;
  double m = detail::blanket_m(eps_c, n, delta);
  if (m <= static_cast<double>(d_prime)) return est;
  est.variance = var_solh_m(m, static_cast<double>(d_prime), n);
  est.feasible = true;
  return est;
}

// Integer d' minimizing Var(m, d'): nearest-integer rounding of the real
// optimum (m+2)/3, locally repaired by neighbor descent.  Var(m, .) is
// unimodal on [2, m), so the local minimum is the argmin.
inline uint32_t optimal_dprime(double eps_c, uint64_t n, double delta) {
  double m = detail::blanket_m(eps_c, n, delta);
  if (m < 4) throw InfeasibleError("optimal d': m < 4",
                                   detail::min_n_for_m(4, eps_c, delta));
  auto clamp = [&](double x) {
    double hi = std::ceil(m) - 1;
    return std::max(2.0, std::min(hi, x));
  };
  double cur = clamp(std::round((m + 2) / 3));
  double best = var_solh_m(m, cur, n);
  for (;;) {
    double down = clamp(cur - 1), up = clamp(cur + 1);
    double vd = var_solh_m(m, down, n), vu = var_solh_m(m, up, n);
    if (down != cur && vd < best) {
      cur = down;
      best = vd;
    } else if (up != cur && vu < best) {
      cur = up;
      best = vu;
    } else {
      break;
    }
  }
  return static_cast<uint32_t>(cur);
}

// ---------------------------------------------------------------------------
// Mechanism selection

// Picks GRR or SOLH by analytic variance at the central budget held in
// params; ties break to SOLH (smaller communication).
inline Mechanism choose_mechanism(const AmplificationParams& params) {
  double m = params.m();
  std::optional<double> vg, vs;
  VarianceEstimate g = var_grr(params.epsilon_c, params.n, params.d, params.delta);
  if (g.feasible) vg = g.variance;
  if (m > 2) {
    uint32_t dp =
        m >= 4 ? optimal_dprime(params.epsilon_c, params.n, params.delta) : 2;
    VarianceEstimate s = var_solh(params.epsilon_c, params.n, dp, params.delta);
    if (s.feasible) vs = s.variance;
  }
  if (!vg && !vs)
    throw InfeasibleError("choose_mechanism: neither GRR nor SOLH feasible",
                          detail::min_n_for_m(2, params.epsilon_c, params.delta));
  if (!vs) return Mechanism::kGrr;
  if (!vg) return Mechanism::kSolh;
  return *vg < *vs ? Mechanism::kGrr : Mechanism::kSolh;
}

// ---------------------------------------------------------------------------
// Guarantees with fake reports

struct PeosEps {
  double eps_c = 0;         // against the server
  double eps_s = kInf;      // against server + colluding users; inf if n_r = 0
};

// D: d for GRR, d' for SOLH.
inline PeosEps peos_eps(Mechanism mech, double eps_l, uint64_t n, uint64_t n_r,
                        uint64_t D, double delta) {
  (void)mech;  // the two formulas differ only through D
  double L = 14.0 * std::log(2.0 / delta);
  double dD = static_cast<double>(D);
  PeosEps out;
  if (n_r >= 1) out.eps_s = std::sqrt(L * dD / static_cast<double>(n_r));
  double denom = static_cast<double>(n - 1) / (std::exp(eps_l) + dD - 1) +
                 static_cast<double>(n_r) / dD;
  out.eps_c = std::sqrt(L / denom);
  return out;
}

// Estimator variance of a full run with n_r fakes, from the local budget:
// the base-mechanism variance over n + n_r reports, inflated by the
// debiasing rescale ((n+n_r)/n)^2.
inline VarianceEstimate peos_var(Mechanism mech, double eps_l, uint64_t n,
                                 uint64_t n_r, uint64_t D) {
  double N = static_cast<double>(n + n_r);
  double e = std::exp(eps_l);
  double dD = static_cast<double>(D);
  VarianceEstimate est;
  est.mechanism = mech;
  if (!(eps_l > 0)) return est;
  double base;
  if (mech == Mechanism::kGrr) {
    base = (e + dD - 2) / (N * (e - 1) * (e - 1));
  } else {
    if (D < 2) return est;
    base = (e + dD - 1) * (e + dD - 1) / (N * (e - 1) * (e - 1) * (dD - 1));
  }
  double inflate = N / static_cast<double>(n);
  est.variance = base * inflate * inflate;
  est.feasible = true;
  return est;
}

// Same variance expressed from the central budget, using the relation
// e^{eps_l} + d' - 1 = (n-1)/(14 ln(2/delta)/eps_c^2 - n_r/d').
inline VarianceEstimate peos_var_from_eps_c(double eps_c, uint64_t n,
                                            uint64_t n_r, uint32_t d_prime,
                                            double delta) {
  VarianceEstimate est;
  est.mechanism = Mechanism::kSolh;
  if (d_prime < 2) return est;
  double a = 14.0 * std::log(2.0 / delta) / (eps_c * eps_c);
  double dD = static_cast<double>(d_prime);
  double denom = a - static_cast<double>(n_r) / dD;
  if (!(denom > 0)) return est;
  double m = static_cast<double>(n - 1) / denom;
  if (m <= dD) return est;
  double N = static_cast<double>(n + n_r);
  est.variance = m * m * N /
                 (static_cast<double>(n) * static_cast<double>(n) * (m - dD) *
                  (m - dD) * (dD - 1));
  est.feasible = true;
  return est;
}

// Integer search for the d' minimizing the fake-augmented variance; the
// closed form ((n-1+n_r)/a + 2)/3 serves as a cross-check, not ground truth.
inline uint32_t peos_optimal_dprime(double eps_c, uint64_t n, uint64_t n_r,
                                    double delta) {
  double a = 14.0 * std::log(2.0 / delta) / (eps_c * eps_c);
  double lo_real = static_cast<double>(n_r) / a;           // need a > n_r/d'
  double hi_real = (static_cast<double>(n - 1) + static_cast<double>(n_r)) / a;
  uint64_t lo = std::max<uint64_t>(2, static_cast<uint64_t>(std::floor(lo_real)) + 1);
  if (!(hi_real > static_cast<double>(lo)))
    throw InfeasibleError("peos optimal d': infeasible budget",
                          detail::min_n_for_m(2, eps_c, delta));
  uint64_t hi = static_cast<uint64_t>(std::ceil(hi_real)) - 1;
  if (hi < lo) hi = lo;
  auto value = [&](uint64_t dp) {
    VarianceEstimate v =
        peos_var_from_eps_c(eps_c, n, n_r, static_cast<uint32_t>(dp), delta);
    return v.feasible ? v.variance : kInf;
  };
  // Ternary search over the unimodal integer objective.
  while (hi - lo > 2) {
    uint64_t m1 = lo + (hi - lo) / 3;
    uint64_t m2 = hi - (hi - lo) / 3;
    if (value(m1) <= value(m2))
      hi = m2 - 1;
    else
      lo = m1 + 1;
  }
  uint64_t best = lo;
  for (uint64_t dp = lo; dp <= hi; ++dp)
    if (value(dp) < value(best)) best = dp;
  if (value(best) == kInf)
    throw InfeasibleError("peos optimal d': infeasible budget",
                          detail::min_n_for_m(2, eps_c, delta));
  return static_cast<uint32_t>(best);
}

// ---------------------------------------------------------------------------
// Parameter planning

struct PlanResult {
  Mechanism mechanism = Mechanism::kSolh;
  double eps_l = 0;
  uint64_t n_r = 0;
  uint32_t d_prime = 0;  // 0 for GRR
  double variance = kInf;
  // Achieved guarantees against Adv / Adv_u / Adv_a; each capped by eps_l
  // (the local randomizer alone already provides eps_l against everyone).
  double achieved_eps_c = kInf;
  double achieved_eps_s = kInf;
  double achieved_eps_l = kInf;
};

namespace detail {

// Smallest n_r satisfying both collusion-side constraints at this (eps_l, D).
// Against server + users (eps2) the honest blanket does not count, so fakes
// alone must carry it.  Against the server (eps1) amplification contributes
// (n-1)/(e^eps_l + D - 1); fakes only cover the remaining deficit.  Since
// variance grows with n_r at fixed eps_l, this minimum is also optimal.
inline std::optional<uint64_t> min_feasible_fakes(double eps_l, uint64_t n,
                                                  uint64_t D, double delta,
                                                  double eps1, double eps2) {
  double L = 14.0 * std::log(2.0 / delta);
  double dD = static_cast<double>(D);
  double need = 0;
  if (std::isfinite(eps2) && eps_l > eps2) {
    need = L * dD / (eps2 * eps2);
  }
  if (std::isfinite(eps1) && eps_l > eps1) {
    double have = static_cast<double>(n - 1) / (std::exp(eps_l) + dD - 1);
    double want = L / (eps1 * eps1);
    if (have < want) need = std::max(need, dD * (want - have));
  }
  if (need > 1e15) return std::nullopt;  // absurd fake volume: treat infeasible
  return static_cast<uint64_t>(std::ceil(need - 1e-9));
}

}  // namespace detail

// Variance achieved at one candidate plan point after choosing the minimal
// feasible fake count; nullopt when the point cannot satisfy the targets.
// For SOLH callers supply d_prime; for GRR pass d_prime = 0.
inline std::optional<PlanResult> plan_point(Mechanism mech, double eps_l,
                                            std::optional<uint64_t> forced_n_r,
                                            uint32_t d_prime, uint64_t n,
                                            uint64_t d, double delta,
                                            double eps1, double eps2,
                                            double eps3) {
  if (!(eps_l > 0) || eps_l > eps3) return std::nullopt;
  uint64_t D = mech == Mechanism::kGrr ? d : d_prime;
  if (mech == Mechanism::kSolh && (d_prime < 2 || d_prime > d))
    return std::nullopt;
  // In the fully unconstrained limit the plan must reduce to pure shuffle
  // amplification: fakes are a collusion defense, so without any collusion
  // target eps1 acts only as the post-hoc filter below.
  double eps1_for_fakes =
      !std::isfinite(eps2) && !std::isfinite(eps3) ? kInf : eps1;
  auto need =
      detail::min_feasible_fakes(eps_l, n, D, delta, eps1_for_fakes, eps2);
  if (!need) return std::nullopt;
  uint64_t n_r = forced_n_r ? std::max(*forced_n_r, *need) : *need;
  PeosEps eps = peos_eps(mech, eps_l, n, n_r, D, delta);
  double ach_c = std::min(eps.eps_c, eps_l);
  double ach_s = std::min(eps.eps_s, eps_l);
  if (ach_c > eps1 * (1 + 1e-12) || ach_s > eps2 * (1 + 1e-12))
    return std::nullopt;
  VarianceEstimate var = peos_var(mech, eps_l, n, n_r, D);
  if (!var.feasible) return std::nullopt;
  PlanResult res;
  res.mechanism = mech;
  res.eps_l = eps_l;
  res.n_r = n_r;
  res.d_prime = mech == Mechanism::kSolh ? d_prime : 0;
  res.variance = var.variance;
  res.achieved_eps_c = ach_c;
  res.achieved_eps_s = ach_s;
  res.achieved_eps_l = eps_l;
  return res;
}

namespace detail {

// SOLH hash-range candidates at one eps_l: log-spaced sweep plus local
// integer descent around the best.
inline std::optional<PlanResult> best_solh_at(double eps_l,
                                              std::optional<uint64_t> n_r,
                                              uint64_t n, uint64_t d,
                                              double delta, double eps1,
                                              double eps2, double eps3) {
  uint64_t hi = std::min<uint64_t>(d, 1 << 20);
  std::optional<PlanResult> best;
  auto consider = [&](uint64_t dp) {
    if (dp < 2 || dp > hi) return;
    auto r = plan_point(Mechanism::kSolh, eps_l, n_r,
                        static_cast<uint32_t>(dp), n, d, delta, eps1, eps2,
                        eps3);
    if (r && (!best || r->variance < best->variance)) best = r;
  };
  for (double x = 2; x <= static_cast<double>(hi); x *= 1.25)
    consider(static_cast<uint64_t>(x));
  consider(hi);
  if (!best) return best;
  // local descent
  for (;;) {
    uint64_t cur = best->d_prime;
    auto lo_r = plan_point(Mechanism::kSolh, eps_l, n_r,
                           static_cast<uint32_t>(cur - 1), n, d, delta, eps1,
                           eps2, eps3);
    auto hi_r = plan_point(Mechanism::kSolh, eps_l, n_r,
                           static_cast<uint32_t>(cur + 1), n, d, delta, eps1,
                           eps2, eps3);
    if (lo_r && lo_r->variance < best->variance)
      best = lo_r;
    else if (hi_r && hi_r->variance < best->variance)
      best = hi_r;
    else
      break;
  }
  return best;
}

inline std::optional<PlanResult> best_at_eps_l(double eps_l, uint64_t n,
                                               uint64_t d, double delta,
                                               double eps1, double eps2,
                                               double eps3) {
  auto g = plan_point(Mechanism::kGrr, eps_l, std::nullopt, 0, n, d, delta,
                      eps1, eps2, eps3);
  auto s = best_solh_at(eps_l, std::nullopt, n, d, delta, eps1, eps2, eps3);
  if (!g) return s;
  if (!s) return g;
  return g->variance < s->variance ? g : s;  // tie -> SOLH handled below
}

}  // namespace detail

// Deterministic grid-plus-golden-section search for the PEOS configuration
// minimizing predicted variance subject to the three adversary targets
// eps1 (server), eps2 (server + users), eps3 (server + minority shufflers).
inline PlanResult plan_parameters(double eps1, double eps2, double eps3,
                                  uint64_t n, uint64_t d, double delta) {
  if (!(eps3 > 0)) throw InputError("plan: eps3 must be > 0");
  if (eps1 > eps3)
    throw InputError("plan: eps1 > eps3 is unsatisfiable (eps_c <= eps_l)");
  // Without both collusion targets there are no fakes, so feasibility is
  // amplification alone meeting eps1 and the search stops at the inversion
  // point; otherwise an untargeted eps3 is capped at a generous constant.
  double cap = eps3;
  if (!std::isfinite(eps3) && !std::isfinite(eps2)) {
    cap = 0;
    for (Mechanism mech : {Mechanism::kGrr, Mechanism::kSolh}) {
      try {
        uint64_t D = mech == Mechanism::kGrr ? d : optimal_dprime(eps1, n, delta);
        double el = invert_amplification(mech == Mechanism::kGrr
                                             ? AmplifyMethod::kGrr
                                             : AmplifyMethod::kSolh,
                                         eps1, n, D, delta);
        cap = std::max(cap, el);
      } catch (const InfeasibleError&) {
      }
    }
    if (!(cap > 0)) cap = 40.0;
    cap = std::min(cap, 40.0);
  } else if (!std::isfinite(eps3)) {
    cap = 40.0;
  }
  std::optional<PlanResult> best;
  auto consider = [&](double eps_l) {
    if (!(eps_l > 0) || eps_l > cap) return;
    auto r = detail::best_at_eps_l(eps_l, n, d, delta, eps1, eps2, eps3);
    if (!r) return;
    if (!best || r->variance < best->variance ||
        (r->variance == best->variance &&
         r->mechanism == Mechanism::kSolh &&
         best->mechanism == Mechanism::kGrr)) {
      best = r;
    }
  };
  const int kGrid = 400;
  for (int i = 1; i <= kGrid; ++i) consider(cap * i / kGrid);
  // Analytic candidates: the eps_l at which pure amplification exactly
  // meets eps1 (optimal when the other constraints do not bind).
  for (Mechanism mech : {Mechanism::kGrr, Mechanism::kSolh}) {
    try {
      uint64_t D = mech == Mechanism::kGrr
                       ? d
                       : optimal_dprime(eps1, n, delta);
      double el = invert_amplification(mech == Mechanism::kGrr
                                           ? AmplifyMethod::kGrr
                                           : AmplifyMethod::kSolh,
                                       eps1, n, D, delta);
      consider(std::min(el, cap));
    } catch (const InfeasibleError&) {
    }
  }
  if (best) {
    // Golden-section refinement around the best grid point.
    double step = cap / kGrid;
    double lo = std::max(step * 0.01, best->eps_l - step);
    double hi = std::min(cap, best->eps_l + step);
    const double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    auto val = [&](double el) {
      auto r = detail::best_at_eps_l(el, n, d, delta, eps1, eps2, eps3);
      return r ? r->variance : kInf;
    };
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < 50; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = val(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = val(x2);
      }
    }
    consider((lo + hi) / 2);
  }
  if (!best) {
    std::string binding =
        std::isfinite(eps2) ? "eps2 (server+users)" : "eps1 (server)";
    throw InfeasibleError("plan: no feasible configuration; binding constraint: " +
                          binding);
  }
  return *best;
}

}  // namespace shufdp
