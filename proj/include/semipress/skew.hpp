#pragma once

#include <vector>

#include "semipress/pressure.hpp"
#include "semipress/words.hpp"

namespace semipress {

// Point of the product of the symbol space with the fiber: a finite window of
// the symbol sequence plus the fiber coordinate.
struct SkewPoint {
  OmegaWindow window;
  double x = 0.0;
};

// g(omega, x) = c + phi_{omega_0}(x); the potential kind is shared by every
// generator and instantiated per fiber map.
struct SkewPotential {
  double c = 0.0;
  Potential phi;
};

// One application of the skew map: the window slides left by one (the symbol
// at index 0 drives the fiber), the usable future shrinks by one.
SkewPoint skew_apply(const SemigroupSystem& sys, const SkewPoint& p);

// Birkhoff sum of g over n steps: n*c + S_w phi along the fiber orbit, where
// w is the window's central word read from index 0.
double skew_birkhoff(const SemigroupSystem& sys, const SkewPotential& g,
                     const SkewPoint& p, int n);

struct SkewCell {
  int word_length = 0;
  double epsilon = 0.0;
  int window_k = 0;            // d'-separation scale: eps = 2^-K
  double sep_multiplicity = 0;   // symbolic window classes per central word
  double span_multiplicity = 0;  // the measured K(eps) of the spanning bound
  double log_skew_sep_sum = 0.0;
  double log_skew_span_sum = 0.0;
  double log_fiber_sep_sum = 0.0;  // log of m^n * averaged fiber sum
  double log_fiber_span_sum = 0.0;
  bool sandwich_holds = true;
};

struct SkewEstimate {
  PressureEstimate estimate;
  std::vector<SkewCell> cells;
};

// Upper capacity pressure of the skew product on (symbol space) x cloud:
// the symbolic factor contributes exact window-class counts at scale
// eps = 2^-K, the fiber contributes per-word partition sums; the value is the
// slope of log(separated product sums) in n at the smallest resolved eps.
SkewEstimate skew_capacity_pressure(const SemigroupSystem& sys, const SkewPotential& g,
                                    const SampleCloud& cloud, const Schedule& schedule,
                                    bool one_sided = false, int threads = 1);

struct SkewIdentityReport {
  double lhs = 0.0;  // skew capacity pressure
  double rhs = 0.0;  // log m + fiber capacity pressure + c
  double c = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool sandwich_all_cells = true;
  std::vector<SkewCell> cells;
  Flags flags;
};

SkewIdentityReport verify_theorem_identity(const SemigroupSystem& sys,
                                           const Potential& phi, double c,
                                           const SampleCloud& cloud,
                                           const Schedule& schedule, double tol,
                                           bool one_sided = false, int threads = 1);

}  // namespace semipress
