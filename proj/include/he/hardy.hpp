#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Hardy-field functions represented concretely as finite sums of monomials
//   a * t^c * log2(t)^b
// with base-2 logarithms and evaluation domain t >= 2 (so log2 t >= 1).
// The class is closed under differentiation, which is why negative powers of
// t are allowed to appear even though growing families always start positive.

namespace he {

struct HardyMonomial {
  double coef = 0.0;      // a, nonzero after normalization
  double power = 0.0;     // c, exponent of t
  double logpower = 0.0;  // b, exponent of log2 t
};

// Normalized monomial sum: sorted by (power, logpower) descending, duplicate
// exponent pairs merged, zero coefficients dropped. Empty sums are rejected,
// so the zero function is not representable.
class HardyFunction {
 public:
  explicit HardyFunction(std::vector<HardyMonomial> terms);

  const std::vector<HardyMonomial>& monomials() const { return terms_; }
  const HardyMonomial& leading() const { return terms_.front(); }

 private:
  std::vector<HardyMonomial> terms_;
};

using HardyFamily = std::vector<HardyFunction>;

// Parses "1*t^1.5 + 2*t^0.5*log^1" style strings; format_hardy emits the same
// grammar with 17 significant digits so the pair round-trips exactly.
HardyFunction parse_hardy(const std::string& text);
std::string format_hardy(const HardyFunction& f);

// Growth type tau(P): the exponent of t in the leading monomial.
double growth_type(const HardyFunction& f);

// Symbolic derivative of given order, using
//   d/dt [t^a log2(t)^b] = a t^(a-1) log2(t)^b + (b/ln 2) t^(a-1) log2(t)^(b-1).
// order = 0 returns f unchanged. Differentiating a constant would produce the
// empty sum and throws.
HardyFunction derivative(const HardyFunction& f, int order = 1);

enum class FamilyVerdict { MemberOfPPrime, MemberOfP, NotMember };

struct FamilyClass {
  FamilyVerdict verdict = FamilyVerdict::NotMember;
  std::vector<std::string> violations;
};

std::string to_string(FamilyVerdict v);

// Checks the admissibility conditions for a family of growing functions:
// (i)   every growth type lies in (0, inf),
// (ii)  no leading term is a pure integer power of t,
// (iii) growth types are pairwise distinct,
// (iv)  halving/derivative regularity, structurally satisfied by the monomial
//       class and therefore not checked at runtime.
// The stricter verdict additionally requires each leading term to be a pure
// non-integer power (zero logpower). Failures are listed in `violations`;
// MemberOfP keeps the stricter check's failures for diagnostics.
FamilyClass classify_family(const HardyFamily& family);

// (floor(P(n)))_{n=1..N}. n = 1 is evaluated by the limit convention
// t^c -> 1, log2(t)^b -> 0 for b > 0 (b < 0 is a domain error). Floors are
// exact for representable inputs: near-integer values are re-evaluated in
// extended precision, and exactly when each term is coef * s^p for integers
// s, p (e.g. floor(4^1.5) = 8, never 7). Throws domain_error if P changes
// sign on [2, N] and range_error once |P(n)| reaches 2^53, where integer
// floors stop being trustworthy.
std::vector<std::int64_t> floor_orbit(const HardyFunction& f, std::int64_t N);

namespace detail {

// Evaluation without the t >= 2 guard, defined for t > 1 (and t = 1 through
// the limit convention). Used by floor_orbit, correlation_function and the
// continuous multiplier, which integrate down to t = N/2.
double eval_limit(const HardyFunction& f, double t);

}  // namespace detail

// Evaluates f at t >= 2 with compensated summation over the monomials.
// Templated on the scalar so double and long double share one code path.
template <class Scalar>
Scalar eval(const HardyFunction& f, Scalar t) {
  if (!(t >= Scalar(2))) throw std::domain_error("he::eval: t must be >= 2");
  const Scalar lg = std::log2(t);
  Scalar sum = 0, comp = 0;
  for (const auto& m : f.monomials()) {
    Scalar term = Scalar(m.coef) * std::pow(t, Scalar(m.power));
    if (m.logpower != 0.0) term *= std::pow(lg, Scalar(m.logpower));
    const Scalar y = term - comp;
    const Scalar s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace he
