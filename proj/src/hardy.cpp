#include "he/hardy.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "he/io.hpp"

namespace he {
namespace {

constexpr double kFloorSafe = 9007199254740992.0;  // 2^53

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

// Error-free transforms used to decide floors at integer boundaries.
struct DD {
  double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  DD t = two_sum(s.hi, s.lo);
  return t;
}

// Integer power with overflow guard; returns false past 2^62.
bool pow_checked(std::int64_t base, std::int64_t exp, std::int64_t& out) {
  __int128 acc = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > (static_cast<__int128>(1) << 62) || acc < -(static_cast<__int128>(1) << 62))
      return false;
  }
  out = static_cast<std::int64_t>(acc);
  return true;
}

// Writes power = p/q with the smallest q <= 64 when the exponent is such a
// rational (exact in double arithmetic, e.g. 1.5 = 3/2); false otherwise.
bool rational_exponent(double power, std::int64_t& p, std::int64_t& q) {
  for (std::int64_t den = 1; den <= 64; ++den) {
    const double scaled = power * static_cast<double>(den);
    if (is_integer(scaled) && std::abs(scaled) <= 4096.0) {
      p = static_cast<std::int64_t>(scaled);
      q = den;
      return true;
    }
  }
  return false;
}

// Integer q-th root of t, or false if t is not a perfect q-th power.
bool integer_root(std::int64_t t, std::int64_t q, std::int64_t& root) {
  if (t <= 0) return false;
  const double guess = std::pow(static_cast<double>(t), 1.0 / static_cast<double>(q));
  for (std::int64_t s = std::max<std::int64_t>(1, llround(guess) - 1); s <= llround(guess) + 1; ++s) {
    std::int64_t sp = 0;
    if (pow_checked(s, q, sp) && sp == t) {
      root = s;
      return true;
    }
  }
  return false;
}

// Evaluates one monomial at integer t >= 2. Sets `exact` when the value is
// coef times an exactly representable integer, in which case hi + lo is the
// value with no rounding at all.
DD monomial_at_integer(const HardyMonomial& m, std::int64_t t, bool& exact) {
  exact = false;
  std::int64_t p = 0, q = 0;
  if (rational_exponent(m.power, p, q) && p >= 0) {
    std::int64_t root = 0;
    if (integer_root(t, q, root)) {
      std::int64_t tpow = 0;
      if (pow_checked(root, p, tpow) && tpow < static_cast<std::int64_t>(kFloorSafe)) {
        std::int64_t logfactor = 1;
        bool log_ok = m.logpower == 0.0;
        if (!log_ok && is_integer(m.logpower) && m.logpower > 0.0 && (t & (t - 1)) == 0) {
          // t = 2^j, so log2 t = j exactly.
          std::int64_t j = 0;
          while ((static_cast<std::int64_t>(1) << j) < t) ++j;
          log_ok = pow_checked(j, static_cast<std::int64_t>(m.logpower), logfactor);
        }
        const __int128 full = static_cast<__int128>(tpow) * logfactor;
        if (log_ok && full < static_cast<__int128>(kFloorSafe)) {
          exact = true;
          return two_prod(m.coef, static_cast<double>(static_cast<std::int64_t>(full)));
        }
      }
    }
  }
  // Extended-precision fallback (64-bit mantissa on x86-64).
  const long double td = static_cast<long double>(t);
  long double v = static_cast<long double>(m.coef) * powl(td, static_cast<long double>(m.power));
  if (m.logpower != 0.0) v *= powl(log2l(td), static_cast<long double>(m.logpower));
  const double hi = static_cast<double>(v);
  return {hi, static_cast<double>(v - static_cast<long double>(hi))};
}

// Value at n = 1 under the limit convention. Only zero-logpower terms
// survive; negative logpowers have no finite limit.
double value_at_one(const HardyFunction& f) {
  double sum = 0.0;
  for (const auto& m : f.monomials()) {
    if (m.logpower < 0.0)
      throw std::domain_error("he::floor_orbit: negative logpower has no limit at t = 1");
    if (m.logpower == 0.0) sum += m.coef;
  }
  return sum;
}

}  // namespace

HardyFunction::HardyFunction(std::vector<HardyMonomial> terms) {
  for (const auto& m : terms) {
    if (!std::isfinite(m.coef) || !std::isfinite(m.power) || !std::isfinite(m.logpower))
      throw std::invalid_argument("he::HardyFunction: non-finite monomial field");
  }
  std::sort(terms.begin(), terms.end(), [](const HardyMonomial& a, const HardyMonomial& b) {
    if (a.power != b.power) return a.power > b.power;
    return a.logpower > b.logpower;
  });
  for (const auto& m : terms) {
    if (!terms_.empty() && terms_.back().power == m.power && terms_.back().logpower == m.logpower)
      terms_.back().coef += m.coef;
    else
      terms_.push_back(m);
  }
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const HardyMonomial& m) { return m.coef == 0.0; }),
               terms_.end());
  if (terms_.empty())
    throw std::invalid_argument("he::HardyFunction: empty monomial sum");
}

double growth_type(const HardyFunction& f) { return f.leading().power; }

HardyFunction derivative(const HardyFunction& f, int order) {
  if (order < 0) throw std::invalid_argument("he::derivative: order must be >= 0");
  HardyFunction cur = f;
  static const double inv_ln2 = 1.0 / std::log(2.0);
  for (int k = 0; k < order; ++k) {
    std::vector<HardyMonomial> next;
    for (const auto& m : cur.monomials()) {
      if (m.power != 0.0)
        next.push_back({m.coef * m.power, m.power - 1.0, m.logpower});
      if (m.logpower != 0.0)
        next.push_back({m.coef * m.logpower * inv_ln2, m.power - 1.0, m.logpower - 1.0});
    }
    cur = HardyFunction(std::move(next));  // throws on the all-constant case
  }
  return cur;
}

std::string to_string(FamilyVerdict v) {
  switch (v) {
    case FamilyVerdict::MemberOfPPrime: return "MemberOfPPrime";
    case FamilyVerdict::MemberOfP: return "MemberOfP";
    default: return "NotMember";
  }
}

FamilyClass classify_family(const HardyFamily& family) {
  if (family.empty()) throw std::invalid_argument("he::classify_family: empty family");
  FamilyClass result;
  bool in_p = true;
  std::vector<double> taus;
  for (const auto& f : family) {
    const HardyMonomial& lead = f.leading();
    const double tau = lead.power;
    taus.push_back(tau);
    if (!(tau > 0.0)) {
      result.violations.push_back("(i) growth type not in (0, inf)");
      in_p = false;
    }
    if (lead.logpower == 0.0 && is_integer(lead.power) && lead.power >= 1.0) {
      result.violations.push_back("(ii) polynomial leading term");
      in_p = false;
    }
  }
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    result.violations.push_back("(iii) growth types not pairwise distinct");
    in_p = false;
  }
  if (!in_p) {
    result.verdict = FamilyVerdict::NotMember;
    return result;
  }
  bool pure = true;
  for (const auto& f : family) {
    const HardyMonomial& lead = f.leading();
    if (lead.logpower != 0.0 || is_integer(lead.power)) {
      result.violations.push_back("P': non-integer pure power required");
      pure = false;
      break;
    }
  }
  result.verdict = pure ? FamilyVerdict::MemberOfPPrime : FamilyVerdict::MemberOfP;
  return result;
}

namespace detail {

double eval_limit(const HardyFunction& f, double t) {
  if (!(t >= 1.0)) throw std::domain_error("he::eval_limit: t must be >= 1");
  if (t == 1.0) return value_at_one(f);
  const double lg = std::log2(t);
  double sum = 0.0, comp = 0.0;
  for (const auto& m : f.monomials()) {
    double term = m.coef * std::pow(t, m.power);
    if (m.logpower != 0.0) term *= std::pow(lg, m.logpower);
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace detail

std::vector<std::int64_t> floor_orbit(const HardyFunction& f, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("he::floor_orbit: N must be >= 1");
  std::vector<std::int64_t> orbit;
  orbit.reserve(static_cast<std::size_t>(N));
  int sign_seen = 0;  // first strict sign on [2, N]
  for (std::int64_t n = 1; n <= N; ++n) {
    DD value{};
    if (n == 1) {
      value.hi = value_at_one(f);
    } else {
      for (const auto& m : f.monomials()) {
        bool exact = false;
        value = dd_add(value, monomial_at_integer(m, n, exact));
      }
    }
    if (!(std::abs(value.hi) < kFloorSafe))
      throw std::range_error("he::floor_orbit: |P(n)| reached 2^53, floors unreliable");
    if (n >= 2) {
      const int sign = value.hi > 0.0 ? 1 : (value.hi < 0.0 ? -1 : 0);
      if (sign != 0) {
        if (sign_seen == 0) sign_seen = sign;
        else if (sign != sign_seen)
          throw std::domain_error("he::floor_orbit: P changes sign on [2, N]");
      }
    }
    // hi is within ulp of the true value and lo carries the residual, so the
    // corrected fractional part decides the floor even at integer boundaries.
    double fl = std::floor(value.hi);
    double frac = (value.hi - fl) + value.lo;
    if (frac < 0.0) fl -= 1.0;
    else if (frac >= 1.0) fl += 1.0;
    orbit.push_back(static_cast<std::int64_t>(fl));
  }
  return orbit;
}

namespace {

std::vector<std::string> split_terms(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '+' || c == '-') && i > 0) {
      const char prev = s[i - 1];
      if (prev != 'e' && prev != 'E' && prev != '^' && prev != '*' && prev != '+' && prev != '-') {
        terms.push_back(cur);
        cur.clear();
        if (c == '-') cur += '-';
        continue;
      }
    }
    cur += c;
  }
  terms.push_back(cur);
  return terms;
}

double parse_number(const std::string& s, std::size_t& pos) {
  const char* begin = s.c_str() + pos;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("he::parse_hardy: expected a number in '" + s + "'");
  pos += static_cast<std::size_t>(end - begin);
  return v;
}

HardyMonomial parse_term(const std::string& term) {
  if (term.empty() || term == "-" || term == "+")
    throw std::invalid_argument("he::parse_hardy: empty term");
  HardyMonomial m{1.0, 0.0, 0.0};
  std::size_t pos = 0;
  if (term[pos] == '+') ++pos;
  else if (term[pos] == '-') { m.coef = -1.0; ++pos; }
  if (pos < term.size() && (std::isdigit(static_cast<unsigned char>(term[pos])) || term[pos] == '.'))
    m.coef *= parse_number(term, pos);
  while (pos < term.size()) {
    if (term[pos] == '*') { ++pos; continue; }
    if (term.compare(pos, 3, "log") == 0) {
      pos += 3;
      if (pos < term.size() && term[pos] == '^') { ++pos; m.logpower += parse_number(term, pos); }
      else m.logpower += 1.0;
    } else if (term[pos] == 't') {
      ++pos;
      if (pos < term.size() && term[pos] == '^') { ++pos; m.power += parse_number(term, pos); }
      else m.power += 1.0;
    } else {
      throw std::invalid_argument("he::parse_hardy: cannot parse term '" + term + "'");
    }
  }
  return m;
}

}  // namespace

HardyFunction parse_hardy(const std::string& text) {
  std::vector<HardyMonomial> monomials;
  for (const auto& term : split_terms(text)) monomials.push_back(parse_term(term));
  return HardyFunction(std::move(monomials));
}

std::string format_hardy(const HardyFunction& f) {
  std::string out;
  for (std::size_t i = 0; i < f.monomials().size(); ++i) {
    const auto& m = f.monomials()[i];
    if (i) out += " + ";
    out += fmt_real(m.coef);
    if (m.power != 0.0) out += "*t^" + fmt_real(m.power);
    if (m.logpower != 0.0) out += "*log^" + fmt_real(m.logpower);
  }
  return out;
}

}  // namespace he
