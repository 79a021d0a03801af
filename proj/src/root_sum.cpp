#include "otstruct/root_sum.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "otstruct/errors.hpp"

namespace otstruct {

namespace {

// RAII holder for an MPFR variable.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Encloses the value in [lo, hi] using directed rounding at precision prec.
void enclose(const std::vector<RootSum::Term>& terms, mpfr_prec_t prec, mpfr_ptr lo, mpfr_ptr hi) {
  Mpfr c_lo(prec), c_hi(prec), r_lo(prec), r_hi(prec), t(prec);
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (const auto& term : terms) {
    mpfr_set_q(c_lo.get(), term.coeff.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(c_hi.get(), term.coeff.raw().get_mpq_t(), MPFR_RNDU);
    mpfr_set_z(r_lo.get(), term.radicand.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r_hi.get(), term.radicand.get_mpz_t(), MPFR_RNDU);
    mpfr_sqrt(r_lo.get(), r_lo.get(), MPFR_RNDD);
    mpfr_sqrt(r_hi.get(), r_hi.get(), MPFR_RNDU);
    if (term.coeff.sign() > 0) {
      mpfr_mul(t.get(), c_lo.get(), r_lo.get(), MPFR_RNDD);
      mpfr_add(lo, lo, t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), c_hi.get(), r_hi.get(), MPFR_RNDU);
      mpfr_add(hi, hi, t.get(), MPFR_RNDU);
    } else {
      mpfr_mul(t.get(), c_lo.get(), r_hi.get(), MPFR_RNDD);
      mpfr_add(lo, lo, t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), c_hi.get(), r_lo.get(), MPFR_RNDU);
      mpfr_add(hi, hi, t.get(), MPFR_RNDU);
    }
  }
}

}  // namespace

std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n) {
  if (n <= 0) throw ValidationError("squarefree_split needs a positive integer");
  mpz_class rest = n;
  mpz_class square_root = 1;
  mpz_class kernel = 1;
  // Once every prime below d is removed and d^3 > rest, rest has at most two
  // prime factors, so it is either squarefree or a perfect square.
  constexpr unsigned long kTrialLimit = 1UL << 21;
  for (unsigned long d = 2; d < kTrialLimit; d += (d == 2 ? 1 : 2)) {
    const mpz_class dz(d);
    if (dz * dz * dz > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), d) == 0) continue;
    unsigned count = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d) != 0) {
      rest /= dz;
      ++count;
    }
    for (unsigned i = 0; i < count / 2; ++i) square_root *= dz;
    if (count % 2 == 1) kernel *= dz;
  }
  // Beyond the trial limit a cofactor with three or more large primes is taken
  // as squarefree unless it is a perfect square; coordinates in practice never
  // come close to this size.
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      square_root *= r;
    } else {
      kernel *= rest;
    }
  }
  return {square_root, kernel};
}

RootSum::RootSum(const Rational& r) {
  if (!r.is_zero()) terms_.push_back({mpz_class(1), r});
}

RootSum RootSum::sqrt_of(const Rational& r) {
  if (r.sign() < 0) throw ValidationError("square root of a negative value");
  if (r.is_zero()) return RootSum();
  // sqrt(a/b) = sqrt(a*b) / b
  const mpz_class ab = r.numerator() * r.denominator();
  auto [s, k] = squarefree_split(ab);
  RootSum out;
  out.terms_.push_back({k, Rational(s, r.denominator())});
  return out;
}

bool RootSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().radicand == 1);
}

std::optional<Rational> RootSum::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (is_rational()) return terms_.front().coeff;
  return std::nullopt;
}

int RootSum::sign() const {
  if (terms_.empty()) return 0;
  bool any_pos = false, any_neg = false;
  for (const auto& t : terms_) (t.coeff.sign() > 0 ? any_pos : any_neg) = true;
  if (!any_neg) return 1;
  if (!any_pos) return -1;

  double approx = 0.0, magnitude = 0.0;
  for (const auto& t : terms_) {
    const double v = t.coeff.to_double() * std::sqrt(t.radicand.get_d());
    approx += v;
    magnitude += std::fabs(v);
  }
  if (std::isfinite(approx) && std::isfinite(magnitude) && magnitude > 0.0 &&
      std::fabs(approx) > 1e-12 * magnitude &&
      std::fabs(approx) > 1e-250) {
    return approx > 0 ? 1 : -1;
  }

  // Nonzero by linear independence; refine until the enclosure excludes 0.
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    Mpfr lo(prec), hi(prec);
    enclose(terms_, prec, lo.get(), hi.get());
    if (mpfr_sgn(lo.get()) > 0) return 1;
    if (mpfr_sgn(hi.get()) < 0) return -1;
  }
}

double RootSum::to_double() const {
  if (terms_.empty()) return 0.0;
  Mpfr lo(256), hi(256);
  enclose(terms_, 256, lo.get(), hi.get());
  return mpfr_get_d(lo.get(), MPFR_RNDN);
}

std::string RootSum::to_decimal(int digits) const {
  if (terms_.empty()) return "0";
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits) * 4 + 64;
  Mpfr lo(prec), hi(prec);
  enclose(terms_, prec, lo.get(), hi.get());
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, lo.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string RootSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (!first) {
      os << (c.sign() < 0 ? " - " : " + ");
      c = c.abs();
    }
    if (t.radicand == 1) {
      os << c.str();
    } else if (c == Rational(1)) {
      os << "sqrt(" << t.radicand.get_str() << ")";
    } else if (c == Rational(-1)) {
      os << "-sqrt(" << t.radicand.get_str() << ")";
    } else {
      os << c.str() << "*sqrt(" << t.radicand.get_str() << ")";
    }
    first = false;
  }
  return os.str();
}

void RootSum::add_scaled(const RootSum& o, int direction) {
  if (&o == this) {
    const RootSum copy = o;
    add_scaled(copy, direction);
    return;
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    const int c = (a == terms_.end()) ? 1 : (b == o.terms_.end() ? -1 : cmp(a->radicand, b->radicand));
    if (c < 0) {
      merged.push_back(std::move(*a++));
    } else if (c > 0) {
      merged.push_back({b->radicand, direction > 0 ? b->coeff : -b->coeff});
      ++b;
    } else {
      Rational s = direction > 0 ? a->coeff + b->coeff : a->coeff - b->coeff;
      if (!s.is_zero()) merged.push_back({std::move(a->radicand), std::move(s)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

RootSum& RootSum::operator+=(const RootSum& o) {
  add_scaled(o, 1);
  return *this;
}

RootSum& RootSum::operator-=(const RootSum& o) {
  add_scaled(o, -1);
  return *this;
}

RootSum& RootSum::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

RootSum RootSum::operator-() const {
  RootSum out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

bool operator==(const RootSum& a, const RootSum& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].radicand != b.terms_[i].radicand || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const RootSum& a, const RootSum& b) {
  if (a.is_rational() && b.is_rational()) return *a.as_rational() <=> *b.as_rational();
  const int s = (a - b).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const RootSum& v) { return os << v.str(); }

}  // namespace otstruct
