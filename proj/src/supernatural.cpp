#include "phaselab/supernatural.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "phaselab/error.hpp"

namespace phaselab {

namespace {

Natural checked_mul(Natural a, Natural b) {
  if (b != 0 && a > std::numeric_limits<Natural>::max() / b) throw DomainError("supernatural: witness overflows 64 bits");
  return a * b;
}

Natural checked_pow(Natural p, Natural e) {
  Natural out = 1;
  for (Natural i = 0; i < e; ++i) out = checked_mul(out, p);
  return out;
}

Natural parse_natural(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(std::string(what) + ": expected a natural number, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError(std::string(what) + ": number out of range '" + s + "'");
  }
}

bool is_prime(Natural p) {
  if (p < 2) return false;
  for (Natural d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

std::vector<std::pair<Natural, Natural>> factorize(Natural n) {
  if (n == 0) throw DomainError("factorize: zero has no factorization");
  std::vector<std::pair<Natural, Natural>> out;
  for (Natural p = 2; p * p <= n; ++p) {
    Natural e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

SupernaturalNumber SupernaturalNumber::from_natural(Natural n) {
  SupernaturalNumber s;
  for (const auto& [p, e] : factorize(n)) s.set(p, {false, e});
  return s;
}

Exponent SupernaturalNumber::exponent(Natural p) const {
  const auto it = exps_.find(p);
  return it == exps_.end() ? Exponent{} : it->second;
}

void SupernaturalNumber::set(Natural p, Exponent e) {
  if (!is_prime(p)) throw DomainError("SupernaturalNumber: " + std::to_string(p) + " is not prime");
  if (!e.infinite && e.count == 0) {
    exps_.erase(p);
  } else {
    exps_[p] = e;
  }
}

std::string SupernaturalNumber::to_string() const {
  if (exps_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : exps_) {
    if (!first) os << '*';
    first = false;
    os << p;
    if (e.infinite) {
      os << "^inf";
    } else if (e.count != 1) {
      os << '^' << e.count;
    }
  }
  return os.str();
}

SupernaturalNumber SupernaturalNumber::parse(const std::string& text) {
  SupernaturalNumber s;
  if (text == "1") return s;
  if (text.empty()) throw InputError("supernatural: empty text");
  std::stringstream ss(text);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    const auto caret = factor.find('^');
    const Natural p = parse_natural(factor.substr(0, caret), "supernatural");
    if (!is_prime(p)) throw InputError("supernatural: " + std::to_string(p) + " is not prime");
    Exponent e{false, 1};
    if (caret != std::string::npos) {
      const std::string rest = factor.substr(caret + 1);
      e = rest == "inf" ? Exponent::inf() : Exponent{false, parse_natural(rest, "supernatural exponent")};
    }
    s = mul(s, [&] {
      SupernaturalNumber f;
      f.set(p, e);
      return f;
    }());
  }
  return s;
}

SupernaturalNumber from_type_sequence(const std::vector<Natural>& ns, std::optional<Natural> tail_ratio) {
  SupernaturalNumber out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 2) throw DomainError("from_type_sequence: matrix sizes must be >= 2");
    if (i > 0 && ns[i] % ns[i - 1] != 0) {
      throw DomainError("from_type_sequence: " + std::to_string(ns[i - 1]) + " does not divide " + std::to_string(ns[i]));
    }
    // The chain is increasing in divisibility, so the last entry carries the supremum so far.
    for (const auto& [p, e] : factorize(ns[i])) {
      const Exponent cur = out.exponent(p);
      if (!cur.infinite && cur.count < e) out.set(p, {false, e});
    }
  }
  if (tail_ratio && *tail_ratio > 1) {
    for (const auto& [p, e] : factorize(*tail_ratio)) out.set(p, Exponent::inf());
  }
  return out;
}

SupernaturalNumber mul(const SupernaturalNumber& a, const SupernaturalNumber& b) {
  SupernaturalNumber out = a;
  for (const auto& [p, e] : b.exponents()) {
    const Exponent cur = out.exponent(p);
    if (cur.infinite || e.infinite) {
      out.set(p, Exponent::inf());
    } else {
      out.set(p, {false, cur.count + e.count});
    }
  }
  return out;
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  std::string n = text.substr(0, slash);
  bool negative = false;
  if (!n.empty() && n[0] == '-') {
    negative = true;
    n = n.substr(1);
  }
  const auto num = std::int64_t(parse_natural(n, "rational"));
  const auto den = slash == std::string::npos ? std::int64_t(1) : std::int64_t(parse_natural(text.substr(slash + 1), "rational"));
  if (den == 0) throw InputError("rational: zero denominator");
  return make(negative ? -num : num, den);
}

bool q_contains(const SupernaturalNumber& a, const Rational& r) {
  const Rational q = Rational::make(r.num, r.den);
  for (const auto& [p, e] : factorize(Natural(q.den))) {
    const Exponent ae = a.exponent(p);
    if (!ae.infinite && ae.count < e) return false;
  }
  return true;
}

IsoWitness iso_equivalent(const SupernaturalNumber& a, const SupernaturalNumber& b) {
  IsoWitness w;
  std::map<Natural, bool> primes;
  for (const auto& [p, e] : a.exponents()) primes[p] = true;
  for (const auto& [p, e] : b.exponents()) primes[p] = true;
  for (const auto& [p, unused] : primes) {
    if (a.exponent(p).infinite != b.exponent(p).infinite) return {false, 1, 1};
  }
  for (const auto& [p, unused] : primes) {
    const Exponent ea = a.exponent(p), eb = b.exponent(p);
    if (ea.infinite) continue;
    if (eb.count > ea.count) w.c = checked_mul(w.c, checked_pow(p, eb.count - ea.count));
    if (ea.count > eb.count) w.d = checked_mul(w.d, checked_pow(p, ea.count - eb.count));
  }
  w.equivalent = true;
  return w;
}

std::string to_string(GroupSymbol g) {
  switch (g) {
    case GroupSymbol::zero:
      return "0";
    case GroupSymbol::q_a:
      return "Q(a)";
    case GroupSymbol::z_times_q_a:
      return "Z x Q(a)";
  }
  return "?";
}

std::vector<HomotopyRow> homotopy_table(const SupernaturalNumber&, int k_max) {
  if (k_max < 1) throw DomainError("homotopy_table: k_max must be >= 1");
  std::vector<HomotopyRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    HomotopyRow row{k, GroupSymbol::zero, GroupSymbol::zero};
    if (k % 2 == 1) {
      row.unitary = GroupSymbol::q_a;
      row.isotropy = k == 1 ? GroupSymbol::z_times_q_a : GroupSymbol::q_a;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace phaselab
