#pragma once

// Supernatural numbers, the rational groups Q(a) and the homotopy groups of
// the unitary and isotropy groups of a UHF algebra of type a.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phaselab {

using Natural = std::uint64_t;

/// Exponent in N u {inf}.
struct Exponent {
  bool infinite = false;
  Natural count = 0;

  static Exponent inf() { return {true, 0}; }
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Sparse map prime -> exponent; absent primes have exponent zero.
class SupernaturalNumber {
 public:
  SupernaturalNumber() = default;

  /// Prime factorization of a positive integer.
  static SupernaturalNumber from_natural(Natural n);

  Exponent exponent(Natural p) const;
  /// Sets the exponent of prime `p`; zero erases.
  void set(Natural p, Exponent e);

  const std::map<Natural, Exponent>& exponents() const { return exps_; }

  /// "1", "2^inf*3" and so on.
  std::string to_string() const;
  /// Inverse of to_string: factors "p", "p^k" or "p^inf" joined by '*'.
  static SupernaturalNumber parse(const std::string& text);

  friend bool operator==(const SupernaturalNumber&, const SupernaturalNumber&) = default;

 private:
  std::map<Natural, Exponent> exps_;
};

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<Natural, Natural>> factorize(Natural n);

/**
 *  Per-prime supremum of the exponents of a divisibility chain n_1 | n_2 | ...
 *  A tail ratio r > 1 declares that the chain continues forever by factors of
 *  r, which sets every prime of r to infinity.
 */
SupernaturalNumber from_type_sequence(const std::vector<Natural>& ns, std::optional<Natural> tail_ratio = std::nullopt);

/// Exponentwise sum, infinity absorbing.
SupernaturalNumber mul(const SupernaturalNumber& a, const SupernaturalNumber& b);

/// Exact rational p/q with q > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  /// Reduces to lowest terms.
  static Rational make(std::int64_t num, std::int64_t den);
  /// "p/q" or "p".
  static Rational parse(const std::string& text);
};

/// Whether p/q lies in Q(a): every prime exponent of q is at most a's.
bool q_contains(const SupernaturalNumber& a, const Rational& r);

struct IsoWitness {
  bool equivalent = false;
  Natural c = 1;  ///< a c = b d when equivalent
  Natural d = 1;
};

/// a ~ b iff a c = b d for naturals c, d.
IsoWitness iso_equivalent(const SupernaturalNumber& a, const SupernaturalNumber& b);

enum class GroupSymbol { zero, q_a, z_times_q_a };

std::string to_string(GroupSymbol g);

struct HomotopyRow {
  int k = 0;
  GroupSymbol unitary = GroupSymbol::zero;    ///< pi_k(U(A))
  GroupSymbol isotropy = GroupSymbol::zero;   ///< pi_k(U_omega(A))
};

/// Rows k = 1..k_max.
std::vector<HomotopyRow> homotopy_table(const SupernaturalNumber& a, int k_max);

}  // namespace phaselab
