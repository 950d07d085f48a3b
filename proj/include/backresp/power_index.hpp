#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "backresp/error.hpp"
#include "backresp/rational.hpp"

namespace backresp {

enum class IndexKind { Shapley, Banzhaf, Custom };

inline std::string to_string(IndexKind k) {
  switch (k) {
    case IndexKind::Shapley: return "shapley";
    case IndexKind::Banzhaf: return "banzhaf";
    case IndexKind::Custom: return "custom";
  }
  return "?";
}

/// Semivalue weights p_0..p_{n-1}, normalized so that
/// sum_k C(n-1,k) * p_k = 1.
class WeightVector {
 public:
  WeightVector() = default;

  std::size_t player_count() const noexcept { return p_.size(); }
  const Rational& operator[](std::size_t k) const noexcept { return p_[k]; }
  const std::vector<Rational>& weights() const noexcept { return p_; }
  IndexKind kind() const noexcept { return kind_; }

  /// C(n-1,i) * p_i for each size i: the share of the index carried by
  /// coalitions of size i.
  std::vector<Rational> size_masses() const {
    const auto row = binomial_row(static_cast<unsigned>(p_.size() - 1));
    std::vector<Rational> m(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) m[i] = p_[i] * row[i];
    return m;
  }

 private:
  friend WeightVector shapley_weights(std::size_t);
  friend WeightVector banzhaf_weights(std::size_t);
  friend WeightVector validate_custom(std::vector<Rational>, bool);
  WeightVector(IndexKind kind, std::vector<Rational> p) : kind_(kind), p_(std::move(p)) {}

  IndexKind kind_ = IndexKind::Custom;
  std::vector<Rational> p_;
};

/// sum_k C(n-1,k) * p_k
inline Rational normalization_sum(const std::vector<Rational>& p) {
  if (p.empty()) return 0;
  const auto row = binomial_row(static_cast<unsigned>(p.size() - 1));
  Rational sum = 0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * row[k];
  return sum;
}

/// p_i = (n-1-i)! i! / n!
inline WeightVector shapley_weights(std::size_t n) {
  if (n == 0) throw input_error("NoPlayers", "weight vector needs at least one player");
  std::vector<Rational> p(n);
  p[0] = Rational(1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) p[i + 1] = p[i] * Rational(i + 1, n - 1 - i);
  return WeightVector(IndexKind::Shapley, std::move(p));
}

/// p_i = 1 / 2^(n-1)
inline WeightVector banzhaf_weights(std::size_t n) {
  if (n == 0) throw input_error("NoPlayers", "weight vector needs at least one player");
  BigInt pow2 = 1;
  pow2 <<= static_cast<unsigned>(n - 1);
  return WeightVector(IndexKind::Banzhaf, std::vector<Rational>(n, Rational(BigInt(1), pow2)));
}

/// Accepts exactly normalized vectors; nonnegativity is enforced unless
/// `allow_negative` is set.
inline WeightVector validate_custom(std::vector<Rational> p, bool allow_negative = false) {
  if (p.empty()) throw input_error("NoPlayers", "weight vector needs at least one player");
  if (!allow_negative) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] < 0) {
        throw input_error("NegativeWeight", "NegativeWeight(" + std::to_string(k) + "): p_" + std::to_string(k) +
                                                " = " + to_fraction_string(p[k]));
      }
    }
  }
  const Rational sum = normalization_sum(p);
  if (sum != 1) {
    throw input_error("NotNormalized", "NotNormalized(" + to_fraction_string(sum) +
                                           "): sum of C(n-1,k)*p_k must be 1");
  }
  return WeightVector(IndexKind::Custom, std::move(p));
}

/// Custom weight file: `weights <n>` then one `w <k> <num>/<den>` line per
/// k in 0..n-1. '#' comments and blank lines are ignored.
inline std::vector<Rational> parse_weights(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool header = false;
  std::vector<Rational> p;
  std::vector<char> seen;
  auto fail = [&](const std::string& msg) {
    throw input_error("SyntaxError", "weights line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (!header) {
      if (kw != "weights" || !(ls >> n) || n == 0) fail("expected 'weights <n>'");
      header = true;
      p.assign(n, 0);
      seen.assign(n, 0);
    } else if (kw == "w") {
      std::size_t k = 0;
      std::string value;
      if (!(ls >> k >> value)) fail("expected 'w <k> <num>/<den>'");
      if (k >= n) fail("index " + std::to_string(k) + " out of range");
      if (seen[k]) fail("index " + std::to_string(k) + " given twice");
      p[k] = parse_rational(value);
      seen[k] = 1;
    } else {
      fail("unknown directive '" + kw + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (!header) throw input_error("SyntaxError", "weights file is empty");
  for (std::size_t k = 0; k < n; ++k) {
    if (!seen[k]) throw input_error("SyntaxError", "weights file lacks entry for k = " + std::to_string(k));
  }
  return p;
}

inline std::string emit_weights(const WeightVector& w) {
  std::ostringstream out;
  out << "weights " << w.player_count() << '\n';
  for (std::size_t k = 0; k < w.player_count(); ++k) {
    out << "w " << k << ' ' << numerator(w[k]) << '/' << denominator(w[k]) << '\n';
  }
  return out.str();
}

}  // namespace backresp
