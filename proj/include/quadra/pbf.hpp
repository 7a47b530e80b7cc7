// Copyright 2026 The Quadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUADRA_PBF_HPP_
#define QUADRA_PBF_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace quadra {

/// Index of a binary variable. Variables are always 0-based.
using VarId = std::uint32_t;

/// A monomial is the product of a set of distinct variables, stored as a
/// strictly increasing index vector. The empty key is the constant monomial.
using MonomialKey = std::vector<VarId>;

/// Exact binomial coefficient C(n, k). Falls back to long-double arithmetic
/// if the exact value would overflow 64 bits (relative error ~1e-18, far
/// inside every tolerance used in this library).
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  unsigned __int128 num = 1;
  bool exact = true;
  for (std::size_t i = 1; i <= k; ++i) {
    num = num * (n - k + i) / i;  // stays integral at every step
    if (num > static_cast<unsigned __int128>(1) << 100) {
      exact = false;
      break;
    }
  }
  if (exact) return static_cast<double>(static_cast<long double>(num));
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return static_cast<double>(r);
}

/// Term counts and densities per degree, from 0 up to the degree of the
/// polynomial. The density at degree k is t_k / C(n, k): the fraction of all
/// possible degree-k monomials over n variables that carry a nonzero
/// coefficient.
struct DensityProfile {
  std::vector<std::uint64_t> term_counts;  ///< t_k for k = 0..degree
  std::vector<double> densities;           ///< d_k = t_k / C(num_vars, k)
};

/// A pseudo-Boolean function in sparse multilinear form: a finite sum of
/// coefficient-weighted monomials over binary variables. Because variables
/// are idempotent on {0,1} (x*x = x), every polynomial has a unique
/// multilinear normal form, which this class maintains as an invariant:
/// keys are strictly increasing index vectors, no stored coefficient is
/// zero, and every index is < num_vars(). Terms iterate in lexicographic
/// key order, so all outputs derived from iteration are deterministic.
class Pbf {
 public:
  Pbf() = default;

  /// An identically-zero function over `num_vars` variables.
  explicit Pbf(std::size_t num_vars) : num_vars_(num_vars) {}

  /// Builds the normal form of a raw term list. Raw keys may be unsorted
  /// and may repeat indices (idempotence collapses repeats); coefficients
  /// of equal monomials accumulate, and exact-zero results are dropped.
  /// `num_vars` defaults to 1 + the largest index mentioned (0 if none);
  /// an explicit value must cover every index.
  /// Throws std::invalid_argument on negative indices or an insufficient
  /// explicit `num_vars`.
  static Pbf from_terms(
      const std::vector<std::pair<std::vector<std::int64_t>, double>>& raw,
      std::optional<std::size_t> num_vars = std::nullopt) {
    Pbf f;
    std::size_t max_seen = 0;
    bool any_var = false;
    for (const auto& [indices, coeff] : raw) {
      MonomialKey key;
      key.reserve(indices.size());
      for (std::int64_t ix : indices) {
        if (ix < 0) {
          throw std::invalid_argument("variable index must be non-negative, got " +
                                      std::to_string(ix));
        }
        key.push_back(static_cast<VarId>(ix));
      }
      std::sort(key.begin(), key.end());
      key.erase(std::unique(key.begin(), key.end()), key.end());
      if (!key.empty()) {
        any_var = true;
        max_seen = std::max(max_seen, static_cast<std::size_t>(key.back()));
      }
      f.accumulate(key, coeff);
    }
    std::size_t needed = any_var ? max_seen + 1 : 0;
    if (num_vars) {
      if (*num_vars < needed) {
        throw std::invalid_argument("num_vars " + std::to_string(*num_vars) +
                                    " does not cover largest index " +
                                    std::to_string(max_seen));
      }
      f.num_vars_ = *num_vars;
    } else {
      f.num_vars_ = needed;
    }
    return f;
  }

  std::size_t num_vars() const { return num_vars_; }

  /// Number of stored (nonzero) terms, the constant included when present.
  std::size_t term_count() const { return terms_.size(); }

  bool empty() const { return terms_.empty(); }

  const std::map<MonomialKey, double>& terms() const { return terms_; }

  /// Coefficient of a monomial; 0 when the monomial is absent. The key must
  /// already be a strictly increasing index vector.
  double coefficient(const MonomialKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Largest monomial size with a nonzero coefficient; 0 for constants and
  /// for the zero polynomial.
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [key, coeff] : terms_) d = std::max(d, key.size());
    return d;
  }

  /// Evaluates at a 0/1 assignment of length num_vars().
  /// Throws std::invalid_argument on a length mismatch.
  double evaluate(std::span<const std::uint8_t> assignment) const {
    if (assignment.size() != num_vars_) {
      throw std::invalid_argument("assignment length " +
                                  std::to_string(assignment.size()) +
                                  " != num_vars " + std::to_string(num_vars_));
    }
    double value = 0.0;
    for (const auto& [key, coeff] : terms_) {
      bool on = true;
      for (VarId v : key) {
        if (!assignment[v]) {
          on = false;
          break;
        }
      }
      if (on) value += coeff;
    }
    return value;
  }

  /// Term counts and densities per degree (see DensityProfile). For the zero
  /// polynomial the profile holds the single entry t_0 = 0, d_0 = 0.
  DensityProfile density_profile() const {
    DensityProfile p;
    p.term_counts.assign(degree() + 1, 0);
    for (const auto& [key, coeff] : terms_) ++p.term_counts[key.size()];
    p.densities.resize(p.term_counts.size());
    for (std::size_t k = 0; k < p.term_counts.size(); ++k) {
      double possible = binomial(num_vars_, k);
      p.densities[k] =
          possible == 0.0 ? 0.0 : static_cast<double>(p.term_counts[k]) / possible;
    }
    return p;
  }

  /// Adds `coeff` to the monomial `key` (which must be strictly increasing
  /// with indices < num_vars()), erasing the entry if the sum is exactly 0.
  Pbf& add_term(MonomialKey key, double coeff) {
    if (!key.empty() && key.back() >= num_vars_) {
      throw std::invalid_argument("monomial index " + std::to_string(key.back()) +
                                  " out of range for num_vars " +
                                  std::to_string(num_vars_));
    }
    accumulate(std::move(key), coeff);
    return *this;
  }

  /// Grows the variable count (shrinking below an existing index throws).
  void set_num_vars(std::size_t n) {
    // Lexicographic order does not sort by max index, so scan all keys.
    for (const auto& [key, coeff] : terms_) {
      if (!key.empty() && key.back() >= n) {
        throw std::invalid_argument("num_vars " + std::to_string(n) +
                                    " would orphan stored monomials");
      }
    }
    num_vars_ = n;
  }

  friend bool operator==(const Pbf& a, const Pbf& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

 private:
  void accumulate(MonomialKey key, double coeff) {
    auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
    if (!inserted) it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }

  std::size_t num_vars_ = 0;
  std::map<MonomialKey, double> terms_;
};

/// Sum of two polynomials; the result spans max(num_vars) variables.
inline Pbf add(const Pbf& a, const Pbf& b) {
  Pbf out(std::max(a.num_vars(), b.num_vars()));
  for (const auto& [key, coeff] : a.terms()) out.add_term(key, coeff);
  for (const auto& [key, coeff] : b.terms()) out.add_term(key, coeff);
  return out;
}

/// Scalar multiple. Scaling by 0 yields the zero polynomial.
inline Pbf scale(const Pbf& f, double c) {
  Pbf out(f.num_vars());
  if (c == 0.0) return out;
  for (const auto& [key, coeff] : f.terms()) out.add_term(key, coeff * c);
  return out;
}

/// Product under idempotence: monomial keys merge by set union, so the
/// degree never exceeds the size of the combined support.
inline Pbf multiply(const Pbf& a, const Pbf& b) {
  Pbf out(std::max(a.num_vars(), b.num_vars()));
  MonomialKey merged;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      merged.clear();
      std::set_union(ka.begin(), ka.end(), kb.begin(), kb.end(),
                     std::back_inserter(merged));
      out.add_term(merged, ca * cb);
    }
  }
  return out;
}

/// f * f. On {0,1} inputs this equals evaluate-then-square pointwise.
inline Pbf square(const Pbf& f) { return multiply(f, f); }

inline Pbf operator+(const Pbf& a, const Pbf& b) { return add(a, b); }
inline Pbf operator-(const Pbf& a, const Pbf& b) { return add(a, scale(b, -1.0)); }
inline Pbf operator*(const Pbf& a, const Pbf& b) { return multiply(a, b); }
inline Pbf operator*(double c, const Pbf& f) { return scale(f, c); }
inline Pbf operator*(const Pbf& f, double c) { return scale(f, c); }

/// Serializes to {"num_vars": n, "terms": [{"vars": [...], "coeff": c}, ...]}
/// with terms in lexicographic key order. Round-trips losslessly: nlohmann
/// emits shortest-round-trip doubles.
inline void to_json(nlohmann::json& j, const Pbf& f) {
  j = nlohmann::json::object();
  j["num_vars"] = f.num_vars();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [key, coeff] : f.terms()) {
    terms.push_back({{"vars", key}, {"coeff", coeff}});
  }
  j["terms"] = std::move(terms);
}

inline void from_json(const nlohmann::json& j, Pbf& f) {
  if (!j.is_object() || !j.contains("num_vars") || !j.contains("terms")) {
    throw std::invalid_argument(
        "polynomial JSON must be an object with num_vars and terms");
  }
  std::vector<std::pair<std::vector<std::int64_t>, double>> raw;
  for (const auto& t : j.at("terms")) {
    raw.emplace_back(t.at("vars").get<std::vector<std::int64_t>>(),
                     t.at("coeff").get<double>());
  }
  f = Pbf::from_terms(raw, j.at("num_vars").get<std::size_t>());
}

}  // namespace quadra

#endif  // QUADRA_PBF_HPP_
