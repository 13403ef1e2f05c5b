#pragma once

// Normed O_K-modules, their short-vector sets and the rank-one operations.

#include "aokb/number_ring.hpp"
#include "aokb/real.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aokb {

using Vec = std::vector<std::int64_t>;

/// Norm at one embedding sigma on O_K^r:
///   ||m||_sigma = e^{-scale} * max_j |sigma(multiplier * m_j)| / weights[j].
/// The multiplier realizes tensoring with principal rank-one modules.
struct EmbeddingNorm {
  std::vector<Rational> weights;
  QuadNumber multiplier{Rational(1)};
  LogScalar scale;

  bool operator==(const EmbeddingNorm&) const = default;
};

/// Sup-norm of the Fubini-Study metric on O(m) over the projective line:
///   ||s|| = e^{lambda} * sup_z |s(z)| / (1 + |z|^2)^{m/2}
/// for s = a_0 + a_1 x + ... + a_m x^m. Only over Q; the module is Z^{m+1}.
struct FubiniStudyNorm {
  int level = 0;
  LogScalar lambda;

  bool operator==(const FubiniStudyNorm&) const = default;
};

struct EnumerationOptions {
  std::uint64_t budget = 100'000'000;
  int workers = 1;
};

/// A free O_K-module of rank r with one norm per complex embedding.
///
/// Elements are integer vectors of length kappa*r: component j occupies
/// coordinates [kappa*j, kappa*j + kappa) in the integral basis.
class NormedModule {
 public:
  static NormedModule box(const NumberField& field, std::vector<EmbeddingNorm> norms);
  /// Same weights and scale at every embedding.
  static NormedModule uniform_box(const NumberField& field, std::vector<Rational> weights,
                                  const LogScalar& scale = {});
  static NormedModule fubini_study(int level, const LogScalar& lambda);

  const NumberField& field() const { return field_; }
  int rank() const { return rank_; }
  int z_rank() const { return rank_ * field_.degree(); }
  bool is_box() const { return std::holds_alternative<std::vector<EmbeddingNorm>>(norm_); }
  const std::vector<EmbeddingNorm>& box_norms() const;
  const FubiniStudyNorm& fs_norm() const;

  /// Certified test of ||v||_sigma <= 1 for all sigma.
  Tri contains(std::span<const std::int64_t> v) const;
  /// ||v||_sigma as an interval (box norms only).
  Interval norm(std::span<const std::int64_t> v, int sigma, mpfr_prec_t prec = kDefaultPrecision) const;

  nlohmann::json to_json() const;
  static NormedModule from_json(const nlohmann::json& j);

  bool operator==(const NormedModule& o) const {
    return field_ == o.field_ && rank_ == o.rank_ && norm_ == o.norm_;
  }

 private:
  NormedModule(NumberField field, int rank, std::variant<std::vector<EmbeddingNorm>, FubiniStudyNorm> norm)
      : field_(std::move(field)), rank_(rank), norm_(std::move(norm)) {}
  NumberField field_;
  int rank_;
  std::variant<std::vector<EmbeddingNorm>, FubiniStudyNorm> norm_;
};

/// gamma * O_K with norms ||gamma z||_sigma = e^{-alpha_sigma} |sigma(gamma z)|.
struct RankOneModule {
  NumberField field;
  QuadNumber generator{Rational(1)};
  std::vector<LogScalar> alpha;  // one per embedding

  static RankOneModule trivial(const NumberField& field);
  /// O_K with every norm e^{-alpha}|.|.
  static RankOneModule scalar(const NumberField& field, const LogScalar& alpha);
  /// The fractional ideal wp^e with the norms induced from K.
  static RankOneModule prime_power(const PrimeData& prime, long e);

  NormedModule as_module() const;
};

/// M(alpha): every norm scaled by e^{-alpha}.
NormedModule twist(const NormedModule& m, const LogScalar& alpha);
NormedModule tensor_rank_one(const NormedModule& m, const RankOneModule& l);
RankOneModule dual_rank_one(const RankOneModule& l);

/// Exact arithmetic degree: sum_sigma alpha_sigma - log |N(gamma)|.
LogScalar deg_hat(const RankOneModule& l);
/// log #(L / s O_K) - sum_sigma log ||s||_sigma for the element s = gamma * w,
/// w given by integral-basis coordinates; evaluated with intervals.
Interval deg_hat_with_witness(const RankOneModule& l, std::span<const std::int64_t> w,
                              mpfr_prec_t prec = kDefaultPrecision);

/// Short vectors of a module, in lexicographic order.
///
/// Box modules give a product of per-component sets (a vector is short iff
/// each O_K-component is); other modules give an explicit list.
class ShortVectorSet {
 public:
  static ShortVectorSet product(int kappa, std::vector<std::vector<Vec>> factors,
                                std::vector<std::vector<Vec>> factor_undecided);
  static ShortVectorSet explicit_list(int kappa, int rank, std::vector<Vec> members, std::vector<Vec> undecided);

  int kappa() const { return kappa_; }
  int rank() const { return rank_; }
  bool is_product() const { return product_; }
  const std::vector<std::vector<Vec>>& factors() const { return factors_; }

  /// Number of certified members.
  Integer count() const;
  /// Vectors that are neither certified in nor certified out.
  Integer undecided_count() const;
  LogScalar h0() const { return LogScalar::log_of(count()); }

  bool contains(std::span<const std::int64_t> v) const;
  /// Visits members in lexicographic order; stops when fn returns false.
  void for_each(const std::function<bool(const Vec&)>& fn) const;
  /// Members in lexicographic order; throws BudgetExceeded above `limit`.
  std::vector<Vec> elements(std::uint64_t limit = 100'000'000) const;
  /// Undecided vectors (explicit lists; product sets list each factor's).
  std::vector<Vec> undecided() const;

 private:
  int kappa_ = 1;
  int rank_ = 0;
  bool product_ = true;
  std::vector<std::vector<Vec>> factors_;
  std::vector<std::vector<Vec>> factor_undecided_;
  std::vector<Vec> members_;
  std::vector<Vec> undecided_;
};

ShortVectorSet h0_hat_set(const NormedModule& m, const EnumerationOptions& opts = {});
/// log of the number of short vectors.
LogScalar h0_hat(const NormedModule& m, const EnumerationOptions& opts = {});

enum class SpanRing { OK, Z };

/// Rank of the submodule generated by `s` over O_K or Z.
std::size_t span_rank(const NormedModule& m, const std::vector<Vec>& s, SpanRing ring);
/// Span rank of a short-vector set; uses the product structure when present.
std::size_t span_rank(const NormedModule& m, const ShortVectorSet& s, SpanRing ring);

struct MinkowskiReport {
  LogScalar h0;
  LogScalar degree;
  /// h0 - (deg - kappa log 2 - 1/2 log|D_K|), as an interval.
  Interval margin;
  bool holds = false;
};
/// h0(L) > deg(L) - kappa log 2 - 1/2 log |D_K|, decided exactly.
MinkowskiReport minkowski_check(const RankOneModule& l, const EnumerationOptions& opts = {});

struct ShiftReport {
  LogScalar h0;
  LogScalar h0_twisted;
  std::size_t r0 = 0;
  /// h0(M) - h0(M(t)) + kappa r0 (t + log 3), exact.
  LogScalar margin;
  bool holds = false;
};
ShiftReport gs_shift_check(const NormedModule& m, const LogScalar& t, const EnumerationOptions& opts = {});

/// M(-delta) realized exactly: each norm multiplied by |sigma(beta_sigma)| = e^delta.
NormedModule delta_twist_down(const NormedModule& m);

struct SpanRankReport {
  std::size_t ok_rank_delta = 0;  // rank_OK <H0(M(-delta))>
  std::size_t z_rank = 0;         // rank_Z <H0(M)>
  std::size_t ok_rank = 0;        // rank_OK <H0(M)>
  int kappa = 1;
  bool first_holds = false;   // kappa * ok_rank_delta <= z_rank
  bool second_holds = false;  // z_rank <= kappa * ok_rank (and >= ok_rank)
};
SpanRankReport span_rank_check(const NormedModule& m, const EnumerationOptions& opts = {});

}  // namespace aokb
