#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "derand/channel.hpp"

namespace derand {

/// Desk-scale guard: M = 2^ceil(nR) is capped at 2^30.
inline constexpr int kMaxRateExponent = 30;

struct Codebook {
  int n = 0;                    // block length
  std::size_t num_words = 0;    // M
  std::vector<int> words;       // M x n, row-major; row w is the codeword of message w+1
  std::optional<BitString> gen_seed;
  double rate = 0.0;            // log2(M)/n

  std::span<const int> row(std::size_t w) const {
    return {words.data() + w * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// Typicality thresholds for A_eps^(n): a pair of length-n blocks is jointly
/// typical when the per-symbol -log2 probabilities of x, y and (x,y) are all
/// within eps of H(X), H(Y), H(X,Y).
struct TypicalityParams {
  double epsilon = 0.0;
  int n = 0;
  std::size_t nx = 0, ny = 0;
  std::vector<double> joint;  // nx*ny row-major

  // Derived, fixed at construction.
  std::vector<double> px, py;
  std::vector<double> nlog_joint, nlog_px, nlog_py;  // -log2, infinity at zero entries
  double hx = 0.0, hy = 0.0, hxy = 0.0;

  static TypicalityParams make(const Channel& ch, const Distribution& q, int n, double epsilon);
  /// Validates that the joint's marginals match channel and q within tolerance.
  static TypicalityParams from_joint(std::vector<double> joint, std::size_t nx, std::size_t ny,
                                     int n, double epsilon);
};

struct ErrorReport {
  std::vector<double> per_word_error;  // lambda_i estimates
  double average_error = 0.0;          // P_e^(n) estimate
  std::uint64_t trials_per_word = 0;
  double confidence_halfwidth = 0.0;   // 1.96 sqrt(p(1-p)/total_trials)
};

/// Exponent ceil(nR) with a guard against floating-point spill on exact
/// integers (e.g. 40*0.3).
int rate_exponent(int n, double rate);

/// M*n entries drawn i.i.d. from q, consuming the deterministic expansion of
/// `seed` in row-major entry order. Reproducible bit-for-bit from the seed.
Codebook generate_codebook(const Distribution& q, int n, double rate, const BitString& seed);

bool is_jointly_typical(std::span<const int> x_block, std::span<const int> y_block,
                        const TypicalityParams& params);

/// Pair-count histogram variant shared by the generic and packed paths; counts
/// is nx*ny row-major and must sum to params.n.
bool is_jointly_typical_counts(std::span<const std::uint64_t> counts,
                               const TypicalityParams& params);

/// Message id in {1..M} when exactly one row is jointly typical with y_block,
/// else 0 (the in-band error symbol).
std::size_t decode(const Codebook& cb, std::span<const int> y_block,
                   const TypicalityParams& params);

/// Monte Carlo estimate of every lambda_i and of P_e^(n). Trial (w,t) uses the
/// stream derived from (seed, w, t), so results are independent of execution
/// order and thread count.
ErrorReport estimate_error(const Codebook& cb, const Channel& ch, const TypicalityParams& params,
                           std::uint64_t trials_per_word, const BitString& seed, int threads = 0);

/// (fraction of correlated pairs in A_eps^(n), fraction of independent pairs).
std::pair<double, double> empirical_joint_aep(const TypicalityParams& params, const Channel& ch,
                                              const Distribution& q, std::uint64_t trials,
                                              const BitString& seed, int threads = 0);

struct TradeoffRow {
  double rate = 0.0;
  int n = 0;
  std::size_t seed_length = 0;
  double error = 0.0;
  bool achievable = false;  // rate < C_Q
};

/// One row per (rate, n, seed_length): a codebook is generated from a seed of
/// exactly seed_length bits and its error rate estimated.
std::vector<TradeoffRow> tradeoff_experiment(const Channel& ch, const Distribution& q,
                                             std::span<const double> rates,
                                             std::span<const int> block_lengths,
                                             std::span<const std::size_t> seed_lengths,
                                             std::uint64_t trials_per_word, const BitString& seed,
                                             double epsilon, int threads = 0);

std::string codebook_to_json(const Codebook& cb);
Codebook parse_codebook_json(const std::string& text);
Codebook load_codebook_json(const std::string& path);
void save_codebook_json(const Codebook& cb, const std::string& path);

}  // namespace derand
