#include "derand/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "derand/error.hpp"
#include "derand/parallel.hpp"

namespace derand {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> neg_log2(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] > 0.0 ? -std::log2(probs[i]) : kInf;
  }
  return out;
}

/// One typicality condition from a count histogram: |sum(c_i * nlog_i)/n - h| < eps.
/// A positive count on a zero-probability cell fails the condition outright.
bool condition_from_counts(std::span<const std::uint64_t> counts, std::span<const double> nlog,
                           double h, double eps, int n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (std::isinf(nlog[i])) return false;
    sum += static_cast<double>(counts[i]) * nlog[i];
  }
  return std::abs(sum / static_cast<double>(n) - h) < eps;
}

}  // namespace

TypicalityParams TypicalityParams::make(const Channel& ch, const Distribution& q, int n,
                                        double epsilon) {
  q.validate();
  if (epsilon <= 0.0) throw Error(Errc::ConfigError, "epsilon must be positive");
  if (n < 1) throw Error(Errc::ConfigError, "block length must be at least 1");
  TypicalityParams tp;
  tp.epsilon = epsilon;
  tp.n = n;
  tp.nx = ch.inputs();
  tp.ny = ch.outputs();
  tp.joint = joint_distribution(ch, q);
  tp.px = q.p;
  tp.py = output_marginal(ch, q).p;
  tp.nlog_joint = neg_log2(tp.joint);
  tp.nlog_px = neg_log2(tp.px);
  tp.nlog_py = neg_log2(tp.py);
  tp.hx = entropy(std::span<const double>(tp.px));
  tp.hy = entropy(std::span<const double>(tp.py));
  tp.hxy = entropy(std::span<const double>(tp.joint));
  return tp;
}

TypicalityParams TypicalityParams::from_joint(std::vector<double> joint, std::size_t nx,
                                              std::size_t ny, int n, double epsilon) {
  if (joint.size() != nx * ny) throw Error(Errc::DimensionMismatch, "joint size mismatch");
  if (epsilon <= 0.0) throw Error(Errc::ConfigError, "epsilon must be positive");
  Distribution j{std::move(joint)};
  j.validate();
  TypicalityParams tp;
  tp.epsilon = epsilon;
  tp.n = n;
  tp.nx = nx;
  tp.ny = ny;
  tp.joint = std::move(j.p);
  tp.px.assign(nx, 0.0);
  tp.py.assign(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      tp.px[x] += tp.joint[x * ny + y];
      tp.py[y] += tp.joint[x * ny + y];
    }
  }
  tp.nlog_joint = neg_log2(tp.joint);
  tp.nlog_px = neg_log2(tp.px);
  tp.nlog_py = neg_log2(tp.py);
  tp.hx = entropy(std::span<const double>(tp.px));
  tp.hy = entropy(std::span<const double>(tp.py));
  tp.hxy = entropy(std::span<const double>(tp.joint));
  return tp;
}

int rate_exponent(int n, double rate) {
  if (n < 1) throw Error(Errc::ConfigError, "block length must be at least 1");
  if (rate <= 0.0) throw Error(Errc::ConfigError, "rate must be positive");
  // ceil(nR) with a 1e-9 guard so 40*0.3 lands on 12, not 13.
  int exponent = static_cast<int>(std::ceil(static_cast<double>(n) * rate - 1e-9));
  if (exponent < 1) exponent = 1;
  if (exponent > kMaxRateExponent) {
    throw Error(Errc::RateTooLarge, "ceil(nR) = " + std::to_string(exponent) + " exceeds " +
                                        std::to_string(kMaxRateExponent));
  }
  return exponent;
}

Codebook generate_codebook(const Distribution& q, int n, double rate, const BitString& seed) {
  q.validate();
  if (q.size() == 0) throw Error(Errc::EmptyAlphabet, "empty source alphabet");
  int exponent = rate_exponent(n, rate);
  std::size_t m = std::size_t{1} << exponent;
  Codebook cb;
  cb.n = n;
  cb.num_words = m;
  cb.rate = static_cast<double>(exponent) / static_cast<double>(n);
  cb.gen_seed = seed;
  cb.words.resize(m * static_cast<std::size_t>(n));
  std::vector<double> cum = q.cumulative();
  Stream stream(seed);
  for (std::size_t i = 0; i < cb.words.size(); ++i) {
    cb.words[i] = static_cast<int>(stream.sample_cumulative(cum));
  }
  return cb;
}

bool is_jointly_typical_counts(std::span<const std::uint64_t> counts,
                               const TypicalityParams& params) {
  if (counts.size() != params.nx * params.ny) {
    throw Error(Errc::DimensionMismatch, "count histogram size mismatch");
  }
  std::vector<std::uint64_t> cx(params.nx, 0), cy(params.ny, 0);
  for (std::size_t x = 0; x < params.nx; ++x) {
    for (std::size_t y = 0; y < params.ny; ++y) {
      cx[x] += counts[x * params.ny + y];
      cy[y] += counts[x * params.ny + y];
    }
  }
  return condition_from_counts(cx, params.nlog_px, params.hx, params.epsilon, params.n) &&
         condition_from_counts(cy, params.nlog_py, params.hy, params.epsilon, params.n) &&
         condition_from_counts(counts, params.nlog_joint, params.hxy, params.epsilon, params.n);
}

bool is_jointly_typical(std::span<const int> x_block, std::span<const int> y_block,
                        const TypicalityParams& params) {
  if (x_block.size() != static_cast<std::size_t>(params.n) || x_block.size() != y_block.size()) {
    throw Error(Errc::LengthMismatch, "blocks must have length n");
  }
  std::vector<std::uint64_t> counts(params.nx * params.ny, 0);
  for (std::size_t i = 0; i < x_block.size(); ++i) {
    int x = x_block[i], y = y_block[i];
    if (x < 0 || static_cast<std::size_t>(x) >= params.nx) {
      throw Error(Errc::SymbolOutOfRange, "input symbol " + std::to_string(x));
    }
    if (y < 0 || static_cast<std::size_t>(y) >= params.ny) {
      throw Error(Errc::SymbolOutOfRange, "output symbol " + std::to_string(y));
    }
    ++counts[static_cast<std::size_t>(x) * params.ny + static_cast<std::size_t>(y)];
  }
  return is_jointly_typical_counts(counts, params);
}

std::size_t decode(const Codebook& cb, std::span<const int> y_block,
                   const TypicalityParams& params) {
  if (y_block.size() != static_cast<std::size_t>(cb.n)) {
    throw Error(Errc::LengthMismatch, "received block must have length n");
  }
  std::size_t hit = 0;
  int hits = 0;
  for (std::size_t w = 0; w < cb.num_words; ++w) {
    if (is_jointly_typical(cb.row(w), y_block, params)) {
      if (++hits == 2) return 0;
      hit = w + 1;
    }
  }
  return hits == 1 ? hit : 0;
}

namespace {

/// Packed decoder state for binary alphabets and n <= 64. Typicality is
/// reduced to integer pair counts (popcounts), evaluated through the same
/// count-based conditions as the generic path, so decisions agree bit-for-bit.
struct PackedDecoder {
  const TypicalityParams& tp;
  int n;
  std::vector<std::uint64_t> row_bits;
  std::vector<int> row_pc;
  std::vector<std::uint8_t> row_x_typical;
  std::vector<std::uint8_t> y_typical;        // indexed by popcount(y)
  std::vector<std::int16_t> c11_lo, c11_hi;   // [pc_x * (n+1) + pc_y]

  static bool applicable(const TypicalityParams& tp) {
    return tp.nx == 2 && tp.ny == 2 && tp.n <= 64;
  }

  PackedDecoder(const Codebook& cb, const TypicalityParams& params) : tp(params), n(params.n) {
    row_bits.resize(cb.num_words);
    row_pc.resize(cb.num_words);
    row_x_typical.resize(cb.num_words);
    for (std::size_t w = 0; w < cb.num_words; ++w) {
      row_bits[w] = pack(cb.row(w));
      row_pc[w] = std::popcount(row_bits[w]);
      std::uint64_t cx[2] = {static_cast<std::uint64_t>(n - row_pc[w]),
                             static_cast<std::uint64_t>(row_pc[w])};
      row_x_typical[w] =
          condition_from_counts(std::span<const std::uint64_t>(cx, 2), tp.nlog_px, tp.hx,
                                tp.epsilon, n)
              ? 1
              : 0;
    }
    y_typical.resize(static_cast<std::size_t>(n) + 1);
    for (int pcy = 0; pcy <= n; ++pcy) {
      std::uint64_t cy[2] = {static_cast<std::uint64_t>(n - pcy), static_cast<std::uint64_t>(pcy)};
      y_typical[static_cast<std::size_t>(pcy)] = condition_from_counts(
          std::span<const std::uint64_t>(cy, 2), tp.nlog_py, tp.hy, tp.epsilon, n);
    }
    // Joint-condition window in c11 = |{i : x_i = y_i = 1}| for each
    // (pc_x, pc_y); the condition is linear in c11, so passing values form an
    // interval. Swept exactly with the shared evaluator.
    c11_lo.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1), 1);
    c11_hi.assign(c11_lo.size(), 0);
    for (int pcx = 0; pcx <= n; ++pcx) {
      for (int pcy = 0; pcy <= n; ++pcy) {
        int lo_feasible = std::max(0, pcx + pcy - n);
        int hi_feasible = std::min(pcx, pcy);
        int lo = 1, hi = 0;
        for (int c11 = lo_feasible; c11 <= hi_feasible; ++c11) {
          std::uint64_t counts[4] = {static_cast<std::uint64_t>(n - pcx - pcy + c11),
                                     static_cast<std::uint64_t>(pcy - c11),
                                     static_cast<std::uint64_t>(pcx - c11),
                                     static_cast<std::uint64_t>(c11)};
          if (condition_from_counts(std::span<const std::uint64_t>(counts, 4), tp.nlog_joint,
                                    tp.hxy, tp.epsilon, n)) {
            if (lo > hi) lo = c11;
            hi = c11;
          }
        }
        c11_lo[idx(pcx, pcy)] = static_cast<std::int16_t>(lo);
        c11_hi[idx(pcx, pcy)] = static_cast<std::int16_t>(hi);
      }
    }
  }

  std::size_t idx(int pcx, int pcy) const {
    return static_cast<std::size_t>(pcx) * static_cast<std::size_t>(n + 1) +
           static_cast<std::size_t>(pcy);
  }

  std::uint64_t pack(std::span<const int> block) const {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i]) bits |= std::uint64_t{1} << i;
    }
    return bits;
  }

  std::size_t decode_packed(std::uint64_t y_bits) const {
    int pcy = std::popcount(y_bits);
    if (!y_typical[static_cast<std::size_t>(pcy)]) return 0;
    const std::int16_t* lo = &c11_lo[static_cast<std::size_t>(pcy)];
    const std::int16_t* hi = &c11_hi[static_cast<std::size_t>(pcy)];
    std::size_t stride = static_cast<std::size_t>(n + 1);
    std::size_t hit = 0;
    int hits = 0;
    for (std::size_t w = 0; w < row_bits.size(); ++w) {
      if (!row_x_typical[w]) continue;
      int c11 = std::popcount(row_bits[w] & y_bits);
      std::size_t off = static_cast<std::size_t>(row_pc[w]) * stride;
      if (c11 >= lo[off] && c11 <= hi[off]) {
        if (++hits == 2) return 0;
        hit = w + 1;
      }
    }
    return hits == 1 ? hit : 0;
  }
};

}  // namespace

ErrorReport estimate_error(const Codebook& cb, const Channel& ch, const TypicalityParams& params,
                           std::uint64_t trials_per_word, const BitString& seed, int threads) {
  if (trials_per_word < 1) throw Error(Errc::ConfigError, "trials_per_word must be at least 1");
  if (ch.inputs() != params.nx || ch.outputs() != params.ny) {
    throw Error(Errc::DimensionMismatch, "channel does not match typicality params");
  }
  Stream root(seed);
  std::optional<PackedDecoder> packed;
  if (PackedDecoder::applicable(params)) packed.emplace(cb, params);

  std::vector<double> per_word(cb.num_words, 0.0);
  parallel_for(cb.num_words, threads, [&](std::uint64_t w) {
    Stream word_stream = root.derive(w);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials_per_word; ++t) {
      Stream trial = word_stream.derive(t);
      std::vector<int> y = transmit(ch, cb.row(w), trial);
      std::size_t decoded;
      if (packed) {
        decoded = packed->decode_packed(packed->pack(y));
      } else {
        decoded = decode(cb, y, params);
      }
      if (decoded != w + 1) ++errors;
    }
    per_word[w] = static_cast<double>(errors) / static_cast<double>(trials_per_word);
  });

  ErrorReport report;
  report.per_word_error = std::move(per_word);
  report.trials_per_word = trials_per_word;
  double sum = 0.0;
  for (double v : report.per_word_error) sum += v;
  report.average_error = sum / static_cast<double>(cb.num_words);
  double total = static_cast<double>(cb.num_words) * static_cast<double>(trials_per_word);
  double p = report.average_error;
  report.confidence_halfwidth = 1.96 * std::sqrt(p * (1.0 - p) / total);
  return report;
}

std::pair<double, double> empirical_joint_aep(const TypicalityParams& params, const Channel& ch,
                                              const Distribution& q, std::uint64_t trials,
                                              const BitString& seed, int threads) {
  if (trials < 1) throw Error(Errc::ConfigError, "trials must be at least 1");
  q.validate();
  Stream root(seed);
  std::vector<double> qcum = q.cumulative();
  std::vector<double> ycum = output_marginal(ch, q).cumulative();
  std::size_t n = static_cast<std::size_t>(params.n);

  std::vector<std::uint8_t> typical(trials), indep_typical(trials);
  parallel_for(trials, threads, [&](std::uint64_t t) {
    Stream trial = root.derive(t);
    std::vector<int> x(n), xi(n), yi(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<int>(trial.sample_cumulative(qcum));
    std::vector<int> y = transmit(ch, x, trial);
    for (std::size_t i = 0; i < n; ++i) xi[i] = static_cast<int>(trial.sample_cumulative(qcum));
    for (std::size_t i = 0; i < n; ++i) yi[i] = static_cast<int>(trial.sample_cumulative(ycum));
    typical[t] = is_jointly_typical(x, y, params) ? 1 : 0;
    indep_typical[t] = is_jointly_typical(xi, yi, params) ? 1 : 0;
  });

  std::uint64_t count = 0, indep_count = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    count += typical[t];
    indep_count += indep_typical[t];
  }
  return {static_cast<double>(count) / static_cast<double>(trials),
          static_cast<double>(indep_count) / static_cast<double>(trials)};
}

std::vector<TradeoffRow> tradeoffExperimentImpl();

std::vector<TradeoffRow> tradeoff_experiment(const Channel& ch, const Distribution& q,
                                             std::span<const double> rates,
                                             std::span<const int> block_lengths,
                                             std::span<const std::size_t> seed_lengths,
                                             std::uint64_t trials_per_word, const BitString& seed,
                                             double epsilon, int threads) {
  double capacity = capacity_for_input(ch, q);
  Stream root(seed);
  std::vector<TradeoffRow> rows;
  std::uint64_t row_index = 0;
  for (double rate : rates) {
    for (int n : block_lengths) {
      for (std::size_t seed_len : seed_lengths) {
        Stream row_stream = root.derive(row_index);
        BitString cb_seed = row_stream.derive(0).take_bits(seed_len);
        BitString est_seed = row_stream.derive(1).take_bits(128);
        Codebook cb = generate_codebook(q, n, rate, cb_seed);
        TypicalityParams params = TypicalityParams::make(ch, q, n, epsilon);
        ErrorReport report = estimate_error(cb, ch, params, trials_per_word, est_seed, threads);
        rows.push_back(TradeoffRow{rate, n, seed_len, report.average_error, rate < capacity});
        ++row_index;
      }
    }
  }
  return rows;
}

std::string codebook_to_json(const Codebook& cb) {
  json rows = json::array();
  for (std::size_t w = 0; w < cb.num_words; ++w) {
    json row = json::array();
    for (int v : cb.row(w)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  json j{{"n", cb.n}, {"M", cb.num_words}, {"rows", std::move(rows)}};
  j["seed_hex"] = cb.gen_seed ? json(cb.gen_seed->to_hex()) : json(nullptr);
  return j.dump();
}

Codebook parse_codebook_json(const std::string& text) {
  json j = json::parse(text);
  Codebook cb;
  cb.n = j.at("n").get<int>();
  cb.num_words = j.at("M").get<std::size_t>();
  auto rows = j.at("rows").get<std::vector<std::vector<int>>>();
  if (rows.size() != cb.num_words) throw Error(Errc::DimensionMismatch, "M does not match rows");
  cb.words.reserve(cb.num_words * static_cast<std::size_t>(cb.n));
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(cb.n)) {
      throw Error(Errc::DimensionMismatch, "row length does not match n");
    }
    cb.words.insert(cb.words.end(), row.begin(), row.end());
  }
  if (j.contains("seed_hex") && !j.at("seed_hex").is_null()) {
    cb.gen_seed = BitString::from_hex(j.at("seed_hex").get<std::string>());
  }
  cb.rate = std::log2(static_cast<double>(cb.num_words)) / static_cast<double>(cb.n);
  return cb;
}

Codebook load_codebook_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open codebook file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_codebook_json(buf.str());
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, "malformed codebook file " + path + ": " + e.what());
  }
}

void save_codebook_json(const Codebook& cb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write codebook file " + path);
  out << codebook_to_json(cb) << "\n";
}

}  // namespace derand
