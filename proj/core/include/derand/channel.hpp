#pragma once

#include <span>
#include <string>
#include <vector>

#include "derand/rng.hpp"

namespace derand {

/// Probability tolerance for stochasticity checks throughout the library.
inline constexpr double kProbTolerance = 1e-12;

struct Distribution {
  std::vector<double> p;

  static Distribution uniform(std::size_t n);
  static Distribution point_mass(std::size_t n, std::size_t i);

  std::size_t size() const { return p.size(); }
  /// Entries nonnegative and summing to 1 within kProbTolerance.
  void validate() const;
  std::vector<double> cumulative() const;
};

/// Discrete memoryless channel: finite alphabets and a row-stochastic
/// transition matrix, rows indexed by input symbol.
class Channel {
 public:
  Channel(std::size_t inputs, std::size_t outputs, std::vector<double> row_major);

  static Channel bsc(double flip_prob);
  static Channel identity(std::size_t n);

  std::size_t inputs() const { return in_; }
  std::size_t outputs() const { return out_; }
  double prob(std::size_t x, std::size_t y) const { return t_[x * out_ + y]; }
  std::span<const double> row(std::size_t x) const { return {t_.data() + x * out_, out_}; }
  std::span<const double> row_cumulative(std::size_t x) const {
    return {cum_.data() + x * out_, out_};
  }
  const std::vector<double>& transition() const { return t_; }

 private:
  std::size_t in_ = 0;
  std::size_t out_ = 0;
  std::vector<double> t_;
  std::vector<double> cum_;
};

/// Row-stochastic validation; rows are renormalized only when the deviation
/// from 1 is within kProbTolerance.
Channel validate_channel(const std::vector<std::vector<double>>& matrix);

/// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(std::span<const double> probs);
double entropy(const Distribution& dist);

Distribution output_marginal(const Channel& ch, const Distribution& q);
/// Joint p(x,y) = q(x) p(y|x), row-major over (x,y).
std::vector<double> joint_distribution(const Channel& ch, const Distribution& q);

/// C_Q = I(X:Y) = H(Y) - sum_x q(x) H(p(.|x)), in bits.
double capacity_for_input(const Channel& ch, const Distribution& q);

/// One output symbol per input symbol, drawn independently from p(.|x_i)
/// using consecutive draws from the stream.
std::vector<int> transmit(const Channel& ch, std::span<const int> x_block, Stream& stream);

Channel parse_channel_json(const std::string& text);
std::string channel_to_json(const Channel& ch);
Channel load_channel_json(const std::string& path);
void save_channel_json(const Channel& ch, const std::string& path);

/// "uniform" or comma-separated probabilities, e.g. "0.9,0.1".
Distribution parse_distribution_spec(const std::string& spec, std::size_t alphabet);

}  // namespace derand
