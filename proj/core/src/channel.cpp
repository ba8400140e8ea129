#include "derand/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "derand/error.hpp"

namespace derand {

using nlohmann::json;

Distribution Distribution::uniform(std::size_t n) {
  if (n == 0) throw Error(Errc::EmptyAlphabet, "uniform distribution over empty alphabet");
  Distribution d;
  d.p.assign(n, 1.0 / static_cast<double>(n));
  return d;
}

Distribution Distribution::point_mass(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(Errc::IndexOutOfRange, "point mass outside alphabet");
  Distribution d;
  d.p.assign(n, 0.0);
  d.p[i] = 1.0;
  return d;
}

void Distribution::validate() const {
  if (p.empty()) throw Error(Errc::EmptyAlphabet, "empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw Error(Errc::NegativeEntry, "negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw Error(Errc::InvalidDistribution, "probabilities sum to " + std::to_string(sum));
  }
}

std::vector<double> Distribution::cumulative() const {
  std::vector<double> cum(p.size());
  double run = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    run += p[i];
    cum[i] = run;
  }
  return cum;
}

Channel::Channel(std::size_t inputs, std::size_t outputs, std::vector<double> row_major)
    : in_(inputs), out_(outputs), t_(std::move(row_major)) {
  if (in_ == 0 || out_ == 0) throw Error(Errc::EmptyAlphabet, "empty channel alphabet");
  if (t_.size() != in_ * out_) throw Error(Errc::DimensionMismatch, "transition size mismatch");
  cum_.resize(t_.size());
  for (std::size_t x = 0; x < in_; ++x) {
    double run = 0.0;
    for (std::size_t y = 0; y < out_; ++y) {
      run += t_[x * out_ + y];
      cum_[x * out_ + y] = run;
    }
  }
}

Channel Channel::bsc(double flip_prob) {
  if (flip_prob < 0.0 || flip_prob > 1.0) {
    throw Error(Errc::NegativeEntry, "flip probability outside [0,1]");
  }
  return Channel(2, 2, {1.0 - flip_prob, flip_prob, flip_prob, 1.0 - flip_prob});
}

Channel Channel::identity(std::size_t n) {
  std::vector<double> t(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 1.0;
  return Channel(n, n, std::move(t));
}

Channel validate_channel(const std::vector<std::vector<double>>& matrix) {
  if (matrix.empty() || matrix[0].empty()) {
    throw Error(Errc::EmptyAlphabet, "empty transition matrix");
  }
  std::size_t out = matrix[0].size();
  std::vector<double> flat;
  flat.reserve(matrix.size() * out);
  for (std::size_t x = 0; x < matrix.size(); ++x) {
    const auto& row = matrix[x];
    if (row.size() != out) throw Error(Errc::DimensionMismatch, "ragged transition matrix");
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw Error(Errc::NegativeEntry, "negative transition probability");
      if (v > 1.0) throw Error(Errc::NonStochasticRow, "transition probability above 1");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw Error(Errc::NonStochasticRow,
                  "row " + std::to_string(x) + " sums to " + std::to_string(sum));
    }
    for (double v : row) flat.push_back(v / sum);
  }
  return Channel(matrix.size(), out, std::move(flat));
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double v : probs) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double entropy(const Distribution& dist) {
  dist.validate();
  return entropy(std::span<const double>(dist.p));
}

Distribution output_marginal(const Channel& ch, const Distribution& q) {
  if (q.size() != ch.inputs()) throw Error(Errc::DimensionMismatch, "q does not match inputs");
  Distribution out;
  out.p.assign(ch.outputs(), 0.0);
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    for (std::size_t y = 0; y < ch.outputs(); ++y) {
      out.p[y] += q.p[x] * ch.prob(x, y);
    }
  }
  return out;
}

std::vector<double> joint_distribution(const Channel& ch, const Distribution& q) {
  if (q.size() != ch.inputs()) throw Error(Errc::DimensionMismatch, "q does not match inputs");
  std::vector<double> joint(ch.inputs() * ch.outputs());
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    for (std::size_t y = 0; y < ch.outputs(); ++y) {
      joint[x * ch.outputs() + y] = q.p[x] * ch.prob(x, y);
    }
  }
  return joint;
}

double capacity_for_input(const Channel& ch, const Distribution& q) {
  q.validate();
  if (q.size() != ch.inputs()) throw Error(Errc::DimensionMismatch, "q does not match inputs");
  // H(Y|X) as sum_x q(x) H(p(.|x)) for numerical stability.
  double hyx = 0.0;
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    if (q.p[x] > 0.0) hyx += q.p[x] * entropy(ch.row(x));
  }
  double c = entropy(std::span<const double>(output_marginal(ch, q).p)) - hyx;
  if (c < 0.0 && c > -kProbTolerance) c = 0.0;
  return c;
}

std::vector<int> transmit(const Channel& ch, std::span<const int> x_block, Stream& stream) {
  std::vector<int> y(x_block.size());
  for (std::size_t i = 0; i < x_block.size(); ++i) {
    int x = x_block[i];
    if (x < 0 || static_cast<std::size_t>(x) >= ch.inputs()) {
      throw Error(Errc::SymbolOutOfRange, "input symbol " + std::to_string(x));
    }
    y[i] = static_cast<int>(
        stream.sample_cumulative(ch.row_cumulative(static_cast<std::size_t>(x))));
  }
  return y;
}

Channel parse_channel_json(const std::string& text) {
  json j = json::parse(text);
  std::size_t inputs = j.at("inputs").get<std::size_t>();
  std::size_t outputs = j.at("outputs").get<std::size_t>();
  auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
  if (rows.size() != inputs) throw Error(Errc::DimensionMismatch, "rows do not match inputs");
  for (const auto& r : rows) {
    if (r.size() != outputs) throw Error(Errc::DimensionMismatch, "row does not match outputs");
  }
  return validate_channel(rows);
}

std::string channel_to_json(const Channel& ch) {
  json rows = json::array();
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    json row = json::array();
    for (double v : ch.row(x)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  json j{{"inputs", ch.inputs()}, {"outputs", ch.outputs()}, {"rows", std::move(rows)}};
  return j.dump();
}

Channel load_channel_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open channel file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_channel_json(buf.str());
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, "malformed channel file " + path + ": " + e.what());
  }
}

void save_channel_json(const Channel& ch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write channel file " + path);
  out << channel_to_json(ch) << "\n";
}

Distribution parse_distribution_spec(const std::string& spec, std::size_t alphabet) {
  if (spec == "uniform") return Distribution::uniform(alphabet);
  Distribution d;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      d.p.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(Errc::ConfigError, "bad probability value '" + tok + "'");
    }
  }
  if (d.size() != alphabet) {
    throw Error(Errc::DimensionMismatch, "distribution spec does not match alphabet size");
  }
  d.validate();
  return d;
}

}  // namespace derand
