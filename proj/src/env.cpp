#include "melonlab/env.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "melonlab/error.hpp"
#include "melonlab/rng.hpp"

namespace melonlab {

namespace {

constexpr std::int64_t kMassLimit = std::int64_t{1} << 62;

int scale_for(DistKind kind) {
  return kind == DistKind::kExponential ? kFixedPointBits : 0;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw FormatError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

int repr_scale(std::string_view tag) {
  if (tag == "int") return 0;
  if (tag == "fp32.32") return kFixedPointBits;
  if (tag == "fp16.48") return kJitterBits;
  throw FormatError("unknown weight representation '" + std::string(tag) + "'");
}

std::int64_t sample_raw(const DistributionSpec& dist, std::uint64_t seed, int x, int y) {
  const auto bits = rng::hash(seed, rng::Stream::kWeight, static_cast<std::uint64_t>(x),
                              static_cast<std::uint64_t>(y));
  switch (dist.kind) {
    case DistKind::kOnes:
      return 1;
    case DistKind::kExponential: {
      const double sample = -std::log(rng::to_unit_open(bits));
      const auto raw = std::llround(std::ldexp(sample, kFixedPointBits));
      return std::max<std::int64_t>(1, raw);
    }
    case DistKind::kGeometric: {
      const double u = rng::to_unit_open(bits);
      const double j = std::floor(std::log(u) / std::log(dist.p));
      return 1 + static_cast<std::int64_t>(j);
    }
    case DistKind::kFile:
      break;
  }
  throw InvalidArgument("cannot sample from a file-backed distribution");
}

}  // namespace

DistributionSpec DistributionSpec::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("geometric parameter must lie in (0,1), got " + format_double(p));
  }
  return {DistKind::kGeometric, p};
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  if (text == "exp" || text == "exponential") return exponential();
  if (text == "ones") return ones();
  if (text == "file") return file();
  if (text.starts_with("geom:")) {
    std::string p_text(text.substr(5));
    char* end = nullptr;
    const double p = std::strtod(p_text.c_str(), &end);
    if (p_text.empty() || end != p_text.c_str() + p_text.size()) {
      throw InvalidArgument("bad geometric parameter in '" + std::string(text) + "'");
    }
    return geometric(p);
  }
  throw InvalidArgument("unknown distribution '" + std::string(text) + "'");
}

std::string DistributionSpec::tag() const {
  switch (kind) {
    case DistKind::kExponential:
      return "exp";
    case DistKind::kGeometric:
      return "geom:" + format_double(p);
    case DistKind::kOnes:
      return "ones";
    case DistKind::kFile:
      return "file";
  }
  return "file";
}

double mu_of(const DistributionSpec& dist) {
  switch (dist.kind) {
    case DistKind::kExponential:
      return 4.0;
    case DistKind::kGeometric: {
      const double r = 1.0 + std::sqrt(dist.p);
      return r * r / (1.0 - dist.p);
    }
    case DistKind::kOnes:
      return 2.0;
    case DistKind::kFile:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Environment::Environment(int n, int scale_bits, DistributionSpec dist, std::uint64_t seed,
                         std::vector<std::int64_t> raw, std::optional<std::uint64_t> jitter_seed)
    : n_(n),
      scale_bits_(scale_bits),
      dist_(dist),
      seed_(seed),
      jitter_seed_(jitter_seed),
      raw_(std::move(raw)) {
  if (n_ < 1) throw InvalidArgument("environment side must be positive");
  if (raw_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    throw FormatError("environment has " + std::to_string(raw_.size()) + " weights, expected " +
                      std::to_string(static_cast<long long>(n_) * n_));
  }
  if (scale_bits_ != 0 && scale_bits_ != kFixedPointBits && scale_bits_ != kJitterBits) {
    throw InvalidArgument("unsupported fixed-point scale " + std::to_string(scale_bits_));
  }
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    if (raw_[i] < 0) {
      const auto x = static_cast<int>(i % static_cast<std::size_t>(n_)) + 1;
      const auto y = static_cast<int>(i / static_cast<std::size_t>(n_)) + 1;
      throw FormatError("negative weight at (" + std::to_string(x) + "," + std::to_string(y) +
                        ")");
    }
  }
}

double Environment::to_real(std::int64_t raw_value) const {
  return std::ldexp(static_cast<double>(raw_value), -scale_bits_);
}

std::string Environment::repr_tag() const {
  switch (scale_bits_) {
    case 0:
      return "int";
    case kFixedPointBits:
      return "fp32.32";
    default:
      return "fp16.48";
  }
}

std::int64_t Environment::total_raw() const {
  std::int64_t total = 0;
  for (auto w : raw_) {
    if (w > kMassLimit - total) {
      throw GuardViolation("total environment mass exceeds 2^62 raw units; cost accumulation "
                           "would overflow");
    }
    total += w;
  }
  return total;
}

Environment Environment::jittered(std::uint64_t sub_seed) const {
  const int shift = kJitterBits - scale_bits_;
  if (shift < 0 || jitter_seed_) throw InvalidArgument("environment is already at jitter resolution");
  const std::int64_t limit = std::numeric_limits<std::int64_t>::max() >> (shift + 1);
  std::vector<std::int64_t> raw(raw_.size());
  for (int y = 1; y <= n_; ++y) {
    for (int x = 1; x <= n_; ++x) {
      const auto i = index({x, y});
      if (raw_[i] > limit) throw GuardViolation("weight too large to rescale for jitter");
      const auto bits = rng::hash(sub_seed, rng::Stream::kJitter, static_cast<std::uint64_t>(x),
                                  static_cast<std::uint64_t>(y));
      const auto noise = static_cast<std::int64_t>(bits >> (64 - kJitterRangeBits));
      raw[i] = (raw_[i] << shift) + noise;
    }
  }
  return Environment(n_, kJitterBits, dist_, seed_, std::move(raw), sub_seed);
}

Environment Environment::subgrid(int side) const {
  if (side < 1 || side > n_) {
    throw InvalidArgument("subgrid side " + std::to_string(side) + " outside [1," +
                          std::to_string(n_) + "]");
  }
  std::vector<std::int64_t> raw;
  raw.reserve(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  for (int y = 1; y <= side; ++y) {
    for (int x = 1; x <= side; ++x) raw.push_back(raw_[index({x, y})]);
  }
  return Environment(side, scale_bits_, dist_, seed_, std::move(raw), jitter_seed_);
}

Environment generate(int n, const DistributionSpec& dist, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (dist.kind == DistKind::kGeometric && !(dist.p > 0.0 && dist.p < 1.0)) {
    throw InvalidArgument("geometric parameter must lie in (0,1)");
  }
  std::vector<std::int64_t> raw(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int y = 1; y <= n; ++y) {
    for (int x = 1; x <= n; ++x) {
      raw[static_cast<std::size_t>(y - 1) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(x - 1)] = sample_raw(dist, seed, x, y);
    }
  }
  return Environment(n, scale_for(dist.kind), dist, seed, std::move(raw));
}

Environment make_environment(int n, std::vector<std::int64_t> values, int scale_bits) {
  return Environment(n, scale_bits, DistributionSpec::file(), 0, std::move(values));
}

void save(const Environment& env, std::ostream& out) {
  out << "lpp-env 1\n";
  out << "n=" << env.n() << " dist=" << env.dist().tag() << " seed=" << env.seed()
      << " repr=" << env.repr_tag();
  if (env.jitter_seed()) out << " jitter=" << *env.jitter_seed();
  out << '\n';
  const auto raw = env.raw_weights();
  const auto n = static_cast<std::size_t>(env.n());
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      if (x) out << ' ';
      out << raw[y * n + x];
    }
    out << '\n';
  }
}

Environment load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty environment file");
  if (line != "lpp-env 1") {
    if (line.starts_with("lpp-env ")) {
      throw FormatError("unsupported environment file version: '" + line + "'");
    }
    throw FormatError("missing 'lpp-env' header");
  }
  if (!std::getline(in, line)) throw FormatError("missing environment metadata line");

  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> jitter;
  DistributionSpec dist = DistributionSpec::file();
  int scale = 0;
  bool have_repr = false;
  std::istringstream meta(line);
  std::string token;
  while (meta >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw FormatError("bad metadata token '" + token + "'");
    const std::string_view key(token.data(), eq);
    const std::string_view value(token.data() + eq + 1, token.size() - eq - 1);
    if (key == "n") {
      n = parse_number<int>(value, "n");
    } else if (key == "dist") {
      try {
        dist = DistributionSpec::parse(value);
      } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
      }
    } else if (key == "seed") {
      seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "repr") {
      scale = repr_scale(value);
      have_repr = true;
    } else if (key == "jitter") {
      jitter = parse_number<std::uint64_t>(value, "jitter");
    } else {
      throw FormatError("unknown metadata key '" + std::string(key) + "'");
    }
  }
  if (!n || *n < 1) throw FormatError("metadata lacks a positive n");
  if (!have_repr) throw FormatError("metadata lacks repr");

  const auto count = static_cast<std::size_t>(*n) * static_cast<std::size_t>(*n);
  std::vector<std::int64_t> raw;
  raw.reserve(count);
  std::string word;
  while (in >> word) {
    if (raw.size() == count) {
      throw FormatError("dimension mismatch: more than n*n = " + std::to_string(count) +
                        " values");
    }
    const auto v = parse_number<std::int64_t>(word, "weight");
    if (v < 0) {
      const auto i = raw.size();
      throw FormatError("negative weight " + word + " at (" +
                        std::to_string(i % static_cast<std::size_t>(*n) + 1) + "," +
                        std::to_string(i / static_cast<std::size_t>(*n) + 1) + ")");
    }
    raw.push_back(v);
  }
  if (raw.size() != count) {
    throw FormatError("dimension mismatch: found " + std::to_string(raw.size()) +
                      " values, expected " + std::to_string(count));
  }
  return Environment(*n, scale, dist, seed.value_or(0), std::move(raw), jitter);
}

void save_file(const Environment& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save(env, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

Environment load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load(in);
}

}  // namespace melonlab
