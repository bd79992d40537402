#include "rnbpg/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rnbpg/errors.hpp"

namespace rnbpg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double to_double(std::string_view v, std::string_view key) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw Error(ErrorCode::bad_config,
                "config: bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_u64(std::string_view v, std::string_view key) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw Error(ErrorCode::bad_config,
                "config: bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

}  // namespace

void SolverParams::validate() const {
  if (!(eta > 1.0))
    throw Error(ErrorCode::invalid_parameter, "eta must be > 1");
  if (!(sigma > 0.0))
    throw Error(ErrorCode::invalid_parameter, "sigma must be > 0");
  if (!(alpha_low > 0.0) || !(alpha_low <= alpha_high))
    throw Error(ErrorCode::invalid_parameter, "need 0 < alpha_low <= alpha_high");
  if (!(tol >= 0.0))
    throw Error(ErrorCode::invalid_parameter, "tol must be nonnegative");
  if (!(gap_tol >= 0.0))
    throw Error(ErrorCode::invalid_parameter, "gap_tol must be nonnegative");
  if (!probs.empty()) {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p > 0.0))
        throw Error(ErrorCode::invalid_parameter, "probs entries must be positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw Error(ErrorCode::invalid_parameter, "probs must sum to 1");
  }
}

ConfigFile parse_config(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::bad_config,
                  "config line " + std::to_string(lineno) + ": expected key=value");
    std::string_view key = trim(sv.substr(0, eq));
    std::string_view val = trim(sv.substr(eq + 1));
    SolverParams& p = cfg.params;
    if (key == "eta")
      p.eta = to_double(val, key);
    else if (key == "sigma")
      p.sigma = to_double(val, key);
    else if (key == "alpha_low")
      p.alpha_low = to_double(val, key);
    else if (key == "alpha_high")
      p.alpha_high = to_double(val, key);
    else if (key == "window")
      p.window = static_cast<std::uint32_t>(to_u64(val, key));
    else if (key == "seed")
      p.seed = to_u64(val, key);
    else if (key == "max_iters")
      p.max_iters = to_u64(val, key);
    else if (key == "max_inner_trials")
      p.max_inner_trials = val == "auto" ? 0 : static_cast<std::uint32_t>(to_u64(val, key));
    else if (key == "tol")
      p.tol = to_double(val, key);
    else if (key == "block_size")
      cfg.block_size = static_cast<std::size_t>(to_u64(val, key));
    else if (key == "reg")
      cfg.reg = SeparableRegularizer::parse(val);
    else if (key == "probs") {
      if (val == "uniform") {
        p.probs.clear();
      } else {
        p.probs.clear();
        std::string_view rest = val;
        while (!rest.empty()) {
          auto comma = rest.find(',');
          std::string_view tok = trim(rest.substr(0, comma));
          p.probs.push_back(to_double(tok, key));
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
        }
        if (p.probs.empty())
          throw Error(ErrorCode::bad_config, "config: empty probs list");
      }
    } else {
      throw Error(ErrorCode::bad_config,
                  "config line " + std::to_string(lineno) + ": unknown key '" +
                      std::string(key) + "'");
    }
  }
  cfg.params.validate();
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io_failure, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rnbpg
