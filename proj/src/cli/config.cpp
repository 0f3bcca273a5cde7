// Copyright 2026 The occtime Authors
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

#include "occtime/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace occtime {
namespace {

struct Value {
  enum class Kind { Number, Word, List, Matrix } kind = Kind::Number;
  double number = 0.0;
  std::string word;
  std::vector<double> list;
  std::vector<std::vector<double>> matrix;
};

struct Entry {
  Value value;
  int line = 0;
};

const std::set<std::string> kKnownKeys = {
    "model.type",    "model.lambda",  "on.kind",          "on.mu",          "on.m",         "on.p",
    "on.alpha0",     "on.T",          "jump.kind",        "jump.mu",        "jump.m",       "jump.p",
    "jump.alpha0",   "jump.T",        "rates.r1",         "rates.pos",      "buffer.K",     "level.tau",
    "grid.theta1",   "grid.theta2",   "grid.t",           "grid.s",         "grid.r",       "inversion.M",
    "inversion.N",   "inversion.gamma", "inversion.gamma_inner", "simulate.reps", "simulate.seed",
    "simulate.horizon", "simulate.kind",
};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.find('.') == std::string::npos) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return key.front() != '.' && key.back() != '.';
}

// Recursive-descent reader for one value.
class ValueReader {
 public:
  explicit ValueReader(std::string_view text) : text_(text) {}

  Value read() {
    Value v;
    skip();
    if (peek() == '[') {
      ++pos_;
      skip();
      if (peek() == '[') {
        v.kind = Value::Kind::Matrix;
        for (;;) {
          expect('[');
          v.matrix.push_back(numbers(']'));
          skip();
          if (peek() == ',') {
            ++pos_;
            skip();
            continue;
          }
          expect(']');
          break;
        }
      } else {
        v.kind = Value::Kind::List;
        v.list = numbers(']');
      }
    } else if (text_.substr(pos_).starts_with("linspace")) {
      pos_ += 8;
      skip();
      expect('(');
      const auto args = numbers(')');
      if (args.size() != 3) throw std::invalid_argument("linspace takes (start, stop, count)");
      const double count = args[2];
      if (!(count >= 2.0) || count != std::floor(count)) throw std::invalid_argument("linspace count must be an integer >= 2");
      const auto n = static_cast<std::size_t>(count);
      v.kind = Value::Kind::List;
      for (std::size_t i = 0; i < n; ++i) {
        v.list.push_back(args[0] + (args[1] - args[0]) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    } else if (auto x = try_number()) {
      v.kind = Value::Kind::Number;
      v.number = *x;
    } else {
      v.kind = Value::Kind::Word;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '-')) {
        ++pos_;
      }
      v.word = std::string(text_.substr(start, pos_ - start));
      if (v.word.empty()) throw std::invalid_argument("expected a value");
    }
    skip();
    if (pos_ != text_.size()) throw std::invalid_argument("trailing characters after value");
    return v;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (peek() != c) throw std::invalid_argument(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::optional<double> try_number() {
    skip();
    double x = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr == first) return std::nullopt;
    // Reject things like "1e" followed by letters being read as words later.
    if (res.ptr != last && (std::isalpha(static_cast<unsigned char>(*res.ptr)) || *res.ptr == '_')) return std::nullopt;
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return x;
  }

  std::vector<double> numbers(char close) {
    std::vector<double> out;
    skip();
    if (peek() == close) {
      ++pos_;
      return out;
    }
    for (;;) {
      auto x = try_number();
      if (!x) throw std::invalid_argument("expected a number");
      out.push_back(*x);
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(close);
      return out;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Document {
 public:
  Document(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(source_, line_no, "", "expected `key = value`");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      if (!valid_key(key)) throw ConfigError(source_, line_no, key, "malformed key (expected section.name)");
      if (!kKnownKeys.contains(key)) throw ConfigError(source_, line_no, key, "unknown key");
      if (entries_.contains(key)) {
        throw ConfigError(source_, line_no, key,
                          "duplicate key (first set on line " + std::to_string(entries_[key].line) + ")");
      }
      try {
        entries_[key] = {ValueReader(std::string_view(line).substr(eq + 1)).read(), line_no};
      } catch (const std::invalid_argument& e) {
        throw ConfigError(source_, line_no, key, e.what());
      }
    }
    last_line_ = line_no;
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const auto it = entries_.find(key);
    throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, key, msg);
  }

  const Entry& entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing required key");
    return it->second;
  }

  double number(const std::string& key) const {
    const Entry& e = entry(key);
    if (e.value.kind != Value::Kind::Number) fail(key, "expected a number");
    if (!std::isfinite(e.value.number)) fail(key, "must be finite");
    return e.value.number;
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const double x = number(key);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) fail(key, "expected an integer");
    return static_cast<long long>(x);
  }

  std::string word(const std::string& key) const {
    const Entry& e = entry(key);
    if (e.value.kind != Value::Kind::Word) fail(key, "expected a word");
    return e.value.word;
  }

  /// A scalar is accepted as a one-element list.
  std::vector<double> list(const std::string& key) const {
    const Entry& e = entry(key);
    if (e.value.kind == Value::Kind::Number) return {e.value.number};
    if (e.value.kind != Value::Kind::List) fail(key, "expected a list of numbers");
    for (double x : e.value.list) {
      if (!std::isfinite(x)) fail(key, "entries must be finite");
    }
    return e.value.list;
  }

  std::vector<std::vector<double>> matrix(const std::string& key) const {
    const Entry& e = entry(key);
    if (e.value.kind == Value::Kind::List) return {e.value.list};
    if (e.value.kind != Value::Kind::Matrix) fail(key, "expected a nested list [[...], ...]");
    return e.value.matrix;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
  int last_line_ = 0;
};

PhaseType parse_phase_type(const Document& doc, const std::string& block) {
  const std::string kind_key = block + ".kind";
  const std::string kind = doc.word(kind_key);
  try {
    if (kind == "exponential") {
      return make_exponential(doc.number(block + ".mu"));
    }
    if (kind == "erlang") {
      const long long m = doc.integer(block + ".m");
      if (m < 1 || m > 1000) doc.fail(block + ".m", "stage count must be in [1, 1000]");
      return make_erlang(static_cast<int>(m), doc.number(block + ".mu"));
    }
    if (kind == "coxian") {
      const auto mu = doc.list(block + ".mu");
      const auto p = doc.has(block + ".p") ? doc.list(block + ".p") : std::vector<double>{};
      if (doc.has(block + ".m") && doc.integer(block + ".m") != static_cast<long long>(mu.size())) {
        doc.fail(block + ".m", "does not match the number of rates in " + block + ".mu");
      }
      if (p.size() + 1 != mu.size()) doc.fail(block + ".p", "coxian needs one continuation probability fewer than rates");
      return make_coxian(p, mu);
    }
    if (kind == "general") {
      const auto a = doc.list(block + ".alpha0");
      const auto T = doc.matrix(block + ".T");
      const auto n = static_cast<Eigen::Index>(a.size());
      if (static_cast<Eigen::Index>(T.size()) != n) doc.fail(block + ".T", "must have one row per entry of alpha0");
      Eigen::MatrixXd Tm(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(T[i].size()) != n) doc.fail(block + ".T", "must be square");
        for (Eigen::Index j = 0; j < n; ++j) Tm(i, j) = T[i][j];
      }
      return PhaseType(Eigen::Map<const Eigen::VectorXd>(a.data(), n), Tm);
    }
  } catch (const DomainError& e) {
    doc.fail(kind_key, e.what());
  }
  doc.fail(kind_key, "unknown phase-type kind `" + kind + "` (exponential, erlang, coxian, general)");
}

std::vector<double> grid(const Document& doc, const std::string& key, double lower, bool strict_lower) {
  if (!doc.has(key)) return {};
  auto g = doc.list(key);
  if (g.empty()) doc.fail(key, "grid must be nonempty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (strict_lower ? !(g[i] > lower) : !(g[i] >= lower)) {
      doc.fail(key, std::string("grid values must be ") + (strict_lower ? "> " : ">= ") + std::to_string(lower));
    }
    if (i > 0 && !(g[i] > g[i - 1])) doc.fail(key, "grid must be strictly increasing");
  }
  return g;
}

EulerParams euler(const Document& doc, double gamma_default, const std::string& gamma_key) {
  EulerParams p;
  p.M = doc.has("inversion.M") ? static_cast<int>(doc.integer("inversion.M")) : 10;
  p.N = doc.has("inversion.N") ? static_cast<int>(doc.integer("inversion.N")) : 15;
  p.gamma = doc.number_or(gamma_key, gamma_default);
  if (p.M < 0 || p.M > 200) doc.fail("inversion.M", "must be in [0, 200]");
  if (p.N < 1 || p.N > 2000) doc.fail("inversion.N", "must be in [1, 2000]");
  if (!(p.gamma >= 1.0 && p.gamma <= 15.0)) doc.fail(gamma_key, "must be in [1, 15]");
  return p;
}

QueueModel parse_model(const Document& doc) {
  const std::string type = doc.word("model.type");
  const double lambda = doc.number("model.lambda");
  if (!(lambda > 0.0)) doc.fail("model.lambda", "must be positive");
  const double r1 = doc.number("rates.r1");
  if (!(r1 < 0.0)) doc.fail("rates.r1", "drain rate must be negative");
  const double K = doc.number("buffer.K");
  if (!(K > 0.0)) doc.fail("buffer.K", "must be positive");
  const double tau = doc.number("level.tau");
  if (!(tau >= 0.0 && tau <= K)) doc.fail("level.tau", "tau must lie in [0, K]");

  if (type == "fluid") {
    if (doc.has("jump.kind")) doc.fail("jump.kind", "fluid models take an `on` block, not `jump`");
    PhaseType on = parse_phase_type(doc, "on");
    const auto pos = doc.list("rates.pos");
    if (static_cast<int>(pos.size()) != on.phases()) {
      doc.fail("rates.pos", "need one positive rate per ON phase (" + std::to_string(on.phases()) + ")");
    }
    for (double x : pos) {
      if (!(x > 0.0)) doc.fail("rates.pos", "rates must be positive");
    }
    return FluidModel(lambda, std::move(on), r1, Eigen::Map<const Eigen::VectorXd>(pos.data(), pos.size()), K, tau);
  }
  if (type == "mg1") {
    if (doc.has("on.kind")) doc.fail("on.kind", "mg1 models take a `jump` block, not `on`");
    if (doc.has("rates.pos")) doc.fail("rates.pos", "only fluid models have positive rates");
    return Mg1Model(lambda, parse_phase_type(doc, "jump"), r1, K, tau);
  }
  doc.fail("model.type", "unknown model type `" + type + "` (fluid, mg1)");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& key, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + (key.empty() ? "" : "`" + key + "`: ") + msg),
      line_(line),
      key_(key) {}

RunConfig parse_config(std::istream& in, const std::string& source) {
  const Document doc(in, source);
  RunConfig cfg{parse_model(doc), {}, {}, {}, {}, {}, kDefaultOuter, kDefaultInner, {}};
  cfg.theta1 = grid(doc, "grid.theta1", 0.0, false);
  cfg.theta2 = grid(doc, "grid.theta2", 0.0, false);
  cfg.t = grid(doc, "grid.t", 0.0, true);
  cfg.s = grid(doc, "grid.s", 0.0, false);
  cfg.r = grid(doc, "grid.r", 0.0, true);
  cfg.outer = euler(doc, kDefaultOuter.gamma, "inversion.gamma");
  cfg.inner = euler(doc, cfg.outer.gamma + 2.0, "inversion.gamma_inner");

  if (doc.has("simulate.reps")) {
    const long long reps = doc.integer("simulate.reps");
    if (reps < 1) doc.fail("simulate.reps", "must be >= 1");
    cfg.sim.reps = static_cast<std::size_t>(reps);
  }
  if (doc.has("simulate.seed")) {
    const long long seed = doc.integer("simulate.seed");
    if (seed < 0) doc.fail("simulate.seed", "must be >= 0");
    cfg.sim.seed = static_cast<std::uint64_t>(seed);
  }
  if (doc.has("simulate.horizon")) {
    cfg.sim.horizon = doc.number("simulate.horizon");
    if (!(cfg.sim.horizon > 0.0)) doc.fail("simulate.horizon", "must be positive");
  }
  if (doc.has("simulate.kind")) {
    cfg.sim.kind = doc.word("simulate.kind");
    if (cfg.sim.kind != "occupation" && cfg.sim.kind != "cycles") {
      doc.fail("simulate.kind", "expected `occupation` or `cycles`");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "", "cannot open config file");
  return parse_config(in, path);
}

}  // namespace occtime
