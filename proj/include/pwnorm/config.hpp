// Copyright 2026 The pwnorm Authors
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

// Space configuration files.
//
//   # comment
//   p = 4
//   space = p2w_sum([xp(power_decay(0.25)), xp(constant(0.5))], W = constant(0.7))
//
// A document is a sequence of `key = value` statements with keys `p` and
// `space`. Values are numbers, lists `[a, b, ...]` and calls `name(args)`;
// a bare name is a call without arguments. Arguments are positional or
// `key = value`, positional ones first. Axis and pair numbers are 1-based.
//
// Weights:    one, constant(c), power_decay(alpha), geometric(r),
//             explicit(values, tail = one), interleave(even, odd),
//             lift(axes, w), product(factors), select(branches), min(parts)
// Partitions: discrete, indiscrete, grouping(axes), pair_grouping(pairs),
//             select(branches), split(left_arity, left, right)
// Pairs:      pair(partition, w)
// Spaces:     lp, l2(w), sum_l2_lp(w), xp(w), schechtman(w, w2), yn(n, w),
//             p2w_sum(children, W), lp_sum(children), tensor(left, right),
//             xp_alpha(q, r = 0, L = 2), envelope(inner),
//             admissible(inner, w), members(arity, pairs), union(parts),
//             bp(count)

#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pwnorm/detail/format.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/partition.hpp"
#include "pwnorm/spaces.hpp"
#include "pwnorm/sparse_vector.hpp"
#include "pwnorm/weight.hpp"

namespace pwnorm {

/// Syntax and semantic errors in configs and vector files.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace config {

struct Value;

struct Call {
  std::string name;
  std::vector<std::pair<std::string, Value>> args;  // keys empty when positional
};

struct Value {
  std::variant<double, std::vector<Value>, Call> v;
  int line = 0;
  int column = 0;

  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_list() const { return std::holds_alternative<std::vector<Value>>(v); }
  bool is_call() const { return std::holds_alternative<Call>(v); }
  double number() const { return std::get<double>(v); }
  const std::vector<Value>& list() const { return std::get<std::vector<Value>>(v); }
  const Call& call() const { return std::get<Call>(v); }
};

enum class Type { kNumber, kInt, kWeight, kPartition, kPair, kSpace };

struct Param {
  std::string key;
  Type type;
  bool list = false;
  bool required = true;
};

struct Schema {
  std::vector<Param> params;
};

inline const std::map<std::string, Schema>& schemas(Type t) {
  using T = Type;
  static const std::map<std::string, Schema> weights{
      {"one", {}},
      {"constant", {{{"c", T::kNumber}}}},
      {"power_decay", {{{"alpha", T::kNumber}}}},
      {"geometric", {{{"r", T::kNumber}}}},
      {"explicit", {{{"values", T::kNumber, true}, {"tail", T::kWeight, false, false}}}},
      {"interleave", {{{"even", T::kWeight}, {"odd", T::kWeight}}}},
      {"lift", {{{"axes", T::kInt, true}, {"w", T::kWeight}}}},
      {"product", {{{"factors", T::kWeight, true}}}},
      {"select", {{{"branches", T::kWeight, true}}}},
      {"min", {{{"parts", T::kWeight, true}}}},
  };
  static const std::map<std::string, Schema> partitions{
      {"discrete", {}},
      {"indiscrete", {}},
      {"grouping", {{{"axes", T::kInt, true}}}},
      {"pair_grouping", {{{"pairs", T::kInt, true}}}},
      {"select", {{{"branches", T::kPartition, true}}}},
      {"split", {{{"left_arity", T::kInt}, {"left", T::kPartition}, {"right", T::kPartition}}}},
  };
  static const std::map<std::string, Schema> pairs{
      {"pair", {{{"partition", T::kPartition}, {"w", T::kWeight}}}},
  };
  static const std::map<std::string, Schema> spaces{
      {"lp", {}},
      {"l2", {{{"w", T::kWeight}}}},
      {"sum_l2_lp", {{{"w", T::kWeight}}}},
      {"xp", {{{"w", T::kWeight}}}},
      {"schechtman", {{{"w", T::kWeight}, {"w2", T::kWeight}}}},
      {"yn", {{{"n", T::kInt}, {"w", T::kWeight}}}},
      {"p2w_sum", {{{"children", T::kSpace, true}, {"W", T::kWeight}}}},
      {"lp_sum", {{{"children", T::kSpace, true}}}},
      {"tensor", {{{"left", T::kSpace}, {"right", T::kSpace}}}},
      {"xp_alpha", {{{"q", T::kInt}, {"r", T::kInt, false, false}, {"L", T::kInt, false, false}}}},
      {"envelope", {{{"inner", T::kSpace}}}},
      {"admissible", {{{"inner", T::kSpace}, {"w", T::kWeight, false, false}}}},
      {"members", {{{"arity", T::kInt}, {"pairs", T::kPair, true}}}},
      {"union", {{{"parts", T::kSpace, true}}}},
      {"bp", {{{"count", T::kInt}}}},
  };
  static const std::map<std::string, Schema> none;
  switch (t) {
    case T::kWeight: return weights;
    case T::kPartition: return partitions;
    case T::kPair: return pairs;
    case T::kSpace: return spaces;
    default: return none;
  }
}

inline const char* type_name(Type t) {
  switch (t) {
    case Type::kNumber: return "a number";
    case Type::kInt: return "an integer";
    case Type::kWeight: return "a weight";
    case Type::kPartition: return "a partition";
    case Type::kPair: return "a pair";
    case Type::kSpace: return "a space";
  }
  return "";
}

[[noreturn]] inline void fail_at(int line, int column, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": " + what);
}

[[noreturn]] inline void fail_path(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  std::vector<std::pair<std::string, Value>> document() {
    std::vector<std::pair<std::string, Value>> out;
    skip();
    while (pos_ < s_.size()) {
      const int l = line_, c = col_;
      std::string key = ident();
      if (key.empty()) fail_at(l, c, "expected a statement `key = value`");
      skip();
      expect('=');
      out.emplace_back(std::move(key), value());
      skip();
    }
    return out;
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char ch) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != ch) {
      fail_at(line_, col_, std::string("expected '") + ch + "'" + found());
    }
    advance();
  }

  std::string found() const {
    if (pos_ >= s_.size()) return ", found end of input";
    return std::string(", found '") + s_[pos_] + "'";
  }

  std::string ident() {
    std::string out;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      if (out.empty() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) break;
      out += s_[pos_];
      advance();
    }
    return out;
  }

  Value value() {
    skip();
    Value v;
    v.line = line_;
    v.column = col_;
    if (pos_ >= s_.size()) fail_at(line_, col_, "expected a value, found end of input");
    const char ch = s_[pos_];
    if (ch == '[') {
      advance();
      std::vector<Value> items;
      skip();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        advance();
      } else {
        while (true) {
          items.push_back(value());
          skip();
          if (pos_ < s_.size() && s_[pos_] == ',') {
            advance();
            continue;
          }
          expect(']');
          break;
        }
      }
      v.v = std::move(items);
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double d = std::strtod(begin, &end);
      if (end == begin) fail_at(line_, col_, "malformed number");
      for (auto n = end - begin; n > 0; --n) advance();
      if (!std::isfinite(d)) fail_at(v.line, v.column, "number out of range");
      v.v = d;
      return v;
    }
    Call call;
    call.name = ident();
    if (call.name.empty()) fail_at(line_, col_, "expected a value" + found());
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      advance();
      skip();
      if (pos_ < s_.size() && s_[pos_] == ')') {
        advance();
      } else {
        bool keyed = false;
        while (true) {
          skip();
          const std::size_t save = pos_;
          const int sl = line_, sc = col_;
          std::string key = ident();
          skip();
          if (!key.empty() && pos_ < s_.size() && s_[pos_] == '=') {
            advance();
            keyed = true;
          } else {
            pos_ = save;
            line_ = sl;
            col_ = sc;
            if (keyed) fail_at(sl, sc, "positional argument after a keyword argument");
            key.clear();
          }
          call.args.emplace_back(std::move(key), value());
          skip();
          if (pos_ < s_.size() && s_[pos_] == ',') {
            advance();
            continue;
          }
          expect(')');
          break;
        }
      }
    }
    v.v = std::move(call);
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Checks a value against a type and rewrites calls with named arguments in
/// schema order.
inline Value normalize(const Value& v, Type t, bool list, const std::string& path) {
  if (list) {
    if (!v.is_list()) fail_at(v.line, v.column, path + ": expected a list of " + type_name(t));
    Value out = v;
    std::vector<Value> items;
    for (std::size_t i = 0; i < v.list().size(); ++i) {
      items.push_back(normalize(v.list()[i], t, false, path + "[" + std::to_string(i) + "]"));
    }
    out.v = std::move(items);
    return out;
  }
  if (t == Type::kNumber || t == Type::kInt) {
    if (!v.is_number()) fail_at(v.line, v.column, path + ": expected " + type_name(t));
    if (t == Type::kInt && (v.number() != std::floor(v.number()) || v.number() < 0 ||
                            v.number() > 1e15)) {
      fail_at(v.line, v.column, path + ": expected a nonnegative integer");
    }
    return v;
  }
  if (!v.is_call()) fail_at(v.line, v.column, path + ": expected " + type_name(t));
  const Call& c = v.call();
  const auto& table = schemas(t);
  const auto it = table.find(c.name);
  if (it == table.end()) {
    fail_at(v.line, v.column, path + ": unknown " + std::string(type_name(t)).substr(2) +
                                  " '" + c.name + "'");
  }
  const auto& params = it->second.params;
  std::vector<std::optional<Value>> slots(params.size());
  std::size_t next = 0;
  for (const auto& [key, arg] : c.args) {
    std::size_t k = 0;
    if (key.empty()) {
      if (next >= params.size()) {
        fail_at(arg.line, arg.column, path + ": too many arguments for " + c.name);
      }
      k = next++;
    } else {
      while (k < params.size() && params[k].key != key) ++k;
      if (k == params.size()) {
        fail_at(arg.line, arg.column, path + ": " + c.name + " has no parameter '" + key + "'");
      }
    }
    if (slots[k]) {
      fail_at(arg.line, arg.column, path + ": parameter '" + params[k].key + "' given twice");
    }
    slots[k] = normalize(arg, params[k].type, params[k].list, path + "." + params[k].key);
  }
  Call out{c.name, {}};
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!slots[k]) {
      if (params[k].required) {
        fail_at(v.line, v.column, path + ": " + c.name + " needs '" + params[k].key + "'");
      }
      continue;
    }
    out.args.emplace_back(params[k].key, std::move(*slots[k]));
  }
  Value r = v;
  r.v = std::move(out);
  return r;
}

inline std::string print(const Value& v) {
  if (v.is_number()) return detail::exact_number(v.number());
  if (v.is_list()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.list().size(); ++i) s += (i ? ", " : "") + print(v.list()[i]);
    return s + "]";
  }
  const Call& c = v.call();
  if (c.args.empty()) return c.name;
  std::string s = c.name + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    s += (i ? ", " : "") + c.args[i].first + " = " + print(c.args[i].second);
  }
  return s + ")";
}

class Builder {
 public:
  explicit Builder(double p) : p_(p) {}

  Weight weight(const Value& v, const std::string& path) const {
    return guard(path, [&] {
      const Call& c = v.call();
      const auto& n = c.name;
      if (n == "one") return Weight::one();
      if (n == "constant") return Weight::constant(num(c, 0));
      if (n == "power_decay") return Weight::power_decay(num(c, 0));
      if (n == "geometric") return Weight::geometric(num(c, 0));
      if (n == "explicit") {
        std::vector<double> vals;
        for (const auto& x : arg(c, "values").list()) vals.push_back(x.number());
        const Value* tail = find(c, "tail");
        return Weight::explicit_values(std::move(vals),
                                       tail ? weight(*tail, path + ".tail") : Weight::one());
      }
      if (n == "interleave") {
        return Weight::interleave(weight(arg(c, "even"), path + ".even"),
                                  weight(arg(c, "odd"), path + ".odd"));
      }
      if (n == "lift") return Weight::lift(axes(arg(c, "axes")), weight(arg(c, "w"), path + ".w"));
      const std::string key = c.args[0].first;
      std::vector<Weight> parts;
      const auto& items = c.args[0].second.list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        parts.push_back(weight(items[i], path + "." + key + "[" + std::to_string(i) + "]"));
      }
      if (n == "product") return Weight::product(std::move(parts));
      if (n == "select") return Weight::select(std::move(parts));
      return Weight::min_of(std::move(parts));
    });
  }

  Partition partition(const Value& v, const std::string& path) const {
    return guard(path, [&] {
      const Call& c = v.call();
      const auto& n = c.name;
      if (n == "discrete") return Partition::discrete();
      if (n == "indiscrete") return Partition::indiscrete();
      if (n == "grouping") return Partition::grouping(axes(arg(c, "axes")));
      if (n == "pair_grouping") return Partition::pair_grouping(ints(arg(c, "pairs")));
      if (n == "select") {
        std::vector<Partition> parts;
        const auto& items = arg(c, "branches").list();
        for (std::size_t i = 0; i < items.size(); ++i) {
          parts.push_back(partition(items[i], path + ".branches[" + std::to_string(i) + "]"));
        }
        return Partition::select(std::move(parts));
      }
      return Partition::split(static_cast<std::size_t>(num(c, 0)),
                              partition(arg(c, "left"), path + ".left"),
                              partition(arg(c, "right"), path + ".right"));
    });
  }

  Family space(const Value& v, const std::string& path) const {
    return guard(path, [&] {
      const Call& c = v.call();
      const auto& n = c.name;
      auto w = [&](const char* key) { return weight(arg(c, key), path + "." + key); };
      auto kids = [&](const char* key) {
        std::vector<Family> out;
        const auto& items = arg(c, key).list();
        for (std::size_t i = 0; i < items.size(); ++i) {
          out.push_back(space(items[i], path + "." + key + "[" + std::to_string(i) + "]"));
        }
        return out;
      };
      if (n == "lp") return make_lp(p_);
      if (n == "l2") return make_l2(p_, w("w"));
      if (n == "sum_l2_lp") return make_sum_l2_lp(p_, w("w"));
      if (n == "xp") return make_rosenthal_xp(p_, w("w"));
      if (n == "schechtman") return make_schechtman(p_, w("w"), w("w2"));
      if (n == "yn") return make_Yn(p_, static_cast<std::size_t>(num(c, 0)), w("w"));
      if (n == "p2w_sum") return p2w_sum(kids("children"), w("W"));
      if (n == "lp_sum") return lp_sum(kids("children"));
      if (n == "tensor") {
        return tensor_family(space(arg(c, "left"), path + ".left"),
                             space(arg(c, "right"), path + ".right"));
      }
      if (n == "xp_alpha") {
        OrdinalDesc d;
        d.q = static_cast<std::size_t>(num(c, 0));
        if (const Value* r = find(c, "r")) d.r = static_cast<std::size_t>(r->number());
        if (const Value* l = find(c, "L")) d.limit_truncation = static_cast<std::size_t>(l->number());
        return xp_alpha(p_, d);
      }
      if (n == "envelope") return Family::envelope(space(arg(c, "inner"), path + ".inner"));
      if (n == "admissible") {
        std::optional<Weight> iw;
        if (find(c, "w")) iw = w("w");
        return make_admissible(space(arg(c, "inner"), path + ".inner"), iw);
      }
      if (n == "members") {
        std::vector<PairPW> pairs;
        const auto& items = arg(c, "pairs").list();
        for (std::size_t i = 0; i < items.size(); ++i) {
          const std::string sub = path + ".pairs[" + std::to_string(i) + "]";
          const Call& pc = items[i].call();
          pairs.push_back({partition(arg(pc, "partition"), sub + ".partition"),
                           weight(arg(pc, "w"), sub + ".w")});
        }
        return Family::explicit_list(p_, static_cast<std::size_t>(num(c, 0)), std::move(pairs));
      }
      if (n == "union") return Family::union_of(kids("parts"));
      return make_bp(p_, static_cast<std::size_t>(num(c, 0)));
    });
  }

 private:
  static const Value* find(const Call& c, const std::string& key) {
    for (const auto& [k, v] : c.args) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  static const Value& arg(const Call& c, const std::string& key) { return *find(c, key); }
  static double num(const Call& c, std::size_t i) { return c.args[i].second.number(); }
  static std::vector<std::size_t> ints(const Value& v) {
    std::vector<std::size_t> out;
    for (const auto& x : v.list()) out.push_back(static_cast<std::size_t>(x.number()));
    return out;
  }
  static std::vector<std::size_t> axes(const Value& v) {
    auto out = ints(v);
    for (auto& a : out) {
      detail::require(a >= 1, "axis numbers are 1-based");
      --a;
    }
    return out;
  }

  template <class F>
  static auto guard(const std::string& path, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail_path(path, e.what());
    }
  }

  double p_;
};

}  // namespace config

/// A parsed, validated space configuration.
struct Config {
  double p = 0.0;
  config::Value space;

  /// Canonical text; parse_config(c.str()).str() == c.str().
  std::string str() const {
    return "p = " + detail::exact_number(p) + "\nspace = " + config::print(space) + "\n";
  }

  std::string space_str() const { return config::print(space); }

  Family build() const { return config::Builder(p).space(space, "space"); }
};

inline Config parse_config(const std::string& text) {
  config::Parser parser(text);
  const auto doc = parser.document();
  std::optional<config::Value> p, space;
  for (const auto& [key, v] : doc) {
    if (key != "p" && key != "space") {
      config::fail_at(v.line, v.column, "unknown key '" + key + "'");
    }
    auto& slot = key == "p" ? p : space;
    if (slot)config::fail_at(v.line, v.column, "'" + key + "' given twice");
    slot = v;
  }
  if (!p) throw ConfigError("p: missing");
  if (!space) throw ConfigError("space: missing");
  Config c;
  const auto pv = config::normalize(*p, config::Type::kNumber, false, "p");
  c.p = pv.number();
  if (!(c.p > 2.0)) config::fail_path("p", "p must be > 2, got " + detail::exact_number(c.p));
  c.space = config::normalize(*space, config::Type::kSpace, false, "space");
  c.build();
  return c;
}

/// Reads `i1 ... im : value` entries and `block t1 ... tm axis lo hi : value`
/// blocks, with the running axis 1-based. Blank lines and `#` comments are
/// skipped. The arity comes from the first entry.
inline SparseVector read_vector(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<SparseVector> x;
  auto fail = [&](const std::string& what) -> void {
    throw ConfigError("vector line " + std::to_string(lineno) + ": " + what);
  };
  auto parse_num = [&](const std::string& tok) {
    const char* b = tok.c_str();
    char* e = nullptr;
    const double d = std::strtod(b, &e);
    if (e == b || *e != '\0') fail("malformed number '" + tok + "'");
    return d;
  };
  auto parse_coord = [&](const std::string& tok) {
    const double d = parse_num(tok);
    if (d != std::floor(d) || d < 1 || d > 9e15) fail("coordinates must be integers >= 1");
    return static_cast<Coord>(d);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const auto colon = raw.find(':');
    std::istringstream lhs(raw.substr(0, colon));
    std::vector<std::string> toks;
    for (std::string t; lhs >> t;) toks.push_back(t);
    if (toks.empty() && colon == std::string::npos) continue;
    if (colon == std::string::npos) fail("expected ':' before the value");
    std::istringstream rhs(raw.substr(colon + 1));
    std::string vt, extra;
    if (!(rhs >> vt) || (rhs >> extra)) fail("expected exactly one value after ':'");
    const double value = parse_num(vt);
    try {
      if (!toks.empty() && toks[0] == "block") {
        if (toks.size() < 5) fail("block needs a template, an axis, lo and hi");
        const std::size_t m = toks.size() - 4;
        std::vector<Coord> c;
        for (std::size_t i = 1; i <= m; ++i) c.push_back(parse_coord(toks[i]));
        const Coord axis = parse_coord(toks[m + 1]);
        if (!x) x.emplace(m);
        if (axis > m) fail("block axis beyond the arity");
        x->add_block({Index(std::move(c)), static_cast<std::size_t>(axis - 1),
                      parse_coord(toks[m + 2]), parse_coord(toks[m + 3]), value});
      } else {
        if (toks.empty()) fail("missing coordinates");
        std::vector<Coord> c;
        for (const auto& t : toks) c.push_back(parse_coord(t));
        if (!x) x.emplace(c.size());
        x->add(Index(std::move(c)), value);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }
  if (!x || x->empty()) throw ConfigError("vector file has no entries");
  return *x;
}

/// Text accepted by read_vector.
inline std::string write_vector(const SparseVector& x) {
  std::string out;
  for (const auto& e : x.entries()) {
    for (std::size_t i = 0; i < e.index.arity(); ++i) out += std::to_string(e.index[i]) + " ";
    out += ": " + detail::exact_number(e.coefficient) + "\n";
  }
  for (const auto& b : x.blocks()) {
    out += "block ";
    for (std::size_t i = 0; i < b.tmpl.arity(); ++i) out += std::to_string(b.tmpl[i]) + " ";
    out += std::to_string(b.axis + 1) + " " + std::to_string(b.lo) + " " + std::to_string(b.hi) +
           " : " + detail::exact_number(b.coefficient) + "\n";
  }
  return out;
}

}  // namespace pwnorm
