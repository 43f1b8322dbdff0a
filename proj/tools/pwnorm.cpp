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


#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pwnorm/pwnorm.hpp"

namespace {

using namespace pwnorm;

class IoError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string config;
  std::string vector;
  std::string command;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t cap_assignments = std::uint64_t{1} << 24;
  std::size_t cap_members = 8;
  double eps = 1.0;
  std::size_t n = 3;
  std::uint64_t samples = 1'000'000;
  std::string vars;
  double p = 4.0;
  unsigned threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string num(double v) { return detail::report_number(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const Options& o, const Report& r) {
  if (o.out.empty()) return;
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw IoError("cannot write " + o.out);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\n";
  };
  line(r.header);
  for (const auto& row : r.rows) line(row);
  if (!out) throw IoError("cannot write " + o.out);
}

Caps caps_of(const Options& o) {
  Caps c;
  c.max_assignments = o.cap_assignments;
  c.envelope_max_members = o.cap_members;
  c.threads = o.threads;
  return c;
}

Config need_config(const Options& o) {
  if (o.config.empty()) throw ValidationError("--config is required for " + o.command);
  return parse_config(read_file(o.config));
}

SparseVector need_vector(const Options& o) {
  if (o.vector.empty()) throw ValidationError("--vector is required for " + o.command);
  return read_vector(read_file(o.vector));
}

Report run_norm(const Options& o) {
  const Config c = need_config(o);
  const Family f = c.build();
  const SparseVector x = need_vector(o);
  std::string value, member;
  if (o.command == "norm") {
    const auto r = family_norm(x, f, caps_of(o));
    value = num(r.value);
    member = r.argmax_member;
  } else {
    const auto r = envelope_norm_exact(x, f, caps_of(o));
    value = num(r.norm.value);
    member = r.witness.str();
  }
  std::cout << o.command << " = " << value << "\nargmax: " << member << "\n";
  return {{"command", "space", "p", "norm", "argmax_member"},
          {{o.command, c.space_str(), num(c.p), value, member}}};
}

Report run_distortion(const Options& o) {
  const Config c = need_config(o);
  const auto r = distortion_certificate(need_vector(o), c.build(), caps_of(o));
  std::cout << "given_norm = " << num(r.given_norm) << "\nenvelope_lb = " << num(r.envelope_lb)
            << "\nratio = " << num(r.ratio) << "\ndistance_lb = " << num(r.distance_lb)
            << "\nwitness: " << r.witness << "\n";
  return {{"command", "space", "p", "given_norm", "envelope_lb", "ratio", "distance_lb"},
          {{o.command, c.space_str(), num(c.p), num(r.given_norm), num(r.envelope_lb),
            num(r.ratio), num(r.distance_lb)}}};
}

Classification classify_config(const Config& c) {
  const Family f = c.build();
  const auto* list = f.as<Family::ExplicitList>();
  const std::string& top = c.space.call().name;
  if (top == "xp") {
    return classify_rosenthal(list->members[1].weight, c.p);
  }
  if (list && list->members.size() == 1) {
    try {
      return classify_single(profile_of(list->members[0].partition, f.arity()));
    } catch (const UndecidableError& e) {
      return {IsoType::kUnknown, e.what()};
    }
  }
  return {IsoType::kUnknown, "only Rosenthal spaces and one-member families are classified"};
}

Report run_classify(const Options& o) {
  const Config c = need_config(o);
  const auto r = classify_config(c);
  std::cout << to_string(r.type) << "\nreason: " << r.reason << "\n";
  return {{"command", "space", "p", "type", "reason"},
          {{o.command, c.space_str(), num(c.p), to_string(r.type), r.reason}}};
}

Report run_property(const Options& o) {
  const Config c = need_config(o);
  const SparseVector x = need_vector(o);
  PropertyOptions opt;
  opt.seed = o.seed;
  const auto v = has_envelope_property(c.build(), x.support(), caps_of(o), opt);
  std::cout << v.str() << "\n";
  std::string witness;
  if (!v.holds) {
    witness = "Q=" + v.q->str() + " T=";
    for (std::size_t i = 0; i < v.t.size(); ++i) witness += (i ? ";" : "") + v.t[i];
  }
  return {{"command", "space", "p", "holds", "exhaustive", "checks", "counterexample"},
          {{o.command, c.space_str(), num(c.p), v.holds ? "true" : "false",
            v.exhaustive ? "true" : "false", std::to_string(v.checks), witness}}};
}

std::string joined(const std::vector<Coord>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

Report run_yn(const Options& o) {
  double p = o.p;
  std::size_t n = o.n;
  Weight w = Weight::power_decay(0.25);
  if (!o.config.empty()) {
    const Config c = parse_config(read_file(o.config));
    const Family f = c.build();
    const auto* lat = f.as<Family::SubsetLattice>();
    if (!lat) throw ValidationError("experiment-yn needs a yn(n, w) space");
    p = c.p;
    n = lat->n;
    w = lat->base;
  }
  const auto r = yn_report(YnParams::automatic(p, n, w, o.eps));
  Report rep;
  rep.header = {"n", "p", "eps", "m", "K"};
  std::vector<std::string> row{std::to_string(n), num(p), num(o.eps), joined(r.params.m),
                               joined(r.params.K)};
  for (std::size_t i = 0; i < r.sums.values.size(); ++i) {
    rep.header.push_back("S_" + std::to_string(i));
    row.push_back(num(r.sums.values[i]));
    std::cout << "S_" << i << " " << r.sums.ids[i] << " = " << num(r.sums.values[i]) << "\n";
  }
  for (const char* h : {"given_norm", "envelope_lb", "ratio", "distance_lb"}) rep.header.push_back(h);
  for (double v : {r.given_norm, r.envelope_lb, r.ratio, r.distance_lb}) row.push_back(num(v));
  std::cout << "m = " << joined(r.params.m) << ", K = " << joined(r.params.K)
            << "\ngiven_norm = " << num(r.given_norm) << "\nenvelope_lb = " << num(r.envelope_lb)
            << "\nratio = " << num(r.ratio) << "\ndistance_lb = " << num(r.distance_lb) << "\n";
  rep.rows.push_back(std::move(row));
  return rep;
}

std::vector<ThreePoint> parse_vars(const Options& o) {
  if (o.vars.empty()) return std::vector<ThreePoint>(o.n, ThreePoint{1.0, 1.0});
  std::vector<ThreePoint> out;
  std::stringstream ss(o.vars);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    try {
      std::size_t used = 0;
      ThreePoint t;
      t.a = std::stod(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(item);
      t.q = colon == std::string::npos ? 1.0 : std::stod(item.substr(colon + 1), &used);
      if (colon != std::string::npos && used != item.size() - colon - 1) {
        throw std::invalid_argument(item);
      }
      out.push_back(t);
    } catch (const std::logic_error&) {
      throw ValidationError("--vars: malformed item '" + item + "', expected a:q");
    }
  }
  return out;
}

Report run_rosenthal(const Options& o) {
  double p = o.p;
  if (!o.config.empty()) p = parse_config(read_file(o.config)).p;
  const auto r = rosenthal_mc(parse_vars(o), p, o.samples, o.seed, o.threads);
  std::cout << "lhs_est = " << num(r.lhs_est) << " +- " << num(r.stderr_lhs)
            << "\nrhs = " << num(r.rhs) << "\nratio = " << num(r.ratio) << "\n";
  return {{"N", "p", "samples", "seed", "lhs_est", "stderr", "rhs", "ratio"},
          {{std::to_string(r.N), num(p), std::to_string(r.samples), std::to_string(r.seed),
            num(r.lhs_est), num(r.stderr_lhs), num(r.rhs), num(r.ratio)}}};
}

Report dispatch(const Options& o) {
  const std::string& c = o.command;
  if (c == "norm" || c == "envelope") return run_norm(o);
  if (c == "distortion") return run_distortion(o);
  if (c == "classify") return run_classify(o);
  if (c == "check-envelope-property") return run_property(o);
  if (c == "experiment-yn") return run_yn(o);
  if (c == "experiment-rosenthal") return run_rosenthal(o);
  throw ValidationError("unknown command '" + c + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-weight norms, envelopes and distortion certificates"};
  Options o;
  app.add_option("--config", o.config, "Space configuration file");
  app.add_option("--vector", o.vector, "Vector file");
  app.add_option("--command", o.command,
                 "norm | envelope | distortion | classify | check-envelope-property | "
                 "experiment-yn | experiment-rosenthal")
      ->required();
  app.add_option("--out", o.out, "CSV output file");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--cap-assignments", o.cap_assignments, "Envelope search cap");
  app.add_option("--cap-members", o.cap_members, "Member cap for envelope search");
  app.add_option("--eps", o.eps, "Lattice experiment tolerance");
  app.add_option("--n", o.n, "Lattice depth, or the number of Rademacher variables");
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--vars", o.vars, "Three-point variables a:q,a:q,...");
  app.add_option("--p", o.p, "Exponent for experiments without a config");
  app.add_option("--threads", o.threads, "Worker threads, 0 for all cores");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    write_csv(o, dispatch(o));
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
