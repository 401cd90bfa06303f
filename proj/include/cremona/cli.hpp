#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cremona/aut.hpp"
#include "cremona/bir.hpp"
#include "cremona/certificate.hpp"
#include "cremona/error.hpp"
#include "cremona/jordan.hpp"
#include "cremona/orbit.hpp"
#include "cremona/parser.hpp"
#include "cremona/projective.hpp"

namespace cremona {

struct SessionConfig {
  std::int64_t m = 1;
  std::vector<std::string> generators;
  int max_degree = kDefaultMaxDegree;
  std::int64_t search_bound = 10000;
  int oracle_bound = 5;
  std::string group = "bir";
  std::string space = "an";
  std::string output = "human";
  std::string out = "certificate.txt";
};

namespace cli {

enum Exit { kOk = 0, kNegative = 1, kUndecided = 2, kError = 3 };

/// Line-oriented report: `key: value` (human) or `key=value` (structured).
class Report {
public:
  Report(std::ostream &os, bool structured) : os_(os), structured_(structured) {}
  void put(const std::string &key, const std::string &value) {
    os_ << key << (structured_ ? "=" : ": ") << value << "\n";
  }
  void line(const std::string &text) { os_ << text << "\n"; }
  bool structured() const { return structured_; }

private:
  std::ostream &os_;
  bool structured_;
};

inline std::string read_argument(const std::string &arg) {
  std::error_code ec;
  if (arg.size() < 4096 && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    std::string line;
    while (std::getline(in, line))
      if (line.empty() || line[0] != '#') ss << line << "\n";
    return ss.str();
  }
  return arg;
}

inline std::int64_t print_modulus(std::int64_t m, const std::vector<GeoMap> &maps) {
  std::int64_t M = std::max<std::int64_t>(m, 1);
  for (const auto &g : maps) M = std::lcm(M, map_conductor(g));
  return M;
}

inline std::int64_t print_modulus(std::int64_t m, const std::vector<CycloNumber> &values) {
  std::int64_t M = std::max<std::int64_t>(m, 1);
  for (const auto &v : values) M = std::lcm(M, v.conductor());
  return M;
}

inline std::string format_values(const std::vector<CycloNumber> &vals, std::int64_t M) {
  std::string out = "(";
  for (std::size_t i = 0; i < vals.size(); ++i) out += (i ? ", " : "") + vals[i].to_string(M);
  return out + ")";
}

inline void report_chain(Report &r, const MapChain &c, std::int64_t M) {
  r.put("steps", std::to_string(c.entries.size()));
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto &e = c.entries[i];
    r.put("step" + std::to_string(i + 1),
          serialize_map(e.map, M) + (e.direction == Direction::Inverse ? " ^-1" : ""));
  }
}

inline std::vector<GeoMap> chain_maps(const MapChain &c) {
  std::vector<GeoMap> out;
  for (const auto &e : c.entries) out.push_back(e.map);
  return out;
}

inline AffineMap load_affine(const std::string &arg, const SessionConfig &cfg) {
  return parse_affine(read_argument(arg), ParseConfig{cfg.m});
}

inline CycloMatrix load_projective(const std::string &arg, const SessionConfig &cfg) {
  return parse_projective(read_argument(arg), ParseConfig{cfg.m});
}

inline std::string jordan_lines(const JordanData &d, std::int64_t M, Report &r) {
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto &b = d.blocks[i];
    std::string rec = "lambda=" + b.eigenvalue.to_string(M) + " size=" + std::to_string(b.size);
    if (!d.has_fixed_point && i == 0) rec += " translation";
    r.line(rec);
  }
  return {};
}

inline int cmd_jordan(const std::string &arg, const SessionConfig &cfg, Report &r) {
  AffineMap a = load_affine(arg, cfg);
  auto jf = jordan_form(a, cfg.m);
  std::vector<CycloNumber> vals;
  for (const auto &b : jf.data.blocks) vals.push_back(b.eigenvalue);
  std::int64_t M = std::lcm(print_modulus(cfg.m, vals),
                            print_modulus(cfg.m, {GeoMap(jf.conjugator), GeoMap(a)}));
  r.put("modulus", std::to_string(M));
  r.put("fixed_point", jf.data.has_fixed_point ? "yes" : "no");
  jordan_lines(jf.data, M, r);
  r.put("normal_form", serialize_map(jf.normal_form, M));
  r.put("conjugator", serialize_map(jf.conjugator, M));
  return kOk;
}

inline int cmd_classify(const std::string &arg, const SessionConfig &cfg, Report &r) {
  if (cfg.space == "pn") {
    CycloMatrix R = load_projective(arg, cfg);
    auto pc = proj_canonical_form(R, cfg.m);
    std::int64_t M = std::lcm(print_modulus(cfg.m, pc.form.values),
                              print_modulus(cfg.m, chain_maps(pc.conjugator)));
    r.put("modulus", std::to_string(M));
    r.put("space", "pn");
    r.put("base_eigenvalue", pc.reduction.base_eigenvalue.to_string(M));
    r.put("chart_map", serialize_map(pc.reduction.affine, M));
    r.put("label", label_name(pc.form.label));
    r.put("values", format_values(pc.form.values, M));
    report_chain(r, pc.conjugator, M);
    return kOk;
  }
  AffineMap a = load_affine(arg, cfg);
  if (cfg.group == "aff" || (cfg.group == "aut" && fixed_point(a))) {
    auto jf = jordan_form(a, cfg.m);
    std::vector<CycloNumber> vals;
    for (const auto &b : jf.data.blocks) vals.push_back(b.eigenvalue);
    std::int64_t M = std::lcm(print_modulus(cfg.m, vals),
                              print_modulus(cfg.m, {GeoMap(jf.conjugator)}));
    r.put("modulus", std::to_string(M));
    r.put("group", cfg.group);
    r.put("form", "jordan");
    r.put("fixed_point", jf.data.has_fixed_point ? "yes" : "no");
    jordan_lines(jf.data, M, r);
    r.put("normal_form", serialize_map(jf.normal_form, M));
    MapChain c{GroupTag::Aff, a.n(), {}};
    if (!is_identity(jf.conjugator)) c.push(jf.conjugator);
    report_chain(r, c, M);
    return kOk;
  }
  if (cfg.group == "aut") {
    auto ad = almost_diagonalize(a, cfg.m);
    std::int64_t M = std::lcm(print_modulus(cfg.m, ad.form.eigenvalues),
                              print_modulus(cfg.m, chain_maps(ad.conjugator)));
    r.put("modulus", std::to_string(M));
    r.put("group", "aut");
    r.put("form", "almost-diagonal");
    r.put("eigenvalues", format_values(ad.form.eigenvalues, M));
    r.put("normal_form", serialize_map(ad.form.map(), M));
    report_chain(r, ad.conjugator, M);
    return kOk;
  }
  auto bc = bir_canonical_form(a, cfg.m);
  std::int64_t M = std::lcm(print_modulus(cfg.m, bc.values),
                            print_modulus(cfg.m, chain_maps(bc.conjugator)));
  r.put("modulus", std::to_string(M));
  r.put("group", "bir");
  r.put("label", label_name(bc.label));
  r.put("values", format_values(bc.values, M));
  r.put("normal_form", serialize_map(bc.representative(), M));
  report_chain(r, bc.conjugator, M);
  return kOk;
}

inline int verdict_exit(Verdict v) {
  switch (v) {
  case Verdict::Conjugate: return kOk;
  case Verdict::NotConjugate: return kNegative;
  case Verdict::Undecided: return kUndecided;
  }
  return kError;
}

inline int cmd_decide(const std::string &a_arg, const std::string &b_arg, const SessionConfig &cfg,
                      Report &r) {
  Certificate cert;
  Decision d;
  if (cfg.space == "pn") {
    CycloMatrix M = load_projective(a_arg, cfg), N = load_projective(b_arg, cfg);
    d = proj_conjugate_decision(M, N, cfg.m, cfg.search_bound);
    cert.alpha = ProjectiveLinearMap(normalize_projective(M));
    cert.beta = ProjectiveLinearMap(normalize_projective(N));
    cert.group = GroupTag::Bir;
  } else {
    AffineMap a = load_affine(a_arg, cfg), b = load_affine(b_arg, cfg);
    cert.group = parse_group(cfg.group);
    if (cfg.group == "aff") d = aff_conjugate_decision(a, b, cfg.m);
    else if (cfg.group == "aut") d = aut_conjugate_decision(a, b, cfg.m);
    else d = bir_conjugate_decision(a, b, cfg.m, cfg.search_bound);
    cert.alpha = a;
    cert.beta = b;
  }
  r.put("group", group_name(cert.group));
  r.put("verdict", verdict_name(d.verdict));
  if (d.verdict != Verdict::Conjugate) {
    r.put("reason", d.reason);
    return verdict_exit(d.verdict);
  }
  cert.chain = d.certificate;
  cert.chain.group = cert.group;
  if (!verify_conjugation(cert.chain, cert.alpha, cert.beta, cfg.max_degree))
    fail(ErrorKind::Internal, "certificate failed verification");
  std::int64_t M = certificate_modulus(cert, cfg.m);
  report_chain(r, cert.chain, M);
  std::ofstream out(cfg.out);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + cfg.out);
  out << write_certificate(cert, cfg.m);
  r.put("certificate", cfg.out);
  return kOk;
}

inline int cmd_verify(const std::string &path, const SessionConfig &cfg, Report &r) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Certificate cert = read_certificate(ss.str());
  bool ok = verify_conjugation(cert.chain, cert.alpha, cert.beta, cfg.max_degree);
  r.put("group", group_name(cert.group));
  r.put("steps", std::to_string(cert.chain.entries.size()));
  r.put("verified", ok ? "yes" : "no");
  return ok ? kOk : kNegative;
}

inline std::pair<TorusVector, TorusVector> load_torus_pair(const std::string &a, const std::string &b,
                                                           const SessionConfig &cfg, FieldContext &ctx) {
  for (const auto &g : cfg.generators) {
    std::string s = g;
    if (s.size() < 2 || s[0] != 'g' || s.find_first_not_of("0123456789", 1) != std::string::npos)
      fail(ErrorKind::InvalidArgument, "generator names have the form g<k>, got '" + g + "'");
    if (!ctx.index_of_symbol(s)) ctx.declare_symbol(s);
  }
  auto vs = parse_torus_vectors({read_argument(a), read_argument(b)}, ctx, ParseConfig{cfg.m});
  TorusVector x = vs[0], y = vs[1];
  if (x.size() != y.size()) fail(ErrorKind::ArityMismatch, "torus vectors have different lengths");
  return {with_rank(x, ctx.rank()), with_rank(y, ctx.rank())};
}

inline void report_generators(Report &r, const FieldContext &ctx) {
  std::string gens;
  for (const auto &g : ctx.generators())
    gens += (gens.empty() ? "" : ",") + (g.name());
  r.put("modulus", std::to_string(ctx.m()));
  r.put("generators", gens.empty() ? "-" : gens);
}

inline int cmd_orbit(const std::string &a, const std::string &b, const SessionConfig &cfg, Report &r) {
  FieldContext ctx(cfg.m);
  auto [x, y] = load_torus_pair(a, b, cfg, ctx);
  report_generators(r, ctx);
  auto v = torus_orbit_decision(x, y, cfg.search_bound);
  r.put("verdict", verdict_name(v.tag));
  if (v.tag == Verdict::Conjugate) r.put("witness", format_matrix(v.witness));
  else r.put("reason", v.reason);
  return verdict_exit(v.tag);
}

inline int cmd_oracle(const std::string &a, const std::string &b, const SessionConfig &cfg, Report &r) {
  FieldContext ctx(cfg.m);
  auto [x, y] = load_torus_pair(a, b, cfg, ctx);
  report_generators(r, ctx);
  auto w = brute_force_orbit_oracle(x, y, cfg.oracle_bound);
  r.put("bound", std::to_string(cfg.oracle_bound));
  r.put("witness", w ? format_matrix(*w) : "none");
  return w ? kOk : kNegative;
}

} // namespace cli

/// Runs one command line; returns the process exit code.
inline int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  SessionConfig cfg;
  CLI::App app{"Conjugacy of affine automorphisms in Aff, Aut and the Cremona group"};
  app.name("cremona");
  app.require_subcommand(1);
  auto common = [&](CLI::App *sub) {
    sub->add_option("--m", cfg.m, "order of the root of unity z")->check(CLI::PositiveNumber);
    sub->add_option("--output", cfg.output, "report format")
        ->check(CLI::IsMember({"human", "structured"}));
  };
  auto groups = [&](CLI::App *sub) {
    sub->add_option("--group", cfg.group, "group")->check(CLI::IsMember({"aff", "aut", "bir"}));
    sub->add_option("--space", cfg.space, "ambient space")->check(CLI::IsMember({"an", "pn"}));
    sub->add_option("--search-bound", cfg.search_bound, "orbit search bound")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-degree", cfg.max_degree, "degree cap during verification")
        ->check(CLI::PositiveNumber);
  };
  auto torus = [&](CLI::App *sub) {
    sub->add_option("--gens", cfg.generators, "declared generator symbols")->delimiter(',');
    sub->add_option("--search-bound", cfg.search_bound, "orbit search bound")
        ->check(CLI::PositiveNumber);
    sub->add_option("--oracle-bound", cfg.oracle_bound, "oracle entry bound")
        ->check(CLI::Range(0, 10));
  };
  std::string a, b, path;

  auto *classify = app.add_subcommand("classify", "canonical form of one map");
  classify->add_option("map", a, "map or file")->required();
  common(classify);
  groups(classify);

  auto *decide = app.add_subcommand("decide", "decide conjugacy and write a certificate");
  decide->add_option("alpha", a, "first map or file")->required();
  decide->add_option("beta", b, "second map or file")->required();
  decide->add_option("--out", cfg.out, "certificate file");
  common(decide);
  groups(decide);

  auto *verify = app.add_subcommand("verify", "re-check a certificate file");
  verify->add_option("certificate", path, "certificate file")->required();
  verify->add_option("--max-degree", cfg.max_degree, "degree cap")->check(CLI::PositiveNumber);
  verify->add_option("--output", cfg.output)->check(CLI::IsMember({"human", "structured"}));

  auto *orbit = app.add_subcommand("orbit", "GL(n,Z) orbit decision on torus vectors");
  orbit->add_option("alpha", a, "torus vector")->required();
  orbit->add_option("beta", b, "torus vector")->required();
  common(orbit);
  torus(orbit);

  auto *jordan = app.add_subcommand("jordan", "Jordan data of an affine map");
  jordan->add_option("map", a, "map or file")->required();
  common(jordan);

  auto *oracle = app.add_subcommand("oracle", "bounded brute-force orbit search");
  oracle->add_option("alpha", a, "torus vector")->required();
  oracle->add_option("beta", b, "torus vector")->required();
  common(oracle);
  torus(oracle);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return cli::kError;
  }
  cli::Report report(out, cfg.output == "structured");
  try {
    if (classify->parsed()) return cli::cmd_classify(a, cfg, report);
    if (decide->parsed()) return cli::cmd_decide(a, b, cfg, report);
    if (verify->parsed()) return cli::cmd_verify(path, cfg, report);
    if (orbit->parsed()) return cli::cmd_orbit(a, b, cfg, report);
    if (jordan->parsed()) return cli::cmd_jordan(a, cfg, report);
    if (oracle->parsed()) return cli::cmd_oracle(a, b, cfg, report);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return cli::kError;
  }
  return cli::kError;
}

} // namespace cremona
