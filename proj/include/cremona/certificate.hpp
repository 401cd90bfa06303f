#pragma once

#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/parser.hpp"

namespace cremona {

/// Smallest modulus that prints every coefficient of the map with `z`.
inline std::int64_t map_conductor(const GeoMap &g) {
  std::int64_t L = 1;
  auto fold = [&](const CycloNumber &c) { L = std::lcm(L, c.conductor()); };
  std::visit(
      [&](const auto &m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AffineMap>) {
          for (std::size_t i = 0; i < m.n(); ++i) {
            fold(m.b[i]);
            for (std::size_t j = 0; j < m.n(); ++j) fold(m.A(i, j));
          }
        } else if constexpr (std::is_same_v<T, ProjectiveLinearMap>) {
          for (std::size_t i = 0; i < m.R.rows(); ++i)
            for (std::size_t j = 0; j < m.R.cols(); ++j) fold(m.R(i, j));
        } else if constexpr (!std::is_same_v<T, MonomialMap>) {
          for (const auto &c : components(m)) {
            L = std::lcm(L, c.num().conductor());
            L = std::lcm(L, c.den().conductor());
          }
        }
      },
      g);
  return L;
}

inline std::string format_matrix(const CycloMatrix &A, std::int64_t M) {
  std::string out = "[";
  for (std::size_t i = 0; i < A.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < A.cols(); ++j) out += (j ? ", " : "") + A(i, j).to_string(M);
    out += "]";
  }
  return out + "]";
}

inline std::string format_matrix(const IntMatrix &A) {
  std::string out = "[";
  for (std::size_t i = 0; i < A.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < A.cols(); ++j) out += (j ? ", " : "") + A(i, j).get_str();
    out += "]";
  }
  return out + "]";
}

inline std::string format_vector(const CycloVector &v, std::int64_t M) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string(M);
  return out + "]";
}

inline std::string format_components(const RationalMapComponents &comps, std::int64_t M,
                                      int first_index = 1) {
  std::string out = "[";
  for (std::size_t i = 0; i < comps.size(); ++i)
    out += (i ? ", " : "") + comps[i].to_string(M, first_index);
  return out + "]";
}

/// `(e0 : ... : en)` for a projective representative.
inline std::string format_projective(const CycloMatrix &R, std::int64_t M) {
  std::size_t d = R.rows();
  std::string out = "(";
  for (std::size_t i = 0; i < d; ++i) {
    MultiPoly p(d);
    for (std::size_t j = 0; j < d; ++j)
      if (!R(i, j).zero()) p += MultiPoly::variable(d, j).scaled(R(i, j));
    out += (i ? " : " : "") + p.to_string(M, 0);
  }
  return out + ")";
}

/// Payload re-readable by `read_map` for the same kind.
inline std::string map_payload(const GeoMap &g, std::int64_t M) {
  return std::visit(
      [&](const auto &m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AffineMap>)
          return "matrix " + format_matrix(m.A, M) + " vector " + format_vector(m.b, M);
        else if constexpr (std::is_same_v<T, ProjectiveLinearMap>)
          return format_projective(m.R, M);
        else
          return format_components(components(m), M);
      },
      g);
}

/// `KIND(n): payload`
inline std::string serialize_map(const GeoMap &g, std::int64_t M) {
  return kind_name(g) + "(" + std::to_string(arity(g)) + "): " + map_payload(g, M);
}

/// Reads `KIND(n): payload`, building exactly the named kind.
inline GeoMap read_map(const std::string &line, const ParseConfig &cfg) {
  auto open = line.find('('), close = line.find(')'), colon = line.find(':', close);
  if (open == std::string::npos || close == std::string::npos || colon == std::string::npos ||
      close < open)
    fail(ErrorKind::ParseError, "expected KIND(n): payload");
  std::string kind = line.substr(0, open);
  std::size_t n = 0;
  try {
    n = std::stoul(line.substr(open + 1, close - open - 1));
  } catch (const std::exception &) {
    fail(ErrorKind::ParseError, "bad arity in '" + line + "'");
  }
  std::string payload = line.substr(colon + 1);
  GeoMap g;
  if (kind == "AFFINE") {
    g = parse_affine(payload, cfg);
  } else if (kind == "PROJECTIVE") {
    g = ProjectiveLinearMap(parse_projective(payload, cfg));
  } else {
    RationalMapComponents comps = parse_components(payload, cfg);
    if (kind == "MONOMIAL") {
      auto A = monomial_exponents(comps);
      if (!A) fail(ErrorKind::ParseError, "MONOMIAL payload is not monomial");
      g = monomial_T(*A);
    } else if (kind == "TRIANGULAR") {
      std::vector<MultiPoly> polys;
      for (const auto &c : comps) {
        if (!c.is_polynomial()) fail(ErrorKind::ParseError, "TRIANGULAR payload is not polynomial");
        polys.push_back(c.as_polynomial());
      }
      if (!TriangularAuto::has_shape(polys))
        fail(ErrorKind::ParseError, "TRIANGULAR payload lacks triangular shape");
      g = TriangularAuto(polys);
    } else if (kind == "RATIONAL") {
      g = RationalMap{comps};
    } else {
      fail(ErrorKind::ParseError, "unknown map kind '" + kind + "'");
    }
  }
  if (arity(g) != n) fail(ErrorKind::ArityMismatch, "declared arity differs from payload");
  return g;
}

struct Certificate {
  GroupTag group = GroupTag::Bir;
  GeoMap alpha, beta;
  MapChain chain;
};

inline std::int64_t certificate_modulus(const Certificate &c, std::int64_t base = 1) {
  std::int64_t M = std::max<std::int64_t>(base, 1);
  M = std::lcm(M, map_conductor(c.alpha));
  M = std::lcm(M, map_conductor(c.beta));
  for (const auto &e : c.chain.entries) M = std::lcm(M, map_conductor(e.map));
  return M;
}

inline std::string write_certificate(const Certificate &c, std::int64_t base_modulus = 1) {
  std::int64_t M = certificate_modulus(c, base_modulus);
  std::ostringstream out;
  out << "certificate v1\n";
  out << "group " << group_name(c.group) << "\n";
  out << "modulus " << M << "\n";
  out << "alpha " << serialize_map(c.alpha, M) << "\n";
  out << "beta " << serialize_map(c.beta, M) << "\n";
  for (const auto &e : c.chain.entries)
    out << "map " << serialize_map(e.map, M) << (e.direction == Direction::Inverse ? " ^-1" : "")
        << "\n";
  return out.str();
}

inline GroupTag parse_group(const std::string &s) {
  if (s == "aff") return GroupTag::Aff;
  if (s == "aut") return GroupTag::Aut;
  if (s == "bir") return GroupTag::Bir;
  fail(ErrorKind::ParseError, "unknown group '" + s + "'");
}

inline Certificate read_certificate(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Certificate c;
  bool have_alpha = false, have_beta = false, have_group = false;
  ParseConfig cfg;
  auto bad = [&](const std::string &msg) {
    fail(ErrorKind::ParseError, "certificate line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp), rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    try {
      if (lineno == 1 || key == "certificate") {
        if (line != "certificate v1") bad("expected 'certificate v1'");
      } else if (key == "group") {
        c.group = parse_group(rest);
        have_group = true;
      } else if (key == "modulus") {
        cfg.m = std::stoll(rest);
        if (cfg.m < 1) bad("modulus must be positive");
      } else if (key == "alpha") {
        c.alpha = read_map(rest, cfg);
        have_alpha = true;
      } else if (key == "beta") {
        c.beta = read_map(rest, cfg);
        have_beta = true;
      } else if (key == "map") {
        Direction d = Direction::Forward;
        const std::string suffix = " ^-1";
        if (rest.size() > suffix.size() && rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
          d = Direction::Inverse;
          rest = rest.substr(0, rest.size() - suffix.size());
        }
        c.chain.push(read_map(rest, cfg), d);
      } else {
        bad("unknown record '" + key + "'");
      }
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::ParseError && std::string(e.what()).rfind("ParseError: certificate", 0) == 0)
        throw;
      bad(e.what());
    } catch (const std::logic_error &) {
      bad("malformed number");
    }
  }
  if (!have_group || !have_alpha || !have_beta) fail(ErrorKind::ParseError, "certificate is incomplete");
  c.chain.group = c.group;
  c.chain.arity = arity(c.alpha);
  return c;
}

} // namespace cremona
