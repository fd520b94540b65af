#include "fman/spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fman/error.hpp"

namespace fman {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw SpecError(path + "/" + key, "required field missing");
  return j.at(key);
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

int as_index(const json& j, int n, const std::string& path) {
  if (!j.is_number_integer()) throw SpecError(path, "expected an integer index");
  const int v = j.get<int>();
  if (v < 1 || v > n) throw SpecError(path, "index out of range 1.." + std::to_string(n));
  return v - 1;
}

std::vector<double> as_point(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw SpecError(path, "expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> x;
  for (std::size_t k = 0; k < j.size(); ++k) x.push_back(as_number(j[k], path + "/" + std::to_string(k)));
  return x;
}

FieldExpr as_expr(const json& j, const std::vector<std::string>& chart, const Parameters& params,
                  const std::string& path, bool allow_p = false) {
  std::string src;
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    src = os.str();
  } else {
    src = as_string(j, path);
  }
  try {
    return parse(src, chart, allow_p, params);
  } catch (const ParseError& e) {
    throw SpecError(path, e.what());
  }
}

// Entries symmetric in the lower indices. The mirrored slot is filled
// implicitly; an explicit mirror that disagrees is averaged with a warning.
enum : char { unset = 0, implied = 1, explicit_ = 2 };

void put_symmetric(Tensor<FieldExpr>& t, std::vector<char>& flags, std::size_t fa, std::size_t fb,
                   const FieldExpr& e, const Box& box, std::vector<std::string>& warnings, const std::string& path) {
  if (flags[fa] == explicit_) throw SpecError(path, "duplicate entry");
  if (flags[fa] == implied && !same_tree(t.flat(fa).root(), e.root())) {
    const FieldExpr& old = t.flat(fa);
    const auto x = box.center();
    bool agree = false;
    try {
      const double a = eval(old, x), b = eval(e, x);
      agree = std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    } catch (const DomainError&) {
    }
    if (!agree) {
      warnings.push_back(path + ": not symmetric in the lower indices; using the symmetric part");
      t.flat(fa) = parse("((" + old.to_string() + ") + (" + e.to_string() + "))/2", old.chart());
    }
  } else if (flags[fa] != implied) {
    t.flat(fa) = e;
  }
  flags[fa] = explicit_;
  if (fb != fa) {
    t.flat(fb) = t.flat(fa);
    if (flags[fb] == unset) flags[fb] = implied;
  }
}

Tensor<FieldExpr> zero_exprs(int n, int rank, const std::vector<std::string>& coords) {
  return Tensor<FieldExpr>(n, rank, FieldExpr::constant(0.0, coords));
}

}  // namespace

const char* chart_name(ChartKind k) {
  switch (k) {
    case ChartKind::flat: return "flat";
    case ChartKind::canonical: return "canonical";
    default: return "generic";
  }
}

std::shared_ptr<const Structure> ManifoldSpec::structure() const {
  if (c) return std::make_shared<ExprStructure>(coords, box, chart, *c, metric, connection, gamma);
  if (lax) return std::make_shared<ReductionStructure>(*lax, box, twist);
  throw SpecError("/structure", "neither structure constants nor a Lax family given");
}

ManifoldSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("", "expected a JSON object");
  static const std::set<std::string> known{"format", "name", "dimension", "coordinates", "box", "parameters",
                                           "chart", "structure", "metric", "connection", "lax", "vector_fields",
                                           "expansion", "series_base", "tolerances", "seed", "samples", "witness",
                                           "description"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw SpecError("/" + key, "unknown field");

  ManifoldSpec s;
  if (as_string(require(j, "format", ""), "/format") != kSpecFormat)
    throw SpecError("/format", std::string("expected \"") + kSpecFormat + "\"");
  s.name = as_string(require(j, "name", ""), "/name");
  const json& coords = require(j, "coordinates", "");
  if (!coords.is_array() || coords.empty()) throw SpecError("/coordinates", "expected a nonempty array");
  for (std::size_t k = 0; k < coords.size(); ++k) {
    std::string c = as_string(coords[k], "/coordinates/" + std::to_string(k));
    if (c == "p") throw SpecError("/coordinates/" + std::to_string(k), "'p' is reserved for the Lax variable");
    s.coords.push_back(std::move(c));
  }
  const int n = s.dim();
  if (j.contains("dimension")) {
    const json& d = j.at("dimension");
    if (!d.is_number_integer() || d.get<int>() != n) throw SpecError("/dimension", "does not match the coordinates");
  }

  const json& box = require(j, "box", "");
  if (!box.is_array() || static_cast<int>(box.size()) != n) throw SpecError("/box", "expected one interval per coordinate");
  for (int i = 0; i < n; ++i) {
    const auto iv = as_point(box[i], 2, "/box/" + std::to_string(i));
    if (!(iv[0] < iv[1])) throw SpecError("/box/" + std::to_string(i), "empty interval");
    s.box.lo.push_back(iv[0]);
    s.box.hi.push_back(iv[1]);
  }

  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    if (!p.is_object()) throw SpecError("/parameters", "expected an object");
    for (const auto& [k, v] : p.items()) s.params[k] = as_number(v, "/parameters/" + k);
  }

  if (j.contains("chart")) {
    const std::string c = as_string(j.at("chart"), "/chart");
    if (c == "flat") s.chart = ChartKind::flat;
    else if (c == "canonical") s.chart = ChartKind::canonical;
    else if (c == "generic") s.chart = ChartKind::generic;
    else throw SpecError("/chart", "expected flat, canonical or generic");
  }

  if (j.contains("structure")) {
    const json& st = j.at("structure");
    if (!st.is_array()) throw SpecError("/structure", "expected an array");
    Tensor<FieldExpr> c = zero_exprs(n, 3, s.coords);
    std::vector<char> flags(c.size(), unset);
    for (std::size_t e = 0; e < st.size(); ++e) {
      const std::string path = "/structure/" + std::to_string(e);
      const json& entry = st[e];
      const int i = as_index(require(entry, "i", path), n, path + "/i");
      const int a = as_index(require(entry, "j", path), n, path + "/j");
      const int b = as_index(require(entry, "k", path), n, path + "/k");
      const FieldExpr ex = as_expr(require(entry, "expr", path), s.coords, s.params, path + "/expr");
      const auto fa = static_cast<std::size_t>((i * n + a) * n + b);
      const auto fb = static_cast<std::size_t>((i * n + b) * n + a);
      put_symmetric(c, flags, fa, fb, ex, s.box, s.warnings, path);
    }
    s.c = std::move(c);
  }

  if (j.contains("metric")) {
    const json& mt = j.at("metric");
    if (!mt.is_array()) throw SpecError("/metric", "expected an array");
    Tensor<FieldExpr> g = zero_exprs(n, 2, s.coords);
    std::vector<char> flags(g.size(), unset);
    for (std::size_t e = 0; e < mt.size(); ++e) {
      const std::string path = "/metric/" + std::to_string(e);
      const json& entry = mt[e];
      const int a = as_index(require(entry, "i", path), n, path + "/i");
      const int b = as_index(require(entry, "j", path), n, path + "/j");
      const FieldExpr ex = as_expr(require(entry, "expr", path), s.coords, s.params, path + "/expr");
      put_symmetric(g, flags, static_cast<std::size_t>(a * n + b), static_cast<std::size_t>(b * n + a), ex, s.box,
                    s.warnings, path);
    }
    s.metric = std::move(g);
  }

  if (j.contains("connection")) {
    const json& cn = j.at("connection");
    if (cn.is_string()) {
      const std::string k = cn.get<std::string>();
      if (k == "zero") s.connection = ConnectionKind::zero;
      else if (k == "levi-civita") {
        if (!s.metric) throw SpecError("/connection", "levi-civita needs a metric");
        s.connection = ConnectionKind::levi_civita;
      } else throw SpecError("/connection", "expected \"zero\", \"levi-civita\" or a component list");
    } else if (cn.is_array()) {
      Tensor<FieldExpr> g = zero_exprs(n, 3, s.coords);
      for (std::size_t e = 0; e < cn.size(); ++e) {
        const std::string path = "/connection/" + std::to_string(e);
        const json& entry = cn[e];
        const int i = as_index(require(entry, "i", path), n, path + "/i");
        const int a = as_index(require(entry, "j", path), n, path + "/j");
        const int b = as_index(require(entry, "k", path), n, path + "/k");
        g(i, a, b) = as_expr(require(entry, "expr", path), s.coords, s.params, path + "/expr");
      }
      s.gamma = std::move(g);
      s.connection = ConnectionKind::given;
    } else {
      throw SpecError("/connection", "expected a string or an array");
    }
  } else if (s.metric) {
    s.connection = ConnectionKind::levi_civita;
  }

  if (j.contains("lax")) {
    const json& lx = j.at("lax");
    const std::string kind = as_string(require(lx, "kind", "/lax"), "/lax/kind");
    auto terms = [&](const char* key) {
      const json& arr = require(lx, key, "/lax");
      if (!arr.is_array() || arr.empty()) throw SpecError(std::string("/lax/") + key, "expected a nonempty array");
      std::vector<LaxTerm> out;
      for (std::size_t e = 0; e < arr.size(); ++e) {
        const std::string path = std::string("/lax/") + key + "/" + std::to_string(e);
        out.push_back({as_expr(require(arr[e], "weight", path), s.coords, s.params, path + "/weight"),
                       as_expr(require(arr[e], "position", path), s.coords, s.params, path + "/position")});
      }
      return out;
    };
    if (kind == "rational") {
      s.lax = LaxFamily::rational(s.coords, terms("poles"));
    } else if (kind == "logarithmic") {
      s.lax = LaxFamily::logarithmic(s.coords, terms("branches"));
    } else if (kind == "custom") {
      const FieldExpr e = as_expr(require(lx, "expr", "/lax"), s.coords, s.params, "/lax/expr", true);
      std::vector<std::pair<double, double>> brackets;
      if (lx.contains("brackets")) {
        const json& br = lx.at("brackets");
        if (!br.is_array()) throw SpecError("/lax/brackets", "expected an array");
        for (std::size_t k = 0; k < br.size(); ++k) {
          const auto iv = as_point(br[k], 2, "/lax/brackets/" + std::to_string(k));
          if (!(iv[0] < iv[1])) throw SpecError("/lax/brackets/" + std::to_string(k), "empty interval");
          brackets.emplace_back(iv[0], iv[1]);
        }
      }
      s.lax = LaxFamily::custom(e, std::move(brackets));
    } else {
      throw SpecError("/lax/kind", "expected rational, logarithmic or custom");
    }
    if (lx.contains("twist")) {
      const json& tw = lx.at("twist");
      if (!tw.is_array() || static_cast<int>(tw.size()) != n)
        throw SpecError("/lax/twist", "expected one function of r per coordinate");
      for (std::size_t k = 0; k < tw.size(); ++k)
        s.twist.phi.push_back(as_expr(tw[k], {"r"}, s.params, "/lax/twist/" + std::to_string(k)));
    }
    for (const auto& [key, _] : lx.items())
      if (key != "kind" && key != "poles" && key != "branches" && key != "expr" && key != "brackets" && key != "twist")
        throw SpecError("/lax/" + key, "unknown field");
  }

  if (!s.c && !s.lax) throw SpecError("/structure", "required unless a Lax family is given");

  if (j.contains("vector_fields")) {
    const json& vf = j.at("vector_fields");
    if (!vf.is_array()) throw SpecError("/vector_fields", "expected an array");
    for (std::size_t e = 0; e < vf.size(); ++e) {
      const std::string path = "/vector_fields/" + std::to_string(e);
      NamedField f;
      f.name = as_string(require(vf[e], "name", path), path + "/name");
      const json& comps = require(vf[e], "components", path);
      if (!comps.is_array() || static_cast<int>(comps.size()) != n)
        throw SpecError(path + "/components", "expected one expression per coordinate");
      for (std::size_t k = 0; k < comps.size(); ++k)
        f.components.push_back(as_expr(comps[k], s.coords, s.params, path + "/components/" + std::to_string(k)));
      s.fields.push_back(std::move(f));
    }
  }

  if (j.contains("expansion")) {
    const json& ex = j.at("expansion");
    if (!ex.is_array()) throw SpecError("/expansion", "expected an array");
    for (std::size_t e = 0; e < ex.size(); ++e) {
      const std::string path = "/expansion/" + std::to_string(e);
      ExpansionField f;
      f.sign = as_number(require(ex[e], "sign", path), path + "/sign");
      if (f.sign != 1.0 && f.sign != -1.0) throw SpecError(path + "/sign", "expected +1 or -1");
      const json& comps = require(ex[e], "components", path);
      if (!comps.is_array() || static_cast<int>(comps.size()) != n)
        throw SpecError(path + "/components", "expected one expression per coordinate");
      for (std::size_t k = 0; k < comps.size(); ++k)
        f.components.push_back(as_expr(comps[k], s.coords, s.params, path + "/components/" + std::to_string(k)));
      s.expansion.push_back(std::move(f));
    }
  }

  if (j.contains("series_base")) s.series_base = as_point(j.at("series_base"), n, "/series_base");
  if (j.contains("witness")) s.witness = as_point(j.at("witness"), n, "/witness");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw SpecError("/tolerances", "expected an object");
    if (t.contains("abs")) s.tol.abs = as_number(t.at("abs"), "/tolerances/abs");
    if (t.contains("rel")) s.tol.rel = as_number(t.at("rel"), "/tolerances/rel");
    if (s.tol.abs < 0 || s.tol.rel < 0) throw SpecError("/tolerances", "must be nonnegative");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SpecError("/seed", "expected a nonnegative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    if (!j.at("samples").is_number_integer() || j.at("samples").get<int>() < 1)
      throw SpecError("/samples", "expected a positive integer");
    s.samples = j.at("samples").get<int>();
  }
  if (s.twist.active()) {
    try {
      s.twist = anchor_twist(*s.lax, s.box.center(), std::move(s.twist));
    } catch (const Error& e) {
      throw SpecError("/lax/twist", std::string("cannot anchor the twisted chart at the box center: ") + e.what());
    }
  }
  return s;
}

ManifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace fman
