#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsym/errors.hpp"
#include "qsym/hierarchy.hpp"
#include "qsym/logsymbol.hpp"
#include "qsym/parse.hpp"
#include "qsym/verify.hpp"

using namespace qsym;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kDomain = 3, kVerify = 4 };

struct Options {
  std::string basis = "T";
  int sigma = -1;
  int structure = 2;
  int floor = -8;
  std::string window;
  std::string qvalue;
  bool json = false;
  std::vector<std::string> args;
  std::string stdin_text;
  bool stdin_read = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Basis basis_of(const std::string& s) {
  if (s == "T") return Basis::T;
  if (s == "D") return Basis::D;
  throw UsageError("basis must be T or D");
}

std::string text_of(Options& o, const std::string& arg) {
  if (arg != "-") return arg;
  if (!o.stdin_read) {
    o.stdin_text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    o.stdin_read = true;
  }
  return o.stdin_text;
}

const std::string& arg(const Options& o, size_t i, const char* what) {
  if (i >= o.args.size()) throw UsageError(std::string("missing argument: ") + what);
  return o.args[i];
}

Symbol symbol_arg(Options& o, size_t i, const char* what) {
  return parse_symbol(text_of(o, arg(o, i, what)), basis_of(o.basis), o.floor);
}

PhaseWindow window_of(const Options& o) {
  if (o.window.empty()) throw UsageError("--window is required");
  const Basis b = basis_of(o.basis);
  const size_t comma = o.window.find(',');
  try {
    const int n = std::stoi(o.window.substr(0, comma));
    if (comma == std::string::npos || o.window.substr(comma + 1) == "-inf") {
      if (b == Basis::T) throw UsageError("T-basis windows need a lower end");
      return PhaseWindow::D(n);
    }
    const int m = std::stoi(o.window.substr(comma + 1));
    return {b, n, m};
  } catch (const std::logic_error&) {
    throw UsageError("--window takes n,m or n,-inf");
  }
}

std::optional<mpq_class> qvalue(const Options& o) {
  if (o.qvalue.empty()) return std::nullopt;
  try {
    return mpq_class(o.qvalue);
  } catch (const std::invalid_argument&) {
    throw UsageError("--q takes a rational number such as 2 or 3/2");
  }
}

// Exact when the product is finite: only D^-k on the left of a function
// expands as a series.
Symbol product(const Symbol& a, const Symbol& b, int floor) {
  const bool finite = a.basis() == Basis::T || a.coeffs().empty() || a.coeffs().begin()->first >= 0;
  return finite && a.exact() && b.exact() ? mul(a, b) : mul(a, b, floor);
}

std::string floor_str(const Symbol& s) { return s.exact() ? "exact" : std::to_string(s.floor()); }

json symbol_json(const Symbol& s) {
  json j;
  j["basis"] = to_string(s.basis());
  j["floor"] = s.exact() ? json(nullptr) : json(s.floor());
  j["symbol"] = s.str();
  return j;
}

// Output of one verb: text lines and the JSON result.
struct Result {
  std::vector<std::string> lines;
  json value = json::object();
};

Result of_symbol(const Options& o, Symbol s) {
  if (auto r = qvalue(o)) s = eval_at_q(s, *r);
  Result out;
  out.lines.push_back("basis=" + std::string(to_string(s.basis())) + " floor=" + floor_str(s));
  out.lines.push_back(s.str());
  out.value = symbol_json(s);
  return out;
}

Result of_scalar(const Options& o, const QScalar& c) {
  Result out;
  if (auto r = qvalue(o)) {
    const mpq_class v = eval_q(c, *r);
    out.lines.push_back(v.get_str());
    out.value["value"] = v.get_str();
  } else {
    out.lines.push_back(c.str());
    out.value["value"] = c.str();
  }
  return out;
}

Result of_lambda(const LambdaSymbol& s) {
  Result out;
  out.lines.push_back("basis=D floor=" + (s.floor() <= Symbol::kExact / 2 ? std::string("exact") : std::to_string(s.floor())));
  out.lines.push_back(s.str());
  out.value["basis"] = "D";
  out.value["floor"] = s.floor() <= Symbol::kExact / 2 ? json(nullptr) : json(s.floor());
  out.value["symbol"] = s.str();
  json parts = json::object();
  for (const auto& [k, p] : s.parts()) parts["logq^" + std::to_string(k)] = p.str();
  out.value["parts"] = parts;
  return out;
}

OneForm oneform_of(Options& o, size_t first) {
  OneForm x{window_of(o), {}};
  for (size_t i = first; i < o.args.size(); ++i) {
    const std::string a = text_of(o, o.args[i]);
    const size_t eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("one-form components are written j=<field>");
    int j = 0;
    try {
      j = std::stoi(a.substr(0, eq));
    } catch (const std::logic_error&) {
      throw UsageError("bad component index in '" + a + "'");
    }
    x.x[j] = parse_field(a.substr(eq + 1));
  }
  if (x.x.empty()) throw UsageError("missing one-form components j=<field>");
  return x;
}

json erratum_json(const ErrataEntry& e) {
  json j;
  j["suite"] = e.suite;
  j["context"] = e.context;
  j["formula"] = e.entry.formula;
  j["i"] = e.entry.i;
  j["j"] = e.entry.j;
  j["printed"] = e.entry.printed;
  j["derived"] = e.entry.derived;
  j["ratio"] = e.entry.ratio.empty() ? json(nullptr) : json(e.entry.ratio);
  return j;
}

Result run_verb(const std::string& verb, Options& o, bool closed, const std::string& side,
                const std::string& to, int n, int i, int j, const std::string& power, const std::string& c,
                int constrain, const std::string& values) {
  const Splitting sigma{o.sigma};
  if (o.sigma < -1 || o.sigma > 1) throw UsageError("--sigma takes -1, 0 or 1");
  if (verb == "mul") return of_symbol(o, product(symbol_arg(o, 0, "A"), symbol_arg(o, 1, "B"), o.floor));
  if (verb == "comm") {
    const Symbol a = symbol_arg(o, 0, "A"), b = symbol_arg(o, 1, "B");
    return of_symbol(o, product(a, b, o.floor) - product(b, a, o.floor));
  }
  if (verb == "trace") return of_scalar(o, trace(symbol_arg(o, 0, "A")));
  if (verb == "pair") return of_scalar(o, pairing(symbol_arg(o, 0, "A"), symbol_arg(o, 1, "B")));
  if (verb == "convert") return of_symbol(o, convert(symbol_arg(o, 0, "A"), basis_of(to), o.floor));
  if (verb == "project") {
    if (side != "plus" && side != "minus") throw UsageError("--side takes plus or minus");
    return of_symbol(o, project(symbol_arg(o, 0, "A"), side == "plus" ? Side::Plus : Side::Minus, sigma));
  }
  if (verb == "adjoint") return of_symbol(o, adjoint(symbol_arg(o, 0, "A"), o.floor));
  if (verb == "root") {
    const Symbol a = symbol_arg(o, 0, "A");
    return of_symbol(o, nth_root(a.exact() ? a.truncated(o.floor) : a, n));
  }
  if (verb == "jmap") return of_symbol(o, jmap(o.structure, sigma, symbol_arg(o, 0, "L"), symbol_arg(o, 1, "X")));
  if (verb == "kernel") {
    const PhaseWindow w = window_of(o);
    const BracketKernel k = kernel(o.structure, sigma, w, i, j);
    Result out;
    out.lines.push_back("J_" + std::to_string(i) + std::to_string(j) + " = " + k.str());
    out.lines.push_back(k.delta_str());
    out.value["window"] = w.str();
    out.value["i"] = i;
    out.value["j"] = j;
    out.value["kernel"] = k.str();
    out.value["delta"] = k.delta_str();
    if (closed) {
      const BracketKernel p = kernel_closed_form(o.structure, sigma, w, i, j);
      const ClosedFormReport r = compare_closed_forms(o.structure, sigma, w, {{i, j}}, false);
      out.lines.push_back("printed (" + closed_form_name(o.structure, sigma, w, i, j) + ") = " + p.str());
      out.lines.push_back(std::string("agrees: ") + (r.errata.empty() ? "yes" : "no"));
      out.value["printed"] = p.str();
      out.value["formula"] = closed_form_name(o.structure, sigma, w, i, j);
      out.value["agrees"] = r.errata.empty();
    }
    return out;
  }
  if (verb == "dirac") {
    const PhaseWindow w = window_of(o);
    std::map<std::pair<int, int>, BracketKernel> ks;
    for (int a : w.indices())
      for (int b : w.indices()) ks[{a, b}] = kernel(o.structure, sigma, w, a, b);
    std::map<int, LaurentField> vals;
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const size_t eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--values takes i=<field>;...");
      vals[std::stoi(item.substr(0, eq))] = parse_field(item.substr(eq + 1));
    }
    for (int a : w.indices())
      if (!vals.count(a)) throw UsageError("--values needs every field of the window");
    // Default constraint: the leading field t_n, or u_0 in the D basis.
    const int cn = constrain != INT_MIN ? constrain : w.basis == Basis::T ? w.n : 0;
    const auto red = dirac_reduce(ks, cn, w.field(), [&](int a) { return vals.count(a) ? vals[a] : LaurentField(); });
    Result out;
    json entries = json::array();
    for (const auto& [ij, r] : red) {
      bool zero = true;
      for (int k = -4; k <= 4 && zero; ++k) {
        try {
          zero = r.apply(LaurentField::z(k)).is_zero();
        } catch (const DomainError& e) {
          if (e.kind() != ErrorKind::SingularMode) throw;
        }
      }
      const std::string name = "J~_" + std::to_string(ij.first) + std::to_string(ij.second);
      out.lines.push_back(name + " = " + r.str() + (zero ? "  [vanishes on modes -4..4]" : ""));
      json e;
      e["i"] = ij.first;
      e["j"] = ij.second;
      e["kernel"] = r.str();
      e["vanishes"] = zero;
      entries.push_back(e);
    }
    out.value["constrained"] = cn;
    out.value["entries"] = entries;
    return out;
  }
  if (verb == "flow") {
    Symbol L = symbol_arg(o, 0, "L");
    const LaxFlowSpec spec{sigma, o.window.empty() ? PhaseWindow{L.basis(), L.top().value_or(0), std::nullopt} : window_of(o),
                           mpq_class(power)};
    return of_symbol(o, lax_rhs(spec, L));
  }
  if (verb == "casimir") return of_scalar(o, casimir(symbol_arg(o, 0, "L"), n));
  if (verb == "logcomm") {
    o.basis = "D";
    return of_lambda(log_commutator(symbol_arg(o, 0, "A"), o.floor));
  }
  if (verb == "winfty" || verb == "limit") {
    o.basis = "D";
    const QScalar cc = parse_scalar(c);
    const Symbol L0 = symbol_arg(o, 0, "L0");
    const Symbol X = symbol_arg(o, 1, "X");
    if (verb == "winfty") return of_lambda(winfty_map(cc, L0, X, o.floor));
    const ScalingLimitReport r = scaling_limit_check(cc, L0, X, o.floor);
    Result out = of_lambda(r.limit);
    out.lines.push_back(std::string("quadratic part at alpha = 0 vanishes: ") + (r.finite ? "yes" : "no"));
    out.lines.push_back(std::string("equals the W_{1+inf} map: ") + (r.matches ? "yes" : "no"));
    out.value["finite"] = r.finite;
    out.value["matches"] = r.matches;
    return out;
  }
  throw UsageError("unknown verb '" + verb + "'");
}

int run_verify(const std::string& suite, bool fault) {
  if (!is_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
  detail::set_qbinomial_fault(fault);
  const VerifyReport r = run_suite(suite);
  json j;
  j["schema"] = 1;
  j["verb"] = "verify";
  j["suite"] = suite;
  j["passed"] = r.passed();
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    json e;
    e["suite"] = c.suite;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  j["checks"] = checks;
  json errata = json::array();
  for (const ErrataEntry& e : r.errata) errata.push_back(erratum_json(e));
  j["errata"] = errata;
  std::cout << j.dump(2) << "\n";
  if (r.failures() > 0) return kVerify;
  if (r.errored()) return kDomain;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact q-pseudodifferential symbol calculus"};
  app.require_subcommand(1);
  Options o;
  std::string suite = "all", side = "plus", to = "D", power = "1", c = "1", values;
  int n = 2, i = 0, j = 0, constrain = INT_MIN;
  bool closed = false, fault = false;

  auto common = [&](CLI::App* s) {
    s->add_option("--basis", o.basis, "operator basis, T or D")->capture_default_str();
    s->add_option("--sigma", o.sigma, "splitting: -1, 0 or 1")->capture_default_str();
    s->add_option("--structure", o.structure, "Poisson structure 1, 2 or 3")->capture_default_str();
    s->add_option("--floor", o.floor, "truncation floor of series")->capture_default_str();
    s->add_option("--window", o.window, "phase window n,m (n,-inf for q-KP)");
    s->add_option("--q", o.qvalue, "evaluate the result at this rational q");
    s->add_flag("--json", o.json, "JSON output");
  };
  struct Verb {
    const char* name;
    const char* help;
  };
  const Verb verbs[] = {
      {"mul", "product A B"},
      {"comm", "commutator [A, B]"},
      {"trace", "trace of A"},
      {"pair", "pairing <A, B>"},
      {"convert", "rewrite A in the other basis (--to)"},
      {"project", "projection of A (--side, --sigma)"},
      {"adjoint", "operator adjoint of A"},
      {"root", "monic n-th root of A (--n)"},
      {"jmap", "Poisson map J_L(X) (--structure, --sigma)"},
      {"kernel", "bracket kernel J_ij on --window (--i, --j, --closed)"},
      {"dirac", "Dirac reduction on --window (--values, --constrain)"},
      {"flow", "Lax flow [L, (L^p)_+] (--power)"},
      {"casimir", "Casimir Tr L^n / n (--n)"},
      {"logcomm", "[log D_q, A]"},
      {"winfty", "W_{1+inf} map of L0 on X (--c)"},
      {"limit", "scaling limit of the quadratic structure at L0, X (--c)"},
  };
  for (const Verb& v : verbs) {
    CLI::App* s = app.add_subcommand(v.name, v.help);
    common(s);
    s->add_option("args", o.args, "symbols or one-form components; - reads stdin");
    const std::string name = v.name;
    if (name == "convert") s->add_option("--to", to, "target basis")->capture_default_str();
    if (name == "project") s->add_option("--side", side, "plus or minus")->capture_default_str();
    if (name == "root" || name == "casimir") s->add_option("--n", n, "root degree or Casimir index")->capture_default_str();
    if (name == "kernel") {
      s->add_option("--i", i, "row index")->capture_default_str();
      s->add_option("--j", j, "column index")->capture_default_str();
      s->add_flag("--closed", closed, "also print the printed closed form and compare");
    }
    if (name == "dirac") {
      s->add_option("--values", values, "field values i=<field>;...")->required();
      s->add_option("--constrain", constrain, "constrained index (default t_n, or u_0 in the D basis)");
    }
    if (name == "flow") s->add_option("--power", power, "flow power p (rational)")->capture_default_str();
    if (name == "winfty" || name == "limit") s->add_option("--c", c, "central charge")->capture_default_str();
  }
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite; prints a JSON report");
  verify->add_option("suite", suite, "algebra, trace, myb, kernels, dirac, trihamiltonian, jacobi, logderivation or all")
      ->capture_default_str();
  verify->add_flag("--inject-fault", fault, "corrupt q-binomials (harness self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    if (verb == "verify") return run_verify(suite, fault);
    const Result r = run_verb(verb, o, closed, side, to, n, i, j, power, c, constrain, values);
    if (o.json) {
      json out;
      out["schema"] = 1;
      out["verb"] = verb;
      out["result"] = r.value;
      std::cout << out.dump(2) << "\n";
    } else {
      for (const std::string& line : r.lines) std::cout << line << "\n";
    }
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const DomainError& e) {
    std::cerr << e.what() << "\n";
    return kDomain;
  }
}
