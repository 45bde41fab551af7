#include "qhj/scenario.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qhj/errors.hpp"

namespace qhj {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

// section -> key -> entry
using Sections = std::map<std::string, std::map<std::string, Entry>>;

const std::set<std::string> kSections{"physics",     "potential",   "solutions.x", "solutions.y",
                                      "solutions.z", "field",       "action",      "trajectory",
                                      "verify",      "metric"};

Sections tokenize(std::string_view text) {
  Sections sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kSections.count(current)) throw ParseError(line_no, "unknown section [" + current + "]");
      if (sections.count(current)) throw ParseError(line_no, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    if (current.empty()) throw ParseError(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "empty key");
    auto& sec = sections[current];
    if (sec.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    sec[key] = Entry{value, line_no};
  }
  return sections;
}

double parse_double(std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, "number must be finite");
  return v;
}

int parse_int(std::string_view text, int line) {
  text = trim(text);
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto p = text.find(sep, start);
    parts.push_back(trim(text.substr(start, p == text.npos ? text.npos : p - start)));
    if (p == text.npos) break;
    start = p + 1;
  }
  return parts;
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part, line));
  return out;
}

Vec3 parse_vec3(std::string_view text, int line) {
  const auto v = parse_list(text, line);
  if (v.size() != 3) throw ParseError(line, "expected three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::pair<double, double> parse_pair(std::string_view text, int line) {
  const auto v = parse_list(text, line);
  if (v.size() != 2) throw ParseError(line, "expected two comma-separated numbers");
  return {v[0], v[1]};
}

// coef * sel * sel * sel [(+|-) coef * sel * sel * sel ...]
std::vector<ProductTerm> parse_terms(std::string_view text, int line) {
  std::string compact;
  for (char c : text) {
    if (c != ' ' && c != '\t') compact += c;
  }
  std::vector<ProductTerm> terms;
  std::size_t i = 0;
  const std::string_view s = compact;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (!terms.empty()) {
      throw ParseError(line, "expected '+' or '-' between product terms");
    }
    double coef = 0.0;
    const auto res = std::from_chars(s.data() + i, s.data() + s.size(), coef);
    if (res.ec != std::errc{}) throw ParseError(line, "expected a coefficient in product term");
    i = static_cast<std::size_t>(res.ptr - s.data());
    ProductTerm term;
    term.coefficient = sign * coef;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      if (i + 3 > s.size() || s[i] != '*' || s[i + 1] != 'u' || (s[i + 2] != '1' && s[i + 2] != '2')) {
        throw ParseError(line, "product terms look like 'coef * u1 * u2 * u1' (selectors u1 or u2)");
      }
      term.selectors[axis] = s[i + 2] == '1' ? Selector::U1 : Selector::U2;
      i += 3;
    }
    terms.push_back(term);
  }
  if (terms.empty()) throw ParseError(line, "at least one product term is required");
  return terms;
}

class SectionReader {
 public:
  SectionReader(const Sections& all, const std::string& name) : name_(name) {
    if (auto it = all.find(name); it != all.end()) entries_ = &it->second;
  }

  bool present() const { return entries_ != nullptr; }

  const Entry* find(const std::string& key) {
    if (!entries_) return nullptr;
    auto it = entries_->find(key);
    if (it == entries_->end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw ValidationError(name_ + "." + key, "is required");
    return *e;
  }

  std::optional<double> number(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return parse_double(e->value, e->line);
  }

  void finish() const {
    if (!entries_) return;
    for (const auto& [key, entry] : *entries_) {
      if (!used_.count(key)) throw ParseError(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const std::map<std::string, Entry>* entries_ = nullptr;
  std::set<std::string> used_;
};

AxisPotential read_axis_potential(SectionReader& sec, Axis axis) {
  const std::string ax(1, axis_name(axis));
  const Entry* kind = sec.find(ax);
  if (!kind || kind->value == "free") return AxisPotential(axis, FreePotential{});
  try {
    if (kind->value == "harmonic") {
      return AxisPotential(axis, HarmonicOscillator{parse_double(sec.require(ax + ".omega").value,
                                                                 sec.require(ax + ".omega").line)});
    }
    if (kind->value == "linear") {
      return AxisPotential(axis, LinearRamp{parse_double(sec.require(ax + ".slope").value,
                                                         sec.require(ax + ".slope").line)});
    }
    if (kind->value == "tabulated") {
      const Entry& g = sec.require(ax + ".grid");
      const Entry& v = sec.require(ax + ".values");
      return AxisPotential(axis, TabulatedPotential(parse_list(g.value, g.line),
                                                    parse_list(v.value, v.line)));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("potential." + ax, e.what());
  }
  throw ParseError(kind->line, "unknown potential kind '" + kind->value +
                                   "' (free, harmonic, linear, tabulated)");
}

SolutionSpec read_solution(SectionReader& sec) {
  SolutionSpec spec;
  const Entry& source = sec.require("source");
  spec.energy = sec.number("energy");
  if (source.value == "numerov") {
    spec.source = SolutionSource::Numerov;
    if (!spec.energy) throw ValidationError(sec.name() + ".energy", "is required for numerov");
    const Entry& dom = sec.require("domain");
    const auto [lo, hi] = parse_pair(dom.value, dom.line);
    spec.numerov.domain = Interval{lo, hi};
    if (auto step = sec.number("step")) spec.numerov.step = *step;
    if (const Entry* e = sec.find("ic1")) {
      const auto [v, s] = parse_pair(e->value, e->line);
      spec.numerov.ic1 = {v, s};
    }
    if (const Entry* e = sec.find("ic2")) {
      const auto [v, s] = parse_pair(e->value, e->line);
      spec.numerov.ic2 = {v, s};
    }
    spec.numerov.anchor = sec.number("anchor");
    return spec;
  }
  constexpr std::string_view prefix = "catalog:";
  if (source.value.rfind(prefix, 0) != 0) {
    throw ParseError(source.line, "source must be 'numerov' or 'catalog:<entry>'");
  }
  const std::string id = source.value.substr(prefix.size());
  spec.source = SolutionSource::Catalog;
  if (id == "free") {
    spec.catalog.id = CatalogId::Free;
    spec.catalog.k = sec.number("k").value_or(1.0);
  } else if (id == "zero_energy_free") {
    spec.catalog.id = CatalogId::ZeroEnergyFree;
  } else if (id == "box") {
    spec.catalog.id = CatalogId::Box;
    const Entry& L = sec.require("L");
    const Entry& n = sec.require("n");
    spec.catalog.length = parse_double(L.value, L.line);
    spec.catalog.level = parse_int(n.value, n.line);
  } else {
    throw ValidationError(sec.name() + ".source", "UnknownCatalogEntry '" + id + "'");
  }
  return spec;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const Sections sections = tokenize(text);
  Scenario sc;

  {
    SectionReader sec(sections, "physics");
    sc.physics.hbar = sec.number("hbar").value_or(1.0);
    sc.physics.mass = sec.number("mass").value_or(1.0);
    sec.finish();
    if (!(sc.physics.hbar > 0.0)) throw ValidationError("physics.hbar", "must be positive");
    if (!(sc.physics.mass > 0.0)) throw ValidationError("physics.mass", "must be positive");
  }
  {
    SectionReader sec(sections, "potential");
    for (Axis a : kAxes) sc.potential[index(a)] = read_axis_potential(sec, a);
    sec.finish();
  }
  for (Axis a : kAxes) {
    const std::string name = std::string("solutions.") + axis_name(a);
    SectionReader sec(sections, name);
    if (!sec.present()) throw ValidationError(name, "section is required");
    sc.solutions[index(a)] = read_solution(sec);
    sec.finish();
    if (sc.solutions[index(a)].source == SolutionSource::Catalog &&
        !std::holds_alternative<FreePotential>(sc.potential[index(a)].kind())) {
      throw ValidationError(name + ".source", "catalog solutions require a free potential axis");
    }
  }
  {
    SectionReader sec(sections, "field");
    const Entry& theta = sec.require("theta");
    const Entry& phi = sec.require("phi");
    sc.theta_terms = parse_terms(theta.value, theta.line);
    sc.phi_terms = parse_terms(phi.value, phi.line);
    sec.finish();
  }
  {
    SectionReader sec(sections, "action");
    const Entry& a = sec.require("a");
    sc.a = parse_double(a.value, a.line);
    sc.b = sec.number("b").value_or(0.0);
    sec.finish();
    if (sc.a == 0.0) throw ValidationError("action.a", "must be nonzero");
  }
  {
    SectionReader sec(sections, "trajectory");
    if (const Entry* e = sec.find("r0")) sc.trajectory.r0 = parse_vec3(e->value, e->line);
    IntegratorConfig& cfg = sc.trajectory.config;
    cfg.t_end = sec.number("t_end").value_or(cfg.t_end);
    cfg.rel_tol = sec.number("rel_tol").value_or(cfg.rel_tol);
    cfg.abs_tol = sec.number("abs_tol").value_or(cfg.abs_tol);
    cfg.max_step = sec.number("max_step").value_or(cfg.max_step);
    cfg.singularity_eps = sec.number("singularity_eps").value_or(cfg.singularity_eps);
    sec.finish();
    if (!(cfg.t_end > 0.0)) throw ValidationError("trajectory.t_end", "must be positive");
    if (!(cfg.rel_tol > 0.0)) throw ValidationError("trajectory.rel_tol", "must be positive");
    if (!(cfg.abs_tol > 0.0)) throw ValidationError("trajectory.abs_tol", "must be positive");
    if (!(cfg.max_step > 0.0)) throw ValidationError("trajectory.max_step", "must be positive");
    if (!(cfg.singularity_eps > 0.0)) {
      throw ValidationError("trajectory.singularity_eps", "must be positive");
    }
  }
  {
    SectionReader sec(sections, "verify");
    if (const Entry* e = sec.find("grid")) {
      const auto parts = split(e->value, ',');
      if (parts.size() != 3) throw ParseError(e->line, "grid needs three counts");
      for (std::size_t i = 0; i < 3; ++i) {
        sc.verify.grid[i] = parse_int(parts[i], e->line);
        if (sc.verify.grid[i] < 1) throw ValidationError("verify.grid", "counts must be >= 1");
      }
    }
    if (const Entry* e = sec.find("lo")) sc.verify.lo = parse_vec3(e->value, e->line);
    if (const Entry* e = sec.find("hi")) sc.verify.hi = parse_vec3(e->value, e->line);
    sc.verify.qshje_tol = sec.number("qshje_tol");
    sc.verify.continuity_tol = sec.number("continuity_tol").value_or(sc.verify.continuity_tol);
    sc.verify.wronskian_tol = sec.number("wronskian_tol").value_or(sc.verify.wronskian_tol);
    sec.finish();
  }
  {
    SectionReader sec(sections, "metric");
    if (const Entry* e = sec.find("points")) {
      for (auto part : split(e->value, ';')) {
        if (!part.empty()) sc.metric_points.push_back(parse_vec3(part, e->line));
      }
    }
    sec.finish();
  }

  // Building the field surfaces solver-level inconsistencies (energies,
  // degenerate ICs, proportional theta/phi) at parse time.
  (void)build_field(sc);
  return sc;
}

SolutionField3D build_field(const Scenario& sc) {
  std::array<std::optional<AxisSolutionPair>, 3> pairs;
  for (Axis a : kAxes) {
    const SolutionSpec& spec = sc.solutions[index(a)];
    try {
      if (spec.source == SolutionSource::Catalog) {
        pairs[index(a)] = solve_axis_analytic(a, spec.catalog, sc.physics, spec.energy);
      } else {
        pairs[index(a)] = solve_axis_numerov(a, sc.potential[index(a)], spec.energy.value_or(0.0),
                                             spec.numerov, sc.physics);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) {
        throw ValidationError(std::string("solutions.") + axis_name(a), e.what());
      }
      throw;
    }
  }
  return assemble_field({*pairs[0], *pairs[1], *pairs[2]}, sc.theta_terms, sc.phi_terms);
}

ReducedActionField build_action(const Scenario& sc) {
  return ReducedActionField(build_field(sc), sc.a, sc.b);
}

namespace {

std::string join(const std::vector<double>& values, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += format_number(values[i]);
  }
  return out;
}

std::string vec3_text(const Vec3& v) { return join({v[0], v[1], v[2]}); }

std::string terms_text(const std::vector<ProductTerm>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double c = terms[i].coefficient;
    if (i > 0) out += std::signbit(c) ? " - " : " + ";
    out += format_number(i > 0 ? std::fabs(c) : c);
    for (Selector s : terms[i].selectors) out += s == Selector::U1 ? " * u1" : " * u2";
  }
  return out;
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[physics]\n"
      << "hbar = " << format_number(sc.physics.hbar) << "\n"
      << "mass = " << format_number(sc.physics.mass) << "\n\n[potential]\n";
  for (Axis a : kAxes) {
    const char ax = axis_name(a);
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, FreePotential>) {
            out << ax << " = free\n";
          } else if constexpr (std::is_same_v<K, HarmonicOscillator>) {
            out << ax << " = harmonic\n" << ax << ".omega = " << format_number(k.omega) << "\n";
          } else if constexpr (std::is_same_v<K, LinearRamp>) {
            out << ax << " = linear\n" << ax << ".slope = " << format_number(k.slope) << "\n";
          } else {
            out << ax << " = tabulated\n"
                << ax << ".grid = " << join(k.grid()) << "\n"
                << ax << ".values = " << join(k.values()) << "\n";
          }
        },
        sc.potential[index(a)].kind());
  }
  for (Axis a : kAxes) {
    const SolutionSpec& s = sc.solutions[index(a)];
    out << "\n[solutions." << axis_name(a) << "]\n";
    if (s.source == SolutionSource::Numerov) {
      out << "source = numerov\n"
          << "domain = " << join({s.numerov.domain.lo, s.numerov.domain.hi}) << "\n"
          << "step = " << format_number(s.numerov.step) << "\n"
          << "ic1 = " << join({s.numerov.ic1.value, s.numerov.ic1.slope}) << "\n"
          << "ic2 = " << join({s.numerov.ic2.value, s.numerov.ic2.slope}) << "\n";
      if (s.numerov.anchor) out << "anchor = " << format_number(*s.numerov.anchor) << "\n";
    } else {
      switch (s.catalog.id) {
        case CatalogId::Free:
          out << "source = catalog:free\nk = " << format_number(s.catalog.k) << "\n";
          break;
        case CatalogId::ZeroEnergyFree:
          out << "source = catalog:zero_energy_free\n";
          break;
        case CatalogId::Box:
          out << "source = catalog:box\nL = " << format_number(s.catalog.length)
              << "\nn = " << s.catalog.level << "\n";
          break;
      }
    }
    if (s.energy) out << "energy = " << format_number(*s.energy) << "\n";
  }
  out << "\n[field]\ntheta = " << terms_text(sc.theta_terms) << "\nphi = " << terms_text(sc.phi_terms)
      << "\n\n[action]\na = " << format_number(sc.a) << "\nb = " << format_number(sc.b) << "\n";

  const IntegratorConfig& c = sc.trajectory.config;
  out << "\n[trajectory]\n";
  if (sc.trajectory.r0) out << "r0 = " << vec3_text(*sc.trajectory.r0) << "\n";
  out << "t_end = " << format_number(c.t_end) << "\nrel_tol = " << format_number(c.rel_tol)
      << "\nabs_tol = " << format_number(c.abs_tol) << "\nmax_step = " << format_number(c.max_step)
      << "\nsingularity_eps = " << format_number(c.singularity_eps) << "\n";

  const VerifySpec& v = sc.verify;
  out << "\n[verify]\ngrid = " << v.grid[0] << ", " << v.grid[1] << ", " << v.grid[2] << "\n";
  if (v.lo) out << "lo = " << vec3_text(*v.lo) << "\n";
  if (v.hi) out << "hi = " << vec3_text(*v.hi) << "\n";
  if (v.qshje_tol) out << "qshje_tol = " << format_number(*v.qshje_tol) << "\n";
  out << "continuity_tol = " << format_number(v.continuity_tol)
      << "\nwronskian_tol = " << format_number(v.wronskian_tol) << "\n";

  if (!sc.metric_points.empty()) {
    out << "\n[metric]\npoints = ";
    for (std::size_t i = 0; i < sc.metric_points.size(); ++i) {
      if (i > 0) out << "; ";
      out << vec3_text(sc.metric_points[i]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qhj
