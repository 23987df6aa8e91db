#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oscidecay/parser.hpp"
#include "oscidecay/quadrature.hpp"

namespace oscidecay {

/// Parsed problem description: variables, radicand, phase expression, factor
/// vectors (entries are scalar expressions), plus optional numerics.
///
/// File grammar: one `key = value` per line, `#` comments, blank lines
/// ignored. Repeating keys: `factor` (one vector per line, comma-separated
/// entries) and `factor_spec` (one factor function per line: `gaussian
/// <center> <width>`, `trig <c0> <c1> ...`, or `one`).
struct ProblemFile {
  std::vector<std::string> variables;
  long long radicand = 2;
  std::string phase_text;
  std::vector<std::vector<std::string>> factor_entries;
  std::optional<unsigned> degree_bound;
  std::vector<double> cutoff_radii;
  std::vector<FactorSpec> factor_specs;

  static ProblemFile parse(const std::string& text) {
    ProblemFile pf;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
      throw Error("problem file line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::size_t eq = line.find('=');
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) fail("expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "variables") {
        pf.variables = split_ws(value);
        if (pf.variables.empty()) fail("variables list is empty");
      } else if (key == "radicand") {
        try {
          pf.radicand = std::stoll(value);
        } catch (...) {
          fail("radicand must be an integer");
        }
        if (pf.radicand < 2) fail("radicand must be >= 2");
        for (long long k = 2; k * k <= pf.radicand; ++k)
          if (pf.radicand % (k * k) == 0) fail("radicand must be square-free");
      } else if (key == "phase") {
        pf.phase_text = value;
      } else if (key == "degree_bound") {
        int d = 0;
        try {
          d = std::stoi(value);
        } catch (...) {
          fail("degree_bound must be an integer");
        }
        if (d < 1) fail("degree_bound must be positive");
        pf.degree_bound = static_cast<unsigned>(d);
      } else if (key == "factor") {
        std::vector<std::string> entries;
        std::string cur;
        for (char c : value) {
          if (c == ',') {
            entries.push_back(trim(cur));
            cur.clear();
          } else {
            cur += c;
          }
        }
        entries.push_back(trim(cur));
        for (const auto& e : entries)
          if (e.empty()) fail("empty factor entry");
        pf.factor_entries.push_back(std::move(entries));
      } else if (key == "cutoff") {
        pf.cutoff_radii.clear();
        for (const auto& tok : split_ws(value)) {
          try {
            pf.cutoff_radii.push_back(std::stod(tok));
          } catch (...) {
            fail("cutoff radii must be numbers");
          }
          if (!(pf.cutoff_radii.back() > 0)) fail("cutoff radii must be positive");
        }
      } else if (key == "factor_spec") {
        auto toks = split_ws(value);
        if (toks.empty()) fail("empty factor_spec");
        try {
          if (toks[0] == "gaussian") {
            if (toks.size() != 3) fail("factor_spec gaussian takes center and width");
            pf.factor_specs.push_back(FactorSpec::gaussian(std::stod(toks[1]), std::stod(toks[2])));
          } else if (toks[0] == "trig") {
            std::vector<double> cs;
            for (std::size_t i = 1; i < toks.size(); ++i) cs.push_back(std::stod(toks[i]));
            if (cs.empty()) fail("factor_spec trig needs at least one coefficient");
            pf.factor_specs.push_back(FactorSpec::trig(std::move(cs)));
          } else if (toks[0] == "one") {
            pf.factor_specs.push_back(FactorSpec::one());
          } else {
            fail("unknown factor_spec kind: " + toks[0]);
          }
        } catch (const Error&) {
          throw;
        } catch (...) {
          fail("malformed factor_spec numbers");
        }
      } else {
        fail("unknown key: " + key);
      }
    }
    if (pf.variables.empty()) throw Error("problem file declares no variables");
    if (pf.phase_text.empty()) throw Error("problem file declares no phase");
    if (pf.factor_entries.empty()) throw Error("problem file declares no factors");
    for (const auto& f : pf.factor_entries)
      if (f.size() != pf.variables.size())
        throw Error("factor vector length " + std::to_string(f.size()) +
                    " does not match variable count " + std::to_string(pf.variables.size()));
    return pf;
  }

  static ProblemFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  /// Built-in presets: the six-factor light-cone functional and the two
  /// four-variable flexing examples.
  static ProblemFile preset(const std::string& name) {
    if (name == "lightcone6") {
      return parse(
          "variables = x y z\n"
          "radicand = 2\n"
          "phase = x^2*y + 2*x*y*z\n"
          "factor = 0, 1, 1\n"
          "factor = 0, 1, -1\n"
          "factor = 1, 0, 1\n"
          "factor = 1, 0, -1\n"
          "factor = 1, 1, sqrt(2)\n"
          "factor = 1, 1, -sqrt(2)\n"
          "cutoff = 1 1 1\n"
          "factor_spec = gaussian 0 1\n"
          "factor_spec = gaussian 0 1\n"
          "factor_spec = gaussian 0 1\n"
          "factor_spec = gaussian 0 1\n"
          "factor_spec = gaussian 0 1\n"
          "factor_spec = gaussian 0 1\n");
    }
    if (name == "flex1") {
      return parse(
          "variables = x y z w\n"
          "radicand = 2\n"
          "phase = x^2*y\n"
          "factor = 0, 1, 1, 0\n"
          "factor = 0, 1, -1, 0\n"
          "factor = 1, 0, 1, 0\n"
          "factor = 1, 0, -1, 0\n"
          "factor = 1, 1, sqrt(2), 0\n"
          "factor = 1, 1, -sqrt(2), 0\n"
          "factor = 1, 0, 0, 1\n"
          "factor = 1, 0, 0, -1\n"
          "factor = 1, 0, -1, 2\n"
          "cutoff = 1 1 1 1\n");
    }
    if (name == "flex2") {
      return parse(
          "variables = x y z w\n"
          "radicand = 2\n"
          "phase = x^2*y\n"
          "factor = 0, 1, 1, 0\n"
          "factor = 0, 1, -1, 0\n"
          "factor = 1, 0, 1, 0\n"
          "factor = 1, 0, -1, 0\n"
          "factor = 1, 1, sqrt(2), 0\n"
          "factor = 1, 1, -sqrt(2), 0\n"
          "factor = 1, 0, 0, 1\n"
          "factor = 1, 0, 0, -1\n"
          "cutoff = 1 1 1 1\n");
    }
    throw Error("unknown preset: " + name + " (available: lightcone6, flex1, flex2)");
  }

  ProjectionSystem projection_system() const {
    VarSet vars(variables);
    std::vector<ScalarVector> vecs;
    for (const auto& entries : factor_entries) {
      ScalarVector v;
      for (const auto& e : entries) v.push_back(parse_scalar(e, radicand));
      vecs.push_back(std::move(v));
    }
    return ProjectionSystem(vars, std::move(vecs));
  }

  Functional to_functional(const std::optional<std::string>& phase_override = std::nullopt,
                           const std::optional<unsigned>& degree_override = std::nullopt) const {
    ProjectionSystem sys = projection_system();
    const std::string& text = phase_override ? *phase_override : phase_text;
    MultiPoly phase = parse_polynomial(text, sys.vars, radicand);
    unsigned d;
    if (degree_override)
      d = *degree_override;
    else if (degree_bound)
      d = *degree_bound;
    else
      d = std::max(2u, phase.degree());
    std::vector<double> radii = cutoff_radii;
    if (radii.empty()) radii.assign(variables.size(), 1.0);
    if (radii.size() != variables.size())
      throw Error("cutoff radius count does not match variable count");
    return Functional(std::move(sys), std::move(phase), d, std::move(radii));
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }
  static std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
  }
};

}  // namespace oscidecay
