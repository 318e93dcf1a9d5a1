#include "qk/identities.hpp"

#include "qk/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace qk {

namespace {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Parses an affine form like "n-r+1", "2", "n", "r-1".
AffineExpr parse_affine(const std::string& raw) {
  AffineExpr e;
  std::string s = raw;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ParseError("empty affine expression");
  size_t i = 0;
  int sign = 1;
  while (i < s.size()) {
    if (s[i] == '+') {
      sign = 1;
      ++i;
      continue;
    }
    if (s[i] == '-') {
      sign = -1;
      ++i;
      continue;
    }
    if (s[i] == 'n') {
      e.cn += sign;
      sign = 1;
      ++i;
    } else if (s[i] == 'r') {
      e.cr += sign;
      sign = 1;
      ++i;
    } else if (isdigit(s[i])) {
      long v = 0;
      while (i < s.size() && isdigit(s[i])) v = v * 10 + (s[i++] - '0');
      // "2n" style: a coefficient in front of a variable
      if (i < s.size() && s[i] == 'n') {
        e.cn += sign * static_cast<int>(v);
        ++i;
      } else if (i < s.size() && s[i] == 'r') {
        e.cr += sign * static_cast<int>(v);
        ++i;
      } else {
        e.c0 += sign * static_cast<int>(v);
      }
      sign = 1;
    } else {
      throw ParseError("bad affine expression: " + raw);
    }
  }
  return e;
}

/// Splits an expression into signed chunks at top-level + and - (never
/// inside {...}).
std::vector<std::pair<int, std::string>> split_terms(const std::string& s) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0;
  int sign = 1;
  std::string cur;
  auto flush = [&]() {
    std::string t = trim(cur);
    if (!t.empty()) out.emplace_back(sign, t);
    cur.clear();
  };
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '{' || c == '(') ++depth;
    if (c == '}' || c == ')') --depth;
    // a sign splits terms only when preceded by whitespace or at the start
    bool splitter = depth == 0 && (c == '+' || c == '-') &&
                    (i == 0 || s[i - 1] == ' ') &&
                    (i + 1 < s.size() && s[i + 1] == ' ');
    if (splitter && trim(cur).empty() && i == 0) {
      // leading sign
      sign = c == '-' ? -1 : 1;
      continue;
    }
    if (splitter) {
      flush();
      sign = c == '-' ? -1 : 1;
      continue;
    }
    cur += c;
  }
  flush();
  return out;
}

/// Parses one product: coefficient factors followed by monomial factors.
TermTemplate parse_term(int sign, const std::string& s,
                        const std::set<std::string>& macro_names) {
  TermTemplate t;
  if (sign < 0) t.coeff.push_back({CoeffFactor::Integer, -1, {}});
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    if (tok.rfind("chi_", 0) == 0) {
      std::string arg = tok.substr(4);
      if (!arg.empty() && arg.front() == '{') arg = arg.substr(1);
      if (!arg.empty() && arg.back() == '}') arg.pop_back();
      t.coeff.push_back({CoeffFactor::Chi, 0, parse_affine(arg)});
    } else if (tok.rfind("(-1)^", 0) == 0) {
      std::string arg = tok.substr(5);
      if (!arg.empty() && arg.front() == '{') arg = arg.substr(1);
      if (!arg.empty() && arg.back() == '}') arg.pop_back();
      t.coeff.push_back({CoeffFactor::SignPower, 0, parse_affine(arg)});
    } else if (isdigit(tok[0]) ||
               (tok[0] == '-' && tok.size() > 1 && isdigit(tok[1]))) {
      t.coeff.push_back({CoeffFactor::Integer, std::stol(tok), {}});
    } else {
      // monomial factor: label[^{expr}] or macro[@{shift}]
      std::string label = tok;
      AffineExpr exp{0, 0, 1};
      int macro_shift = 0;
      bool has_shift = false;
      if (auto pos = label.find("^{"); pos != std::string::npos) {
        std::string arg = label.substr(pos + 2);
        if (!arg.empty() && arg.back() == '}') arg.pop_back();
        exp = parse_affine(arg);
        label = label.substr(0, pos);
      } else if (auto pos2 = label.find('^'); pos2 != std::string::npos) {
        exp = parse_affine(label.substr(pos2 + 1));
        label = label.substr(0, pos2);
      }
      if (auto pos = label.find("@{"); pos != std::string::npos) {
        std::string arg = label.substr(pos + 2);
        if (!arg.empty() && arg.back() == '}') arg.pop_back();
        AffineExpr sh = parse_affine(arg);
        if (sh.cn != 1 || sh.cr != 0)
          throw ParseError("macro shift must be n+const: " + tok);
        macro_shift = sh.c0;
        has_shift = true;
        label = label.substr(0, pos);
      }
      if (macro_names.count(label)) {
        if (!t.mono.macro.empty())
          throw ParseError("two macros in one monomial: " + tok);
        t.mono.macro = label;
        t.mono.macro_shift = macro_shift;
      } else {
        if (has_shift) throw ParseError("shift on a non-macro: " + tok);
        if (t.mono.macro.empty())
          t.mono.factors.push_back({label, exp});
        else
          t.mono.factors_after.push_back({label, exp});
      }
    }
  }
  return t;
}

std::vector<TermTemplate> parse_expression(
    const std::string& s, const std::set<std::string>& macro_names,
    const std::string& code_macro_prefix) {
  std::vector<TermTemplate> out;
  for (auto& [sign, chunk] : split_terms(s)) {
    // in a code section a bare integer chunk (possibly after coefficient
    // factors) refers to the m-th code macro at n+1
    std::string body = chunk;
    if (!code_macro_prefix.empty()) {
      // replace a trailing bare integer token with the macro reference
      std::istringstream is(body);
      std::vector<std::string> toks;
      std::string tok;
      while (is >> tok) toks.push_back(tok);
      if (!toks.empty()) {
        std::string& last = toks.back();
        bool bare_int = !last.empty() &&
                        std::all_of(last.begin(), last.end(), ::isdigit);
        if (bare_int) {
          last = code_macro_prefix + last + "@{n+1}";
          body.clear();
          for (size_t i = 0; i < toks.size(); ++i) {
            if (i) body += " ";
            body += toks[i];
          }
        }
      }
    }
    out.push_back(parse_term(sign, body, macro_names));
  }
  return out;
}

} // namespace

IdentityFile parse_identity_file(const std::string& text) {
  IdentityFile file;
  std::set<std::string> macro_names;
  IdentityFamily* cur = nullptr;
  std::string cols_attr, lhs_attr, codes_attr;
  bool in_macros = false;
  int lineno = 0;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos)
      line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        std::string inner = trim(line.substr(1, line.size() - 2));
        if (inner == "macros") {
          in_macros = true;
          cur = nullptr;
          continue;
        }
        in_macros = false;
        auto parts = split(inner, ';');
        std::string head = trim(parts[0]);
        if (head.rfind("family ", 0) != 0)
          throw ParseError("expected family header");
        file.families.push_back({});
        cur = &file.families.back();
        cur->name = trim(head.substr(7));
        cur->n_hi = AffineExpr{-1, 0, 0}; // "N"
        cols_attr = lhs_attr = codes_attr = "";
        for (size_t i = 1; i < parts.size(); ++i) {
          std::string a = trim(parts[i]);
          if (a.empty()) continue;
          if (a == "even")
            cur->parity = 0;
          else if (a == "odd")
            cur->parity = 1;
          else if (a == "pairs")
            cur->pairs = true;
          else if (a == "no-n")
            cur->uses_n = false;
          else if (a.rfind("n=", 0) == 0) {
            auto range = split(a.substr(2), '.');
            cur->n_lo = parse_affine(range[0]);
            std::string hi = range.back();
            cur->n_hi = (hi == "N") ? AffineExpr{-1, 0, 0} : parse_affine(hi);
          } else if (a.rfind("r=", 0) == 0) {
            auto range = split(a.substr(2), '.');
            cur->fam_has_r = true;
            cur->fam_r_lo = parse_affine(range[0]);
            cur->fam_r_hi = parse_affine(range.back());
          } else if (a.rfind("module=", 0) == 0)
            cur->module = a.substr(7);
          else if (a.rfind("cols=", 0) == 0)
            cols_attr = a.substr(5);
          else if (a.rfind("lhs=", 0) == 0)
            lhs_attr = a.substr(4);
          else if (a.rfind("codes=", 0) == 0)
            codes_attr = a.substr(6);
          else
            throw ParseError("unknown attribute: " + a);
        }
        continue;
      }
      if (in_macros) {
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("macro without =");
        std::string name = trim(line.substr(0, eq));
        TermTemplate t = parse_term(1, trim(line.substr(eq + 1)), {});
        if (!t.coeff.empty())
          throw ParseError("macro with coefficient: " + name);
        MonomialTemplate mono = t.mono;
        // a leading head factor (g1..g9 style, exponent 1) stays a factor;
        // evaluation decides whether the first label is a module head
        file.macros[name] = std::move(mono);
        macro_names.insert(name);
        continue;
      }
      if (!cur) throw ParseError("content outside any section");
      // table row or plain equation
      auto colon = line.find(" : ");
      if (!cols_attr.empty() && colon != std::string::npos) {
        std::string rowpart = trim(line.substr(0, colon));
        std::string entries = trim(line.substr(colon + 3));
        // optional per-row r scope "ROW ; r=lo..hi"
        bool has_r = false;
        AffineExpr rlo, rhi;
        if (auto sc = rowpart.find(';'); sc != std::string::npos) {
          std::string attr = trim(rowpart.substr(sc + 1));
          rowpart = trim(rowpart.substr(0, sc));
          if (attr.rfind("r=", 0) != 0) throw ParseError("bad row attr");
          auto range = split(attr.substr(2), '.');
          rlo = parse_affine(range[0]);
          rhi = parse_affine(range.back());
          has_r = true;
        }
        auto cols = split(cols_attr, ',');
        auto cells = split(entries, '|');
        if (cells.size() != cols.size())
          throw ParseError("row with wrong number of entries");
        for (size_t c = 0; c < cols.size(); ++c) {
          std::string cell = trim(cells[c]);
          if (cell == "." || cell.empty()) continue;
          IdentityTemplate id;
          std::string lhs_text;
          if (lhs_attr == "col*row")
            lhs_text = trim(cols[c]) + " " + rowpart;
          else
            lhs_text = rowpart + " " + trim(cols[c]);
          id.lhs = parse_expression(lhs_text, macro_names, "");
          id.rhs = parse_expression(cell, macro_names, codes_attr);
          id.has_r = has_r;
          id.r_lo = rlo;
          id.r_hi = rhi;
          cur->identities.push_back(std::move(id));
        }
        continue;
      }
      auto eq = line.find(" = ");
      if (eq == std::string::npos) throw ParseError("expected an equation");
      IdentityTemplate id;
      std::string lhs_text = trim(line.substr(0, eq));
      if (auto sc = lhs_text.find(';'); sc != std::string::npos) {
        std::string attr = trim(lhs_text.substr(sc + 1));
        lhs_text = trim(lhs_text.substr(0, sc));
        if (attr.rfind("r=", 0) != 0) throw ParseError("bad lhs attr");
        auto range = split(attr.substr(2), '.');
        id.r_lo = parse_affine(range[0]);
        id.r_hi = parse_affine(range.back());
        id.has_r = true;
      }
      id.lhs = parse_expression(lhs_text, macro_names, "");
      id.rhs = parse_expression(trim(line.substr(eq + 3)), macro_names,
                                codes_attr);
      cur->identities.push_back(std::move(id));
    } catch (const ParseError& e) {
      throw std::invalid_argument("identity file line " +
                                  std::to_string(lineno) + ": " + e.what());
    }
  }
  for (auto& fam : file.families)
    if (fam.fam_has_r)
      for (auto& id : fam.identities)
        if (!id.has_r) {
          id.has_r = true;
          id.r_lo = fam.fam_r_lo;
          id.r_hi = fam.fam_r_hi;
        }
  return file;
}

namespace {

struct Evaluator {
  const IdentityFile& file;
  const IdentityContext& ctx;
  const IdentityFamily& fam;
  const std::vector<std::string>* heads = nullptr;
  const ModuleGroebnerBasis* mgb = nullptr;
  std::string pair_p, pair_q;

  int gen_index(const std::string& label) const {
    std::string l = label;
    if (l == "P") l = pair_p;
    if (l == "Q") l = pair_q;
    int g = ctx.gens->index_of(l);
    if (g < 0) throw std::invalid_argument("unknown generator " + l);
    return g;
  }

  bool append_factors(Word& w, const std::vector<MonomialTemplate::Factor>& fs,
                      long n, long r) const {
    for (const auto& f : fs) {
      if (heads) {
        auto hit = std::find(heads->begin(), heads->end(), f.label);
        if (hit != heads->end()) {
          if (w.head >= 0 || !w.letters.empty())
            throw std::invalid_argument("module head not leading");
          w.head = static_cast<int>(hit - heads->begin());
          continue;
        }
      }
      long e = f.exp.eval(n, r);
      if (e < 0) return false; // instance outside the template range
      int g = gen_index(f.label);
      for (long i = 0; i < e; ++i)
        w.letters.push_back(static_cast<uint8_t>(g));
    }
    return true;
  }

  std::optional<Word> build_word(const MonomialTemplate& mono, long n,
                                 long r) const {
    Word w;
    if (!append_factors(w, mono.factors, n, r)) return std::nullopt;
    if (!mono.macro.empty()) {
      const MonomialTemplate& m = file.macros.at(mono.macro);
      if (!append_factors(w, m.factors, n + mono.macro_shift, r))
        return std::nullopt;
    }
    if (!append_factors(w, mono.factors_after, n, r)) return std::nullopt;
    return w;
  }

  Rational coeff_value(const std::vector<CoeffFactor>& cs, long n,
                       long r) const {
    Rational c(1);
    for (const auto& f : cs) {
      switch (f.kind) {
        case CoeffFactor::Integer:
          c *= Rational(f.value);
          break;
        case CoeffFactor::Chi:
          c *= Rational(chi(f.arg.eval(n, r)));
          break;
        case CoeffFactor::SignPower:
          c *= Rational(f.arg.eval(n, r) % 2 == 0 ? 1 : -1);
          break;
      }
    }
    return c;
  }

  std::optional<NcPoly> build_side(const std::vector<TermTemplate>& side,
                                   long n, long r) const {
    NcPoly p;
    for (const auto& t : side) {
      Rational c = coeff_value(t.coeff, n, r);
      if (c == 0) continue;
      auto w = build_word(t.mono, n, r);
      if (!w) return std::nullopt;
      p.add_term(*w, c);
    }
    return p;
  }

  bool check(const IdentityTemplate& id, long n, long r,
             std::string* diag) const {
    auto lhs = build_side(id.lhs, n, r);
    auto rhs = build_side(id.rhs, n, r);
    if (!lhs || !rhs) return true; // vacuous at this instance
    // homogeneity guard: both sides must share one degree
    NcPoly l = *lhs, rr = *rhs;
    if (!l.is_zero() && !rr.is_zero()) {
      int dl = *l.homogeneous_degree();
      int dr = *rr.homogeneous_degree();
      if (dl != dr) {
        if (diag) *diag = "sides of different degrees";
        return false;
      }
    }
    NcPoly nl = mgb ? normal_form(l, *mgb) : normal_form(l, *ctx.gb);
    NcPoly nr = mgb ? normal_form(rr, *mgb) : normal_form(rr, *ctx.gb);
    if (nl == nr) return true;
    if (diag) *diag = "normal forms differ";
    return false;
  }
};

} // namespace

std::vector<IdentityOutcome> verify_identities(const IdentityFile& file,
                                               const IdentityContext& ctx,
                                               int bound_n) {
  std::vector<IdentityOutcome> out;
  static const std::vector<std::pair<std::string, std::string>> pair_list = {
      {"y12", "y34"}, {"y13", "y24"}, {"y23", "y14"}};
  for (const auto& fam : file.families) {
    IdentityOutcome oc;
    oc.family = fam.name;
    Evaluator ev{file, ctx, fam, nullptr, nullptr, "", ""};
    if (!fam.module.empty()) {
      auto it = ctx.modules.find(fam.module);
      if (it == ctx.modules.end())
        throw std::invalid_argument("no module context for " + fam.module);
      ev.heads = it->second.first;
      ev.mgb = it->second.second;
    }
    std::vector<std::pair<std::string, std::string>> pairs =
        fam.pairs ? pair_list
                  : std::vector<std::pair<std::string, std::string>>{{"", ""}};
    long n_lo = fam.n_lo.eval(0, 0);
    long n_hi = fam.n_hi.cn == -1 ? bound_n
                                  : std::min<long>(fam.n_hi.eval(0, 0),
                                                   bound_n);
    if (!fam.uses_n) n_lo = n_hi = 0;
    for (const auto& pp : pairs) {
      ev.pair_p = pp.first;
      ev.pair_q = pp.second;
      for (long n = n_lo; n <= n_hi; ++n) {
        if (fam.parity == 0 && n % 2 != 0) continue;
        if (fam.parity == 1 && n % 2 == 0) continue;
        for (size_t k = 0; k < fam.identities.size(); ++k) {
          const auto& id = fam.identities[k];
          long r_lo = 0, r_hi = 0;
          if (id.has_r) {
            r_lo = id.r_lo.eval(n, 0);
            r_hi = id.r_hi.eval(n, 0);
          }
          for (long r = r_lo; r <= r_hi; ++r) {
            std::string diag;
            ++oc.instances;
            if (!ev.check(id, n, r, &diag)) {
              ++oc.failures;
              if (oc.failed_instances.size() < 16)
                oc.failed_instances.push_back(
                    fam.name + "[" + std::to_string(k) + "] n=" +
                    std::to_string(n) + " r=" + std::to_string(r) +
                    (pp.first.empty() ? "" : " pair=" + pp.first) + ": " +
                    diag);
            }
          }
        }
      }
    }
    out.push_back(std::move(oc));
  }
  return out;
}

} // namespace qk
