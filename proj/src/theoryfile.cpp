#include "bornforge/theoryfile.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bornforge/errors.hpp"
#include "bornforge/format.hpp"
#include "bornforge/random.hpp"

namespace bornforge {

namespace {

// Character-level scanner with 1-based line/column tracking. '#' comments
// run to end of line; newlines are ordinary whitespace, so matrix literals
// may span lines.
struct Scanner {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Scanner(const std::string& text_, int line0 = 1, int col0 = 1)
      : text(text_), line(line0), col(col0) {}

  bool at_end() const { return pos >= text.size(); }

  char peek() const { return at_end() ? '\0' : text[pos]; }

  char advance() {
    const char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_ws() {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  // Identifier: leading letter or '_', then letters, digits, '_', '-'.
  // A trailing '-' run is released back (so "Q->R" scans as "Q", "->", "R").
  std::string ident(const char* what) {
    skip_ws();
    const char c = peek();
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      fail(std::string("expected ") + what);
    }
    std::string out;
    while (!at_end()) {
      const char d = peek();
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '-') {
        out.push_back(advance());
      } else {
        break;
      }
    }
    while (out.size() > 1 && out.back() == '-') {
      out.pop_back();
      --pos;
      --col;
    }
    return out;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + what + "'");
    advance();
  }

  // Unsigned or signed decimal float at the current position (no leading
  // whitespace is consumed here; callers position the scanner first).
  double number_here(const char* what) {
    const char c = peek();
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
          c == '.')) {
      fail(std::string("expected ") + what);
    }
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail(std::string("expected ") + what);
    if (!std::isfinite(v)) fail("number is not finite");
    for (const char* p = start; p != end; ++p) advance();
    return v;
  }

  double number(const char* what) {
    skip_ws();
    return number_here(what);
  }

  int positive_int(const char* what) {
    skip_ws();
    const int l = line;
    const int c = col;
    const double v = number_here(what);
    if (v <= 0.0 || v != std::floor(v) || v > 1e6) {
      throw ParseError(std::string(what) + " must be a positive integer", l, c);
    }
    return static_cast<int>(v);
  }

  // complex := float (("+"|"-") float "i")?  with no internal whitespace.
  Complex complex_literal() {
    skip_ws();
    const int l = line;
    const int c = col;
    auto bad = [&]() -> ParseError {
      return ParseError("malformed complex literal", l, c);
    };
    double re = 0.0;
    try {
      re = number_here("number");
    } catch (const ParseError&) {
      throw bad();
    }
    double im = 0.0;
    if (peek() == '+' || peek() == '-') {
      const double sign = (peek() == '-') ? -1.0 : 1.0;
      advance();
      const char d = peek();
      if (!(std::isdigit(static_cast<unsigned char>(d)) || d == '.')) throw bad();
      try {
        im = sign * number_here("number");
      } catch (const ParseError&) {
        throw bad();
      }
      if (peek() != 'i') throw bad();
      advance();
    }
    return Complex(re, im);
  }

  // matrix := "[" row (";" row)* "]", row := complex ("," complex)*.
  Matrix matrix_literal() {
    skip_ws();
    const int l = line;
    const int c = col;
    expect('[', "[");
    std::vector<std::vector<Complex>> rows;
    rows.emplace_back();
    for (;;) {
      rows.back().push_back(complex_literal());
      skip_ws();
      if (at_end()) fail("unterminated matrix literal");
      const char d = peek();
      if (d == ',') {
        advance();
      } else if (d == ';') {
        advance();
        rows.emplace_back();
      } else if (d == ']') {
        advance();
        break;
      } else {
        fail("expected ',', ';' or ']' in matrix literal");
      }
    }
    const std::size_t cols = rows[0].size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != cols) {
        throw ShapeError("matrix literal at line " + std::to_string(l) +
                         ", column " + std::to_string(c) + " is ragged: row " +
                         std::to_string(r + 1) + " has " +
                         std::to_string(rows[r].size()) + " entries, row 1 has " +
                         std::to_string(cols));
      }
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t cc = 0; cc < cols; ++cc)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cc)) =
            rows[r][cc];
    return m;
  }
};

std::string fmt_complex(Complex z) {
  std::string out = fmt_double(z.real());
  if (z.imag() != 0.0) {
    out += (z.imag() < 0.0) ? "-" : "+";
    out += fmt_double(std::abs(z.imag()));
    out += "i";
  }
  return out;
}

TheoryObject obj_of_dim(int d) {
  return d <= 1 ? TheoryObject::unit() : TheoryObject::wire(d);
}

}  // namespace

bool GeneratorDecl::operator==(const GeneratorDecl& other) const {
  if (name != other.name || dom != other.dom || cod != other.cod ||
      role != other.role) {
    return false;
  }
  if (matrix.rows() != other.matrix.rows() ||
      matrix.cols() != other.matrix.cols()) {
    return false;
  }
  for (Eigen::Index i = 0; i < matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      if (matrix(i, j) != other.matrix(i, j)) return false;
  return true;
}

bool TheoryFile::operator==(const TheoryFile& other) const {
  return name == other.name && rule_kind == other.rule_kind &&
         born_k == other.born_k && simplified == other.simplified &&
         objects == other.objects && generators == other.generators;
}

TheoryFile parse_theory(const std::string& text) {
  Scanner s(text);
  TheoryFile tf;
  bool saw_theory = false;
  bool saw_rule = false;
  bool saw_simplified = false;
  std::vector<bool> role_set;

  auto object_dim = [&](const std::string& name, int l, int c) -> int {
    if (name == "I") return 1;
    for (const auto& [n, d] : tf.objects)
      if (n == name) return d;
    throw UnknownObject("unknown object '" + name + "' (line " +
                        std::to_string(l) + ", column " + std::to_string(c) +
                        ")");
  };

  for (;;) {
    s.skip_ws();
    if (s.at_end()) break;
    const int l = s.line;
    const int c = s.col;
    const std::string kw = s.ident("statement keyword");

    if (kw == "theory") {
      if (saw_theory) throw ParseError("duplicate 'theory' statement", l, c);
      saw_theory = true;
      tf.name = s.ident("theory name");
    } else if (kw == "rule") {
      if (saw_rule) throw ParseError("duplicate 'rule' statement", l, c);
      saw_rule = true;
      const std::string kind = s.ident("rule kind");
      if (kind == "born") {
        if (s.ident("'k'") != "k") throw ParseError("expected 'k=<real>'", l, c);
        s.expect('=', "=");
        tf.rule_kind = "born";
        tf.born_k = s.number("exponent");
      } else if (kind == "trace" || kind == "stochastic") {
        tf.rule_kind = kind;
      } else {
        throw ParseError("unknown rule kind '" + kind + "'", l, c);
      }
    } else if (kw == "simplified") {
      if (saw_simplified)
        throw ParseError("duplicate 'simplified' statement", l, c);
      saw_simplified = true;
      const std::string b = s.ident("'true' or 'false'");
      if (b == "true") {
        tf.simplified = true;
      } else if (b == "false") {
        tf.simplified = false;
      } else {
        throw ParseError("expected 'true' or 'false', got '" + b + "'", l, c);
      }
    } else if (kw == "object") {
      const std::string name = s.ident("object name");
      if (name == "I")
        throw ParseError("object name 'I' is reserved for the unit", l, c);
      for (const auto& [n, d] : tf.objects) {
        (void)d;
        if (n == name)
          throw ParseError("duplicate object '" + name + "'", l, c);
      }
      tf.objects.emplace_back(name, s.positive_int("dimension"));
    } else if (kw == "gen") {
      GeneratorDecl g;
      g.name = s.ident("generator name");
      for (const auto& other : tf.generators) {
        if (other.name == g.name)
          throw ParseError("duplicate generator '" + g.name + "'", l, c);
      }
      s.expect(':', ":");
      s.skip_ws();
      int rl = s.line, rc = s.col;
      g.dom = s.ident("domain object");
      const int dom_dim = object_dim(g.dom, rl, rc);
      s.expect('-', "->");
      if (s.peek() != '>') s.fail("expected '->'");
      s.advance();
      s.skip_ws();
      rl = s.line;
      rc = s.col;
      g.cod = s.ident("codomain object");
      const int cod_dim = object_dim(g.cod, rl, rc);
      s.expect('=', "=");
      g.matrix = s.matrix_literal();
      if (g.matrix.rows() != cod_dim || g.matrix.cols() != dom_dim) {
        throw ShapeError("generator '" + g.name + "' expects a " +
                         std::to_string(cod_dim) + "x" +
                         std::to_string(dom_dim) + " matrix, literal is " +
                         std::to_string(g.matrix.rows()) + "x" +
                         std::to_string(g.matrix.cols()));
      }
      tf.generators.push_back(std::move(g));
      role_set.push_back(false);
    } else if (kw == "role") {
      const std::string gname = s.ident("generator name");
      std::size_t idx = tf.generators.size();
      for (std::size_t i = 0; i < tf.generators.size(); ++i)
        if (tf.generators[i].name == gname) idx = i;
      if (idx == tf.generators.size())
        throw ParseError("role names unknown generator '" + gname + "'", l, c);
      if (role_set[idx])
        throw ParseError("generator '" + gname + "' already has a role", l, c);
      const std::string tag = s.ident("role tag");
      if (tag != "process" && tag != "state" && tag != "effect")
        throw ParseError("unknown role '" + tag + "'", l, c);
      GeneratorDecl& g = tf.generators[idx];
      if (tag == "state" && g.matrix.cols() != 1) {
        throw ShapeError("generator '" + gname +
                         "' tagged state must have domain I");
      }
      if (tag == "effect" && g.matrix.rows() != 1) {
        throw ShapeError("generator '" + gname +
                         "' tagged effect must have codomain I");
      }
      g.role = tag;
      role_set[idx] = true;
    } else {
      throw ParseError("unknown statement '" + kw + "'", l, c);
    }
  }

  if (!saw_theory) throw ParseError("missing 'theory' statement", 1, 1);
  if (!saw_rule) throw ParseError("missing 'rule' statement", 1, 1);
  return tf;
}

std::string serialize(const TheoryFile& tf) {
  std::ostringstream out;
  out << "theory " << tf.name << "\n";
  if (tf.rule_kind == "born") {
    out << "rule born k=" << fmt_double(tf.born_k) << "\n";
  } else {
    out << "rule " << tf.rule_kind << "\n";
  }
  out << "simplified " << (tf.simplified ? "true" : "false") << "\n";
  for (const auto& [name, dim] : tf.objects)
    out << "object " << name << " " << dim << "\n";
  for (const GeneratorDecl& g : tf.generators) {
    out << "gen " << g.name << " : " << g.dom << " -> " << g.cod << " = [";
    for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
      if (r > 0) out << "; ";
      for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
        if (c > 0) out << ", ";
        out << fmt_complex(g.matrix(r, c));
      }
    }
    out << "]\n";
  }
  for (const GeneratorDecl& g : tf.generators)
    if (g.role != "process") out << "role " << g.name << " " << g.role << "\n";
  return out.str();
}

TheorySpec to_theory_spec(const TheoryFile& tf) {
  TheorySpec t;
  t.name = tf.name;
  t.simplified = tf.simplified;
  if (tf.rule_kind == "born") {
    t.rule = ProbabilityRule::born_power(tf.born_k);
  } else if (tf.rule_kind == "trace") {
    t.rule = ProbabilityRule::trace_rule();
  } else {
    t.rule = ProbabilityRule::stochastic_inner();
  }
  t.object_policy = [](const TheoryObject&) { return true; };
  t.make_object = [](int d) { return obj_of_dim(d); };

  struct GenMorphism {
    Morphism m;
    std::string role;
  };
  auto pool = std::make_shared<std::vector<GenMorphism>>();
  for (const GeneratorDecl& g : tf.generators) {
    pool->push_back({Morphism(obj_of_dim(static_cast<int>(g.matrix.cols())),
                              obj_of_dim(static_cast<int>(g.matrix.rows())),
                              g.matrix),
                     g.role});
  }
  const bool simplified = tf.simplified;

  // State/effect samplers offer declared generators of the right shape; in a
  // simplified theory they interleave with generic dense samples (all
  // morphisms are members), otherwise only the generators are on offer.
  t.sample_state = [pool, simplified](const TheoryObject& a,
                                      RandomSource& rng) -> Morphism {
    std::vector<const Morphism*> fits;
    for (const GenMorphism& g : *pool)
      if (g.role == "state" && g.m.cod.dim() == a.dim()) fits.push_back(&g.m);
    if (!fits.empty() && (!simplified || rng.uniform() < 0.5)) {
      const Morphism& m = *fits[rng.next_u64() % fits.size()];
      return regroup(m, TheoryObject::unit(), a);
    }
    if (!simplified) {
      throw SamplerUnavailable("no state generator of dimension " +
                               std::to_string(a.dim()));
    }
    return random_state(a, rng);
  };
  t.sample_effect = [pool, simplified](const TheoryObject& a,
                                       RandomSource& rng) -> Morphism {
    std::vector<const Morphism*> fits;
    for (const GenMorphism& g : *pool)
      if (g.role == "effect" && g.m.dom.dim() == a.dim()) fits.push_back(&g.m);
    if (!fits.empty() && (!simplified || rng.uniform() < 0.5)) {
      const Morphism& m = *fits[rng.next_u64() % fits.size()];
      return regroup(m, a, TheoryObject::unit());
    }
    if (!simplified) {
      throw SamplerUnavailable("no effect generator of dimension " +
                               std::to_string(a.dim()));
    }
    return random_effect(a, rng);
  };
  t.sample_process = [pool, simplified](
                         const TheoryObject& a, const TheoryObject& b,
                         RandomSource& rng) -> std::optional<Morphism> {
    std::vector<const Morphism*> fits;
    for (const GenMorphism& g : *pool)
      if (g.role == "process" && g.m.dom.dim() == a.dim() &&
          g.m.cod.dim() == b.dim())
        fits.push_back(&g.m);
    if (!fits.empty() && (!simplified || rng.uniform() < 0.5))
      return regroup(*fits[rng.next_u64() % fits.size()], a, b);
    if (simplified) return random_contraction(a, b, rng);
    // Composites of generators are members, so the identity always is.
    if (a.dim() == b.dim()) return regroup(identity(a), a, b);
    return std::nullopt;
  };

  // Scan declared state/effect pairs for the probability witnesses.
  for (const GenMorphism& st : *pool) {
    if (st.role != "state") continue;
    for (const GenMorphism& ef : *pool) {
      if (ef.role != "effect") continue;
      if (st.m.cod.dim() != ef.m.dom.dim()) continue;
      const Morphism s = regroup(st.m, TheoryObject::unit(), ef.m.dom);
      double p = 0.0;
      try {
        p = prob(t, s, ef.m);
      } catch (const KernelError&) {
        continue;  // pair is outside the rule's range, not witness material
      }
      if (p > 1e-9 && !t.witnesses.prob_nonzero)
        t.witnesses.prob_nonzero = std::make_pair(s, ef.m);
      if (std::abs(p - 1.0) > 1e-9 && !t.witnesses.prob_nonone)
        t.witnesses.prob_nonone = std::make_pair(s, ef.m);
    }
  }
  return t;
}

WeightedSet parse_weighted_set(const std::string& text) {
  std::vector<WeightedItem> items;
  int rows = 0;
  int cols = 0;
  int first_line = 0;
  int line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string lineText = raw;
    const std::size_t hash = lineText.find('#');
    if (hash != std::string::npos) lineText.erase(hash);
    std::size_t first = lineText.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;

    const std::size_t bar = lineText.find('|');
    if (bar == std::string::npos) {
      throw ParseError("expected 'weight | [matrix]'", line_no,
                       static_cast<int>(first) + 1);
    }
    const std::string wtext = lineText.substr(0, bar);
    const char* wstart = wtext.c_str() + first;
    char* wend = nullptr;
    const double w = std::strtod(wstart, &wend);
    bool ok = wend != wstart;
    if (ok) {
      for (const char* p = wend; *p; ++p)
        if (!std::isspace(static_cast<unsigned char>(*p))) ok = false;
    }
    if (!ok) {
      throw ParseError("malformed weight", line_no,
                       static_cast<int>(first) + 1);
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ParseError("weights must be positive", line_no,
                       static_cast<int>(first) + 1);
    }

    const std::string mtext = lineText.substr(bar + 1);
    Scanner ms(mtext, line_no, static_cast<int>(bar) + 2);
    const Matrix m = ms.matrix_literal();
    ms.skip_ws();
    if (!ms.at_end()) ms.fail("trailing text after matrix");
    if (items.empty()) {
      rows = static_cast<int>(m.rows());
      cols = static_cast<int>(m.cols());
      first_line = line_no;
    } else if (m.rows() != rows || m.cols() != cols) {
      throw ShapeError("record at line " + std::to_string(line_no) + " is " +
                       std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", record at line " +
                       std::to_string(first_line) + " is " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
    items.push_back({Morphism(obj_of_dim(cols), obj_of_dim(rows), m), w});
  }
  if (items.empty())
    throw ParseError("weighted-set file has no records", 1, 1);
  return WeightedSet(obj_of_dim(cols), obj_of_dim(rows), std::move(items));
}

Morphism parse_matrix_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("invalid json: ") + e.what(), line, col);
  }
  if (!j.is_array() || j.empty())
    throw ParseError("expected a non-empty array of rows", 1, 1);
  std::vector<std::vector<Complex>> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty())
      throw ParseError("each row must be a non-empty array", 1, 1);
    rows.emplace_back();
    for (const auto& entry : row) {
      if (entry.is_number()) {
        rows.back().emplace_back(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2 &&
                 entry[0].is_number() && entry[1].is_number()) {
        rows.back().emplace_back(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw ParseError("entry must be a real or an [re, im] pair", 1, 1);
      }
    }
    if (rows.back().size() != rows[0].size()) {
      throw ShapeError("json matrix is ragged: row " +
                       std::to_string(rows.size()) + " has " +
                       std::to_string(rows.back().size()) +
                       " entries, row 1 has " + std::to_string(rows[0].size()));
    }
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[0].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return Morphism(obj_of_dim(static_cast<int>(m.cols())),
                  obj_of_dim(static_cast<int>(m.rows())), m);
}

}  // namespace bornforge
