#include "d3r/io.hpp"

#include <charconv>
#include <sstream>

#include "d3r/errors.hpp"

namespace d3r {

size_t TensorData::size() const {
  size_t s = 1;
  for (size_t d : dims) s *= d;
  return s;
}

namespace {

size_t flat_index(const std::vector<size_t>& dims, const std::vector<size_t>& idx) {
  if (idx.size() != dims.size()) throw InvalidArgument("tensor index has the wrong order");
  size_t pos = 0, stride = 1;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (idx[i] >= dims[i]) throw InvalidArgument("tensor index out of range");
    pos += idx[i] * stride;
    stride *= dims[i];
  }
  return pos;
}

}  // namespace

Fe& TensorData::at(const std::vector<size_t>& idx) { return data.at(flat_index(dims, idx)); }
Fe TensorData::at(const std::vector<size_t>& idx) const { return data.at(flat_index(dims, idx)); }

std::vector<std::vector<size_t>> tensor_blocks(const std::vector<size_t>& dims) {
  std::vector<std::vector<size_t>> blocks;
  size_t next = 0;
  for (size_t d : dims) {
    std::vector<size_t> b;
    for (size_t i = 0; i < d; ++i) b.push_back(next++);
    blocks.push_back(b);
  }
  return blocks;
}

MultiPoly tensor_to_poly(const TensorData& T) {
  size_t n = 0;
  for (size_t d : T.dims) n += d;
  MultiPoly f(T.field, n);
  std::vector<size_t> idx(T.dims.size(), 0);
  for (size_t pos = 0; pos < T.data.size(); ++pos) {
    size_t rest = pos;
    for (size_t i = 0; i < T.dims.size(); ++i) {
      idx[i] = rest % T.dims[i];
      rest /= T.dims[i];
    }
    if (T.data[pos] == 0) continue;
    Monomial m(n, 0);
    size_t off = 0;
    for (size_t i = 0; i < T.dims.size(); ++i) {
      m[off + idx[i]] = 1;
      off += T.dims[i];
    }
    f.add_term(m, T.data[pos]);
  }
  return f;
}

TensorData poly_to_tensor(const MultiPoly& f, const std::vector<size_t>& dims) {
  TensorData T;
  T.field = f.field();
  T.dims = dims;
  T.data.assign(T.size(), 0);
  size_t n = 0;
  for (size_t d : dims) n += d;
  if (f.num_vars() != n) throw InvalidArgument("poly_to_tensor: variable count does not match the dimensions");
  for (const auto& [m, c] : f.terms()) {
    std::vector<size_t> idx;
    size_t off = 0;
    for (size_t d : dims) {
      size_t hits = 0, at = 0;
      for (size_t j = 0; j < d; ++j) {
        if (m[off + j] > 1) throw InvalidArgument("poly_to_tensor: not set-multilinear");
        if (m[off + j] == 1) {
          ++hits;
          at = j;
        }
      }
      if (hits != 1) throw InvalidArgument("poly_to_tensor: not set-multilinear");
      idx.push_back(at);
      off += d;
    }
    T.at(idx) = c;
  }
  return T;
}

MultiPoly Document::polynomial() const {
  if (poly) return *poly;
  if (circuit) return expand(*circuit);
  if (power) return expand(*power);
  if (tensor) return tensor_to_poly(*tensor);
  throw InvalidArgument("document has no payload");
}

// ---- parsing -----------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == ':' || c == '|') {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ':' &&
           line[j] != '|' && line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines_.push_back(line);
  }

  Document run(std::optional<std::uint64_t> expected_prime) {
    Document doc;
    next_line();
    if (at_eof() || tok_.size() != 1 || tok_[0].text != "d3recon/1") fail("expected header \"d3recon/1\"", 1);
    bool have_prime = false, have_vars = false;
    for (next_line(); !at_eof(); next_line()) {
      const std::string key = tok_[0].text;
      if (key == "prime") {
        expect_count(2);
        std::uint64_t p = unsigned_at(1);
        if (p < 2) fail("prime must be at least 2", tok_[1].column);
        if (expected_prime && *expected_prime != p)
          fail("prime mismatch: expected " + std::to_string(*expected_prime), tok_[1].column);
        doc.field = Field(p);
        have_prime = true;
      } else if (key == "vars") {
        expect_count(2);
        doc.num_vars = unsigned_at(1);
        have_vars = true;
      } else if (key == "blocks") {
        doc.blocks.assign(1, {});
        for (size_t i = 1; i < tok_.size(); ++i) {
          if (tok_[i].text == "|") {
            doc.blocks.emplace_back();
          } else {
            size_t v = unsigned_at(i);
            if (have_vars && v >= doc.num_vars) fail("block variable out of range", tok_[i].column);
            doc.blocks.back().push_back(v);
          }
        }
      } else if (key == "poly" || key == "circuit" || key == "power" || key == "tensor") {
        if (!have_prime) fail("payload before \"prime\"", tok_[0].column);
        if (key != "tensor" && !have_vars) fail("payload before \"vars\"", tok_[0].column);
        if (doc.poly || doc.circuit || doc.power || doc.tensor) fail("second payload section", tok_[0].column);
        if (key == "poly") parse_poly(doc);
        if (key == "circuit") parse_circuit(doc);
        if (key == "power") parse_power(doc);
        if (key == "tensor") parse_tensor(doc, have_vars);
      } else if (key == "diagnostics") {
        expect_count(1);
        parse_diagnostics(doc);
      } else {
        fail("unknown keyword \"" + key + "\"", tok_[0].column);
      }
    }
    if (!doc.poly && !doc.circuit && !doc.power && !doc.tensor) fail("no payload section", 1);
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, size_t column) const {
    throw ParseError(msg, line_no_ == 0 ? 1 : line_no_, column);
  }

  bool at_eof() const { return line_no_ > lines_.size(); }

  // Advances to the next non-blank line.
  void next_line() {
    while (line_no_ < lines_.size()) {
      ++line_no_;
      tok_ = tokenize(lines_[line_no_ - 1]);
      if (!tok_.empty()) return;
    }
    line_no_ = lines_.size() + 1;
    tok_.clear();
  }

  void expect_count(size_t n) const {
    if (tok_.size() != n)
      fail("expected " + std::to_string(n) + " fields, found " + std::to_string(tok_.size()),
           tok_.empty() ? 1 : tok_[std::min(n, tok_.size()) - 1].column);
  }

  std::uint64_t unsigned_at(size_t i) const {
    const Token& t = tok_.at(i);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail("expected a nonnegative integer", t.column);
    return v;
  }

  Fe field_at(const Field& F, size_t i) const {
    const Token& t = tok_.at(i);
    bool neg = !t.text.empty() && t.text[0] == '-';
    const char* b = t.text.data() + (neg ? 1 : 0);
    const char* e = t.text.data() + t.text.size();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (b == e || ec != std::errc() || ptr != e) fail("expected an integer", t.column);
    Fe r = v % F.p();
    return neg ? F.neg(r) : r;
  }

  void require_line() {
    next_line();
    if (at_eof()) throw ParseError("unexpected end of input (missing \"end\")", lines_.size(), 1);
  }

  bool is_end() const { return tok_.size() == 1 && tok_[0].text == "end"; }

  void parse_poly(Document& doc) {
    expect_count(1);
    MultiPoly f(doc.field, doc.num_vars);
    for (require_line(); !is_end(); require_line()) {
      if (tok_.size() != doc.num_vars + 2 || tok_[1].text != ":")
        fail("expected \"coeff: e1 ... e" + std::to_string(doc.num_vars) + "\"", tok_[0].column);
      Fe c = field_at(doc.field, 0);
      Monomial m(doc.num_vars, 0);
      for (size_t i = 0; i < doc.num_vars; ++i) {
        std::uint64_t e = unsigned_at(i + 2);
        if (e > 65535) fail("exponent too large", tok_[i + 2].column);
        m[i] = static_cast<std::uint16_t>(e);
      }
      f.add_term(m, c);
    }
    doc.poly = f;
  }

  // "<c1> ... <cn> | <constant>" starting at token `from`.
  LinearForm parse_form(const Field& F, size_t n, size_t from) const {
    if (tok_.size() != from + n + 2 || tok_[from + n].text != "|")
      fail("expected " + std::to_string(n) + " coefficients, \"|\" and a constant",
           tok_[std::min(from, tok_.size() - 1)].column);
    LinearForm l(Vec(n, 0), field_at(F, from + n + 1));
    for (size_t i = 0; i < n; ++i) l.coeffs[i] = field_at(F, from + i);
    return l;
  }

  void parse_circuit(Document& doc) {
    expect_count(1);
    DepthThreeCircuit C;
    C.field = doc.field;
    C.num_vars = doc.num_vars;
    for (require_line(); !is_end(); require_line()) {
      if (tok_[0].text == "gate") {
        expect_count(2);
        ProductGate g;
        g.scalar = field_at(doc.field, 1);
        C.gates.push_back(g);
      } else if (tok_[0].text == "form") {
        if (C.gates.empty()) fail("form before any gate", tok_[0].column);
        C.gates.back().forms.push_back(parse_form(doc.field, doc.num_vars, 1));
      } else {
        fail("expected \"gate\", \"form\" or \"end\"", tok_[0].column);
      }
    }
    C.multilinear = gates_variable_disjoint(C);
    if (!doc.blocks.empty()) {
      C.blocks = doc.blocks;
      C.set_multilinear = true;
      C.set_multilinear = is_set_multilinear_shape(C);
      if (!C.set_multilinear) C.blocks.clear();
    }
    doc.circuit = C;
  }

  void parse_power(Document& doc) {
    expect_count(2);
    std::uint64_t d = unsigned_at(1);
    if (d > 65535) fail("degree too large", tok_[1].column);
    PowerCircuit P;
    P.field = doc.field;
    P.num_vars = doc.num_vars;
    P.degree = static_cast<unsigned>(d);
    for (require_line(); !is_end(); require_line()) {
      if (tok_[0].text != "term" || tok_.size() < 3 || tok_[2].text != ":")
        fail("expected \"term <c>: <form>\"", tok_[0].column);
      PowerTerm t;
      t.c = field_at(doc.field, 1);
      t.form = parse_form(doc.field, doc.num_vars, 3);
      P.terms.push_back(t);
    }
    doc.power = P;
  }

  void parse_tensor(Document& doc, bool have_vars) {
    if (tok_.size() < 2) fail("tensor needs at least one dimension", tok_[0].column);
    TensorData T;
    T.field = doc.field;
    size_t total = 0;
    for (size_t i = 1; i < tok_.size(); ++i) {
      size_t d = unsigned_at(i);
      if (d == 0) fail("zero tensor dimension", tok_[i].column);
      T.dims.push_back(d);
      total += d;
    }
    if (have_vars && total != doc.num_vars) fail("tensor dimensions do not add up to vars", tok_[0].column);
    if (T.size() > (size_t{1} << 24)) fail("tensor too large", tok_[0].column);
    doc.num_vars = total;
    T.data.assign(T.size(), 0);
    size_t order = T.dims.size();
    for (require_line(); !is_end(); require_line()) {
      if (tok_.size() != order + 2 || tok_[order].text != ":")
        fail("expected \"i1 ... i" + std::to_string(order) + ": value\"", tok_[0].column);
      std::vector<size_t> idx;
      for (size_t i = 0; i < order; ++i) {
        size_t v = unsigned_at(i);
        if (v >= T.dims[i]) fail("tensor index out of range", tok_[i].column);
        idx.push_back(v);
      }
      T.at(idx) = field_at(doc.field, order + 1);
    }
    if (doc.blocks.empty()) doc.blocks = tensor_blocks(T.dims);
    doc.tensor = T;
  }

  void parse_diagnostics(Document& doc) {
    for (require_line(); !is_end(); require_line()) {
      const std::string& raw = lines_[line_no_ - 1];
      size_t start = tok_[0].column - 1 + tok_[0].text.size();
      std::string value = start < raw.size() ? raw.substr(start) : "";
      size_t a = value.find_first_not_of(" \t");
      size_t b = value.find_last_not_of(" \t\r");
      value = a == std::string::npos ? "" : value.substr(a, b - a + 1);
      doc.diagnostics.emplace_back(tok_[0].text, value);
    }
  }

  std::vector<std::string> lines_;
  size_t line_no_ = 0;
  std::vector<Token> tok_;
};

void print_form(std::ostream& out, const LinearForm& l) {
  for (Fe c : l.coeffs) out << ' ' << c;
  out << " | " << l.constant;
}

}  // namespace

Document parse_document(const std::string& text, std::optional<std::uint64_t> expected_prime) {
  return Parser(text).run(expected_prime);
}

std::string print_document(const Document& doc) {
  std::ostringstream out;
  out << "d3recon/1\n";
  out << "prime " << doc.field.p() << "\n";
  out << "vars " << doc.num_vars << "\n";
  if (!doc.blocks.empty() && !doc.tensor) {
    out << "blocks";
    for (size_t b = 0; b < doc.blocks.size(); ++b) {
      if (b) out << " |";
      for (size_t v : doc.blocks[b]) out << ' ' << v;
    }
    out << "\n";
  }
  if (doc.poly) {
    out << "poly\n";
    for (const auto& [m, c] : doc.poly->terms()) {
      out << c << ':';
      for (auto e : m) out << ' ' << e;
      out << "\n";
    }
  } else if (doc.circuit) {
    out << "circuit\n";
    for (const auto& g : doc.circuit->gates) {
      out << "gate " << g.scalar << "\n";
      for (const auto& l : g.forms) {
        out << "form";
        print_form(out, l);
        out << "\n";
      }
    }
  } else if (doc.power) {
    out << "power " << doc.power->degree << "\n";
    for (const auto& t : doc.power->terms) {
      out << "term " << t.c << ":";
      print_form(out, t.form);
      out << "\n";
    }
  } else if (doc.tensor) {
    const TensorData& T = *doc.tensor;
    out << "tensor";
    for (size_t d : T.dims) out << ' ' << d;
    out << "\n";
    for (size_t pos = 0; pos < T.data.size(); ++pos) {
      if (T.data[pos] == 0) continue;
      size_t rest = pos;
      for (size_t i = 0; i < T.dims.size(); ++i) {
        out << (i ? " " : "") << rest % T.dims[i];
        rest /= T.dims[i];
      }
      out << ": " << T.data[pos] << "\n";
    }
  }
  out << "end\n";
  if (!doc.diagnostics.empty()) {
    out << "diagnostics\n";
    for (const auto& [k, v] : doc.diagnostics) out << k << (v.empty() ? "" : " ") << v << "\n";
    out << "end\n";
  }
  return out.str();
}

Document make_document(const MultiPoly& f) {
  Document d;
  d.field = f.field();
  d.num_vars = f.num_vars();
  d.poly = f;
  return d;
}

Document make_document(const DepthThreeCircuit& C) {
  Document d;
  d.field = C.field;
  d.num_vars = C.num_vars;
  if (C.set_multilinear) d.blocks = C.blocks;
  d.circuit = C;
  return d;
}

Document make_document(const PowerCircuit& P) {
  Document d;
  d.field = P.field;
  d.num_vars = P.num_vars;
  d.power = P;
  return d;
}

Document make_document(const TensorData& T) {
  Document d;
  d.field = T.field;
  for (size_t x : T.dims) d.num_vars += x;
  d.blocks = tensor_blocks(T.dims);
  d.tensor = T;
  return d;
}

}  // namespace d3r
