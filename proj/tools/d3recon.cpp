// d3recon: command-line front end.  Exit codes: 0 certified success,
// 1 not in class / not equal, 2 budget exceeded, 3 I/O or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "d3r/bruteforce.hpp"
#include "d3r/circuits.hpp"
#include "d3r/errors.hpp"
#include "d3r/gen.hpp"
#include "d3r/io.hpp"
#include "d3r/reconstruct.hpp"
#include "d3r/semrank.hpp"
#include "d3r/waring.hpp"

using namespace d3r;

namespace {

constexpr int kOk = 0, kNotInClass = 1, kBudget = 2, kIo = 3;

struct IoError : Error {
  using Error::Error;
};

struct Settings {
  std::uint64_t prime = 0;  // 0: take the file's prime
  size_t k = 2;
  unsigned degree = 0;
  std::vector<std::uint64_t> taus;
  std::uint64_t seed = 1;
  unsigned error_exponent = 40;
  size_t budget_assembly = 200000;
  size_t budget_B = 64;
  size_t budget_iterations = 512;
  std::string blocks;
  std::string output;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load(const std::string& path, const Settings& s) {
  try {
    return parse_document(read_file(path), s.prime ? std::optional<std::uint64_t>(s.prime) : std::nullopt);
  } catch (const ParseError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void emit(const Settings& s, const std::string& text) {
  if (s.output.empty() || s.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(s.output);
  if (!out) throw IoError("cannot write " + s.output);
  out << text;
}

// "0 1 2 | 3 4 5" or "0,1,2;3,4,5".
std::vector<std::vector<size_t>> parse_blocks(const std::string& text) {
  std::vector<std::vector<size_t>> out(1);
  std::string num;
  auto flush = [&] {
    if (!num.empty()) out.back().push_back(std::stoul(num));
    num.clear();
  };
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num += c;
    } else if (c == '|' || c == ';') {
      flush();
      out.emplace_back();
    } else {
      flush();
    }
  }
  flush();
  return out;
}

ReconstructOptions recon_options(const Settings& s) {
  ReconstructOptions opt;
  opt.taus = s.taus;
  opt.error_exponent = s.error_exponent;
  opt.preserve.max_B = s.budget_B;
  opt.preserve.max_iterations = s.budget_iterations;
  opt.preserve.error_exponent = s.error_exponent;
  opt.preserve.learner.assembly_budget = s.budget_assembly;
  opt.preserve.learner.error_exponent = s.error_exponent;
  opt.eval.learner = opt.preserve.learner;
  return opt;
}

unsigned degree_of(const MultiPoly& f, const Settings& s) {
  if (s.degree) return s.degree;
  return f.is_zero() ? 0 : static_cast<unsigned>(f.degree());
}

std::string join(const std::vector<size_t>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

int cmd_decompose_symmetric(const Settings& s, const std::string& path) {
  Document in = load(path, s);
  MultiPoly f = in.polynomial();
  Rng rng(s.seed);
  Oracle o = from_poly(f).with_degree_bound(degree_of(f, s));
  WaringOptions wo;
  wo.error_exponent = s.error_exponent;
  WaringDiagnostics diag;
  PowerCircuit P = reconstruct_sumpowsum(o, s.k, rng, wo, &diag);
  Document out = make_document(P);
  out.diagnostics = {{"command", "decompose-symmetric"},
                     {"terms", std::to_string(P.terms.size())},
                     {"queries", std::to_string(diag.queries)},
                     {"alpha", std::to_string(diag.alpha)},
                     {"fallback", diag.used_fallback ? "yes" : "no"},
                     {"pit", "pass"}};
  emit(s, print_document(out));
  return kOk;
}

int cmd_decompose_tensor(const Settings& s, const std::string& path) {
  Document in = load(path, s);
  MultiPoly f = in.polynomial();
  auto blocks = !s.blocks.empty() ? parse_blocks(s.blocks) : in.blocks;
  if (blocks.empty()) throw IoError("decompose-tensor needs a block partition (tensor payload or --blocks)");
  Rng rng(s.seed);
  Oracle o = from_poly(f).with_degree_bound(static_cast<unsigned>(blocks.size()));
  ReconstructDiagnostics diag;
  DepthThreeCircuit C = reconstruct_setml(o, s.k, blocks, rng, recon_options(s), &diag);
  Document out = make_document(C);
  out.blocks = blocks;
  out.diagnostics = {{"command", "decompose-tensor"},
                     {"fan_in", std::to_string(C.gates.size())},
                     {"queries", std::to_string(diag.queries)},
                     {"pit", "pass"}};
  emit(s, print_document(out));
  return kOk;
}

int cmd_reconstruct_ml(const Settings& s, const std::string& path) {
  Document in = load(path, s);
  MultiPoly f = in.polynomial();
  if (!f.is_multilinear()) throw NotInClass("input is not multilinear");
  Rng rng(s.seed);
  Oracle o = from_poly(f).with_degree_bound(degree_of(f, s));
  ReconstructDiagnostics diag;
  DepthThreeCircuit C = reconstruct_multilinear(o, s.k, rng, recon_options(s), &diag);
  Document out = make_document(C);
  out.diagnostics = {{"command", "reconstruct-ml"},
                     {"fan_in", std::to_string(C.gates.size())},
                     {"tau", std::to_string(diag.tau)},
                     {"B", join(diag.B)},
                     {"clusters", std::to_string(diag.clusters)},
                     {"attempts", std::to_string(diag.attempts)},
                     {"line_samples", std::to_string(diag.sample_count)},
                     {"queries", std::to_string(diag.queries)},
                     {"pit", "pass"}};
  emit(s, print_document(out));
  return kOk;
}

int cmd_rank(const Settings& s, const std::string& path, bool semantic) {
  Document in = load(path, s);
  Document out = in;
  out.diagnostics.clear();
  if (semantic) {
    Rng rng(s.seed);
    MultiPoly f = in.polynomial();
    out.diagnostics = {{"semantic_rank", f.is_zero() ? "0" : std::to_string(sem_rank(f, rng))}};
  } else {
    if (!in.circuit) throw IoError("syntactic rank needs a circuit payload");
    out.diagnostics = {{"syntactic_rank", std::to_string(syn_rank(*in.circuit))}};
  }
  emit(s, print_document(out));
  return kOk;
}

int cmd_pit(const Settings& s, const std::string& a, const std::string& b) {
  Document da = load(a, s);
  Document db = load(b, s);
  if (da.field != db.field) throw IoError("prime mismatch between the two files");
  if (da.num_vars != db.num_vars) throw IoError("variable count mismatch between the two files");
  Rng rng(s.seed);
  auto r = pit_equal(from_poly(da.polynomial()), from_poly(db.polynomial()), s.error_exponent, rng);
  emit(s, r.equal ? "equal\n" : "different\n");
  return r.equal ? kOk : kNotInClass;
}

int cmd_verify(const Settings& s, const std::string& input, const std::string& claim) {
  Document di = load(input, s);
  Document dc = load(claim, s);
  if (di.field != dc.field) throw IoError("prime mismatch between input and claim");
  if (di.num_vars != dc.num_vars) throw IoError("variable count mismatch between input and claim");
  std::vector<std::string> problems;
  if (dc.circuit && !dc.blocks.empty() && !dc.circuit->set_multilinear)
    problems.push_back("claimed circuit is not set-multilinear over its blocks");
  if (dc.circuit && dc.circuit->num_vars && !dc.blocks.empty() && dc.circuit->gates.size() &&
      !is_set_multilinear_shape(*dc.circuit))
    problems.push_back("claimed circuit has a gate outside the block shape");
  Rng rng(s.seed);
  auto r = pit_equal(from_poly(di.polynomial()), from_poly(dc.polynomial()), s.error_exponent, rng);
  if (!r.equal) problems.push_back("claimed decomposition does not compute the input");
  std::string text;
  if (problems.empty()) {
    text = "verified\n";
  } else {
    for (const auto& p : problems) text += "mismatch: " + p + "\n";
  }
  emit(s, text);
  return problems.empty() ? kOk : kNotInClass;
}

int cmd_gen(const Settings& s, const std::string& kind, size_t n, const std::string& dims_text,
            const std::string& truth) {
  Field F(s.prime ? s.prime : kMersenne61);
  Rng rng(s.seed);
  Document inst, planted;
  if (kind == "power") {
    unsigned d = s.degree ? s.degree : 5;
    PowerCircuit P = random_power_circuit(F, n, s.k, d, rng, false);
    planted = make_document(P);
    inst = make_document(expand(P));
  } else if (kind == "ml") {
    unsigned d = s.degree ? s.degree : 4;
    DepthThreeCircuit C = plant_ml_circuit(F, n, s.k, d, rng);
    planted = make_document(C);
    inst = make_document(expand(C));
  } else if (kind == "separated") {
    std::vector<ClusterShape> shapes;
    size_t each = n / s.k;
    if (each < 2) throw InvalidArgument("gen separated: need at least two variables per cluster");
    for (size_t i = 0; i < s.k; ++i) shapes.push_back({each, 1, each});
    PlantedInstance P = plant_separated(F, n, shapes, s.taus.empty() ? 4 : s.taus[0], rng);
    planted = make_document(P.circuit);
    inst = make_document(expand(P.circuit));
  } else if (kind == "tensor") {
    std::vector<size_t> dims;
    for (auto& b : parse_blocks(dims_text))
      for (size_t d : b) dims.push_back(d);
    if (dims.empty()) throw InvalidArgument("gen tensor needs --dims");
    DepthThreeCircuit C = random_setml_circuit(F, tensor_blocks(dims), [&] {
      size_t t = 0;
      for (size_t d : dims) t += d;
      return t;
    }(), s.k, rng);
    planted = make_document(C);
    inst = make_document(poly_to_tensor(expand(C), dims));
  } else {
    throw InvalidArgument("unknown generator \"" + kind + "\" (power, ml, separated, tensor)");
  }
  inst.diagnostics = {{"generator", kind}, {"seed", std::to_string(s.seed)}, {"k", std::to_string(s.k)}};
  emit(s, print_document(inst));
  if (!truth.empty()) {
    std::ofstream out(truth);
    if (!out) throw IoError("cannot write " + truth);
    out << print_document(planted);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of depth-3 arithmetic circuits over prime fields"};
  app.require_subcommand(1);
  Settings s;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--prime", s.prime, "expected prime of the input (or prime for gen)");
    sub->add_option("--k", s.k, "top fan-in bound");
    sub->add_option("--degree", s.degree, "degree bound (default: degree of the input)");
    sub->add_option("--tau", s.taus, "tau values to sweep (desk mode)");
    sub->add_option("--seed", s.seed, "random seed");
    sub->add_option("--error-exponent", s.error_exponent, "identity-test error exponent");
    sub->add_option("--budget-assembly", s.budget_assembly, "linear solves per learner call");
    sub->add_option("--budget-B", s.budget_B, "maximum size of the preserving set");
    sub->add_option("--budget-iterations", s.budget_iterations, "maximum growth steps of the preserving set");
    sub->add_option("--blocks", s.blocks, "variable partition, e.g. \"0 1 | 2 3\"");
    sub->add_option("-o,--output", s.output, "output file (default stdout)");
  };
  std::string in1, in2, kind, dims, truth;
  size_t n = 6;
  bool semantic = false, syntactic = false;

  auto* sym = app.add_subcommand("decompose-symmetric", "Waring decomposition of a polynomial");
  auto* ten = app.add_subcommand("decompose-tensor", "set-multilinear (tensor) decomposition");
  auto* rml = app.add_subcommand("reconstruct-ml", "multilinear depth-3 reconstruction");
  auto* rnk = app.add_subcommand("rank", "semantic or syntactic rank");
  auto* pit = app.add_subcommand("pit", "randomized identity test of two files");
  auto* ver = app.add_subcommand("verify", "check a claimed decomposition against an input");
  auto* gen = app.add_subcommand("gen", "planted instances");
  for (auto* sub : {sym, ten, rml, rnk, pit, ver, gen}) common(sub);
  for (auto* sub : {sym, ten, rml, rnk}) sub->add_option("input", in1, "input file ('-' for stdin)")->required();
  rnk->add_flag("--semantic", semantic, "semantic rank of the polynomial");
  rnk->add_flag("--syntactic", syntactic, "syntactic rank of the circuit");
  pit->add_option("first", in1)->required();
  pit->add_option("second", in2)->required();
  ver->add_option("input", in1)->required();
  ver->add_option("claim", in2)->required();
  gen->add_option("kind", kind, "power | ml | separated | tensor")->required();
  gen->add_option("--n", n, "number of variables");
  gen->add_option("--dims", dims, "tensor dimensions, e.g. \"2 2 2\"");
  gen->add_option("--truth", truth, "also write the planted circuit here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kIo;
  }

  try {
    if (sym->parsed()) return cmd_decompose_symmetric(s, in1);
    if (ten->parsed()) return cmd_decompose_tensor(s, in1);
    if (rml->parsed()) return cmd_reconstruct_ml(s, in1);
    if (rnk->parsed()) {
      if (semantic == syntactic) throw IoError("rank needs exactly one of --semantic, --syntactic");
      return cmd_rank(s, in1, semantic);
    }
    if (pit->parsed()) return cmd_pit(s, in1, in2);
    if (ver->parsed()) return cmd_verify(s, in1, in2);
    if (gen->parsed()) return cmd_gen(s, kind, n, dims, truth);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "not in class: " << e.what() << "\n";
    return kNotInClass;
  }
  return kIo;
}
