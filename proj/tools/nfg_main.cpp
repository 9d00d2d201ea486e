// nfg: evaluate and transform normal factor graph documents.
//
// Exit codes: 0 success, 1 validation or contract error, 2 parse error
// (malformed document or command line).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfg/corpus.hpp"
#include "nfg/document.hpp"
#include "nfg/errors.hpp"
#include "nfg/evaluate.hpp"
#include "nfg/holographic.hpp"
#include "nfg/loop_series.hpp"
#include "nfg/parallel.hpp"
#include "nfg/sum_product.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kContractError = 1;
constexpr int kParseError = 2;

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_text(nfg::Complex v) {
  const std::string re = std::isinf(v.real()) && v.real() > 0 ? "null" : number(v.real());
  return "[" + re + ", " + number(v.imag()) + "]";
}

std::string values_text(const std::vector<nfg::Complex>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += complex_text(values[i]);
  }
  return out + "]";
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

nfg::Nfg load(const std::string& path) {
  auto graph = nfg::to_nfg(nfg::read_document(path));
  nfg::require_valid(graph);
  return graph;
}

nfg::Semiring semiring_named(const std::string& name) {
  return name == "min_sum" ? nfg::Semiring::min_sum() : nfg::Semiring::sum_product();
}

int cmd_eval(const std::string& path, const std::string& semiring) {
  const auto z = nfg::eval_external(load(path), semiring_named(semiring));
  std::string ports = "[";
  std::string shape = "[";
  for (std::size_t i = 0; i < z.variables.size(); ++i) {
    if (i) {
      ports += ", ";
      shape += ", ";
    }
    ports += quoted(z.variables[i]);
    shape += std::to_string(z.table.axes()[i].size());
  }
  std::cout << "{\"ports\": " << ports << "], \"shape\": " << shape
            << "], \"values\": " << values_text(z.table.values()) << "}\n";
  return kOk;
}

int cmd_sumproduct(const std::string& path, const std::string& edge, const std::string& semiring) {
  const auto graph = load(path);
  nfg::MessageState state;
  try {
    state = nfg::run_tree(graph, semiring_named(semiring));
  } catch (const nfg::CyclicGraph& e) {
    throw nfg::CyclicGraph(std::string(e.what()) + " (`nfg loops <file>`)");
  }
  std::vector<std::string> edges = state.edges();
  if (!edge.empty()) {
    if (!state.has_edge(edge)) {
      throw nfg::ContractViolation("no internal edge '" + edge + "'");
    }
    edges = {edge};
  }
  std::cout << "{\n  \"messages\": [";
  bool first = true;
  for (const auto& e : edges) {
    for (auto d : {nfg::Direction::kForward, nfg::Direction::kBackward}) {
      std::cout << (first ? "\n" : ",\n") << "    {\"edge\": " << quoted(e) << ", \"direction\": \""
                << nfg::to_string(d) << "\", \"values\": " << values_text(state.get(e, d)) << "}";
      first = false;
    }
  }
  std::cout << "\n  ],\n  \"marginals\": [";
  first = true;
  for (const auto& e : edges) {
    std::cout << (first ? "\n" : ",\n") << "    {\"edge\": " << quoted(e)
              << ", \"values\": " << values_text(nfg::marginal(state, e)) << "}";
    first = false;
  }
  std::cout << "\n  ],\n  \"global_z\": ";
  // A graph without edges is a single factor; its Z needs no messages.
  const nfg::Complex z = edges.empty() ? nfg::eval_scalar(graph, state.semiring())
                                       : nfg::global_z(state, edges.front());
  std::cout << complex_text(z) << "\n}\n";
  return kOk;
}

int cmd_dual(const std::string& path, const std::string& out) {
  const auto dual = nfg::fourier_dual(load(path));
  nfg::write_document(out, nfg::from_nfg(dual.graph));
  std::cout << "scale " << number(dual.scale) << "\n";
  return kOk;
}

int cmd_loops(const std::string& path, const nfg::LoopyOptions& options) {
  const auto graph = load(path);
  const auto state = nfg::run_loopy(graph, options);
  const auto terms = nfg::loop_series(graph, state);
  const auto& edges = state.edges();

  std::cout << "# edges (bit order):";
  for (const auto& e : edges) std::cout << " " << e;
  std::cout << "\n# iterations " << state.iterations << ", residual " << number(state.residual)
            << ", converged " << (state.converged ? "true" : "false") << "\n";
  std::printf("%-*s  %-16s  %s\n", static_cast<int>(std::max<std::size_t>(edges.size(), 6)),
              "subset", "kind", "value");
  nfg::Complex sum(0.0);
  for (const auto& t : terms) {
    std::string bits;
    for (std::size_t j = 0; j < edges.size(); ++j) bits += ((t.subset >> j) & 1U) ? '1' : '0';
    std::printf("%-*s  %-16s  %s\n", static_cast<int>(std::max<std::size_t>(edges.size(), 6)),
                bits.c_str(), std::string(nfg::to_string(t.kind)).c_str(),
                complex_text(t.value).c_str());
    sum += t.value;
  }
  const nfg::Complex z = nfg::eval_scalar(graph);
  std::cout << "Z " << complex_text(z) << "\nsum " << complex_text(sum)
            << "\nreconstruction_error " << number(std::abs(sum - z) / std::abs(z)) << "\n";
  if (!state.converged) {
    std::cerr << "warning: loopy iteration did not converge; terms still sum to Z but loose ends "
                 "need not vanish\n";
  }
  return kOk;
}

int cmd_verify_corpus(std::uint64_t seed, int trials) {
  bool all = true;
  for (const auto& r : nfg::verify_corpus(seed, trials)) {
    std::printf("%s %-22s trials %-3d max deviation %.3g (tolerance %.3g)\n",
                r.passed ? "PASS" : "FAIL", r.name.c_str(), r.trials, r.deviation, r.tolerance);
    all = all && r.passed;
  }
  return all ? kOk : kContractError;
}

void apply_thread_env() {
  const char* env = std::getenv("NFG_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "warning: ignoring NFG_THREADS='" << env << "' (expected a positive integer)\n";
    return;
  }
  nfg::set_thread_limit(static_cast<unsigned>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate and transform normal factor graph documents"};
  app.require_subcommand(1);

  std::string file;
  std::string semiring = "sum_product";
  std::string edge;
  std::string out;
  nfg::LoopyOptions loopy;
  std::uint64_t seed = nfg::kCorpusSeed;
  int trials = nfg::kCorpusTrials;

  auto* eval = app.add_subcommand("eval", "Print the partition function tensor");
  eval->add_option("file", file, "NFG document")->required();
  eval->add_option("--semiring", semiring)->check(CLI::IsMember({"sum_product", "min_sum"}));

  auto* sp = app.add_subcommand("sumproduct", "Run sum-product on a cycle-free graph");
  sp->add_option("file", file, "NFG document")->required();
  sp->add_option("--edge", edge, "Report only this edge");
  sp->add_option("--semiring", semiring)->check(CLI::IsMember({"sum_product", "min_sum"}));

  auto* dual = app.add_subcommand("dual", "Write the Fourier dual graph");
  dual->add_option("file", file, "NFG document")->required();
  dual->add_option("-o,--output", out, "Output document")->required();

  auto* loops = app.add_subcommand("loops", "Loopy sum-product followed by the loop expansion");
  loops->add_option("file", file, "NFG document")->required();
  loops->add_option("--iters", loopy.max_iters, "Maximum flooding rounds");
  loops->add_option("--tol", loopy.tol, "Convergence threshold on the message residual");
  loops->add_option("--damping", loopy.damping, "Weight of the previous message, in [0, 1)");

  auto* corpus = app.add_subcommand("verify-corpus", "Check the built-in identity suite");
  corpus->add_option("--seed", seed, "Generator seed");
  corpus->add_option("--trials", trials, "Random draws per identity")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  apply_thread_env();
  try {
    if (*eval) return cmd_eval(file, semiring);
    if (*sp) return cmd_sumproduct(file, edge, semiring);
    if (*dual) return cmd_dual(file, out);
    if (*loops) return cmd_loops(file, loopy);
    if (*corpus) return cmd_verify_corpus(seed, trials);
  } catch (const nfg::ParseError& e) {
    std::cerr << "parse error: " << file << ": " << e.what() << "\n";
    return kParseError;
  } catch (const nfg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kContractError;
  }
  return kOk;
}
