#include <fstream>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "qva/examples.hpp"
#include "qva/io.hpp"

using namespace qva;

namespace {

std::vector<std::pair<std::string, int>> parse_generators(const std::string& text) {
  std::vector<std::pair<std::string, int>> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0) throw Error("generators are name:weight, got " + item);
    out.push_back({item.substr(0, colon), std::stoi(item.substr(colon + 1))});
  }
  if (out.empty()) throw Error("no generators");
  return out;
}

std::pair<int, int> parse_range(const std::string& s) {
  std::smatch m;
  static const std::regex kRange(R"(\[?\s*(-?\d+)\s*[:,]\s*(-?\d+)\s*\]?)");
  if (!std::regex_match(s, m, kRange)) throw Error("n-range is lo:hi, got " + s);
  return {std::stoi(m[1]), std::stoi(m[2])};
}

std::optional<std::pair<unsigned, int>> parse_triples(const std::string& s) {
  if (s == "all") return std::nullopt;
  std::smatch m;
  static const std::regex kSample(R"(sample\((\d+),(\d+)\))");
  if (!std::regex_match(s, m, kSample)) throw Error("triples is all or sample(seed,count), got " + s);
  return std::make_pair(static_cast<unsigned>(std::stoul(m[1])), std::stoi(m[2]));
}

void table_decompose(const Instance& inst, int a, int b) {
  const auto& sp = inst.sf->space();
  std::cout << "[Y(" << sp.name(a) << ",z), Y(" << sp.name(b) << ",w)] = sum_j c^j(w) d_w^j delta(z,w) / j!\n";
  auto cs = commutator_states(inst, a, b);
  if (cs.empty()) std::cout << "(no terms)\n";
  for (size_t j = 0; j < cs.size(); ++j) std::cout << "c^" << j << ": Y(" << cs[j] << ", w)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for vertex algebras and their braided deformations on graded truncations"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Write an instance file");
  std::string kind, level = "1", generators = "u:1", braiding = "none", out_path;
  int cutoff = 3, h_order = 1;
  build->add_option("kind", kind, "affine_sl2 | commutative | vacuum")->required();
  build->add_option("--level,-k", level, "affine level, a rational");
  build->add_option("--cutoff,-D", cutoff, "weight cutoff");
  build->add_option("--h-order,-M", h_order, "work modulo h^M");
  build->add_option("--generators", generators, "commutative generators name:weight,...");
  build->add_option("--braiding", braiding, "none | trivial | seeded:N | swap:M");
  build->add_option("--output,-o", out_path, "file to write; standard output when absent");

  auto* check = app.add_subcommand("check", "Run checks and print one JSON record per line");
  std::string inst_path, suite = "classical", n_range, triples = "all";
  std::optional<int> check_order, max_witness;
  int workers = 0;
  check->add_option("instance", inst_path)->required();
  check->add_option("--suite", suite, "classical | quantum | equivalence | a check name");
  check->add_option("--h-order", check_order, "truncate to a lower h-order");
  check->add_option("--n-range", n_range, "lo:hi");
  check->add_option("--max-witness", max_witness, "largest locality order tried");
  check->add_option("--triples", triples, "all | sample(seed,count)");
  check->add_option("--workers", workers, "worker threads; QVA_WORKERS or all cores when absent");

  auto* table = app.add_subcommand("table", "Print structure constants");
  std::string table_path;
  std::vector<std::string> query;
  table->add_option("instance", table_path)->required();
  table->add_option("query", query, "Y i n j | S i j | decompose a b")->required()->expected(1, 4);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      BuildParams params;
      params.kind = kind;
      params.level = level;
      params.cutoff = cutoff;
      params.h_order = h_order;
      params.generators = parse_generators(generators);
      params.braiding = braiding;
      Instance inst = build_instance(params);
      std::string text = emit_instance(inst);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error("cannot write " + out_path);
        f << text;
      }
      return 0;
    }
    if (check->parsed()) {
      Instance inst = read_instance(inst_path, check_order);
      RunOptions opt;
      opt.suite = suite;
      if (!n_range.empty()) opt.n_range = parse_range(n_range);
      opt.max_witness = max_witness;
      opt.sample = parse_triples(triples);
      opt.workers = workers;
      auto records = run_checks(inst, opt);
      int fails = 0, control_fails = 0;
      for (const auto& r : records) {
        std::cout << report_json(r) << "\n";
        if (r.failed()) ++(r.control ? control_fails : fails);
      }
      std::cerr << records.size() << " checks, " << fails << " failed, " << control_fails
                << " control failures\n";
      return exit_code(records);
    }
    Instance inst = read_instance(table_path);
    const StateField& sf = *inst.sf;
    const std::string& what = query.at(0);
    if (what == "Y" && query.size() == 4) {
      int i = basis_index(sf, query[1]), j = basis_index(sf, query[3]);
      std::cout << pretty(sf.space(), sf.product(i, std::stoi(query[2]), j)) << "\n";
    } else if (what == "S" && query.size() == 3) {
      int i = basis_index(sf, query[1]), j = basis_index(sf, query[2]);
      std::cout << "identity: " << pretty(sf.space(), TensorElement::basis2(i, j)) << "\n";
      if (inst.S)
        for (const auto& [m, t] : inst.S->tail(i, j)) std::cout << "z^" << m << ": " << pretty(sf.space(), t) << "\n";
    } else if (what == "decompose" && query.size() == 3) {
      table_decompose(inst, basis_index(sf, query[1]), basis_index(sf, query[2]));
    } else {
      throw Error("query is Y i n j, S i j or decompose a b");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
