// bulktri: approximate triangle counting over a batched edge stream.
//
//   bulktri count --input g.txt -r 100000 -s 16384 --trials 5 --exact-check
//   bulktri bench --gnp 200000,0.0005 --sweep batch --values 1000,10000,100000
//   bulktri gen --kind powerlaw -n 100000 --exponent 2.3 -o g.txt
//   bulktri exact --input g.txt

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bulktri/oracle.hpp"
#include "bulktri/stream.hpp"
#include "bulktri/synthetic.hpp"

using namespace bulktri;

namespace {

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoull(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate triangle counting over batched edge streams"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  double epsilon = 0.0;
  std::uint64_t tau_lb = 0;
  std::size_t groups = 0;

  auto* count = app.add_subcommand("count", "estimate the triangle count of an edge list");
  count->add_option("-i,--input", cfg.input_path, "edge list (u v per line, # comments)")
      ->required()
      ->check(CLI::ExistingFile);
  count->add_option("-r,--estimators", cfg.estimators, "number of estimators")
      ->capture_default_str();
  count->add_option("-s,--batch-size", cfg.batch_size, "edges per batch")->capture_default_str();
  count->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  count->add_option("--trials", cfg.trials, "independent trials")->capture_default_str();
  count->add_option("-w,--workers", cfg.workers, "worker threads (0 = all)")
      ->capture_default_str();
  count->add_option("--epsilon", epsilon, "relative error target; sizes r with --tau-lower-bound");
  count->add_option("--delta", cfg.delta, "failure probability")->capture_default_str();
  count->add_option("--tau-lower-bound", tau_lb, "guess for a lower bound on the triangle count");
  count->add_option("--groups", groups, "median-of-means groups (default ceil(8 ln(1/delta)))");
  count->add_flag("--exact-check", cfg.exact_check, "also count exactly and report mean deviation");
  count->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  BenchConfig bench;
  std::string bench_input;
  std::string gnp_spec;
  std::string sweep = "batch";
  std::string values = "1000,10000,100000";
  auto* bench_cmd = app.add_subcommand("bench", "throughput sweep over batch sizes or workers");
  auto* bench_in = bench_cmd->add_option("-i,--input", bench_input, "edge list")
                       ->check(CLI::ExistingFile);
  auto* bench_gnp =
      bench_cmd->add_option("--gnp", gnp_spec, "synthetic G(n,p) stream as n,p");
  bench_in->excludes(bench_gnp);
  bench_cmd->add_option("-r,--estimators", bench.estimators)->capture_default_str();
  bench_cmd->add_option("-s,--batch-size", bench.batch_size, "batch size for worker sweeps")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("-w,--workers", bench.workers, "workers for batch sweeps (0 = all)")
      ->capture_default_str();
  bench_cmd->add_option("--sweep", sweep, "batch or workers")
      ->check(CLI::IsMember({"batch", "workers"}))
      ->capture_default_str();
  bench_cmd->add_option("--values", values, "comma-separated sweep values")->capture_default_str();
  bench_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  std::string kind = "gnp";
  std::uint64_t n = 1000;
  double p = 0.01;
  double exponent = 2.5;
  std::uint64_t min_degree = 2;
  std::uint64_t gen_seed = 1;
  std::string output;
  auto* gen = app.add_subcommand("gen", "write a synthetic edge list");
  gen->add_option("--kind", kind, "gnp or powerlaw")
      ->check(CLI::IsMember({"gnp", "powerlaw"}))
      ->capture_default_str();
  gen->add_option("-n,--vertices", n)->capture_default_str();
  gen->add_option("-p,--prob", p, "edge probability (gnp)")->capture_default_str();
  gen->add_option("--exponent", exponent, "degree exponent (powerlaw)")->capture_default_str();
  gen->add_option("--min-degree", min_degree, "(powerlaw)")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("-o,--output", output)->required();

  std::string exact_input;
  auto* exact = app.add_subcommand("exact", "exact triangle count (in memory)");
  exact->add_option("-i,--input", exact_input)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*count) {
      if (epsilon > 0.0) cfg.epsilon = epsilon;
      if (tau_lb > 0) cfg.tau_lower_bound = tau_lb;
      if (groups > 0) cfg.groups = groups;
      cfg.format = format == "json" ? OutputFormat::json : OutputFormat::text;
      const auto report = run_count(cfg);
      std::cout << (cfg.format == OutputFormat::json ? format_json(report)
                                                     : format_text(report));
      if (cfg.format == OutputFormat::json) std::cout << '\n';
      return report.all_ok() ? 0 : 1;
    }
    if (*bench_cmd) {
      std::vector<Edge> stream;
      if (!bench_input.empty()) {
        stream = load_edge_list(bench_input);
      } else if (!gnp_spec.empty()) {
        const auto comma = gnp_spec.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("--gnp expects n,p");
        stream = generate_gnp(std::stoull(gnp_spec.substr(0, comma)),
                              std::stod(gnp_spec.substr(comma + 1)), bench.seed);
      } else {
        throw std::invalid_argument("bench needs --input or --gnp");
      }
      bench.sweep = sweep == "batch" ? SweepKind::batch_size : SweepKind::workers;
      bench.values = parse_list(values);
      const auto rows = run_benchmark(stream, bench);
      if (format == "json")
        std::cout << format_json(rows, bench) << '\n';
      else
        std::cout << format_text(rows, bench.sweep);
      return 0;
    }
    if (*gen) {
      const auto edges = kind == "gnp" ? generate_gnp(n, p, gen_seed)
                                       : generate_powerlaw(n, exponent, min_degree, gen_seed);
      std::ostringstream header;
      header << kind << " n=" << n;
      if (kind == "gnp")
        header << " p=" << p;
      else
        header << " exponent=" << exponent << " min_degree=" << min_degree;
      header << " seed=" << gen_seed << " m=" << edges.size();
      write_edge_list(output, edges, header.str());
      std::cerr << "wrote " << edges.size() << " edges to " << output << '\n';
      return 0;
    }
    if (*exact) {
      std::cout << exact_triangle_count(load_edge_list(exact_input)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
