// SPDX-License-Identifier: MIT
//
// facta command line. Talks to the engine exclusively through the C API.
//
// Subcommands: banzhaf, shapley, oracle, compile, gen, bench.
// Exit codes: 0 ok, 2 input error, 3 timeout, 4 internal error; every error
// path prints a single line "ERROR[<code>]: <message>" to stderr.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facta/facta.h"

namespace {

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail_c(int code) {
  throw CliError{code == FACTA_OK ? FACTA_ERR_INTERNAL : code,
                 facta_last_error()};
}

struct InstanceDeleter {
  void operator()(facta_instance* p) const { facta_instance_free(p); }
};
struct ResultDeleter {
  void operator()(facta_result* p) const { facta_result_free(p); }
};
struct TextDeleter {
  void operator()(char* p) const { facta_free_text(p); }
};
using InstancePtr = std::unique_ptr<facta_instance, InstanceDeleter>;
using ResultPtr = std::unique_ptr<facta_result, ResultDeleter>;
using TextPtr = std::unique_ptr<char, TextDeleter>;

std::string read_stdin() {
  std::ostringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '{';
  }
  return false;
}

InstancePtr load_instance(const std::string& input, const std::string& format) {
  facta_instance* raw = nullptr;
  int rc;
  if (input == "-") {
    std::string text = read_stdin();
    std::string fmt = format;
    if (fmt == "auto") fmt = looks_like_json(text) ? "json" : "dnf";
    rc = facta_load_string(text.c_str(), fmt.c_str(), &raw);
  } else if (format != "auto") {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw CliError{FACTA_ERR_INPUT, "cannot open file: " + input};
    std::ostringstream buf;
    buf << in.rdbuf();
    rc = facta_load_string(buf.str().c_str(), format.c_str(), &raw);
  } else {
    rc = facta_load_file(input.c_str(), &raw);
  }
  if (rc != FACTA_OK) fail_c(rc);
  return InstancePtr(raw);
}

void write_text(const std::string& path, const char* text) {
  if (path == "-") {
    std::fwrite(text, 1, std::strlen(text), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{FACTA_ERR_INPUT, "cannot open output file: " + path};
  out << text;
  if (!out)
    throw CliError{FACTA_ERR_INPUT, "cannot write output file: " + path};
}

// ----------------------------------------------------------------- run ----

struct RunArgs {
  std::string input = "-";
  std::string input_format = "auto";
  std::string output = "-";
  std::string format = "csv";
  std::string method = "gradient";
  bool no_lift = false;
  double timeout_secs = 0;
};

void add_common_input(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("-i,--input", args.input,
                  "lineage file; '-' reads standard input")
      ->capture_default_str();
  cmd->add_option("--input-format", args.input_format,
                  "json|dnf|auto (auto: by extension, or sniffed for stdin)")
      ->check(CLI::IsMember({"json", "dnf", "auto"}))
      ->capture_default_str();
}

int run_attribution_cmd(const RunArgs& args, bool shapley) {
  InstancePtr inst = load_instance(args.input, args.input_format);
  facta_run_options opts{};
  opts.shapley = shapley ? 1 : 0;
  opts.method = args.method.c_str();
  opts.no_lift = args.no_lift ? 1 : 0;
  opts.timeout_secs = args.timeout_secs;
  facta_result* raw = nullptr;
  int rc = facta_attribution(inst.get(), &opts, &raw);
  if (rc != FACTA_OK) fail_c(rc);
  ResultPtr res(raw);
  char* text = nullptr;
  rc = args.format == "json" ? facta_result_json(res.get(), &text)
                             : facta_result_csv(res.get(), &text);
  if (rc != FACTA_OK) fail_c(rc);
  TextPtr owned(text);
  write_text(args.output, text);
  return 0;
}

// ------------------------------------------------------------- compile ----

struct CompileArgs {
  RunArgs run;
  std::string dot_path;
  bool stats = false;
};

int run_compile_cmd(const CompileArgs& args) {
  InstancePtr inst = load_instance(args.run.input, args.run.input_format);
  facta_result* raw = nullptr;
  int rc = facta_compile(inst.get(), args.run.no_lift ? 1 : 0,
                         args.run.timeout_secs, &raw);
  if (rc != FACTA_OK) fail_c(rc);
  ResultPtr res(raw);
  if (!args.dot_path.empty()) {
    char* text = nullptr;
    rc = facta_result_dot(res.get(), &text);
    if (rc != FACTA_OK) fail_c(rc);
    TextPtr owned(text);
    write_text(args.dot_path, text);
  }
  if (args.stats || args.dot_path.empty()) {
    char* text = nullptr;
    rc = facta_result_json(res.get(), &text);
    if (rc != FACTA_OK) fail_c(rc);
    TextPtr owned(text);
    write_text(args.run.output, text);
  }
  return 0;
}

// ----------------------------------------------------------------- gen ----

struct GenArgs {
  int vars = 4;
  int clauses = 3;
  int width = 2;
  int duplication = 1;
  std::string monoid;
  long long value_min = 1;
  long long value_max = 9;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int run_gen_cmd(const GenArgs& args) {
  facta_generate_params p{};
  p.vars = args.vars;
  p.clauses = args.clauses;
  p.width = args.width;
  p.duplication = args.duplication;
  p.monoid = args.monoid.empty() ? nullptr : args.monoid.c_str();
  p.value_min = args.value_min;
  p.value_max = args.value_max;
  p.seed = args.seed;
  char* text = nullptr;
  int rc = facta_generate(&p, &text);
  if (rc != FACTA_OK) fail_c(rc);
  TextPtr owned(text);
  write_text(args.output, text);
  return 0;
}

// --------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string dir;
  std::string output = "-";
  std::string method = "gradient";
  bool shapley = false;
  bool no_lift = false;
  double timeout_secs = 0;
  int jobs = 0;  // 0: ATTR_JOBS env or hardware concurrency
};

struct BenchRow {
  std::string file;
  std::string kind;
  std::size_t vars = 0;
  std::string status = "ok";
  std::string dag_size;
  std::string tree_size;
  double compile_ms = 0;
  double attribution_ms = 0;
  double total_ms = 0;
};

double percentile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0;
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  if (rank == 0) rank = 1;
  return sorted[std::min(rank, sorted.size()) - 1];
}

std::string fmt_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

int run_bench_cmd(const BenchArgs& args) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(args.dir, ec)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".json" || ext == ".dnf")
      files.push_back(entry.path().string());
  }
  if (ec)
    throw CliError{FACTA_ERR_INPUT,
                   "cannot read corpus directory: " + args.dir};
  if (files.empty())
    throw CliError{FACTA_ERR_INPUT,
                   "no .json or .dnf instances in " + args.dir};
  std::sort(files.begin(), files.end());

  int jobs = args.jobs;
  if (jobs <= 0) {
    if (const char* env = std::getenv("ATTR_JOBS")) jobs = std::atoi(env);
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  jobs = std::min<int>(jobs, static_cast<int>(files.size()));

  std::vector<BenchRow> rows(files.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      BenchRow& row = rows[i];
      row.file = files[i];
      facta_instance* rawInst = nullptr;
      int rc = facta_load_file(files[i].c_str(), &rawInst);
      if (rc != FACTA_OK) {
        row.status = "ERROR[" + std::to_string(rc) + "]";
        continue;
      }
      InstancePtr inst(rawInst);
      row.kind = facta_instance_kind(inst.get());
      row.vars = facta_instance_variables(inst.get());
      facta_run_options opts{};
      opts.shapley = args.shapley ? 1 : 0;
      opts.method = args.method.c_str();
      opts.no_lift = args.no_lift ? 1 : 0;
      opts.timeout_secs = args.timeout_secs;
      auto start = std::chrono::steady_clock::now();
      facta_result* rawRes = nullptr;
      rc = facta_attribution(inst.get(), &opts, &rawRes);
      row.total_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      if (rc != FACTA_OK) {
        row.status = "ERROR[" + std::to_string(rc) + "]";
        continue;
      }
      ResultPtr res(rawRes);
      char* text = nullptr;
      if (facta_result_json(res.get(), &text) == FACTA_OK) {
        TextPtr owned(text);
        nlohmann::json doc = nlohmann::json::parse(text);
        row.compile_ms = doc["timings"]["compile_seconds"].get<double>() * 1e3;
        row.attribution_ms =
            doc["timings"]["attribution_seconds"].get<double>() * 1e3;
        if (!doc["tree"].is_null()) {
          row.dag_size = std::to_string(doc["tree"]["dag_size"].get<std::size_t>());
          row.tree_size = doc["tree"]["size"].get<std::string>();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::ostringstream out;
  out << "file,kind,vars,status,dag_size,tree_size,compile_ms,attribution_ms,"
         "total_ms\n";
  std::vector<double> ok_totals;
  for (const BenchRow& r : rows) {
    out << r.file << ',' << r.kind << ',' << r.vars << ',' << r.status << ','
        << r.dag_size << ',' << r.tree_size << ',' << fmt_ms(r.compile_ms)
        << ',' << fmt_ms(r.attribution_ms) << ',' << fmt_ms(r.total_ms)
        << '\n';
    if (r.status == "ok") ok_totals.push_back(r.total_ms);
  }
  std::sort(ok_totals.begin(), ok_totals.end());
  const std::pair<const char*, double> percentiles[] = {
      {"p50", 0.50}, {"p90", 0.90}, {"p95", 0.95}, {"p99", 0.99}};
  for (const auto& [name, q] : percentiles)
    out << name << ",summary,,,,,,," << fmt_ms(percentile(ok_totals, q))
        << '\n';
  out << "max,summary,,,,,,,"
      << fmt_ms(ok_totals.empty() ? 0 : ok_totals.back()) << '\n';
  write_text(args.output, out.str().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facta: exact Banzhaf/Shapley attribution over query lineage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return facta_version(); });

  RunArgs banzhafArgs, shapleyArgs, oracleArgs;
  CompileArgs compileArgs;
  GenArgs genArgs;
  BenchArgs benchArgs;

  auto addRun = [&](const char* name, const char* desc, RunArgs& args,
                    bool withMethod) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common_input(cmd, args);
    cmd->add_option("-o,--output", args.output, "output file; '-' = stdout")
        ->capture_default_str();
    cmd->add_option("--format", args.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (withMethod)
      cmd->add_option("--method", args.method,
                      "gradient|counts|oracle (counts: MIN/MAX only)")
          ->check(CLI::IsMember({"gradient", "counts", "oracle"}))
          ->capture_default_str();
    cmd->add_flag("--no-lift", args.no_lift,
                  "disable the lifting pre-pass (same values, larger trees)");
    cmd->add_option("--timeout-secs", args.timeout_secs,
                    "cooperative deadline; 0 = unlimited")
        ->capture_default_str();
    return cmd;
  };

  CLI::App* banzhaf = addRun(
      "banzhaf", "Banzhaf values of all lineage variables", banzhafArgs, true);
  CLI::App* shapley = addRun(
      "shapley", "Shapley (and Banzhaf) values of all lineage variables",
      shapleyArgs, true);
  CLI::App* oracle = addRun(
      "oracle", "brute-force attribution by exhaustive enumeration (<= 24 vars)",
      oracleArgs, false);

  CLI::App* compile =
      app.add_subcommand("compile", "compile lineage to a d-tree");
  add_common_input(compile, compileArgs.run);
  compile->add_option("-o,--output", compileArgs.run.output,
                      "stats output; '-' = stdout")
      ->capture_default_str();
  compile->add_option("--dot", compileArgs.dot_path,
                      "write a DOT digraph of the tree to this path");
  compile->add_flag("--stats", compileArgs.stats,
                    "print tree statistics (default unless --dot is given)");
  compile->add_flag("--no-lift", compileArgs.run.no_lift,
                    "disable the lifting pre-pass");
  compile->add_option("--timeout-secs", compileArgs.run.timeout_secs,
                      "cooperative deadline; 0 = unlimited")
      ->capture_default_str();

  CLI::App* gen =
      app.add_subcommand("gen", "generate a synthetic lineage instance");
  gen->add_option("--vars", genArgs.vars, "base variables")
      ->capture_default_str();
  gen->add_option("--clauses", genArgs.clauses, "base clauses")
      ->capture_default_str();
  gen->add_option("--width", genArgs.width, "base variables per clause")
      ->capture_default_str();
  gen->add_option("--dup", genArgs.duplication,
                  "interchangeable copies per base variable")
      ->capture_default_str();
  gen->add_option("--monoid", genArgs.monoid,
                  "sum|count|min|max (omit for boolean DNF)")
      ->check(CLI::IsMember({"", "sum", "count", "min", "max"}));
  gen->add_option("--vmin", genArgs.value_min, "minimum term value")
      ->capture_default_str();
  gen->add_option("--vmax", genArgs.value_max, "maximum term value")
      ->capture_default_str();
  gen->add_option("--seed", genArgs.seed, "RNG seed (output is deterministic)")
      ->capture_default_str();
  gen->add_option("-o,--output", genArgs.output, "output file; '-' = stdout")
      ->capture_default_str();

  CLI::App* bench = app.add_subcommand(
      "bench", "run attribution over a corpus directory, emit timing CSV");
  bench->add_option("--dir", benchArgs.dir, "corpus directory (*.json, *.dnf)")
      ->required();
  bench->add_option("-o,--output", benchArgs.output, "CSV output; '-' = stdout")
      ->capture_default_str();
  bench->add_option("--method", benchArgs.method, "gradient|counts|oracle")
      ->check(CLI::IsMember({"gradient", "counts", "oracle"}))
      ->capture_default_str();
  bench->add_flag("--shapley", benchArgs.shapley,
                  "also compute Shapley values (default: Banzhaf only)");
  bench->add_flag("--no-lift", benchArgs.no_lift, "disable lifting");
  bench->add_option("--timeout-secs", benchArgs.timeout_secs,
                    "per-instance deadline; 0 = unlimited")
      ->capture_default_str();
  bench->add_option("--jobs", benchArgs.jobs,
                    "worker threads (default: ATTR_JOBS env or logical cores)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "ERROR[2]: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (banzhaf->parsed()) return run_attribution_cmd(banzhafArgs, false);
    if (shapley->parsed()) return run_attribution_cmd(shapleyArgs, true);
    if (oracle->parsed()) {
      oracleArgs.method = "oracle";
      return run_attribution_cmd(oracleArgs, true);
    }
    if (compile->parsed()) return run_compile_cmd(compileArgs);
    if (gen->parsed()) return run_gen_cmd(genArgs);
    if (bench->parsed()) return run_bench_cmd(benchArgs);
  } catch (const CliError& e) {
    std::cerr << "ERROR[" << e.code << "]: " << e.message << std::endl;
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "ERROR[4]: " << e.what() << std::endl;
    return 4;
  }
  return 0;
}
