#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <matroid3/parallel.hpp>
#include <matroid3/store.hpp>

using namespace matroid3;

namespace {

std::string env_store_path() {
  const char* env = std::getenv("MATROID3_STORE");
  return env == nullptr ? std::string{} : std::string{env};
}

std::string require_path(const std::string& given, const char* flag) {
  if (!given.empty()) return given;
  std::string env = env_store_path();
  if (!env.empty()) return env;
  throw CLI::ValidationError(std::string(flag) + " is required (or set MATROID3_STORE)");
}

MultiplicityVector parse_mv(int n, const std::string& text) {
  MultiplicityVector mv;
  mv.n = n;
  mv.m.assign(static_cast<std::size_t>(n), 0);
  int k = 2;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (k >= n) throw CLI::ValidationError("--mv lists more entries than block sizes 2.." + std::to_string(n - 1));
    std::size_t used = 0;
    int count = std::stoi(item, &used);
    if (used != item.size() || count < 0) throw CLI::ValidationError("bad --mv entry '" + item + "'");
    mv.m[static_cast<std::size_t>(k)] = count;
    ++k;
  }
  long long pairs = 0;
  for (int s = 2; s < n; ++s) pairs += static_cast<long long>(mv.count(s)) * s * (s - 1) / 2;
  if (pairs != static_cast<long long>(n) * (n - 1) / 2)
    throw CLI::ValidationError("--mv covers " + std::to_string(pairs) + " pairs, expected " +
                               std::to_string(n * (n - 1) / 2));
  return mv;
}

int cmd_gen(int n, const std::string& mv_str, bool int_split, const GenerateOptions& opts,
            const std::string& out_path) {
  std::vector<MultiplicityVector> mvs;
  if (mv_str.empty())
    mvs = enumerate_multiplicity_vectors(n, int_split);
  else
    mvs.push_back(parse_mv(n, mv_str));

  std::vector<MatroidRecord> records;
  for (const MultiplicityVector& mv : mvs) {
    std::vector<TwoPartition> found = generate_all(n, mv, opts);
    std::sort(found.begin(), found.end(),
              [](const TwoPartition& a, const TwoPartition& b) { return blocklist_less(a.blocks, b.blocks); });
    for (const TwoPartition& M : found) records.push_back(base_record(M));
    std::printf("mv %s: %zu matroids\n", mv.to_string().c_str(), found.size());
  }
  write_records(out_path, records);
  std::printf("total: %zu records -> %s\n", records.size(), out_path.c_str());
  return 0;
}

int cmd_classify(const std::string& in_path, const std::string& battery_str) {
  std::vector<MatroidRecord> records = read_records(in_path);
  ClassifyOptions opts;
  if (!battery_str.empty()) opts.battery = parse_battery(battery_str);
  FreenessMemo memo;
  opts.memo = &memo;

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&records](std::size_t a, std::size_t b) { return records[a].n < records[b].n; });
  for (std::size_t idx : order) {
    TwoPartition M{records[idx].n, records[idx].blocks};
    records[idx] = classify(M, opts);
  }
  write_records(in_path, records);
  std::printf("classified %zu records -> %s\n", records.size(), in_path.c_str());
  return 0;
}

int cmd_query(const std::string& in_path, const std::string& where, bool count_only) {
  std::vector<MatroidRecord> records = read_records(in_path);
  std::vector<const MatroidRecord*> hits = run_query(records, where);
  if (count_only) {
    std::printf("%zu\n", hits.size());
  } else {
    for (const MatroidRecord* r : hits) std::printf("%s\n", record_to_line(*r).c_str());
  }
  return 0;
}

int cmd_terao(const std::string& in_path, int n) {
  std::vector<MatroidRecord> records = read_records(in_path);
  TeraoStages stages = terao_pipeline(records, n);
  std::printf("int-split: %lld\n", stages.int_split);
  std::printf("representable: %lld\n", stages.representable);
  std::printf("not inductively free: %lld\n", stages.not_inductively_free);
  std::printf("strongly balanced: %lld\n", stages.strongly_balanced);
  for (const MatroidRecord* r : stages.survivors)
    std::printf("survivor: %s\n", blocklist_to_string(r->blocks).c_str());
  return 0;
}

int cmd_stats(const std::string& in_path) {
  std::vector<MatroidRecord> records = read_records(in_path);
  std::printf("%4s %8s %9s %10s %6s %6s %6s %6s\n", "n", "total", "int-split", "classified", "ss",
              "if", "df", "rep");
  for (const StoreStatsRow& row : store_stats(records))
    std::printf("%4d %8lld %9lld %10lld %6lld %6lld %6lld %6lld\n", row.n, row.total, row.int_split,
                row.classified, row.supersolvable, row.inductively_free, row.divisionally_free,
                row.representable);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generation, classification and queries for simple rank 3 matroids"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate matroids into a record file");
  int gen_n = 0;
  gen->add_option("--n", gen_n, "number of atoms")->required()->check(CLI::Range(3, 20));
  std::string gen_mv;
  gen->add_option("--mv", gen_mv, "single multiplicity vector m2,m3,... (default: all)");
  bool gen_int_split = false;
  gen->add_flag("--int-split", gen_int_split, "only integrally splitting multiplicity vectors");
  GenerateOptions gen_opts;
  gen->add_option("--workers", gen_opts.workers, "worker threads")->check(CLI::Range(1, 256));
  gen->add_option("--fifo-capacity", gen_opts.fifo_capacity, "leaf queue capacity (0 = unbounded)");
  bool no_prune_parity = false;
  gen->add_flag("--no-prune-parity", no_prune_parity, "disable the deficiency parity prune");
  std::string gen_out;
  gen->add_option("--out", gen_out, "output record file (default: $MATROID3_STORE)");

  auto* classify_cmd = app.add_subcommand("classify", "fill in freeness flags and representability");
  std::string classify_in;
  classify_cmd->add_option("--in", classify_in, "record file (default: $MATROID3_STORE)");
  std::string classify_battery;
  classify_cmd->add_option("--battery", classify_battery, "field orders, e.g. 2,3,4,5,7,8,9,11,13");

  auto* query_cmd = app.add_subcommand("query", "filter records by a predicate");
  std::string query_in;
  query_cmd->add_option("--in", query_in, "record file (default: $MATROID3_STORE)");
  std::string query_where;
  query_cmd->add_option("--where", query_where, "predicate, e.g. \"n=12 and int-split\"")->required();
  bool query_count = false;
  query_cmd->add_flag("--count", query_count, "print only the number of matches");

  auto* terao_cmd = app.add_subcommand("terao", "run the four-stage freeness filter");
  std::string terao_in;
  terao_cmd->add_option("--in", terao_in, "record file (default: $MATROID3_STORE)");
  int terao_n = 0;
  terao_cmd->add_option("--n", terao_n, "number of atoms")->required()->check(CLI::Range(3, 20));

  auto* stats_cmd = app.add_subcommand("stats", "per-size summary of a record file");
  std::string stats_in;
  stats_cmd->add_option("--in", stats_in, "record file (default: $MATROID3_STORE)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gen_opts.prune_parity = !no_prune_parity;
      return cmd_gen(gen_n, gen_mv, gen_int_split, gen_opts, require_path(gen_out, "--out"));
    }
    if (classify_cmd->parsed()) return cmd_classify(require_path(classify_in, "--in"), classify_battery);
    if (query_cmd->parsed()) return cmd_query(require_path(query_in, "--in"), query_where, query_count);
    if (terao_cmd->parsed()) return cmd_terao(require_path(terao_in, "--in"), terao_n);
    if (stats_cmd->parsed()) return cmd_stats(require_path(stats_in, "--in"));
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
