#include <map>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "onomast/analytics.hpp"
#include "onomast/genderedness_table.hpp"
#include "onomast/name_normalizer.hpp"
#include "onomast/nt.hpp"

namespace {

using namespace onomast;

const std::vector<std::string> kLines = {
    "<http://www.wikidata.org/entity/Q42> <http://www.wikidata.org/prop/direct/P31> "
    "<http://www.wikidata.org/entity/Q5> .",
    "<http://www.wikidata.org/entity/Q463035> <http://www.w3.org/2000/01/rdf-schema#label> "
    "\"Douglas\"@en .",
    "<http://www.wikidata.org/entity/Q1> <http://schema.org/description> "
    "\"fran\\u00E7ais \\\"quoted\\\" text\"@fr .",
    "_:b0 <http://www.wikidata.org/prop/direct/P569> "
    "\"1952-03-11T00:00:00Z\"^^<http://www.w3.org/2001/XMLSchema#dateTime> .",
};

void BM_ParseLine(benchmark::State& state) {
  nt::LineParser parser;
  nt::TripleView view;
  std::size_t i = 0;
  std::size_t bytes = 0;
  for (auto _ : state) {
    const auto& line = kLines[i++ % kLines.size()];
    benchmark::DoNotOptimize(parser.parse(line, view));
    bytes += line.size();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_ParseLine);

void BM_Clean(benchmark::State& state) {
  const std::vector<std::string> names = {"J. Robert", "Mary-Anne", "Émile Zoë", "JRR Tolkien",
                                          "Łukasz", "Anne-Sophie Marie", "李 Wei", "Nguyễn Văn"};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(names::clean(names[i++ % names.size()]));
}
BENCHMARK(BM_Clean);

std::vector<extract::HumanEntityRecord> make_records(std::size_t n) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pool = {"Anna", "Robert", "Mary Jane", "José", "Zoë", "Li",
                                         "Jean-Pierre", "Sam", "Alex", "Chloé"};
  std::vector<extract::HumanEntityRecord> records;
  for (std::size_t e = 0; e < n; ++e) {
    extract::HumanEntityRecord r{e + 1, {}, rng() % 2 ? extract::Sex::Male : extract::Sex::Female};
    for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k) r.given_names.push_back(pool[rng() % pool.size()]);
    records.push_back(std::move(r));
  }
  return records;
}

void BM_Accumulate(benchmark::State& state) {
  const auto records = make_records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gender::accumulate(records, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Accumulate)->Arg(1000)->Arg(100000);

void BM_CumulativeDifference(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::map<gender::Genderedness, analytics::SpectrumPoint> by_g;
  while (by_g.size() < static_cast<std::size_t>(state.range(0))) {
    const std::uint64_t den = 1 + rng() % 100000;
    const auto g = gender::Genderedness::from_ratio(rng() % (den + 1), den);
    const std::uint64_t tokens = 1 + rng() % 50;
    by_g[g] = {g, 1, tokens, tokens, rng() % 10000 + 1};
  }
  std::vector<analytics::SpectrumPoint> points;
  for (const auto& [g, p] : by_g) points.push_back(p);
  for (auto _ : state) benchmark::DoNotOptimize(analytics::cumulative_difference(points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CumulativeDifference)->Arg(500)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
