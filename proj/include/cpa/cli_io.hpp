#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cpa/cluster_engine.hpp"
#include "cpa/overlap_graph.hpp"

namespace cpa {

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;    // collection files
  std::vector<std::string> patterns;  // inline patterns
  int N = 10;
  int Q = -1;  // -1 = same as N
  std::string format = "tsv";
  bool force = false;
  int oracle_cap = 10;
  unsigned threads = 0;
  std::optional<std::filesystem::path> cache_dir;
};

// One pattern per line; blank lines and text after '#' are ignored.
PatternCollection parse_collection_text(const std::string& text);
PatternCollection read_collection_file(const std::filesystem::path& path);

// Digest of the canonical overlap graph, shared by collections with
// isomorphic graphs and hence equal cluster series.
std::string cache_key(const PatternCollection& collection);

// Cluster totals stored as TSV files named by key and bounds.  Writes go to a
// temporary file renamed into place.
class TableCache {
public:
  explicit TableCache(std::filesystem::path dir);
  // CPA_CACHE_DIR, if set.
  static std::optional<TableCache> from_environment();

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(const std::string& key, int max_n, int max_q) const;
  std::optional<CountGrid> load(const std::string& key, int max_n, int max_q) const;
  void store(const std::string& key, const CountGrid& grid) const;

private:
  std::filesystem::path dir_;
};

// Totals from the cache when present, computed and stored otherwise.
CountGrid cluster_totals_cached(const PatternCollection& collection, int max_n, int max_q, unsigned threads,
                                const TableCache* cache);

// Exit status 0 on success, 1 on a domain error or failed check, 2 on a usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpa
