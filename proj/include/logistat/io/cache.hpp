#pragma once

#include <optional>
#include <string>

#include "logistat/io/serialize.hpp"
#include "logistat/tuner/tuner.hpp"

namespace logistat::io {

// Content-addressed store of tuned parameters: key = FNV-1a of the canonical request JSON.
// Hits are re-verified before use; a hit that fails verification is recomputed and overwritten.
class TuneCache {
 public:
  explicit TuneCache(std::string dir) : dir_(std::move(dir)) {}

  static Json request(const DyadicInterval& bracket, const TargetProfile& profile, std::uint64_t frozen_bits,
                      const TuneOptions& opts);
  static std::string key(const Json& request);

  std::optional<TunedParameter> load(const Json& request, const TargetProfile& profile, const TuneOptions& opts);
  void store(const Json& request, const TunedParameter& t);

  unsigned hits() const { return hits_; }
  unsigned misses() const { return misses_; }

 private:
  std::string path(const std::string& key) const;
  std::string dir_;
  unsigned hits_ = 0, misses_ = 0;
};

// tune through the cache when one is given
TunedParameter tune_cached(TuneCache* cache, const DyadicInterval& bracket, const TargetProfile& profile,
                           std::uint64_t frozen_bits, const TuneOptions& opts);

}  // namespace logistat::io
