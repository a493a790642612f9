#include "logistat/io/cache.hpp"

#include <filesystem>

#include "logistat/errors.hpp"

namespace logistat::io {

Json TuneCache::request(const DyadicInterval& bracket, const TargetProfile& profile, std::uint64_t frozen_bits,
                        const TuneOptions& opts) {
  Json j;
  j["schema"] = "logistat.tune-request";
  j["version"] = kSchemaVersion;
  j["bracket"] = to_json(bracket);
  j["profile"] = to_json(profile);
  j["frozen_bits"] = frozen_bits;
  j["options"] = to_json(opts);
  return j;
}

std::string TuneCache::key(const Json& request) { return hex64(fnv1a64(request.dump())); }

std::string TuneCache::path(const std::string& key) const {
  return (std::filesystem::path(dir_) / ("tune-" + key + ".json")).string();
}

std::optional<TunedParameter> TuneCache::load(const Json& request, const TargetProfile& profile,
                                              const TuneOptions& opts) {
  const std::string p = path(key(request));
  if (!std::filesystem::exists(p)) {
    ++misses_;
    return std::nullopt;
  }
  try {
    Json j = read_json_file(p);
    // a hash collision or a foreign file must not be mistaken for a hit
    if (!j.contains("request") || j.at("request") != request) {
      ++misses_;
      return std::nullopt;
    }
    TunedParameter t = tuned_from_json(j.at("result"));
    if (!verify_tuned(t, profile, opts).empty()) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return t;
  } catch (const Error&) {
    ++misses_;
    return std::nullopt;
  }
}

void TuneCache::store(const Json& request, const TunedParameter& t) {
  std::filesystem::create_directories(dir_);
  Json j;
  j["request"] = request;
  j["result"] = to_json(t);
  const std::string p = path(key(request));
  const std::string tmp = p + ".tmp";
  write_text_file(tmp, j.dump());
  std::filesystem::rename(tmp, p);
}

TunedParameter tune_cached(TuneCache* cache, const DyadicInterval& bracket, const TargetProfile& profile,
                           std::uint64_t frozen_bits, const TuneOptions& opts) {
  if (!cache) return tune(bracket, profile, frozen_bits, opts);
  Json req = TuneCache::request(bracket, profile, frozen_bits, opts);
  if (auto hit = cache->load(req, profile, opts)) return *hit;
  TunedParameter t = tune(bracket, profile, frozen_bits, opts);
  cache->store(req, t);
  return t;
}

}  // namespace logistat::io
