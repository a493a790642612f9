#pragma once

#include <string>

#include "json.hpp"
#include "logistat/dynamics/periodic.hpp"
#include "logistat/dynamics/stage.hpp"
#include "logistat/measures/measure.hpp"
#include "logistat/measures/test_function.hpp"
#include "logistat/sink/sink.hpp"
#include "logistat/tuner/tuner.hpp"

namespace logistat::io {

// insertion-ordered so serialization is byte-stable
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Numbers cross the boundary as exact strings: dyadics in decimal, rationals as p/q.
Json to_json(const DyadicRational& x);
Json to_json(const Rational& q);
Json to_json(const DyadicInterval& x);
DyadicRational dyadic_from_json(const Json& j);
Rational rational_from_json(const Json& j);
DyadicInterval interval_from_json(const Json& j);
// exact dyadic from decimal or p/q text; InvalidInput when the value is not dyadic
DyadicRational parse_dyadic(const std::string& s);

Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);
std::string measure_csv(const DiscreteMeasure& mu);

Json to_json(const TestFunction& tau);
TestFunction tau_from_json(const Json& j);

Json to_json(const PeriodicOrbit& orb);
Json to_json(const Stage& st);
Json to_json(const TipCertificate& c);
Json to_json(const SinkCertificate& c);

Json to_json(const TargetProfile& p);
TargetProfile profile_from_json(const Json& j);
Json to_json(const TuneOptions& o);
Json to_json(const TunedParameter& t);
TunedParameter tuned_from_json(const Json& j);

// reads a whole file; InvalidInput on I/O or parse failure
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const Json& j);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace logistat::io
