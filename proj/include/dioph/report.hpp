#pragma once

#include "dioph/dynamics.hpp"
#include "dioph/exterior.hpp"
#include "dioph/hyperplane.hpp"
#include "dioph/nondiv.hpp"
#include "dioph/witness.hpp"

#include <json.hpp>
#include <string>

namespace dioph {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    uint64_t seed = 20260808;
    long mantissa_bits = 256;
    int threads = 0;
    int cf_depth = 8;
    std::string format = "json"; // json | csv
};

using Json = nlohmann::ordered_json;

// fixed-format floating emission so reports are byte-stable
std::string num_str(double v);
Json num_json(double v); // string for inf, number otherwise

Json config_json(const RunConfig& cfg, const std::string& quantity);

Json witness_json(const Witness& w);
Json multivector_json(const MultiVector& w);
Json estimate_json(const ExponentEstimate& est, const RunConfig& cfg);
Json prescribed_json(const PrescribedNumber& num, const RunConfig& cfg);
Json gamma_json(const GammaTable& g, double assembled, const RunConfig& cfg);
Json sample_report_json(const SampleReport& rep, const RunConfig& cfg);
std::string sample_report_csv(const SampleReport& rep);
Json sublevel_json(const SublevelReport& rep, const RunConfig& cfg);
std::string escape_csv(const EscapeReport& rep);
Json escape_json(const EscapeReport& rep, const RunConfig& cfg);
Json borel_cantelli_json(const BorelCantelliReport& rep, const RunConfig& cfg);

} // namespace dioph
