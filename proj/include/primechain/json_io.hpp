#pragma once

#include <string>

#include <json.hpp>

#include "primechain/admissibility.hpp"
#include "primechain/chain_selector.hpp"
#include "primechain/good_tuples.hpp"
#include "primechain/maynard_sieve.hpp"
#include "primechain/prime_engine.hpp"

namespace primechain {

// Field order is fixed so identical inputs yield byte-identical files.
using json = nlohmann::ordered_json;

json to_json(const WitnessCertificate& cert);
WitnessCertificate witness_from_json(const json& j);

json to_json(const AdmissibilityReport& report, const OffsetTuple& t);

json to_json(const ChainResult& chain);
ChainResult chain_result_from_json(const json& j);

json to_json(const HalfSumset& s);
HalfSumset half_sumset_from_json(const json& j);

json to_json(const ChainCertificate& cert);
ChainCertificate chain_certificate_from_json(const json& j);

json to_json(const EstimateReport& rep);
std::string to_csv(const EstimateReport& rep);

json to_json(const BasisRatios& r);

} // namespace primechain
