#pragma once

#include <iosfwd>
#include <json.hpp>

#include "bt/asymptotics.hpp"
#include "bt/corrector.hpp"
#include "bt/nfcoeffs.hpp"
#include "bt/predictor.hpp"

namespace bt {

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Json to_json(const BTData& bt);
// Field names as in CmExpansion.
Json to_json(const CmExpansion& cm);
Json to_json(const HomPredictor& p);
Json to_json(const LpSeries& s);

// Columns i, tau_i, sigma_i with exact "p/q" strings.
void write_lpseries_csv(std::ostream& os, const LpSeries& s);

// 17 significant digits.
std::string num17(double v);

}  // namespace bt
