#ifndef CLASSRANK_REPORT_JSON_HPP
#define CLASSRANK_REPORT_JSON_HPP

#include <string>

#include <json.hpp>

#include "classrank/density.hpp"
#include "classrank/quadform.hpp"
#include "classrank/scan.hpp"

namespace classrank {

// All big integers travel as decimal strings: they routinely exceed 64 bits.
// ordered_json keeps field order stable so identical inputs give identical
// bytes.
using json = nlohmann::ordered_json;

json to_json(const QuadForm& f);
QuadForm quadform_from_json(const json& j);

json to_json(const Rank2Certificate& cert);
Rank2Certificate certificate_from_json(const json& j);

json to_json(const Box& box);
Box box_from_json(const json& j);

json to_json(const ScanReport& report);
ScanReport scan_report_from_json(const json& j);

json to_json(const DensityEstimate& est);
DensityEstimate density_from_json(const json& j);

json to_json(const ClassGroupStructure& structure);

json to_json(const GrowthFit& fit);

std::string scan_report_csv(const ScanReport& report);

} // namespace classrank

#endif
