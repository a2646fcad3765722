#ifndef FRACMEM_IO_HPP
#define FRACMEM_IO_HPP

#include <json.hpp>
#include <string>

#include "fracmem/inequalities.hpp"
#include "fracmem/membrane.hpp"
#include "fracmem/rearrange.hpp"

namespace fracmem {

using Json = nlohmann::ordered_json;

// ---- input files ---------------------------------------------------------------

Grid grid_from_json(const Json& j);
Json grid_to_json(const Grid& g);

ShapeSpec shape_spec_from_json(const Json& j);
Json shape_spec_to_json(const ShapeSpec& s);

// domain file: {dim, origin, h, shape, domain: <shape spec>}
struct DomainFile {
    Grid grid;
    Mask mask;
    Json echo;
};
DomainFile load_domain_file(const std::string& path);

// field file: {grid:{...}, mask: <shape spec or {cells:[...]}>,
//              values:[...] | generator:{type:"bumps"|"mollifier", ...}}
struct FieldFile {
    Field field;
    Json echo;
};
FieldFile load_field_file(const std::string& path);

// ---- reports ---------------------------------------------------------------------

Json optimization_result_to_json(const OptimizationResult& r, double alpha, std::uint64_t seed,
                                 int starts);
Json eigenpair_to_json(const EigenPair& p);
Json fk_report_to_json(const FKReport& r);
Json lieb_report_to_json(const LiebReport& r);
Json identity_report_to_json(const IdentityReport& r);
Json sweep_table_to_json(const SweepTable& t);

// CSV bodies are fully deterministic (fixed %.17g formatting, sorted rows)
std::string lieb_shifts_csv(const LiebReport& r);
std::string sweep_csv(const SweepTable& t);
std::string profile_csv(const RearrangementProfile& p);
std::string symmetrized_csv(const SymmetrizedField& s);

// wraps a payload with {version, config} provenance and writes it
Json with_provenance(Json payload, Json config_echo);
void write_text_file(const std::string& path, const std::string& text);
std::string format_double(double v);  // %.17g

}  // namespace fracmem

#endif
