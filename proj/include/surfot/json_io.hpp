#pragma once

#include <string>
#include <utility>
#include <vector>

#include "surfot/pipeline.hpp"

namespace surfot {

// JSON (de)serialization of the pipeline artifacts. Emission is canonical
// (fixed key order, shortest round-trip numbers), so identical inputs give
// byte-identical files. Parsing throws ValidationError on malformed input.

std::string uniformization_to_json(const Uniformization& uni);
std::string measure_to_json(const DiscreteMeasure& m);

std::string density_to_json(const ConformalDensity& d);
ConformalDensity density_from_json(const std::string& text);

std::string cost_matrix_to_json(const CostMatrix& m, double radius_R, int sigma_steps);
CostMatrix cost_matrix_from_json(const std::string& text, double* radius_R = nullptr,
                                 int* sigma_steps = nullptr);

std::string plan_to_json(const TransportPlan& plan,
                         const std::vector<std::pair<int, int>>& pairs, double Q);
std::vector<std::pair<int, int>> pairs_from_plan_json(const std::string& text);

std::string scored_pairs_to_json(const std::vector<ScoredCorrespondence>& pairs);

std::string config_to_json(const PipelineConfig& cfg);
std::string compare_to_json(const CompareResult& r, const PipelineConfig& cfg);

std::string table_to_json(const DistanceTable& t, const PipelineConfig& cfg);
std::string table_to_csv(const DistanceTable& t);
DistanceTable table_from_json(const std::string& text);

std::string mds_to_json(const MdsResult& r, const std::vector<std::string>& labels);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace surfot
