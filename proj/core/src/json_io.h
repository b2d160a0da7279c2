/*
 * Copyright 2026 The xaibench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON mappings shared by model files, stage artifacts and the run report.
// Doubles are written in shortest round-trip form, so a write/read cycle is
// exact.

#ifndef XAIBENCH_SRC_JSON_IO_H_
#define XAIBENCH_SRC_JSON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "xaibench/data.h"
#include "xaibench/explainers.h"
#include "xaibench/irt.h"
#include "xaibench/metrics.h"
#include "xaibench/models.h"
#include "xaibench/report.h"
#include "xaibench/stability.h"
#include "xaibench/stats.h"

namespace xaibench {

using Json = nlohmann::json;

// Throws Failure naming the path.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Parses `text`, throwing InvalidArgument that names `source` on bad JSON.
Json ParseJson(std::string_view text, std::string_view source);
Json ReadJsonFile(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void WriteJsonFile(const std::filesystem::path& path, const Json& j);

Json ModelToJson(const TrainedModel& model);
TrainedModel ModelFromJson(const Json& j);

void to_json(Json& j, const MetricReport& m);
void from_json(const Json& j, MetricReport& m);
void to_json(Json& j, const StandardizationStats& s);
void from_json(const Json& j, StandardizationStats& s);
void to_json(Json& j, const RelevanceRank& r);
void from_json(const Json& j, RelevanceRank& r);
void to_json(Json& j, const ItemParameters& p);
void from_json(const Json& j, ItemParameters& p);
void to_json(Json& j, const IrtFit& f);
void from_json(const Json& j, IrtFit& f);
void to_json(Json& j, const ReliabilitySummary& s);
void from_json(const Json& j, ReliabilitySummary& s);
void to_json(Json& j, const StabilityRecord& r);
void from_json(const Json& j, StabilityRecord& r);
void to_json(Json& j, const FriedmanResult& f);
void from_json(const Json& j, FriedmanResult& f);
void to_json(Json& j, const PosthocMatrix& m);
void from_json(const Json& j, PosthocMatrix& m);
void to_json(Json& j, const MeasurementTable& t);
void from_json(const Json& j, MeasurementTable& t);
void to_json(Json& j, const DatasetSummary& d);
void from_json(const Json& j, DatasetSummary& d);
void to_json(Json& j, const ModelSummary& s);
void from_json(const Json& j, ModelSummary& s);
void to_json(Json& j, const MetricEntry& e);
void from_json(const Json& j, MetricEntry& e);
void to_json(Json& j, const ReliabilityEntry& e);
void from_json(const Json& j, ReliabilityEntry& e);

Json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);

}  // namespace xaibench

#endif  // XAIBENCH_SRC_JSON_IO_H_
