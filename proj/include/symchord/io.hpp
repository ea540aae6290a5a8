#pragma once

#include "symchord/chords.hpp"
#include "symchord/continuation.hpp"
#include "symchord/homology.hpp"
#include "symchord/index.hpp"
#include "symchord/systems.hpp"

#include <json.hpp>

#include <string>

namespace symchord {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Chord& ch);
Chord chord_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IndexResult& idx);
nlohmann::json to_json(const ReversibilityReport& rep);
nlohmann::json to_json(const BifurcationEvent& ev);
nlohmann::json to_json(const SymmetryReport& rep);
nlohmann::json to_json(const DiagramForest& forest);

nlohmann::json to_json(const GradedZ2Complex& cx);
GradedZ2Complex complex_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HomologyProfile& profile);
HomologyProfile profile_from_json(const nlohmann::json& j);

/// CSV columns {family_id, tau, s, T, eta, mu_x2, m}, one row per family point.
std::string families_csv(const std::vector<Family>& families);

/// Bifurcation diagram as a standalone SVG: tau horizontal, chart parameter
/// vertical, branches as polylines colored by mu, events as dots. The first
/// line after the XML prolog is a version comment.
std::string diagram_svg(const DiagramForest& forest, int width = 860, int height = 560);

/// Shortest round-trip decimal formatting used for all CSV output.
std::string format_double(double v);

}  // namespace symchord
