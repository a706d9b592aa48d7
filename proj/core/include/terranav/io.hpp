#pragma once

#include <iosfwd>
#include <string>

#include "terranav/sim.hpp"
#include "terranav/types.hpp"

namespace terranav {

// CSV schemas are versioned through a leading comment line; columns are
// fixed per version. Doubles are printed with max_digits10 so identical
// runs produce identical bytes.

void write_episode_csv(const EpisodeRecord& record, std::ostream& out);
void write_episode_csv(const EpisodeRecord& record, const std::string& path);

void write_vision_csv(const EpisodeRecord& record, std::ostream& out);
void write_vision_csv(const EpisodeRecord& record, const std::string& path);

void write_summary(const EpisodeRecord& record, std::ostream& out);
void write_summary(const EpisodeRecord& record, const std::string& path);

void write_matrix6_csv(const Matrix6& m, std::ostream& out);
void write_matrix6_csv(const Matrix6& m, const std::string& path);
Matrix6 load_matrix6_csv(const std::string& path);

void write_mc_csv(const MonteCarloSummary& summary, std::ostream& out);
void write_mc_csv(const MonteCarloSummary& summary, const std::string& path);

}  // namespace terranav
