#include "terranav/io.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "terranav/errors.hpp"

namespace terranav {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot open output file '" + path + "'");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    return out;
}

void set_precision(std::ostream& out) {
    out.precision(std::numeric_limits<double>::max_digits10);
}

void put_vec3(std::ostream& out, const Vector3& v) {
    out << "," << v.x() << "," << v.y() << "," << v.z();
}

}  // namespace

void write_episode_csv(const EpisodeRecord& record, std::ostream& out) {
    set_precision(out);
    out << "# schema: terranav-episode v1\n";
    out << "t";
    for (const char* who : {"true", "drift", "corrected"}) {
        for (const char* what : {"x", "y", "z", "vx", "vy", "vz", "phi", "theta", "psi"}) {
            out << "," << who << "_" << what;
        }
    }
    for (int i = 1; i <= 15; ++i) out << ",P_diag_" << i;
    out << "\n";
    for (const StepRecord& s : record.steps) {
        out << s.t;
        for (const NavState* nav : {&s.truth, &s.drift, &s.corrected}) {
            put_vec3(out, nav->position);
            put_vec3(out, nav->velocity);
            put_vec3(out, nav->attitude);
        }
        for (int i = 0; i < 15; ++i) out << "," << s.p_diag(i);
        out << "\n";
    }
}

void write_episode_csv(const EpisodeRecord& record, const std::string& path) {
    auto out = open_out(path);
    write_episode_csv(record, out);
}

void write_vision_csv(const EpisodeRecord& record, std::ostream& out) {
    set_precision(out);
    out << "# schema: terranav-vision v1\n";
    out << "t,iterations,residual_norm,converged,rank,applied";
    for (const char* c : {"dx", "dy", "dz", "dphi", "dtheta", "dpsi"}) {
        out << ",innovation_" << c;
    }
    for (const char* c : {"dx", "dy", "dz", "dphi", "dtheta", "dpsi"}) {
        out << ",vision_error_" << c;
    }
    out << "\n";
    for (const VisionRecord& v : record.vision) {
        out << v.t << "," << v.iterations << "," << v.residual_norm << ","
            << (v.converged ? 1 : 0) << "," << v.rank << "," << (v.applied ? 1 : 0);
        for (int i = 0; i < 6; ++i) out << "," << v.innovation(i);
        for (int i = 0; i < 6; ++i) out << "," << v.vision_error(i);
        out << "\n";
    }
}

void write_vision_csv(const EpisodeRecord& record, const std::string& path) {
    auto out = open_out(path);
    write_vision_csv(record, out);
}

void write_summary(const EpisodeRecord& record, std::ostream& out) {
    set_precision(out);
    out << "final_drift_position_error_m " << record.final_drift_position_error() << "\n";
    out << "final_corrected_position_error_m " << record.final_corrected_position_error() << "\n";
    out << "final_drift_velocity_error_mps " << record.final_drift_velocity_error() << "\n";
    out << "final_corrected_velocity_error_mps " << record.final_corrected_velocity_error() << "\n";
    out << "vision_epochs " << record.vision.size() << "\n";
    out << "solver_failures " << record.solver_failures << "\n";
}

void write_summary(const EpisodeRecord& record, const std::string& path) {
    auto out = open_out(path);
    write_summary(record, out);
}

void write_matrix6_csv(const Matrix6& m, std::ostream& out) {
    set_precision(out);
    out << "# schema: terranav-r-matrix v1\n";
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            out << m(i, j) << (j == 5 ? '\n' : ',');
        }
    }
}

void write_matrix6_csv(const Matrix6& m, const std::string& path) {
    auto out = open_out(path);
    write_matrix6_csv(m, out);
}

Matrix6 load_matrix6_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open matrix file '" + path + "'");
    }
    Matrix6 m;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (row >= 6) throw DomainError("matrix file '" + path + "': more than 6 rows");
        std::istringstream ls(line);
        std::string cell;
        for (int col = 0; col < 6; ++col) {
            if (!std::getline(ls, cell, ',')) {
                throw DomainError("matrix file '" + path + "': row " +
                                  std::to_string(row) + " has fewer than 6 columns");
            }
            m(row, col) = std::stod(cell);
        }
        ++row;
    }
    if (row != 6) {
        throw DomainError("matrix file '" + path + "': expected 6 rows, got " +
                          std::to_string(row));
    }
    return m;
}

void write_mc_csv(const MonteCarloSummary& summary, std::ostream& out) {
    set_precision(out);
    out << "# schema: terranav-mc v1\n";
    out << "t,drift_pos_rms,corrected_pos_rms,drift_vel_rms,corrected_vel_rms\n";
    for (std::size_t k = 0; k < summary.times.size(); ++k) {
        out << summary.times[k] << "," << summary.drift_pos_rms[k] << ","
            << summary.corrected_pos_rms[k] << "," << summary.drift_vel_rms[k] << ","
            << summary.corrected_vel_rms[k] << "\n";
    }
}

void write_mc_csv(const MonteCarloSummary& summary, const std::string& path) {
    auto out = open_out(path);
    write_mc_csv(summary, out);
}

}  // namespace terranav
