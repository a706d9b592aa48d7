#include "terranav/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "terranav/errors.hpp"

namespace terranav {

namespace {

constexpr double kIntersectTolerance = 1e-9;  // meters

std::string coord_str(double x, double y) {
    std::ostringstream os;
    os << "(" << x << ", " << y << ")";
    return os.str();
}

}  // namespace

TerrainGrid::TerrainGrid(double origin_x, double origin_y, double cell_size,
                         Eigen::MatrixXd heights)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      cell_size_(cell_size),
      heights_(std::move(heights)) {
    if (!(cell_size_ > 0.0)) {
        throw DomainError("TerrainGrid: cell_size must be positive");
    }
    if (heights_.rows() < 2 || heights_.cols() < 2) {
        throw DomainError("TerrainGrid: need at least 2x2 grid nodes");
    }
    if (!heights_.allFinite()) {
        throw DomainError("TerrainGrid: heights must all be finite");
    }
    max_height_ = heights_.maxCoeff();
}

TerrainGrid TerrainGrid::load_ascii(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("TerrainGrid: cannot open '" + path + "'");
    }
    return parse_ascii(in, path);
}

TerrainGrid TerrainGrid::parse_ascii(std::istream& in, const std::string& name) {
    auto fail = [&](const std::string& what) -> void {
        throw DomainError("TerrainGrid: " + name + ": " + what);
    };

    long ncols = -1, nrows = -1;
    double xll = 0.0, yll = 0.0, cellsize = 0.0, nodata = 0.0;
    bool have_nodata = false;
    for (int line = 0; line < 6; ++line) {
        std::string key;
        if (!(in >> key)) fail("truncated header");
        std::transform(key.begin(), key.end(), key.begin(), ::tolower);
        double value;
        if (!(in >> value)) fail("bad value for header key '" + key + "'");
        if (key == "ncols") ncols = static_cast<long>(value);
        else if (key == "nrows") nrows = static_cast<long>(value);
        else if (key == "xllcorner") xll = value;
        else if (key == "yllcorner") yll = value;
        else if (key == "cellsize") cellsize = value;
        else if (key == "nodata_value") { nodata = value; have_nodata = true; }
        else fail("unknown header key '" + key + "'");
    }
    if (ncols < 2 || nrows < 2) fail("ncols and nrows must be >= 2");
    if (!(cellsize > 0.0)) fail("cellsize must be positive");

    Eigen::MatrixXd heights(nrows, ncols);
    // File rows run top (highest y) to bottom; storage row 0 is lowest y.
    for (long file_row = 0; file_row < nrows; ++file_row) {
        const long i = nrows - 1 - file_row;
        for (long j = 0; j < ncols; ++j) {
            double h;
            if (!(in >> h)) {
                fail("truncated data at row " + std::to_string(file_row) +
                     ", col " + std::to_string(j));
            }
            if (have_nodata && h == nodata) {
                fail("nodata cell at row " + std::to_string(file_row) +
                     ", col " + std::to_string(j) +
                     "; a complete surface is required");
            }
            heights(i, j) = h;
        }
    }
    return TerrainGrid(xll, yll, cellsize, std::move(heights));
}

bool TerrainGrid::contains(double x, double y) const {
    return x >= origin_x_ && x <= max_x() && y >= origin_y_ && y <= max_y();
}

void TerrainGrid::locate(double x, double y, int& i, int& j, double& fx, double& fy) const {
    if (!contains(x, y)) {
        throw DomainError("TerrainGrid: query " + coord_str(x, y) +
                          " outside footprint [" + coord_str(origin_x_, origin_y_) +
                          ", " + coord_str(max_x(), max_y()) + "]");
    }
    const double gx = (x - origin_x_) / cell_size_;
    const double gy = (y - origin_y_) / cell_size_;
    j = std::min(static_cast<int>(std::floor(gx)), n_cols() - 2);
    i = std::min(static_cast<int>(std::floor(gy)), n_rows() - 2);
    fx = gx - j;
    fy = gy - i;
}

double TerrainGrid::height_at(double x, double y) const {
    int i, j;
    double fx, fy;
    locate(x, y, i, j, fx, fy);
    const double h00 = heights_(i, j);
    const double h10 = heights_(i, j + 1);
    const double h01 = heights_(i + 1, j);
    const double h11 = heights_(i + 1, j + 1);
    return (1.0 - fx) * (1.0 - fy) * h00 + fx * (1.0 - fy) * h10 +
           (1.0 - fx) * fy * h01 + fx * fy * h11;
}

Vector3 TerrainGrid::normal_at(double x, double y) const {
    int i, j;
    double fx, fy;
    locate(x, y, i, j, fx, fy);
    const double h00 = heights_(i, j);
    const double h10 = heights_(i, j + 1);
    const double h01 = heights_(i + 1, j);
    const double h11 = heights_(i + 1, j + 1);
    const double dhdx = ((1.0 - fy) * (h10 - h00) + fy * (h11 - h01)) / cell_size_;
    const double dhdy = ((1.0 - fx) * (h01 - h00) + fx * (h11 - h10)) / cell_size_;
    return Vector3(-dhdx, -dhdy, 1.0).normalized();
}

SurfaceContact TerrainGrid::intersect_ray(const Vector3& origin, const Vector3& direction) const {
    const double dir_norm = direction.norm();
    if (!(dir_norm > 0.0)) {
        throw DomainError("intersect_ray: zero direction");
    }
    const Vector3 dir = direction / dir_norm;

    auto above = [&](double t) -> double {
        const Vector3 p = origin + t * dir;
        return p.z() - height_at(p.x(), p.y());
    };

    if (!contains(origin.x(), origin.y())) {
        throw DomainError("intersect_ray: origin " + coord_str(origin.x(), origin.y()) +
                          " outside footprint");
    }
    double f0 = above(0.0);
    if (f0 <= 0.0) {
        throw DomainError("intersect_ray: origin is not above the surface");
    }

    const double step = cell_size_ / 2.0;
    double t0 = 0.0;
    double t1;
    double f1;
    for (;;) {
        t1 = t0 + step;
        const Vector3 p = origin + t1 * dir;
        if (!contains(p.x(), p.y())) {
            throw RayEscapeError("intersect_ray: ray escapes DTM footprint at t=" +
                                 std::to_string(t1));
        }
        if (dir.z() >= 0.0 && p.z() > max_height_) {
            throw RayEscapeError("intersect_ray: ascending ray above max terrain height");
        }
        f1 = above(t1);
        if (f1 <= 0.0) break;
        t0 = t1;
        f0 = f1;
    }

    // Bisection on the sign change in [t0, t1].
    double tm = t1, fm = f1;
    for (int k = 0; k < 200 && std::abs(fm) > kIntersectTolerance; ++k) {
        tm = 0.5 * (t0 + t1);
        fm = above(tm);
        if (fm > 0.0) {
            t0 = tm;
        } else {
            t1 = tm;
        }
    }

    SurfaceContact contact;
    contact.point = origin + tm * dir;
    contact.normal = normal_at(contact.point.x(), contact.point.y());
    return contact;
}

}  // namespace terranav
