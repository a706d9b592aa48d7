#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "terranav/types.hpp"

namespace terranav {

// A point on the interpolated terrain surface together with the unit
// normal of the tangent plane there.
struct SurfaceContact {
    Vector3 point;
    Vector3 normal;
};

// Regular-grid digital terrain map with a bilinear surface model.
// Immutable after construction; all queries are read-only.
class TerrainGrid {
public:
    // heights(i, j) is the elevation at x = origin_x + j*cell_size,
    // y = origin_y + i*cell_size.
    TerrainGrid(double origin_x, double origin_y, double cell_size,
                Eigen::MatrixXd heights);

    // ASCII grid: six-line header (ncols, nrows, xllcorner, yllcorner,
    // cellsize, nodata_value) followed by nrows rows of heights, top row
    // at the highest y. Any nodata cell is rejected.
    static TerrainGrid load_ascii(const std::string& path);
    static TerrainGrid parse_ascii(std::istream& in, const std::string& name);

    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    double cell_size() const { return cell_size_; }
    int n_cols() const { return static_cast<int>(heights_.cols()); }
    int n_rows() const { return static_cast<int>(heights_.rows()); }
    double max_x() const { return origin_x_ + (n_cols() - 1) * cell_size_; }
    double max_y() const { return origin_y_ + (n_rows() - 1) * cell_size_; }
    double max_height() const { return max_height_; }
    const Eigen::MatrixXd& heights() const { return heights_; }

    bool contains(double x, double y) const;

    // Bilinear interpolation of the four surrounding corner heights.
    double height_at(double x, double y) const;

    // Unit normal of the bilinear patch, normalize((-dh/dx, -dh/dy, 1)).
    // On cell edges the gradient comes from the floor-indexed cell.
    Vector3 normal_at(double x, double y) const;

    // First intersection of the ray with the surface: fixed-step marching
    // at half-cell steps until the height difference changes sign, then
    // bisection to |dz| <= 1e-9 m.
    SurfaceContact intersect_ray(const Vector3& origin, const Vector3& direction) const;

private:
    // Lower-left corner indices and fractional offsets of the cell
    // containing (x, y); throws DomainError when outside the footprint.
    void locate(double x, double y, int& i, int& j, double& fx, double& fy) const;

    double origin_x_;
    double origin_y_;
    double cell_size_;
    Eigen::MatrixXd heights_;
    double max_height_;
};

}  // namespace terranav
