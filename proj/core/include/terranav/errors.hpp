#pragma once

#include <stdexcept>
#include <string>

namespace terranav {

// Query outside a domain precondition (out-of-footprint DTM lookup,
// origin below the surface, and similar).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A view ray left the DTM footprint without touching the surface.
class RayEscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pinhole projection of a point with non-positive optical-axis depth.
class BehindCameraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Denominator guard tripped in one of the projection operators
// (degenerate projection direction or grazing incidence).
class DegenerateDirectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solver geometry does not determine all twelve parameters.
class DegenerateGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Kalman filter failure (singular innovation covariance, degenerate
// attitude in the measurement composition).
class FilterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario synthesis could not satisfy its own contract
// (not enough valid features, inconsistent rates, ...).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config file syntax or schema problem; message carries file:line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace terranav
