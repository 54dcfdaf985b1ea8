#pragma once

// Minimal 3-vector and axis-aligned box types shared across the library.

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdscat {

struct vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline vec3 operator+(const vec3& a, const vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline vec3 operator-(const vec3& a, const vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline vec3 operator*(double s, const vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline vec3 operator*(const vec3& a, double s) { return s * a; }

inline double dot(const vec3& a, const vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }
inline double dist(const vec3& a, const vec3& b) { return norm(a - b); }

inline vec3 cross(const vec3& a, const vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Axis-aligned box with lo <= hi componentwise.
struct Box {
    vec3 lo;
    vec3 hi;

    Box() = default;
    Box(const vec3& lo_, const vec3& hi_) : lo(lo_), hi(hi_) {
        if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z))
            throw std::invalid_argument("Box: lo must be strictly below hi on every axis");
    }

    vec3 sides() const { return {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z}; }
    double volume() const {
        const vec3 s = sides();
        return s.x * s.y * s.z;
    }
    bool contains(const vec3& p, double tol = 0.0) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
               p.y <= hi.y + tol && p.z >= lo.z - tol && p.z <= hi.z + tol;
    }
    vec3 center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y), 0.5 * (lo.z + hi.z)}; }
};

}  // namespace tdscat
