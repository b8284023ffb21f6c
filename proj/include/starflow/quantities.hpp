#pragma once

#include <string>
#include <vector>

#include "starflow/geometry.hpp"

namespace starflow {

/// Weighted curvature integrals over a body:
///   S(iota,k) = integral u^iota p_k dmu
///   T(iota,k) = integral p_k^iota dmu
///   Area, Volume (Euclidean), Quermass(m) = integral u sigma_m dmu.
struct QuantityKey {
    enum class Kind { S, T, Area, Volume, Quermass };
    Kind kind = Kind::Area;
    double iota = 0.0;
    int k = 0;

    static QuantityKey S(double iota, int k) { return {Kind::S, iota, k}; }
    static QuantityKey T(double iota, int k) { return {Kind::T, iota, k}; }
    static QuantityKey area() { return {Kind::Area, 0.0, 0}; }
    static QuantityKey volume() { return {Kind::Volume, 0.0, 0}; }
    static QuantityKey quermass(int m) { return {Kind::Quermass, 0.0, m}; }

    std::string to_string() const;
    static QuantityKey parse(const std::string& text);
    bool operator==(const QuantityKey&) const = default;
};

/// Quadrature of the nodewise density for a quantity key.  Throws DomainError
/// (naming the node) when a negative p_k would be raised to a non-integer
/// power, and for Volume in a hyperbolic ambient.
double evaluate(const QuantityKey& key, const GeometryFields& f);

/// Predicted time derivative of S(iota,k) along the normalized flow
/// dX/dt = (F - eta*u) nu, where `speed` is the nodewise expansion factor
/// F = u^alpha f^-beta.  Valid for scale-invariant speeds (alpha + beta = 1);
/// Euclidean ambient.  The Newton-tensor contraction p_k^{ij} grad_i u grad_j u
/// is evaluated in the g-orthonormal principal frame.
double predicted_rate_S(const GeometryFields& f, const Eigen::ArrayXd& speed, double eta,
                        double iota, int k);

/// Predicted time derivative of T(iota,k) along the same flow; grad p_k and
/// grad F are covariant derivatives of the sampled nodewise fields.
double predicted_rate_T(const GeometryFields& f, const Eigen::ArrayXd& speed, double eta,
                        double iota, int k);

/// Closed-form rate of S(iota,n) along the support-weighted top-order flow
/// with expansion factor F = p_{n-m-1} / (u^m p_n) scaled so that
/// F(unit sphere) = eta:
///   d/dt S(iota,n) = iota * eta * integral (u^{iota-1-m} p_{n-m-1} - u^iota p_n) dmu.
double predicted_rate_S_top(const GeometryFields& f, double iota, int m, double eta);

/// Cross-check of the quermassintegral identities S(1,k+1) = S(0,k) = T(1,k)
/// for k = 0..n-1 (Euclidean).
struct QuermassRelationReport {
    struct Entry {
        int k;
        double s1_kp1, s0_k, t1_k;
        double max_rel_diff;
    };
    std::vector<Entry> entries;
    double worst = 0.0;
};
QuermassRelationReport quermass_relations_check(const GeometryFields& f);

}  // namespace starflow
