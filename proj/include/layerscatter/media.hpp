#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace layerscatter {

// Reflectivities this close to +-1 are not representable as impedance ratios.
inline constexpr double max_reflectivity = 1.0 - 1e-12;

struct Interval {
    double x0 = 0.0;
    double x1 = 1.0;

    Interval() = default;
    Interval(double a, double b);

    double length() const { return x1 - x0; }
    bool contains(double x) const { return x >= x0 && x <= x1; }
};

// Uniform samples of a real function, linearly interpolated.
struct Sampled {
    double x0 = 0.0;
    double h = 1.0;
    std::vector<double> values;

    double x1() const { return x0 + h * static_cast<double>(values.size() - 1); }
    double operator()(double x) const;

    static Sampled from(const std::function<double(double)>& f, double x0, double x1,
                        std::size_t intervals);
};

// (left - right) / (left + right)
double reflectivity(double left, double right);

class StepMedium {
public:
    StepMedium(Interval span, std::vector<double> jumps, std::vector<double> values);
    static StepMedium constant(Interval span, double value = 1.0);

    const Interval& interval() const { return span_; }
    const std::vector<double>& jumps() const { return jumps_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return jumps_.size(); }

    std::vector<double> reflectivities() const;
    // right-continuous evaluation
    double operator()(double x) const;
    // sum of |log(c_j / c_{j+1})| / 2
    double log_variation() const;

    StepMedium reciprocal() const;
    StepMedium scaled(double s) const;

private:
    Interval span_;
    std::vector<double> jumps_;
    std::vector<double> values_;
};

namespace profiles {

struct Constant {
    double value = 1.0;
};

// zeta(x) = exp(-2 alpha0 x)
struct Exponential {
    double alpha0 = 0.0;
};

// zeta = exp(-2c(b-x) sin(d(x-a)^2)) on [a,b), 1 elsewhere
struct Chirp {
    double a = 5.0;
    double b = 15.0;
    double c = 0.065;
    double d = std::numbers::pi / 10.0;
};

// log zeta sampled at x0 + k h, linear in between
struct LogLinear {
    double x0 = 0.0;
    double h = 1.0;
    std::vector<double> log_zeta;
};

}  // namespace profiles

using ProfileKind =
    std::variant<profiles::Constant, profiles::Exponential, profiles::Chirp, profiles::LogLinear>;

struct Piece {
    Interval span;
    ProfileKind kind;
    double scale = 1.0;
};

struct Discontinuity {
    double x;
    double left;
    double right;
};

class ImpedanceProfile {
public:
    ImpedanceProfile(Interval span, ProfileKind kind, double scale = 1.0);
    explicit ImpedanceProfile(std::vector<Piece> pieces);

    static ImpedanceProfile from_samples(Interval span, std::span<const double> zeta);
    static ImpedanceProfile from_step(const StepMedium& m);

    const Interval& interval() const { return span_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::vector<Discontinuity>& discontinuities() const { return jumps_; }
    bool continuous() const { return jumps_.empty(); }

    double operator()(double x) const;
    double left_limit(double x) const;
    double right_limit(double x) const;
    // -zeta'/(2 zeta); throws at a discontinuity
    double alpha(double x) const;

    ImpedanceProfile reciprocal() const;
    ImpedanceProfile scaled(double s) const;
    ImpedanceProfile restricted(Interval sub) const;

private:
    const Piece& piece_at(double x) const;

    Interval span_;
    std::vector<Piece> pieces_;
    std::vector<Discontinuity> jumps_;
};

double alpha_of(const ImpedanceProfile& p, double x);

// int |alpha| and int alpha^2 over the profile's interval
double alpha_l1(const ImpedanceProfile& p);
double alpha_l2sq(const ImpedanceProfile& p);

struct StandardApproximant {
    ImpedanceProfile source;
    std::size_t n;
    double delta;
    std::vector<double> reflectivities;

    double x0() const { return source.interval().x0; }
    double x1() const { return source.interval().x1; }
    double jump(std::size_t j) const;  // y_{n,j}, j = 1..n
    std::vector<double> jumps() const;
    // values on the n+1 layers, zeta(y_j + delta/2)
    std::vector<double> layer_values() const;
    // same medium with removable jumps dropped
    StepMedium medium() const;
};

StandardApproximant standard_approximant(const ImpedanceProfile& profile, std::size_t n);

// q = (sqrt zeta)'' / sqrt zeta on x0 + j h
Sampled potential_of(const ImpedanceProfile& profile, double h);
std::vector<double> potential_from_samples(std::span<const double> zeta, double h);

StepMedium concatenate(const StepMedium& m1, const StepMedium& m2);
ImpedanceProfile concatenate(const ImpedanceProfile& p1, const ImpedanceProfile& p2);

// zeta = zeta1 * zeta2 with zeta1 continuous and zeta2 a step medium equal to 1 at x0+
std::pair<ImpedanceProfile, StepMedium> factor(const ImpedanceProfile& p);

}  // namespace layerscatter
