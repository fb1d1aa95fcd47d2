#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "pns/closed_form.hpp"
#include "pns/field.hpp"
#include "pns/quadrature.hpp"

namespace pns {

/// Equally spaced stored frames f(t0 + k dt). Time derivatives use fourth-order
/// central differences, so a frame needs two neighbours on each side.
struct SnapshotSeries {
    std::vector<ScalarField> frames;
    double t0 = 0.0;
    double dt = 0.0;
};

/// A scalar input to the residual operators: an analytic closed form, a single
/// grid field without time information, or a snapshot series.
class FieldSource {
public:
    /// The zero field.
    FieldSource();
    FieldSource(ClosedFormField field);        // NOLINT(google-explicit-constructor)
    FieldSource(ScalarField field);            // NOLINT(google-explicit-constructor)
    FieldSource(SnapshotSeries series);        // NOLINT(google-explicit-constructor)

    bool is_zero() const noexcept { return zero_; }
    const ClosedFormField* closed_form() const noexcept { return std::get_if<ClosedFormField>(&data_); }
    /// Grid of a grid-backed source, nullptr for closed forms.
    const SpectralGrid* grid() const noexcept;
    std::string name() const;

    /// Physical field at time t differentiated `time_order` times in t (grid sources).
    /// InvalidArgument when the time derivative cannot be formed.
    ScalarField grid_field(double t, int time_order) const;

private:
    std::variant<ClosedFormField, ScalarField, SnapshotSeries> data_;
    bool zero_ = false;
};

/// Velocity components plus optional pressure and the optional K input.
struct FieldBundle {
    FieldSource ux, uy, uz;
    std::optional<FieldSource> pressure;
    std::optional<FieldSource> k_field;
};

/// Samples sources on the nodes of a box rule at a fixed time, caching each partial.
/// Grid-backed sources need the lattice rule of their own grid.
class Sampler {
public:
    Sampler(const BoxQuadrature& rule, double t);

    const BoxQuadrature& rule() const noexcept { return rule_; }
    double time() const noexcept { return t_; }

    /// Partial `a` at every volume node. Throws SingularPoint for unbounded partials.
    const std::vector<double>& volume(const FieldSource& s, const MultiIndex& a);
    /// Partial `a` at every node of one face.
    const std::vector<double>& face(const FieldSource& s, const Face& f, const MultiIndex& a);

private:
    static constexpr int kVolume = -1;
    using Key = std::tuple<const FieldSource*, int, int>;

    const std::vector<double>& sample(const FieldSource& s, int where, const MultiIndex& a);
    const std::vector<double>& taylor(const ClosedFormField& f, const FieldSource* key, int where, int order);
    std::vector<double> grid_partial(const FieldSource& s, int where, const MultiIndex& a);
    std::size_t count(int where) const { return where == kVolume ? rule_.size() : rule_.face_size(); }
    Point3 node(int where, std::size_t i) const {
        return where == kVolume ? rule_.point(i) : rule_.face_point(kFaces[where], i);
    }

    const BoxQuadrature& rule_;
    double t_;
    std::map<Key, std::vector<double>> partials_;
    std::map<Key, std::vector<double>> taylor_;
};

/// Integer code of a multi-index with entries <= 4.
constexpr int multi_index_key(const MultiIndex& a) { return ((a.x * 5 + a.y) * 5 + a.z) * 5 + a.t; }

}  // namespace pns
