#include "pns/bundle.hpp"

#include <cmath>

#include "pns/error.hpp"
#include "pns/spectral.hpp"

namespace pns {
namespace {

template <int K>
std::vector<double> taylor_at(const ClosedFormField& f, const std::vector<Point3>& pts, double t) {
    constexpr std::size_t S = Jet<K>::kSize;
    std::vector<double> out(pts.size() * S);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto j = f.jet<K>({pts[i].x, pts[i].y, pts[i].z, t});
        for (std::size_t s = 0; s < S; ++s) out[i * S + s] = j.coefficient(s);
    }
    return out;
}

template <int K>
std::vector<double> extract(const std::vector<double>& taylor, const MultiIndex& a, std::size_t n) {
    const auto& tab = jet_detail::tables<K>();
    constexpr std::size_t S = Jet<K>::kSize;
    const int slot = tab.slot(a);
    const double scale = tab.factorial[slot];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = taylor[i * S + slot] * scale;
    return out;
}

int frame_index(const SnapshotSeries& s, double t) {
    const double k = std::round((t - s.t0) / s.dt);
    require(std::abs(t - (s.t0 + k * s.dt)) <= 1e-9 * std::max(1.0, std::abs(s.dt)), ErrorKind::InvalidArgument,
            "time is not on the snapshot series");
    require(k >= 0 && k < static_cast<double>(s.frames.size()), ErrorKind::InvalidArgument,
            "time is outside the snapshot series");
    return static_cast<int>(k);
}

}  // namespace

FieldSource::FieldSource() : data_(ClosedFormField::constant(0.0)), zero_(true) {}

FieldSource::FieldSource(ClosedFormField field) : data_(std::move(field)) {}

FieldSource::FieldSource(ScalarField field) : data_(as_physical(field)) {}

FieldSource::FieldSource(SnapshotSeries series) {
    require(!series.frames.empty(), ErrorKind::InvalidArgument, "snapshot series is empty");
    require(series.frames.size() == 1 || (std::isfinite(series.dt) && series.dt > 0.0), ErrorKind::InvalidArgument,
            "snapshot spacing must be positive");
    for (auto& f : series.frames) {
        require_same_grid(f.grid(), series.frames.front().grid(), "snapshot series");
        f = as_physical(f);
    }
    data_ = std::move(series);
}

const SpectralGrid* FieldSource::grid() const noexcept {
    if (auto* f = std::get_if<ScalarField>(&data_)) return &f->grid();
    if (auto* s = std::get_if<SnapshotSeries>(&data_)) return &s->frames.front().grid();
    return nullptr;
}

std::string FieldSource::name() const {
    if (auto* f = std::get_if<ClosedFormField>(&data_)) return f->name();
    if (std::holds_alternative<ScalarField>(data_)) return "grid-field";
    return "snapshot-series";
}

ScalarField FieldSource::grid_field(double t, int time_order) const {
    require(time_order >= 0, ErrorKind::InvalidArgument, "negative time derivative order");
    if (auto* f = std::get_if<ScalarField>(&data_)) {
        require(time_order == 0, ErrorKind::InvalidArgument,
                "missing time derivatives: a single grid field carries no time information");
        return *f;
    }
    if (auto* s = std::get_if<SnapshotSeries>(&data_)) {
        const int k = frame_index(*s, t);
        if (time_order == 0) return s->frames[k];
        require(time_order <= 2, ErrorKind::InvalidArgument,
                "snapshot series provide time derivatives up to order 2");
        require(k >= 2 && k + 2 < static_cast<int>(s->frames.size()), ErrorKind::InvalidArgument,
                "missing time derivatives: snapshot series needs two frames on each side");
        const auto& F = s->frames;
        if (time_order == 1)
            return (1.0 / (12.0 * s->dt)) * (F[k - 2] - F[k + 2] + 8.0 * (F[k + 1] - F[k - 1]));
        return (1.0 / (12.0 * s->dt * s->dt)) *
               (16.0 * (F[k + 1] + F[k - 1]) - F[k + 2] - F[k - 2] - 30.0 * F[k]);
    }
    fail(ErrorKind::InvalidState, "closed-form source has no grid representation");
}

Sampler::Sampler(const BoxQuadrature& rule, double t) : rule_(rule), t_(t) {}

const std::vector<double>& Sampler::volume(const FieldSource& s, const MultiIndex& a) {
    return sample(s, kVolume, a);
}

const std::vector<double>& Sampler::face(const FieldSource& s, const Face& f, const MultiIndex& a) {
    return sample(s, static_cast<int>(f.axis) * 2 + f.side, a);
}

const std::vector<double>& Sampler::taylor(const ClosedFormField& f, const FieldSource* key, int where, int order) {
    const Key k{key, where, order};
    auto it = taylor_.find(k);
    if (it != taylor_.end()) return it->second;
    std::vector<Point3> pts(count(where));
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = node(where, i);
    std::vector<double> tay;
    switch (order) {
    case 0: tay = taylor_at<0>(f, pts, t_); break;
    case 1: tay = taylor_at<1>(f, pts, t_); break;
    case 2: tay = taylor_at<2>(f, pts, t_); break;
    case 3: tay = taylor_at<3>(f, pts, t_); break;
    default: tay = taylor_at<4>(f, pts, t_); break;
    }
    return taylor_.emplace(k, std::move(tay)).first->second;
}

std::vector<double> Sampler::grid_partial(const FieldSource& s, int where, const MultiIndex& a) {
    const SpectralGrid& g = *s.grid();
    require(rule_.is_lattice() && rule_.grid() == g, ErrorKind::InvalidArgument,
            "grid-backed source " + s.name() + " needs the lattice rule of its own grid");
    const auto& vol = [&]() -> const std::vector<double>& {
        const Key k{&s, kVolume, multi_index_key(a)};
        auto it = partials_.find(k);
        if (it != partials_.end()) return it->second;
        ScalarField f = s.grid_field(t_, a.t);
        if (a.x + a.y + a.z > 0) {
            f = to_spectral(f);
            if (a.x) f = derivative(f, Axis::x, a.x);
            if (a.y) f = derivative(f, Axis::y, a.y);
            if (a.z) f = derivative(f, Axis::z, a.z);
            f = to_physical(f);
        }
        auto v = f.values();
        return partials_.emplace(k, std::vector<double>(v.begin(), v.end())).first->second;
    }();
    if (where == kVolume) return vol;
    // periodic: both walls of an axis sample the index-0 slice
    const Face face = kFaces[where];
    const int n = g.n_modes();
    std::vector<double> out(rule_.face_size());
    for (int b = 0; b < n; ++b)
        for (int a2 = 0; a2 < n; ++a2) {
            std::size_t idx;
            switch (face.axis) {
            case Axis::x: idx = g.index(0, a2, b); break;
            case Axis::y: idx = g.index(a2, 0, b); break;
            default: idx = g.index(a2, b, 0); break;
            }
            out[static_cast<std::size_t>(b) * n + a2] = vol[idx];
        }
    return out;
}

const std::vector<double>& Sampler::sample(const FieldSource& s, int where, const MultiIndex& a) {
    require(a.order() <= kMaxDerivativeOrder, ErrorKind::InvalidArgument, "derivative order above 4 requested");
    const Key k{&s, where, multi_index_key(a)};
    auto it = partials_.find(k);
    if (it != partials_.end()) return it->second;
    std::vector<double> out;
    if (s.is_zero()) {
        out.assign(count(where), 0.0);
    } else if (const ClosedFormField* f = s.closed_form()) {
        const int order = a.order();
        const auto& tay = taylor(*f, &s, where, order);
        const std::size_t n = count(where);
        switch (order) {
        case 0: out = extract<0>(tay, a, n); break;
        case 1: out = extract<1>(tay, a, n); break;
        case 2: out = extract<2>(tay, a, n); break;
        case 3: out = extract<3>(tay, a, n); break;
        default: out = extract<4>(tay, a, n); break;
        }
        for (double v : out)
            if (!std::isfinite(v))
                fail(ErrorKind::SingularPoint, "partial (x" + std::to_string(a.x) + ",y" + std::to_string(a.y) + ",z" +
                                                   std::to_string(a.z) + ",t" + std::to_string(a.t) + ") of " +
                                                   f->name() + " is unbounded on the sampling nodes");
    } else {
        out = grid_partial(s, where, a);
    }
    return partials_.emplace(k, std::move(out)).first->second;
}

}  // namespace pns
