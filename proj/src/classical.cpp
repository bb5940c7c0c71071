#include "catqcf/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "catqcf/errors.hpp"

namespace catqcf {
namespace {

// Terms with exponent beyond this are dropped (e^{-40} ~ 4e-18 relative to the peak).
constexpr double kExponentCut = 40.0;
constexpr int kWindingCut = 3;

double kick(const MapParams& params, double q) {
    double s = params.eps[0] * q + params.eps[2];
    if (params.eps[1] != 0.0) s += params.eps[1] * std::sin(kTwoPi * q);
    return s;
}

double kick_derivative(const MapParams& params, double q) {
    const Vec3 v = v_ddot(q);
    return params.eps[0] * v[0] + params.eps[1] * v[1] + params.eps[2] * v[2];
}

// g(w + s) - g(w) for a single Gaussian image, given g0 = g(w).
double nearest_delta(double w, double s, double g0, double a) {
    if (s == 0.0) return 0.0;
    if (a * w * w > kExponentCut) {
        const double ws = w + s;
        const double e1 = a * ws * ws;
        return e1 > kExponentCut ? 0.0 : std::exp(-e1);
    }
    return g0 * std::expm1(-a * s * (2.0 * w + s));
}

}  // namespace

void MapParams::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
    for (double e : eps) {
        if (!std::isfinite(e)) throw ConfigError("eps components must be finite");
    }
}

double MapParams::strength() const { return std::sqrt(eps[0] * eps[0] + eps[1] * eps[1] + eps[2] * eps[2]); }

double wrap_unit(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

double min_image(double x) { return x - std::ceil(x - 0.5); }

Vec3 v_potential(double q) { return {0.5 * q * q, -std::cos(kTwoPi * q) / kTwoPi, q}; }

Vec3 v_dot(double q) { return {q, std::sin(kTwoPi * q), 1.0}; }

Vec3 v_ddot(double q) { return {1.0, kTwoPi * std::cos(kTwoPi * q), 0.0}; }

PhasePoint map_forward(PhasePoint x, const MapParams& params) {
    const double q = wrap_unit(x.q);
    const double p = wrap_unit(x.p + params.k * q + kick(params, q));
    return {wrap_unit(q + p), p};
}

PhasePoint map_inverse(PhasePoint x, const MapParams& params) {
    const double q = wrap_unit(x.q - x.p);
    const double p = wrap_unit(x.p - params.k * q - kick(params, q));
    return {q, p};
}

double lyapunov(int k) {
    if (k < 1) throw std::invalid_argument("lyapunov: k must be >= 1");
    const double kd = k;
    return std::log(0.5 * (kd + 2.0 + std::sqrt(kd * (kd + 4.0))));
}

ProfileValue periodic_gaussian(double offset, double shift, int N) {
    const double a = kTwoPi * N;
    ProfileValue out{0.0, 0.0};
    for (int nu = -kWindingCut; nu <= kWindingCut; ++nu) {
        const double w = offset + nu;
        const double e0 = a * w * w;
        const double ws = w + shift;
        const double e1 = a * ws * ws;
        if (e0 > kExponentCut && e1 > kExponentCut) continue;
        if (e0 > kExponentCut) {
            out.delta += std::exp(-e1);
            continue;
        }
        const double g0 = std::exp(-e0);
        out.base += g0;
        if (shift != 0.0) out.delta += g0 * std::expm1(-a * shift * (2.0 * w + shift));
    }
    return out;
}

PacketDensity::PacketDensity(Packet packet, HilbertDim dim)
    : packet_(packet), dim_(dim), gq_(static_cast<std::size_t>(dim.grid_side())),
      gp_(static_cast<std::size_t>(dim.grid_side())) {
    const int S = dim.grid_side();
    const int N = dim.N();
    double sq = 0.0, sp = 0.0;
    for (int i = 0; i < S; ++i) {
        const double s = static_cast<double>(i) / S;
        gq_[i] = periodic_gaussian(min_image(s - packet.q0), 0.0, N).base;
        gp_[i] = periodic_gaussian(min_image(s - packet.p0), 0.0, N).base;
        sq += gq_[i] * gq_[i];
        sp += gp_[i] * gp_[i];
    }
    norm_ = 1.0 / std::sqrt(sq * sp);
}

double PacketDensity::operator()(PhasePoint x) const {
    const int N = dim_.N();
    return norm_ * periodic_gaussian(min_image(x.q - packet_.q0), 0.0, N).base *
           periodic_gaussian(min_image(x.p - packet_.p0), 0.0, N).base;
}

GridFunction gaussian_density(Packet packet, HilbertDim dim) {
    const PacketDensity rho(packet, dim);
    GridFunction out(dim);
    const int S = dim.grid_side();
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) out.at(i, j) = rho.normalization() * rho.q_factor(i) * rho.p_factor(j);
    }
    return out;
}

GridPullback::GridPullback(HilbertDim dim, MapParams params) : dim_(dim), params_(params) {
    params_.validate();
    const int S = dim.grid_side();
    const std::size_t total = static_cast<std::size_t>(S) * S;
    origin_.resize(total);
    for (std::size_t f = 0; f < total; ++f) origin_[f] = static_cast<std::uint32_t>(f);
    dq_.assign(total, 0.0);
    dp_.assign(total, 0.0);
}

void GridPullback::advance() {
    const int S = dim_.grid_side();
    const std::int64_t k = params_.k;
    const bool perturbed = !params_.unperturbed();
    const double inv_side = 1.0 / S;
    const std::size_t total = origin_.size();
    origin_next_.resize(total);
    if (perturbed) {
        dq_next_.resize(total);
        dp_next_.resize(total);
    }
    double max_dev = 0.0;
    std::size_t y = 0;
    for (int bi = 0; bi < S; ++bi) {
        for (int bj = 0; bj < S; ++bj, ++y) {
            int i = bi - bj;
            if (i < 0) i += S;
            int j = static_cast<int>((bj - k * i) % S);
            if (j < 0) j += S;
            const std::size_t next = static_cast<std::size_t>(i) * S + j;
            origin_next_[next] = origin_[y];
            if (!perturbed) continue;
            const double dq = dq_[y] - dp_[y];
            const double q = wrap_unit(i * inv_side + dq);
            const double dp = dp_[y] - static_cast<double>(k) * dq - kick(params_, q);
            const double nq = min_image(dq), np = min_image(dp);
            dq_next_[next] = nq;
            dp_next_[next] = np;
            max_dev = std::max(max_dev, std::max(std::abs(nq), std::abs(np)));
        }
    }
    origin_.swap(origin_next_);
    if (perturbed) {
        dq_.swap(dq_next_);
        dp_.swap(dp_next_);
    }
    max_dev_ = max_dev;
    ++t_;
    if (max_dev_ * S > kCellMargin) build_displaced_index();
}

void GridPullback::build_displaced_index() {
    const int S = dim_.grid_side();
    const std::size_t total = origin_.size();
    cell_keys_.resize(total);
    cell_offsets_.assign(total + 1, 0);
    cell_members_.resize(total);
    std::size_t y = 0;
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j, ++y) {
            const int ci = wrap_index(i + static_cast<std::int64_t>(std::lround(dq_[y] * S)), S);
            const int cj = wrap_index(j + static_cast<std::int64_t>(std::lround(dp_[y] * S)), S);
            const auto key = static_cast<std::uint32_t>(static_cast<std::size_t>(ci) * S + cj);
            cell_keys_[y] = key;
            ++cell_offsets_[key + 1];
        }
    }
    for (std::size_t c = 0; c < total; ++c) cell_offsets_[c + 1] += cell_offsets_[c];
    std::vector<std::uint32_t> fill(cell_offsets_.begin(), cell_offsets_.end() - 1);
    for (std::size_t f = 0; f < total; ++f) cell_members_[fill[cell_keys_[f]]++] = static_cast<std::uint32_t>(f);
    indexed_ = true;
}

std::span<const std::uint32_t> GridPullback::displaced_in(int row, int col_lo, int col_hi) const {
    if (!indexed_) throw std::logic_error("GridPullback: displaced index not built");
    const std::size_t S = static_cast<std::size_t>(dim_.grid_side());
    const std::size_t a = cell_offsets_[row * S + col_lo];
    const std::size_t b = cell_offsets_[row * S + col_hi + 1];
    return std::span<const std::uint32_t>(cell_members_).subspan(a, b - a);
}

void pullback_support(const PacketDensity& rho, const GridPullback& pullback, std::vector<DensitySample>& out) {
    const HilbertDim dim = pullback.dim();
    if (rho.dim() != dim) throw std::invalid_argument("pullback_support: dimension mismatch");
    const int S = dim.grid_side();
    const int N = dim.N();
    const double D = rho.normalization();
    const double a = kTwoPi * N;
    const double reach = std::sqrt(kExponentCut / a);
    // Past this size only the nearest image of the centre is ever within reach.
    const bool single_winding = reach < 0.5;
    const Packet c = rho.packet();

    std::vector<double> off_q(static_cast<std::size_t>(S)), off_p(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i) {
        off_q[i] = min_image(static_cast<double>(i) / S - c.q0);
        off_p[i] = min_image(static_cast<double>(i) / S - c.p0);
    }

    const auto dq = pullback.dev_q();
    const auto dp = pullback.dev_p();
    out.clear();
    // x contributes only if its base point y or its displaced point y + d
    // lies within `reach` of an image of the centre.
    auto visit = [&](int i, int j) {
        const std::uint32_t y = static_cast<std::uint32_t>(i * S + j);
        const double gq = rho.q_factor(i);
        const double gp = rho.p_factor(j);
        const double rho_c = D * gq * gp;
        const double sq = dq[y], sp = dp[y];
        double drho = 0.0;
        const double wq = off_q[i], wp = off_p[j];
        if ((sq != 0.0 || sp != 0.0) && std::abs(wq) - std::abs(sq) <= reach && std::abs(wp) - std::abs(sp) <= reach) {
            double eq, ep;
            if (single_winding && std::abs(wq) + std::abs(sq) < 1.0 - reach &&
                std::abs(wp) + std::abs(sp) < 1.0 - reach) {
                eq = nearest_delta(wq, sq, gq, a);
                ep = nearest_delta(wp, sp, gp, a);
            } else {
                eq = periodic_gaussian(wq, sq, N).delta;
                ep = periodic_gaussian(wp, sp, N).delta;
            }
            drho = D * (eq * (gp + ep) + gq * ep);
        }
        if (rho_c != 0.0 || drho != 0.0) out.push_back({y, rho_c, drho});
    };

    const double margin = static_cast<double>(GridPullback::kCellMargin) / S;
    const double radius = reach + margin;
    if (2.0 * radius * S + 3 >= S) {
        for (int i = 0; i < S; ++i) {
            for (int j = 0; j < S; ++j) visit(i, j);
        }
        return;
    }
    // Base points near the centre; this covers every x whose deviation is
    // below the margin.
    const int lo_q = static_cast<int>(std::floor((c.q0 - radius) * S));
    const int hi_q = static_cast<int>(std::ceil((c.q0 + radius) * S));
    const int lo_p = static_cast<int>(std::floor((c.p0 - radius) * S));
    const int hi_p = static_cast<int>(std::ceil((c.p0 + radius) * S));
    for (int ii = lo_q; ii <= hi_q; ++ii) {
        const int i = wrap_index(ii, S);
        for (int jj = lo_p; jj <= hi_p; ++jj) visit(i, wrap_index(jj, S));
    }
    if (pullback.max_deviation() <= margin) return;

    // Larger deviations: base points whose displaced point lands near the
    // centre, skipping those already visited.
    auto in_box = [&](int i, int j) {
        return wrap_index(i - lo_q, S) <= hi_q - lo_q && wrap_index(j - lo_p, S) <= hi_p - lo_p;
    };
    const int cq_lo = static_cast<int>(std::floor((c.q0 - reach) * S)) - 1;
    const int cq_hi = static_cast<int>(std::ceil((c.q0 + reach) * S)) + 1;
    const int cp_lo = static_cast<int>(std::floor((c.p0 - reach) * S)) - 1;
    const int cp_hi = static_cast<int>(std::ceil((c.p0 + reach) * S)) + 1;
    auto scan = [&](int row, int a, int b) {
        for (std::uint32_t y : pullback.displaced_in(row, a, b)) {
            const int i = static_cast<int>(y / S), j = static_cast<int>(y % S);
            if (!in_box(i, j)) visit(i, j);
        }
    };
    for (int ii = cq_lo; ii <= cq_hi; ++ii) {
        const int row = wrap_index(ii, S);
        const int a = wrap_index(cp_lo, S);
        const int b = a + (cp_hi - cp_lo);
        if (b < S) {
            scan(row, a, b);
        } else {
            scan(row, a, S - 1);
            scan(row, 0, b - S);
        }
    }
}

void pullback_density(const PacketDensity& rho, const GridPullback& pullback, GridFunction& unperturbed,
                      GridFunction& deviation) {
    const HilbertDim dim = pullback.dim();
    if (unperturbed.dim() != dim || deviation.dim() != dim) {
        throw std::invalid_argument("pullback_density: dimension mismatch");
    }
    std::vector<DensitySample> support;
    pullback_support(rho, pullback, support);
    auto uc = unperturbed.values();
    auto dv = deviation.values();
    std::fill(uc.begin(), uc.end(), 0.0);
    std::fill(dv.begin(), dv.end(), 0.0);
    for (const auto& s : support) {
        const std::uint32_t x = pullback.origin()[s.base];
        uc[x] = s.rho_c;
        dv[x] = s.drho;
    }
}

GridFunction evolve_density(Packet packet, const MapParams& params, int t, HilbertDim dim) {
    if (t < 0) throw std::invalid_argument("evolve_density: t must be >= 0");
    GridPullback pullback(dim, params);
    for (int s = 0; s < t; ++s) pullback.advance();
    const PacketDensity rho(packet, dim);
    GridFunction base(dim), dev(dim);
    pullback_density(rho, pullback, base, dev);
    auto b = base.values();
    const auto d = dev.values();
    for (std::size_t f = 0; f < b.size(); ++f) b[f] += d[f];
    return base;
}

double Deviation::norm() const { return std::hypot(q, p); }

void co_step_inverse(PhasePoint& base, Deviation& dev, const MapParams& ref, const MapParams& pert) {
    if (ref.k != pert.k) throw std::invalid_argument("co_step_inverse: maps must share k");
    const double k = ref.k;
    const double q_ref = wrap_unit(base.q - base.p);
    const double kick_ref = kick(ref, q_ref);
    const double p_ref = wrap_unit(base.p - k * q_ref - kick_ref);

    const double dq = dev.q - dev.p;
    const double q_pert = wrap_unit(q_ref + dq);
    const double dp = dev.p - k * dq - (kick(pert, q_pert) - kick_ref);

    base = {q_ref, p_ref};
    dev = {min_image(dq), min_image(dp)};
}

DeviationSeries deviation_series(PhasePoint x, const MapParams& ref, const MapParams& pert, int t_max) {
    if (ref.k != pert.k) throw std::invalid_argument("deviation_series: maps must share k");
    DeviationSeries out;
    out.exact.reserve(static_cast<std::size_t>(std::max(t_max, 0)));
    out.linearized.reserve(out.exact.capacity());

    PhasePoint base{wrap_unit(x.q), wrap_unit(x.p)};
    Deviation exact{};
    Deviation lin{};
    for (int t = 1; t <= t_max; ++t) {
        // Single-step map difference at the current reference point.
        PhasePoint probe = base;
        Deviation step{};
        co_step_inverse(probe, step, ref, pert);

        // Jacobian of phi_ref at `base`: q = q'-p', p = p' - k q - eps.Vdot(q).
        const double c = ref.k + kick_derivative(ref, probe.q);
        const Deviation next{lin.q - lin.p + step.q, -c * lin.q + (1.0 + c) * lin.p + step.p};
        lin = next;

        PhasePoint b = base;
        co_step_inverse(b, exact, ref, pert);
        base = b;

        out.exact.push_back(exact);
        out.linearized.push_back(lin);
    }
    return out;
}

Deviation anchored_deviation(Packet packet, const MapParams& params, int t) {
    const MapParams cat = params.unperturbed_copy();
    PhasePoint x{packet.q0, packet.p0};
    for (int s = 0; s < t; ++s) x = map_forward(x, cat);
    Deviation dev{};
    for (int s = 0; s < t; ++s) co_step_inverse(x, dev, cat, params);
    return dev;
}

}  // namespace catqcf
