#include "qwalk/asymptotics.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "qwalk/kspace.hpp"

namespace qwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::atomic<int> g_workers{1};

// ---------------------------------------------------------------------------
// k-averaged superoperator: rho_ij = sum_lm T[i,j,l,m] chi_l conj(chi_m).
// The pointwise P-matrix is linear in |chi><chi|, so one quadrature pass per
// (coin, weight, grid) serves every coin state.

struct Tensor {
    std::array<cplx, 256> t{};

    static size_t idx(int i, int j, int l, int m) {
        return static_cast<size_t>(((i * 4 + j) * 4 + l) * 4 + m);
    }

    void accumulate_projector(const CMatrix& p, double w) {
        for (int i = 0; i < 4; ++i)
            for (int l = 0; l < 4; ++l) {
                const cplx pil = w * p(i, l);
                if (pil == cplx{}) continue;
                for (int j = 0; j < 4; ++j)
                    for (int m = 0; m < 4; ++m)
                        t[idx(i, j, l, m)] += pil * std::conj(p(j, m));
            }
    }

    void add_scaled(const Tensor& o, double w) {
        for (size_t s = 0; s < t.size(); ++s) t[s] += w * o.t[s];
    }
    void scale(double s) {
        for (auto& e : t) e *= s;
    }

    CMatrix apply(const CVector& chi) const {
        CMatrix rho(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cplx s{};
                for (int l = 0; l < 4; ++l)
                    for (int m = 0; m < 4; ++m)
                        s += t[idx(i, j, l, m)] * chi[l] * std::conj(chi[m]);
                rho(i, j) = s;
            }
        return rho;
    }
};

enum class WeightKind { Unit, SepTrig, EntTrig, Gauss };

struct WeightBasis {
    WeightKind kind = WeightKind::Unit;
    double sigma = 0.0;

    int count() const {
        return (kind == WeightKind::SepTrig || kind == WeightKind::EntTrig) ? 3 : 1;
    }
    double eval(int t, double kx, double ky) const {
        switch (kind) {
            case WeightKind::Unit:
                return 1.0;
            case WeightKind::SepTrig:
                return t == 0 ? 1.0 : (t == 1 ? std::cos(2.0 * kx) : std::sin(2.0 * kx));
            case WeightKind::EntTrig:
                return t == 0 ? 1.0
                              : (t == 1 ? std::cos(2.0 * (kx - ky)) : std::sin(2.0 * (kx - ky)));
            case WeightKind::Gauss:
                return std::exp(-(kx * kx + ky * ky) * sigma * sigma);  // normalized post hoc
        }
        return 0.0;
    }
};

struct BasisCoeffs {
    WeightBasis basis;
    std::array<double, 3> coeffs{1.0, 0.0, 0.0};
};

BasisCoeffs decompose_weight(const PositionDistribution& pos) {
    BasisCoeffs bc;
    if (std::holds_alternative<PointMass>(pos)) {
        bc.basis.kind = WeightKind::Unit;
    } else if (const auto* s = std::get_if<TwoSiteSeparable>(&pos)) {
        bc.basis.kind = WeightKind::SepTrig;
        bc.coeffs = {1.0, std::sin(2.0 * s->alpha) * std::cos(s->beta),
                     -std::sin(2.0 * s->alpha) * std::sin(s->beta)};
    } else if (const auto* e = std::get_if<TwoSiteEntangled>(&pos)) {
        bc.basis.kind = WeightKind::EntTrig;
        bc.coeffs = {1.0, std::sin(2.0 * e->alpha) * std::cos(e->beta),
                     -std::sin(2.0 * e->alpha) * std::sin(e->beta)};
    } else if (const auto* g = std::get_if<GaussianIsotropic>(&pos)) {
        if (g->sigma <= 0.0) throw std::invalid_argument("quadrature: sigma must be > 0");
        bc.basis.kind = WeightKind::Gauss;
        bc.basis.sigma = g->sigma;
    } else {
        throw std::invalid_argument("quadrature: UniformLimit has no k-grid weight");
    }
    return bc;
}

bool is_hadamard_tensor_coin(const CoinOperator& coin) {
    if (coin.matrix.dim() != 4) return false;
    static const CMatrix hh = tensor(hadamard2(), hadamard2()).matrix;
    return (coin.matrix - hh).max_abs() < 1e-14;
}

// Closed-form rank-1 decomposition for the Hadamard coin; false near the
// degeneracy lines, where the caller takes the generic path.
bool hadamard_point_tensor(const WaveVector& k, Tensor& tk) {
    const auto sp = hadamard_closed_spectrum(k);
    if (sp.omega_plus < 1e-6 || kPi - sp.omega_minus < 1e-6) return false;
    const double omegas[4] = {sp.omega_plus, -sp.omega_plus, sp.omega_minus, -sp.omega_minus};
    for (double w : omegas) {
        CVector v;
        try {
            v = hadamard_closed_eigenvector(k, w);
        } catch (const DegeneratePointError&) {
            return false;
        }
        tk.accumulate_projector(outer(v, v), 1.0);
    }
    return true;
}

// One grid row (fixed kx) of the accumulation; wsum collects the raw weight
// totals used to normalize the Gaussian on the actual grid.
void accumulate_row(const CoinOperator& coin, const WeightBasis& wb, int m, double offset,
                    int row, std::vector<Tensor>& out, std::array<double, 3>& wsum) {
    const double h = 2.0 * kPi / m;
    const double kx = -kPi + (row + offset) * h;
    const int nw = wb.count();
    const bool fast = is_hadamard_tensor_coin(coin);
    for (int b = 0; b < m; ++b) {
        const double ky = -kPi + (b + offset) * h;
        Tensor tk;
        if (!fast || !hadamard_point_tensor({kx, ky}, tk)) {
            tk = Tensor{};
            const auto sd = unitary_eigen(build_uk(coin, {kx, ky}), 1e-9);
            for (const auto& p : sd.projectors) tk.accumulate_projector(p, 1.0);
        }
        for (int t = 0; t < nw; ++t) {
            const double w = wb.eval(t, kx, ky);
            out[static_cast<size_t>(t)].add_scaled(tk, w);
            wsum[static_cast<size_t>(t)] += w;
        }
    }
}

struct KAverage {
    std::vector<Tensor> tensors;  // one per basis function, already grid-averaged
};

KAverage compute_k_average(const CoinOperator& coin, const WeightBasis& wb, int m,
                           double offset) {
    const int nw = wb.count();
    const int workers = std::min(quadrature_workers(), m);
    std::vector<Tensor> acc(static_cast<size_t>(nw));
    std::array<double, 3> wsum{};

    // Rows are independent; even the single-worker path goes through per-row
    // partials so the combination order (and hence every rounding) is
    // identical for any worker count.
    std::vector<std::vector<Tensor>> row_out(static_cast<size_t>(m),
                                             std::vector<Tensor>(static_cast<size_t>(nw)));
    std::vector<std::array<double, 3>> row_wsum(static_cast<size_t>(m));
    auto run = [&](int w) {
        for (int row = w; row < m; row += workers)
            accumulate_row(coin, wb, m, offset, row, row_out[static_cast<size_t>(row)],
                           row_wsum[static_cast<size_t>(row)]);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& th : pool) th.join();
    for (int row = 0; row < m; ++row) {
        for (int t = 0; t < nw; ++t)
            acc[static_cast<size_t>(t)].add_scaled(row_out[static_cast<size_t>(row)][static_cast<size_t>(t)],
                                                   1.0);
        for (int t = 0; t < nw; ++t)
            wsum[static_cast<size_t>(t)] += row_wsum[static_cast<size_t>(row)][static_cast<size_t>(t)];
    }

    const double inv = 1.0 / (static_cast<double>(m) * m);
    for (auto& t : acc) t.scale(inv);
    if (wb.kind == WeightKind::Gauss) {
        // normalize on the actual grid so trace(rho) = 1 exactly
        const double mean = wsum[0] * inv;
        if (mean <= 0.0) throw std::runtime_error("quadrature: Gaussian weight vanished on grid");
        acc[0].scale(1.0 / mean);
    }
    return {std::move(acc)};
}

// Small keyed cache of k-averages; entries are shared across sweep points.
struct CacheKey {
    std::array<cplx, 16> coin{};
    WeightKind kind = WeightKind::Unit;
    double sigma = 0.0;
    int m = 0;
    double offset = 0.0;

    bool operator==(const CacheKey&) const = default;
};

CacheKey make_key(const CoinOperator& coin, const WeightBasis& wb, int m, double offset) {
    CacheKey k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) k.coin[static_cast<size_t>(i * 4 + j)] = coin.matrix(i, j);
    k.kind = wb.kind;
    k.sigma = wb.sigma;
    k.m = m;
    k.offset = offset;
    return k;
}

std::mutex g_cache_mutex;
std::deque<std::pair<CacheKey, KAverage>> g_cache;
constexpr size_t kCacheCapacity = 24;

KAverage cached_k_average(const CoinOperator& coin, const WeightBasis& wb, int m,
                          double offset) {
    const CacheKey key = make_key(coin, wb, m, offset);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        for (auto& e : g_cache)
            if (e.first == key) return e.second;
    }
    KAverage ka = compute_k_average(coin, wb, m, offset);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    for (auto& e : g_cache)
        if (e.first == key) return e.second;
    g_cache.emplace_back(key, std::move(ka));
    if (g_cache.size() > kCacheCapacity) g_cache.pop_front();
    return g_cache.back().second;
}

CMatrix density_at_grid(const CoinOperator& coin, const CoinState& chi, const BasisCoeffs& bc,
                        int m, double offset) {
    const KAverage ka = cached_k_average(coin, bc.basis, m, offset);
    Tensor combined;
    for (size_t t = 0; t < ka.tensors.size(); ++t)
        combined.add_scaled(ka.tensors[t], bc.coeffs[t]);
    return combined.apply(chi.amplitudes);
}

void validate_quad(const QuadratureSpec& q) {
    if (q.grid_points_per_axis < 16 || (q.grid_points_per_axis & (q.grid_points_per_axis - 1)))
        throw std::invalid_argument("quadrature: grid points per axis must be a power of 2, >= 16");
    if (q.offset_fraction < 0.0 || q.offset_fraction >= 1.0)
        throw std::invalid_argument("quadrature: offset fraction must be in [0, 1)");
    if (q.refine_tol <= 0.0) throw std::invalid_argument("quadrature: refine tol must be > 0");
    if (q.max_refinements < 0) throw std::invalid_argument("quadrature: max refinements < 0");
}

void validate_density(const CMatrix& rho) {
    if (hermiticity_defect(rho) > 1e-10)
        throw std::runtime_error("reduced density: Hermiticity violated beyond 1e-10");
    if (std::fabs(rho.trace().real() - 1.0) > 1e-8)
        throw std::runtime_error("reduced density: trace differs from 1 beyond 1e-8");
    const auto eig = hermitian_eigen(rho);
    if (eig.eigenvalues.front() < -1e-10)
        throw std::runtime_error("reduced density: negative eigenvalue beyond 1e-10");
}

std::string variant_name(const PositionDistribution& pos) {
    if (std::holds_alternative<PointMass>(pos)) return "point";
    if (std::holds_alternative<TwoSiteSeparable>(pos)) return "two-site-separable";
    if (std::holds_alternative<TwoSiteEntangled>(pos)) return "two-site-entangled";
    if (std::holds_alternative<GaussianIsotropic>(pos)) return "gaussian";
    return "uniform";
}

struct QuadRun {
    std::vector<std::pair<int, CMatrix>> densities;  // per grid level
    QuadratureRecord record;
};

QuadRun run_quadrature(const CoinOperator& coin, const CoinState& chi,
                       const PositionDistribution& pos, const QuadratureSpec& quad) {
    validate_quad(quad);
    if (unitarity_defect(coin.matrix) > 1e-10)
        throw std::invalid_argument("quadrature: coin is not unitary");
    if (std::fabs(chi.amplitudes.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("quadrature: coin state is not normalized");
    const BasisCoeffs bc = decompose_weight(pos);

    QuadRun run;
    int m = quad.grid_points_per_axis;
    CMatrix rho = density_at_grid(coin, chi, bc, m, quad.offset_fraction);
    run.densities.emplace_back(m, rho);
    run.record.history.emplace_back(m, 0.0);
    run.record.final_grid = m;
    run.record.converged = quad.max_refinements == 0;

    for (int r = 0; r < quad.max_refinements && !run.record.converged; ++r) {
        m *= 2;
        const CMatrix next = density_at_grid(coin, chi, bc, m, quad.offset_fraction);
        const double change = (next - rho).max_abs();
        rho = next;
        run.densities.emplace_back(m, rho);
        run.record.history.emplace_back(m, change);
        run.record.final_grid = m;
        if (change < quad.refine_tol) run.record.converged = true;
    }
    if (!run.record.converged && quad.max_refinements > 0)
        throw QuadratureNonConvergence("quadrature did not converge within the refinement budget",
                                       run.record.history);
    return run;
}

}  // namespace

void set_quadrature_workers(int n) { g_workers = std::max(1, n); }
int quadrature_workers() { return g_workers; }

CMatrix pointwise_p_matrix(const SpectralDecomposition& spec, const CoinState& chi) {
    const CMatrix rho_chi = outer(chi.amplitudes, chi.amplitudes);
    CMatrix out(rho_chi.dim());
    for (const auto& p : spec.projectors) out += p * rho_chi * p;
    return out;
}

ReducedDensity asymptotic_reduced_density(const CoinOperator& coin, const CoinState& chi,
                                          const PositionDistribution& pos,
                                          const QuadratureSpec& quad) {
    if (std::holds_alternative<UniformLimit>(pos)) return uniform_limit_reduced_density(coin, chi);
    QuadRun run = run_quadrature(coin, chi, pos, quad);
    ReducedDensity rd{run.densities.back().second, coin.label, variant_name(pos),
                      std::move(run.record)};
    validate_density(rd.matrix);
    return rd;
}

ReducedDensity uniform_limit_reduced_density(const CoinOperator& coin, const CoinState& chi) {
    const CMatrix u0 = build_uk(coin, {0.0, 0.0});
    const auto sd = unitary_eigen(u0, 1e-9);
    const CMatrix rho_chi = outer(chi.amplitudes, chi.amplitudes);

    // Shift generator for a generic approach direction; the k -> 0 limit of
    // the split decomposition is direction-independent away from the lattice
    // symmetry axes.
    const double nx = std::cos(1.0), ny = std::sin(1.0);
    CMatrix gen(4);
    gen(0, 0) = -nx;
    gen(1, 1) = ny;
    gen(2, 2) = -ny;
    gen(3, 3) = nx;

    CMatrix acc(4);
    for (const auto& p : sd.projectors) {
        const int rank = static_cast<int>(std::lround(p.trace().real()));
        if (rank <= 1) {
            acc += p * rho_chi * p;
            continue;
        }
        // Orthonormal basis of the eigenspace.
        const auto pe = hermitian_eigen(p);
        std::vector<CVector> q;
        for (int j = 0; j < 4; ++j)
            if (pe.eigenvalues[static_cast<size_t>(j)] > 0.5) {
                CVector v(4);
                for (int i = 0; i < 4; ++i) v[i] = pe.eigenvectors(i, j);
                q.push_back(v);
            }
        // First-order splitting: diagonalize the generator restricted to the block.
        CMatrix a(rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                a(i, j) = inner(q[static_cast<size_t>(i)], gen * q[static_cast<size_t>(j)]);
        a = 0.5 * (a + a.adjoint());
        const auto ae = hermitian_eigen(a);
        // Group any residual degeneracy of the splitting into sub-projectors.
        int start = 0;
        while (start < rank) {
            int end = start + 1;
            while (end < rank && ae.eigenvalues[static_cast<size_t>(end)] -
                                         ae.eigenvalues[static_cast<size_t>(end - 1)] < 1e-9)
                ++end;
            CMatrix sub(4);
            for (int c = start; c < end; ++c) {
                CVector w(4);
                for (int i = 0; i < rank; ++i)
                    for (int x = 0; x < 4; ++x)
                        w[x] += q[static_cast<size_t>(i)][x] * ae.eigenvectors(i, c);
                sub += outer(w, w);
            }
            acc += sub * rho_chi * sub;
            start = end;
        }
    }

    QuadratureRecord rec;
    rec.converged = true;
    rec.final_grid = 1;  // single point evaluation
    rec.history.emplace_back(1, 0.0);
    ReducedDensity rd{acc, coin.label, "uniform", std::move(rec)};
    validate_density(rd.matrix);
    return rd;
}

EntanglementReport asymptotic_entanglement(const CoinOperator& coin, const CoinState& chi,
                                           const PositionDistribution& pos,
                                           const QuadratureSpec& quad) {
    EntanglementReport rep;
    if (std::holds_alternative<UniformLimit>(pos)) {
        rep.density = uniform_limit_reduced_density(coin, chi);
        rep.entropy = von_neumann_entropy(rep.density.matrix);
        rep.eigenvalues = hermitian_eigen(rep.density.matrix).eigenvalues;
        rep.converged = true;
        rep.refinement_history.emplace_back(1, rep.entropy);
        return rep;
    }
    QuadRun run = run_quadrature(coin, chi, pos, quad);
    for (const auto& [m, rho] : run.densities)
        rep.refinement_history.emplace_back(m, von_neumann_entropy(rho));
    rep.converged = run.record.converged;
    rep.density = ReducedDensity{run.densities.back().second, coin.label, variant_name(pos),
                                 std::move(run.record)};
    validate_density(rep.density.matrix);
    rep.eigenvalues = hermitian_eigen(rep.density.matrix).eigenvalues;
    rep.entropy = rep.refinement_history.back().second;
    return rep;
}

double oned_closed_form_cpe(double theta, double phi) {
    const double delta0 = (std::sqrt(2.0) - 1.0) / 2.0;
    const double b1 = (2.0 - std::sqrt(2.0)) / 4.0;
    const double radicand =
        1.0 - 4.0 * (delta0 - 2.0 * b1 * b1 * std::sin(4.0 * theta) * std::cos(phi));
    if (radicand < 0.0) throw std::domain_error("oned_closed_form_cpe: negative radicand");
    const double lambda = 0.5 * (1.0 + std::sqrt(radicand));
    return binary_entropy(lambda);
}

AdditivityCheck additivity_check(double theta1, double phi1, double theta2, double phi2,
                                 const QuadratureSpec& quad) {
    const CoinOperator hh = tensor(hadamard2(), hadamard2());
    const CoinState chi = coin_separable(theta1, phi1, theta2, phi2);
    AdditivityCheck c;
    c.lhs = asymptotic_entanglement(hh, chi, PointMass{}, quad).entropy;
    c.rhs = oned_closed_form_cpe(theta1, phi1) + oned_closed_form_cpe(theta2, phi2);
    c.gap = std::fabs(c.lhs - c.rhs);
    return c;
}

}  // namespace qwalk
