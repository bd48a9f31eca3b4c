#include "beurlab/fft_ops.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace beurlab {

namespace {

// FFTW planning is not thread-safe; execution on private buffers is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

int freq_fold(int i, int n) { return i < n / 2 + n % 2 ? i : i - n; }

}  // namespace

struct ConvOperator::Impl {
    int m = 0;  // transform size: n (multiplier) or 2n (padded kernel)
    fftw_complex* buf = nullptr;
    fftw_plan fwd{};
    fftw_plan bwd{};
    std::vector<cplx> mult;  // per-bin factor, normalization folded in

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

ConvOperator::ConvOperator(Box box, int n, Kind kind, int power)
    : box_(box), n_(n), kind_(kind), power_(power) {
    if (n < 4) throw std::invalid_argument("ConvOperator: grid too small");
    if ((n & (n - 1)) != 0)
        throw std::invalid_argument("ConvOperator: grid size must be a power of two");
    if (power < 1) throw std::invalid_argument("ConvOperator: power must be >= 1");
    if (kind != Kind::beurling_multiplier && power != 1)
        throw std::invalid_argument("ConvOperator: power applies to the multiplier kind only");
    if (!box.finite() ||
        std::abs(box.width() - box.height()) > 1e-12 * std::max(box.width(), box.height()))
        throw std::invalid_argument("ConvOperator: box must be a finite square");

    impl_ = std::make_unique<Impl>();
    const int m = (kind == Kind::beurling_multiplier) ? n : 2 * n;
    impl_->m = m;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        impl_->buf = fftw_alloc_complex(static_cast<std::size_t>(m) * m);
        impl_->fwd = fftw_plan_dft_2d(m, m, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_2d(m, m, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!impl_->buf || !impl_->fwd || !impl_->bwd)
        throw std::runtime_error("ConvOperator: FFTW setup failed");

    impl_->mult.assign(static_cast<std::size_t>(m) * m, cplx{0.0, 0.0});
    const double norm = 1.0 / (static_cast<double>(m) * m);
    const double h = box.width() / n;

    if (kind == Kind::beurling_multiplier) {
        for (int j = 0; j < m; ++j) {
            const int k2 = freq_fold(j, m);
            for (int i = 0; i < m; ++i) {
                const int k1 = freq_fold(i, m);
                cplx v{0.0, 0.0};
                // Nyquist bins take the folded representative -m/2; any choice
                // keeps |ratio| = 1, so the map stays an isometry off DC.
                if (!(k1 == 0 && k2 == 0)) {
                    const cplx zeta{static_cast<double>(k1), static_cast<double>(k2)};
                    const cplx ratio = std::conj(zeta) / zeta;
                    v = cplx{1.0, 0.0};
                    for (int p = 0; p < power; ++p) v *= ratio;
                }
                impl_->mult[static_cast<std::size_t>(j) * m + i] = v * norm;
            }
        }
    } else {
        // Sample the free-space kernel at cell offsets and transform it once.
        // Offsets are confined to (-n, n); the wrap line m/2 is never touched
        // by the padded convolution and stays zero.
        std::memset(impl_->buf, 0, sizeof(fftw_complex) * static_cast<std::size_t>(m) * m);
        auto* b = reinterpret_cast<cplx*>(impl_->buf);
        for (int dj = -(n - 1); dj <= n - 1; ++dj) {
            const int bj = (dj + m) % m;
            for (int di = -(n - 1); di <= n - 1; ++di) {
                if (di == 0 && dj == 0) continue;  // self cell: symmetric, weight 0
                const int bi = (di + m) % m;
                const cplx v{h * di, h * dj};
                cplx w;
                if (kind == Kind::cauchy_free) {
                    w = h * h / (M_PI * v);
                } else {
                    w = -h * h / (M_PI * v * v);
                }
                b[static_cast<std::size_t>(bj) * m + bi] = w;
            }
        }
        fftw_execute(impl_->fwd);
        for (std::size_t k = 0; k < impl_->mult.size(); ++k)
            impl_->mult[k] = b[k] * norm;
    }
}

ConvOperator::~ConvOperator() = default;

GridFunction ConvOperator::apply(const GridFunction& f) const {
    if (f.size() != n_) throw std::invalid_argument("ConvOperator::apply: grid size mismatch");
    const Box& fb = f.box();
    const double scale = std::max(box_.width(), 1e-300);
    if (std::abs(fb.x0 - box_.x0) + std::abs(fb.y0 - box_.y0) + std::abs(fb.x1 - box_.x1) +
            std::abs(fb.y1 - box_.y1) >
        1e-9 * scale)
        throw std::invalid_argument("ConvOperator::apply: grid box mismatch");

    const int m = impl_->m;
    auto* b = reinterpret_cast<cplx*>(impl_->buf);

    if (kind_ == Kind::beurling_multiplier) {
        std::memcpy(b, f.data().data(), sizeof(cplx) * f.data().size());
    } else {
        std::memset(impl_->buf, 0, sizeof(fftw_complex) * static_cast<std::size_t>(m) * m);
        for (int j = 0; j < n_; ++j)
            std::memcpy(b + static_cast<std::size_t>(j) * m, f.data().data() + static_cast<std::size_t>(j) * n_,
                        sizeof(cplx) * n_);
    }

    fftw_execute(impl_->fwd);
    for (std::size_t k = 0; k < impl_->mult.size(); ++k) b[k] *= impl_->mult[k];
    fftw_execute(impl_->bwd);

    GridFunction out(box_, n_);
    if (kind_ == Kind::beurling_multiplier) {
        std::memcpy(out.data().data(), b, sizeof(cplx) * out.data().size());
    } else {
        for (int j = 0; j < n_; ++j)
            std::memcpy(out.data().data() + static_cast<std::size_t>(j) * n_,
                        b + static_cast<std::size_t>(j) * m, sizeof(cplx) * n_);
    }
    return out;
}

GridFunction fft_beurling(const GridFunction& f, int power) {
    ConvOperator op(f.box(), f.size(), ConvOperator::Kind::beurling_multiplier, power);
    return op.apply(f);
}

GridFunction fft_beurling_free(const GridFunction& f) {
    ConvOperator op(f.box(), f.size(), ConvOperator::Kind::beurling_free);
    return op.apply(f);
}

GridFunction fft_cauchy(const GridFunction& f) {
    ConvOperator op(f.box(), f.size(), ConvOperator::Kind::cauchy_free);
    return op.apply(f);
}

double outer_mass_fraction(const GridFunction& f) {
    const Box& bx = f.box();
    const double cx = 0.5 * (bx.x0 + bx.x1), cy = 0.5 * (bx.y0 + bx.y1);
    const double qw = 0.25 * bx.width(), qh = 0.25 * bx.height();
    double total = 0.0, outer = 0.0;
    const int n = f.size();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(f.at(i, j));
            total += a;
            const cplx z = f.point(i, j);
            if (std::abs(z.real() - cx) > qw || std::abs(z.imag() - cy) > qh) outer += a;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

}  // namespace beurlab
