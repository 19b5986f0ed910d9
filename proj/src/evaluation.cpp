#include "dora/evaluation.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace dora {

Matrix<double> baseline_matrix(Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("baseline_matrix: n must be at least 2");
    return Matrix<double>::Constant(n, n, 1.0 / static_cast<double>(n));
}

Matrix<double> truth_matrix(const std::vector<syntax::Words>& sentences, const syntax::Grammar& grammar) {
    const auto n = static_cast<Eigen::Index>(sentences.size());
    std::vector<std::vector<syntax::TimePattern>> sig;
    sig.reserve(sentences.size());
    for (const auto& s : sentences) sig.push_back(syntax::structure_signature(s, grammar));
    Matrix<double> m = Matrix<double>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && sig[static_cast<std::size_t>(i)] == sig[static_cast<std::size_t>(j)]) m(i, j) = 1.0;
    return m;
}

std::vector<LayerSums> summed_activation_trace(const std::vector<ActivationTrace>& traces, std::optional<Bank> bank) {
    std::vector<LayerSums> out;
    for (const auto& tr : traces) {
        LayerSums s;
        for (std::size_t c = 0; c < tr.columns.size(); ++c) {
            const auto& col = tr.columns[c];
            if (bank && col.bank != *bank) continue;
            double total = 0.0;
            for (const auto& row : tr.rows) total += row[c];
            switch (col.layer) {
            case Layer::P: s.p += total; break;
            case Layer::RB: s.rb += total; break;
            case Layer::PO: s.po += total; break;
            }
        }
        out.push_back(s);
    }
    return out;
}

bool SpectrumResult::has_peak_near(double hz, std::size_t tolerance_bins) const {
    for (const auto& pk : peaks)
        if (std::abs(pk.frequency - hz) <= resolution * static_cast<double>(tolerance_bins) + 1e-12) return true;
    return false;
}

SpectrumResult power_spectrum(const std::vector<double>& series, double sample_rate, double peak_factor) {
    if (series.size() < 2) throw std::invalid_argument("power_spectrum: need at least two samples");
    if (!(sample_rate > 0)) throw std::invalid_argument("power_spectrum: sample rate must be positive");
    const std::size_t n = series.size();
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    std::transform(series.begin(), series.end(), x.begin(), [&](double v) { return v - mean; });

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, x);

    SpectrumResult out;
    out.resolution = sample_rate / static_cast<double>(n);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k <= half; ++k) {
        double p = std::norm(spec[k]) / static_cast<double>(n);
        const bool nyquist = n % 2 == 0 && k == half;
        if (k != 0 && !nyquist) p *= 2.0;
        out.frequencies.push_back(static_cast<double>(k) * out.resolution);
        out.power.push_back(p);
    }

    const double total = std::accumulate(out.power.begin(), out.power.end(), 0.0);
    if (total <= 0.0 || out.power.size() < 3) return out;
    std::vector<double> rest(out.power.begin() + 1, out.power.end());
    std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2), rest.end());
    const double median = rest[rest.size() / 2];
    const double floor = 1e-12 * total;
    for (std::size_t k = 1; k < out.power.size(); ++k) {
        const double p = out.power[k];
        const double left = out.power[k - 1];
        const double right = k + 1 < out.power.size() ? out.power[k + 1] : 0.0;
        if (p > left && p >= right && p >= peak_factor * median && p > floor)
            out.peaks.push_back({k, out.frequencies[k], p});
    }
    return out;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Continued fraction converges fast for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x)) / a;
    // Modified Lentz.
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    double f = 1.0, c = 1.0, d = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const int m = i / 2;
        double num;
        if (i == 0) num = 1.0;
        else if (i % 2 == 0) num = (m * (b - m) * x) / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        else num = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        const double cd = c * d;
        f *= cd;
        if (std::abs(1.0 - cd) < eps) return front * (f - 1.0);
    }
    return front * (f - 1.0);
}

double student_t_two_sided_p(double t, double df) {
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult t_test_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t_test_two_sample: each sample needs at least two values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;
    double ssa = 0.0, ssb = 0.0;
    for (double v : a) ssa += (v - ma) * (v - ma);
    for (double v : b) ssb += (v - mb) * (v - mb);
    TTestResult r;
    r.df = na + nb - 2.0;
    const double pooled = (ssa + ssb) / r.df;
    const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    if (se == 0.0) {
        if (ma == mb) return {0.0, 1.0, r.df};
        r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        r.p = 0.0;
        return r;
    }
    r.t = (ma - mb) / se;
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

} // namespace dora
