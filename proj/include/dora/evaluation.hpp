#pragma once

// Precision against structural ground truth, summed-activation summaries,
// power spectra and the pooled two-sample t-test.

#include "dora/common.hpp"
#include "dora/constituency.hpp"
#include "dora/dynamics.hpp"

#include <optional>
#include <vector>

namespace dora {

// Sum of predicted mass where truth = 1 over the total predicted mass,
// both off the diagonal. No value when the truth has no ones or nothing is
// predicted.
template <typename Derived1, typename Derived2>
std::optional<double> precision(const Eigen::MatrixBase<Derived1>& predicted, const Eigen::MatrixBase<Derived2>& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
        throw std::invalid_argument("precision: matrices differ in shape");
    double hit = 0.0, total = 0.0, ones = 0.0;
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
        for (Eigen::Index j = 0; j < truth.cols(); ++j) {
            if (i == j) continue;
            const double p = static_cast<double>(predicted(i, j));
            total += p;
            if (truth(i, j) > 0) {
                hit += p;
                ones += 1.0;
            }
        }
    if (ones == 0.0 || total <= 0.0) return std::nullopt;
    return hit / total;
}

Matrix<double> baseline_matrix(Eigen::Index n);

// m(i,j) = 1 iff i != j and both sequences have the same structure
// signature (the same pushout class at every level).
Matrix<double> truth_matrix(const std::vector<syntax::Words>& sentences, const syntax::Grammar& grammar);

struct LayerSums {
    double p = 0.0;
    double rb = 0.0;
    double po = 0.0;
};

// Total activation per layer for each trace, optionally restricted to a bank.
std::vector<LayerSums> summed_activation_trace(const std::vector<ActivationTrace>& traces,
                                               std::optional<Bank> bank = std::nullopt);

struct SpectralPeak {
    std::size_t bin = 0;
    double frequency = 0.0;
    double power = 0.0;
};

struct SpectrumResult {
    std::vector<double> frequencies; // 0 .. rate/2
    std::vector<double> power;       // one-sided; sums to the mean-removed energy
    std::vector<SpectralPeak> peaks;
    double resolution = 0.0;

    // A detected peak within `tolerance_bins` of hz.
    bool has_peak_near(double hz, std::size_t tolerance_bins = 1) const;
};

// Mean removed, one-sided power |X_k|^2 / N (doubled off DC and Nyquist).
// A peak is a local maximum of at least peak_factor times the median power
// over the non-DC bins. Bins under 1e-12 of the total power never count.
SpectrumResult power_spectrum(const std::vector<double>& series, double sample_rate, double peak_factor = 3.0);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

// Pooled-variance two-sample t-test, two-sided p.
TTestResult t_test_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double df);

} // namespace dora
