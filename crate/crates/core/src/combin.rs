//! Log-domain combinatorics.
//!
//! Binomial coefficients here routinely exceed anything representable in
//! fixed-width integers (search spaces are thousands of bits wide), so all
//! arithmetic stays in the log domain.

use rand::Rng;

const LN_2: f64 = std::f64::consts::LN_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// Lanczos approximation (g = 7, 9 coefficients), accurate to roughly 1e-15
/// relative error for positive arguments.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for strictly positive arguments.
pub fn ln_gamma(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    let z = z - 1.0;
    let mut x = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Natural log of `n!`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Natural log of the binomial coefficient `C(n, k)`.
/// Returns negative infinity when `k > n` (the coefficient is zero).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Base-2 log of `C(n, k)`; the conventional unit for search-space sizes.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    let ln = ln_binomial(n, k);
    if ln == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        ln / LN_2
    }
}

/// Samples an index with probability proportional to `exp(ln_weights[i])`.
/// Entries of negative infinity have probability zero. Returns `None` when
/// every weight is zero.
pub(crate) fn sample_ln_weights<R: Rng + ?Sized>(ln_weights: &[f64], rng: &mut R) -> Option<usize> {
    let max = ln_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let scaled: Vec<f64> = ln_weights.iter().map(|w| (w - max).exp()).collect();
    let total: f64 = scaled.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, w) in scaled.iter().enumerate() {
        target -= w;
        if target <= 0.0 {
            return Some(i);
        }
    }
    // Floating-point slack: fall back to the last non-zero entry.
    scaled.iter().rposition(|&w| w > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact binomials for small arguments, for cross-checking.
    fn exact_binomial(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * u128::from(n - i) / u128::from(i + 1);
        }
        acc
    }

    #[test]
    fn matches_exact_values_for_small_arguments() {
        for n in 0..=40u64 {
            for k in 0..=n {
                let exact = exact_binomial(n, k) as f64;
                let approx = ln_binomial(n, k).exp();
                let rel = (approx - exact).abs() / exact;
                assert!(rel < 1e-11, "C({n},{k}): exact {exact}, approx {approx}");
            }
        }
    }

    #[test]
    fn known_log2_values() {
        // C(8, 3) = 56
        assert!((log2_binomial(8, 3) - 5.807354922057604).abs() < 1e-12);
        // Search-space size for e = 768 of c = 2560 clauses.
        let big = log2_binomial(2560, 768);
        assert!(
            (big - 2250.2435826325845).abs() / 2250.2435826325845 < 1e-9,
            "got {big}"
        );
    }

    #[test]
    fn edge_cases() {
        assert_eq!(log2_binomial(8, 0), 0.0);
        assert_eq!(log2_binomial(8, 8), 0.0);
        assert_eq!(log2_binomial(3, 5), f64::NEG_INFINITY);
        assert!(ln_factorial(0).abs() < 1e-13);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn symmetry_holds_for_large_arguments() {
        let a = ln_binomial(100_000, 1_234);
        let b = ln_binomial(100_000, 98_766);
        assert!((a - b).abs() < 1e-8 * a.abs());
    }

    #[test]
    fn weighted_sampling_respects_zero_weights() {
        let mut rng = rand::rng();
        let weights = [f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY];
        for _ in 0..100 {
            assert_eq!(sample_ln_weights(&weights, &mut rng), Some(1));
        }
        assert_eq!(sample_ln_weights(&[f64::NEG_INFINITY; 3], &mut rng), None);
    }
}
