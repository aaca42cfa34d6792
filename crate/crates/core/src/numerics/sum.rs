/// Pairwise (tree) summation.
///
/// Error grows like O(log n) instead of O(n) for the naive left fold, and
/// the accumulation order is fixed, so results are reproducible regardless
/// of how callers schedule the surrounding work.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_small_inputs() {
        let v = [1.0, 2.0, 3.5, -0.5];
        assert_eq!(pairwise_sum(&v), 6.0);
    }

    #[test]
    fn large_alternating_sum() {
        // 1 - 1 + 1 - 1 ... over an odd count leaves exactly 1.
        let v: Vec<f64> = (0..100_001)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        assert_eq!(pairwise_sum(&v), 1.0);
    }

    #[test]
    fn accurate_on_long_uniform_input() {
        // 10^6 copies of 0.1: pairwise error is O(log n) ulps of the total
        let v = vec![0.1f64; 1_000_000];
        let err = (pairwise_sum(&v) - 1e5).abs();
        assert!(err < 1e-9, "error {err}");
    }
}
