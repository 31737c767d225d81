//! Deterministic floating-point reductions.

const LEAF: usize = 16;

/// Pairwise (cascade) summation with a fixed split, so the result depends
/// only on the input order and never on thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean of `xs` via [`pairwise_sum`]. Empty input yields 0.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
        assert_eq!(pairwise_mean(&[]), 0.0);
    }

    #[test]
    fn tighter_than_naive_on_many_small_terms() {
        let xs = vec![0.1; 1 << 20];
        let naive: f64 = xs.iter().sum();
        let exact = 0.1 * (1 << 20) as f64;
        assert!((pairwise_sum(&xs) - exact).abs() <= (naive - exact).abs());
    }
}
