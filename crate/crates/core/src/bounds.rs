//! Constants of the running-time analysis.

/// The golden ratio, growth base of `T(μ) = T(μ−1) + T(μ−2)`.
pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Base `1 + φ²` of the overall `O*((1 + φ²)^k)` bound.
pub fn ifvs_bound_base() -> f64 {
    1.0 + golden_ratio().powi(2)
}

/// Fibonacci numbers with `fib(1) = fib(2) = 1` and `fib(n) = 0` for `n <= 0`.
pub fn fib(n: i64) -> u128 {
    if n <= 0 {
        return 0;
    }
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 1..n {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    b
}

/// Upper bound on the number of leaves with non-negative measure in a search tree rooted at
/// measure `mu0`.
pub fn leaf_bound(mu0: i64) -> u128 {
    fib(mu0 + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        let first: Vec<u128> = (0..10).map(fib).collect();
        assert_eq!(first, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
        assert_eq!(fib(-3), 0);
        assert_eq!(leaf_bound(0), 1);
        assert_eq!(leaf_bound(3), 5);
    }

    #[test]
    fn bound_base_below_3619() {
        let phi = golden_ratio();
        assert!(phi < 1.619);
        assert!((phi * phi - phi - 1.0).abs() < 1e-12);
        assert!(ifvs_bound_base() < 3.619);
        assert!((ifvs_bound_base() - (phi + 2.0)).abs() < 1e-12);
    }
}
