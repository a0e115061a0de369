//! Orthogonal polynomials and log-gamma.

/// Generalized Laguerre polynomial `L_n^α(x)` by the ascending three-term
/// recurrence
/// `(k+1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}`.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 1.0 + alpha - x;
    for k in 1..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - x) * curr - (kf + alpha) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `d^order/dx^order L_n^α(x) = (−1)^order L_{n−order}^{α+order}(x)`.
pub fn laguerre_derivative(n: u32, alpha: f64, x: f64, order: u32) -> f64 {
    if order > n {
        return 0.0;
    }
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * laguerre(n - order, alpha + f64::from(order), x)
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the standard three-term recurrence.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 0.5 * (a - b + (a + b + 2.0) * x);
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c2 * curr - c3 * prev) / c1;
        prev = curr;
        curr = next;
    }
    curr
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(f64::from(n) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        for &(alpha, x) in &[(0.0, 0.3), (1.5, 2.0), (-0.4, 7.0)] {
            assert_eq!(laguerre(0, alpha, x), 1.0);
            assert!((laguerre(1, alpha, x) - (1.0 + alpha - x)).abs() < 1e-15);
        }
        // (α+1)(α+2)/2 − (α+2)x + x²/2 at α = 1, x = 2
        assert!((laguerre(2, 1.0, 2.0) + 1.0).abs() < 1e-15);
        assert!(laguerre(1, 1.0, 2.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_sum_agrees() {
        // L_n^α(x) = Σ_i (−1)^i C(n+α, n−i) x^i / i!
        fn explicit(n: u32, alpha: f64, x: f64) -> f64 {
            (0..=n)
                .map(|i| {
                    let ln_binom = ln_gamma(f64::from(n) + alpha + 1.0)
                        - ln_gamma(f64::from(n - i) + 1.0)
                        - ln_gamma(alpha + f64::from(i) + 1.0);
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    sign * ln_binom.exp() * x.powi(i as i32) / ln_factorial(i).exp()
                })
                .sum()
        }
        for n in 0..8 {
            for &alpha in &[0.5, 1.0, 2.7] {
                for &x in &[0.1, 1.3, 4.0] {
                    let (a, b) = (laguerre(n, alpha, x), explicit(n, alpha, x));
                    assert!(
                        (a - b).abs() < 1e-11 * (1.0 + b.abs()),
                        "n={n} α={alpha} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_identity_against_finite_difference() {
        let (n, alpha, x, h) = (5, 1.3, 2.2, 1e-5);
        let fd = (laguerre(n, alpha, x + h) - laguerre(n, alpha, x - h)) / (2.0 * h);
        assert!((laguerre_derivative(n, alpha, x, 1) - fd).abs() < 1e-8);
        let fd2 = (laguerre(n, alpha, x + h) - 2.0 * laguerre(n, alpha, x)
            + laguerre(n, alpha, x - h))
            / (h * h);
        assert!((laguerre_derivative(n, alpha, x, 2) - fd2).abs() < 1e-4);
        assert_eq!(laguerre_derivative(0, alpha, x, 1), 0.0);
    }

    #[test]
    fn jacobi_known_values() {
        let (a, b) = (0.7, 1.9);
        assert_eq!(jacobi(0, a, b, 0.2), 1.0);
        let p1 = (a + 1.0) + (a + b + 2.0) * (0.2 - 1.0) / 2.0;
        assert!((jacobi(1, a, b, 0.2) - p1).abs() < 1e-15);
        // P_n(1) = C(n + a, n)
        for n in 0..7u32 {
            let binom =
                (ln_gamma(f64::from(n) + a + 1.0) - ln_gamma(a + 1.0) - ln_factorial(n)).exp();
            assert!((jacobi(n, a, b, 1.0) - binom).abs() < 1e-12 * binom.max(1.0));
        }
        // Legendre special case P_2(x) = (3x² − 1)/2
        assert!((jacobi(2, 0.0, 0.0, 0.4) - (3.0 * 0.16 - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(1.0).abs() < 1e-15);
        assert!(ln_gamma(2.0).abs() < 1e-15);
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-15);
        assert!((ln_factorial(10) - 3_628_800f64.ln()).abs() < 1e-13);
        // large argument stays finite
        assert!(ln_gamma(150.0).is_finite());
    }
}
