use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached rules for the sizes used by the interpolation norm.
pub(crate) fn rule(n: usize) -> (&'static [f64], &'static [f64]) {
    static R32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R64: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let cell = match n {
        32 => &R32,
        64 => &R64,
        _ => {
            let leaked: &'static (Vec<f64>, Vec<f64>) = Box::leak(Box::new(gauss_legendre(n)));
            return (&leaked.0, &leaked.1);
        }
    };
    let r = cell.get_or_init(|| gauss_legendre(n));
    (&r.0, &r.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 2, 5, 32, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n - 1;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((approx - exact).abs() < 1e-13, "n = {n}: {approx} vs {exact}");
        }
    }

    #[test]
    fn nodes_are_sorted() {
        let (x, _) = gauss_legendre(32);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}
