use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, positive half only.
///
/// For odd orders the middle node `0` is stored first with its weight; the
/// remaining nodes are mirrored.
#[derive(Debug)]
pub struct GaussRule {
    pub order: usize,
    pub prec: u32,
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussRule {
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    /// `(node, weight)` pairs mapped to `[a, b]`, all nodes included.
    pub fn mapped(&self, a: &Float, b: &Float) -> Vec<(Float, Float)> {
        let p = self.prec;
        let half = Float::with_val(p, b - a) / 2u32;
        let mid = Float::with_val(p, a + b) / 2u32;
        let mut out = Vec::with_capacity(self.order);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let dx = Float::with_val(p, &half * x);
            let ww = Float::with_val(p, &half * w);
            if x.is_zero() {
                out.push((mid.clone(), ww));
            } else {
                out.push((Float::with_val(p, &mid - &dx), ww.clone()));
                out.push((Float::with_val(p, &mid + &dx), ww));
            }
        }
        out
    }

    /// `int_a^b f` by this rule.
    pub fn integrate<F: Fn(&Float) -> Float>(&self, a: &Float, b: &Float, f: F) -> Float {
        let mut acc = Float::new(self.prec);
        for (x, w) in self.mapped(a, b) {
            acc += w * f(&x);
        }
        acc
    }
}

type Cache = Mutex<HashMap<(usize, u32), Arc<GaussRule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `order`-point rule at `prec` bits, computed once per process.
pub fn gauss_legendre(order: usize, prec: u32) -> Arc<GaussRule> {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    if let Some(rule) = cache().lock().unwrap().get(&(order, prec)) {
        return rule.clone();
    }
    let rule = Arc::new(compute(order, prec));
    cache()
        .lock()
        .unwrap()
        .entry((order, prec))
        .or_insert(rule)
        .clone()
}

/// `(P_N(x), P_N'(x))` by the three-term recurrence.
fn legendre(order: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=order {
        let k = k as u32;
        // k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
        let mut p2 = Float::with_val(prec, x * &p1);
        p2 *= 2 * k - 1;
        p2 -= Float::with_val(prec, &p0 * (k - 1));
        p2 /= k;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (Float::with_val(prec, 1), Float::new(prec));
    }
    // (x^2 - 1) P_N' = N (x P_N - P_{N-1})
    let x2m1 = Float::with_val(prec, x * x) - 1u32;
    let mut dp = Float::with_val(prec, x * &p1) - &p0;
    dp *= order as u32;
    dp /= x2m1;
    (p1, dp)
}

fn compute(order: usize, prec: u32) -> GaussRule {
    // Newton works a little above the requested precision so the stored
    // nodes are correctly rounded to `prec`.
    let wp = prec + 32;
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let half = order / 2;
    let mut nodes = Vec::with_capacity(half + 1);
    let mut weights = Vec::with_capacity(half + 1);
    let mut push = |x: Float, dp: &Float| {
        let one_minus = Float::with_val(wp, 1u32 - Float::with_val(wp, &x * &x));
        let w = Float::with_val(wp, 2u32 / (one_minus * Float::with_val(wp, dp * dp)));
        nodes.push(Float::with_val(prec, &x));
        weights.push(Float::with_val(prec, &w));
    };
    if order % 2 == 1 {
        let x = Float::new(wp);
        let (_, dp) = legendre(order, &x, wp);
        push(x, &dp);
    }
    let nf = order as f64;
    for i in (0..half).rev() {
        // Tricomi's initial guess for the i-th root (largest first at i = 0).
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let guess = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for _ in 0..100 {
            let (p, d) = legendre(order, &x, wp);
            let dx = Float::with_val(wp, &p / &d);
            x -= &dx;
            dp = d;
            if dx.abs() <= eps {
                let (_, d) = legendre(order, &x, wp);
                dp = d;
                break;
            }
        }
        push(x, &dp);
    }
    GaussRule {
        order,
        prec,
        nodes,
        weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn weights_sum_to_two_and_nodes_are_roots() {
        for order in [1usize, 2, 5, 16, 33] {
            let rule = gauss_legendre(order, 200);
            let a = Float::with_val(200, -1);
            let b = Float::with_val(200, 1);
            let total = rule.integrate(&a, &b, |_| Float::with_val(200, 1));
            assert!((total - 2u32).abs() < 1e-55, "order {order}");
            assert_eq!(rule.mapped(&a, &b).len(), order);
            for x in rule.nodes() {
                let (p, _) = legendre(order, x, 200);
                assert!(p.abs() < 1e-50);
            }
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let order = 8;
        let rule = gauss_legendre(order, 256);
        let a = Float::with_val(256, 0);
        let b = Float::with_val(256, 3);
        for deg in 0..(2 * order as u32) {
            let got = rule.integrate(&a, &b, |x| Float::with_val(256, x.pow(deg)));
            let exact = Float::with_val(256, Float::with_val(256, 3).pow(deg + 1)) / (deg + 1);
            let rel = Float::with_val(256, (got - &exact) / exact).abs();
            assert!(rel < 1e-70, "degree {deg}");
        }
    }

    #[test]
    fn cached_rules_are_shared() {
        let r1 = gauss_legendre(24, 128);
        let r2 = gauss_legendre(24, 128);
        assert!(Arc::ptr_eq(&r1, &r2));
    }
}
