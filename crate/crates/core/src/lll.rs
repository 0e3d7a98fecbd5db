//! Integer LLL lattice reduction and algebraic-number recognition: build the
//! integer-relation lattice on the powers of a high-precision value, reduce,
//! and accept the lowest-height candidate polynomial that nearly vanishes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_digits, eval_int_poly, BigFloat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub digits: u32,
    pub target_digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32, target_digits: u32) -> Self {
        assert!(digits >= 16, "working precision below 16 digits");
        assert!(target_digits >= digits, "target precision below working precision");
        PrecisionContext { digits, target_digits }
    }

    pub fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    pub fn target_bits(&self) -> u32 {
        bits_for_digits(self.target_digits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LllError {
    PrecisionTooLow { digits: u32, recommended: u32 },
}

impl fmt::Display for LllError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LllError::PrecisionTooLow { digits, recommended } => write!(
                f,
                "precision too low: {digits} digits; use at least {recommended}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LllError {}

/// In-place LLL reduction with Lovász parameter `delta`, in the all-integer
/// formulation: `d[i]` are the Gram determinants and `lambda[i][j]` the
/// scaled Gram–Schmidt coefficients, updated incrementally.
pub fn lll_reduce(basis: &mut [Vec<BigInt>], delta: &BigRational) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };
    let mut d: Vec<BigInt> = vec![BigInt::one(); n + 1];
    let mut lambda: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot(&basis[i], &basis[j]);
            for k in 0..j {
                u = (&d[k + 1] * &u - &lambda[i][k] * &lambda[j][k]) / &d[k];
            }
            if j < i {
                lambda[i][j] = u;
            } else {
                d[i + 1] = u;
            }
        }
        assert!(!d[i + 1].is_zero(), "lll_reduce requires a linearly independent basis");
    }
    // λ[k][l] ← λ[k][l] − q·d[l+1] by subtracting q·b_l from b_k
    let redi = |basis: &mut [Vec<BigInt>],
                lambda: &mut Vec<Vec<BigInt>>,
                d: &[BigInt],
                k: usize,
                l: usize| {
        let two = BigInt::from(2);
        if &two * lambda[k][l].abs() > d[l + 1] {
            // q = round(λ/d)
            let q = {
                use num_integer::Integer;
                (&two * &lambda[k][l] + &d[l + 1]).div_floor(&(&two * &d[l + 1]))
            };
            if !q.is_zero() {
                let row = basis[l].clone();
                for (x, y) in basis[k].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
                lambda[k][l] -= &q * &d[l + 1];
                for j in 0..l {
                    let t = &q * &lambda[l][j];
                    lambda[k][j] -= t;
                }
            }
        }
    };
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let mut k = 1usize;
    while k < n {
        redi(basis, &mut lambda, &d, k, k - 1);
        let lam = lambda[k][k - 1].clone();
        // Lovász: q·d[k+1]·d[k−1] ≥ p·d[k]² − q·λ²
        if &dq * &d[k + 1] * &d[k - 1] < &dp * &d[k] * &d[k] - &dq * &lam * &lam {
            basis.swap(k, k - 1);
            for j in 0..k.saturating_sub(1) {
                let t = lambda[k][j].clone();
                lambda[k][j] = lambda[k - 1][j].clone();
                lambda[k - 1][j] = t;
            }
            let b = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
            for i in k + 1..n {
                let t = lambda[i][k].clone();
                lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
                lambda[i][k - 1] = (&b * &t + &lam * &lambda[i][k]) / &d[k + 1];
            }
            d[k] = b;
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                redi(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraicGuess {
    pub value: BigFloat,
    /// Ascending integer coefficients, content 1, positive leading
    /// coefficient.
    pub min_poly: Vec<BigInt>,
    pub residual: BigFloat,
    pub height: BigInt,
}

impl AlgebraicGuess {
    pub fn poly_degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn display_poly(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.min_poly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                s.push('-');
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                s.push_str(&format!("{a}"));
            }
            if i == 1 {
                s.push('X');
            } else if i > 1 {
                s.push_str(&format!("X^{i}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Acceptance bounds as exponents of `10^(factor · digits)`.
#[derive(Clone, Copy, Debug)]
pub struct LllConfig {
    /// Residual must be below `10^(−residual_factor · digits)`.
    pub residual_factor: f64,
    /// Height must be below `10^(height_factor · digits)`.
    pub height_factor: f64,
}

impl Default for LllConfig {
    fn default() -> Self {
        LllConfig { residual_factor: 0.5, height_factor: 0.1 }
    }
}

pub fn lll_recognize(
    x: &BigFloat,
    max_degree: usize,
    ctx: &PrecisionContext,
) -> Result<Option<AlgebraicGuess>, LllError> {
    lll_recognize_with(x, max_degree, ctx, &LllConfig::default())
}

/// Integer-relation search on `(1, x, …, x^max_degree)` scaled by
/// `10^digits`, reduced with δ = 0.99.
pub fn lll_recognize_with(
    x: &BigFloat,
    max_degree: usize,
    ctx: &PrecisionContext,
    config: &LllConfig,
) -> Result<Option<AlgebraicGuess>, LllError> {
    assert!(max_degree >= 1);
    let needed = (16 + 2 * max_degree as u32).max(24);
    if ctx.digits < needed {
        return Err(LllError::PrecisionTooLow { digits: ctx.digits, recommended: needed });
    }
    let prec = ctx.bits() + 64;
    let scale = BigFloat::pow10(ctx.digits as i64, prec);
    let dim = max_degree + 1;
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    let mut power = BigFloat::from_i64(1);
    for i in 0..dim {
        let mut row = vec![BigInt::zero(); dim + 1];
        row[i] = BigInt::one();
        row[dim] = power.mul(&scale, prec).round_bigint();
        basis.push(row);
        power = power.mul(x, prec);
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    lll_reduce(&mut basis, &delta);
    let residual_bound_log2 =
        -(config.residual_factor * ctx.digits as f64 * core::f64::consts::LOG2_10);
    let height_bound_log2 = config.height_factor * ctx.digits as f64 * core::f64::consts::LOG2_10;
    let mut best: Option<AlgebraicGuess> = None;
    for row in &basis {
        let mut coeffs = row[..dim].to_vec();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            continue; // constants are not relations
        }
        // divide out powers of X picked up by the lattice
        while coeffs.len() > 2 && coeffs[0].is_zero() {
            coeffs.remove(0);
        }
        let mut content = BigInt::zero();
        for c in &coeffs {
            content = gcd_bigint(&content, c);
        }
        if !content.is_one() {
            for c in coeffs.iter_mut() {
                *c /= &content;
            }
        }
        if coeffs.last().unwrap().is_negative() {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        let height = coeffs.iter().map(|c| c.abs()).max().unwrap();
        if (height.bits() as f64) > height_bound_log2 + 1.0 {
            continue;
        }
        let residual = eval_int_poly(&coeffs, x, prec).abs();
        let res_log2 = residual.log2_abs().map_or(f64::NEG_INFINITY, |e| e as f64);
        if res_log2 > residual_bound_log2 {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                (&height, coeffs.len()) < (&b.height, b.min_poly.len())
            }
        };
        if better {
            best = Some(AlgebraicGuess { value: x.clone(), min_poly: coeffs, residual, height });
        }
    }
    Ok(best)
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn ctx(digits: u32) -> PrecisionContext {
        PrecisionContext::new(digits, digits)
    }

    #[test]
    fn recognizes_sqrt_two() {
        let c = ctx(100);
        let x = BigFloat::from_i64(2).sqrt(c.bits() + 64);
        let g = lll_recognize(&x, 2, &c).unwrap().expect("√2 is quadratic");
        assert_eq!(
            g.min_poly,
            vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)]
        );
        assert_eq!(g.display_poly(), "X^2 - 2");
    }

    #[test]
    fn recognizes_golden_ratio() {
        let c = ctx(100);
        let prec = c.bits() + 64;
        let phi = BigFloat::from_i64(5)
            .sqrt(prec)
            .add(&BigFloat::from_i64(1), prec)
            .div(&BigFloat::from_i64(2), prec);
        let g = lll_recognize(&phi, 2, &c).unwrap().expect("φ is quadratic");
        assert_eq!(
            g.min_poly,
            vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]
        );
    }

    #[test]
    fn recognizes_random_rationals() {
        let c = ctx(60);
        let prec = c.bits() + 64;
        let mut rng = Rng::from_seed(42);
        for _ in 0..120 {
            let a = rng.below(2001) as i64 - 1000;
            let b = rng.below(999) as i64 + 1;
            let x = BigFloat::from_i64(a).div(&BigFloat::from_i64(b), prec);
            let g = lll_recognize(&x, 3, &c).unwrap().expect("rationals are degree 1");
            let d = num_integer::gcd(a, b);
            assert_eq!(
                g.min_poly,
                vec![BigInt::from(-a / d), BigInt::from(b / d)],
                "failed for {a}/{b}"
            );
        }
    }

    #[test]
    fn rejects_noise() {
        let c = ctx(30);
        let prec = c.bits() + 64;
        let mut rng = Rng::from_seed(7);
        let mut accepts = 0;
        for _ in 0..25 {
            // 30 digits of uniform noise in (0, 1)
            let mut x = BigFloat::zero();
            for k in 1..=30 {
                let digit = BigFloat::from_i64(rng.below(10) as i64);
                x = x.add(&digit.mul(&BigFloat::pow10(-k, prec), prec), prec);
            }
            if lll_recognize(&x, 7, &c).unwrap().is_some() {
                accepts += 1;
            }
        }
        assert_eq!(accepts, 0);
    }

    #[test]
    fn precision_error_reported() {
        let x = BigFloat::from_i64(2).sqrt(256);
        let c = PrecisionContext::new(20, 20);
        assert!(matches!(
            lll_recognize(&x, 7, &c),
            Err(LllError::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn reduction_shortens_basis() {
        // classic 2D example: (1, 0), (4, 1) style lattice
        let mut basis = vec![
            vec![BigInt::from(47), BigInt::from(215)],
            vec![BigInt::from(95), BigInt::from(460)],
        ];
        let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
        lll_reduce(&mut basis, &delta);
        let norm = |v: &[BigInt]| -> BigInt { v.iter().map(|x| x * x).sum() };
        assert!(norm(&basis[0]) <= norm(&basis[1]));
        assert!(norm(&basis[0]) < BigInt::from(47 * 47 + 215 * 215));
    }
}
