//! Belyi map candidates `f = p/q` and their ramification data.
//!
//! The fiber over 0 is cut out by `p`, over ∞ by `q`, and over 1 by
//! `r := p − q`; when the numerator and denominator degrees differ, the point
//! at infinity contributes the degree gap to exactly one fiber.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::perm::CycleType;
use crate::poly::{Poly, SquarefreeField};
use crate::ring::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    /// `gcd(p, q) ≠ 1`.
    CommonFactor,
    ZeroDenominator,
    /// Both parts constant.
    ConstantMap,
    /// The characteristic divides a root multiplicity.
    WildRamification { multiplicity: usize },
    /// 0/0 during evaluation (unreduced candidate).
    CommonRoot,
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::CommonFactor => write!(f, "numerator and denominator share a factor"),
            MapError::ZeroDenominator => write!(f, "denominator is the zero polynomial"),
            MapError::ConstantMap => write!(f, "map must have degree >= 1"),
            MapError::WildRamification { multiplicity } => {
                write!(f, "wild ramification unsupported (characteristic divides multiplicity {multiplicity})")
            }
            MapError::CommonRoot => write!(f, "common root; candidate not reduced"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MapError {}

/// A rational map `p/q` with coprime parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BelyiCandidate<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> BelyiCandidate<F> {
    pub fn new(ring: &F, num: Poly<F>, den: Poly<F>) -> Result<Self, MapError> {
        if den.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        if num.is_constant() && den.is_constant() {
            return Err(MapError::ConstantMap);
        }
        if !num.is_zero() && !num.gcd(ring, &den).is_constant() {
            return Err(MapError::CommonFactor);
        }
        Ok(BelyiCandidate { num, den })
    }

    /// A polynomial map `p/1`.
    pub fn polynomial(ring: &F, num: Poly<F>) -> Result<Self, MapError> {
        Self::new(ring, num, Poly::one(ring))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    /// `r := p − q`, the fiber-over-1 polynomial.
    pub fn r(&self, ring: &F) -> Poly<F> {
        self.num.sub(ring, &self.den)
    }

    /// Degree of the map as a covering.
    pub fn degree(&self) -> usize {
        self.num.deg_or0().max(self.den.deg_or0())
    }

    /// Maps coefficients into another field (degrees must survive; checked by
    /// the callers that care, e.g. prime reduction).
    pub fn map<G: Field>(&self, to: &G, f: impl Fn(&F::El) -> G::El) -> BelyiCandidate<G> {
        BelyiCandidate { num: self.num.map(to, &f), den: self.den.map(to, &f) }
    }

    /// Builds without the coprimality check (for internal construction where
    /// the invariant is known or checked separately).
    pub fn new_unchecked(num: Poly<F>, den: Poly<F>) -> Self {
        BelyiCandidate { num, den }
    }
}

/// `p(x0)/q(x0)`, projectively.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value<T> {
    Finite(T),
    Infinity,
}

pub fn evaluate_map<F: Field>(
    ring: &F,
    m: &BelyiCandidate<F>,
    x0: &F::El,
) -> Result<Value<F::El>, MapError> {
    let p = m.num.eval(ring, x0);
    let q = m.den.eval(ring, x0);
    match (ring.is_zero(&p), ring.is_zero(&q)) {
        (true, true) => Err(MapError::CommonRoot),
        (false, true) => Ok(Value::Infinity),
        _ => Ok(Value::Finite(ring.div(&p, &q).unwrap())),
    }
}

/// Cycle types of the three special fibers; each has total `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    pub over0: CycleType,
    pub over1: CycleType,
    pub over_inf: CycleType,
}

impl RamificationProfile {
    pub fn degree(&self) -> usize {
        self.over0.degree()
    }

    /// `Σ (d − #parts) = 2d − 2`, the genus-0 Riemann–Hurwitz identity.
    pub fn is_genus_zero(&self) -> bool {
        let d = self.degree();
        self.over0.count() + self.over1.count() + self.over_inf.count() == d + 2
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {} | {})", self.over0, self.over1, self.over_inf)
    }
}

/// Root multiplicities of `f` (in the algebraic closure), padded with the
/// `target − deg f` contribution of the point at infinity when positive.
fn fiber_type<F: SquarefreeField>(
    ring: &F,
    f: &Poly<F>,
    target: usize,
) -> Result<CycleType, MapError> {
    let char_p = ring.characteristic() as usize;
    let mut parts: Vec<usize> = Vec::new();
    for (mult, part) in ring.squarefree_decomposition(f) {
        if char_p != 0 && mult % char_p == 0 {
            return Err(MapError::WildRamification { multiplicity: mult });
        }
        for _ in 0..part.deg_or0() {
            parts.push(mult);
        }
    }
    let gap = target - f.deg_or0();
    if gap > 0 {
        if char_p != 0 && gap % char_p == 0 {
            return Err(MapError::WildRamification { multiplicity: gap });
        }
        parts.push(gap);
    }
    Ok(CycleType::from_parts(parts))
}

/// Multiplicity multisets of the fibers over 0, 1, ∞.
pub fn ramification_profile<F: SquarefreeField>(
    ring: &F,
    m: &BelyiCandidate<F>,
) -> Result<RamificationProfile, MapError> {
    if !m.num.gcd(ring, &m.den).is_constant() {
        return Err(MapError::CommonFactor);
    }
    let d = m.degree();
    Ok(RamificationProfile {
        over0: fiber_type(ring, &m.num, d)?,
        over1: fiber_type(ring, &m.r(ring), d)?,
        over_inf: fiber_type(ring, &m.den, d)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "PASS"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Skip => write!(f, "SKIP"),
        }
    }
}

/// One line per check: `CHECK <name>: PASS|FAIL|SKIP — <detail>`.
#[derive(Clone, Debug, Default)]
pub struct VerdictReport {
    pub checks: Vec<(String, CheckStatus, String)>,
}

impl VerdictReport {
    pub fn push(&mut self, name: &str, status: CheckStatus, detail: String) {
        self.checks.push((String::from(name), status, detail));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, s, _)| *s != CheckStatus::Fail)
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, status, detail) in &self.checks {
            writeln!(f, "CHECK {name}: {status} — {detail}")?;
        }
        Ok(())
    }
}

/// PASS iff the computed profile equals `expected` and Riemann–Hurwitz gives
/// genus 0.
pub fn check_belyi<F: SquarefreeField>(
    ring: &F,
    m: &BelyiCandidate<F>,
    expected: &RamificationProfile,
) -> Result<VerdictReport, MapError> {
    let profile = ramification_profile(ring, m)?;
    let mut report = VerdictReport::default();
    for (name, got, want) in [
        ("fiber-over-0", &profile.over0, &expected.over0),
        ("fiber-over-1", &profile.over1, &expected.over1),
        ("fiber-over-inf", &profile.over_inf, &expected.over_inf),
    ] {
        let status = if got == want { CheckStatus::Pass } else { CheckStatus::Fail };
        report.push(name, status, format!("computed {got}, expected {want}"));
    }
    let d = profile.degree();
    let counts =
        profile.over0.count() + profile.over1.count() + profile.over_inf.count();
    let status = if counts == d + 2 { CheckStatus::Pass } else { CheckStatus::Fail };
    report.push(
        "riemann-hurwitz",
        status,
        format!("cycle counts sum {counts}, genus 0 needs {}", d + 2),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, Rationals};

    type QP = Poly<Rationals>;

    #[test]
    fn evaluate_examples() {
        let q = Rationals;
        let f = BelyiCandidate::polynomial(&q, QP::from_i64(&q, &[0, 0, 3, -2])).unwrap();
        assert_eq!(evaluate_map(&q, &f, &q.from_i64(0)).unwrap(), Value::Finite(q.zero()));
        assert_eq!(evaluate_map(&q, &f, &q.from_i64(1)).unwrap(), Value::Finite(q.one()));
        let inv = BelyiCandidate::new(&q, QP::one(&q), QP::x(&q)).unwrap();
        assert_eq!(evaluate_map(&q, &inv, &q.from_i64(0)).unwrap(), Value::Infinity);
        let bad = BelyiCandidate::new_unchecked(QP::x(&q), QP::x(&q));
        assert_eq!(evaluate_map(&q, &bad, &q.from_i64(0)), Err(MapError::CommonRoot));
    }

    #[test]
    fn profile_degree2() {
        // f = 4X − 4X²: 1 − f = (2X−1)², pole of order 2 at ∞
        let q = Rationals;
        let f = BelyiCandidate::polynomial(&q, QP::from_i64(&q, &[0, 4, -4])).unwrap();
        let prof = ramification_profile(&q, &f).unwrap();
        assert_eq!(prof.over0.parts, vec![1, 1]);
        assert_eq!(prof.over1.parts, vec![2]);
        assert_eq!(prof.over_inf.parts, vec![2]);
        assert!(prof.is_genus_zero());
    }

    #[test]
    fn profile_pure_power() {
        let q = Rationals;
        let n = 5;
        let f = BelyiCandidate::polynomial(&q, QP::monomial(&q, q.one(), n)).unwrap();
        let prof = ramification_profile(&q, &f).unwrap();
        assert_eq!(prof.over0.parts, vec![n]);
        assert_eq!(prof.over1.parts, vec![1; n]); // X^n − 1 is squarefree
        assert_eq!(prof.over_inf.parts, vec![n]);
    }

    #[test]
    fn profile_degree3() {
        let q = Rationals;
        let f = BelyiCandidate::polynomial(&q, QP::from_i64(&q, &[0, 0, 3, -2])).unwrap();
        let prof = ramification_profile(&q, &f).unwrap();
        assert_eq!(prof.over0.parts, vec![2, 1]);
        assert_eq!(prof.over1.parts, vec![2, 1]);
        assert_eq!(prof.over_inf.parts, vec![3]);
    }

    #[test]
    fn check_belyi_pass_and_fail() {
        let q = Rationals;
        let f = BelyiCandidate::polynomial(&q, QP::from_i64(&q, &[0, 4, -4])).unwrap();
        let expected = ramification_profile(&q, &f).unwrap();
        let rep = check_belyi(&q, &f, &expected).unwrap();
        assert!(rep.all_pass());
        // f = X² has over0 = 2, not 1²
        let g = BelyiCandidate::polynomial(&q, QP::monomial(&q, q.one(), 2)).unwrap();
        let rep = check_belyi(&q, &g, &expected).unwrap();
        assert!(!rep.all_pass());
        let text = alloc::format!("{rep}");
        assert!(text.contains("CHECK fiber-over-0: FAIL"));
    }

    #[test]
    fn wild_ramification_rejected() {
        let f2 = PrimeField::new(2);
        // X² over F_2 is wildly ramified at 0
        let f = BelyiCandidate::polynomial(&f2, Poly::monomial(&f2, 1, 2)).unwrap();
        assert!(matches!(
            ramification_profile(&f2, &f),
            Err(MapError::WildRamification { .. })
        ));
    }

    #[test]
    fn common_factor_rejected() {
        let q = Rationals;
        let x = QP::x(&q);
        assert_eq!(
            BelyiCandidate::new(&q, x.clone(), x.mul(&q, &x)).unwrap_err(),
            MapError::CommonFactor
        );
    }
}
