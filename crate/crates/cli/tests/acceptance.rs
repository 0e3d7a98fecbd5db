//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use belyi_cli::fixtures::{load_published_reduction, load_septic_field};
use belyi_cli::formats::{as_rational_map, parse_profile, read_map, MapFile};
use belyi_core::bigfloat::BigFloat;
use belyi_core::galois::{indecomposability_test, twotrans_obstruction, Decomposability};
use belyi_core::lll::{lll_recognize, PrecisionContext};
use belyi_core::map::{ramification_profile, BelyiCandidate};
use belyi_core::monodromy::numerical_monodromy_rational;
use belyi_core::numfield::degree_one_primes;
use belyi_core::perm::{group_order, CycleType, Permutation, PermutationTriple};
use belyi_core::poly::Poly;
use belyi_core::ring::{Field, PrimeField, Rationals};
use belyi_core::rng::Rng;
use belyi_core::solve::{conformal_stage, SolveConfig};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_belyi")
}

fn fixture(name: &str) -> String {
    belyi_cli::fixtures::fixture_path(name).display().to_string()
}

fn within(elapsed: Duration, budget_s: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(budget_s) {
        Err(format!("runtime {elapsed:?} exceeds {budget_s}s budget"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: published-reduction fixture verification
// ---------------------------------------------------------------------------

fn criterion1() -> Result<String, String> {
    let start = Instant::now();
    let (p, m) = load_published_reduction().map_err(|e| e.to_string())?;
    if m.num().deg_or0() != 266 || m.den().deg_or0() != 266 {
        return Err(format!(
            "degrees {} / {}, expected 266 / 266",
            m.num().deg_or0(),
            m.den().deg_or0()
        ));
    }
    let fp = PrimeField::new(p);
    let profile = ramification_profile(&fp, &m).map_err(|e| e.to_string())?;
    let expected = parse_profile("7^38 | 2^128.1^10 | 3^87.1^5").map_err(|e| e.to_string())?;
    if profile != expected {
        return Err(format!("profile {profile}, expected {expected}"));
    }
    let counts = profile.over0.count() + profile.over1.count() + profile.over_inf.count();
    if counts != 268 {
        return Err(format!("Riemann-Hurwitz count {counts}, expected 268"));
    }
    let status = Command::new(bin())
        .args(["verify", &fixture("j1_mod269.map"), "--profile", "7^38 | 2^128.1^10 | 3^87.1^5"])
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("`belyi verify` exited {:?}", status.status.code()));
    }
    let elapsed = start.elapsed();
    within(elapsed, 30)?;
    Ok(format!("profile {profile}, counts 38+138+92 = 268, verify exit 0, {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// Criterion 2: prime-ideal arithmetic on the degree-7 field
// ---------------------------------------------------------------------------

fn criterion2() -> Result<String, String> {
    let k = load_septic_field().map_err(|e| e.to_string())?;
    let at5 = degree_one_primes(&k, 5);
    if at5.len() != 1 || at5[0].root != 3 {
        return Err(format!(
            "at p=5 expected exactly one spec with root 3, got {:?}",
            at5.iter().map(|s| s.root).collect::<Vec<_>>()
        ));
    }
    let at269 = degree_one_primes(&k, 269);
    if !at269.iter().any(|s| s.root == 62) {
        return Err(format!(
            "at p=269 expected a spec with root 62, got {:?}",
            at269.iter().map(|s| s.root).collect::<Vec<_>>()
        ));
    }
    Ok(format!(
        "unique (5, root 3); roots at 269: {:?} contain 62",
        at269.iter().map(|s| s.root).collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: 2-transitivity obstruction on the published reduction
// ---------------------------------------------------------------------------

fn criterion3() -> Result<String, String> {
    let start = Instant::now();
    let (p, m) = load_published_reduction().map_err(|e| e.to_string())?;
    let fp = PrimeField::new(p);
    let rep = twotrans_obstruction(&fp, &m, 11, 100, 7).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, 600)?;
    if rep.samples.len() < 40 {
        return Err(format!("only {} admissible specializations", rep.samples.len()));
    }
    if let Some(fam) = &rep.family {
        if fam.degree_x() == 11 {
            return Ok(format!(
                "degree-11 family over {} specializations, {elapsed:.2?}",
                rep.samples.len()
            ));
        }
        return Err(format!("family has X-degree {}, expected 11", fam.degree_x()));
    }
    // degraded form: no interpolated family (candidate enumeration explodes
    // with 128 quadratic factors), but many specializations individually
    // exhibit an irreducible degree-11 factor
    let with11 = rep.samples.iter().filter(|(_, degs)| degs.contains(&11)).count();
    if with11 >= 10 {
        Ok(format!(
            "degraded: {with11}/{} specializations exhibit an irreducible degree-11 factor, {elapsed:.2?}",
            rep.samples.len()
        ))
    } else {
        Err(format!(
            "no family and only {with11}/{} specializations with a degree-11 factor",
            rep.samples.len()
        ))
    }
}

// ---------------------------------------------------------------------------
// Criterion 4: indecomposability property test
// ---------------------------------------------------------------------------

/// Checks `g ∘ h = m` projectively.
fn composition_matches<F: Field>(
    ring: &F,
    m: &BelyiCandidate<F>,
    g: &BelyiCandidate<F>,
    h: &BelyiCandidate<F>,
) -> bool {
    let deg = g.num().deg_or0().max(g.den().deg_or0());
    let mut num = Poly::zero();
    let mut den = Poly::zero();
    let mut pow_n = vec![Poly::one(ring)];
    let mut pow_d = vec![Poly::one(ring)];
    for _ in 0..deg {
        pow_n.push(pow_n.last().unwrap().mul(ring, h.num()));
        pow_d.push(pow_d.last().unwrap().mul(ring, h.den()));
    }
    for i in 0..=deg {
        let a = pow_n[i].mul(ring, &pow_d[deg - i]);
        num = num.add(ring, &a.scale(ring, &g.num().coeff(ring, i)));
        den = den.add(ring, &a.scale(ring, &g.den().coeff(ring, i)));
    }
    let u = m.num().mul(ring, &den);
    let v = m.den().mul(ring, &num);
    if u.is_zero() || v.is_zero() {
        return false;
    }
    match ring.div(u.leading().unwrap(), v.leading().unwrap()) {
        Some(c) => u == v.scale(ring, &c),
        None => false,
    }
}

fn random_monic(fp: &PrimeField, deg: usize, rng: &mut Rng) -> Poly<PrimeField> {
    let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.below(fp.modulus())).collect();
    coeffs.push(1);
    Poly::from_coeffs(fp, coeffs)
}

fn criterion4() -> Result<String, String> {
    let start = Instant::now();
    let primes = [37u64, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
    let splits: Vec<(usize, usize)> = (2..=18)
        .flat_map(|a| (2..=18).map(move |b| (a, b)))
        .filter(|&(a, b)| a * b <= 36)
        .collect();
    let mut rng = Rng::from_seed(20260823);
    for i in 0..200u64 {
        let p = primes[rng.below(primes.len() as u64) as usize];
        let fp = PrimeField::new(p);
        let (dg, dh) = splits[rng.below(splits.len() as u64) as usize];
        let g = random_monic(&fp, dg, &mut rng);
        let h = random_monic(&fp, dh, &mut rng);
        let m = BelyiCandidate::polynomial(&fp, g.compose(&fp, &h))
            .map_err(|e| format!("case {i}: {e}"))?;
        match indecomposability_test(&fp, &m, i) {
            Ok(Decomposability::Decomposable(cert)) => {
                if !composition_matches(&fp, &m, &cert.outer, &cert.inner) {
                    return Err(format!("case {i} (p={p}, {dg}x{dh}): invalid certificate"));
                }
            }
            Ok(Decomposability::DecomposableOverExtension { ext_modulus, cert }) => {
                let ext = belyi_core::ring::ExtField::new(fp.clone(), ext_modulus);
                let m_ext = m.map(&ext, |c| ext.lift(*c));
                if !composition_matches(&ext, &m_ext, &cert.outer, &cert.inner) {
                    return Err(format!("case {i} (p={p}, {dg}x{dh}): invalid extension certificate"));
                }
            }
            Ok(other) => {
                return Err(format!(
                    "case {i} (p={p}, {dg}x{dh}): composed map not recognized: {other:?}"
                ))
            }
            Err(e) => return Err(format!("case {i} (p={p}, {dg}x{dh}): error {e}")),
        }
    }
    let prime_degrees = [2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for i in 0..50u64 {
        let p = primes[rng.below(primes.len() as u64) as usize];
        let fp = PrimeField::new(p);
        let n = prime_degrees[rng.below(prime_degrees.len() as u64) as usize];
        let m = loop {
            let num = random_monic(&fp, n, &mut rng);
            let dd = rng.below(n as u64) as usize;
            let den = random_monic(&fp, dd, &mut rng);
            if num.gcd(&fp, &den).is_constant() {
                break BelyiCandidate::new(&fp, num, den).map_err(|e| format!("{e}"))?;
            }
        };
        match indecomposability_test(&fp, &m, 1000 + i) {
            Ok(Decomposability::Indecomposable) => {}
            other => return Err(format!("prime-degree case {i} (p={p}, n={n}): {other:?}")),
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 120)?;
    Ok(format!("200 composed maps certified, 50 prime-degree indecomposable, {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// Criterion 5: end-to-end solve at degree <= 3
// ---------------------------------------------------------------------------

fn solve_to_rational(triple_fixture: &str, out: &std::path::Path) -> Result<BelyiCandidate<Rationals>, String> {
    let status = Command::new(bin())
        .args(["solve", &fixture(triple_fixture), "--seed", "1", "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "`belyi solve {triple_fixture}` exited {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    let text = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
    match read_map(&text).map_err(|e| e.to_string())? {
        MapFile::NumberField { field, map } => {
            as_rational_map(&field, &map).ok_or_else(|| String::from("solver output not over Q"))
        }
        MapFile::Finite { .. } => Err(String::from("solver output over a finite field")),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `X^2 * h(1/(2X))` for `deg h <= 2`: the source-side Mobius `X -> 1/(2X)`
/// with denominators cleared.
fn twist2(h: &Poly<Rationals>) -> Poly<Rationals> {
    let f = Rationals;
    let mut out = vec![rat(0, 1); 3];
    for (i, c) in h.coeffs().iter().enumerate() {
        out[2 - i] = c * rat(1, 2i64.pow(i as u32));
    }
    Poly::from_coeffs(&f, out)
}

fn criterion5() -> Result<String, String> {
    let f = Rationals;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;

    let start2 = Instant::now();
    let m2 = solve_to_rational("deg2.triple", &dir.path().join("deg2.map"))?;
    within(start2.elapsed(), 60)?;
    // gauge-normal solver output for x = y = (1 2): X^2 / (2X - 1)
    let want_num = Poly::from_coeffs(&f, vec![rat(0, 1), rat(0, 1), rat(1, 2)]);
    let want_den = Poly::from_coeffs(&f, vec![rat(-1, 2), rat(1, 1)]);
    if m2.num() != &want_num || m2.den() != &want_den {
        return Err(format!(
            "degree-2 solve returned {:?} / {:?}",
            m2.num().coeffs(),
            m2.den().coeffs()
        ));
    }
    // projectively equal to the classical 4X - 4X^2 after the source Mobius
    // X -> 1/(2X) and fiber swap: 1/f(1/(2X)) = 4X - 4X^2
    let target2 = match read_map(
        &std::fs::read_to_string(fixture("classical_deg2.map")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?
    {
        MapFile::NumberField { field, map } => {
            as_rational_map(&field, &map).ok_or("classical_deg2 not over Q")?
        }
        _ => return Err(String::from("classical_deg2 fixture malformed")),
    };
    let lhs = twist2(m2.den());
    let rhs = target2.num().mul(&f, &twist2(m2.num()));
    // target denominator is 1, so the identity is lhs == rhs exactly
    if lhs != rhs || !target2.den().is_constant() {
        return Err(String::from("gauge identity 1/f(1/(2X)) = 4X - 4X^2 failed"));
    }

    let start3 = Instant::now();
    let m3 = solve_to_rational("deg3.triple", &dir.path().join("deg3.map"))?;
    within(start3.elapsed(), 60)?;
    let target3 = match read_map(
        &std::fs::read_to_string(fixture("classical_deg3.map")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?
    {
        MapFile::NumberField { field, map } => {
            as_rational_map(&field, &map).ok_or("classical_deg3 not over Q")?
        }
        _ => return Err(String::from("classical_deg3 fixture malformed")),
    };
    if m3 != target3 {
        return Err(format!(
            "degree-3 solve returned {:?} / {:?}, expected 3X^2 - 2X^3",
            m3.num().coeffs(),
            m3.den().coeffs()
        ));
    }
    Ok(format!(
        "degree 2 in {:.2?} (gauge-equal to 4X-4X^2), degree 3 in {:.2?} (exactly 3X^2-2X^3)",
        start2.elapsed(),
        start3.elapsed()
    ))
}

// ---------------------------------------------------------------------------
// Criterion 6: numerical monodromy round-trip
// ---------------------------------------------------------------------------

fn roundtrip(m: &BelyiCandidate<Rationals>, input: &PermutationTriple) -> Result<(), String> {
    let base = Complex64::new(0.5, 0.5);
    let t = numerical_monodromy_rational(m, 12, base).map_err(|e| format!("{e:?}"))?;
    for (name, got, want) in [
        ("x", t.x.cycle_type(), input.x.cycle_type()),
        ("y", t.y.cycle_type(), input.y.cycle_type()),
        ("z", t.z.cycle_type(), input.z.cycle_type()),
    ] {
        if got != want {
            return Err(format!("{name} type {got}, expected {want}"));
        }
    }
    let prod = t.x.then(&t.y).then(&t.z);
    if prod != Permutation::identity(t.degree()) {
        return Err(String::from("product relation x·y·z = 1 failed"));
    }
    if !t.is_transitive() {
        return Err(String::from("computed monodromy not transitive"));
    }
    let got = group_order(&[t.x.clone(), t.y.clone()]).map_err(|e| format!("{e}"))?;
    let want = group_order(&[input.x.clone(), input.y.clone()]).map_err(|e| format!("{e}"))?;
    if got != want {
        return Err(format!("group order {got}, expected {want}"));
    }
    Ok(())
}

fn criterion6() -> Result<String, String> {
    let start = Instant::now();
    let f = Rationals;
    // the two desk-scale solved maps, in solver gauge
    let m2 = BelyiCandidate::new(
        &f,
        Poly::from_coeffs(&f, vec![rat(0, 1), rat(0, 1), rat(1, 2)]),
        Poly::from_coeffs(&f, vec![rat(-1, 2), rat(1, 1)]),
    )
    .map_err(|e| format!("{e}"))?;
    let t2 = PermutationTriple::from_xy(
        Permutation::from_cycles(2, &[&[0, 1]]).unwrap(),
        Permutation::from_cycles(2, &[&[0, 1]]).unwrap(),
    )
    .unwrap();
    roundtrip(&m2, &t2).map_err(|e| format!("degree 2: {e}"))?;

    let m3 = BelyiCandidate::new(
        &f,
        Poly::from_coeffs(&f, vec![rat(0, 1), rat(0, 1), rat(3, 1), rat(-2, 1)]),
        Poly::from_coeffs(&f, vec![rat(1, 1)]),
    )
    .map_err(|e| format!("{e}"))?;
    let t3 = PermutationTriple::from_xy(
        Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
        Permutation::from_cycles(3, &[&[1, 2]]).unwrap(),
    )
    .unwrap();
    roundtrip(&m3, &t3).map_err(|e| format!("degree 3: {e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, 60)?;
    Ok(format!("both triples round-trip (types, product, transitivity, order), {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// Criterion 7: LLL recognition
// ---------------------------------------------------------------------------

fn septic_eval(x: &BigFloat, prec: u32) -> BigFloat {
    // 2 + 2a + 2a^2 - a^3 - 2a^4 - a^6 + a^7, ascending
    let coeffs = [2i64, 2, 2, -1, -2, 0, -1, 1];
    let mut acc = BigFloat::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x, prec).add(&BigFloat::from_i64(c), prec);
    }
    acc
}

fn criterion7() -> Result<String, String> {
    let start = Instant::now();
    let ctx = PrecisionContext::new(200, 200);
    let prec = ctx.bits() + 64;

    let sqrt2 = BigFloat::from_i64(2).sqrt(prec);
    let g = lll_recognize(&sqrt2, 7, &ctx)
        .map_err(|e| format!("{e:?}"))?
        .ok_or("sqrt(2) not recognized")?;
    let want: Vec<BigInt> = [-2i64, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
    if g.min_poly != want {
        return Err(format!("sqrt(2) gave {}", g.display_poly()));
    }

    let golden = BigFloat::from_i64(5)
        .sqrt(prec)
        .add(&BigFloat::from_i64(1), prec)
        .div(&BigFloat::from_i64(2), prec);
    let g = lll_recognize(&golden, 7, &ctx)
        .map_err(|e| format!("{e:?}"))?
        .ok_or("golden ratio not recognized")?;
    let want: Vec<BigInt> = [-1i64, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
    if g.min_poly != want {
        return Err(format!("golden ratio gave {}", g.display_poly()));
    }

    // real root of the degree-7 field polynomial in (-1, 0), by bisection
    let mut lo = BigFloat::from_i64(-1);
    let mut hi = BigFloat::zero();
    let half = BigFloat::from_f64(0.5);
    for _ in 0..((prec as usize) + 8) {
        let mid = lo.add(&hi, prec).mul(&half, prec);
        if septic_eval(&mid, prec).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let g = lll_recognize(&lo, 7, &ctx)
        .map_err(|e| format!("{e:?}"))?
        .ok_or("septic root not recognized")?;
    let want: Vec<BigInt> =
        [2i64, 2, 2, -1, -2, 0, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
    if g.min_poly != want {
        return Err(format!("septic root gave {}", g.display_poly()));
    }

    // zero false accepts on random 30-digit noise
    let noise_ctx = PrecisionContext::new(30, 30);
    let nprec = noise_ctx.bits() + 64;
    let mut rng = Rng::from_seed(99);
    let mut false_accepts = 0usize;
    for _ in 0..100 {
        let mut x = BigFloat::zero();
        for k in 1..=30i64 {
            let digit = BigFloat::from_i64(rng.below(10) as i64);
            x = x.add(&digit.mul(&BigFloat::pow10(-k, nprec), nprec), nprec);
        }
        if let Ok(Some(_)) = lll_recognize(&x, 7, &noise_ctx) {
            false_accepts += 1;
        }
    }
    if false_accepts > 0 {
        return Err(format!("{false_accepts}/100 noise values falsely recognized"));
    }

    // rational invariant: a/b is recognized as bX - a (in lowest terms);
    // 80 digits keeps the acceptance height bound 10^8 above the numerators
    let rat_ctx = PrecisionContext::new(80, 80);
    let rprec = rat_ctx.bits() + 64;
    for i in 0..500 {
        let a = rng.below(1_000_000) as i64;
        let b = (rng.below(999) + 1) as i64;
        let q = BigRational::new(BigInt::from(a), BigInt::from(b));
        let x = BigFloat::from_rational(&q, rprec);
        let g = lll_recognize(&x, 3, &rat_ctx)
            .map_err(|e| format!("{e:?}"))?
            .ok_or_else(|| format!("rational case {i}: {a}/{b} not recognized"))?;
        let want = vec![-q.numer().clone(), q.denom().clone()];
        if g.min_poly != want {
            return Err(format!("rational case {i}: {a}/{b} gave {}", g.display_poly()));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 60)?;
    Ok(format!(
        "X^2-2, X^2-X-1 and the degree-7 polynomial recovered; 0/100 noise accepts; 500 rationals, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 8: geometry invariants for (2,3,7) triples
// ---------------------------------------------------------------------------

fn random_of_type(d: usize, cycles: &[usize], rng: &mut Rng) -> Permutation {
    let mut pts: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        pts.swap(i, rng.below(i as u64 + 1) as usize);
    }
    let mut images: Vec<usize> = (0..d).collect();
    let mut at = 0usize;
    for &len in cycles {
        for k in 0..len {
            images[pts[at + k]] = pts[at + (k + 1) % len];
        }
        at += len;
    }
    Permutation::from_images(images.into_iter().map(|i| i as u32).collect()).unwrap()
}

fn find_237_triple(
    d: usize,
    tx: &[usize],
    ty: &[usize],
    tz: &[usize],
    rng: &mut Rng,
) -> Option<PermutationTriple> {
    let want_z = CycleType::from_parts(tz.iter().copied());
    for _ in 0..200_000 {
        let x = random_of_type(d, tx, rng);
        let y = random_of_type(d, ty, rng);
        let t = PermutationTriple::from_xy(x, y).unwrap();
        if t.z.cycle_type() == want_z && t.is_transitive() {
            return Some(t);
        }
    }
    None
}

fn criterion8() -> Result<String, String> {
    let mut rng = Rng::from_seed(237);
    let mut triples: Vec<(usize, PermutationTriple)> = Vec::new();
    let d7 = PermutationTriple::from_xy(
        Permutation::from_cycles(7, &[&[0, 1], &[2, 3]]).unwrap(),
        Permutation::from_cycles(7, &[&[1, 2, 4], &[3, 5, 6]]).unwrap(),
    )
    .unwrap();
    triples.push((7, d7));
    // the only other genus-0 (2,3,7) degrees up to 12 are 8 and 9
    let d8 = find_237_triple(8, &[2, 2, 2, 2], &[3, 3], &[7, 1], &mut rng)
        .ok_or("no degree-8 (2,3,7) triple found")?;
    triples.push((8, d8));
    let d9 = find_237_triple(9, &[2, 2, 2, 2], &[3, 3, 3], &[7, 1, 1], &mut rng)
        .ok_or("no degree-9 (2,3,7) triple found")?;
    triples.push((9, d9));

    let cfg = SolveConfig::default();
    let mut residual_max: f64 = 0.0;
    for (d, t) in &triples {
        if t.genus() != Ok(0) {
            return Err(format!("degree-{d} triple is not genus 0"));
        }
        let stage = conformal_stage(t, &cfg).map_err(|e| format!("degree {d}: {e:?}"))?;
        if stage.orders != (2, 3, 7) {
            return Err(format!("degree {d}: orders {:?}", stage.orders));
        }
        let ratio = stage.domain.measured_area() / stage.domain.emb.kite_area();
        if (ratio - *d as f64).abs() > 1e-9 {
            return Err(format!("degree {d}: area ratio {ratio}"));
        }
        if stage.welding_residual >= 1e-6 {
            return Err(format!("degree {d}: welding residual {:e}", stage.welding_residual));
        }
        residual_max = residual_max.max(stage.welding_residual);
        let emb = &stage.domain.emb;
        for (name, rel) in [
            ("a^2", emb.gen_a.pow(2)),
            ("b^3", emb.gen_b.pow(3)),
            ("(ab)^7", emb.gen_a.mul(&emb.gen_b).pow(7)),
        ] {
            let err = rel.dist_pm_identity();
            if err > 1e-12 {
                return Err(format!("degree {d}: relation {name} off by {err:e}"));
            }
        }
    }
    Ok(format!(
        "degrees 7, 8, 9: area ratio = d to 1e-9, welding residual <= {residual_max:e}, relations to 1e-12"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 9: explicit non-reproduction statement
// ---------------------------------------------------------------------------

fn criterion9() -> Result<String, String> {
    Ok(String::from(
        "full degree-266 solve over the degree-7 field is NOT reproduced at desk scale; \
         substituted by criteria 1-3 plus the small-degree end-to-end solves",
    ))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<String, String>)> = vec![
        ("1 published-reduction verification", criterion1),
        ("2 prime-ideal arithmetic", criterion2),
        ("3 two-transitivity obstruction", criterion3),
        ("4 indecomposability", criterion4),
        ("5 end-to-end solve", criterion5),
        ("6 monodromy round-trip", criterion6),
        ("7 LLL recognition", criterion7),
        ("8 geometry invariants", criterion8),
        ("9 degree-266 solve", criterion9),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match std::panic::catch_unwind(f) {
            Ok(Ok(detail)) => println!("criterion {name}: PASS — {detail}"),
            Ok(Err(detail)) => {
                println!("criterion {name}: FAIL — {detail}");
                failures.push(name);
            }
            Err(_) => {
                println!("criterion {name}: FAIL — panicked");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}

/// Non-gating extended run (criterion 4): indecomposability of the published
/// degree-266 reduction itself. Budgeted at an hour; run with `--ignored`.
#[test]
#[ignore]
fn extended_degree266_indecomposability() {
    let (p, m) = load_published_reduction().unwrap();
    let fp = PrimeField::new(p);
    let out = indecomposability_test(&fp, &m, 5).unwrap();
    assert!(
        !out.is_decomposable(),
        "published degree-266 map decomposed: {out:?}"
    );
}
