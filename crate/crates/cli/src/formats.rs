//! Text file formats: map files, ramification profiles, triple rendering.
//!
//! Map file layout (UTF-8 text, `#` comments and blank lines ignored):
//!
//! ```text
//! field: <integer coefficients of the minimal polynomial, constant first>
//! num:
//! <one coefficient per line, degree-ascending; each line is n
//!  comma-separated rationals in the power basis, n = field degree>
//! den:
//! ...
//! ```
//!
//! Finite-field variant: `prime: <p>` instead of `field:`, and integer
//! coefficients. Finite blocks may alternatively list factors, one per line,
//! as `<multiplicity> | <integer coefficients, constant first>`; the block
//! then denotes the expanded product.

use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use belyi_core::map::{BelyiCandidate, RamificationProfile};
use belyi_core::numfield::{NumberField, NumberFieldRing};
use belyi_core::perm::{CycleType, PermutationTriple};
use belyi_core::poly::Poly;
use belyi_core::ring::{is_prime_u64, PrimeField, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// A parsed map file: over a number field (degree 1 means Q) or a prime field.
pub enum MapFile {
    NumberField { field: NumberField, map: BelyiCandidate<NumberFieldRing> },
    Finite { p: u64, map: BelyiCandidate<PrimeField> },
}

enum Header {
    Field(Vec<BigInt>),
    Prime(u64),
}

pub fn read_map(text: &str) -> Result<MapFile> {
    let mut header: Option<Header> = None;
    let mut num_lines: Vec<(usize, String)> = Vec::new();
    let mut den_lines: Vec<(usize, String)> = Vec::new();
    // 0 = outside any block, 1 = num, 2 = den
    let mut block = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("field:") {
            if header.is_some() {
                bail!("line {lineno}: duplicate header");
            }
            let coeffs: Vec<BigInt> = rest
                .split_whitespace()
                .map(|t| BigInt::from_str(t).with_context(|| format!("line {lineno}: bad integer `{t}`")))
                .collect::<Result<_>>()?;
            header = Some(Header::Field(coeffs));
        } else if let Some(rest) = line.strip_prefix("prime:") {
            if header.is_some() {
                bail!("line {lineno}: duplicate header");
            }
            let p: u64 = rest.trim().parse().with_context(|| format!("line {lineno}: bad prime"))?;
            if !is_prime_u64(p) {
                bail!("line {lineno}: {p} is not prime");
            }
            header = Some(Header::Prime(p));
        } else if line == "num:" {
            block = 1;
        } else if line == "den:" {
            block = 2;
        } else {
            match block {
                1 => num_lines.push((lineno, line.to_string())),
                2 => den_lines.push((lineno, line.to_string())),
                _ => bail!("line {lineno}: coefficient line outside a num:/den: block"),
            }
        }
    }
    let header = header.ok_or_else(|| anyhow!("missing `field:` or `prime:` header"))?;
    if num_lines.is_empty() {
        bail!("missing or empty num: block");
    }
    if den_lines.is_empty() {
        bail!("missing or empty den: block");
    }
    match header {
        Header::Prime(p) => {
            let fp = PrimeField::new(p);
            let num = parse_finite_block(&fp, &num_lines)?;
            let den = parse_finite_block(&fp, &den_lines)?;
            let map = BelyiCandidate::new(&fp, num, den).map_err(|e| anyhow!("{e}"))?;
            Ok(MapFile::Finite { p, map })
        }
        Header::Field(coeffs) => {
            let field = NumberField::new(coeffs).map_err(|e| anyhow!("field: {e}"))?;
            let ring = field.ring();
            let n = field.degree();
            let num = parse_field_block(&ring, n, &num_lines)?;
            let den = parse_field_block(&ring, n, &den_lines)?;
            let map = BelyiCandidate::new(&ring, num, den).map_err(|e| anyhow!("{e}"))?;
            Ok(MapFile::NumberField { field, map })
        }
    }
}

fn parse_ff_factor(fp: &PrimeField, tokens: &str, lineno: usize) -> Result<Poly<PrimeField>> {
    let coeffs: Vec<u64> = tokens
        .split_whitespace()
        .map(|t| {
            let v: i128 = t.parse().with_context(|| format!("line {lineno}: bad integer `{t}`"))?;
            Ok(v.rem_euclid(fp.modulus() as i128) as u64)
        })
        .collect::<Result<_>>()?;
    if coeffs.is_empty() {
        bail!("line {lineno}: empty factor");
    }
    Ok(Poly::from_coeffs(fp, coeffs))
}

fn parse_finite_block(fp: &PrimeField, lines: &[(usize, String)]) -> Result<Poly<PrimeField>> {
    let factored = lines.iter().any(|(_, l)| l.contains('|'));
    if factored {
        let mut acc = Poly::one(fp);
        for (lineno, line) in lines {
            let (mult, rest) = line
                .split_once('|')
                .ok_or_else(|| anyhow!("line {lineno}: expected `<mult> | <coeffs>`"))?;
            let mult: usize =
                mult.trim().parse().with_context(|| format!("line {lineno}: bad multiplicity"))?;
            let factor = parse_ff_factor(fp, rest, *lineno)?;
            acc = acc.mul(fp, &factor.pow(fp, mult));
        }
        Ok(acc)
    } else {
        let mut coeffs = Vec::with_capacity(lines.len());
        for (lineno, line) in lines {
            let v: i128 =
                line.parse().with_context(|| format!("line {lineno}: bad coefficient `{line}`"))?;
            coeffs.push(v.rem_euclid(fp.modulus() as i128) as u64);
        }
        Ok(Poly::from_coeffs(fp, coeffs))
    }
}

fn parse_field_block(
    ring: &NumberFieldRing,
    n: usize,
    lines: &[(usize, String)],
) -> Result<Poly<NumberFieldRing>> {
    let mut coeffs = Vec::with_capacity(lines.len());
    for (lineno, line) in lines {
        let parts: Vec<BigRational> = line
            .split(',')
            .map(|t| {
                BigRational::from_str(t.trim())
                    .with_context(|| format!("line {lineno}: bad rational `{}`", t.trim()))
            })
            .collect::<Result<_>>()?;
        if parts.len() != n {
            bail!("line {lineno}: expected {n} coordinates, got {}", parts.len());
        }
        coeffs.push(parts);
    }
    Ok(Poly::from_coeffs(ring, coeffs))
}

pub fn write_map_finite(p: u64, m: &BelyiCandidate<PrimeField>) -> String {
    let mut s = format!("prime: {p}\n");
    for (tag, poly) in [("num", m.num()), ("den", m.den())] {
        let _ = writeln!(s, "{tag}:");
        for c in poly.coeffs() {
            let _ = writeln!(s, "{c}");
        }
    }
    s
}

pub fn write_map_numberfield(field: &NumberField, m: &BelyiCandidate<NumberFieldRing>) -> String {
    let mut s = String::from("field:");
    for c in field.min_poly() {
        let _ = write!(s, " {c}");
    }
    s.push('\n');
    let n = field.degree();
    for (tag, poly) in [("num", m.num()), ("den", m.den())] {
        let _ = writeln!(s, "{tag}:");
        for c in poly.coeffs() {
            let mut coords = c.clone();
            coords.resize(n, BigRational::from_integer(BigInt::from(0)));
            let line: Vec<String> = coords.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(", "));
        }
    }
    s
}

pub fn write_map_rational(m: &BelyiCandidate<Rationals>) -> String {
    let mut s = String::from("field: 0 1\n");
    for (tag, poly) in [("num", m.num()), ("den", m.den())] {
        let _ = writeln!(s, "{tag}:");
        for c in poly.coeffs() {
            let _ = writeln!(s, "{c}");
        }
    }
    s
}

/// Converts a map over a degree-1 field (minimal polynomial `X − r` or any
/// linear polynomial) back to a map over Q.
pub fn as_rational_map(
    field: &NumberField,
    m: &BelyiCandidate<NumberFieldRing>,
) -> Option<BelyiCandidate<Rationals>> {
    if field.degree() != 1 {
        return None;
    }
    // alpha = -c0/c1 for min_poly c0 + c1*X
    let mp = field.min_poly();
    let alpha = BigRational::new(-mp[0].clone(), mp[1].clone());
    let conv = |c: &Vec<BigRational>| -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(0));
        let mut pw = BigRational::one();
        for q in c {
            acc += q * &pw;
            pw *= &alpha;
        }
        acc
    };
    let f = Rationals;
    let num = m.num().map(&f, conv);
    let den = m.den().map(&f, conv);
    BelyiCandidate::new(&f, num, den).ok()
}

/// Parses a cycle type like `2^128.1^10` (separators `.`, `,` or spaces).
pub fn parse_cycle_type(s: &str) -> Result<CycleType> {
    let mut parts = Vec::new();
    for tok in s.split(|c: char| c == '.' || c == ',' || c.is_whitespace()) {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (len, mult) = match tok.split_once('^') {
            Some((l, m)) => (
                l.parse::<usize>().with_context(|| format!("bad cycle length `{l}`"))?,
                m.parse::<usize>().with_context(|| format!("bad multiplicity `{m}`"))?,
            ),
            None => (tok.parse::<usize>().with_context(|| format!("bad cycle length `{tok}`"))?, 1),
        };
        if len == 0 || mult == 0 {
            bail!("cycle lengths and multiplicities must be positive");
        }
        for _ in 0..mult {
            parts.push(len);
        }
    }
    if parts.is_empty() {
        bail!("empty cycle type");
    }
    Ok(CycleType::from_parts(parts))
}

/// Parses `<type over 0> | <type over 1> | <type over inf>`.
pub fn parse_profile(s: &str) -> Result<RamificationProfile> {
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() != 3 {
        bail!("profile needs three `|`-separated cycle types, got {}", parts.len());
    }
    let over0 = parse_cycle_type(parts[0])?;
    let over1 = parse_cycle_type(parts[1])?;
    let over_inf = parse_cycle_type(parts[2])?;
    if over0.degree() != over1.degree() || over0.degree() != over_inf.degree() {
        bail!(
            "cycle type totals differ: {} | {} | {}",
            over0.degree(),
            over1.degree(),
            over_inf.degree()
        );
    }
    Ok(RamificationProfile { over0, over1, over_inf })
}

/// Renders a triple in the triple file format (1-based images).
pub fn write_triple(t: &PermutationTriple) -> String {
    let mut s = format!("degree: {}\n", t.degree());
    for (tag, p) in [("x", &t.x), ("y", &t.y), ("z", &t.z)] {
        let imgs: Vec<String> = p.images().iter().map(|&i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "{tag}: {}", imgs.join(" "));
    }
    s
}
