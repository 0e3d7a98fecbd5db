//! Checksum-guarded loaders for the shipped fixture data files.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use belyi_core::map::BelyiCandidate;
use belyi_core::numfield::NumberField;
use belyi_core::ring::PrimeField;
use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::formats::{read_map, MapFile};

/// SHA-256 of the published-reduction transcription; guards against drift.
pub const PUBLISHED_REDUCTION_SHA256: &str =
    "3c6ccc3d2edbb11a1726d650b423c4845dee63e2b231be9d0d707858d478cff7";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// The degree-266 map over F_269, parsed through the public map reader after
/// verifying the transcription checksum.
pub fn load_published_reduction() -> Result<(u64, BelyiCandidate<PrimeField>)> {
    let path = fixture_path("j1_mod269.map");
    let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    if digest != PUBLISHED_REDUCTION_SHA256 {
        bail!("published-reduction fixture checksum mismatch: {digest}");
    }
    let text = String::from_utf8(bytes).context("published-reduction fixture is not UTF-8")?;
    match read_map(&text)? {
        MapFile::Finite { p, map } => Ok((p, map)),
        _ => bail!("published-reduction fixture is not a finite-field map"),
    }
}

/// The degree-7 coefficient field, from its fixture minimal polynomial.
pub fn load_septic_field() -> Result<NumberField> {
    let path = fixture_path("k_minpoly.txt");
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let mut coeffs: Vec<BigInt> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            coeffs.push(BigInt::from_str(tok).with_context(|| format!("bad integer `{tok}`"))?);
        }
    }
    NumberField::new(coeffs).map_err(|e| anyhow!("{e}"))
}
