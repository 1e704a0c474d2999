//! Khovanov table ingestion and the Z2 L-space verdict chain: H-thinness,
//! mirror transforms of graded tables, and the reduced-rank bound read off
//! the Jones coefficients.

use crate::diagram::Diagram;
use crate::invariants::signature_gl;
use crate::poly::LaurentPolynomial;
use num_bigint::BigInt;
use num_traits::One;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KhError {
    #[error("malformed table JSON: {0}")]
    Json(String),
    #[error("duplicate group at ({0}, {1})")]
    DuplicateGroup(i64, i64),
    #[error("negative rank at ({0}, {1})")]
    NegativeRank(i64, i64),
    #[error("torsion order {order} at ({i}, {j}) is below 2")]
    BadTorsion { i: i64, j: i64, order: i64 },
    #[error("stored jones polynomial is malformed: {0}")]
    BadJones(String),
    #[error("stored signature {stored} disagrees with the diagram's {computed}")]
    SignatureMismatch { stored: i64, computed: i64 },
    #[error("could not compute the diagram's signature: {0}")]
    Signature(String),
    #[error("determinant must be at least 1, got {0}")]
    BadDeterminant(BigInt),
    #[error("H-thin table with rank bound {bound} below determinant {det}")]
    RankBelowDeterminant { det: BigInt, bound: BigInt },
}

#[derive(Debug, Deserialize)]
struct RawTable {
    knot: String,
    sigma: i64,
    det: i64,
    jones: BTreeMap<String, i64>,
    groups: Vec<RawGroup>,
}

#[derive(Debug, Deserialize)]
struct RawGroup {
    i: i64,
    j: i64,
    rank: i64,
    #[serde(default)]
    torsion: Vec<i64>,
}

/// One bigraded group: free rank plus a multiset of torsion orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhGroup {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl KhGroup {
    /// A group contributes to support checks unless it is zero.
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// A bigraded homology table with knot metadata. Groups are kept sorted by
/// (i, j) with at most one entry per bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhTable {
    knot: String,
    sigma: i64,
    det: BigInt,
    jones: LaurentPolynomial,
    groups: Vec<KhGroup>,
}

impl KhTable {
    pub fn knot(&self) -> &str {
        &self.knot
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn jones(&self) -> &LaurentPolynomial {
        &self.jones
    }

    pub fn groups(&self) -> &[KhGroup] {
        &self.groups
    }

    /// Graded Euler characteristic Σ (−1)^i · rank · q^j.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for g in &self.groups {
            if g.rank == 0 {
                continue;
            }
            let sign = if g.i.rem_euclid(2) == 0 { 1 } else { -1 };
            out.add_term_half(2 * g.j, BigInt::from(sign * g.rank as i64));
        }
        out
    }

    /// The unreduced Euler characteristic of a knot table must recover the
    /// stored Jones polynomial: χ(q) = (q + q⁻¹) · J(q ↦ q²).
    pub fn euler_matches_jones(&self) -> bool {
        let mut doubled = LaurentPolynomial::zero();
        for (half, c) in self.jones.terms_half() {
            doubled.add_term_half(2 * half, c.clone());
        }
        let hook = LaurentPolynomial::from_q_terms([
            (1, BigInt::one()),
            (-1, BigInt::one()),
        ]);
        self.euler_characteristic() == hook.mul(&doubled)
    }
}

/// Parses and validates a table file:
/// `{"knot", "sigma", "det", "jones": {exp: coeff}, "groups": [{i, j, rank, torsion}]}`.
pub fn ingest_table(text: &str) -> Result<KhTable, KhError> {
    let raw: RawTable = serde_json::from_str(text).map_err(|e| KhError::Json(e.to_string()))?;
    let jones =
        LaurentPolynomial::from_json_map(&raw.jones).map_err(KhError::BadJones)?;
    let mut groups: Vec<KhGroup> = Vec::with_capacity(raw.groups.len());
    let mut seen: BTreeMap<(i64, i64), ()> = BTreeMap::new();
    for g in raw.groups {
        if seen.insert((g.i, g.j), ()).is_some() {
            return Err(KhError::DuplicateGroup(g.i, g.j));
        }
        if g.rank < 0 {
            return Err(KhError::NegativeRank(g.i, g.j));
        }
        if let Some(&order) = g.torsion.iter().find(|&&t| t < 2) {
            return Err(KhError::BadTorsion { i: g.i, j: g.j, order });
        }
        let mut torsion = g.torsion;
        torsion.sort_unstable();
        groups.push(KhGroup { i: g.i, j: g.j, rank: g.rank as usize, torsion });
    }
    groups.sort_by_key(|g| (g.i, g.j));
    Ok(KhTable { knot: raw.knot, sigma: raw.sigma, det: BigInt::from(raw.det), jones, groups })
}

/// True iff every nontrivial group lies on the two diagonals
/// j − 2i ∈ {sigma − 1, sigma + 1}.
pub fn is_hthin(table: &KhTable, sigma: i64) -> bool {
    table.groups.iter().filter(|g| !g.is_trivial()).all(|g| {
        let diag = g.j - 2 * g.i;
        diag == sigma - 1 || diag == sigma + 1
    })
}

/// The signature used for thin checks: recomputed from the diagram when one
/// is at hand (a mismatch with the stored value is an error), else the
/// stored metadata value.
pub fn thin_sigma(table: &KhTable, diagram: Option<&Diagram>) -> Result<i64, KhError> {
    match diagram {
        None => Ok(table.sigma),
        Some(d) => {
            let computed = signature_gl(d).map_err(|e| KhError::Signature(e.to_string()))?;
            if computed != table.sigma {
                return Err(KhError::SignatureMismatch { stored: table.sigma, computed });
            }
            Ok(computed)
        }
    }
}

/// Mirror transform: free parts move (i,j) → (−i,−j), torsion moves
/// (i,j) → (1−i,−j); the metadata flips accordingly (signature negates,
/// Jones inverts its variable).
pub fn mirror_table(table: &KhTable) -> KhTable {
    let mut rank: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut torsion: BTreeMap<(i64, i64), Vec<i64>> = BTreeMap::new();
    for g in &table.groups {
        if g.rank > 0 {
            *rank.entry((-g.i, -g.j)).or_insert(0) += g.rank;
        }
        if !g.torsion.is_empty() {
            torsion.entry((1 - g.i, -g.j)).or_default().extend(g.torsion.iter().copied());
        }
    }
    let mut keys: std::collections::BTreeSet<(i64, i64)> = rank.keys().copied().collect();
    keys.extend(torsion.keys().copied());
    let groups = keys
        .into_iter()
        .map(|(i, j)| {
            let mut tor = torsion.get(&(i, j)).cloned().unwrap_or_default();
            tor.sort_unstable();
            KhGroup { i, j, rank: rank.get(&(i, j)).copied().unwrap_or(0), torsion: tor }
        })
        .collect();
    KhTable {
        knot: table.knot.clone(),
        sigma: -table.sigma,
        det: table.det.clone(),
        jones: table.jones.invert_variable(),
        groups,
    }
}

/// Outcome of the slice-mirror thinness inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorThinVerdict {
    /// the mirror table is H-thin: free on the ±1 diagonals, torsion on −1
    MirrorHthin,
    /// preconditions unmet; nothing can be concluded
    Inconclusive,
}

/// For a slice knot whose table is H-thin at sigma 0 with torsion confined
/// to the −1 diagonal, the mirror table is again H-thin with torsion still
/// on −1 (torsion on +1 would land on −3 and break thinness).
pub fn hthin_mirror_inference(table: &KhTable, slice: bool) -> MirrorThinVerdict {
    if !slice || !is_hthin(table, 0) {
        return MirrorThinVerdict::Inconclusive;
    }
    let torsion_on_minus_one = table
        .groups
        .iter()
        .filter(|g| !g.torsion.is_empty())
        .all(|g| g.j - 2 * g.i == -1);
    if torsion_on_minus_one {
        MirrorThinVerdict::MirrorHthin
    } else {
        MirrorThinVerdict::Inconclusive
    }
}

/// Upper bound on the reduced rank: the sum of the absolute values of the
/// Jones coefficients.
pub fn reduced_rank_bound(jones: &LaurentPolynomial) -> BigInt {
    jones.coeff_abs_sum()
}

/// Outcome of the Z2 L-space test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Z2Verdict {
    /// det = rank bound with a thin table: the inequality chain collapses
    Confirmed,
    /// the bound stays strict or thinness is unknown
    Inconclusive,
}

/// The branched double cover is an L-space over Z2 exactly when the table is
/// H-thin and the determinant meets the reduced-rank bound. A thin table
/// whose bound drops below the determinant is inconsistent data.
pub fn z2_lspace_verdict(
    det: &BigInt,
    rank_bound: &BigInt,
    hthin: bool,
) -> Result<Z2Verdict, KhError> {
    if det < &BigInt::one() {
        return Err(KhError::BadDeterminant(det.clone()));
    }
    if hthin && rank_bound < det {
        return Err(KhError::RankBelowDeterminant { det: det.clone(), bound: rank_bound.clone() });
    }
    if hthin && det == rank_bound {
        Ok(Z2Verdict::Confirmed)
    } else {
        Ok(Z2Verdict::Inconclusive)
    }
}
