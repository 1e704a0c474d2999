//! Classical invariants of link diagrams — Goeritz forms, determinants, the
//! Jones polynomial, the Gordon–Litherland signature — and a certificate
//! search that exhibits a diagram as quasi-alternating by resolving
//! crossings along the unreduced determinant recursion.

use crate::diagram::{Diagram, RegionColor, RegionColoring};
use crate::linalg::{det_exact, signature_symmetric, IntMatrix, LinalgError};
use crate::poly::LaurentPolynomial;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Largest diagram the exponential-state-sum routines accept.
pub const BRACKET_CROSSING_CAP: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum InvariantError {
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("diagram has {count} crossings, above the cap of {cap}")]
    TooManyCrossings { count: usize, cap: usize },
}

/// Goeritz sign of a crossing whose black corners sit on the odd diagonal
/// (corners 1 and 3); the even diagonal gets the opposite sign. The value is
/// pinned by the standard positive trefoil having signature -2.
const ETA_ODD_DIAGONAL: i64 = -1;

/// A crossing contributes its Goeritz sign to the signature correction term
/// exactly when `sign * eta` equals this constant; pinned alongside
/// `ETA_ODD_DIAGONAL` by the trefoil and figure-eight signatures.
const CORRECTED_SIGN_ETA: i64 = 1;

fn eta(coloring: &RegionColoring, crossing: usize) -> (usize, usize, i64) {
    let (r, s, odd) = coloring.black_pair(crossing);
    (r, s, if odd { ETA_ODD_DIAGONAL } else { -ETA_ODD_DIAGONAL })
}

/// Symmetric Goeritz form of a checkerboard coloring: one generator per
/// black region, accumulated Laplacian-style over the crossings, with one
/// region bordering the unbounded face dropped.
pub fn goeritz_matrix(d: &Diagram, coloring: &RegionColoring) -> Result<IntMatrix, InvariantError> {
    let blacks = coloring.black_regions();
    let index: HashMap<usize, usize> = blacks.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut full = IntMatrix::zero(blacks.len(), blacks.len());
    for c in 0..d.crossing_count() {
        let (r, s, eta) = eta(coloring, c);
        let (i, j) = (index[&r], index[&s]);
        *full.at_mut(i, i) += eta;
        *full.at_mut(j, j) += eta;
        *full.at_mut(i, j) -= eta;
        *full.at_mut(j, i) -= eta;
    }
    let drop = dropped_region(d, coloring, &blacks);
    let keep: Vec<usize> = (0..blacks.len()).filter(|&i| blacks[i] != drop).collect();
    let mut reduced = IntMatrix::zero(keep.len(), keep.len());
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            *reduced.at_mut(a, b) = full.at(i, j).clone();
        }
    }
    Ok(reduced)
}

/// The black region to leave out: the unbounded one if black, otherwise the
/// smallest black region cornering the unbounded face, if any.
fn dropped_region(d: &Diagram, coloring: &RegionColoring, blacks: &[usize]) -> usize {
    if coloring.colors[coloring.unbounded] == RegionColor::Black {
        return coloring.unbounded;
    }
    let mut adjacent: Vec<usize> = Vec::new();
    for c in 0..d.crossing_count() {
        let corners = coloring.corner_regions[c];
        for j in 0..4 {
            if corners[j] == coloring.unbounded {
                adjacent.push(corners[(j + 1) % 4]);
                adjacent.push(corners[(j + 3) % 4]);
            }
        }
    }
    adjacent
        .into_iter()
        .filter(|r| coloring.colors[*r] == RegionColor::Black)
        .min()
        .unwrap_or_else(|| *blacks.last().expect("nonempty black set"))
}

/// `|det|` of the reduced Goeritz form; 0 for split diagrams, 1 for the
/// crossingless unknot (empty form).
pub fn knot_determinant(d: &Diagram) -> Result<BigInt, InvariantError> {
    if d.is_split() {
        return Ok(BigInt::zero());
    }
    let coloring = d.checkerboard()?;
    let g = goeritz_matrix(d, &coloring)?;
    Ok(det_exact(&g)?.abs())
}

/// Kauffman bracket as a Laurent polynomial in the frame variable, exponent
/// map keyed by powers of `A`.
fn bracket(d: &Diagram) -> Result<BTreeMap<i64, BigInt>, InvariantError> {
    let n = d.crossing_count();
    if n > BRACKET_CROSSING_CAP {
        return Err(InvariantError::TooManyCrossings { count: n, cap: BRACKET_CROSSING_CAP });
    }
    // delta^k for k up to every possible circle count
    let max_loops = n + 1 + d.free_loops();
    let mut delta_powers: Vec<BTreeMap<i64, BigInt>> = vec![BTreeMap::from([(0, BigInt::from(1))])];
    for k in 1..=max_loops {
        let mut next = BTreeMap::new();
        for (&e, c) in &delta_powers[k - 1] {
            // delta = -A^2 - A^-2
            *next.entry(e + 2).or_insert_with(BigInt::zero) -= c;
            *next.entry(e - 2).or_insert_with(BigInt::zero) -= c;
        }
        delta_powers.push(next);
    }
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut kinds = vec![0u8; n];
    for mask in 0u32..(1u32 << n) {
        for (i, kind) in kinds.iter_mut().enumerate() {
            *kind = ((mask >> i) & 1) as u8;
        }
        let loops = d.smoothing_loops(&kinds) + d.free_loops();
        debug_assert!(loops >= 1, "a nonempty diagram smooths to at least one circle");
        // kind 1 is the A-smoothing, kind 0 the A^{-1} one
        let zeros = n as i64 - i64::from(mask.count_ones());
        let exponent = i64::from(mask.count_ones()) - zeros;
        for (&e, c) in &delta_powers[loops - 1] {
            let entry = out.entry(e + exponent).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(&(e + exponent));
            }
        }
    }
    Ok(out)
}

/// Jones polynomial in `q`, normalized so the unknot gives 1. Exponential in
/// the crossing count; diagrams above [`BRACKET_CROSSING_CAP`] are rejected.
pub fn jones(d: &Diagram) -> Result<LaurentPolynomial, InvariantError> {
    if d.crossing_count() == 0 && d.free_loops() == 0 {
        return Err(InvariantError::Diagram(crate::diagram::DiagramError::Empty));
    }
    let writhe = d.writhe()?;
    let raw = bracket(d)?;
    // multiply by (-A^3)^{-writhe}, then substitute q = A^{-4}
    let sign = if writhe % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
    let mut out = LaurentPolynomial::zero();
    for (e, c) in raw {
        let shifted = e - 3 * writhe;
        debug_assert_eq!(shifted % 2, 0, "bracket exponents keep one parity");
        out.add_term_half(-shifted / 2, c * &sign);
    }
    Ok(out)
}

/// `|bracket(A = primitive 8th root)|`: the circle factor vanishes there, so
/// only one-circle smoothings count and the magnitude is the determinant.
pub fn determinant_via_bracket(d: &Diagram) -> Result<BigInt, InvariantError> {
    let n = d.crossing_count();
    if n > BRACKET_CROSSING_CAP {
        return Err(InvariantError::TooManyCrossings { count: n, cap: BRACKET_CROSSING_CAP });
    }
    if n == 0 && d.free_loops() == 0 {
        return Err(InvariantError::Diagram(crate::diagram::DiagramError::Empty));
    }
    // coefficients of 1, z, z^2, z^3 in Z[z]/(z^4 + 1)
    let mut value = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut kinds = vec![0u8; n];
    for mask in 0u32..(1u32 << n) {
        for (i, kind) in kinds.iter_mut().enumerate() {
            *kind = ((mask >> i) & 1) as u8;
        }
        if d.smoothing_loops(&kinds) + d.free_loops() != 1 {
            continue;
        }
        let zeros = n as i64 - i64::from(mask.count_ones());
        let exponent = (i64::from(mask.count_ones()) - zeros).rem_euclid(8) as usize;
        if exponent < 4 {
            value[exponent] += 1;
        } else {
            value[exponent - 4] -= 1;
        }
    }
    let nonzero: Vec<BigInt> =
        value.into_iter().filter(|c| !c.is_zero()).map(|c| c.abs()).collect();
    debug_assert!(nonzero.len() <= 1, "bracket at the 8th root is an integer times a unit");
    Ok(nonzero.into_iter().next().unwrap_or_else(BigInt::zero))
}

/// Link signature via the Gordon–Litherland correction of the Goeritz form
/// of the default (unbounded-white) coloring.
pub fn signature_gl(d: &Diagram) -> Result<i64, InvariantError> {
    if d.crossing_count() == 0 {
        return Ok(0);
    }
    let coloring = d.checkerboard()?;
    let g = goeritz_matrix(d, &coloring)?;
    let (pos, neg, _zero) = signature_symmetric(&g)?;
    let signs = d.orient()?.sign;
    let mut correction = 0i64;
    for c in 0..d.crossing_count() {
        let (_, _, eta) = eta(&coloring, c);
        if signs[c] * eta == CORRECTED_SIGN_ETA {
            correction += eta;
        }
    }
    Ok(pos as i64 - neg as i64 - correction)
}

/// Proof tree that a diagram presents a quasi-alternating link: leaves are
/// crossingless unknots or reduced alternating diagrams with nonzero
/// determinant, and every node resolves one crossing into two children whose
/// determinants are nonzero and sum to the parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QACertificate {
    UnknotLeaf,
    AlternatingLeaf { crossings: usize, determinant: BigInt },
    Resolution {
        crossing: usize,
        determinant: BigInt,
        det_zero: BigInt,
        det_one: BigInt,
        children: Box<[QACertificate; 2]>,
    },
}

impl QACertificate {
    /// Determinant triple `(det, det0, det1)` at a resolution root.
    pub fn det_triple(&self) -> Option<(&BigInt, &BigInt, &BigInt)> {
        match self {
            QACertificate::Resolution { determinant, det_zero, det_one, .. } => {
                Some((determinant, det_zero, det_one))
            }
            _ => None,
        }
    }
}

enum MemoEntry {
    Found(QACertificate),
    FailedUpTo(usize),
}

/// Searches for a quasi-alternating certificate, resolving crossings of the
/// simplified diagram in decreasing order of child determinant product.
/// `None` means the bounded search was exhausted, not that no certificate
/// exists.
pub fn qa_certificate(
    d: &Diagram,
    depth_budget: usize,
) -> Result<Option<QACertificate>, InvariantError> {
    let mut memo = HashMap::new();
    search(d, depth_budget, &mut memo)
}

type Memo = HashMap<(Vec<[usize; 4]>, usize), MemoEntry>;

fn search(d: &Diagram, depth: usize, memo: &mut Memo) -> Result<Option<QACertificate>, InvariantError> {
    let s = d.simplify(d.crossing_count());
    if s.crossing_count() == 0 {
        return Ok((s.components() == 1).then_some(QACertificate::UnknotLeaf));
    }
    let key = s.canonical_key();
    match memo.get(&key) {
        Some(MemoEntry::Found(cert)) => return Ok(Some(cert.clone())),
        Some(MemoEntry::FailedUpTo(tried)) if *tried >= depth => return Ok(None),
        _ => {}
    }
    let det = knot_determinant(&s)?;
    if !s.is_split() && s.is_alternating() && !det.is_zero() {
        let cert = QACertificate::AlternatingLeaf {
            crossings: s.crossing_count(),
            determinant: det,
        };
        memo.insert(key, MemoEntry::Found(cert.clone()));
        return Ok(Some(cert));
    }
    if depth == 0 {
        memo.insert(key, MemoEntry::FailedUpTo(0));
        return Ok(None);
    }
    // candidate crossings whose two smoothings split the determinant
    let mut candidates = Vec::new();
    for c in 0..s.crossing_count() {
        let zero = s.resolve(c, 0)?;
        let one = s.resolve(c, 1)?;
        let det_zero = knot_determinant(&zero)?;
        let det_one = knot_determinant(&one)?;
        if det_zero.is_zero() || det_one.is_zero() || &det_zero + &det_one != det {
            continue;
        }
        candidates.push((&det_zero * &det_one, c, zero, one, det_zero, det_one));
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, c, zero, one, det_zero, det_one) in candidates {
        let Some(child_zero) = search(&zero, depth - 1, memo)? else { continue };
        let Some(child_one) = search(&one, depth - 1, memo)? else { continue };
        let cert = QACertificate::Resolution {
            crossing: c,
            determinant: det.clone(),
            det_zero,
            det_one,
            children: Box::new([child_zero, child_one]),
        };
        memo.insert(key, MemoEntry::Found(cert.clone()));
        return Ok(Some(cert));
    }
    memo.insert(key, MemoEntry::FailedUpTo(depth));
    Ok(None)
}

/// Recomputes every claim a certificate makes about a diagram.
pub fn validate_certificate(d: &Diagram, cert: &QACertificate) -> Result<bool, InvariantError> {
    let s = d.simplify(d.crossing_count());
    match cert {
        QACertificate::UnknotLeaf => Ok(s.crossing_count() == 0 && s.components() == 1),
        QACertificate::AlternatingLeaf { crossings, determinant } => Ok(s.crossing_count()
            == *crossings
            && !s.is_split()
            && s.is_alternating()
            && !determinant.is_zero()
            && knot_determinant(&s)? == *determinant),
        QACertificate::Resolution { crossing, determinant, det_zero, det_one, children } => {
            if *crossing >= s.crossing_count() {
                return Ok(false);
            }
            let zero = s.resolve(*crossing, 0)?;
            let one = s.resolve(*crossing, 1)?;
            Ok(knot_determinant(&s)? == *determinant
                && !det_zero.is_zero()
                && !det_one.is_zero()
                && det_zero + det_one == *determinant
                && knot_determinant(&zero)? == *det_zero
                && knot_determinant(&one)? == *det_one
                && validate_certificate(&zero, &children[0])?
                && validate_certificate(&one, &children[1])?)
        }
    }
}
