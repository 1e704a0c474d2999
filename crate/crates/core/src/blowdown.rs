//! Extension of boundary spin^c structures over a rational homology ball.
//!
//! The ball is presented by an enhanced intersection form: a symmetric matrix
//! whose top-left block is the intersection form of a companion plumbing and
//! whose remaining handle coordinates make the form degenerate. A boundary
//! characteristic vector extends over the ball exactly when it completes, on
//! the handle coordinates, to a vector orthogonal to the kernel of the form
//! with integral, characteristic values. Clearing denominators of the kernel
//! turns the integrality condition into a single congruence on the boundary
//! coordinates, and a counting lemma (h = s·t²) predicts how many boundary
//! spin^c classes extend.

use crate::charvec::{self, CharVecError, LSpaceVerdict, SpincClass};
use crate::linalg::{self, IntMatrix, LinalgError, Rational};
use crate::plumbing::WeightedGraph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BlowdownError {
    #[error("form JSON: {0}")]
    Json(String),
    #[error("enhanced form must be symmetric")]
    NotSymmetric,
    #[error("boundary rank {boundary} leaves no handle coordinates in a size-{size} form")]
    BoundaryRank { boundary: usize, size: usize },
    #[error("kernel dimension {found} differs from handle count {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("congruence derivation requires exactly one handle coordinate, found {0}")]
    NotOneHandle(usize),
    #[error("extension system is underdetermined")]
    Underdetermined,
    #[error("vector has {got} coordinates, boundary has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("coordinate {0} violates the characteristic parity")]
    NotCharacteristic(usize),
    #[error("boundary block of the form does not match the graph intersection form")]
    FormMismatch,
    #[error("h = {h} and s = {s} must be positive")]
    NonPositiveCount { h: BigInt, s: BigInt },
    #[error("no rational ball count is consistent with h = {h}, s = {s}")]
    NoConsistentCount { h: BigInt, s: BigInt },
    #[error(transparent)]
    CharVec(#[from] CharVecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Deserialize)]
struct RawForm {
    boundary: usize,
    matrix: Vec<Vec<i64>>,
}

/// Symmetric intersection form of a 4-manifold with boundary-facing
/// coordinates first and handle coordinates last.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhancedForm {
    matrix: IntMatrix,
    boundary: usize,
}

impl EnhancedForm {
    pub fn new(matrix: IntMatrix, boundary: usize) -> Result<Self, BlowdownError> {
        if !matrix.is_square() || !matrix.is_symmetric() {
            return Err(BlowdownError::NotSymmetric);
        }
        let size = matrix.rows();
        if boundary == 0 || boundary >= size {
            return Err(BlowdownError::BoundaryRank { boundary, size });
        }
        Ok(EnhancedForm { matrix, boundary })
    }

    /// Parses the on-disk format `{"boundary": n, "matrix": [[...]]}`.
    pub fn parse(text: &str) -> Result<Self, BlowdownError> {
        let raw: RawForm =
            serde_json::from_str(text).map_err(|e| BlowdownError::Json(e.to_string()))?;
        let matrix = IntMatrix::from_rows_i64(&raw.matrix)?;
        EnhancedForm::new(matrix, raw.boundary)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary
    }

    pub fn handle_count(&self) -> usize {
        self.size() - self.boundary
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Top-left boundary block, for comparison with a companion graph.
    pub fn boundary_block(&self) -> IntMatrix {
        let n = self.boundary;
        let mut block = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *block.at_mut(i, j) = self.matrix.at(i, j).clone();
            }
        }
        block
    }

    /// Rational kernel of the form. The dimension must equal the handle
    /// count; anything else is an error, not a guess.
    pub fn kernel(&self) -> Result<Vec<Vec<Rational>>, BlowdownError> {
        let basis = linalg::kernel_rational(&self.matrix);
        let expected = self.handle_count();
        if basis.len() != expected {
            return Err(BlowdownError::KernelDimension { expected, found: basis.len() });
        }
        Ok(basis)
    }

    fn check_boundary_vector(&self, a: &[i64]) -> Result<(), BlowdownError> {
        if a.len() != self.boundary {
            return Err(BlowdownError::WrongLength { expected: self.boundary, got: a.len() });
        }
        for (i, &ai) in a.iter().enumerate() {
            let diag = self.matrix.at(i, i);
            if (BigInt::from(ai) - diag).is_odd() {
                return Err(BlowdownError::NotCharacteristic(i));
            }
        }
        Ok(())
    }
}

/// Result of completing one boundary vector across the handle coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionOutcome {
    /// Integral, characteristic handle values: the structure extends.
    Extends { handle_values: Vec<BigInt> },
    /// Orthogonality forces fractional handle values.
    NonIntegral { handle_values: Vec<Rational> },
    /// Integral values of the wrong parity: not characteristic on a handle.
    ParityObstructed { handle_values: Vec<BigInt> },
}

impl ExtensionOutcome {
    pub fn extends(&self) -> bool {
        matches!(self, ExtensionOutcome::Extends { .. })
    }
}

/// Completes `a` on the handle coordinates by solving orthogonality against
/// the kernel, then checks integrality and the characteristic parity.
pub fn extends_over_ball(form: &EnhancedForm, a: &[i64]) -> Result<ExtensionOutcome, BlowdownError> {
    form.check_boundary_vector(a)?;
    let kernel = form.kernel()?;
    let n = form.boundary_rank();
    // κʳ · (a, x) = 0 for each kernel vector κʳ: a k×k system in x
    let system: Vec<Vec<Rational>> =
        kernel.iter().map(|kv| kv[n..].to_vec()).collect();
    let rhs: Vec<Rational> = kernel
        .iter()
        .map(|kv| {
            -(0..n)
                .map(|i| &kv[i] * Rational::from(BigInt::from(a[i])))
                .sum::<Rational>()
        })
        .collect();
    let Some(x) = linalg::solve_rational_system(&system, &rhs)? else {
        return Err(BlowdownError::Underdetermined);
    };
    if x.iter().any(|v| !v.is_integer()) {
        return Ok(ExtensionOutcome::NonIntegral { handle_values: x });
    }
    let ints: Vec<BigInt> = x.iter().map(|v| v.to_integer()).collect();
    for (j, v) in ints.iter().enumerate() {
        let diag = form.matrix.at(n + j, n + j);
        if (v - diag).is_odd() {
            return Ok(ExtensionOutcome::ParityObstructed { handle_values: ints });
        }
    }
    Ok(ExtensionOutcome::Extends { handle_values: ints })
}

/// Linear congruence Σ cᵢ aᵢ ≡ 0 (mod m) on boundary coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Congruence {
    pub coefficients: Vec<BigInt>,
    pub modulus: BigInt,
}

impl Congruence {
    pub fn holds(&self, a: &[i64]) -> bool {
        assert_eq!(a.len(), self.coefficients.len(), "congruence arity");
        let sum: BigInt = self
            .coefficients
            .iter()
            .zip(a)
            .map(|(c, &ai)| c * BigInt::from(ai))
            .sum();
        sum.mod_floor(&self.modulus).is_zero()
    }
}

/// Clears denominators of the (one-dimensional) kernel: the handle value is
/// integral exactly when the returned congruence holds on the boundary
/// coordinates. An integral kernel yields the trivial congruence mod 1.
pub fn derive_congruence(form: &EnhancedForm) -> Result<Congruence, BlowdownError> {
    let k = form.handle_count();
    if k != 1 {
        return Err(BlowdownError::NotOneHandle(k));
    }
    let kernel = form.kernel()?;
    let kappa = &kernel[0];
    let n = form.boundary_rank();
    // canonical scaling puts 1 in the last coordinate; a vanishing handle
    // coordinate would leave the handle value undetermined
    if kappa[n] != Rational::one() {
        return Err(BlowdownError::Underdetermined);
    }
    let modulus = kappa[..n]
        .iter()
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let coefficients = kappa[..n]
        .iter()
        .map(|v| (v * Rational::from(modulus.clone())).to_integer().mod_floor(&modulus))
        .collect();
    Ok(Congruence { coefficients, modulus })
}

/// Number of boundary spin^c classes a rational ball can absorb: t = √(h/s).
pub fn expected_extension_count(h: &BigInt, s: &BigInt) -> Result<BigInt, BlowdownError> {
    if !h.is_positive() || !s.is_positive() {
        return Err(BlowdownError::NonPositiveCount { h: h.clone(), s: s.clone() });
    }
    let (q, r) = h.div_rem(s);
    if !r.is_zero() {
        return Err(BlowdownError::NoConsistentCount { h: h.clone(), s: s.clone() });
    }
    let t = q.sqrt();
    if &t * &t != q {
        return Err(BlowdownError::NoConsistentCount { h: h.clone(), s: s.clone() });
    }
    Ok(t)
}

/// Spin^c classes of the boundary with d = 0: the candidates for extension
/// over any rational homology ball.
pub fn extension_candidates_by_d(
    g: &WeightedGraph,
    budget: u64,
) -> Result<Vec<SpincClass>, CharVecError> {
    let inv = charvec::d_invariants(g, budget)?;
    Ok(inv
        .classes
        .into_iter()
        .filter(|c| c.d_value.as_ref().is_some_and(|d| d.is_zero()))
        .collect())
}

/// Extension verdict for one good boundary vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSummary {
    pub vector: Vec<i64>,
    pub outcome: ExtensionOutcome,
}

/// Per-form extension data inside a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionData {
    /// Good vectors whose spin^c structure extends, ascending lexicographic.
    pub extenders: Vec<Vec<i64>>,
    pub outcomes: Vec<ExtensionSummary>,
    /// Integrality congruence, available when the form has one handle.
    pub congruence: Option<Congruence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowdownReport {
    pub h: BigInt,
    pub lspace: LSpaceVerdict,
    pub d_zero_classes: Vec<SpincClass>,
    pub expected_t: BigInt,
    /// Set when the d = 0 class count disagrees with the expected count:
    /// vanishing d is necessary for extension, not sufficient.
    pub discrepancy: bool,
    pub extension: Option<ExtensionData>,
}

/// Aggregates the eligibility data for blowing down along a rational ball:
/// order h, L-space certificate, d = 0 classes, the expected extension count,
/// and — when an enhanced form is supplied — the exact extender set.
pub fn blowdown_report(
    g: &WeightedGraph,
    form: Option<&EnhancedForm>,
    budget: u64,
) -> Result<BlowdownReport, BlowdownError> {
    let h = g.h1_order().map_err(CharVecError::from)?;
    let lspace = charvec::lspace_verdict(g, budget)?;
    let d_zero_classes = extension_candidates_by_d(g, budget)?;
    let expected_t = expected_extension_count(&h, &BigInt::one())?;
    let discrepancy = BigInt::from(d_zero_classes.len()) != expected_t;
    let extension = match form {
        None => None,
        Some(form) => {
            if form.boundary_block() != g.intersection_form() {
                return Err(BlowdownError::FormMismatch);
            }
            let good = charvec::good_vectors(g, budget)?;
            let mut outcomes = Vec::with_capacity(good.len());
            let mut extenders = Vec::new();
            for vector in good {
                let outcome = extends_over_ball(form, &vector)?;
                if outcome.extends() {
                    extenders.push(vector.clone());
                }
                outcomes.push(ExtensionSummary { vector, outcome });
            }
            let congruence =
                if form.handle_count() == 1 { Some(derive_congruence(form)?) } else { None };
            Some(ExtensionData { extenders, outcomes, congruence })
        }
    };
    Ok(BlowdownReport { h, lspace, d_zero_classes, expected_t, discrepancy, extension })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvec::{initial_vectors, LSpaceConclusion, DEFAULT_BUDGET};

    fn a1() -> EnhancedForm {
        EnhancedForm::parse(include_str!("../fixtures/a1.json")).unwrap()
    }

    fn a3() -> EnhancedForm {
        EnhancedForm::parse(include_str!("../fixtures/a3.json")).unwrap()
    }

    fn w1() -> WeightedGraph {
        WeightedGraph::parse(include_str!("../fixtures/w1.json")).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_validates_shape() {
        assert!(matches!(
            EnhancedForm::parse(r#"{"boundary": 1, "matrix": [[0, 1], [2, 0]]}"#),
            Err(BlowdownError::NotSymmetric)
        ));
        assert!(matches!(
            EnhancedForm::parse(r#"{"boundary": 2, "matrix": [[0, 1], [1, 0]]}"#),
            Err(BlowdownError::BoundaryRank { boundary: 2, size: 2 })
        ));
        assert!(matches!(
            EnhancedForm::parse("{"),
            Err(BlowdownError::Json(_))
        ));
        let form = a1();
        assert_eq!(form.size(), 6);
        assert_eq!(form.boundary_rank(), 5);
        assert_eq!(form.handle_count(), 1);
    }

    #[test]
    fn bundled_kernels_are_canonical() {
        let k1 = a1().kernel().unwrap();
        assert_eq!(
            k1,
            vec![vec![r(-1, 1), r(-2, 1), r(-5, 3), r(-4, 3), r(-4, 3), r(1, 1)]]
        );
        let k3 = a3().kernel().unwrap();
        assert_eq!(
            k3,
            vec![vec![r(-1, 1), r(-2, 1), r(-7, 5), r(-6, 5), r(-8, 5), r(-6, 5), r(1, 1)]]
        );
    }

    #[test]
    fn kernel_dimension_mismatch_is_an_error() {
        // invertible 2x2 form: kernel is empty, handle count is 1
        let form = EnhancedForm::new(
            IntMatrix::from_rows_i64(&[vec![-2, 1], vec![1, -2]]).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(
            form.kernel().unwrap_err(),
            BlowdownError::KernelDimension { expected: 1, found: 0 }
        );
    }

    #[test]
    fn extension_examples_on_bundled_forms() {
        let form = a1();
        assert_eq!(
            extends_over_ball(&form, &[0, 0, 0, 0, 3]).unwrap(),
            ExtensionOutcome::Extends { handle_values: vec![BigInt::from(4)] }
        );
        assert_eq!(
            extends_over_ball(&form, &[0, 0, 0, 0, 1]).unwrap(),
            ExtensionOutcome::NonIntegral { handle_values: vec![r(4, 3)] }
        );
        assert_eq!(
            extends_over_ball(&a3(), &[0, 0, 1, 0, 0, 3]).unwrap(),
            ExtensionOutcome::Extends { handle_values: vec![BigInt::from(5)] }
        );
        assert_eq!(
            extends_over_ball(&form, &[0, 0, 0, 0]).unwrap_err(),
            BlowdownError::WrongLength { expected: 5, got: 4 }
        );
        assert_eq!(
            extends_over_ball(&form, &[1, 0, 0, 0, 3]).unwrap_err(),
            BlowdownError::NotCharacteristic(0)
        );
    }

    #[test]
    fn parity_obstruction_is_detected() {
        // kernel (1/2, 1): handle value −a₀/2, handle diagonal odd
        let form = EnhancedForm::new(
            IntMatrix::from_rows_i64(&[vec![-4, 2], vec![2, -1]]).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(
            extends_over_ball(&form, &[2]).unwrap(),
            ExtensionOutcome::Extends { handle_values: vec![BigInt::from(-1)] }
        );
        assert_eq!(
            extends_over_ball(&form, &[4]).unwrap(),
            ExtensionOutcome::ParityObstructed { handle_values: vec![BigInt::from(-2)] }
        );
    }

    #[test]
    fn congruence_tracks_integrality_over_the_whole_box() {
        let g = w1();
        let form = a1();
        let congruence = derive_congruence(&form).unwrap();
        assert_eq!(congruence.modulus, BigInt::from(3));
        // same solution set as the reduced form 2a₃ + a₄ + a₅ ≡ 0 (mod 3)
        for a in initial_vectors(&g) {
            let reduced = (2 * a[2] + a[3] + a[4]).rem_euclid(3) == 0;
            assert_eq!(congruence.holds(&a), reduced, "at {a:?}");
            let integral = !matches!(
                extends_over_ball(&form, &a).unwrap(),
                ExtensionOutcome::NonIntegral { .. }
            );
            assert_eq!(congruence.holds(&a), integral, "at {a:?}");
        }
    }

    #[test]
    fn integral_kernel_gives_the_trivial_congruence() {
        let form = EnhancedForm::new(
            IntMatrix::from_rows_i64(&[vec![-1, 1], vec![1, -1]]).unwrap(),
            1,
        )
        .unwrap();
        let congruence = derive_congruence(&form).unwrap();
        assert_eq!(congruence.modulus, BigInt::one());
        assert!(congruence.holds(&[-1]));
        assert!(congruence.holds(&[17]));
    }

    #[test]
    fn congruence_requires_one_handle() {
        let form = EnhancedForm::new(IntMatrix::zero(3, 3), 1).unwrap();
        assert_eq!(derive_congruence(&form).unwrap_err(), BlowdownError::NotOneHandle(2));
    }

    #[test]
    fn expected_count_checks_the_square() {
        let b = BigInt::from;
        assert_eq!(expected_extension_count(&b(9), &b(1)).unwrap(), b(3));
        assert_eq!(expected_extension_count(&b(25), &b(1)).unwrap(), b(5));
        assert_eq!(expected_extension_count(&b(18), &b(2)).unwrap(), b(3));
        assert_eq!(
            expected_extension_count(&b(12), &b(1)).unwrap_err(),
            BlowdownError::NoConsistentCount { h: b(12), s: b(1) }
        );
        assert_eq!(
            expected_extension_count(&b(9), &b(2)).unwrap_err(),
            BlowdownError::NoConsistentCount { h: b(9), s: b(2) }
        );
        assert_eq!(
            expected_extension_count(&b(0), &b(1)).unwrap_err(),
            BlowdownError::NonPositiveCount { h: b(0), s: b(1) }
        );
    }

    #[test]
    fn report_matches_the_count_on_the_first_pair() {
        let report = blowdown_report(&w1(), Some(&a1()), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.h, BigInt::from(9));
        assert_eq!(report.lspace.conclusion, LSpaceConclusion::LSpace);
        assert_eq!(report.expected_t, BigInt::from(3));
        assert!(!report.discrepancy);
        let expected_extenders =
            vec![vec![0, 0, 0, 0, 3], vec![0, 0, 0, 2, 1], vec![0, 0, 2, 0, -1]];
        let data = report.extension.unwrap();
        assert_eq!(data.extenders, expected_extenders);
        assert_eq!(data.outcomes.len(), 9);
        // d = 0 is exactly the extender set here
        let d_zero_reps: Vec<Vec<i64>> =
            report.d_zero_classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(d_zero_reps, expected_extenders);
    }

    #[test]
    fn report_surfaces_the_count_discrepancy() {
        let g = WeightedGraph::parse(include_str!("../fixtures/w2.json")).unwrap();
        let report = blowdown_report(&g, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.h, BigInt::from(9));
        assert_eq!(report.d_zero_classes.len(), 5);
        assert_eq!(report.expected_t, BigInt::from(3));
        assert!(report.discrepancy);
        assert!(report.extension.is_none());
    }

    #[test]
    fn report_on_the_larger_pair_finds_five_extenders() {
        let g = WeightedGraph::parse(include_str!("../fixtures/w3.json")).unwrap();
        let report = blowdown_report(&g, Some(&a3()), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.h, BigInt::from(25));
        assert_eq!(report.expected_t, BigInt::from(5));
        assert!(!report.discrepancy);
        let data = report.extension.unwrap();
        assert_eq!(
            data.extenders,
            vec![
                vec![0, 0, -1, 0, 2, 1],
                vec![0, 0, -1, 2, 2, -1],
                vec![0, 0, 1, 0, 0, 3],
                vec![0, 0, 1, 2, 0, 1],
                vec![0, 0, 3, 0, 0, -1],
            ]
        );
        // necessity: every extender lies in a d = 0 class
        for extender in &data.extenders {
            assert!(report
                .d_zero_classes
                .iter()
                .any(|c| charvec::equivalent(&g, &c.representative, extender).unwrap()));
        }
        assert!(data.congruence.unwrap().modulus == BigInt::from(5));
    }

    #[test]
    fn report_rejects_a_mismatched_form() {
        let g = WeightedGraph::parse(include_str!("../fixtures/w2.json")).unwrap();
        assert_eq!(
            blowdown_report(&g, Some(&a1()), DEFAULT_BUDGET).unwrap_err(),
            BlowdownError::FormMismatch
        );
    }
}
