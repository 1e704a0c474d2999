//! Cross-module consistency properties: lattice-walk order independence,
//! conjugation symmetry, mirror identities, and agreement between the
//! independent determinant and homology-order routes. Deterministic sweeps
//! run over every bundled fixture; randomized sweeps use proptest.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use plumbline_core::blowdown::EnhancedForm;
use plumbline_core::charvec::{self, PathVerdict, DEFAULT_BUDGET};
use plumbline_core::diagram::{braid_closure, parse_pd, Diagram};
use plumbline_core::fixtures;
use plumbline_core::invariants::{
    determinant_via_bracket, goeritz_matrix, jones, knot_determinant, qa_certificate,
    signature_gl, validate_certificate, QACertificate,
};
use plumbline_core::kh::{ingest_table, is_hthin, mirror_table};
use plumbline_core::linalg::{det_exact, kernel_rational, smith_normal_form, IntMatrix, Rational};
use plumbline_core::plumbing::WeightedGraph;
use plumbline_core::poly::LaurentPolynomial;

const GRAPHS: [&str; 4] = ["w1", "w2", "w3", "w4"];
const KNOTS: [&str; 6] = ["trefoil", "5_2", "8_20", "9_46", "10_137", "10_140"];
const TABLES: [&str; 4] = ["8_20.kh", "9_46.kh", "10_137.kh", "10_140.kh"];

fn graph(name: &str) -> WeightedGraph {
    WeightedGraph::parse(fixtures::lookup(name).unwrap()).unwrap()
}

fn knot(name: &str) -> Diagram {
    parse_pd(fixtures::lookup(name).unwrap()).unwrap()
}

// ---- lattice walks ----

/// Every initial vector of every bundled graph classifies the same way along
/// every maximal push sequence: exactly one of {good reachable, dead
/// reachable} holds, and the canonical-order search agrees with it.
#[test]
fn classification_is_push_order_independent_on_all_fixture_roots() {
    let expected_roots = [48usize, 96, 144, 192];
    for (name, expect) in GRAPHS.iter().zip(expected_roots) {
        let g = graph(name);
        let roots = charvec::initial_vectors(&g);
        assert_eq!(roots.len(), expect, "{name} initial vector count");
        for k0 in &roots {
            let (good, dead) = charvec::reachable_verdicts(&g, k0, DEFAULT_BUDGET).unwrap();
            assert!(good != dead, "{name} {k0:?}: both or neither verdict reachable");
            let path = charvec::classify_path(&g, k0, DEFAULT_BUDGET).unwrap();
            assert_eq!(path.verdict == PathVerdict::Good, good, "{name} {k0:?}");
        }
    }
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

/// Depth-first good-reachability with the children visited in a seeded
/// random order at every node.
fn shuffled_good_search(
    g: &WeightedGraph,
    k: &[i64],
    rng: &mut u64,
    memo: &mut HashMap<Vec<i64>, bool>,
) -> bool {
    if (0..g.len()).all(|v| g.weight(v) <= k[v] && k[v] <= -g.weight(v) - 2) {
        return true;
    }
    if (0..g.len()).any(|v| k[v] > -g.weight(v)) {
        return false;
    }
    if let Some(&cached) = memo.get(k) {
        return cached;
    }
    let mut pushable: Vec<usize> = (0..g.len()).filter(|&v| k[v] == -g.weight(v)).collect();
    for i in (1..pushable.len()).rev() {
        let j = (xorshift(rng) % (i as u64 + 1)) as usize;
        pushable.swap(i, j);
    }
    let mut good = false;
    for v in pushable {
        let child = charvec::push(g, k, v).unwrap();
        if shuffled_good_search(g, &child, rng, memo) {
            good = true;
            break;
        }
    }
    memo.insert(k.to_vec(), good);
    good
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A search that visits children in random order reaches the same
    /// good/dead verdict as the canonical-order search on every root.
    #[test]
    fn randomized_push_order_agrees_with_canonical(
        graph_index in 0usize..4,
        root_index in 0usize..192,
        seed in any::<u64>(),
    ) {
        let g = graph(GRAPHS[graph_index]);
        let roots = charvec::initial_vectors(&g);
        let k0 = &roots[root_index % roots.len()];
        let mut rng = seed | 1;
        let mut memo = HashMap::new();
        let shuffled = shuffled_good_search(&g, k0, &mut rng, &mut memo);
        let canonical = charvec::classify_path(&g, k0, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(shuffled, canonical.verdict == PathVerdict::Good);
    }
}

/// Good vectors come back sorted, deduplicated, and drawn from the root set.
#[test]
fn good_vectors_are_sorted_unique_roots() {
    let expected_counts = [9usize, 9, 25, 9];
    for (name, expect) in GRAPHS.iter().zip(expected_counts) {
        let g = graph(name);
        let good = charvec::good_vectors(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(good.len(), expect, "{name} good count");
        assert!(good.windows(2).all(|w| w[0] < w[1]), "{name} not strictly ascending");
        let roots = charvec::initial_vectors(&g);
        for k in &good {
            assert!(roots.contains(k), "{name} good vector {k:?} outside the root set");
        }
    }
}

/// Negating a representative lands in a class carrying the same correction
/// term: the d-value multiset is conjugation-symmetric on every fixture.
#[test]
fn d_values_are_conjugation_symmetric() {
    for name in GRAPHS {
        let g = graph(name);
        let di = charvec::d_invariants(&g, DEFAULT_BUDGET).unwrap();
        for class in &di.classes {
            let neg: Vec<i64> = class.representative.iter().map(|x| -x).collect();
            let partners: Vec<&charvec::SpincClass> = di
                .classes
                .iter()
                .filter(|other| charvec::equivalent(&g, &neg, &other.representative).unwrap())
                .collect();
            assert_eq!(partners.len(), 1, "{name}: conjugate of {:?}", class.representative);
            assert_eq!(partners[0].d_value, class.d_value, "{name}: d mismatch under conjugation");
        }
    }
}

/// The disk bundle over the sphere with self-intersection -2 has the two
/// classic correction terms 1/4 and -1/4.
#[test]
fn single_minus_two_vertex_has_quarter_d_values() {
    let g = WeightedGraph::parse(r#"{"vertices":[{"id":"v","weight":-2}],"edges":[]}"#).unwrap();
    let di = charvec::d_invariants(&g, DEFAULT_BUDGET).unwrap();
    assert_eq!(di.h, BigInt::from(2));
    let mut ds: Vec<Rational> = di.classes.iter().map(|c| c.d_value.clone().unwrap()).collect();
    ds.sort();
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    assert_eq!(ds, vec![-quarter.clone(), quarter]);
}

// ---- exact linear algebra ----

fn check_snf(m: &IntMatrix) {
    let (u, d, v) = smith_normal_form(m);
    assert_eq!(u.mul(m).unwrap().mul(&v).unwrap(), d, "u*m*v != d");
    assert_eq!(det_exact(&u).unwrap().abs(), BigInt::one(), "u not unimodular");
    assert_eq!(det_exact(&v).unwrap().abs(), BigInt::one(), "v not unimodular");
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j {
                assert!(d.at(i, j).is_zero(), "off-diagonal entry in d");
            }
        }
    }
    let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.at(i, i).clone()).collect();
    for w in diag.windows(2) {
        if w[0].is_zero() {
            assert!(w[1].is_zero(), "nonzero after zero on the diagonal");
        } else {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
    }
    if m.is_square() {
        let product = diag.iter().fold(BigInt::one(), |acc, x| acc * x);
        assert_eq!(product.abs(), det_exact(m).unwrap().abs(), "diagonal product vs det");
    }
}

/// h1 order, determinant, and the diagonal of the normal form all tell the
/// same story on the bundled graphs, and the enhanced forms have the
/// one-dimensional kernels their handle counts promise.
#[test]
fn snf_determinant_and_h1_agree_on_fixtures() {
    for name in GRAPHS {
        let g = graph(name);
        let q = g.intersection_form();
        check_snf(&q);
        assert_eq!(g.h1_order().unwrap(), det_exact(&q).unwrap().abs(), "{name} h1 vs det");
    }
    for name in ["a1", "a3"] {
        let form = EnhancedForm::parse(fixtures::lookup(name).unwrap()).unwrap();
        let m = form.matrix();
        check_snf(m);
        assert!(det_exact(m).unwrap().is_zero(), "{name} full form should be singular");
        let kernel = form.kernel().unwrap();
        assert_eq!(kernel.len(), form.handle_count(), "{name} kernel dimension");
        assert_eq!(kernel_rational(m).len(), form.handle_count(), "{name} raw kernel dimension");
        for kappa in &kernel {
            assert_eq!(kappa[form.size() - 1], Rational::one(), "{name} kernel not normalized");
            for i in 0..form.size() {
                let mut s = Rational::zero();
                for (j, kj) in kappa.iter().enumerate() {
                    s += Rational::from(m.at(i, j).clone()) * kj;
                }
                assert!(s.is_zero(), "{name} kernel vector not annihilated at row {i}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The normal-form contract holds on random small integer matrices, and
    /// the kernel dimension matches the count of zero diagonal entries.
    #[test]
    fn snf_contract_on_random_matrices(
        n in 1usize..=4,
        entries in proptest::collection::vec(-6i64..=6, 16),
    ) {
        let data: Vec<BigInt> = entries[..n * n].iter().map(|&x| BigInt::from(x)).collect();
        let m = IntMatrix::new(n, n, data).unwrap();
        check_snf(&m);
        let (_, d, _) = smith_normal_form(&m);
        let zeros = (0..n).filter(|&i| d.at(i, i).is_zero()).count();
        prop_assert_eq!(kernel_rational(&m).len(), zeros);
    }
}

// ---- polynomials ----

fn poly_from_half_terms(terms: &[(i64, i64)]) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for &(half, coeff) in terms {
        p.add_term_half(half, BigInt::from(coeff));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Variable inversion is an involution and a ring map, and it preserves
    /// the coefficient mass.
    #[test]
    fn variable_inversion_is_an_involutive_ring_map(
        a in proptest::collection::vec((-8i64..=8, -9i64..=9), 0..=5),
        b in proptest::collection::vec((-8i64..=8, -9i64..=9), 0..=5),
    ) {
        let p = poly_from_half_terms(&a);
        let q = poly_from_half_terms(&b);
        prop_assert_eq!(p.invert_variable().invert_variable(), p.clone());
        prop_assert_eq!(p.mul(&q).invert_variable(), p.invert_variable().mul(&q.invert_variable()));
        prop_assert_eq!(p.invert_variable().coeff_abs_sum(), p.coeff_abs_sum());
        prop_assert!(p.add(&p.neg()).is_zero());
    }
}

// ---- diagrams and invariants ----

/// Mirroring twice restores the canonical form, negates the writhe and the
/// signature, and inverts the polynomial variable; the determinant is blind
/// to it.
#[test]
fn mirror_identities_on_knot_fixtures() {
    for name in KNOTS {
        let d = knot(name);
        let m = d.mirror().unwrap();
        assert_eq!(m.mirror().unwrap().canonical_key(), d.canonical_key(), "{name} double mirror");
        assert_eq!(m.writhe().unwrap(), -d.writhe().unwrap(), "{name} writhe");
        assert_eq!(signature_gl(&m).unwrap(), -signature_gl(&d).unwrap(), "{name} signature");
        assert_eq!(jones(&m).unwrap(), jones(&d).unwrap().invert_variable(), "{name} polynomial");
        assert_eq!(knot_determinant(&m).unwrap(), knot_determinant(&d).unwrap(), "{name} det");
    }
}

/// Both checkerboard colors give the same determinant, and the exact-form
/// route agrees with the polynomial evaluation on every fixture.
#[test]
fn determinant_routes_agree_on_fixtures() {
    for name in KNOTS {
        let d = knot(name);
        let coloring = d.checkerboard().unwrap();
        let det_black = det_exact(&goeritz_matrix(&d, &coloring).unwrap()).unwrap().abs();
        let det_white = det_exact(&goeritz_matrix(&d, &coloring.swapped()).unwrap()).unwrap().abs();
        assert_eq!(det_black, det_white, "{name} coloring dependence");
        assert_eq!(det_black, knot_determinant(&d).unwrap(), "{name} determinant");
        assert_eq!(det_black, determinant_via_bracket(&d).unwrap(), "{name} bracket route");
        assert_eq!(det_black, jones(&d).unwrap().abs_at_minus_one(), "{name} evaluation route");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Random braid closures satisfy the same mirror and determinant
    /// identities as the curated fixtures, components and all.
    #[test]
    fn braid_closures_satisfy_mirror_and_determinant_identities(
        strands in 2usize..=3,
        word in proptest::collection::vec((1i32..=2, any::<bool>()), 1..=6),
    ) {
        let letters: Vec<i32> = word
            .iter()
            .map(|&(k, neg)| {
                let k = k.min(strands as i32 - 1);
                if neg { -k } else { k }
            })
            .collect();
        let d = braid_closure(strands, &letters).unwrap();
        let m = d.mirror().unwrap();
        prop_assert_eq!(m.mirror().unwrap().canonical_key(), d.canonical_key());
        prop_assert_eq!(jones(&m).unwrap(), jones(&d).unwrap().invert_variable());
        let det = knot_determinant(&d).unwrap();
        prop_assert_eq!(det.clone(), determinant_via_bracket(&d).unwrap());
        prop_assert_eq!(det, jones(&d).unwrap().abs_at_minus_one());
    }
}

// ---- homology tables ----

/// Table mirroring is an involution that negates the signature, inverts the
/// polynomial, preserves total rank and torsion count, and keeps thinness.
#[test]
fn table_mirror_identities_on_fixtures() {
    for name in TABLES {
        let t = ingest_table(fixtures::lookup(name).unwrap()).unwrap();
        assert!(t.euler_matches_jones(), "{name} euler characteristic");
        let m = mirror_table(&t);
        assert_eq!(mirror_table(&m), t, "{name} double mirror");
        assert_eq!(m.sigma(), -t.sigma(), "{name} sigma");
        assert_eq!(m.jones(), &t.jones().invert_variable(), "{name} polynomial");
        assert!(m.euler_matches_jones(), "{name} mirrored euler characteristic");
        let rank = |t: &plumbline_core::kh::KhTable| -> usize {
            t.groups().iter().map(|g| g.rank).sum()
        };
        let torsion = |t: &plumbline_core::kh::KhTable| -> usize {
            t.groups().iter().map(|g| g.torsion.len()).sum()
        };
        assert_eq!(rank(&m), rank(&t), "{name} total rank");
        assert_eq!(torsion(&m), torsion(&t), "{name} torsion count");
        assert!(is_hthin(&t, 0) && is_hthin(&m, 0), "{name} thinness under mirroring");
    }
}

// ---- certificates ----

fn check_certificate_shape(cert: &QACertificate) {
    match cert {
        QACertificate::UnknotLeaf => {}
        QACertificate::AlternatingLeaf { crossings, determinant } => {
            assert!(*crossings > 0, "alternating leaf with no crossings");
            assert!(determinant > &BigInt::zero(), "alternating leaf determinant");
        }
        QACertificate::Resolution { determinant, det_zero, det_one, children, .. } => {
            assert_eq!(determinant, &(det_zero + det_one), "determinant not additive");
            assert!(det_zero > &BigInt::zero() && det_one > &BigInt::zero());
            check_certificate_shape(&children[0]);
            check_certificate_shape(&children[1]);
        }
    }
}

/// Every certificate the search produces on the fixture set revalidates and
/// satisfies determinant additivity at every internal node.
#[test]
fn certificates_revalidate_and_are_additive() {
    for name in ["trefoil", "5_2"] {
        let d = knot(name);
        let cert = qa_certificate(&d, 3).unwrap().expect("fixture should certify");
        check_certificate_shape(&cert);
        assert!(validate_certificate(&d, &cert).unwrap(), "{name} certificate rejected");
    }
    let d = knot("8_20").mirror().unwrap();
    let cert = qa_certificate(&d, 3).unwrap().expect("mirrored diagram should certify");
    check_certificate_shape(&cert);
    assert!(validate_certificate(&d, &cert).unwrap());
    let (det, zero, one) = cert.det_triple().expect("root should be a resolution");
    assert_eq!((det, zero, one), (&BigInt::from(9), &BigInt::from(8), &BigInt::one()));
}
