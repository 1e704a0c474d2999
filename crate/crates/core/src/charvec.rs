//! Characteristic-vector path classification on a weighted forest.
//!
//! A characteristic vector is recorded by its pairings a_i = ⟨K, v_i⟩ with the
//! vertex basis, so a_i ≡ m(v_i) (mod 2). Starting from vectors in the box
//! [m(v)+2, −m(v)] one repeatedly pushes at a vertex whose coordinate sits at
//! the ceiling −m(v), adding twice the corresponding row of the intersection
//! form. A path is good when it reaches the box [m(v), −m(v)−2] and dead when
//! any coordinate overshoots its ceiling. Good initial vectors enumerate
//! HF-hat generators of the boundary manifold; grouped into spin^c classes
//! they carry d-invariants via max (K² + |G|)/4.

use crate::linalg::{self, Rational};
use crate::plumbing::{GraphError, WeightedGraph};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

/// Default cap on vector visits per classified initial vector.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum CharVecError {
    #[error("vector has {got} coordinates, graph has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("coordinate {0} violates the characteristic parity")]
    NotCharacteristic(usize),
    #[error("coordinate {0} lies outside the initial box")]
    OutsideInitialBox(usize),
    #[error("push at vertex {vertex} requires coordinate {required}, found {found}")]
    NotPushable { vertex: usize, required: i64, found: i64 },
    #[error("classification exceeded the budget of {0} vector visits")]
    BudgetExceeded(u64),
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("{found} bad vertices exceed the supported maximum of {max}")]
    TooManyBadVertices { found: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVerdict {
    Good,
    Dead,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOutcome {
    pub verdict: PathVerdict,
    /// A terminal vector in the box [m(v), −m(v)−2], when the verdict is good.
    pub terminal: Option<Vec<i64>>,
    /// Vertices pushed along one good path, in order, when the verdict is good.
    pub trace: Option<Vec<usize>>,
    /// Number of vector evaluations performed.
    pub visited: u64,
}

/// A spin^c equivalence class of characteristic vectors: two vectors are
/// identified when half their difference lies in the integral image of Q.
#[derive(Debug, Clone, PartialEq)]
pub struct SpincClass {
    pub representative: Vec<i64>,
    pub members: Vec<Vec<i64>>,
    pub d_value: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DInvariants {
    pub h: BigInt,
    pub good_count: usize,
    pub classes: Vec<SpincClass>,
    /// True when every spin^c class of the boundary contains a good vector.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LSpaceConclusion {
    LSpace,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSpaceVerdict {
    pub h: BigInt,
    pub good_count: usize,
    pub bad_vertex_count: usize,
    pub conclusion: LSpaceConclusion,
}

fn check_length(g: &WeightedGraph, k: &[i64]) -> Result<(), CharVecError> {
    if k.len() != g.len() {
        return Err(CharVecError::WrongLength { expected: g.len(), got: k.len() });
    }
    Ok(())
}

fn check_characteristic(g: &WeightedGraph, k: &[i64]) -> Result<(), CharVecError> {
    check_length(g, k)?;
    for (i, &a) in k.iter().enumerate() {
        if (a - g.weight(i)).rem_euclid(2) != 0 {
            return Err(CharVecError::NotCharacteristic(i));
        }
    }
    Ok(())
}

fn check_initial(g: &WeightedGraph, k: &[i64]) -> Result<(), CharVecError> {
    check_characteristic(g, k)?;
    for (i, &a) in k.iter().enumerate() {
        let m = g.weight(i);
        if a < m + 2 || a > -m {
            return Err(CharVecError::OutsideInitialBox(i));
        }
    }
    Ok(())
}

/// All characteristic vectors in the initial box ∏ {m(v)+2, m(v)+4, …, −m(v)},
/// in ascending lexicographic order. Empty when some vertex has weight ≥ 0.
pub fn initial_vectors(g: &WeightedGraph) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut out = Vec::new();
    if (0..n).any(|v| g.weight(v) >= 0) {
        return out;
    }
    let mut current: Vec<i64> = (0..n).map(|v| g.weight(v) + 2).collect();
    loop {
        out.push(current.clone());
        // odometer with the last coordinate fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] + 2 <= -g.weight(pos) {
                current[pos] += 2;
                for reset in pos + 1..n {
                    current[reset] = g.weight(reset) + 2;
                }
                break;
            }
        }
    }
}

/// One push step at `v`: K′ = K + 2·Q(v,·). Requires ⟨K, v⟩ = −m(v).
pub fn push(g: &WeightedGraph, k: &[i64], v: usize) -> Result<Vec<i64>, CharVecError> {
    check_characteristic(g, k)?;
    let required = -g.weight(v);
    if k[v] != required {
        return Err(CharVecError::NotPushable { vertex: v, required, found: k[v] });
    }
    Ok(push_unchecked(g, k, v))
}

fn push_unchecked(g: &WeightedGraph, k: &[i64], v: usize) -> Vec<i64> {
    let mut out = k.to_vec();
    out[v] += 2 * g.weight(v);
    for &u in g.neighbors(v) {
        out[u] += 2;
    }
    out
}

/// How a vector resolves without expanding children.
enum Immediate {
    Good,
    Dead,
    Known(bool),
    Open(Vec<usize>),
}

fn inspect(g: &WeightedGraph, k: &[i64], memo: &HashMap<Vec<i64>, bool>) -> Immediate {
    // terminal box first, then the overshoot rule, then pushable vertices
    if (0..g.len()).all(|v| g.weight(v) <= k[v] && k[v] <= -g.weight(v) - 2) {
        return Immediate::Good;
    }
    if (0..g.len()).any(|v| k[v] > -g.weight(v)) {
        return Immediate::Dead;
    }
    if let Some(&cached) = memo.get(k) {
        return Immediate::Known(cached);
    }
    let pushable: Vec<usize> = (0..g.len()).filter(|&v| k[v] == -g.weight(v)).collect();
    debug_assert!(!pushable.is_empty(), "a live vector always has a coordinate at its ceiling");
    Immediate::Open(pushable)
}

struct Frame {
    k: Vec<i64>,
    pushable: Vec<usize>,
    next: usize,
    entered_via: Option<usize>,
}

/// Classifies one initial vector by depth-first exploration of all push
/// choices, memoizing visited vectors. Every vector evaluation (including
/// memo hits) counts toward the budget.
pub fn classify_path(g: &WeightedGraph, k0: &[i64], budget: u64) -> Result<PathOutcome, CharVecError> {
    check_initial(g, k0)?;
    let mut memo: HashMap<Vec<i64>, bool> = HashMap::new();
    let mut visited: u64 = 0;
    let mut stack: Vec<Frame> = Vec::new();

    let exceeded = |visited: u64| PathOutcome {
        verdict: PathVerdict::BudgetExceeded,
        terminal: None,
        trace: None,
        visited,
    };

    visited += 1;
    match inspect(g, k0, &memo) {
        Immediate::Good => {
            return Ok(PathOutcome {
                verdict: PathVerdict::Good,
                terminal: Some(k0.to_vec()),
                trace: Some(Vec::new()),
                visited,
            })
        }
        Immediate::Dead => {
            return Ok(PathOutcome { verdict: PathVerdict::Dead, terminal: None, trace: None, visited })
        }
        Immediate::Known(_) => unreachable!("memo is empty"),
        Immediate::Open(pushable) => {
            stack.push(Frame { k: k0.to_vec(), pushable, next: 0, entered_via: None })
        }
    }

    while let Some(frame) = stack.last_mut() {
        if frame.next >= frame.pushable.len() {
            // all branches from this vector are dead
            memo.insert(frame.k.clone(), false);
            stack.pop();
            continue;
        }
        let v = frame.pushable[frame.next];
        frame.next += 1;
        let child = push_unchecked(g, &frame.k, v);
        if visited >= budget {
            return Ok(exceeded(visited));
        }
        visited += 1;
        let resolved = match inspect(g, &child, &memo) {
            Immediate::Good => Some((true, Some(child.clone()))),
            Immediate::Dead => Some((false, None)),
            Immediate::Known(cached) => Some((cached, None)),
            Immediate::Open(pushable) => {
                stack.push(Frame { k: child, pushable, next: 0, entered_via: Some(v) });
                None
            }
        };
        if let Some((true, terminal)) = resolved {
            // the whole chain of ancestors reaches a good terminal
            let mut trace: Vec<usize> = Vec::new();
            for f in &stack {
                memo.insert(f.k.clone(), true);
                if let Some(via) = f.entered_via {
                    trace.push(via);
                }
            }
            trace.push(v);
            let terminal = match terminal {
                Some(t) => t,
                // cached good interior vector: replay a good path from it
                None => {
                    let child = push_unchecked(g, stack.last().unwrap().k.as_slice(), v);
                    let (t, mut tail, extra) =
                        replay_good_path(g, child, &memo, budget.saturating_sub(visited))?;
                    visited += extra;
                    trace.append(&mut tail);
                    t
                }
            };
            return Ok(PathOutcome {
                verdict: PathVerdict::Good,
                terminal: Some(terminal),
                trace: Some(trace),
                visited,
            });
        }
    }
    Ok(PathOutcome { verdict: PathVerdict::Dead, terminal: None, trace: None, visited })
}

/// Follows memoized good vectors down to a terminal, returning it along with
/// the pushed vertices and the number of evaluations spent.
fn replay_good_path(
    g: &WeightedGraph,
    mut k: Vec<i64>,
    memo: &HashMap<Vec<i64>, bool>,
    budget: u64,
) -> Result<(Vec<i64>, Vec<usize>, u64), CharVecError> {
    let mut trace = Vec::new();
    let mut spent: u64 = 0;
    loop {
        if spent >= budget {
            return Err(CharVecError::BudgetExceeded(budget));
        }
        spent += 1;
        match inspect(g, &k, memo) {
            Immediate::Good => return Ok((k, trace, spent)),
            Immediate::Dead => unreachable!("replay of a good vector cannot die"),
            Immediate::Known(_) | Immediate::Open(_) => {
                let pushable: Vec<usize> =
                    (0..g.len()).filter(|&v| k[v] == -g.weight(v)).collect();
                let mut advanced = false;
                for v in pushable {
                    let child = push_unchecked(g, &k, v);
                    let child_state = inspect(g, &child, memo);
                    let good = matches!(child_state, Immediate::Good | Immediate::Known(true));
                    if good {
                        trace.push(v);
                        k = child;
                        advanced = true;
                        break;
                    }
                }
                assert!(advanced, "a good interior vector must have a good successor");
            }
        }
    }
}

/// Both verdicts reachable from `k0` over all maximal push sequences:
/// (some sequence ends good, some sequence ends dead). Push-order
/// independence of the classification means exactly one flag is set.
pub fn reachable_verdicts(
    g: &WeightedGraph,
    k0: &[i64],
    budget: u64,
) -> Result<(bool, bool), CharVecError> {
    check_initial(g, k0)?;
    struct Node {
        k: Vec<i64>,
        children: Vec<Vec<i64>>,
        next: usize,
        acc: (bool, bool),
    }
    let mut memo: HashMap<Vec<i64>, (bool, bool)> = HashMap::new();
    let mut visited: u64 = 0;

    // resolves leaves; None means the vector needs expansion
    let leaf = |k: &[i64], memo: &HashMap<Vec<i64>, (bool, bool)>| -> Option<(bool, bool)> {
        if (0..g.len()).all(|v| g.weight(v) <= k[v] && k[v] <= -g.weight(v) - 2) {
            return Some((true, false));
        }
        if (0..g.len()).any(|v| k[v] > -g.weight(v)) {
            return Some((false, true));
        }
        memo.get(k).copied()
    };

    visited += 1;
    if let Some(flags) = leaf(k0, &memo) {
        return Ok(flags);
    }
    let expand = |k: &[i64]| -> Vec<Vec<i64>> {
        (0..g.len())
            .filter(|&v| k[v] == -g.weight(v))
            .map(|v| push_unchecked(g, k, v))
            .collect()
    };
    let mut stack = vec![Node { k: k0.to_vec(), children: expand(k0), next: 0, acc: (false, false) }];
    while let Some(node) = stack.last_mut() {
        if node.next >= node.children.len() {
            let finished = stack.pop().unwrap();
            memo.insert(finished.k, finished.acc);
            match stack.last_mut() {
                Some(parent) => {
                    parent.acc.0 |= finished.acc.0;
                    parent.acc.1 |= finished.acc.1;
                }
                None => return Ok(finished.acc),
            }
            continue;
        }
        let child = node.children[node.next].clone();
        node.next += 1;
        if visited >= budget {
            return Err(CharVecError::BudgetExceeded(budget));
        }
        visited += 1;
        if let Some(flags) = leaf(&child, &memo) {
            node.acc.0 |= flags.0;
            node.acc.1 |= flags.1;
        } else {
            let children = expand(&child);
            stack.push(Node { k: child, children, next: 0, acc: (false, false) });
        }
    }
    unreachable!("root node returns before the stack empties")
}

/// All good initial vectors, ascending lexicographic. A budget-exceeded
/// classification anywhere is reported as an error rather than a guess.
pub fn good_vectors(g: &WeightedGraph, budget: u64) -> Result<Vec<Vec<i64>>, CharVecError> {
    let inits = initial_vectors(g);
    let classified: Result<Vec<_>, CharVecError> = inits
        .par_iter()
        .map(|k| classify_path(g, k, budget).map(|o| (k.clone(), o.verdict)))
        .collect();
    let mut good: Vec<Vec<i64>> = Vec::new();
    for (k, verdict) in classified? {
        match verdict {
            PathVerdict::Good => good.push(k),
            PathVerdict::Dead => {}
            PathVerdict::BudgetExceeded => return Err(CharVecError::BudgetExceeded(budget)),
        }
    }
    good.sort();
    Ok(good)
}

/// K² = aᵀ Q⁻¹ a, exact.
pub fn square(g: &WeightedGraph, k: &[i64]) -> Result<Rational, CharVecError> {
    check_characteristic(g, k)?;
    let inv = linalg::inverse_rational(&g.intersection_form())?;
    let n = g.len();
    let mut total = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            total += &inv[i][j] * Rational::from(BigInt::from(k[i] * k[j]));
        }
    }
    Ok(total)
}

/// Integral-image equivalence of two characteristic vectors: (k2−k1)/2 ∈ Q·ℤⁿ.
pub fn equivalent(g: &WeightedGraph, k1: &[i64], k2: &[i64]) -> Result<bool, CharVecError> {
    check_characteristic(g, k1)?;
    check_characteristic(g, k2)?;
    let half_diff: Vec<BigInt> = k1
        .iter()
        .zip(k2)
        .map(|(&a, &b)| {
            debug_assert_eq!((b - a).rem_euclid(2), 0);
            BigInt::from((b - a) / 2)
        })
        .collect();
    Ok(linalg::solve_integral(&g.intersection_form(), &half_diff)?.is_some())
}

/// Groups characteristic vectors into spin^c classes. Members and classes are
/// sorted lexicographically; the representative is the least member.
pub fn spinc_classes(g: &WeightedGraph, vectors: &[Vec<i64>]) -> Result<Vec<SpincClass>, CharVecError> {
    for k in vectors {
        check_characteristic(g, k)?;
    }
    // invariant of the class: U·k mod 2·d_i, where U Q V = D is the SNF;
    // k1 ~ k2 ⟺ U(k2−k1)/2 ≡ 0 elementwise mod the diagonal of D
    let (u, d, _v) = linalg::smith_normal_form(&g.intersection_form());
    let n = g.len();
    let key_of = |k: &[i64]| -> Vec<BigInt> {
        (0..n)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..n {
                    s += u.at(i, j) * BigInt::from(k[j]);
                }
                let modulus: BigInt = d.at(i, i).clone() * 2;
                if modulus.is_zero() {
                    s
                } else {
                    s.mod_floor(&modulus)
                }
            })
            .collect()
    };
    let mut buckets: HashMap<Vec<BigInt>, Vec<Vec<i64>>> = HashMap::new();
    for k in vectors {
        buckets.entry(key_of(k)).or_default().push(k.clone());
    }
    let mut classes: Vec<SpincClass> = buckets
        .into_values()
        .map(|mut members| {
            members.sort();
            members.dedup();
            SpincClass { representative: members[0].clone(), members, d_value: None }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// d-invariants per spin^c class represented by good vectors:
/// d = max over the class's good vectors of (K² + |G|)/4.
/// Valid for negative-definite forests with at most two bad vertices.
pub fn d_invariants(g: &WeightedGraph, budget: u64) -> Result<DInvariants, CharVecError> {
    if !g.is_negative_definite()? {
        return Err(CharVecError::NotNegativeDefinite);
    }
    let bad = g.bad_vertices().len();
    if bad > 2 {
        return Err(CharVecError::TooManyBadVertices { found: bad, max: 2 });
    }
    let h = g.h1_order()?;
    let good = good_vectors(g, budget)?;
    let good_count = good.len();
    let mut classes = spinc_classes(g, &good)?;
    let order = BigInt::from(g.len());
    for class in &mut classes {
        let mut best: Option<Rational> = None;
        for k in &class.members {
            let d = (square(g, k)? + Rational::from(order.clone())) / Rational::from(BigInt::from(4));
            best = Some(match best {
                Some(b) if b >= d => b,
                _ => d,
            });
        }
        class.d_value = best;
    }
    let complete = BigInt::from(classes.len()) == h;
    Ok(DInvariants { h, good_count, classes, complete })
}

/// L-space certificate: conclusive exactly when the graph is negative
/// definite with at most one bad vertex and |good| = h.
pub fn lspace_verdict(g: &WeightedGraph, budget: u64) -> Result<LSpaceVerdict, CharVecError> {
    if !g.is_negative_definite()? {
        return Err(CharVecError::NotNegativeDefinite);
    }
    let h = g.h1_order()?;
    let good_count = good_vectors(g, budget)?.len();
    let bad_vertex_count = g.bad_vertices().len();
    let conclusion = if bad_vertex_count <= 1 && BigInt::from(good_count) == h {
        LSpaceConclusion::LSpace
    } else {
        LSpaceConclusion::Inconclusive
    };
    Ok(LSpaceVerdict { h, good_count, bad_vertex_count, conclusion })
}
