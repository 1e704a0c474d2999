//! Planar-diagram link presentations and the moves the certifier needs.
//!
//! A diagram is a list of crossings, each a 4-tuple of arc labels read
//! counterclockwise from the incoming under-strand, plus a count of
//! crossingless circles. On top of that sit mirroring, the two smoothings of
//! a crossing, alternation and splitness predicates, bounded
//! crossing-removing simplification, and the checkerboard region data that
//! feeds the Goeritz construction. Planarity of the input is not verified;
//! region data of a non-planar code fails the coloring step.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("PD parse: {0}")]
    Parse(String),
    #[error("arc {label} appears {count} times, expected exactly 2")]
    ArcMultiplicity { label: usize, count: usize },
    #[error("crossing index {index} out of range ({len} crossings)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("resolution kind must be 0 or 1")]
    BadKind,
    #[error("orientation constraints conflict at arc {0}")]
    InconsistentOrientation(usize),
    #[error("diagram is empty")]
    Empty,
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("no checkerboard coloring exists (input is not planar)")]
    NotCheckerboardable,
    #[error("braid word letter {0} does not fit the strand count")]
    BadBraidLetter(i32),
}

/// A link diagram: crossings as counterclockwise 4-tuples of arc labels
/// starting at the incoming under-strand, plus crossingless circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<[usize; 4]>,
    free_loops: usize,
}

/// Parses PD text: either one `X(a,b,c,d)` per line (`#` comments allowed)
/// or a JSON list of 4-tuples. Text with no crossings is the unknot.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let trimmed = text.trim();
    let tuples: Vec<[usize; 4]> = if trimmed.starts_with('[') {
        let rows: Vec<Vec<usize>> = serde_json::from_str(trimmed)
            .map_err(|e| DiagramError::Parse(format!("JSON: {e}")))?;
        rows.into_iter()
            .map(|row| {
                <[usize; 4]>::try_from(row.as_slice())
                    .map_err(|_| DiagramError::Parse("tuple is not a 4-tuple".into()))
            })
            .collect::<Result<_, _>>()?
    } else {
        let mut out = Vec::new();
        for line in trimmed.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            out.push(parse_x_line(line)?);
        }
        out
    };
    if tuples.is_empty() {
        return Ok(Diagram::unknot());
    }
    Diagram::from_tuples(tuples, 0)
}

fn parse_x_line(line: &str) -> Result<[usize; 4], DiagramError> {
    let inner = line
        .strip_prefix('X')
        .or_else(|| line.strip_prefix('x'))
        .and_then(|rest| rest.trim().strip_prefix('('))
        .and_then(|rest| rest.trim_end().strip_suffix(')'))
        .ok_or_else(|| DiagramError::Parse(format!("expected X(a,b,c,d), got {line:?}")))?;
    let parts: Vec<usize> = inner
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| DiagramError::Parse(format!("{line:?}: {e}")))?;
    <[usize; 4]>::try_from(parts.as_slice())
        .map_err(|_| DiagramError::Parse(format!("{line:?}: expected 4 labels")))
}

/// Minimal union-find over arc labels.
struct ArcSets {
    parent: HashMap<usize, usize>,
}

impl ArcSets {
    fn new() -> Self {
        ArcSets { parent: HashMap::new() }
    }

    fn find(&mut self, x: usize) -> usize {
        let p = *self.parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent.insert(x, root);
        root
    }

    /// Returns true when the two labels were already joined (a cycle closed).
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return true;
        }
        // keep the smaller label as root for deterministic rebuilds
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo);
        false
    }
}

/// Per-crossing orientation data: which odd slot the over-strand enters.
pub(crate) struct Orientation {
    pub over_in: Vec<usize>,
    pub sign: Vec<i64>,
}

impl Diagram {
    /// The 0-crossing diagram of the unknot.
    pub fn unknot() -> Diagram {
        Diagram { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn from_tuples(crossings: Vec<[usize; 4]>, free_loops: usize) -> Result<Diagram, DiagramError> {
        let d = Diagram { crossings, free_loops };
        d.occurrences()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Where each arc label occurs, validating the two-endpoint invariant.
    fn occurrences(&self) -> Result<HashMap<usize, [(usize, usize); 2]>, DiagramError> {
        let mut seen: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (c, tuple) in self.crossings.iter().enumerate() {
            for (s, &label) in tuple.iter().enumerate() {
                seen.entry(label).or_default().push((c, s));
            }
        }
        let mut labels: Vec<usize> = seen.keys().copied().collect();
        labels.sort_unstable();
        let mut out = HashMap::new();
        for label in labels {
            let occs = &seen[&label];
            let pair: [(usize, usize); 2] = occs
                .as_slice()
                .try_into()
                .map_err(|_| DiagramError::ArcMultiplicity { label, count: occs.len() })?;
            out.insert(label, pair);
        }
        Ok(out)
    }

    /// Strand components: arcs joined through every crossing, plus circles.
    pub fn components(&self) -> usize {
        let mut sets = ArcSets::new();
        for tuple in &self.crossings {
            sets.union(tuple[0], tuple[2]);
            sets.union(tuple[1], tuple[3]);
        }
        let mut roots: Vec<usize> = self
            .crossings
            .iter()
            .flatten()
            .map(|&label| sets.find(label))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() + self.free_loops
    }

    /// Assigns a direction to every arc. Under-strands are forced (slot 0
    /// enters, slot 2 exits); over-strands are propagated, and components
    /// that are never under anywhere get a deterministic free choice.
    pub(crate) fn orient(&self) -> Result<Orientation, DiagramError> {
        let occs = self.occurrences().expect("validated at construction");
        let mut labels: Vec<usize> = occs.keys().copied().collect();
        labels.sort_unstable();
        // head[label] = index (0/1) of the occurrence the arc flows into
        let mut head: HashMap<usize, usize> = HashMap::new();
        let mut queue: Vec<usize> = Vec::new();

        let assign = |label: usize,
                          head_occ: usize,
                          head: &mut HashMap<usize, usize>,
                          queue: &mut Vec<usize>|
         -> Result<(), DiagramError> {
            match head.get(&label) {
                Some(&h) if h != head_occ => Err(DiagramError::InconsistentOrientation(label)),
                Some(_) => Ok(()),
                None => {
                    head.insert(label, head_occ);
                    queue.push(label);
                    Ok(())
                }
            }
        };

        // seed with the under-strand constraints
        for (c, tuple) in self.crossings.iter().enumerate() {
            for (slot, flows_in) in [(0usize, true), (2usize, false)] {
                let label = tuple[slot];
                let pair = occs[&label];
                let here = pair.iter().position(|&o| o == (c, slot)).unwrap();
                let head_occ = if flows_in { here } else { 1 - here };
                assign(label, head_occ, &mut head, &mut queue)?;
            }
        }
        loop {
            // propagate through over-strands: at each crossing the arcs at
            // slots 1 and 3 have opposite in/out roles
            while let Some(label) = queue.pop() {
                let pair = occs[&label];
                for (idx, &(c, slot)) in pair.iter().enumerate() {
                    if slot % 2 == 0 {
                        continue;
                    }
                    let flows_in = head[&label] == idx;
                    let other_slot = 4 - slot; // 1 <-> 3
                    let other = self.crossings[c][other_slot];
                    let opair = occs[&other];
                    let mut fixed = false;
                    for (oidx, &oocc) in opair.iter().enumerate() {
                        if oocc == (c, other_slot) && !fixed {
                            // exactly one of the two over arcs flows in
                            let head_occ = if flows_in { 1 - oidx } else { oidx };
                            assign(other, head_occ, &mut head, &mut queue)?;
                            fixed = true;
                        }
                    }
                }
            }
            // components that are over everywhere: pick a direction
            match labels.iter().find(|l| !head.contains_key(*l)) {
                Some(&label) => assign(label, 0, &mut head, &mut queue)?,
                None => break,
            }
        }

        let mut over_in = Vec::with_capacity(self.crossings.len());
        let mut sign = Vec::with_capacity(self.crossings.len());
        for (c, tuple) in self.crossings.iter().enumerate() {
            let incoming: Vec<usize> = [1usize, 3]
                .into_iter()
                .filter(|&s| {
                    let pair = occs[&tuple[s]];
                    let here = pair.iter().position(|&o| o == (c, s)).unwrap();
                    head[&tuple[s]] == here
                })
                .collect();
            match incoming.as_slice() {
                [s] => {
                    over_in.push(*s);
                    sign.push(if *s == 3 { 1 } else { -1 });
                }
                _ => return Err(DiagramError::InconsistentOrientation(tuple[1])),
            }
        }
        Ok(Orientation { over_in, sign })
    }

    /// Sum of crossing signs under the derived orientation.
    pub fn writhe(&self) -> Result<i64, DiagramError> {
        Ok(self.orient()?.sign.iter().sum())
    }

    /// Switches every crossing by rotating each tuple so the old incoming
    /// over-strand becomes the incoming under-strand.
    pub fn mirror(&self) -> Result<Diagram, DiagramError> {
        let orientation = self.orient()?;
        let crossings = self
            .crossings
            .iter()
            .zip(&orientation.over_in)
            .map(|(&[a, b, c, d], &over_in)| match over_in {
                1 => [b, c, d, a],
                _ => [d, a, b, c],
            })
            .collect();
        Ok(Diagram { crossings, free_loops: self.free_loops })
    }

    /// Removes the listed crossings, joining their slots as instructed
    /// (pairs of slot indices per victim), and renames arcs canonically.
    /// Cycles that close and touch no surviving crossing become circles.
    fn glue_rebuild(&self, victims: &[(usize, [(usize, usize); 2])]) -> Diagram {
        let mut sets = ArcSets::new();
        let mut closures = 0usize;
        for &(c, pairs) in victims {
            for (sa, sb) in pairs {
                if sets.union(self.crossings[c][sa], self.crossings[c][sb]) {
                    closures += 1;
                }
            }
        }
        let removed: Vec<usize> = victims.iter().map(|&(c, _)| c).collect();
        let survivors: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(c, _)| !removed.contains(c))
            .map(|(_, t)| t.map(|label| sets.find(label)))
            .collect();
        // compact labels in order of first appearance
        let mut rename: HashMap<usize, usize> = HashMap::new();
        let crossings: Vec<[usize; 4]> = survivors
            .iter()
            .map(|t| {
                t.map(|label| {
                    let next = rename.len() + 1;
                    *rename.entry(label).or_insert(next)
                })
            })
            .collect();
        debug_assert!(
            {
                let mut sets = sets;
                let closed: Vec<usize> = self
                    .crossings
                    .iter()
                    .flatten()
                    .map(|&l| sets.find(l))
                    .filter(|r| !survivors.iter().flatten().any(|s| s == r))
                    .collect();
                !closed.is_empty() || closures == 0
            },
            "every closure event is a crossingless circle"
        );
        Diagram { crossings, free_loops: self.free_loops + closures }
    }

    /// Replaces crossing `index` by one of its two smoothings: kind 0 joins
    /// slots (0,3) and (1,2); kind 1 joins slots (0,1) and (2,3). At a
    /// negative crossing kind 0 is the orientation-respecting smoothing; at
    /// a positive crossing kind 1 is.
    pub fn resolve(&self, index: usize, kind: u8) -> Result<Diagram, DiagramError> {
        if index >= self.crossings.len() {
            return Err(DiagramError::IndexOutOfRange { index, len: self.crossings.len() });
        }
        let pairs = match kind {
            0 => [(0, 3), (1, 2)],
            1 => [(0, 1), (2, 3)],
            _ => return Err(DiagramError::BadKind),
        };
        Ok(self.glue_rebuild(&[(index, pairs)]))
    }

    /// Circle count of the full smoothing with the given kind per crossing.
    pub(crate) fn smoothing_loops(&self, kinds: &[u8]) -> usize {
        debug_assert_eq!(kinds.len(), self.crossings.len());
        let victims: Vec<(usize, [(usize, usize); 2])> = kinds
            .iter()
            .enumerate()
            .map(|(c, &k)| (c, if k == 0 { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] }))
            .collect();
        self.glue_rebuild(&victims).free_loops - self.free_loops
    }

    /// A crossing with a one-arc loop: two cyclically adjacent equal labels.
    fn r1_candidate(&self) -> Option<usize> {
        self.crossings.iter().position(|t| (0..4).any(|s| t[s] == t[(s + 1) % 4]))
    }

    /// Two crossings bounding an empty bigon, one strand running over at both
    /// ends, the other under at both: the strands pull apart. The bigon
    /// condition: cyclically adjacent slots of `c` carry the two arcs, which
    /// arrive at cyclically adjacent slots of `d` in mirrored order.
    fn r2_candidate(&self) -> Option<(usize, usize)> {
        let n = self.crossings.len();
        for c in 0..n {
            for d in 0..n {
                if c == d {
                    continue;
                }
                let tc = &self.crossings[c];
                let td = &self.crossings[d];
                for s in 0..4 {
                    let (l1, l2) = (tc[s], tc[(s + 1) % 4]);
                    for u in 0..4 {
                        if td[u] != l2 || td[(u + 1) % 4] != l1 {
                            continue;
                        }
                        // over/under parity must match across the bigon
                        if s % 2 == (u + 1) % 2 {
                            return Some((c, d));
                        }
                    }
                }
            }
        }
        None
    }

    /// Applies crossing-removing moves until none is available or the budget
    /// runs out. Removal erases the crossing, letting both strands run
    /// straight through; the crossing count never increases.
    pub fn simplify(&self, move_budget: usize) -> Diagram {
        let straight = [(0usize, 2usize), (1, 3)];
        let mut current = self.clone();
        for _ in 0..move_budget {
            if let Some(c) = current.r1_candidate() {
                current = current.glue_rebuild(&[(c, straight)]);
            } else if let Some((c, d)) = current.r2_candidate() {
                current = current.glue_rebuild(&[(c, straight), (d, straight)]);
            } else {
                break;
            }
        }
        current
    }

    /// True when every strand alternates under/over along its full cycle.
    pub fn is_alternating(&self) -> bool {
        let occs = match self.occurrences() {
            Ok(occs) => occs,
            Err(_) => return false,
        };
        // passages: (crossing, axis) with axis 0 = under, 1 = over; the walk
        // itself tracks the arrival slot so it never turns around
        let mut visited: Vec<[bool; 2]> = vec![[false; 2]; self.crossings.len()];
        for c0 in 0..self.crossings.len() {
            for s0 in 0..2 {
                if visited[c0][s0 % 2] {
                    continue;
                }
                let mut axes = Vec::new();
                let (mut c, mut s) = (c0, s0);
                loop {
                    visited[c][s % 2] = true;
                    axes.push(s % 2);
                    // leave through the opposite end of this passage and
                    // re-enter at the arc's other endpoint
                    let out_slot = (s + 2) % 4;
                    let label = self.crossings[c][out_slot];
                    let pair = occs[&label];
                    let (nc, ns) =
                        if pair[0] == (c, out_slot) { pair[1] } else { pair[0] };
                    (c, s) = (nc, ns);
                    if (c, s) == (c0, s0) {
                        break;
                    }
                }
                let alternates = (0..axes.len())
                    .all(|i| axes[i] != axes[(i + 1) % axes.len()]);
                if !alternates {
                    return false;
                }
            }
        }
        true
    }

    /// True when some components share no crossing with the rest: circles
    /// next to crossings, or a disconnected crossing-adjacency graph.
    pub fn is_split(&self) -> bool {
        if self.crossings.is_empty() {
            return self.free_loops > 1;
        }
        if self.free_loops > 0 {
            return true;
        }
        let mut sets = ArcSets::new();
        for tuple in &self.crossings {
            sets.union(tuple[0], tuple[2]);
            sets.union(tuple[1], tuple[3]);
            // crossing ties its two strands together
            sets.union(tuple[0], tuple[1]);
        }
        let mut roots: Vec<usize> = self
            .crossings
            .iter()
            .flatten()
            .map(|&label| sets.find(label))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() > 1
    }

    /// Memoization key: tuples normalized under the rotation-by-2 symmetry
    /// (reading the under-strand backwards), sorted, plus the circle count.
    pub fn canonical_key(&self) -> (Vec<[usize; 4]>, usize) {
        let mut tuples: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .map(|&[a, b, c, d]| std::cmp::min([a, b, c, d], [c, d, a, b]))
            .collect();
        tuples.sort_unstable();
        (tuples, self.free_loops)
    }

    /// Faces of the 4-valent projection as orbits of corners; corner `j` of
    /// a crossing lies counterclockwise between arc slots `j` and `j+1`.
    fn faces(&self) -> Faces {
        let occs = self.occurrences().expect("validated at construction");
        let n = self.crossings.len();
        let mut face_of: Vec<[usize; 4]> = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        for c0 in 0..n {
            for s0 in 0..4 {
                if face_of[c0][s0] != usize::MAX {
                    continue;
                }
                // walk the face boundary: rotate to the next arc end, then
                // jump to that arc's other endpoint
                let (mut c, mut s) = (c0, s0);
                loop {
                    face_of[c][s] = count;
                    let next_slot = (s + 1) % 4;
                    let label = self.crossings[c][next_slot];
                    let pair = occs[&label];
                    let (nc, ns) =
                        if pair[0] == (c, next_slot) { pair[1] } else { pair[0] };
                    (c, s) = (nc, ns);
                    if (c, s) == (c0, s0) {
                        break;
                    }
                }
                count += 1;
            }
        }
        Faces { corner_face: face_of, count }
    }

    /// Two-colors the faces so regions sharing an arc differ, unbounded
    /// region white. Requires a connected nonempty diagram.
    pub fn checkerboard(&self) -> Result<RegionColoring, DiagramError> {
        if self.crossings.is_empty() {
            return match self.free_loops {
                0 => Err(DiagramError::Empty),
                1 => Ok(RegionColoring {
                    region_count: 2,
                    colors: vec![RegionColor::White, RegionColor::Black],
                    corner_regions: Vec::new(),
                    unbounded: 0,
                }),
                _ => Err(DiagramError::Disconnected),
            };
        }
        if self.is_split() {
            return Err(DiagramError::Disconnected);
        }
        let faces = self.faces();
        debug_assert_eq!(faces.count, self.crossings.len() + 2, "Euler count");
        // adjacent corners around a crossing are separated by one arc end
        let mut colors: Vec<Option<RegionColor>> = vec![None; faces.count];
        let unbounded = faces.corner_face[0][3];
        colors[unbounded] = Some(RegionColor::White);
        let mut queue = vec![unbounded];
        while let Some(region) = queue.pop() {
            let next = colors[region].unwrap().other();
            for corners in &faces.corner_face {
                for j in 0..4 {
                    if corners[j] != region {
                        continue;
                    }
                    for neighbor in [corners[(j + 1) % 4], corners[(j + 3) % 4]] {
                        match colors[neighbor] {
                            None => {
                                colors[neighbor] = Some(next);
                                queue.push(neighbor);
                            }
                            Some(c) if c != next => {
                                return Err(DiagramError::NotCheckerboardable)
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        let colors: Vec<RegionColor> = colors
            .into_iter()
            .collect::<Option<_>>()
            .ok_or(DiagramError::Disconnected)?;
        Ok(RegionColoring {
            region_count: faces.count,
            colors,
            corner_regions: faces.corner_face,
            unbounded,
        })
    }
}

struct Faces {
    corner_face: Vec<[usize; 4]>,
    count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionColor {
    White,
    Black,
}

impl RegionColor {
    fn other(self) -> RegionColor {
        match self {
            RegionColor::White => RegionColor::Black,
            RegionColor::Black => RegionColor::White,
        }
    }
}

/// Checkerboard data: face ids per crossing corner and a color per face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionColoring {
    pub region_count: usize,
    pub colors: Vec<RegionColor>,
    /// Per crossing: the region at each corner, corner `j` sitting
    /// counterclockwise between arc slots `j` and `j+1`.
    pub corner_regions: Vec<[usize; 4]>,
    pub unbounded: usize,
}

impl RegionColoring {
    /// The same regions with both colors exchanged.
    pub fn swapped(&self) -> RegionColoring {
        RegionColoring {
            region_count: self.region_count,
            colors: self.colors.iter().map(|c| c.other()).collect(),
            corner_regions: self.corner_regions.clone(),
            unbounded: self.unbounded,
        }
    }

    pub fn black_regions(&self) -> Vec<usize> {
        (0..self.region_count)
            .filter(|&r| self.colors[r] == RegionColor::Black)
            .collect()
    }

    /// The black diagonal at a crossing: its two region ids and whether it
    /// is the odd diagonal (corners 1 and 3).
    pub fn black_pair(&self, crossing: usize) -> (usize, usize, bool) {
        let corners = self.corner_regions[crossing];
        if self.colors[corners[1]] == RegionColor::Black {
            (corners[1], corners[3], true)
        } else {
            (corners[0], corners[2], false)
        }
    }
}

/// Closure of a braid word on `strands` strands: letter `k` is the positive
/// Artin generator crossing strand `k` over strand `k+1`, and `-k` its
/// inverse. Strands no letter touches close into circles.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<Diagram, DiagramError> {
    if strands == 0 {
        return Err(DiagramError::Empty);
    }
    let mut current: Vec<usize> = (1..=strands).collect();
    let mut fresh = strands;
    let mut tuples: Vec<[usize; 4]> = Vec::with_capacity(word.len());
    for &letter in word {
        let k = letter.unsigned_abs() as usize;
        if k == 0 || k >= strands {
            return Err(DiagramError::BadBraidLetter(letter));
        }
        let (a, b) = (current[k - 1], current[k]);
        let under_out = fresh + 1;
        let over_out = fresh + 2;
        fresh += 2;
        if letter > 0 {
            // left strand passes over: under enters from the lower right
            tuples.push([b, over_out, under_out, a]);
            current[k - 1] = under_out;
            current[k] = over_out;
        } else {
            // right strand passes over: under enters from the lower left
            tuples.push([a, b, under_out, over_out]);
            current[k - 1] = over_out;
            current[k] = under_out;
        }
    }
    // close up: the label leaving the top of each position is the label that
    // entered at the bottom
    let mut free_loops = 0;
    for (pos, &top) in current.iter().enumerate() {
        let start = pos + 1;
        if top == start {
            free_loops += 1;
            continue;
        }
        for tuple in &mut tuples {
            for entry in tuple.iter_mut() {
                if *entry == top {
                    *entry = start;
                }
            }
        }
    }
    Diagram::from_tuples(tuples, free_loops)
}
