//! Arcs and triangulations of a disc with `n` marked boundary vertices and
//! one interior puncture.
//!
//! Boundary vertices are numbered `1..=n` clockwise; the puncture is vertex
//! `0`. Three kinds of arcs exist: plain chords between two boundary
//! vertices, loops based at a boundary vertex that enclose the puncture, and
//! central arcs joining a boundary vertex to the puncture.
//!
//! Crossing numbers are computed on the universal-cover model: an arc from
//! vertex `i` that travels clockwise past `L` boundary steps lifts to the
//! integer interval `[i, i + L]`, a loop lifts to `[i, i + n]`, and two arcs
//! cross once for every translate of one lift that strictly interleaves the
//! other.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An arc of the punctured disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arc {
    /// Chord from boundary vertex `from` clockwise to boundary vertex `to`,
    /// with `to` distinct from `from` and from its clockwise neighbour.
    Chord { from: usize, to: usize },
    /// Loop based at boundary vertex `at`, enclosing the puncture.
    Loop { at: usize },
    /// Arc joining boundary vertex `at` to the puncture.
    Central { at: usize },
}

impl Arc {
    /// Checks that all vertices lie in `1..=n` and that a chord does not
    /// degenerate to a boundary edge or a point.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |v: usize| !(1..=n).contains(&v);
        match *self {
            Arc::Chord { from, to } => {
                if bad(from) || bad(to) {
                    return Err(Error::InvalidArc(format!(
                        "chord {from} {to}: vertices must lie in 1..={n}"
                    )));
                }
                if to == from || to == next(n, from) {
                    return Err(Error::InvalidArc(format!(
                        "chord {from} {to}: endpoints must not be equal or adjacent clockwise"
                    )));
                }
            }
            Arc::Loop { at } | Arc::Central { at } => {
                if bad(at) {
                    return Err(Error::InvalidArc(format!(
                        "vertex {at} must lie in 1..={n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lift of a chord-like arc to an interval `[start, start + len]` of the
    /// universal cover; `None` for central arcs.
    fn lift(&self, n: usize) -> Option<(usize, usize)> {
        match *self {
            Arc::Chord { from, to } => Some((from, gap(n, from, to))),
            Arc::Loop { at } => Some((at, n)),
            Arc::Central { .. } => None,
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Arc::Chord { from, to } => write!(f, "chord {from} {to}"),
            Arc::Loop { at } => write!(f, "loop {at}"),
            Arc::Central { at } => write!(f, "central {at}"),
        }
    }
}

impl FromStr for Arc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::Parse("empty arc description".into()))?;
        let mut num = |what: &str| -> Result<usize> {
            let tok = parts.next().ok_or_else(|| {
                Error::Parse(format!("arc '{s}': missing {what}"))
            })?;
            tok.parse()
                .map_err(|_| Error::Parse(format!("arc '{s}': '{tok}' is not a vertex")))
        };
        let arc = match kind {
            "chord" => Arc::Chord {
                from: num("first vertex")?,
                to: num("second vertex")?,
            },
            "loop" => Arc::Loop { at: num("vertex")? },
            "central" => Arc::Central { at: num("vertex")? },
            other => {
                return Err(Error::Parse(format!(
                    "unknown arc kind '{other}' (expected chord, loop, or central)"
                )))
            }
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("arc '{s}': trailing tokens")));
        }
        Ok(arc)
    }
}

/// Clockwise successor of a boundary vertex.
pub fn next(n: usize, v: usize) -> usize {
    v % n + 1
}

/// Clockwise predecessor of a boundary vertex.
pub fn prev(n: usize, v: usize) -> usize {
    (v + n - 2) % n + 1
}

/// Number of clockwise boundary steps from `a` to `b`, in `0..n`.
pub fn gap(n: usize, a: usize, b: usize) -> usize {
    (b + n - a) % n
}

/// Boundary vertices from `i` to `j` inclusive, travelling clockwise;
/// `interval_vertices(n, i, i)` is `[i]`.
pub fn interval_vertices(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut v = i;
    let mut out = vec![v];
    while v != j {
        v = next(n, v);
        out.push(v);
    }
    out
}

/// Number of transversal crossings between two arcs in minimal position.
pub fn crossing_count(n: usize, a: &Arc, b: &Arc) -> usize {
    if a == b {
        return 0;
    }
    match (a, b) {
        // Central arcs all meet only at the puncture.
        (Arc::Central { .. }, Arc::Central { .. }) => 0,
        (Arc::Central { at: c }, Arc::Loop { at: l })
        | (Arc::Loop { at: l }, Arc::Central { at: c }) => usize::from(c != l),
        (Arc::Central { at }, other) | (other, Arc::Central { at }) => {
            // A central arc crosses a chord-like arc once for each corridor
            // it must escape: exactly when its foot lies strictly inside the
            // span of the other arc.
            let (start, len) = other.lift(n).expect("non-central arc has a lift");
            let g = gap(n, start, *at);
            usize::from(0 < g && g < len)
        }
        _ => {
            let (sa, la) = a.lift(n).expect("non-central arc has a lift");
            let (sb, lb) = b.lift(n).expect("non-central arc has a lift");
            let (a0, a1) = (sa as isize, (sa + la) as isize);
            let mut crossings = 0;
            for t in -2..=2 {
                let b0 = sb as isize + t * n as isize;
                let b1 = (sb + lb) as isize + t * n as isize;
                let interleaved = (a0 < b0 && b0 < a1 && a1 < b1)
                    || (b0 < a0 && a0 < b1 && b1 < a1);
                crossings += usize::from(interleaved);
            }
            crossings
        }
    }
}

/// Whether two arcs can be drawn without transversal intersections.
pub fn compatible(n: usize, a: &Arc, b: &Arc) -> bool {
    crossing_count(n, a, b) == 0
}

/// Every arc of the punctured disc: `n(n-2)` chords, `n` loops, `n` central
/// arcs — `n^2` in total, in a fixed deterministic order.
pub fn universe(n: usize) -> Vec<Arc> {
    let mut arcs = Vec::with_capacity(n * n);
    for from in 1..=n {
        for step in 2..n {
            arcs.push(Arc::Chord {
                from,
                to: (from + step - 1) % n + 1,
            });
        }
    }
    for at in 1..=n {
        arcs.push(Arc::Loop { at });
    }
    for at in 1..=n {
        arcs.push(Arc::Central { at });
    }
    arcs
}

/// A maximal set of pairwise compatible arcs; always exactly `n` arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    arcs: Vec<Arc>,
}

impl Triangulation {
    /// Validates and normalises a set of arcs into a triangulation.
    ///
    /// Checks vertex ranges, rejects duplicates and crossing pairs, requires
    /// exactly `n` arcs, and verifies maximality explicitly by testing that
    /// every absent arc crosses some member.
    pub fn new(n: usize, mut arcs: Vec<Arc>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidTriangulation(format!(
                "need at least 3 boundary vertices, got {n}"
            )));
        }
        for arc in &arcs {
            arc.validate(n)?;
        }
        arcs.sort();
        if let Some(w) = arcs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTriangulation(format!(
                "duplicate arc: {}",
                w[0]
            )));
        }
        for (k, a) in arcs.iter().enumerate() {
            for b in &arcs[k + 1..] {
                if !compatible(n, a, b) {
                    return Err(Error::InvalidTriangulation(format!(
                        "arcs cross: {a} and {b}"
                    )));
                }
            }
        }
        if arcs.len() != n {
            return Err(Error::InvalidTriangulation(format!(
                "expected {n} arcs, got {}",
                arcs.len()
            )));
        }
        for candidate in universe(n) {
            if arcs.contains(&candidate) {
                continue;
            }
            if arcs.iter().all(|a| compatible(n, a, &candidate)) {
                return Err(Error::InvalidTriangulation(format!(
                    "not maximal: {candidate} is compatible with every arc"
                )));
            }
        }
        let t = Self { n, arcs };
        // A loop forces the central arc at its base vertex: the region
        // between them is a self-folded triangle that no other arc can cut.
        for arc in &t.arcs {
            if let Arc::Loop { at } = *arc {
                debug_assert!(
                    t.arcs.contains(&Arc::Central { at }),
                    "loop without its central companion"
                );
            }
        }
        Ok(t)
    }

    /// Number of boundary vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The arcs, sorted in the crate-wide canonical order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Whether the given arc belongs to the triangulation.
    pub fn contains(&self, arc: &Arc) -> bool {
        self.arcs.binary_search(arc).is_ok()
    }

    /// Number of central arcs (the degree of the puncture).
    pub fn puncture_degree(&self) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a, Arc::Central { .. }))
            .count()
    }

    /// Base vertices of the central arcs, ascending.
    pub fn central_feet(&self) -> Vec<usize> {
        self.arcs
            .iter()
            .filter_map(|a| match a {
                Arc::Central { at } => Some(*at),
                _ => None,
            })
            .collect()
    }

    /// The fan triangulation at vertex `v`: a loop and central arc at `v`
    /// together with all chords from `v`.
    pub fn fan(n: usize, v: usize) -> Result<Self> {
        let mut arcs = vec![Arc::Loop { at: v }, Arc::Central { at: v }];
        for step in 2..n {
            arcs.push(Arc::Chord {
                from: v,
                to: (v + step - 1) % n + 1,
            });
        }
        Self::new(n, arcs)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for arc in &self.arcs {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{arc}")?;
            first = false;
        }
        Ok(())
    }
}

/// All triangulations of the disc with `n` boundary vertices, in a fixed
/// deterministic order.
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    let all = universe(n);
    let mut chosen: Vec<Arc> = Vec::with_capacity(n);
    let mut out = Vec::new();
    fn extend(
        n: usize,
        all: &[Arc],
        start: usize,
        chosen: &mut Vec<Arc>,
        out: &mut Vec<Triangulation>,
    ) {
        if chosen.len() == n {
            let t = Triangulation::new(n, chosen.clone())
                .expect("compatible set of n arcs is a triangulation");
            out.push(t);
            return;
        }
        // Not enough arcs left to reach size n.
        if all.len() - start < n - chosen.len() {
            return;
        }
        for k in start..all.len() {
            let cand = all[k];
            if chosen.iter().all(|a| compatible(n, a, &cand)) {
                chosen.push(cand);
                extend(n, all, k + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    extend(n, &all, 0, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chord(from: usize, to: usize) -> Arc {
        Arc::Chord { from, to }
    }

    #[test]
    fn crossing_numbers_match_known_cases() {
        let n = 8;
        assert_eq!(crossing_count(n, &chord(2, 7), &chord(6, 3)), 2);
        assert_eq!(crossing_count(n, &chord(2, 7), &Arc::Central { at: 3 }), 1);
        assert_eq!(crossing_count(n, &chord(2, 7), &Arc::Central { at: 2 }), 0);
        assert_eq!(crossing_count(n, &chord(2, 7), &Arc::Central { at: 7 }), 0);
        assert_eq!(crossing_count(n, &chord(2, 7), &Arc::Central { at: 8 }), 0);
        // Complementary chords share endpoints and do not cross.
        assert_eq!(crossing_count(n, &chord(2, 7), &chord(7, 2)), 0);
        assert_eq!(
            crossing_count(n, &Arc::Central { at: 4 }, &Arc::Central { at: 6 }),
            0
        );
        assert_eq!(
            crossing_count(n, &Arc::Loop { at: 3 }, &Arc::Central { at: 3 }),
            0
        );
        assert_eq!(
            crossing_count(n, &Arc::Loop { at: 3 }, &Arc::Central { at: 5 }),
            1
        );
        assert_eq!(
            crossing_count(n, &Arc::Loop { at: 3 }, &Arc::Loop { at: 5 }),
            2
        );
        // A loop crosses a chord twice when the chord cuts its base vertex
        // off from the rest of the boundary.
        assert_eq!(crossing_count(4, &Arc::Loop { at: 2 }, &chord(1, 3)), 2);
        assert_eq!(crossing_count(8, &Arc::Loop { at: 1 }, &chord(3, 6)), 0);
        assert_eq!(crossing_count(8, &Arc::Loop { at: 1 }, &chord(1, 4)), 0);
    }

    #[test]
    fn intervals_follow_clockwise_order() {
        assert_eq!(interval_vertices(8, 3, 6), vec![3, 4, 5, 6]);
        assert_eq!(interval_vertices(8, 6, 1), vec![6, 7, 8, 1]);
        assert_eq!(interval_vertices(8, 3, 3), vec![3]);
        assert_eq!(gap(8, 2, 7), 5);
        assert_eq!(gap(8, 7, 2), 3);
        assert_eq!(next(8, 8), 1);
        assert_eq!(prev(8, 1), 8);
    }

    #[test]
    fn universe_has_n_squared_arcs() {
        for n in 3..=8 {
            let all = universe(n);
            assert_eq!(all.len(), n * n);
            for arc in &all {
                arc.validate(n).unwrap();
            }
        }
    }

    #[test]
    fn arcs_round_trip_through_strings() {
        for arc in universe(6) {
            let s = arc.to_string();
            assert_eq!(s.parse::<Arc>().unwrap(), arc);
        }
        assert!("chord 1 2".parse::<Arc>().unwrap().validate(8).is_err());
        assert!("chord 1".parse::<Arc>().is_err());
        assert!("spiral 3".parse::<Arc>().is_err());
        assert!("loop 0".parse::<Arc>().unwrap().validate(8).is_err());
        assert!("central 9".parse::<Arc>().unwrap().validate(8).is_err());
    }

    #[test]
    fn fan_is_a_triangulation() {
        for n in 3..=8 {
            for v in 1..=n {
                let t = Triangulation::fan(n, v).unwrap();
                assert_eq!(t.arcs().len(), n);
                assert_eq!(t.puncture_degree(), 1);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_sets() {
        // Crossing pair.
        assert!(Triangulation::new(
            8,
            vec![chord(2, 7), chord(6, 3), chord(1, 4), chord(1, 5), chord(1, 6), chord(1, 7), Arc::Central { at: 1 }, Arc::Loop { at: 1 }]
        )
        .is_err());
        // Too few arcs (and not maximal).
        assert!(Triangulation::new(8, vec![chord(2, 7)]).is_err());
        // A compatible set of fewer than n arcs extended by nothing.
        let fan = Triangulation::fan(4, 1).unwrap();
        let mut missing = fan.arcs().to_vec();
        missing.pop();
        assert!(Triangulation::new(4, missing).is_err());
    }

    #[test]
    fn enumeration_counts_are_correct() {
        // Total count is the central binomial coefficient C(2n-1, n-1);
        // triangulations with puncture degree 1 number n * Catalan(n-1).
        let expect_total = [35usize, 126, 462];
        let expect_deg1 = [20usize, 70, 252];
        for (k, n) in (4..=6).enumerate() {
            let all = enumerate_triangulations(n);
            assert_eq!(all.len(), expect_total[k]);
            let deg1 = all.iter().filter(|t| t.puncture_degree() == 1).count();
            assert_eq!(deg1, expect_deg1[k]);
            for t in &all {
                assert_eq!(t.arcs().len(), n);
                // A loop always comes with the central arc at its base.
                for arc in t.arcs() {
                    if let Arc::Loop { at } = *arc {
                        assert!(t.contains(&Arc::Central { at: *&at }));
                    }
                }
                // No loops once the puncture degree exceeds 1.
                if t.puncture_degree() >= 2 {
                    assert!(t.arcs().iter().all(|a| !matches!(a, Arc::Loop { .. })));
                }
            }
        }
    }

    #[test]
    fn worked_example_is_a_triangulation() {
        let arcs = vec![
            Arc::Central { at: 3 },
            Arc::Central { at: 4 },
            Arc::Central { at: 5 },
            Arc::Central { at: 6 },
            chord(6, 3),
            chord(7, 3),
            chord(7, 2),
            chord(8, 2),
        ];
        let t = Triangulation::new(8, arcs).unwrap();
        assert_eq!(t.puncture_degree(), 4);
        assert_eq!(t.central_feet(), vec![3, 4, 5, 6]);
    }
}
