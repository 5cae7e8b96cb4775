//! Seeds, quiver mutation, and unit specialisation.
//!
//! A seed couples a skew-symmetric arrow matrix with one positive rational
//! value and one tagged-arc label per position. Mutating at a position
//! applies the standard matrix mutation, exchanges the value exactly, and
//! flips the label. Starting from the fan seed with all values 1, the
//! value attached to an arc at its first appearance is its specialised
//! cluster variable u(a); collecting all of them rebuilds the frieze
//! pattern independently of any matching count.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frieze::FriezePatternD;
use crate::surface::next;
use crate::tagged::{flip, frieze_of_tagged, TaggedArc, TaggedTriangulation};

/// A skew-symmetric integer arrow matrix; b[i][j] > 0 means b[i][j] arrows
/// from position i to position j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    b: Vec<Vec<i64>>,
}

impl Quiver {
    /// Wraps a matrix, checking skew-symmetry.
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self> {
        let rank = b.len();
        if b.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidLabel("arrow matrix is not square".into()));
        }
        for i in 0..rank {
            for j in 0..rank {
                if b[i][j] != -b[j][i] {
                    return Err(Error::InvalidLabel(format!(
                        "arrow matrix is not skew-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { b })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn arrows(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    /// Standard matrix mutation at position k.
    fn mutate(&self, k: usize) -> Self {
        let rank = self.rank();
        let mut b = self.b.clone();
        for i in 0..rank {
            for j in 0..rank {
                b[i][j] = if i == k || j == k {
                    -self.b[i][j]
                } else {
                    self.b[i][j]
                        + (self.b[i][k].abs() * self.b[k][j]
                            + self.b[i][k] * self.b[k][j].abs())
                            / 2
                };
            }
        }
        Self { b }
    }

    /// Whether the underlying unoriented graph is the type-D Dynkin
    /// diagram on `rank` nodes: a tree in which two leaves hang off one
    /// end of a path.
    pub fn is_dynkin_d(&self) -> bool {
        let rank = self.rank();
        let mut edges = Vec::new();
        for i in 0..rank {
            for j in (i + 1)..rank {
                match self.b[i][j].abs() {
                    0 => {}
                    1 => edges.push((i, j)),
                    _ => return false,
                }
            }
        }
        if edges.len() != rank - 1 {
            return false;
        }
        let mut degree = vec![0usize; rank];
        let mut adjacency = vec![Vec::new(); rank];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut seen = vec![false; rank];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != rank {
            return false;
        }
        if rank == 3 {
            return degree.iter().all(|&d| d <= 2);
        }
        if degree.iter().any(|&d| d > 3) {
            return false;
        }
        let branches: Vec<usize> = (0..rank).filter(|&v| degree[v] == 3).collect();
        let [branch] = branches[..] else {
            return false;
        };
        let leaf_neighbours = adjacency[branch]
            .iter()
            .filter(|&&w| degree[w] == 1)
            .count();
        leaf_neighbours >= 2
    }
}

/// A quiver with a positive rational value and a tagged-arc label per
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub quiver: Quiver,
    pub values: Vec<BigRational>,
    pub labels: Vec<TaggedArc>,
}

impl Seed {
    fn rank(&self) -> usize {
        self.labels.len()
    }

    /// The boundary vertex count of the underlying disc.
    fn n(&self) -> usize {
        self.rank()
    }

    /// The labels as a tagged triangulation.
    pub fn triangulation(&self) -> Result<TaggedTriangulation> {
        TaggedTriangulation::new(self.n(), self.labels.clone())
    }
}

/// The sorted label set, used to recognise seeds over the same
/// triangulation.
fn label_key(labels: &[TaggedArc]) -> Vec<TaggedArc> {
    let mut key = labels.to_vec();
    key.sort();
    key
}

/// The fan seed: the tagged fan at vertex 1 with a hard-coded orientation
/// of the type-D Dynkin diagram — arrows along the chord path toward the
/// longest chord, which also feeds both central arcs — and all values 1.
pub fn initial_seed(n: usize) -> Result<Seed> {
    if n < 3 {
        return Err(Error::InvalidTriangulation(format!(
            "n = {n} must be at least 3"
        )));
    }
    let mut labels: Vec<TaggedArc> = (2..n)
        .map(|step| TaggedArc::PlainChord {
            from: 1,
            to: step + 1,
        })
        .collect();
    labels.push(TaggedArc::CentralPlain { at: 1 });
    labels.push(TaggedArc::CentralNotched { at: 1 });
    let mut b = vec![vec![0i64; n]; n];
    let branch = n - 3;
    for k in 0..branch {
        b[k][k + 1] = 1;
        b[k + 1][k] = -1;
    }
    for leaf in [n - 2, n - 1] {
        b[branch][leaf] = 1;
        b[leaf][branch] = -1;
    }
    Ok(Seed {
        quiver: Quiver::new(b)?,
        values: vec![BigRational::one(); n],
        labels,
    })
}

/// Mutates a seed at position k: matrix mutation, exact value exchange,
/// and the tagged flip of the label.
pub fn mutate(seed: &Seed, k: usize) -> Result<Seed> {
    let rank = seed.rank();
    if k >= rank {
        return Err(Error::InvalidLabel(format!(
            "position {k} outside 0..{rank}"
        )));
    }
    let mut plus = BigRational::one();
    let mut minus = BigRational::one();
    for j in 0..rank {
        let arrows = seed.quiver.arrows(j, k);
        for _ in 0..arrows.unsigned_abs() {
            if arrows > 0 {
                plus *= &seed.values[j];
            } else {
                minus *= &seed.values[j];
            }
        }
    }
    if seed.values[k].is_zero() {
        return Err(Error::Inconsistent(format!(
            "seed value at position {k} is zero"
        )));
    }
    let value = (plus + minus) / &seed.values[k];
    if !value.is_positive() {
        return Err(Error::Inconsistent(format!(
            "mutation at {k} produced the non-positive value {value}"
        )));
    }
    let (flipped, new_arc) = flip(&seed.triangulation()?, &seed.labels[k])?;
    debug_assert!(flipped.contains(&new_arc));
    let mut values = seed.values.clone();
    values[k] = value;
    let mut labels = seed.labels.clone();
    labels[k] = new_arc;
    Ok(Seed {
        quiver: seed.quiver.mutate(k),
        values,
        labels,
    })
}

/// The u values collected over a mutation closure, with the number of
/// distinct seeds visited.
#[derive(Debug, Clone)]
pub struct SpecialisedValues {
    u: BTreeMap<TaggedArc, BigUint>,
    seed_count: usize,
}

impl SpecialisedValues {
    /// The specialised value of an arc.
    pub fn u(&self, arc: &TaggedArc) -> Option<&BigUint> {
        self.u.get(arc)
    }

    /// Number of distinct arcs reached.
    pub fn arc_count(&self) -> usize {
        self.u.len()
    }

    /// Number of distinct seeds in the closure.
    pub fn seed_count(&self) -> usize {
        self.seed_count
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TaggedArc, &BigUint)> {
        self.u.iter()
    }
}

/// Runs the mutation closure from a seed, recording each arc's value at
/// first appearance and checking every later appearance against it.
fn specialise_from(start: &Seed) -> Result<SpecialisedValues> {
    let n = start.n();
    let mut u: BTreeMap<TaggedArc, BigRational> = BTreeMap::new();
    let mut record = |seed: &Seed| -> Result<()> {
        for (label, value) in seed.labels.iter().zip(&seed.values) {
            match u.get(label) {
                None => {
                    u.insert(*label, value.clone());
                }
                Some(previous) if previous == value => {}
                Some(previous) => {
                    return Err(Error::Inconsistent(format!(
                        "arc {label} reappeared with value {value}, first seen as {previous}"
                    )));
                }
            }
        }
        Ok(())
    };
    record(start)?;
    let mut seen = BTreeSet::from([label_key(&start.labels)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(seed) = queue.pop_front() {
        for k in 0..n {
            let neighbour = mutate(&seed, k)?;
            record(&neighbour)?;
            if seen.insert(label_key(&neighbour.labels)) {
                queue.push_back(neighbour);
            }
        }
    }
    if u.len() != n * n {
        return Err(Error::Inconsistent(format!(
            "closure reached {} arcs, expected {}",
            u.len(),
            n * n
        )));
    }
    let mut integral = BTreeMap::new();
    for (arc, value) in u {
        if !value.is_integer() || !value.is_positive() {
            return Err(Error::Inconsistent(format!(
                "u({arc}) = {value} is not a positive integer"
            )));
        }
        integral.insert(
            arc,
            value
                .to_integer()
                .to_biguint()
                .expect("positive integer value"),
        );
    }
    Ok(SpecialisedValues {
        u: integral,
        seed_count: seen.len(),
    })
}

/// Specialises every cluster variable to its value at the all-ones fan
/// seed.
pub fn specialise_all(n: usize) -> Result<SpecialisedValues> {
    specialise_from(&initial_seed(n)?)
}

/// Transports the fan seed to the given triangulation along flips,
/// keeping the arc-position correspondence.
fn transport(t: &TaggedTriangulation) -> Result<Seed> {
    let start = initial_seed(t.n())?;
    let target = label_key(t.arcs());
    if label_key(&start.labels) == target {
        return Ok(start);
    }
    let mut seen = BTreeSet::from([label_key(&start.labels)]);
    let mut queue = VecDeque::from([start]);
    while let Some(seed) = queue.pop_front() {
        for k in 0..t.n() {
            let neighbour = mutate(&seed, k)?;
            let key = label_key(&neighbour.labels);
            if key == target {
                return Ok(neighbour);
            }
            if seen.insert(key) {
                queue.push_back(neighbour);
            }
        }
    }
    Err(Error::InvalidTriangulation(format!(
        "{t} is not reachable from the fan seed"
    )))
}

/// Arranges specialised values as a frieze pattern: chords keep their
/// labels, a plain central arc carries the puncture entry, a notched one
/// the diagonal entry.
fn pattern_of_values(n: usize, values: &SpecialisedValues) -> Result<FriezePatternD> {
    let mut entries = BTreeMap::new();
    let lookup = |arc: TaggedArc| -> Result<BigUint> {
        values
            .u(&arc)
            .cloned()
            .ok_or_else(|| Error::Inconsistent(format!("no specialised value for {arc}")))
    };
    for i in 1..=n {
        for j in 0..=n {
            let value = if j == next(n, i) {
                BigUint::one()
            } else if j == 0 {
                lookup(TaggedArc::CentralPlain { at: i })?
            } else if j == i {
                lookup(TaggedArc::CentralNotched { at: i })?
            } else {
                lookup(TaggedArc::PlainChord { from: i, to: j })?
            };
            entries.insert((i, j), value);
        }
    }
    FriezePatternD::from_entries(n, entries)
}

/// The pattern of specialised cluster variables rooted at a triangulation:
/// transport the quiver there, reset the cluster to all ones, and collect
/// the closure.
pub fn fc_pattern(t: &TaggedTriangulation) -> Result<FriezePatternD> {
    let mut seed = transport(t)?;
    seed.values = vec![BigRational::one(); t.n()];
    let values = specialise_from(&seed)?;
    pattern_of_values(t.n(), &values)
}

/// Whether the seed transported to this triangulation has a Dynkin
/// diagram of type D as its underlying graph.
pub fn is_slice_seed(t: &TaggedTriangulation) -> Result<bool> {
    Ok(transport(t)?.quiver.is_dynkin_d())
}

/// One comparison row of the conjecture report.
#[derive(Debug, Clone)]
pub struct ConjectureRow {
    pub triangulation: String,
    pub d0: usize,
    pub notches: usize,
    pub slice_seed: bool,
    pub equal: bool,
}

/// The entry-by-entry comparison of the matching pattern with the
/// cluster pattern over every tagged triangulation.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub n: usize,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    pub fn mismatch_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.equal).count()
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "comparing matching and cluster patterns over {} tagged triangulations (n = {})",
            self.rows.len(),
            self.n
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{} | d0 {} | notches {} | {} | {}",
                row.triangulation,
                row.d0,
                row.notches,
                if row.slice_seed { "slice seed" } else { "non-slice" },
                if row.equal { "equal" } else { "MISMATCH" },
            )?;
        }
        let mismatches = self.mismatch_count();
        if mismatches == 0 {
            writeln!(f, "all {} comparisons agree", self.rows.len())
        } else {
            writeln!(f, "{mismatches} MISMATCHES flagged")
        }
    }
}

/// Compares frieze_of_tagged with fc_pattern for every tagged
/// triangulation and reports, without asserting, whether they agree.
pub fn conjecture_report(n: usize) -> Result<ConjectureReport> {
    let mut rows = Vec::new();
    for t in crate::tagged::enumerate_tagged(n) {
        let notches = t.notch_count();
        let centrals = t.arcs().iter().filter(|a| a.is_central()).count();
        let d0 = if notches == 1 { 1 } else { centrals };
        let matching_pattern = frieze_of_tagged(&t)?;
        let cluster_pattern = fc_pattern(&t)?;
        rows.push(ConjectureRow {
            triangulation: t.to_string(),
            d0,
            notches,
            slice_seed: is_slice_seed(&t)?,
            equal: matching_pattern == cluster_pattern,
        });
    }
    Ok(ConjectureReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FaceComplex;
    use crate::frieze::{build_frieze, verify_relations, Slice};
    use crate::surface::{prev, Triangulation};
    use crate::tagged::enumerate_tagged;
    use num_traits::ToPrimitive;

    #[test]
    fn fan_seed_is_a_dynkin_orientation() {
        for n in [3usize, 4, 5, 6] {
            let seed = initial_seed(n).unwrap();
            assert!(seed.quiver.is_dynkin_d(), "n = {n}");
            assert!(seed.triangulation().is_ok());
            assert!(seed.values.iter().all(|v| v.is_one()));
            let edges: i64 = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| seed.quiver.arrows(i, j).abs())
                .sum();
            assert_eq!(edges, n as i64 - 1);
        }
    }

    #[test]
    fn mutation_is_an_exact_involution() {
        let seed = initial_seed(4).unwrap();
        for k in 0..4 {
            let once = mutate(&seed, k).unwrap();
            assert_eq!(mutate(&once, k).unwrap(), seed);
        }
        let deeper = mutate(&mutate(&seed, 0).unwrap(), 2).unwrap();
        for k in 0..4 {
            let once = mutate(&deeper, k).unwrap();
            assert_eq!(mutate(&once, k).unwrap(), deeper);
        }
    }

    #[test]
    fn first_mutation_realises_an_exchange() {
        let seed = initial_seed(4).unwrap();
        let mutated = mutate(&seed, 0).unwrap();
        assert_eq!(
            mutated.labels[0],
            TaggedArc::PlainChord { from: 2, to: 4 },
            "flipping the short fan chord gives the opposite chord"
        );
        assert_eq!(mutated.values[0], BigRational::from_integer(2.into()));
    }

    #[test]
    fn closure_reaches_all_arcs_and_seeds() {
        let values = specialise_all(4).unwrap();
        assert_eq!(values.arc_count(), 16);
        assert_eq!(values.seed_count(), 50);
        assert_eq!(values.seed_count(), enumerate_tagged(4).len());
        for label in initial_seed(4).unwrap().labels {
            assert_eq!(values.u(&label).map(|u| u.to_u64().unwrap()), Some(1));
        }
        let pattern = pattern_of_values(4, &values).unwrap();
        assert!(verify_relations(&pattern).is_empty());
        let fan = Triangulation::fan(4, 1).unwrap();
        assert_eq!(pattern, build_frieze(&FaceComplex::new(fan)).unwrap());
    }

    #[test]
    fn fc_pattern_agrees_with_matchings_on_slice_seeds() {
        for t in enumerate_tagged(4) {
            if is_slice_seed(&t).unwrap() {
                assert_eq!(
                    fc_pattern(&t).unwrap(),
                    frieze_of_tagged(&t).unwrap(),
                    "{t}"
                );
            }
        }
    }

    #[test]
    fn slice_seeds_are_counted_by_slices() {
        let n = 4;
        // Every staircase with every admissible pair tail, collected as
        // tagged arc sets.
        let mut slice_sets: BTreeSet<Vec<TaggedArc>> = BTreeSet::new();
        for start in 1..=n {
            let first = (start, (start + 1) % n + 1);
            let mut stack = vec![vec![first]];
            while let Some(path) = stack.pop() {
                if path.len() < n - 2 {
                    let (i, j) = *path.last().unwrap();
                    for step in [(i, next(n, j)), (prev(n, i), j)] {
                        let mut longer = path.clone();
                        longer.push(step);
                        stack.push(longer);
                    }
                    continue;
                }
                let (a, _) = *path.last().unwrap();
                let b = prev(n, a);
                for tail in [
                    [(a, a), (a, 0)],
                    [(b, b), (b, 0)],
                    [(a, a), (b, b)],
                    [(a, 0), (b, 0)],
                ] {
                    let mut labels = path.clone();
                    labels.extend(tail);
                    let slice = Slice::new(n, labels.clone()).unwrap();
                    let arcs: Vec<TaggedArc> = slice
                        .labels()
                        .iter()
                        .map(|&(i, j)| {
                            if j == 0 {
                                TaggedArc::CentralPlain { at: i }
                            } else if j == i {
                                TaggedArc::CentralNotched { at: i }
                            } else {
                                TaggedArc::PlainChord { from: i, to: j }
                            }
                        })
                        .collect();
                    let t = TaggedTriangulation::new(n, arcs).unwrap();
                    assert!(is_slice_seed(&t).unwrap(), "{t} should be a slice seed");
                    slice_sets.insert(t.arcs().to_vec());
                }
            }
        }
        let seed_count = enumerate_tagged(n)
            .iter()
            .filter(|t| is_slice_seed(t).unwrap())
            .count();
        assert_eq!(slice_sets.len(), seed_count);
    }

    #[test]
    fn conjecture_report_covers_every_seed() {
        let report = conjecture_report(4).unwrap();
        assert_eq!(report.rows.len(), 50);
        for row in &report.rows {
            if row.slice_seed {
                assert!(row.equal, "{}: the slice case is a theorem", row.triangulation);
            }
        }
        let text = report.to_string();
        assert!(text.contains("50 tagged triangulations"));
    }
}
