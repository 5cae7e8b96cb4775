//! Frieze patterns of type D: assembly from matching numbers, the defining
//! multiplicative relations, reconstruction from slices and degree
//! sequences, grid verification, and the type-A companion patterns.
//!
//! A pattern of type D on n boundary vertices stores one positive integer
//! m_ij for every i in 1..=n and j in 0..=n: chords (including the unit
//! entries m_{i,i+1}), the diagonal entries m_ii, and the puncture entries
//! m_i0. Four relation families tie neighbouring entries together; a valid
//! pattern satisfies all of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::complex::FaceComplex;
use crate::error::{Error, Result};
use crate::matching::{count_matchings, matching_number, Regions};
use crate::surface::{interval_vertices, next, prev};

/// Adds `g` clockwise steps to vertex `i` on n vertices.
fn add(n: usize, i: usize, g: usize) -> usize {
    (i - 1 + g) % n + 1
}

/// A complete frieze pattern of type D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FriezePatternD {
    n: usize,
    entries: BTreeMap<(usize, usize), BigUint>,
}

impl FriezePatternD {
    /// All entry labels of a pattern on n vertices, in row-major order.
    pub fn labels(n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(n * (n + 1));
        for i in 1..=n {
            for j in 0..=n {
                out.push((i, j));
            }
        }
        out
    }

    /// Wraps a complete entry map, checking that every label is present and
    /// positive and that the unit entries are 1.
    pub fn from_entries(n: usize, entries: BTreeMap<(usize, usize), BigUint>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidLabel(format!("n = {n} must be at least 3")));
        }
        for &(i, j) in &Self::labels(n) {
            match entries.get(&(i, j)) {
                None => {
                    return Err(Error::Inconsistent(format!("entry m[{i},{j}] is missing")))
                }
                Some(v) if v.is_zero() => {
                    return Err(Error::Inconsistent(format!("entry m[{i},{j}] is zero")))
                }
                Some(v) if j == next(n, i) && !v.is_one() => {
                    return Err(Error::Inconsistent(format!(
                        "unit entry m[{i},{j}] must be 1, found {v}"
                    )))
                }
                Some(_) => {}
            }
        }
        if entries.len() != n * (n + 1) {
            return Err(Error::Inconsistent(format!(
                "expected {} entries, found {}",
                n * (n + 1),
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    /// Number of boundary vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The entry m_ij; panics on an out-of-range label.
    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[&(i, j)]
    }

    /// The entry m_ij, if the label is in range.
    pub fn get(&self, i: usize, j: usize) -> Option<&BigUint> {
        self.entries.get(&(i, j))
    }

    /// Iterates over all entries in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &BigUint)> {
        self.entries.iter()
    }
}

/// Builds the frieze pattern of a triangulation from matching numbers.
pub fn build_frieze(fc: &FaceComplex) -> Result<FriezePatternD> {
    let n = fc.n();
    let mut entries = BTreeMap::new();
    for i in 1..=n {
        for j in 0..=n {
            entries.insert((i, j), matching_number(fc, i, j)?);
        }
    }
    FriezePatternD::from_entries(n, entries)
}

/// One failed relation instance.
#[derive(Debug, Clone)]
pub struct Violation {
    /// Relation family 1..=4.
    pub relation: u8,
    /// Base vertex of the instance.
    pub i: usize,
    /// Second index for the diamond family, 0 otherwise.
    pub j: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "relation {} at (i={}, j={}): {} != {}",
            self.relation, self.i, self.j, self.lhs, self.rhs
        )
    }
}

/// One relation instance: the product over `lhs` equals the product over
/// `rhs` plus one.
struct RelationInstance {
    relation: u8,
    i: usize,
    j: usize,
    lhs: Vec<(usize, usize)>,
    rhs: Vec<(usize, usize)>,
}

/// All relation instances of a pattern on n vertices.
fn relation_instances(n: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for i in 1..=n {
        // Family 1: diamonds m_ij m_{i+1,j+1} = m_{i+1,j} m_{i,j+1} + 1 for
        // j different from i-1, i, i+1.
        for g in 2..=(n - 2) {
            let j = add(n, i, g);
            out.push(RelationInstance {
                relation: 1,
                i,
                j,
                lhs: vec![(i, j), (next(n, i), next(n, j))],
                rhs: vec![(next(n, i), j), (i, next(n, j))],
            });
        }
        // Family 2: m_{i,i-1} m_{i+1,i} = m_{i+1,i-1} m_ii m_i0 + 1.
        out.push(RelationInstance {
            relation: 2,
            i,
            j: 0,
            lhs: vec![(i, prev(n, i)), (next(n, i), i)],
            rhs: vec![(next(n, i), prev(n, i)), (i, i), (i, 0)],
        });
        // Family 3: m_ii m_{i+1,0} = m_{i+1,i} + 1.
        out.push(RelationInstance {
            relation: 3,
            i,
            j: 0,
            lhs: vec![(i, i), (next(n, i), 0)],
            rhs: vec![(next(n, i), i)],
        });
        // Family 4: m_i0 m_{i+1,i+1} = m_{i+1,i} + 1.
        out.push(RelationInstance {
            relation: 4,
            i,
            j: 0,
            lhs: vec![(i, 0), (next(n, i), next(n, i))],
            rhs: vec![(next(n, i), i)],
        });
    }
    out
}

/// Checks every relation instance and reports the failures.
pub fn verify_relations(pattern: &FriezePatternD) -> Vec<Violation> {
    let n = pattern.n();
    let mut violations = Vec::new();
    for inst in relation_instances(n) {
        let lhs: BigUint = inst.lhs.iter().map(|&(a, b)| pattern.entry(a, b)).product();
        let rhs: BigUint = inst
            .rhs
            .iter()
            .map(|&(a, b)| pattern.entry(a, b))
            .product::<BigUint>()
            + 1u32;
        if lhs != rhs {
            violations.push(Violation {
                relation: inst.relation,
                i: inst.i,
                j: inst.j,
                lhs,
                rhs,
            });
        }
    }
    violations
}

/// The involution swapping each diagonal entry m_ii with the puncture entry
/// m_i0.
pub fn iota(pattern: &FriezePatternD) -> FriezePatternD {
    let n = pattern.n();
    let mut entries = pattern.entries.clone();
    for i in 1..=n {
        let d = entries[&(i, i)].clone();
        let c = entries[&(i, 0)].clone();
        entries.insert((i, i), c);
        entries.insert((i, 0), d);
    }
    FriezePatternD { n, entries }
}

/// Divides exactly or reports the failing entry as inconsistent.
fn exact_div(numerator: BigUint, divisor: &BigUint, what: &str) -> Result<BigUint> {
    if divisor.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: division by zero")));
    }
    let (q, r) = num_integer::div_rem(numerator, divisor.clone());
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: inexact division")));
    }
    if q.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: entry vanished")));
    }
    Ok(q)
}

/// Reconstructs a pattern from its second row (the corner degrees
/// d_1..d_n, where m_{i,i+2} = d_{i+1}) and the puncture degree d0.
pub fn frieze_from_degrees(degrees: &[u64], d0: u64) -> Result<FriezePatternD> {
    let n = degrees.len();
    if n < 3 {
        return Err(Error::InvalidLabel(format!("n = {n} must be at least 3")));
    }
    if d0 == 0 {
        return Err(Error::InvalidLabel("d0 must be positive".into()));
    }
    let mut entries: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    for i in 1..=n {
        entries.insert((i, next(n, i)), BigUint::one());
        if degrees[i % n] == 0 {
            return Err(Error::Inconsistent("degrees must be positive".into()));
        }
        entries.insert((i, add(n, i, 2)), BigUint::from(degrees[i % n]));
    }
    // Fill chord rows by the diamond relation, row by row.
    for g in 3..=(n - 1) {
        for i in 1..=n {
            let j = add(n, i, g);
            let a = entries[&(i, add(n, i, g - 1))].clone();
            let b = entries[&(next(n, i), j)].clone();
            let c = entries[&(next(n, i), add(n, i, g - 1))].clone();
            let value = exact_div(a * b - 1u32, &c, &format!("m[{i},{j}]"))?;
            entries.insert((i, j), value);
        }
    }
    // The bottom rows: the puncture-triple relation determines the product
    // d0 m_i0^2, from which both m_i0 and m_ii follow.
    let big_d0 = BigUint::from(d0);
    for i in 1..=n {
        let a = entries[&(i, prev(n, i))].clone();
        let b = entries[&(next(n, i), i)].clone();
        let c = entries[&(next(n, i), prev(n, i))].clone();
        let p = exact_div(a * b - 1u32, &c, &format!("P[{i}]"))?;
        let square = exact_div(p, &big_d0, &format!("P[{i}]/d0"))?;
        let root = square.sqrt();
        if &root * &root != square {
            return Err(Error::Inconsistent(format!(
                "P[{i}]/d0 = {square} is not a perfect square"
            )));
        }
        entries.insert((i, i), &big_d0 * &root);
        entries.insert((i, 0), root);
    }
    let pattern = FriezePatternD::from_entries(n, entries)?;
    let violations = verify_relations(&pattern);
    if let Some(v) = violations.first() {
        return Err(Error::Inconsistent(format!(
            "reconstructed pattern violates {v}"
        )));
    }
    Ok(pattern)
}

/// A slice: a staircase of n entry labels that determines the whole
/// pattern. It descends from a second-row chord to a last-row chord by
/// unit steps and finishes with two labels drawn from the flanking pair
/// slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    n: usize,
    labels: Vec<(usize, usize)>,
}

impl Slice {
    /// Validates the staircase shape.
    pub fn new(n: usize, labels: Vec<(usize, usize)>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSlice(format!("n = {n} must be at least 3")));
        }
        if labels.len() != n {
            return Err(Error::InvalidSlice(format!(
                "a slice on {n} vertices has {n} labels, found {}",
                labels.len()
            )));
        }
        let in_range =
            |&(i, j): &(usize, usize)| (1..=n).contains(&i) && j <= n;
        if !labels.iter().all(in_range) {
            return Err(Error::InvalidSlice("label outside the pattern".into()));
        }
        let (i0, j0) = labels[0];
        if j0 != add(n, i0, 2) {
            return Err(Error::InvalidSlice(format!(
                "a slice starts on the second row, not at ({i0},{j0})"
            )));
        }
        for t in 0..n.saturating_sub(3) {
            let (i, j) = labels[t];
            let down_right = (i, next(n, j));
            let down_left = (prev(n, i), j);
            if labels[t + 1] != down_right && labels[t + 1] != down_left {
                return Err(Error::InvalidSlice(format!(
                    "step {} must move down-right or down-left from ({i},{j})",
                    t + 1
                )));
            }
        }
        let (i, j) = labels[n - 3];
        debug_assert_eq!(j, prev(n, i), "staircase ends on the last chord row");
        let a = i;
        let b = prev(n, i);
        let tail: BTreeSet<(usize, usize)> =
            labels[n - 2..].iter().copied().collect();
        let combos: [[(usize, usize); 2]; 4] = [
            [(a, a), (a, 0)],
            [(b, b), (b, 0)],
            [(a, a), (b, b)],
            [(a, 0), (b, 0)],
        ];
        let ok = combos
            .iter()
            .any(|c| c.iter().copied().collect::<BTreeSet<_>>() == tail);
        if !ok {
            return Err(Error::InvalidSlice(format!(
                "final two labels must fill the pair slots at {b} and {a}"
            )));
        }
        Ok(Self { n, labels })
    }

    /// The canonical slice: descend straight down-right from (1,3), then
    /// take both pair entries at vertex 1.
    pub fn canonical(n: usize) -> Self {
        let mut labels: Vec<(usize, usize)> = (2..n).map(|g| (1, add(n, 1, g))).collect();
        labels.push((1, 1));
        labels.push((1, 0));
        Self::new(n, labels).expect("canonical slice is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }
}

/// Reads the canonical slice out of a pattern.
pub fn extract_slice(pattern: &FriezePatternD) -> (Slice, Vec<BigUint>) {
    let slice = Slice::canonical(pattern.n());
    let values = slice
        .labels()
        .iter()
        .map(|&(i, j)| pattern.entry(i, j).clone())
        .collect();
    (slice, values)
}

/// Rebuilds the full pattern from slice values by solving relation
/// instances with a single unknown until the pattern closes up.
pub fn frieze_from_slice(slice: &Slice, values: &[BigUint]) -> Result<FriezePatternD> {
    let n = slice.n();
    if values.len() != slice.labels().len() {
        return Err(Error::InvalidSlice(format!(
            "{} values for {} labels",
            values.len(),
            slice.labels().len()
        )));
    }
    let mut known: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    for i in 1..=n {
        known.insert((i, next(n, i)), BigUint::one());
    }
    for (&label, value) in slice.labels().iter().zip(values) {
        if value.is_zero() {
            return Err(Error::Inconsistent(format!(
                "slice value at {label:?} must be positive"
            )));
        }
        known.insert(label, value.clone());
    }
    let instances = relation_instances(n);
    let total = n * (n + 1);
    loop {
        let mut progressed = false;
        for inst in &instances {
            let missing_lhs: Vec<usize> = (0..inst.lhs.len())
                .filter(|&k| !known.contains_key(&inst.lhs[k]))
                .collect();
            let missing_rhs: Vec<usize> = (0..inst.rhs.len())
                .filter(|&k| !known.contains_key(&inst.rhs[k]))
                .collect();
            match (missing_lhs.len(), missing_rhs.len()) {
                (0, 0) => {
                    let lhs: BigUint =
                        inst.lhs.iter().map(|l| known[l].clone()).product();
                    let rhs: BigUint = inst
                        .rhs
                        .iter()
                        .map(|l| known[l].clone())
                        .product::<BigUint>()
                        + 1u32;
                    if lhs != rhs {
                        return Err(Error::Inconsistent(format!(
                            "relation {} at i={} fails: {lhs} != {rhs}",
                            inst.relation, inst.i
                        )));
                    }
                }
                (1, 0) => {
                    let k = missing_lhs[0];
                    let rest: BigUint = inst
                        .lhs
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != k)
                        .map(|(_, l)| known[l].clone())
                        .product();
                    let rhs: BigUint = inst
                        .rhs
                        .iter()
                        .map(|l| known[l].clone())
                        .product::<BigUint>()
                        + 1u32;
                    let value =
                        exact_div(rhs, &rest, &format!("solving {:?}", inst.lhs[k]))?;
                    known.insert(inst.lhs[k], value);
                    progressed = true;
                }
                (0, 1) => {
                    let k = missing_rhs[0];
                    let rest: BigUint = inst
                        .rhs
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != k)
                        .map(|(_, l)| known[l].clone())
                        .product();
                    let lhs: BigUint =
                        inst.lhs.iter().map(|l| known[l].clone()).product();
                    if lhs.is_one() {
                        return Err(Error::Inconsistent(format!(
                            "solving {:?}: entry vanished",
                            inst.rhs[k]
                        )));
                    }
                    let value =
                        exact_div(lhs - 1u32, &rest, &format!("solving {:?}", inst.rhs[k]))?;
                    known.insert(inst.rhs[k], value);
                    progressed = true;
                }
                _ => {}
            }
        }
        if known.len() == total {
            break;
        }
        if !progressed {
            return Err(Error::Inconsistent(
                "slice values do not determine the pattern".into(),
            ));
        }
    }
    let pattern = FriezePatternD::from_entries(n, known)?;
    if let Some(v) = verify_relations(&pattern).first() {
        return Err(Error::Inconsistent(format!(
            "reconstructed pattern violates {v}"
        )));
    }
    Ok(pattern)
}

/// Whether a grid holds a type-A or type-D pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    TypeA,
    TypeD,
}

/// A staggered grid of positive integers, as printed in a frieze figure.
/// Row entries sit at columns `offset + 2k`, so vertically adjacent rows
/// interleave.
#[derive(Debug, Clone)]
pub struct RawGrid {
    pub kind: GridKind,
    /// Boundary vertex count (type D) or frieze order (type A).
    pub n: usize,
    /// Rows from top to bottom as (column offset, values).
    pub rows: Vec<(i64, Vec<BigUint>)>,
}

/// One failed positional check in a grid.
#[derive(Debug, Clone)]
pub struct GridViolation {
    pub row: usize,
    pub col: i64,
    pub description: String,
}

impl fmt::Display for GridViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}, column {}: {}", self.row, self.col, self.description)
    }
}

/// Verifies the relations of a raw grid positionally and reports every
/// failure. Errors only on malformed shapes.
pub fn verify_raw_grid(grid: &RawGrid) -> Result<Vec<GridViolation>> {
    let n = grid.n;
    let expected_rows = match grid.kind {
        GridKind::TypeA => {
            if n < 4 {
                return Err(Error::InvalidGrid("type-A grids need order >= 4".into()));
            }
            n - 1
        }
        GridKind::TypeD => {
            if n < 3 {
                return Err(Error::InvalidGrid("type-D grids need n >= 3".into()));
            }
            n + 1
        }
    };
    if grid.rows.len() != expected_rows {
        return Err(Error::InvalidGrid(format!(
            "expected {expected_rows} rows, found {}",
            grid.rows.len()
        )));
    }
    if grid.rows.iter().any(|(_, vals)| vals.is_empty()) {
        return Err(Error::InvalidGrid("empty grid row".into()));
    }

    let mut at: BTreeMap<(usize, i64), &BigUint> = BTreeMap::new();
    for (r, (offset, vals)) in grid.rows.iter().enumerate() {
        for (k, v) in vals.iter().enumerate() {
            at.insert((r, offset + 2 * k as i64), v);
        }
    }
    let get = |r: usize, c: i64| at.get(&(r, c)).copied();

    let mut violations = Vec::new();
    let check_ones = |row: usize, violations: &mut Vec<GridViolation>| {
        let (offset, vals) = &grid.rows[row];
        for (k, v) in vals.iter().enumerate() {
            if !v.is_one() {
                violations.push(GridViolation {
                    row,
                    col: offset + 2 * k as i64,
                    description: format!("boundary row entry {v} is not 1"),
                });
            }
        }
    };

    // Unit diamonds between consecutive interior rows.
    let diamond_rows = match grid.kind {
        GridKind::TypeA => 1..expected_rows - 1,
        GridKind::TypeD => 1..n - 2,
    };
    check_ones(0, &mut violations);
    if grid.kind == GridKind::TypeA {
        check_ones(expected_rows - 1, &mut violations);
    }
    for r in diamond_rows {
        let (offset, vals) = &grid.rows[r];
        for k in 0..vals.len() {
            let c = offset + 2 * k as i64;
            let (Some(left), Some(right), Some(top), Some(bottom)) =
                (get(r, c), get(r, c + 2), get(r - 1, c + 1), get(r + 1, c + 1))
            else {
                continue;
            };
            if left * right != top * bottom + BigUint::one() {
                violations.push(GridViolation {
                    row: r,
                    col: c,
                    description: format!(
                        "diamond {left}*{right} != {top}*{bottom} + 1"
                    ),
                });
            }
        }
    }

    if grid.kind == GridKind::TypeD {
        // The bottom rows: with U the last chord row, W the row above it,
        // and T, B the two pair rows, every adjacent pair multiplies back
        // to a U entry plus one, and U closes over the triple product.
        let w = n.saturating_sub(3);
        let u = n - 2;
        let t = n - 1;
        let b = n;
        let columns: BTreeSet<i64> = at
            .keys()
            .filter(|(r, _)| *r == t || *r == b)
            .map(|&(_, c)| c)
            .collect();
        for &x in &columns {
            for (row, name) in [(t, "upper pair row"), (b, "lower pair row")] {
                if let (Some(l), Some(r2), Some(up)) =
                    (get(row, x), get(row, x + 2), get(u, x + 1))
                {
                    if l * r2 != up + BigUint::one() {
                        violations.push(GridViolation {
                            row,
                            col: x,
                            description: format!("{name}: {l}*{r2} != {up} + 1"),
                        });
                    }
                }
            }
            if let (Some(ul), Some(ur), Some(wv), Some(tv), Some(bv)) = (
                get(u, x - 1),
                get(u, x + 1),
                get(w, x),
                get(t, x),
                get(b, x),
            ) {
                if ul * ur != wv * tv * bv + BigUint::one() {
                    violations.push(GridViolation {
                        row: u,
                        col: x - 1,
                        description: format!(
                            "triple: {ul}*{ur} != {wv}*{tv}*{bv} + 1"
                        ),
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Lays a pattern out as a staggered grid: the unit row on top, chord rows
/// of increasing gap, then the two pair rows, which interleave the
/// diagonal and puncture entries in alternating slots.
pub fn to_grid(pattern: &FriezePatternD) -> RawGrid {
    let n = pattern.n();
    let mut rows: Vec<(i64, Vec<BigUint>)> = Vec::with_capacity(n + 1);
    for r in 0..=(n - 2) {
        let g = r + 1;
        let vals = (0..=n)
            .map(|k| {
                let i = k % n + 1;
                pattern.entry(i, add(n, i, g)).clone()
            })
            .collect();
        rows.push((r as i64, vals));
    }
    let mut top = Vec::with_capacity(n + 1);
    let mut bottom = Vec::with_capacity(n + 1);
    for s in 1..=(n + 1) {
        let v = (s - 1) % n + 1;
        let (diag, punc) = (pattern.entry(v, v).clone(), pattern.entry(v, 0).clone());
        if s % 2 == 1 {
            top.push(diag);
            bottom.push(punc);
        } else {
            top.push(punc);
            bottom.push(diag);
        }
    }
    rows.push((n as i64 - 1, top));
    rows.push((n as i64 - 1, bottom));
    RawGrid {
        kind: GridKind::TypeD,
        n,
        rows,
    }
}

/// Renders a pattern as a staggered plain-text block.
pub fn render_ascii(pattern: &FriezePatternD) -> String {
    let grid = to_grid(pattern);
    let width = grid
        .rows
        .iter()
        .flat_map(|(_, vals)| vals.iter())
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for (offset, vals) in &grid.rows {
        let mut line = String::new();
        for (k, v) in vals.iter().enumerate() {
            let col = (offset + 2 * k as i64) as usize;
            let target = col * (width + 1) / 2;
            while line.len() < target {
                line.push(' ');
            }
            line.push_str(&format!("{v:>width$}"));
            line.push(' ');
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Renders a pattern as `i,j,value` lines.
pub fn render_csv(pattern: &FriezePatternD) -> String {
    let mut out = String::from("i,j,value\n");
    for (&(i, j), v) in pattern.iter() {
        out.push_str(&format!("{i},{j},{v}\n"));
    }
    out
}

/// A triangulation of an unpunctured convex polygon by non-crossing
/// diagonals (the type-A companion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationA {
    n: usize,
    diagonals: Vec<(usize, usize)>,
}

fn diagonals_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (p, q) = a;
    let (r, s) = b;
    (p < r && r < q && q < s) || (r < p && p < s && s < q)
}

impl TriangulationA {
    /// Validates a maximal set of pairwise non-crossing diagonals.
    pub fn new(n: usize, mut diagonals: Vec<(usize, usize)>) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidTriangulation(format!(
                "polygon order {n} must be at least 4"
            )));
        }
        for d in diagonals.iter_mut() {
            if d.0 > d.1 {
                *d = (d.1, d.0);
            }
            let (a, b) = *d;
            if !(1..=n).contains(&a) || !(1..=n).contains(&b) || b - a < 2 || b - a > n - 2 {
                return Err(Error::InvalidArc(format!(
                    "({a},{b}) is not a diagonal of the {n}-gon"
                )));
            }
        }
        diagonals.sort();
        if diagonals.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTriangulation("duplicate diagonal".into()));
        }
        for (k, &a) in diagonals.iter().enumerate() {
            for &b in &diagonals[k + 1..] {
                if diagonals_cross(a, b) {
                    return Err(Error::InvalidTriangulation(format!(
                        "diagonals {a:?} and {b:?} cross"
                    )));
                }
            }
        }
        if diagonals.len() != n - 3 {
            return Err(Error::InvalidTriangulation(format!(
                "a triangulated {n}-gon has {} diagonals, found {}",
                n - 3,
                diagonals.len()
            )));
        }
        Ok(Self { n, diagonals })
    }

    /// The fan triangulation at a vertex.
    pub fn fan(n: usize, v: usize) -> Result<Self> {
        let diagonals = (2..n - 1).map(|g| (v, add(n, v, g))).collect();
        Self::new(n, diagonals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        b - a == 1 || (a == 1 && b == self.n) || self.diagonals.binary_search(&(a, b)).is_ok()
    }

    /// The triangles, recovered as 3-cliques of the edge graph.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut faces = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in (b + 1)..=n {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        faces.push([a, b, c]);
                    }
                }
            }
        }
        assert_eq!(faces.len(), n - 2, "a triangulated n-gon has n-2 faces");
        faces
    }

    /// The triangles as a matchable region family, lettered in sorted
    /// order.
    pub fn regions(&self) -> Regions {
        let faces = self.faces();
        let labels = (0..faces.len())
            .map(|k| {
                if k < 26 {
                    char::from(b'A' + k as u8).to_string()
                } else {
                    format!("#{k}")
                }
            })
            .collect();
        let incidence = faces
            .iter()
            .map(|f| f.iter().copied().collect::<BTreeSet<usize>>())
            .collect();
        Regions::from_parts(self.n, labels, incidence, (1..=self.n).collect())
    }
}

/// Enumerates all triangulations of the n-gon.
pub fn enumerate_triangulations_a(n: usize) -> Vec<TriangulationA> {
    let mut all_diagonals = Vec::new();
    for a in 1..=n {
        for b in (a + 2)..=n {
            if b - a <= n - 2 {
                all_diagonals.push((a, b));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn go(
        n: usize,
        all: &[(usize, usize)],
        start: usize,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<TriangulationA>,
    ) {
        if chosen.len() == n - 3 {
            out.push(TriangulationA::new(n, chosen.clone()).expect("valid by construction"));
            return;
        }
        for k in start..all.len() {
            if chosen.iter().all(|&d| !diagonals_cross(d, all[k])) {
                chosen.push(all[k]);
                go(n, all, k + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    go(n, &all_diagonals, 0, &mut chosen, &mut out);
    out
}

/// Vertex labels grown from a base vertex: the base gets 0, its edge
/// neighbours 1, and each triangle's third corner the sum of the other
/// two. Returns the label of every vertex 1..=n, indexed by vertex - 1.
pub fn bci_labels(t: &TriangulationA, base: usize) -> Result<Vec<BigUint>> {
    let n = t.n();
    if !(1..=n).contains(&base) {
        return Err(Error::InvalidLabel(format!("base {base} outside 1..={n}")));
    }
    let mut labels: Vec<Option<BigUint>> = vec![None; n + 1];
    labels[base] = Some(BigUint::zero());
    labels[next(n, base)] = Some(BigUint::one());
    labels[prev(n, base)] = Some(BigUint::one());
    let faces = t.faces();
    loop {
        let mut progressed = false;
        for f in &faces {
            let missing: Vec<usize> = f.iter().copied().filter(|&v| labels[v].is_none()).collect();
            if missing.len() == 1 {
                let sum = f
                    .iter()
                    .filter(|&&v| v != missing[0])
                    .map(|&v| labels[v].clone().unwrap())
                    .sum();
                labels[missing[0]] = Some(sum);
                progressed = true;
            }
        }
        if labels[1..].iter().all(|l| l.is_some()) {
            break;
        }
        assert!(progressed, "label propagation must reach every vertex");
    }
    Ok(labels[1..].iter().map(|l| l.clone().unwrap()).collect())
}

/// The type-A matching number: matchings of the corridor V_{i+1,j-1}
/// against the triangles.
pub fn type_a_number(t: &TriangulationA, i: usize, j: usize) -> Result<BigUint> {
    let n = t.n();
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) || i == j {
        return Err(Error::InvalidLabel(format!(
            "({i},{j}) is not a chord label of the {n}-gon"
        )));
    }
    if j == next(n, i) || i == next(n, j) {
        return Ok(BigUint::one());
    }
    let vertices = interval_vertices(n, next(n, i), prev(n, j));
    count_matchings(&vertices, &t.regions())
}

/// The complement count n_ij: matchings of every vertex other than i and j
/// against the triangles.
pub fn complement_count(t: &TriangulationA, i: usize, j: usize) -> Result<BigUint> {
    let n = t.n();
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) || i == j {
        return Err(Error::InvalidLabel(format!(
            "({i},{j}) is not a vertex pair of the {n}-gon"
        )));
    }
    let vertices: Vec<usize> = (1..=n).filter(|&v| v != i && v != j).collect();
    count_matchings(&vertices, &t.regions())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{enumerate_triangulations, Arc, Triangulation};
    use num_traits::ToPrimitive;

    fn fixture_d8() -> FaceComplex {
        let arcs: Vec<Arc> = [
            "central 3",
            "central 4",
            "central 5",
            "central 6",
            "chord 6 3",
            "chord 7 3",
            "chord 7 2",
            "chord 8 2",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
        FaceComplex::new(Triangulation::new(8, arcs).unwrap())
    }

    /// The full published pattern of the worked example, row by row.
    fn golden_d8() -> Vec<((usize, usize), u64)> {
        let by_gap: [[u64; 8]; 6] = [
            [3, 4, 2, 2, 3, 3, 2, 1],
            [11, 7, 3, 5, 8, 5, 1, 2],
            [19, 10, 7, 13, 13, 2, 1, 7],
            [27, 23, 18, 21, 5, 1, 3, 12],
            [62, 59, 29, 8, 2, 2, 5, 17],
            [159, 95, 11, 3, 3, 3, 7, 39],
        ];
        let mut out = Vec::new();
        for (r, row) in by_gap.iter().enumerate() {
            let g = r + 2;
            for (k, &v) in row.iter().enumerate() {
                let i = k + 1;
                out.push(((i, add(8, i, g)), v));
            }
        }
        let diagonal = [32u64, 12, 4, 4, 4, 4, 8, 20];
        let puncture = [8u64, 3, 1, 1, 1, 1, 2, 5];
        for i in 1..=8usize {
            out.push(((i, i), diagonal[i - 1]));
            out.push(((i, 0), puncture[i - 1]));
        }
        out
    }

    #[test]
    fn worked_example_matches_published_table() {
        let pattern = build_frieze(&fixture_d8()).unwrap();
        for ((i, j), v) in golden_d8() {
            assert_eq!(
                pattern.entry(i, j).to_u64(),
                Some(v),
                "m[{i},{j}] should be {v}"
            );
        }
        assert!(verify_relations(&pattern).is_empty());
    }

    #[test]
    fn perturbing_an_entry_breaks_a_relation() {
        let pattern = build_frieze(&fixture_d8()).unwrap();
        let mut entries: BTreeMap<(usize, usize), BigUint> =
            pattern.iter().map(|(&l, v)| (l, v.clone())).collect();
        entries.insert((1, 5), entries[&(1, 5)].clone() + 1u32);
        let bad = FriezePatternD::from_entries(8, entries).unwrap();
        assert!(!verify_relations(&bad).is_empty());
    }

    #[test]
    fn iota_is_an_involution_fixing_exactly_d0_one() {
        for t in enumerate_triangulations(4) {
            let fc = FaceComplex::new(t);
            let pattern = build_frieze(&fc).unwrap();
            let swapped = iota(&pattern);
            assert_eq!(iota(&swapped), pattern);
            assert!(verify_relations(&swapped).is_empty());
            assert_eq!(swapped == pattern, fc.d0() == 1);
        }
    }

    #[test]
    fn iota_of_a_punctured_pattern_is_not_plain() {
        let patterns: Vec<FriezePatternD> = enumerate_triangulations(4)
            .into_iter()
            .map(|t| build_frieze(&FaceComplex::new(t)).unwrap())
            .collect();
        for t in enumerate_triangulations(4) {
            let fc = FaceComplex::new(t);
            if fc.d0() >= 2 {
                let swapped = iota(&build_frieze(&fc).unwrap());
                assert!(
                    patterns.iter().all(|p| *p != swapped),
                    "iota image must not come from a plain triangulation"
                );
            }
        }
    }

    #[test]
    fn degrees_reconstruct_the_worked_example() {
        let fc = fixture_d8();
        let pattern = build_frieze(&fc).unwrap();
        let rebuilt = frieze_from_degrees(&[1, 3, 4, 2, 2, 3, 3, 2], 4).unwrap();
        assert_eq!(rebuilt, pattern);
        assert!(frieze_from_degrees(&[1, 3, 4, 2, 2, 3, 3, 2], 3).is_err());
    }

    #[test]
    fn degrees_reconstruct_the_fan() {
        let fc = FaceComplex::new(Triangulation::fan(4, 1).unwrap());
        let pattern = build_frieze(&fc).unwrap();
        let rebuilt = frieze_from_degrees(&[6, 1, 2, 2], 1).unwrap();
        assert_eq!(rebuilt, pattern);
    }

    #[test]
    fn slice_roundtrip() {
        for fc in [fixture_d8(), FaceComplex::new(Triangulation::fan(4, 1).unwrap())] {
            let pattern = build_frieze(&fc).unwrap();
            let (slice, values) = extract_slice(&pattern);
            let rebuilt = frieze_from_slice(&slice, &values).unwrap();
            assert_eq!(rebuilt, pattern);
        }
    }

    #[test]
    fn all_four_pair_combos_determine_the_pattern() {
        let pattern = build_frieze(&fixture_d8()).unwrap();
        let n = 8;
        let chords: Vec<(usize, usize)> = (2..n).map(|g| (1, add(n, 1, g))).collect();
        let combos: [[(usize, usize); 2]; 4] = [
            [(1, 1), (1, 0)],
            [(8, 8), (8, 0)],
            [(1, 1), (8, 8)],
            [(1, 0), (8, 0)],
        ];
        for combo in combos {
            let mut labels = chords.clone();
            labels.extend(combo);
            let slice = Slice::new(n, labels).unwrap();
            let values: Vec<BigUint> = slice
                .labels()
                .iter()
                .map(|&(i, j)| pattern.entry(i, j).clone())
                .collect();
            assert_eq!(frieze_from_slice(&slice, &values).unwrap(), pattern);
        }
    }

    #[test]
    fn invalid_slices_are_rejected() {
        assert!(Slice::new(8, vec![(1, 3); 8]).is_err());
        let mut zigzag: Vec<(usize, usize)> = (2..8).map(|g| (1, add(8, 1, g))).collect();
        zigzag.extend([(1, 1), (8, 0)]);
        assert!(Slice::new(8, zigzag).is_err(), "mixed slot/type pair");
        let mut short: Vec<(usize, usize)> = (2..7).map(|g| (1, add(8, 1, g))).collect();
        short.extend([(1, 1), (1, 0)]);
        assert!(Slice::new(8, short).is_err());
    }

    fn grid_of(kind: GridKind, n: usize, rows: &[(i64, &[u64])]) -> RawGrid {
        RawGrid {
            kind,
            n,
            rows: rows
                .iter()
                .map(|(o, vals)| (*o, vals.iter().map(|&v| BigUint::from(v)).collect()))
                .collect(),
        }
    }

    fn published_d5_grid() -> RawGrid {
        grid_of(
            GridKind::TypeD,
            5,
            &[
                (0, &[1, 1, 1, 1, 1, 1]),
                (1, &[3, 3, 1, 2, 4, 3]),
                (2, &[8, 2, 1, 7, 11, 8]),
                (3, &[5, 1, 3, 19, 29, 5]),
                (4, &[2, 1, 4, 5, 6, 1]),
                (4, &[1, 2, 2, 10, 3, 2]),
            ],
        )
    }

    fn published_a6_grid() -> RawGrid {
        grid_of(
            GridKind::TypeA,
            6,
            &[
                (0, &[1, 1, 1, 1, 1, 1, 1]),
                (1, &[1, 4, 1, 2, 2, 2]),
                (0, &[1, 3, 3, 1, 3, 3, 1]),
                (1, &[2, 2, 2, 1, 4, 1]),
                (0, &[1, 1, 1, 1, 1, 1, 1]),
            ],
        )
    }

    #[test]
    fn published_grids_verify_cleanly() {
        assert!(verify_raw_grid(&published_d5_grid()).unwrap().is_empty());
        assert!(verify_raw_grid(&published_a6_grid()).unwrap().is_empty());
    }

    #[test]
    fn perturbed_grids_report_violations() {
        for (kind, base) in [
            (GridKind::TypeD, published_d5_grid()),
            (GridKind::TypeA, published_a6_grid()),
        ] {
            for r in 0..base.rows.len() {
                for k in 0..base.rows[r].1.len() {
                    let mut grid = base.clone();
                    grid.rows[r].1[k] += 1u32;
                    assert!(
                        !verify_raw_grid(&grid).unwrap().is_empty(),
                        "{kind:?}: +1 at row {r} entry {k} must be caught"
                    );
                }
            }
        }
    }

    #[test]
    fn built_patterns_lay_out_as_clean_grids() {
        let pattern = build_frieze(&fixture_d8()).unwrap();
        let grid = to_grid(&pattern);
        assert!(verify_raw_grid(&grid).unwrap().is_empty());
        let offsets: Vec<i64> = grid.rows.iter().map(|(o, _)| *o).collect();
        assert_eq!(offsets, vec![0, 1, 2, 3, 4, 5, 6, 7, 7]);
        let top: Vec<u64> = grid.rows[7].1.iter().map(|v| v.to_u64().unwrap()).collect();
        let bottom: Vec<u64> = grid.rows[8].1.iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(top, vec![32, 3, 4, 1, 4, 1, 8, 5, 32]);
        assert_eq!(bottom, vec![8, 12, 1, 4, 1, 4, 2, 20, 8]);
    }

    #[test]
    fn ascii_and_csv_render() {
        let pattern = build_frieze(&FaceComplex::new(Triangulation::fan(4, 1).unwrap())).unwrap();
        let ascii = render_ascii(&pattern);
        assert_eq!(ascii.lines().count(), 5);
        assert!(ascii.contains("11"));
        let csv = render_csv(&pattern);
        assert!(csv.starts_with("i,j,value\n"));
        assert!(csv.contains("3,2,11\n"));
        assert_eq!(csv.lines().count(), 1 + 4 * 5);
    }

    #[test]
    fn polygon_triangulation_counts_are_catalan() {
        assert_eq!(enumerate_triangulations_a(5).len(), 5);
        assert_eq!(enumerate_triangulations_a(6).len(), 14);
        assert_eq!(enumerate_triangulations_a(7).len(), 42);
    }

    #[test]
    fn hexagon_fan_second_row_and_complement_counts() {
        let t = TriangulationA::fan(6, 2).unwrap();
        let second_row: Vec<u64> = (1..=6)
            .map(|i| {
                type_a_number(&t, i, add(6, i, 2))
                    .unwrap()
                    .to_u64()
                    .unwrap()
            })
            .collect();
        assert_eq!(second_row, vec![4, 1, 2, 2, 2, 1]);
        assert_eq!(complement_count(&t, 1, 4).unwrap().to_u64(), Some(3));
        assert_eq!(type_a_number(&t, 1, 4).unwrap().to_u64(), Some(3));
        assert_eq!(bci_labels(&t, 1).unwrap()[3].to_u64(), Some(3));
    }

    #[test]
    fn type_a_triple_equality_and_ptolemy() {
        for t in enumerate_triangulations_a(6) {
            let n = 6;
            for i in 1..=n {
                let labels = bci_labels(&t, i).unwrap();
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    let m = type_a_number(&t, i, j).unwrap();
                    assert_eq!(labels[j - 1], m, "bci vs corridor at ({i},{j})");
                    assert_eq!(
                        complement_count(&t, i, j).unwrap(),
                        m,
                        "complement vs corridor at ({i},{j})"
                    );
                }
            }
            for i in 1..=n {
                for j in (i + 1)..=n {
                    for k in (j + 1)..=n {
                        for l in (k + 1)..=n {
                            let nn = |a, b| complement_count(&t, a, b).unwrap();
                            assert_eq!(
                                nn(i, k) * nn(j, l),
                                nn(i, j) * nn(k, l) + nn(l, i) * nn(j, k),
                                "Ptolemy at ({i},{j},{k},{l})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relations_hold_exhaustively_for_small_n() {
        for n in [4usize, 5] {
            for t in enumerate_triangulations(n) {
                let pattern = build_frieze(&FaceComplex::new(t)).unwrap();
                assert!(verify_relations(&pattern).is_empty());
            }
        }
    }
}
