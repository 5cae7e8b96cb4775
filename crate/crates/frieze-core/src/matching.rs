//! Matchings between boundary vertices and regions.
//!
//! A matching assigns to every requested vertex a distinct region incident
//! with it. Counting such matchings over the right family of regions —
//! faces of the complex, regions of a truncated subdivision, or faces of a
//! polygon cut — produces every entry of a frieze pattern. The backtracking
//! counter is cross-checked by an independent permanent computation
//! (Ryser's inclusion–exclusion formula).

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::complex::{vertex_name, FaceComplex, PolygonCut, Subdivision, PUNCTURE};
use crate::error::{Error, Result};
use crate::surface::{interval_vertices, next, prev};

/// A labelled family of regions to match boundary vertices against.
#[derive(Debug, Clone)]
pub struct Regions {
    display_n: usize,
    labels: Vec<String>,
    incidence: Vec<BTreeSet<usize>>,
    universe: BTreeSet<usize>,
}

impl Regions {
    /// Builds a region family from parts; `universe` is the set of vertices
    /// that may appear in a matched vertex list.
    pub fn from_parts(
        display_n: usize,
        labels: Vec<String>,
        incidence: Vec<BTreeSet<usize>>,
        universe: BTreeSet<usize>,
    ) -> Self {
        assert_eq!(labels.len(), incidence.len());
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]).then(a.cmp(&b)));
        Self {
            display_n,
            labels: order.iter().map(|&k| labels[k].clone()).collect(),
            incidence: order.iter().map(|&k| incidence[k].clone()).collect(),
            universe,
        }
    }

    /// The faces of a complex, including the puncture as matchable vertex.
    pub fn of_complex(fc: &FaceComplex) -> Self {
        let labels = (0..fc.faces().len())
            .map(|f| fc.letter(f).to_string())
            .collect();
        let incidence = fc.faces().iter().map(|f| f.incidence().clone()).collect();
        let universe = (0..=fc.n()).collect();
        Self::from_parts(fc.n(), labels, incidence, universe)
    }

    /// The regions of a truncated subdivision; only corridor vertices are
    /// matchable.
    pub fn of_subdivision(sub: &Subdivision) -> Self {
        let labels = sub.regions.iter().map(|r| r.label.clone()).collect();
        let incidence = sub.regions.iter().map(|r| r.incidence.clone()).collect();
        let universe = sub.vertices.iter().copied().collect();
        Self::from_parts(sub.n(), labels, incidence, universe)
    }

    /// The faces of a polygon cut; every cycle vertex is matchable.
    pub fn of_polygon(cut: &PolygonCut) -> Self {
        let labels = cut.faces.iter().map(|(l, _)| l.clone()).collect();
        let incidence = cut.faces.iter().map(|(_, inc)| inc.clone()).collect();
        let universe = cut.cycle.iter().copied().collect();
        Self::from_parts(cut.n(), labels, incidence, universe)
    }

    /// Region labels in matching order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A concrete matching instance: an ordered vertex list against a region
/// family, reduced to an incidence matrix.
#[derive(Debug, Clone)]
pub struct MatchProblem {
    vertex_names: Vec<String>,
    region_labels: Vec<String>,
    /// For each vertex, the regions incident with it (ascending indices).
    candidates: Vec<Vec<usize>>,
}

impl MatchProblem {
    /// Pairs each vertex with its incident regions.
    pub fn new(vertices: &[usize], regions: &Regions) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in vertices {
            if !regions.universe.contains(&v) {
                return Err(Error::InvalidLabel(format!(
                    "vertex {} cannot be matched here",
                    vertex_name(regions.display_n, v)
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidLabel(format!(
                    "vertex {} listed twice",
                    vertex_name(regions.display_n, v)
                )));
            }
        }
        assert!(regions.labels.len() <= 128, "region mask exceeds 128 bits");
        let candidates = vertices
            .iter()
            .map(|v| {
                (0..regions.incidence.len())
                    .filter(|&r| regions.incidence[r].contains(v))
                    .collect()
            })
            .collect();
        Ok(Self {
            vertex_names: vertices
                .iter()
                .map(|&v| vertex_name(regions.display_n, v))
                .collect(),
            region_labels: regions.labels.clone(),
            candidates,
        })
    }

    /// Number of vertices to match.
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    /// Number of regions available.
    pub fn region_count(&self) -> usize {
        self.region_labels.len()
    }

    /// Counts matchings by backtracking in vertex order.
    pub fn count(&self) -> BigUint {
        fn go(problem: &MatchProblem, idx: usize, used: u128, total: &mut BigUint) {
            if idx == problem.candidates.len() {
                *total += 1u32;
                return;
            }
            for &r in &problem.candidates[idx] {
                if used >> r & 1 == 0 {
                    go(problem, idx + 1, used | 1 << r, total);
                }
            }
        }
        let mut total = BigUint::zero();
        go(self, 0, 0, &mut total);
        total
    }

    /// Lists matchings in lexicographic region order, rendered as
    /// vertex–label pairs such as `6A 7E 8G 1H`.
    pub fn list(&self) -> Vec<String> {
        fn go(problem: &MatchProblem, idx: usize, used: u128, pick: &mut Vec<usize>, out: &mut Vec<String>) {
            if idx == problem.candidates.len() {
                let rendered: Vec<String> = pick
                    .iter()
                    .enumerate()
                    .map(|(k, &r)| {
                        format!("{}{}", problem.vertex_names[k], problem.region_labels[r])
                    })
                    .collect();
                out.push(rendered.join(" "));
                return;
            }
            for &r in &problem.candidates[idx] {
                if used >> r & 1 == 0 {
                    pick.push(r);
                    go(problem, idx + 1, used | 1 << r, pick, out);
                    pick.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, 0, &mut Vec::new(), &mut out);
        out
    }

    /// Counts matchings independently as a matrix permanent via Ryser's
    /// formula, padding a rectangular instance with all-ones rows.
    pub fn permanent(&self) -> BigUint {
        let k = self.candidates.len();
        let m = self.region_labels.len();
        if k > m {
            return BigUint::zero();
        }
        if m == 0 {
            return BigUint::one();
        }
        let full: u128 = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
        let mut rows: Vec<u128> = self
            .candidates
            .iter()
            .map(|c| c.iter().fold(0u128, |acc, &r| acc | 1 << r))
            .collect();
        rows.resize(m, full);
        let numerator = if m <= 20 {
            ryser_small(&rows, m)
        } else {
            ryser_big(&rows, m)
        };
        let pad_factorial = factorial(m - k);
        let (q, r) = num_integer::div_rem(numerator, pad_factorial);
        assert!(r.is_zero(), "padded permanent divides by the pad factorial");
        q
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).map(BigUint::from).product()
}

/// Ryser's formula with Gray-code subset updates, exact in i128 for up to
/// 20 columns.
fn ryser_small(rows: &[u128], m: usize) -> BigUint {
    let mut counts = vec![0i64; rows.len()];
    let mut total: i128 = 0;
    let mut prev_gray: u64 = 0;
    for g in 1..(1u64 << m) {
        let gray = g ^ (g >> 1);
        let bit = (gray ^ prev_gray).trailing_zeros();
        let added = gray >> bit & 1 == 1;
        for (r, row) in rows.iter().enumerate() {
            if row >> bit & 1 == 1 {
                counts[r] += if added { 1 } else { -1 };
            }
        }
        let mut product: i128 = 1;
        for &c in &counts {
            product *= c as i128;
            if product == 0 {
                break;
            }
        }
        if product != 0 {
            let sign_flips = m - gray.count_ones() as usize;
            if sign_flips % 2 == 0 {
                total += product;
            } else {
                total -= product;
            }
        }
        prev_gray = gray;
    }
    assert!(total >= 0, "permanent of a 0/1 matrix is non-negative");
    BigUint::from(total as u128)
}

/// Ryser's formula in arbitrary precision for wide instances.
fn ryser_big(rows: &[u128], m: usize) -> BigUint {
    let mut counts = vec![0i64; rows.len()];
    let mut total = BigInt::zero();
    let mut prev_gray: u128 = 0;
    for g in 1..(1u128 << m) {
        let gray = g ^ (g >> 1);
        let bit = (gray ^ prev_gray).trailing_zeros();
        let added = gray >> bit & 1 == 1;
        for (r, row) in rows.iter().enumerate() {
            if row >> bit & 1 == 1 {
                counts[r] += if added { 1 } else { -1 };
            }
        }
        if counts.iter().all(|&c| c != 0) {
            let mut product = BigInt::one();
            for &c in &counts {
                product *= c;
            }
            let sign_flips = m - gray.count_ones() as usize;
            if sign_flips % 2 == 0 {
                total += product;
            } else {
                total -= product;
            }
        }
        prev_gray = gray;
    }
    assert!(!total.is_negative(), "permanent of a 0/1 matrix is non-negative");
    total.to_biguint().expect("non-negative")
}

/// Counts the matchings of the given vertices into the regions.
pub fn count_matchings(vertices: &[usize], regions: &Regions) -> Result<BigUint> {
    Ok(MatchProblem::new(vertices, regions)?.count())
}

/// Lists the matchings of the given vertices into the regions.
pub fn list_matchings(vertices: &[usize], regions: &Regions) -> Result<Vec<String>> {
    Ok(MatchProblem::new(vertices, regions)?.list())
}

/// Counts matchings of the polygon's cycle with vertices `a` and `b`
/// omitted, against the polygon's faces.
pub fn polygon_pq_counts(cut: &PolygonCut, a: usize, b: usize) -> Result<BigUint> {
    polygon_count_omitting(cut, &[a, b])
}

fn polygon_count_omitting(cut: &PolygonCut, omit: &[usize]) -> Result<BigUint> {
    for &v in omit {
        if !cut.cycle.contains(&v) {
            return Err(Error::InvalidLabel(format!(
                "vertex {} is not on the polygon boundary",
                vertex_name(cut.n(), v)
            )));
        }
    }
    let vertices: Vec<usize> = cut
        .cycle
        .iter()
        .copied()
        .filter(|v| !omit.contains(v))
        .collect();
    count_matchings(&vertices, &Regions::of_polygon(cut))
}

/// The matched vertex list for the entry m_ij: the corridor V_{i+1,j-1},
/// with the puncture appended for a diagonal entry under d0 >= 2.
fn diagonal_vertices(n: usize, i: usize) -> Vec<usize> {
    let mut verts = interval_vertices(n, next(n, i), prev(n, i));
    verts.push(PUNCTURE);
    verts
}

/// The matching instances whose counts add up to the entry m_ij. The unit
/// entries m_{i,i+1} have no instance; a d0 = 1 diagonal entry away from
/// the central foot splits into two polygon instances.
fn entry_problems(fc: &FaceComplex, i: usize, j: usize) -> Result<Vec<MatchProblem>> {
    let n = fc.n();
    if !(1..=n).contains(&i) || j > n {
        return Err(Error::InvalidLabel(format!(
            "entry ({i},{j}) outside 1..={n} x 0..={n}"
        )));
    }
    if j == next(n, i) {
        return Ok(Vec::new());
    }
    let d0 = fc.d0();
    if j == i {
        if d0 >= 2 {
            let problem =
                MatchProblem::new(&diagonal_vertices(n, i), &Regions::of_complex(fc))?;
            return Ok(vec![problem]);
        }
        let (p, _) = fc.cut_p_q(i)?;
        let k = fc.triangulation().central_feet()[0];
        let regions = Regions::of_polygon(&p);
        let instance = |omit: &[usize]| -> Result<MatchProblem> {
            let vertices: Vec<usize> = p
                .cycle
                .iter()
                .copied()
                .filter(|v| !omit.contains(v))
                .collect();
            MatchProblem::new(&vertices, &regions)
        };
        if i == k {
            return Ok(vec![instance(&[k, n + k])?]);
        }
        return Ok(vec![instance(&[i, k])?, instance(&[i, n + k])?]);
    }
    if j == PUNCTURE {
        let (p, _) = fc.cut_p_q(i)?;
        let regions = Regions::of_polygon(&p);
        let mut omit = vec![i, PUNCTURE];
        if d0 == 1 {
            let k = fc.triangulation().central_feet()[0];
            if i == k {
                omit = vec![k, n + k, PUNCTURE];
            }
        }
        let vertices: Vec<usize> = p
            .cycle
            .iter()
            .copied()
            .filter(|v| !omit.contains(v))
            .collect();
        return Ok(vec![MatchProblem::new(&vertices, &regions)?]);
    }
    let sub = fc.truncate_chord(i, j)?;
    let problem = MatchProblem::new(&sub.vertices, &Regions::of_subdivision(&sub))?;
    Ok(vec![problem])
}

/// The matching number m_ij: the count of matchings attached to the arc
/// from i to j (j = 0 for the central arc, j = i for the loop-tagged
/// diagonal, and m_{i,i+1} = 1 by convention).
pub fn matching_number(fc: &FaceComplex, i: usize, j: usize) -> Result<BigUint> {
    if j == next(fc.n(), i) && (1..=fc.n()).contains(&i) {
        return Ok(BigUint::one());
    }
    let total = entry_problems(fc, i, j)?
        .iter()
        .map(MatchProblem::count)
        .sum();
    Ok(total)
}

/// The matching number of the loop at i, counted over all other vertices
/// against the loop truncation.
pub fn m_tilde(fc: &FaceComplex, i: usize) -> Result<BigUint> {
    let sub = fc.truncate_loop(i)?;
    count_matchings(&sub.vertices, &Regions::of_subdivision(&sub))
}

/// Every matching instance used to build the full frieze pattern, labelled
/// by its entry. Useful for cross-checking the counter.
pub fn frieze_problems(fc: &FaceComplex) -> Result<Vec<(String, MatchProblem)>> {
    let n = fc.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 0..=n {
            if j == next(n, i) {
                continue;
            }
            for (k, problem) in entry_problems(fc, i, j)?.into_iter().enumerate() {
                out.push((format!("m[{i},{j}]#{k}"), problem));
            }
        }
    }
    Ok(out)
}

/// The matchings realising the entry m_ij, rendered.
pub fn entry_matchings(fc: &FaceComplex, i: usize, j: usize) -> Result<Vec<String>> {
    if j == next(fc.n(), i) && (1..=fc.n()).contains(&i) {
        return Ok(vec![String::new()]);
    }
    let mut out = Vec::new();
    for problem in entry_problems(fc, i, j)? {
        out.extend(problem.list());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Arc, Triangulation};

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

    fn num(fc: &FaceComplex, i: usize, j: usize) -> u64 {
        use num_traits::ToPrimitive;
        matching_number(fc, i, j).unwrap().to_u64().unwrap()
    }

    #[test]
    fn published_matchings_for_m_52() {
        let fc = fixture_d8();
        assert_eq!(num(&fc, 5, 2), 5);
        let listed = entry_matchings(&fc, 5, 2).unwrap();
        let expected: BTreeSet<String> = [
            "6A 7E 8G 1H",
            "6D 7E 8G 1H",
            "6A 7F 8G 1H",
            "6D 7F 8G 1H",
            "6E 7F 8G 1H",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(listed.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(listed.len(), 5);
    }

    #[test]
    fn published_matchings_for_m_22() {
        let fc = fixture_d8();
        assert_eq!(num(&fc, 2, 2), 12);
        let listed = entry_matchings(&fc, 2, 2).unwrap();
        let expected: BTreeSet<String> = [
            "3C 4B 5A 6E 7F 8G 1H OD",
            "3D 4B 5A 6E 7F 8G 1H OC",
            "3D 4C 5A 6E 7F 8G 1H OB",
            "3D 4C 5B 6E 7F 8G 1H OA",
            "3E 4B 5A 6D 7F 8G 1H OC",
            "3E 4C 5A 6D 7F 8G 1H OB",
            "3E 4C 5B 6A 7F 8G 1H OD",
            "3E 4C 5B 6D 7F 8G 1H OA",
            "3F 4B 5A 6D 7E 8G 1H OC",
            "3F 4C 5A 6D 7E 8G 1H OB",
            "3F 4C 5B 6A 7E 8G 1H OD",
            "3F 4C 5B 6D 7E 8G 1H OA",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(listed.iter().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn m_27_uses_a_face_twice() {
        let fc = fixture_d8();
        assert_eq!(num(&fc, 2, 7), 23);
        let listed = entry_matchings(&fc, 2, 7).unwrap();
        assert_eq!(listed.len(), 23);
        assert!(listed.contains(&"3E 4B 5A 6E".to_string()));
        assert!(
            listed
                .iter()
                .any(|m| m.matches('E').count() == 2),
            "some matching must use both fragments of face E"
        );
    }

    #[test]
    fn puncture_entries_and_their_decomposition() {
        let fc = fixture_d8();
        assert_eq!(num(&fc, 8, 0), 5);
        let (p, _) = fc.cut_p_q(8).unwrap();
        use num_traits::ToPrimitive;
        let p86 = polygon_pq_counts(&p, 8, 6).unwrap().to_u64().unwrap();
        let p83 = polygon_pq_counts(&p, 8, 3).unwrap().to_u64().unwrap();
        assert_eq!((p86, p83), (3, 2));
        assert_eq!(num(&fc, 8, 0), p86 + p83);
    }

    #[test]
    fn loop_count_factorises() {
        let fc = fixture_d8();
        use num_traits::ToPrimitive;
        let tilde = m_tilde(&fc, 1).unwrap().to_u64().unwrap();
        assert_eq!(tilde, 256);
        assert_eq!(num(&fc, 1, 0) * num(&fc, 1, 1), 256);
        assert_eq!((num(&fc, 1, 0), num(&fc, 1, 1)), (8, 32));
    }

    #[test]
    fn fan_matching_numbers() {
        let fc = FaceComplex::new(Triangulation::fan(4, 1).unwrap());
        let second_row: Vec<u64> = (1..=4).map(|i| num(&fc, i, (i + 1) % 4 + 1)).collect();
        assert_eq!(second_row, vec![1, 2, 2, 6]);
        let third_row: Vec<u64> = (1..=4).map(|i| num(&fc, i, (i + 2) % 4 + 1)).collect();
        assert_eq!(third_row, vec![1, 3, 11, 5]);
        let diagonal: Vec<u64> = (1..=4).map(|i| num(&fc, i, i)).collect();
        assert_eq!(diagonal, vec![1, 4, 3, 2]);
        let central: Vec<u64> = (1..=4).map(|i| num(&fc, i, 0)).collect();
        assert_eq!(central, vec![1, 4, 3, 2]);
        use num_traits::ToPrimitive;
        let tildes: Vec<u64> = (1..=4)
            .map(|i| m_tilde(&fc, i).unwrap().to_u64().unwrap())
            .collect();
        assert_eq!(tildes, vec![1, 16, 9, 4]);
    }

    #[test]
    fn unit_entries_by_convention() {
        let fc = fixture_d8();
        assert_eq!(num(&fc, 3, 4), 1);
        assert_eq!(entry_matchings(&fc, 3, 4).unwrap(), vec![String::new()]);
    }

    #[test]
    fn permanent_agrees_with_backtracking() {
        for fc in [
            fixture_d8(),
            FaceComplex::new(Triangulation::fan(4, 1).unwrap()),
            FaceComplex::new(Triangulation::fan(6, 3).unwrap()),
        ] {
            for (label, problem) in frieze_problems(&fc).unwrap() {
                assert_eq!(
                    problem.count(),
                    problem.permanent(),
                    "count and permanent disagree at {label}"
                );
            }
        }
    }

    #[test]
    fn empty_vertex_list_has_one_matching() {
        let fc = fixture_d8();
        let regions = Regions::of_complex(&fc);
        assert_eq!(count_matchings(&[], &regions).unwrap(), BigUint::one());
        assert_eq!(list_matchings(&[], &regions).unwrap(), vec![String::new()]);
        let problem = MatchProblem::new(&[], &regions).unwrap();
        assert_eq!(problem.permanent(), BigUint::one());
    }

    #[test]
    fn unknown_vertices_are_rejected() {
        let fc = fixture_d8();
        let regions = Regions::of_complex(&fc);
        assert!(count_matchings(&[9], &regions).is_err());
        assert!(count_matchings(&[1, 1], &regions).is_err());
        let (p, _) = fc.cut_p_q(8).unwrap();
        assert!(polygon_pq_counts(&p, 4, 0).is_err());
    }

    #[test]
    fn more_vertices_than_regions_count_zero() {
        let regions = Regions::from_parts(
            3,
            vec!["A".into()],
            vec![[1usize, 2, 3].into_iter().collect()],
            (1..=3).collect(),
        );
        assert_eq!(count_matchings(&[1, 2], &regions).unwrap(), BigUint::zero());
        let problem = MatchProblem::new(&[1, 2], &regions).unwrap();
        assert_eq!(problem.permanent(), BigUint::zero());
    }
}
