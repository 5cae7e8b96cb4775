//! Face complexes of triangulations: rotation systems, face tracing,
//! face lettering, truncated subdivisions, and the polygon cuts P(i)/Q(i).
//!
//! The disc with its triangulation is encoded as a combinatorial map. Darts
//! are the ends of arcs and of boundary edges; at every vertex the incident
//! darts carry a clockwise cyclic order (the rotation); the face permutation
//! is "other end of the edge, then next in rotation", and its orbits are the
//! triangles plus one outer face. Everything downstream — face incidences,
//! truncation walks, polygon cuts — is derived from this structure, so no
//! geometry is ever needed.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::surface::{gap, interval_vertices, next, prev, Arc, Triangulation};

/// Vertex id of the puncture.
pub const PUNCTURE: usize = 0;

/// Index of an interior face.
pub type FaceId = usize;

/// Human-readable name of a polygon vertex: the puncture prints as `O`, a
/// duplicated boundary vertex `n + k` (created by unfolding) prints as `k'`.
pub fn vertex_name(n: usize, v: usize) -> String {
    if v == PUNCTURE {
        "O".to_string()
    } else if v > n {
        format!("{}'", v - n)
    } else {
        v.to_string()
    }
}

/// A half-edge of the combinatorial map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Dart {
    /// End of the boundary edge from `at` to `to` (an adjacent vertex).
    Boundary { at: usize, to: usize },
    /// End of the arc with the given index in the triangulation's arc list;
    /// `end` 0 is the clockwise-departing end (the boundary end of a central
    /// arc), `end` 1 the arriving end (the puncture end of a central arc).
    End { arc: usize, end: u8 },
}

/// Classification of a rotation entry at a boundary vertex.
enum EndKind {
    BoundaryEdge,
    /// Departing end with the given lifted length.
    Departing(usize),
    /// Arriving end with the given lifted length.
    Arriving(usize),
    /// Boundary end of the central arc at this vertex.
    CentralFoot,
}

/// The three triangle shapes that can occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Three distinct corners, none at the puncture... unless one corner is
    /// the puncture itself with two other distinct boundary corners.
    Ordinary,
    /// Two corners at the same boundary vertex plus one other boundary
    /// corner; bounded by a loop.
    LoopType,
    /// Two corners at the loop's base vertex plus the puncture.
    SelfFolded,
}

/// An interior triangle of the complex.
#[derive(Debug, Clone)]
pub struct Face {
    /// Corner vertices with multiplicity, in trace order.
    corners: Vec<usize>,
    /// Vertices incident with the face (deduplicated corners).
    incidence: BTreeSet<usize>,
    kind: FaceKind,
}

impl Face {
    /// Corner vertices with multiplicity (a loop-type or self-folded face
    /// repeats the loop's base vertex).
    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    /// The set of incident vertices (0 included for puncture-incident faces).
    pub fn incidence(&self) -> &BTreeSet<usize> {
        &self.incidence
    }

    /// The shape of the face.
    pub fn kind(&self) -> FaceKind {
        self.kind
    }
}

/// One region of a truncated subdivision: either a whole face of the
/// complex or a fragment of a face split by the cutting arc.
#[derive(Debug, Clone)]
pub struct Region {
    /// Letter of the parent face; fragments keep their parent's letter.
    pub label: String,
    /// Parent face.
    pub parent: FaceId,
    /// 0 for a whole face, otherwise the 1-based position of the fragment
    /// along the cutting walk.
    pub occurrence: usize,
    /// Boundary vertices incident with the region.
    pub incidence: BTreeSet<usize>,
}

/// The decomposition of the retained side of a truncation into regions.
#[derive(Debug, Clone)]
pub struct Subdivision {
    /// Description of the cutting arc, e.g. `chord 2 7`.
    pub cut: String,
    /// The matched boundary vertices of the retained side, clockwise.
    pub vertices: Vec<usize>,
    /// Regions sorted by (label, occurrence).
    pub regions: Vec<Region>,
    /// Number of crossings of the cutting arc with the triangulation.
    pub crossings: usize,
    n: usize,
}

impl Subdivision {
    /// True if some face contributes more than one region.
    pub fn has_split_face(&self) -> bool {
        self.regions.iter().any(|r| r.occurrence > 1)
    }

    /// Number of boundary vertices of the underlying disc.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Which of the two polygons a `PolygonCut` is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonKind {
    P,
    Q,
}

/// An unpunctured polygon obtained by cutting the disc along central arcs
/// (or unfolding it along the unique central arc when d0 = 1), together
/// with the faces that land inside it.
#[derive(Debug, Clone)]
pub struct PolygonCut {
    pub kind: PolygonKind,
    /// The anchor vertex i of P(i)/Q(i).
    pub anchor: usize,
    /// Boundary cycle of the polygon in clockwise order, ending with the
    /// puncture 0; a duplicated foot appears as `n + k`.
    pub cycle: Vec<usize>,
    /// Face letters with their corner sets inside the polygon.
    pub faces: Vec<(String, BTreeSet<usize>)>,
    n: usize,
}

impl PolygonCut {
    /// Number of boundary vertices of the underlying disc.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// A triangulation together with its traced faces and rotation system.
#[derive(Debug, Clone)]
pub struct FaceComplex {
    t: Triangulation,
    faces: Vec<Face>,
    letters: Vec<String>,
    /// Rotation lists: index 0 is the puncture, 1..=n the boundary vertices.
    /// Boundary lists run from the edge toward the clockwise neighbour to
    /// the edge toward the anticlockwise neighbour.
    rotation: Vec<Vec<Dart>>,
    /// dart → (vertex, position in that vertex's rotation list).
    rot_pos: HashMap<Dart, (usize, usize)>,
    /// dart → interior face containing it as a side (None for the outer face).
    dart_face: HashMap<Dart, Option<FaceId>>,
    /// dart → face of the corner between the dart and its rotation successor.
    corner_face: HashMap<Dart, Option<FaceId>>,
    /// corner keys of each face, parallel to `Face::corners`.
    corner_keys: Vec<Vec<Dart>>,
}

impl FaceComplex {
    /// Traces the faces of a validated triangulation.
    pub fn new(t: Triangulation) -> Self {
        let n = t.n();
        let arcs = t.arcs();

        // Rotation lists. At a boundary vertex: edge toward the clockwise
        // neighbour, departing ends by increasing lifted length, the central
        // end, arriving ends by decreasing lifted length, edge toward the
        // anticlockwise neighbour. At the puncture: central ends by
        // descending foot.
        let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n + 1];
        let mut feet: Vec<(usize, usize)> = Vec::new();
        for v in 1..=n {
            let mut deps: Vec<(usize, Dart)> = Vec::new();
            let mut arrs: Vec<(usize, Dart)> = Vec::new();
            let mut central: Option<Dart> = None;
            for (idx, arc) in arcs.iter().enumerate() {
                match *arc {
                    Arc::Chord { from, to } => {
                        if from == v {
                            deps.push((gap(n, from, to), Dart::End { arc: idx, end: 0 }));
                        }
                        if to == v {
                            arrs.push((gap(n, from, to), Dart::End { arc: idx, end: 1 }));
                        }
                    }
                    Arc::Loop { at } if at == v => {
                        deps.push((n, Dart::End { arc: idx, end: 0 }));
                        arrs.push((n, Dart::End { arc: idx, end: 1 }));
                    }
                    Arc::Central { at } if at == v => {
                        central = Some(Dart::End { arc: idx, end: 0 });
                        feet.push((at, idx));
                    }
                    _ => {}
                }
            }
            deps.sort_by_key(|(len, _)| *len);
            arrs.sort_by_key(|(len, _)| std::cmp::Reverse(*len));
            debug_assert!(deps.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(arrs.windows(2).all(|w| w[0].0 > w[1].0));

            let mut list = vec![Dart::Boundary { at: v, to: next(n, v) }];
            list.extend(deps.into_iter().map(|(_, d)| d));
            list.extend(central);
            list.extend(arrs.into_iter().map(|(_, d)| d));
            list.push(Dart::Boundary { at: v, to: prev(n, v) });
            rotation[v] = list;
        }
        // At the puncture the darts sweep the feet in ascending order; this
        // is the same global orientation as the boundary rotations.
        feet.sort_by_key(|(at, _)| *at);
        rotation[PUNCTURE] = feet
            .into_iter()
            .map(|(_, idx)| Dart::End { arc: idx, end: 1 })
            .collect();

        let mut rot_pos: HashMap<Dart, (usize, usize)> = HashMap::new();
        for (v, list) in rotation.iter().enumerate() {
            for (p, d) in list.iter().enumerate() {
                let previous = rot_pos.insert(*d, (v, p));
                debug_assert!(previous.is_none(), "dart listed twice");
            }
        }

        let sigma = |d: Dart| -> Dart {
            let (v, p) = rot_pos[&d];
            let list = &rotation[v];
            list[(p + 1) % list.len()]
        };
        let sigma_inv = |d: Dart| -> Dart {
            let (v, p) = rot_pos[&d];
            let list = &rotation[v];
            list[(p + list.len() - 1) % list.len()]
        };
        let alpha = |d: Dart| -> Dart {
            match d {
                Dart::Boundary { at, to } => Dart::Boundary { at: to, to: at },
                Dart::End { arc, end } => Dart::End { arc, end: 1 - end },
            }
        };
        let vertex_of = |d: Dart| -> usize {
            match d {
                Dart::Boundary { at, .. } => at,
                Dart::End { arc, end } => match arcs[arc] {
                    Arc::Chord { from, to } => {
                        if end == 0 {
                            from
                        } else {
                            to
                        }
                    }
                    Arc::Loop { at } => at,
                    Arc::Central { at } => {
                        if end == 0 {
                            at
                        } else {
                            PUNCTURE
                        }
                    }
                },
            }
        };

        // Face tracing: orbits of "flip to the other end, then rotate".
        let mut all_darts: Vec<Dart> = rot_pos.keys().copied().collect();
        all_darts.sort();
        let mut orbit_of: HashMap<Dart, usize> = HashMap::new();
        let mut orbits: Vec<Vec<Dart>> = Vec::new();
        for &d in &all_darts {
            if orbit_of.contains_key(&d) {
                continue;
            }
            let id = orbits.len();
            let mut orbit = Vec::new();
            let mut e = d;
            loop {
                orbit_of.insert(e, id);
                orbit.push(e);
                e = sigma(alpha(e));
                if e == d {
                    break;
                }
            }
            orbits.push(orbit);
        }

        // The outer face is the orbit of clockwise boundary darts.
        let outer = orbit_of[&Dart::Boundary { at: 1, to: next(n, 1) }];
        assert_eq!(orbits[outer].len(), n, "outer face must have n sides");
        assert!(
            orbits[outer]
                .iter()
                .all(|d| matches!(d, Dart::Boundary { at, to } if *to == next(n, *at))),
            "outer face must consist of clockwise boundary darts"
        );

        let mut face_of_orbit: Vec<Option<FaceId>> = vec![None; orbits.len()];
        let mut faces: Vec<Face> = Vec::new();
        let mut corner_keys: Vec<Vec<Dart>> = Vec::new();
        for (oid, orbit) in orbits.iter().enumerate() {
            if oid == outer {
                continue;
            }
            assert_eq!(orbit.len(), 3, "interior faces are triangles");
            let keys: Vec<Dart> = orbit.iter().map(|&e| sigma_inv(e)).collect();
            let corners: Vec<usize> = keys.iter().map(|&k| vertex_of(k)).collect();
            let incidence: BTreeSet<usize> = corners.iter().copied().collect();
            let kind = match incidence.len() {
                3 => FaceKind::Ordinary,
                2 if incidence.contains(&PUNCTURE) => FaceKind::SelfFolded,
                2 => FaceKind::LoopType,
                _ => panic!("face incident with fewer than two vertices"),
            };
            face_of_orbit[oid] = Some(faces.len());
            faces.push(Face {
                corners,
                incidence,
                kind,
            });
            corner_keys.push(keys);
        }
        assert_eq!(faces.len(), n, "punctured disc has exactly n triangles");

        let mut dart_face: HashMap<Dart, Option<FaceId>> = HashMap::new();
        let mut corner_face: HashMap<Dart, Option<FaceId>> = HashMap::new();
        for &d in &all_darts {
            dart_face.insert(d, face_of_orbit[orbit_of[&d]]);
        }
        for &d in &all_darts {
            corner_face.insert(d, dart_face[&sigma(d)]);
        }

        let puncture_corners: usize = faces
            .iter()
            .map(|f| f.corners.iter().filter(|&&v| v == PUNCTURE).count())
            .sum();
        assert_eq!(
            puncture_corners,
            t.puncture_degree(),
            "puncture corner count must match central arc count"
        );

        let mut fc = Self {
            t,
            faces,
            letters: Vec::new(),
            rotation,
            rot_pos,
            dart_face,
            corner_face,
            corner_keys,
        };
        fc.letters = fc.assign_letters();
        fc
    }

    /// Letters the faces: the puncture-incident faces get the first letters
    /// in descending order of their central-arc key's foot, then a
    /// breadth-first walk of the dual graph hands out the rest, expanding
    /// each face's neighbours in the serialised order of the shared arcs.
    fn assign_letters(&self) -> Vec<String> {
        let letter = |k: usize| -> String {
            if k < 26 {
                char::from(b'A' + k as u8).to_string()
            } else {
                format!("#{k}")
            }
        };
        let mut assigned: Vec<Option<String>> = vec![None; self.faces.len()];
        let mut order: Vec<FaceId> = Vec::new();

        // Puncture-incident faces, keyed by the foot of the central arc whose
        // puncture-end dart lies on their boundary, in descending foot order.
        let mut zero_faces: Vec<(usize, FaceId)> = Vec::new();
        for (fid, keys) in self.corner_keys.iter().enumerate() {
            for (ci, &key) in keys.iter().enumerate() {
                if self.faces[fid].corners[ci] == PUNCTURE {
                    let Dart::End { arc, .. } = self.sigma(key) else {
                        panic!("puncture corner opened by a boundary dart")
                    };
                    let Arc::Central { at } = self.t.arcs()[arc] else {
                        panic!("puncture corner opened by a non-central arc")
                    };
                    zero_faces.push((at, fid));
                }
            }
        }
        zero_faces.sort_by_key(|(at, _)| std::cmp::Reverse(*at));
        let mut queue: std::collections::VecDeque<FaceId> = Default::default();
        for (_, fid) in zero_faces {
            if assigned[fid].is_none() {
                assigned[fid] = Some(letter(order.len()));
                order.push(fid);
                queue.push_back(fid);
            }
        }
        while let Some(fid) = queue.pop_front() {
            // Arcs bounding this face, by their serialised name.
            let mut side_arcs: Vec<(String, usize)> = Vec::new();
            for orbit_dart in self.sides_of(fid) {
                if let Dart::End { arc, .. } = orbit_dart {
                    side_arcs.push((self.t.arcs()[arc].to_string(), arc));
                }
            }
            side_arcs.sort();
            side_arcs.dedup();
            for (_, arc) in side_arcs {
                for end in 0..2u8 {
                    let d = Dart::End { arc, end };
                    if let Some(g) = self.dart_face[&d] {
                        if assigned[g].is_none() {
                            assigned[g] = Some(letter(order.len()));
                            order.push(g);
                            queue.push_back(g);
                        }
                    }
                }
            }
        }
        assigned
            .into_iter()
            .map(|l| l.expect("dual graph of a triangulation is connected"))
            .collect()
    }

    /// The darts forming the boundary of a face.
    fn sides_of(&self, fid: FaceId) -> Vec<Dart> {
        // A face's sides are the darts whose orbit is the face; recover them
        // from corner keys: the rotation successor of each corner key.
        self.corner_keys[fid]
            .iter()
            .map(|&k| self.sigma(k))
            .collect()
    }

    fn sigma(&self, d: Dart) -> Dart {
        let (v, p) = self.rot_pos[&d];
        let list = &self.rotation[v];
        list[(p + 1) % list.len()]
    }

    /// Number of boundary vertices.
    pub fn n(&self) -> usize {
        self.t.n()
    }

    /// The underlying triangulation.
    pub fn triangulation(&self) -> &Triangulation {
        &self.t
    }

    /// The interior faces.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Display letter of a face.
    pub fn letter(&self, f: FaceId) -> &str {
        &self.letters[f]
    }

    /// Face carrying the given letter.
    pub fn face_by_letter(&self, letter: &str) -> Option<FaceId> {
        self.letters.iter().position(|l| l == letter)
    }

    /// Number of faces incident with the puncture.
    pub fn d0(&self) -> usize {
        self.faces
            .iter()
            .filter(|f| f.incidence.contains(&PUNCTURE))
            .count()
    }

    /// Number of corners at a vertex (counting multiplicity).
    pub fn corner_degree(&self, v: usize) -> usize {
        self.faces
            .iter()
            .map(|f| f.corners.iter().filter(|&&c| c == v).count())
            .sum()
    }

    /// Corner degrees of the boundary vertices 1..=n.
    pub fn degrees(&self) -> Vec<usize> {
        (1..=self.n()).map(|v| self.corner_degree(v)).collect()
    }

    /// Classifies a rotation entry at boundary vertex `v`.
    fn end_kind(&self, v: usize, d: Dart) -> EndKind {
        let n = self.n();
        match d {
            Dart::Boundary { .. } => EndKind::BoundaryEdge,
            Dart::End { arc, end } => match self.t.arcs()[arc] {
                Arc::Chord { from, to } => {
                    let len = gap(n, from, to);
                    if end == 0 {
                        debug_assert_eq!(from, v);
                        EndKind::Departing(len)
                    } else {
                        debug_assert_eq!(to, v);
                        EndKind::Arriving(len)
                    }
                }
                Arc::Loop { .. } => {
                    if end == 0 {
                        EndKind::Departing(n)
                    } else {
                        EndKind::Arriving(n)
                    }
                }
                Arc::Central { .. } => EndKind::CentralFoot,
            },
        }
    }

    /// Position where a departing end of lifted length `len` would insert in
    /// the rotation at `v` (before an equal-length end).
    fn departure_slot(&self, v: usize, len: usize) -> usize {
        let list = &self.rotation[v];
        let mut idx = 1;
        while idx < list.len() {
            match self.end_kind(v, list[idx]) {
                EndKind::Departing(m) if m < len => idx += 1,
                _ => break,
            }
        }
        idx
    }

    /// Position where an arriving end of lifted length `len` would insert in
    /// the rotation at `v` (after an equal-length end).
    fn arrival_slot(&self, v: usize, len: usize) -> usize {
        let list = &self.rotation[v];
        let mut idx = 1;
        while idx + 1 < list.len() {
            match self.end_kind(v, list[idx]) {
                EndKind::Departing(_) | EndKind::CentralFoot => idx += 1,
                EndKind::Arriving(m) if m >= len => idx += 1,
                _ => break,
            }
        }
        idx
    }

    /// Walks a cutting arc with lift `[i, i + len]` through the complex and
    /// returns the regions of the corridor side.
    fn truncate(&self, i: usize, len: usize, cut: String) -> Subdivision {
        let n = self.n();
        let at = |q: usize| (q - 1) % n + 1;
        let j = at(i + len);

        let dep_idx = self.departure_slot(i, len);
        let arr_idx = self.arrival_slot(j, len);
        let start = self.corner_face[&self.rotation[i][dep_idx - 1]]
            .expect("cut departs inside an interior face");
        let terminal = self.corner_face[&self.rotation[j][arr_idx - 1]]
            .expect("cut arrives inside an interior face");

        // Walk the corridor, recording one fragment per face occurrence.
        let mut fragments: Vec<(FaceId, usize, usize)> = Vec::new();
        let mut current = start;
        let mut entry = i;
        for q in (i + 1)..(i + len) {
            let v = at(q);
            let list = &self.rotation[v];
            let crossed: Vec<bool> = list
                .iter()
                .map(|&d| match self.end_kind(v, d) {
                    EndKind::BoundaryEdge => false,
                    EndKind::Departing(m) => q + m > i + len,
                    EndKind::Arriving(m) => q < i + m,
                    EndKind::CentralFoot => true,
                })
                .collect();
            let hits: Vec<usize> = (0..list.len()).filter(|&p| crossed[p]).collect();
            assert!(
                hits.windows(2).all(|w| w[1] == w[0] + 1),
                "crossed ends must be consecutive in the rotation"
            );
            for &p in hits.iter().rev() {
                assert_eq!(
                    self.corner_face[&list[p]],
                    Some(current),
                    "walk must exit through the face it is in"
                );
                fragments.push((current, entry, v));
                current = self.corner_face[&list[p - 1]]
                    .expect("cut crosses into an interior face");
                entry = v;
            }
        }
        assert_eq!(current, terminal, "walk must end at the arrival corner");

        let crossings = fragments.len();
        let mut regions: Vec<Region> = Vec::new();
        let mut split_faces: BTreeSet<FaceId> = BTreeSet::new();
        if crossings > 0 {
            fragments.push((current, entry, j));
            split_faces = fragments.iter().map(|&(f, _, _)| f).collect();
            let mut seen: HashMap<FaceId, usize> = HashMap::new();
            for &(f, en, ex) in &fragments {
                let occ = seen.entry(f).or_insert(0);
                *occ += 1;
                let span: BTreeSet<usize> =
                    interval_vertices(n, en, ex).into_iter().collect();
                let incidence = self.faces[f]
                    .incidence
                    .intersection(&span)
                    .copied()
                    .collect();
                regions.push(Region {
                    label: self.letters[f].clone(),
                    parent: f,
                    occurrence: *occ,
                    incidence,
                });
            }
        }

        // Faces untouched by the walk lie entirely on one side.
        let corridor: BTreeSet<usize> = (i + 1..i + len).map(at).collect();
        let closed: BTreeSet<usize> = {
            let mut s = corridor.clone();
            s.insert(i);
            s.insert(j);
            s
        };
        for (f, face) in self.faces.iter().enumerate() {
            if split_faces.contains(&f) {
                continue;
            }
            let inside = face.corners.iter().any(|v| corridor.contains(v));
            let outside = face
                .corners
                .iter()
                .any(|&v| v == PUNCTURE || !closed.contains(&v));
            let retained = match (inside, outside) {
                (true, true) => panic!("uncrossed face has corners on both sides"),
                (true, false) => true,
                (false, true) => false,
                (false, false) => {
                    // Corners only at the cut's endpoints: decide by the
                    // angular sector relative to the cut's insertion slots.
                    assert!(len < n, "a loop cut leaves no face pinned to its base");
                    let mut verdicts = Vec::new();
                    for (ci, &v) in face.corners.iter().enumerate() {
                        let key = self.corner_keys[f][ci];
                        let pos = self.rot_pos[&key].1;
                        if v == i {
                            verdicts.push(pos < dep_idx);
                        }
                        if v == j {
                            verdicts.push(pos >= arr_idx);
                        }
                    }
                    assert!(
                        !verdicts.is_empty() && verdicts.windows(2).all(|w| w[0] == w[1]),
                        "endpoint sector tests must agree"
                    );
                    verdicts[0]
                }
            };
            if retained {
                regions.push(Region {
                    label: self.letters[f].clone(),
                    parent: f,
                    occurrence: 0,
                    incidence: face
                        .incidence
                        .iter()
                        .copied()
                        .filter(|v| *v != PUNCTURE)
                        .collect(),
                });
            }
        }
        regions.sort_by(|a, b| (&a.label, a.occurrence).cmp(&(&b.label, b.occurrence)));

        let vertices: Vec<usize> = (i + 1..i + len).map(at).collect();
        Subdivision {
            cut,
            vertices,
            regions,
            crossings,
            n,
        }
    }

    /// Cuts along the chord from `i` to `j` and decomposes the corridor side.
    pub fn truncate_chord(&self, i: usize, j: usize) -> Result<Subdivision> {
        let arc = Arc::Chord { from: i, to: j };
        arc.validate(self.n())?;
        let sub = self.truncate(i, gap(self.n(), i, j), arc.to_string());
        debug_assert_eq!(
            sub.crossings == 0,
            self.t.contains(&arc),
            "a chord crosses nothing exactly when it belongs to the triangulation"
        );
        Ok(sub)
    }

    /// Cuts along the loop based at `i` and decomposes the outer side, which
    /// carries all n boundary vertices.
    pub fn truncate_loop(&self, i: usize) -> Result<Subdivision> {
        let arc = Arc::Loop { at: i };
        arc.validate(self.n())?;
        let sub = self.truncate(i, self.n(), arc.to_string());
        debug_assert_eq!(sub.crossings == 0, self.t.contains(&arc));
        Ok(sub)
    }

    /// The central feet flanking vertex `i`: the nearest foot at or before
    /// `i` (anticlockwise) and the nearest foot strictly after it.
    fn flanking_feet(&self, i: usize) -> (usize, usize) {
        let n = self.n();
        let feet: BTreeSet<usize> = self.t.central_feet().into_iter().collect();
        let back = (0..n)
            .map(|s| (i + n - 1 - s) % n + 1)
            .find(|v| feet.contains(v))
            .expect("at least one central arc");
        let fwd = (1..=n)
            .map(|s| (i + s - 1) % n + 1)
            .find(|v| feet.contains(v))
            .expect("at least one central arc");
        (back, fwd)
    }

    /// Unfolds a d0 = 1 disc along its unique central arc, duplicating the
    /// foot `k` into `k` (kept on the clockwise side, adjacent to k+1) and
    /// `k' = n + k` (adjacent to the puncture).
    fn unfold(&self, anchor: usize) -> PolygonCut {
        let n = self.n();
        let feet = self.t.central_feet();
        assert_eq!(feet.len(), 1, "unfolding needs a unique central arc");
        let k = feet[0];
        let central_idx = self
            .t
            .arcs()
            .iter()
            .position(|a| *a == Arc::Central { at: k })
            .expect("central arc present");
        let central_pos = self.rot_pos[&Dart::End { arc: central_idx, end: 0 }].1;

        let mut cycle = interval_vertices(n, k, prev(n, k));
        cycle.push(n + k);
        cycle.push(PUNCTURE);

        let faces = (0..self.faces.len())
            .map(|f| {
                let mapped: BTreeSet<usize> = self.faces[f]
                    .corners
                    .iter()
                    .enumerate()
                    .map(|(ci, &v)| {
                        if v == k {
                            let pos = self.rot_pos[&self.corner_keys[f][ci]].1;
                            if pos < central_pos {
                                k
                            } else {
                                n + k
                            }
                        } else {
                            v
                        }
                    })
                    .collect();
                (self.letters[f].clone(), mapped)
            })
            .collect::<Vec<_>>();
        assert_eq!(faces.len(), cycle.len() - 2, "unfolded polygon face count");
        PolygonCut {
            kind: PolygonKind::P,
            anchor,
            cycle,
            faces,
            n,
        }
    }

    /// The polygon cuts P(i) and Q(i). With d0 ≥ 2, P(i) is the sector
    /// between the flanking central arcs containing `i` and Q(i) its
    /// complement; with d0 = 1 the disc is unfolded and Q(i) is absent.
    pub fn cut_p_q(&self, i: usize) -> Result<(PolygonCut, Option<PolygonCut>)> {
        let n = self.n();
        if !(1..=n).contains(&i) {
            return Err(Error::InvalidLabel(format!(
                "vertex {i} must lie in 1..={n}"
            )));
        }
        if self.d0() == 1 {
            return Ok((self.unfold(i), None));
        }
        let (k, j) = self.flanking_feet(i);
        let sector: BTreeSet<usize> = interval_vertices(n, k, j).into_iter().collect();

        // The puncture-incident face of the sector is the one carrying the
        // puncture-end dart of the central arc at j on its boundary.
        let central_j = self
            .t
            .arcs()
            .iter()
            .position(|a| *a == Arc::Central { at: j })
            .expect("flanking foot carries a central arc");
        let p_zero_face = self.dart_face[&Dart::End { arc: central_j, end: 1 }]
            .expect("central arcs bound interior faces");

        let mut p_ids: Vec<FaceId> = Vec::new();
        let mut q_ids: Vec<FaceId> = Vec::new();
        for (f, face) in self.faces.iter().enumerate() {
            let in_p = f == p_zero_face
                || (!face.incidence.contains(&PUNCTURE)
                    && face.incidence.iter().all(|v| sector.contains(v)));
            if in_p {
                p_ids.push(f);
            } else {
                q_ids.push(f);
            }
        }
        let complement: BTreeSet<usize> = interval_vertices(n, j, k).into_iter().collect();
        for &f in &q_ids {
            assert!(
                self.faces[f]
                    .incidence
                    .iter()
                    .all(|&v| v == PUNCTURE || complement.contains(&v)),
                "complement faces stay inside the complementary sector"
            );
        }

        let by_letter = |ids: &[FaceId]| -> Vec<(String, BTreeSet<usize>)> {
            let mut v: Vec<(String, BTreeSet<usize>)> = ids
                .iter()
                .map(|&f| (self.letters[f].clone(), self.faces[f].incidence.clone()))
                .collect();
            v.sort();
            v
        };

        let mut cycle_p = interval_vertices(n, k, j);
        cycle_p.push(PUNCTURE);
        let mut cycle_q = interval_vertices(n, j, k);
        cycle_q.push(PUNCTURE);
        let p = PolygonCut {
            kind: PolygonKind::P,
            anchor: i,
            cycle: cycle_p,
            faces: by_letter(&p_ids),
            n,
        };
        let q = PolygonCut {
            kind: PolygonKind::Q,
            anchor: i,
            cycle: cycle_q,
            faces: by_letter(&q_ids),
            n,
        };
        assert_eq!(p.faces.len(), p.cycle.len() - 2, "P(i) face count");
        assert_eq!(q.faces.len(), q.cycle.len() - 2, "Q(i) face count");
        Ok((p, Some(q)))
    }
}
