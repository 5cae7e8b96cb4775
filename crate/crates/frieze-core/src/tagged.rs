//! Tagged arcs and tagged triangulations.
//!
//! In the tagged model, loops disappear: every arc ending at the puncture
//! carries a tag, plain (`central+`) or notched (`central-`), and a notched
//! central arc stands in for the loop at the same vertex. Tagged
//! triangulations are in bijection with frieze patterns: those without
//! notches match plain triangulations of puncture degree at least two,
//! a single notch matches a plain triangulation containing a loop, and an
//! entirely notched one is the image of its unnotched mirror under the
//! entry swap `iota`.

use std::fmt;
use std::str::FromStr;

use crate::complex::FaceComplex;
use crate::error::{Error, Result};
use crate::frieze::{build_frieze, iota, FriezePatternD};
use crate::surface::{compatible, Arc, Triangulation};

/// An arc of the tagged model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaggedArc {
    /// A chord between boundary vertices, as in the plain model.
    PlainChord { from: usize, to: usize },
    /// A central arc tagged plain.
    CentralPlain { at: usize },
    /// A central arc tagged notched.
    CentralNotched { at: usize },
}

impl TaggedArc {
    /// Checks vertex ranges, as for plain arcs.
    pub fn validate(&self, n: usize) -> Result<()> {
        self.untagged().validate(n)
    }

    /// The plain arc realising this tagged arc: a notched central arc
    /// stands in for the loop at its vertex.
    pub fn untagged(&self) -> Arc {
        match *self {
            TaggedArc::PlainChord { from, to } => Arc::Chord { from, to },
            TaggedArc::CentralPlain { at } => Arc::Central { at },
            TaggedArc::CentralNotched { at } => Arc::Loop { at },
        }
    }

    /// Whether this is a central arc with a notch.
    pub fn is_notched(&self) -> bool {
        matches!(self, TaggedArc::CentralNotched { .. })
    }

    /// Whether this arc ends at the puncture.
    pub fn is_central(&self) -> bool {
        !matches!(self, TaggedArc::PlainChord { .. })
    }
}

impl fmt::Display for TaggedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaggedArc::PlainChord { from, to } => write!(f, "chord {from} {to}"),
            TaggedArc::CentralPlain { at } => write!(f, "central+ {at}"),
            TaggedArc::CentralNotched { at } => write!(f, "central- {at}"),
        }
    }
}

impl FromStr for TaggedArc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::Parse("empty tagged arc".into()))?;
        let mut number = |what: &str| -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} in '{s}'")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} in '{s}'")))
        };
        let arc = match kind {
            "chord" => TaggedArc::PlainChord {
                from: number("start vertex")?,
                to: number("end vertex")?,
            },
            "central+" | "central" => TaggedArc::CentralPlain {
                at: number("vertex")?,
            },
            "central-" => TaggedArc::CentralNotched {
                at: number("vertex")?,
            },
            other => {
                return Err(Error::Parse(format!("unknown tagged arc kind '{other}'")))
            }
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        Ok(arc)
    }
}

/// Tagged compatibility. Central arcs at the same vertex are compatible
/// regardless of tags, equal tags never clash, and differently tagged
/// central arcs at different vertices do. Everything else reduces to plain
/// compatibility through the loop realisation.
pub fn tagged_compatible(n: usize, a: &TaggedArc, b: &TaggedArc) -> bool {
    use TaggedArc::*;
    match (a, b) {
        (CentralPlain { .. }, CentralPlain { .. })
        | (CentralNotched { .. }, CentralNotched { .. }) => true,
        (CentralPlain { at: i }, CentralNotched { at: j })
        | (CentralNotched { at: i }, CentralPlain { at: j }) => i == j,
        _ => compatible(n, &a.untagged(), &b.untagged()),
    }
}

/// All n^2 tagged arcs of the disc with n boundary vertices.
pub fn tagged_universe(n: usize) -> Vec<TaggedArc> {
    let mut out = Vec::with_capacity(n * n);
    for from in 1..=n {
        for step in 2..n {
            out.push(TaggedArc::PlainChord {
                from,
                to: (from + step - 1) % n + 1,
            });
        }
    }
    for at in 1..=n {
        out.push(TaggedArc::CentralPlain { at });
        out.push(TaggedArc::CentralNotched { at });
    }
    out
}

/// A maximal set of pairwise compatible tagged arcs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TaggedTriangulation {
    n: usize,
    arcs: Vec<TaggedArc>,
}

impl TaggedTriangulation {
    /// Validates a tagged triangulation: n distinct pairwise compatible
    /// arcs to which no further tagged arc can be added.
    pub fn new(n: usize, mut arcs: Vec<TaggedArc>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidTriangulation(format!(
                "n = {n} must be at least 3"
            )));
        }
        for arc in &arcs {
            arc.validate(n)?;
        }
        arcs.sort();
        if arcs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTriangulation("duplicate tagged arc".into()));
        }
        if arcs.len() != n {
            return Err(Error::InvalidTriangulation(format!(
                "a tagged triangulation has {n} arcs, found {}",
                arcs.len()
            )));
        }
        for (k, a) in arcs.iter().enumerate() {
            for b in &arcs[k + 1..] {
                if !tagged_compatible(n, a, b) {
                    return Err(Error::InvalidTriangulation(format!(
                        "tagged arcs {a} and {b} are incompatible"
                    )));
                }
            }
        }
        for candidate in tagged_universe(n) {
            if !arcs.contains(&candidate)
                && arcs.iter().all(|a| tagged_compatible(n, a, &candidate))
            {
                return Err(Error::InvalidTriangulation(format!(
                    "not maximal: {candidate} can still be added"
                )));
            }
        }
        Ok(Self { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[TaggedArc] {
        &self.arcs
    }

    pub fn contains(&self, arc: &TaggedArc) -> bool {
        self.arcs.binary_search(arc).is_ok()
    }

    /// The number of notched central arcs.
    pub fn notch_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.is_notched()).count()
    }

    /// The tagged triangulation corresponding to a plain one: loops become
    /// notched central arcs.
    pub fn of_plain(t: &Triangulation) -> Self {
        let arcs = t
            .arcs()
            .iter()
            .map(|a| match *a {
                Arc::Chord { from, to } => TaggedArc::PlainChord { from, to },
                Arc::Central { at } => TaggedArc::CentralPlain { at },
                Arc::Loop { at } => TaggedArc::CentralNotched { at },
            })
            .collect();
        Self::new(t.n(), arcs).expect("plain triangulations map to tagged ones")
    }
}

impl fmt::Display for TaggedTriangulation {
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

/// All tagged triangulations with n boundary vertices.
pub fn enumerate_tagged(n: usize) -> Vec<TaggedTriangulation> {
    let universe = tagged_universe(n);
    let mut out = Vec::new();
    let mut chosen: Vec<TaggedArc> = Vec::new();
    fn go(
        n: usize,
        universe: &[TaggedArc],
        start: usize,
        chosen: &mut Vec<TaggedArc>,
        out: &mut Vec<TaggedTriangulation>,
    ) {
        if chosen.len() == n {
            if let Ok(t) = TaggedTriangulation::new(n, chosen.clone()) {
                out.push(t);
            }
            return;
        }
        for k in start..universe.len() {
            if chosen
                .iter()
                .all(|a| tagged_compatible(n, a, &universe[k]))
            {
                chosen.push(universe[k]);
                go(n, universe, k + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    go(n, &universe, 0, &mut chosen, &mut out);
    out
}

/// Removes `arc` and inserts the unique other tagged arc completing a
/// triangulation. Returns the new triangulation and the new arc.
pub fn flip(
    t: &TaggedTriangulation,
    arc: &TaggedArc,
) -> Result<(TaggedTriangulation, TaggedArc)> {
    if !t.contains(arc) {
        return Err(Error::InvalidArc(format!("{arc} is not in the triangulation")));
    }
    let rest: Vec<TaggedArc> = t.arcs().iter().copied().filter(|a| a != arc).collect();
    let mut replacement: Option<(TaggedTriangulation, TaggedArc)> = None;
    for candidate in tagged_universe(t.n()) {
        if candidate == *arc
            || rest.contains(&candidate)
            || !rest.iter().all(|a| tagged_compatible(t.n(), a, &candidate))
        {
            continue;
        }
        let mut arcs = rest.clone();
        arcs.push(candidate);
        if let Ok(new_t) = TaggedTriangulation::new(t.n(), arcs) {
            assert!(
                replacement.is_none(),
                "flip replacement must be unique, found {} and {}",
                replacement.unwrap().1,
                candidate
            );
            replacement = Some((new_t, candidate));
        }
    }
    replacement.ok_or_else(|| {
        Error::InvalidTriangulation(format!("no tagged arc can replace {arc}"))
    })
}

/// The frieze pattern of a tagged triangulation. With at most one notch
/// the triangulation realises a plain one directly; an entirely notched
/// triangulation is handled through its unnotched mirror and the entry
/// swap.
pub fn frieze_of_tagged(t: &TaggedTriangulation) -> Result<FriezePatternD> {
    let notches = t.notch_count();
    if notches <= 1 {
        let arcs: Vec<Arc> = t.arcs().iter().map(TaggedArc::untagged).collect();
        let plain = Triangulation::new(t.n(), arcs)?;
        build_frieze(&FaceComplex::new(plain))
    } else {
        let centrals = t.arcs().iter().filter(|a| a.is_central()).count();
        assert_eq!(
            notches, centrals,
            "two or more notches force every central arc to be notched"
        );
        let arcs: Vec<Arc> = t
            .arcs()
            .iter()
            .map(|a| match *a {
                TaggedArc::PlainChord { from, to } => Arc::Chord { from, to },
                TaggedArc::CentralNotched { at } => Arc::Central { at },
                TaggedArc::CentralPlain { at } => Arc::Central { at },
            })
            .collect();
        let mirror = Triangulation::new(t.n(), arcs)?;
        Ok(iota(&build_frieze(&FaceComplex::new(mirror))?))
    }
}
