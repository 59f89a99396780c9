//! Weighted quiver polyhedra: the core data model and the defining axioms.
//!
//! A quiver polyhedron is a strongly connected quiver together with two
//! families of cyclic face paths (positive and negative) and a positive
//! integer weight per face. Face cycles are stored in composition order:
//! `cycle[0]` is the leftmost arrow (applied last), and consecutive arrows
//! compose, `t(cycle[i]) = h(cycle[i+1])` cyclically. The dual picture is a
//! dimer model on the underlying surface; weights are orbifold data (cone
//! points at face centers).

use crate::error::{Error, Result};
use crate::rat::{rat_int, Rat};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Arrow indices in composition order.
    pub cycle: Vec<usize>,
    pub weight: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceRef {
    pub sign: Sign,
    pub index: usize,
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverPolyhedron {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub faces_plus: Vec<Face>,
    pub faces_minus: Vec<Face>,
}

/// A path in the path algebra, in composition order (`arrows[0]` applied
/// last). `tail` disambiguates the trivial path at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub arrows: Vec<usize>,
    pub tail: usize,
}

impl Path {
    pub fn trivial(vertex: usize) -> Path {
        Path {
            arrows: Vec::new(),
            tail: vertex,
        }
    }

    pub fn from_arrows(qp: &QuiverPolyhedron, arrows: Vec<usize>) -> Path {
        let tail = qp.arrows[*arrows.last().expect("nonempty")].tail;
        Path { arrows, tail }
    }

    pub fn head(&self, qp: &QuiverPolyhedron) -> usize {
        match self.arrows.first() {
            Some(&a) => qp.arrows[a].head,
            None => self.tail,
        }
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Path, qp: &QuiverPolyhedron) -> Path {
        debug_assert_eq!(self.tail(), other.head(qp));
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path {
            arrows,
            tail: other.tail,
        }
    }

    pub fn display<'a>(&'a self, qp: &'a QuiverPolyhedron) -> PathDisplay<'a> {
        PathDisplay { path: self, qp }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    qp: &'a QuiverPolyhedron,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.arrows.is_empty() {
            return write!(f, "e_{}", self.qp.vertices[self.path.tail]);
        }
        let names: Vec<&str> = self
            .path
            .arrows
            .iter()
            .map(|&a| self.qp.arrows[a].name.as_str())
            .collect();
        f.write_str(&names.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An arrow appears `count` times (instead of exactly once) in the
    /// face family of the given sign.
    ArrowFaceCount {
        arrow: usize,
        sign: Sign,
        count: usize,
    },
    /// Consecutive arrows of a face cycle do not compose.
    FaceNotComposable { face: FaceRef, position: usize },
    /// The link of the vertex is not a single cycle, so the polyhedron is
    /// not a surface at this vertex.
    VertexLinkBroken { vertex: usize },
    NotStronglyConnected,
    /// Face weight violates E|c| > 2.
    FaceTooLight { face: FaceRef },
    EmptyQuiver,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArrowFaceCount { arrow, sign, count } => write!(
                f,
                "arrow #{arrow} occurs {count} times in the {sign} face family (expected 1)"
            ),
            Violation::FaceNotComposable { face, position } => {
                write!(f, "face {face} does not compose at position {position}")
            }
            Violation::VertexLinkBroken { vertex } => {
                write!(f, "link of vertex #{vertex} is not a single cycle")
            }
            Violation::NotStronglyConnected => write!(f, "quiver is not strongly connected"),
            Violation::FaceTooLight { face } => {
                write!(f, "face {face} violates weight * length > 2")
            }
            Violation::EmptyQuiver => write!(f, "quiver has no vertices or no arrows"),
        }
    }
}

impl QuiverPolyhedron {
    pub fn face(&self, r: FaceRef) -> &Face {
        match r.sign {
            Sign::Plus => &self.faces_plus[r.index],
            Sign::Minus => &self.faces_minus[r.index],
        }
    }

    pub fn face_refs(&self) -> Vec<FaceRef> {
        let plus = (0..self.faces_plus.len()).map(|index| FaceRef {
            sign: Sign::Plus,
            index,
        });
        let minus = (0..self.faces_minus.len()).map(|index| FaceRef {
            sign: Sign::Minus,
            index,
        });
        plus.chain(minus).collect()
    }

    pub fn is_unweighted(&self) -> bool {
        self.faces_plus
            .iter()
            .chain(&self.faces_minus)
            .all(|f| f.weight == 1)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Structural sanity: all indices in range, names distinct. Violations
    /// of the polyhedron axioms are reported by `validate` instead.
    pub fn check_refs(&self) -> Result<()> {
        for a in &self.arrows {
            if a.tail >= self.vertices.len() || a.head >= self.vertices.len() {
                return Err(Error::Input(format!(
                    "arrow `{}` references a missing vertex",
                    a.name
                )));
            }
        }
        for r in self.face_refs() {
            let face = self.face(r);
            if face.cycle.is_empty() {
                return Err(Error::Input(format!("face {r} has an empty cycle")));
            }
            if face.weight == 0 {
                return Err(Error::Input(format!("face {r} has weight 0")));
            }
            for &a in &face.cycle {
                if a >= self.arrows.len() {
                    return Err(Error::Input(format!("face {r} references a missing arrow")));
                }
            }
        }
        let mut names: Vec<&str> = self.vertices.iter().map(|s| s.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("duplicate vertex name".into()));
        }
        let mut names: Vec<&str> = self.arrows.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("duplicate arrow name".into()));
        }
        Ok(())
    }

    /// Check the polyhedron axioms; an empty list means valid. Assumes
    /// `check_refs` passed. The order of violations is deterministic.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vertices.is_empty() || self.arrows.is_empty() {
            out.push(Violation::EmptyQuiver);
            return out;
        }

        // Composability of face cycles.
        for r in self.face_refs() {
            let c = &self.face(r).cycle;
            for i in 0..c.len() {
                let cur = &self.arrows[c[i]];
                let next = &self.arrows[c[(i + 1) % c.len()]];
                if cur.tail != next.head {
                    out.push(Violation::FaceNotComposable {
                        face: r,
                        position: i,
                    });
                }
            }
        }

        // PO: every arrow exactly once per sign family.
        for sign in [Sign::Plus, Sign::Minus] {
            let faces = match sign {
                Sign::Plus => &self.faces_plus,
                Sign::Minus => &self.faces_minus,
            };
            let mut count = vec![0usize; self.arrows.len()];
            for f in faces {
                for &a in &f.cycle {
                    count[a] += 1;
                }
            }
            for (arrow, &c) in count.iter().enumerate() {
                if c != 1 {
                    out.push(Violation::ArrowFaceCount {
                        arrow,
                        sign,
                        count: c,
                    });
                }
            }
        }

        // Weight axiom E|c| > 2.
        for r in self.face_refs() {
            let f = self.face(r);
            if (f.weight as usize) * f.cycle.len() <= 2 {
                out.push(Violation::FaceTooLight { face: r });
            }
        }

        // The remaining axioms need PO and composability to even make sense.
        if !out.is_empty() {
            return out;
        }

        if !self.strongly_connected() {
            out.push(Violation::NotStronglyConnected);
        }

        // PM: the link of each vertex is a single cycle. Link nodes are the
        // arrow-end incidences at the vertex; every face corner (a pair of
        // consecutive arrows in a base cycle) joins the tail-end of the
        // earlier arrow to the head-end of the later one. PO makes this
        // graph 2-regular, so it suffices to count connected components.
        for v in 0..self.vertices.len() {
            if !self.vertex_link_is_cycle(v) {
                out.push(Violation::VertexLinkBroken { vertex: v });
            }
        }

        out
    }

    fn strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for a in &self.arrows {
            fwd[a.tail].push(a.head);
            bwd[a.head].push(a.tail);
        }
        let reach = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        reach(&fwd).iter().all(|&s| s) && reach(&bwd).iter().all(|&s| s)
    }

    fn vertex_link_is_cycle(&self, v: usize) -> bool {
        // Incidence ids: 2a = tail end of arrow a, 2a+1 = head end.
        let mut nodes = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if a.tail == v {
                nodes.push(2 * i);
            }
            if a.head == v {
                nodes.push(2 * i + 1);
            }
        }
        if nodes.is_empty() {
            return false;
        }
        let mut dsu = UnionFind::new(2 * self.arrows.len());
        let mut degree: BTreeMap<usize, usize> = nodes.iter().map(|&n| (n, 0)).collect();
        for r in self.face_refs() {
            let c = &self.face(r).cycle;
            for i in 0..c.len() {
                let later = c[i]; // applied after `earlier`
                let earlier = c[(i + 1) % c.len()];
                if self.arrows[later].tail == v {
                    dsu.union(2 * later, 2 * earlier + 1);
                    *degree.get_mut(&(2 * later)).unwrap() += 1;
                    *degree.get_mut(&(2 * earlier + 1)).unwrap() += 1;
                }
            }
        }
        // 2-regular (guaranteed by PO) and connected means a single cycle.
        if degree.values().any(|&d| d != 2) {
            return false;
        }
        let root = dsu.find(nodes[0]);
        nodes.iter().all(|&n| dsu.find(n) == root)
    }

    /// Orbifold Euler characteristic: #Q0 - #Q1 + sum over faces of 1/E.
    pub fn euler_characteristic(&self) -> Rat {
        let mut chi = rat_int(self.vertices.len() as i64) - rat_int(self.arrows.len() as i64);
        for r in self.face_refs() {
            chi += Rat::new(1.into(), (self.face(r).weight as i64).into());
        }
        chi
    }

    /// Genus of the underlying surface (weights ignored) and the sorted
    /// list of orbifold point orders (face weights > 1).
    pub fn surface_topology(&self) -> Topology {
        let v = self.vertices.len() as i64;
        let a = self.arrows.len() as i64;
        let f = (self.faces_plus.len() + self.faces_minus.len()) as i64;
        let chi_top = v - a + f;
        assert!(
            chi_top <= 2 && (2 - chi_top) % 2 == 0,
            "not a closed orientable surface (validate first)"
        );
        let mut orbifold_orders: Vec<u32> = self
            .face_refs()
            .iter()
            .map(|&r| self.face(r).weight)
            .filter(|&w| w > 1)
            .collect();
        orbifold_orders.sort_unstable();
        Topology {
            genus: ((2 - chi_top) / 2) as u32,
            orbifold_orders,
        }
    }

    /// Terms of the superpotential W = sum_+ c^E/E - sum_- c^E/E.
    pub fn superpotential(&self) -> Vec<SuperpotentialTerm> {
        self.face_refs()
            .into_iter()
            .map(|r| {
                let f = self.face(r);
                SuperpotentialTerm {
                    face: r,
                    coefficient: match r.sign {
                        Sign::Plus => Rat::new(1.into(), (f.weight as i64).into()),
                        Sign::Minus => -Rat::new(1.into(), (f.weight as i64).into()),
                    },
                }
            })
            .collect()
    }

    /// Jacobi relations: for each arrow a, the cyclic derivative of W
    /// vanishes, giving lhs = rhs with lhs from the positive face of a and
    /// rhs from the negative face. Both are paths h(a) -> t(a) of length
    /// E|c| - 1, obtained by rotating the powered cycle so a is leftmost
    /// and deleting it. Requires a valid polyhedron.
    pub fn jacobi_relations(&self) -> Vec<Relation> {
        let inc = Incidence::new(self).expect("valid polyhedron");
        (0..self.arrows.len())
            .map(|a| Relation {
                arrow: a,
                lhs: self.face_derivative(inc.face_of(a, Sign::Plus), a),
                rhs: self.face_derivative(inc.face_of(a, Sign::Minus), a),
            })
            .collect()
    }

    /// d/da of c^E for the face containing a: rotate so a comes first,
    /// raise to the E-th power, drop the leading a.
    fn face_derivative(&self, r: FaceRef, a: usize) -> Path {
        let f = self.face(r);
        let pos = f.cycle.iter().position(|&x| x == a).expect("PO");
        let mut word = Vec::with_capacity(f.cycle.len() * f.weight as usize);
        for rep in 0..f.weight as usize {
            for i in 0..f.cycle.len() {
                if rep == 0 && i == 0 {
                    continue; // deleted occurrence of a
                }
                word.push(f.cycle[(pos + i) % f.cycle.len()]);
            }
        }
        if word.is_empty() {
            // E|c| = 1 cannot occur for a valid polyhedron (weight axiom).
            unreachable!("face of powered length 1");
        }
        Path::from_arrows(self, word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub genus: u32,
    pub orbifold_orders: Vec<u32>,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {}", self.genus)?;
        if !self.orbifold_orders.is_empty() {
            let s: Vec<String> = self.orbifold_orders.iter().map(u32::to_string).collect();
            write!(f, " orbifold {{{}}}", s.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpotentialTerm {
    pub face: FaceRef,
    pub coefficient: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arrow: usize,
    pub lhs: Path,
    pub rhs: Path,
}

/// Per-arrow face membership, valid once PO holds.
pub struct Incidence {
    plus: Vec<(usize, usize)>,  // (face index, position in cycle)
    minus: Vec<(usize, usize)>,
}

impl Incidence {
    pub fn new(qp: &QuiverPolyhedron) -> Result<Incidence> {
        let build = |faces: &[Face]| -> Result<Vec<(usize, usize)>> {
            let mut out = vec![None; qp.arrows.len()];
            for (fi, f) in faces.iter().enumerate() {
                for (pos, &a) in f.cycle.iter().enumerate() {
                    if out[a].replace((fi, pos)).is_some() {
                        return Err(Error::Invalid(format!(
                            "arrow #{a} occurs twice in one face family"
                        )));
                    }
                }
            }
            out.into_iter()
                .enumerate()
                .map(|(a, slot)| {
                    slot.ok_or_else(|| Error::Invalid(format!("arrow #{a} occurs in no face")))
                })
                .collect()
        };
        Ok(Incidence {
            plus: build(&qp.faces_plus)?,
            minus: build(&qp.faces_minus)?,
        })
    }

    pub fn face_of(&self, arrow: usize, sign: Sign) -> FaceRef {
        let (index, _) = match sign {
            Sign::Plus => self.plus[arrow],
            Sign::Minus => self.minus[arrow],
        };
        FaceRef { sign, index }
    }

    pub fn position(&self, arrow: usize, sign: Sign) -> usize {
        match sign {
            Sign::Plus => self.plus[arrow].1,
            Sign::Minus => self.minus[arrow].1,
        }
    }

    /// The arrow applied immediately after `a` when traversing its face of
    /// the given sign (the previous entry of the stored cycle).
    pub fn applied_after(&self, qp: &QuiverPolyhedron, arrow: usize, sign: Sign) -> usize {
        let r = self.face_of(arrow, sign);
        let c = &qp.face(r).cycle;
        let pos = self.position(arrow, sign);
        c[(pos + c.len() - 1) % c.len()]
    }

    /// The arrow applied immediately before `a` in its face of the given
    /// sign (the next entry of the stored cycle).
    pub fn applied_before(&self, qp: &QuiverPolyhedron, arrow: usize, sign: Sign) -> usize {
        let r = self.face_of(arrow, sign);
        let c = &qp.face(r).cycle;
        let pos = self.position(arrow, sign);
        c[(pos + 1) % c.len()]
    }
}

/// Build a polyhedron from a pair of face-cycle decompositions over the
/// arrow set 0..n (each family a set of disjoint cycles covering every
/// arrow, in composition order). Vertices are recovered by identifying
/// the tail of each arrow with the head of the arrow that follows it in
/// both of its faces. The result satisfies PO and composability by
/// construction; the other axioms still need `validate`.
pub fn from_permutation_pair(
    n: usize,
    plus: &[Vec<usize>],
    minus: &[Vec<usize>],
) -> QuiverPolyhedron {
    // End ids: 2a = tail of arrow a, 2a+1 = head.
    let mut dsu = UnionFind::new(2 * n);
    for family in [plus, minus] {
        for cycle in family {
            for i in 0..cycle.len() {
                let cur = cycle[i];
                let next = cycle[(i + 1) % cycle.len()];
                dsu.union(2 * cur, 2 * next + 1); // t(cur) = h(next)
            }
        }
    }
    let mut vertex_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut id_of_end = |dsu: &mut UnionFind, end: usize, vertices: &mut Vec<String>| {
        let root = dsu.find(end);
        *vertex_of_root.entry(root).or_insert_with(|| {
            vertices.push(format!("v{}", vertices.len()));
            vertices.len() - 1
        })
    };
    let mut arrows = Vec::with_capacity(n);
    for a in 0..n {
        let tail = id_of_end(&mut dsu, 2 * a, &mut vertices);
        let head = id_of_end(&mut dsu, 2 * a + 1, &mut vertices);
        arrows.push(Arrow {
            name: format!("a{a}"),
            tail,
            head,
        });
    }
    let mk = |family: &[Vec<usize>]| {
        family
            .iter()
            .map(|cycle| Face {
                cycle: cycle.clone(),
                weight: 1,
            })
            .collect()
    };
    QuiverPolyhedron {
        vertices,
        arrows,
        faces_plus: mk(plus),
        faces_minus: mk(minus),
    }
}

/// Lexicographically least rotation of a cyclic word.
pub fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best = 0;
    for s in 1..n {
        for i in 0..n {
            let a = cycle[(s + i) % n];
            let b = cycle[(best + i) % n];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    best = s;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    (0..n).map(|i| cycle[(best + i) % n]).collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfix;
    use crate::rat::rat;

    #[test]
    fn hex1_is_valid_torus() {
        let qp = testfix::hex1();
        qp.check_refs().unwrap();
        assert!(qp.validate().is_empty());
        assert_eq!(qp.euler_characteristic(), rat_int(0));
        let topo = qp.surface_topology();
        assert_eq!(topo.genus, 1);
        assert!(topo.orbifold_orders.is_empty());
    }

    #[test]
    fn conifold_is_valid_torus() {
        let qp = testfix::conifold();
        assert!(qp.validate().is_empty());
        assert_eq!(qp.euler_characteristic(), rat_int(0));
        assert_eq!(qp.surface_topology().genus, 1);
    }

    #[test]
    fn sphere_xyz_is_valid_weighted_sphere() {
        let qp = testfix::sphere_xyz();
        assert!(qp.validate().is_empty());
        // chi = 1 - 3 + (3 * 1/3 + 1) = 0
        assert_eq!(qp.euler_characteristic(), rat_int(0));
        let topo = qp.surface_topology();
        assert_eq!(topo.genus, 0);
        assert_eq!(topo.orbifold_orders, vec![3, 3, 3]);
    }

    #[test]
    fn antiprism_characteristics() {
        let qp = testfix::antiprism(false);
        assert!(qp.validate().is_empty());
        assert_eq!(qp.euler_characteristic(), rat_int(2));
        assert_eq!(qp.surface_topology().genus, 0);

        let w = testfix::antiprism(true);
        assert!(w.validate().is_empty());
        assert_eq!(w.euler_characteristic(), rat(-16, 3));
    }

    #[test]
    fn po_violation_detected() {
        let mut qp = testfix::hex1();
        // x twice in the positive face, y dropped.
        qp.faces_plus[0].cycle = vec![0, 0, 2];
        let v = qp.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::ArrowFaceCount { arrow: 0, sign: Sign::Plus, count: 2 })));
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::ArrowFaceCount { arrow: 1, sign: Sign::Plus, count: 0 })));
    }

    #[test]
    fn composability_violation_detected() {
        let mut qp = testfix::conifold();
        qp.faces_plus[0].cycle.swap(0, 1);
        let v = qp.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::FaceNotComposable { .. })));
    }

    #[test]
    fn weight_axiom_detected() {
        // A digon with weight 1 on both sides: E|c| = 2 is too light.
        let qp = QuiverPolyhedron {
            vertices: vec!["u".into(), "v".into()],
            arrows: vec![
                Arrow {
                    name: "a".into(),
                    tail: 0,
                    head: 1,
                },
                Arrow {
                    name: "b".into(),
                    tail: 1,
                    head: 0,
                },
            ],
            faces_plus: vec![Face {
                cycle: vec![0, 1],
                weight: 1,
            }],
            faces_minus: vec![Face {
                cycle: vec![1, 0],
                weight: 1,
            }],
        };
        let v = qp.validate();
        assert!(v.iter().any(|v| matches!(v, Violation::FaceTooLight { .. })));
    }

    #[test]
    fn pm_violation_detected() {
        // One vertex, faces +[x,y,z] and -[x,y,z]: the link splits into
        // three 2-cycles, so this is not a surface.
        let qp = QuiverPolyhedron {
            vertices: vec!["v".into()],
            arrows: ["x", "y", "z"]
                .iter()
                .map(|n| Arrow {
                    name: (*n).into(),
                    tail: 0,
                    head: 0,
                })
                .collect(),
            faces_plus: vec![Face {
                cycle: vec![0, 1, 2],
                weight: 1,
            }],
            faces_minus: vec![Face {
                cycle: vec![0, 1, 2],
                weight: 1,
            }],
        };
        let v = qp.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::VertexLinkBroken { vertex: 0 })));
    }

    #[test]
    fn jacobi_relations_of_sphere_xyz() {
        // dW/dx = x^2 - yz etc. (the cube relations of the skew algebra).
        let qp = testfix::sphere_xyz();
        let rels = qp.jacobi_relations();
        assert_eq!(rels.len(), 3);
        let name = |p: &Path| p.display(&qp).to_string();
        assert_eq!(name(&rels[0].lhs), "x*x");
        assert_eq!(name(&rels[0].rhs), "y*z");
        assert_eq!(name(&rels[1].lhs), "y*y");
        assert_eq!(name(&rels[1].rhs), "z*x");
        assert_eq!(name(&rels[2].lhs), "z*z");
        assert_eq!(name(&rels[2].rhs), "x*y");
    }

    #[test]
    fn jacobi_relations_of_hex1() {
        // dW/dx: yz = zy, cyclic derivatives of xyz - xzy.
        let qp = testfix::hex1();
        let rels = qp.jacobi_relations();
        let name = |p: &Path| p.display(&qp).to_string();
        assert_eq!(name(&rels[0].lhs), "y*z");
        assert_eq!(name(&rels[0].rhs), "z*y");
        // Endpoints: both sides h(a) -> t(a).
        for r in &rels {
            assert_eq!(r.lhs.head(&qp), qp.arrows[r.arrow].tail);
            assert_eq!(r.lhs.tail(), qp.arrows[r.arrow].head);
            assert_eq!(r.rhs.head(&qp), qp.arrows[r.arrow].tail);
            assert_eq!(r.rhs.tail(), qp.arrows[r.arrow].head);
        }
    }

    #[test]
    fn canonical_rotation_works() {
        assert_eq!(canonical_rotation(&[2, 0, 1]), vec![0, 1, 2]);
        assert_eq!(canonical_rotation(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
        assert_eq!(canonical_rotation(&[3]), vec![3]);
    }
}
