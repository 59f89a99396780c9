//! Galois quotients and covers, path lifting, first homology of the
//! underlying surface, and windows of the abelian (genus-1 universal)
//! cover.

use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::poly::{canonical_rotation, Face, QuiverPolyhedron, Sign, UnionFind};
use crate::rat::{rat_int, Rat};
use crate::rewrite::{cancellation_check, CancelVerdict};
use crate::snf::quotient_projection;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

const GROUP_CEILING: usize = 10_000;

/// One quiver automorphism: simultaneous permutations of vertices and
/// arrows commuting with head/tail.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl Permutation {
    pub fn identity(num_vertices: usize, num_arrows: usize) -> Permutation {
        Permutation {
            vertex_map: (0..num_vertices).collect(),
            arrow_map: (0..num_arrows).collect(),
        }
    }

    /// self after other.
    fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            arrow_map: other.arrow_map.iter().map(|&a| self.arrow_map[a]).collect(),
        }
    }

    fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.arrow_map.iter().enumerate().all(|(i, &a)| i == a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub name: String,
    pub generators: Vec<Permutation>,
}

impl GroupAction {
    /// All group elements (closure of the generators), identity first.
    pub fn elements(&self, qp: &QuiverPolyhedron) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(qp.vertices.len(), qp.arrows.len());
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        let mut out = vec![id.clone()];
        seen.insert(id);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let cur = out[i].clone();
            for g in &self.generators {
                let next = g.compose(&cur);
                if seen.insert(next.clone()) {
                    out.push(next);
                    queue.push_back(out.len() - 1);
                    if out.len() > GROUP_CEILING {
                        return Err(Error::SizeCeiling(format!(
                            "group closure exceeds {GROUP_CEILING} elements"
                        )));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Check the GroupAction invariants against a polyhedron.
    pub fn validate(&self, qp: &QuiverPolyhedron) -> Result<()> {
        let nv = qp.vertices.len();
        let na = qp.arrows.len();
        for (gi, g) in self.generators.iter().enumerate() {
            let mut seen_v = vec![false; nv];
            let mut seen_a = vec![false; na];
            if g.vertex_map.len() != nv || g.arrow_map.len() != na {
                return Err(Error::Input(format!("generator {gi}: wrong size")));
            }
            for &v in &g.vertex_map {
                if v >= nv || std::mem::replace(&mut seen_v[v], true) {
                    return Err(Error::Input(format!(
                        "generator {gi}: vertex map is not a permutation"
                    )));
                }
            }
            for &a in &g.arrow_map {
                if a >= na || std::mem::replace(&mut seen_a[a], true) {
                    return Err(Error::Input(format!(
                        "generator {gi}: arrow map is not a permutation"
                    )));
                }
            }
            for (a, arrow) in qp.arrows.iter().enumerate() {
                let img = &qp.arrows[g.arrow_map[a]];
                if img.tail != g.vertex_map[arrow.tail] || img.head != g.vertex_map[arrow.head] {
                    return Err(Error::Input(format!(
                        "generator {gi} does not commute with head/tail at arrow `{}`",
                        arrow.name
                    )));
                }
            }
            // Faces map to faces of the same sign and weight.
            for r in qp.face_refs() {
                let f = qp.face(r);
                let image: Vec<usize> = f.cycle.iter().map(|&a| g.arrow_map[a]).collect();
                let key = canonical_rotation(&image);
                let family = match r.sign {
                    Sign::Plus => &qp.faces_plus,
                    Sign::Minus => &qp.faces_minus,
                };
                let hit = family
                    .iter()
                    .any(|f2| f2.weight == f.weight && canonical_rotation(&f2.cycle) == key);
                if !hit {
                    return Err(Error::Input(format!(
                        "generator {gi} does not map face {r} to a face"
                    )));
                }
            }
        }
        // Freeness on vertices.
        for g in self.elements(qp)? {
            if g.is_identity() {
                continue;
            }
            if let Some(v) = g.vertex_map.iter().enumerate().find(|&(i, &v)| i == v) {
                return Err(Error::NonFreeAction {
                    vertex: qp.vertices[v.0].clone(),
                });
            }
        }
        Ok(())
    }
}

/// The quotient polyhedron together with the covering data.
#[derive(Debug, Clone)]
pub struct CoverMap {
    /// Base (quotient) polyhedron.
    pub quotient: QuiverPolyhedron,
    /// Cover vertex -> quotient vertex.
    pub vertex_to: Vec<usize>,
    /// Cover arrow -> quotient arrow.
    pub arrow_to: Vec<usize>,
}

/// Quotient by a free action: vertices and arrows become orbits; each
/// face orbit contributes one face whose cycle is the primitive root d of
/// the projected cycle pi(c) = d^k, with weight k * E_c.
pub fn quotient(qp: &QuiverPolyhedron, action: &GroupAction) -> Result<CoverMap> {
    action.validate(qp)?;
    let elements = action.elements(qp)?;

    let orbit_ids = |n: usize, maps: &dyn Fn(&Permutation) -> &Vec<usize>| {
        let mut uf = UnionFind::new(n);
        for g in &elements {
            for i in 0..n {
                uf.union(i, maps(g)[i]);
            }
        }
        // Dense ids ordered by least member.
        let mut id_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut to = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            let root = uf.find(i);
            let id = *id_of_root.entry(root).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            });
            to[i] = id;
        }
        (to, reps)
    };
    let (vertex_to, vreps) = orbit_ids(qp.vertices.len(), &|g: &Permutation| &g.vertex_map);
    let (arrow_to, areps) = orbit_ids(qp.arrows.len(), &|g: &Permutation| &g.arrow_map);

    let vertices: Vec<String> = vreps.iter().map(|&v| qp.vertices[v].clone()).collect();
    let arrows: Vec<crate::poly::Arrow> = areps
        .iter()
        .map(|&a| crate::poly::Arrow {
            name: qp.arrows[a].name.clone(),
            tail: vertex_to[qp.arrows[a].tail],
            head: vertex_to[qp.arrows[a].head],
        })
        .collect();

    let project_faces = |family: &[Face]| -> Vec<Face> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for f in family {
            let image: Vec<usize> = f.cycle.iter().map(|&a| arrow_to[a]).collect();
            let p = primitive_period(&image);
            let d = image[..p].to_vec();
            let k = (image.len() / p) as u32;
            let key = canonical_rotation(&d);
            if seen.insert(key) {
                out.push(Face {
                    cycle: d,
                    weight: k * f.weight,
                });
            }
        }
        out
    };

    let quotient = QuiverPolyhedron {
        vertices,
        arrows,
        faces_plus: project_faces(&qp.faces_plus),
        faces_minus: project_faces(&qp.faces_minus),
    };
    let violations = quotient.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!(
            "quotient is not a polyhedron: {}",
            violations[0]
        )));
    }
    Ok(CoverMap {
        quotient,
        vertex_to,
        arrow_to,
    })
}

/// Smallest p with cycle[i] == cycle[i+p] for all i (p divides len).
fn primitive_period(cycle: &[usize]) -> usize {
    let n = cycle.len();
    for p in 1..=n {
        if n % p == 0 && (0..n).all(|i| cycle[i] == cycle[(i + p) % n]) {
            return p;
        }
    }
    n
}

/// Unique lift of a quotient path, anchored at the cover vertex `v`
/// projecting to the head of `q`.
pub fn lift_path(
    cover: &QuiverPolyhedron,
    map: &CoverMap,
    q: &crate::poly::Path,
    v: usize,
) -> Result<crate::poly::Path> {
    if map.vertex_to[v] != q.head(&map.quotient) {
        return Err(Error::Input(format!(
            "lift_path: vertex `{}` does not project to the head of the path",
            cover.vertices[v]
        )));
    }
    let mut cur = v;
    let mut arrows = Vec::with_capacity(q.arrows.len());
    for &b in &q.arrows {
        // Unique cover arrow over b with head at `cur` (covering property).
        let mut found = None;
        for (a, arrow) in cover.arrows.iter().enumerate() {
            if map.arrow_to[a] == b && arrow.head == cur {
                found = Some(a);
                break;
            }
        }
        let a = found.ok_or_else(|| Error::Invalid("lift_path: no preimage arrow".into()))?;
        arrows.push(a);
        cur = cover.arrows[a].tail;
    }
    Ok(if arrows.is_empty() {
        crate::poly::Path::trivial(v)
    } else {
        crate::poly::Path { arrows, tail: cur }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyData {
    pub genus: u32,
    /// Class of each arrow in H1 of the underlying surface, a vector of
    /// length 2*genus. Classes of cyclic paths (their arrow-class sums)
    /// generate the full lattice, so the Hermite-normal-form basis of the
    /// cycle-class lattice is the standard one; determinism comes from the
    /// deterministic reduction in `snf`.
    pub arrow_class: Vec<Vec<i64>>,
}

impl HomologyData {
    pub fn path_class(&self, arrows: &[usize]) -> Vec<i64> {
        let dim = 2 * self.genus as usize;
        let mut out = vec![0i64; dim];
        for &a in arrows {
            for (o, c) in out.iter_mut().zip(&self.arrow_class[a]) {
                *o += c;
            }
        }
        out
    }

    /// Genus-1 convenience.
    pub fn class2(&self, a: usize) -> [i64; 2] {
        assert_eq!(self.genus, 1);
        [self.arrow_class[a][0], self.arrow_class[a][1]]
    }

    pub fn path_class2(&self, arrows: &[usize]) -> [i64; 2] {
        let v = self.path_class(arrows);
        [v[0], v[1]]
    }
}

/// First homology of the underlying surface: pick a spanning tree, use
/// the cotree arrows as cycle-space coordinates, and quotient by the
/// face-boundary lattice. Tree arrows get class 0; a cyclic path's class
/// is the sum of its arrow classes.
pub fn homology(qp: &QuiverPolyhedron) -> Result<HomologyData> {
    let n = qp.arrows.len();
    // BFS spanning tree (undirected) from vertex 0, arrows in index order.
    let mut adj = vec![Vec::new(); qp.vertices.len()];
    for (i, a) in qp.arrows.iter().enumerate() {
        adj[a.tail].push((a.head, i));
        adj[a.head].push((a.tail, i));
    }
    let mut in_tree = vec![false; n];
    let mut seen = vec![false; qp.vertices.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(w, a) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[a] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Invalid("homology: quiver not connected".into()));
    }
    let cotree: Vec<usize> = (0..n).filter(|&a| !in_tree[a]).collect();
    let coord_of: BTreeMap<usize, usize> = cotree.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    let mut rows = Vec::new();
    for r in qp.face_refs() {
        let mut row = vec![0i64; cotree.len()];
        for &a in &qp.face(r).cycle {
            if let Some(&j) = coord_of.get(&a) {
                row[j] += 1;
            }
        }
        rows.push(row);
    }
    let q = quotient_projection(cotree.len(), &rows);
    assert!(
        q.divisors.iter().all(|&d| d == 1),
        "torsion in surface homology"
    );
    let genus = qp.surface_topology().genus;
    assert_eq!(
        cotree.len() - q.rank,
        2 * genus as usize,
        "homology rank disagrees with the surface genus"
    );

    let mut arrow_class = vec![vec![0i64; 2 * genus as usize]; n];
    for (j, &a) in cotree.iter().enumerate() {
        let mut e = vec![0i64; cotree.len()];
        e[j] = 1;
        arrow_class[a] = q.class(&e);
    }
    let hd = HomologyData { genus, arrow_class };
    // Face boundaries must be nullhomologous.
    for r in qp.face_refs() {
        debug_assert!(hd.path_class(&qp.face(r).cycle).iter().all(|&x| x == 0));
    }
    Ok(hd)
}

/// A finite window of the abelian cover of a genus-1 polyhedron:
/// all lifted vertices with offset infinity-norm <= radius, and one lift
/// of every arrow per window vertex, anchored at its head (tails may lie
/// outside the window).
#[derive(Debug, Clone)]
pub struct CoverWindow {
    pub radius: i64,
    pub vertices: Vec<(usize, [i64; 2])>,
    /// (arrow id, head offset); the tail offset is head - class(arrow).
    pub arrows: Vec<(usize, [i64; 2])>,
}

pub fn abelian_cover_window(
    qp: &QuiverPolyhedron,
    homology: &HomologyData,
    radius: i64,
) -> Result<CoverWindow> {
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology(format!(
            "abelian cover window needs genus 1, got genus {}",
            homology.genus
        )));
    }
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            for v in 0..qp.vertices.len() {
                vertices.push((v, [x, y]));
            }
            for a in 0..qp.arrows.len() {
                arrows.push((a, [x, y]));
            }
        }
    }
    Ok(CoverWindow {
        radius,
        vertices,
        arrows,
    })
}

/// Explicit Z/n translation cover along one homology coordinate
/// (direction 0 or 1), together with its deck action generator.
pub fn translation_cover(
    qp: &QuiverPolyhedron,
    homology: &HomologyData,
    n: usize,
    direction: usize,
) -> Result<(QuiverPolyhedron, GroupAction)> {
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology(
            "translation covers are built along a torus direction".into(),
        ));
    }
    assert!(direction < 2 && n >= 2);
    let nv = qp.vertices.len();
    let na = qp.arrows.len();
    let shift = |l: usize, d: i64| -> usize { ((l as i64 + d).rem_euclid(n as i64)) as usize };
    // Cover vertex (v, layer) = index v*n + layer; arrow (a, tail layer).
    let mut vertices = Vec::with_capacity(nv * n);
    for v in 0..nv {
        for l in 0..n {
            vertices.push(format!("{}@{}", qp.vertices[v], l));
        }
    }
    let mut arrows = Vec::with_capacity(na * n);
    for a in 0..na {
        let cls = homology.arrow_class[a][direction];
        for l in 0..n {
            arrows.push(crate::poly::Arrow {
                name: format!("{}@{}", qp.arrows[a].name, l),
                tail: qp.arrows[a].tail * n + l,
                head: qp.arrows[a].head * n + shift(l, cls),
            });
        }
    }
    let lift_faces = |family: &[Face]| -> Vec<Face> {
        let mut out = Vec::new();
        for f in family {
            for l in 0..n {
                // Walk in application order accumulating tail layers.
                let mut tail_layer = vec![0usize; f.cycle.len()];
                let mut cur = l;
                for j in (0..f.cycle.len()).rev() {
                    tail_layer[j] = cur;
                    cur = shift(cur, homology.arrow_class[f.cycle[j]][direction]);
                }
                let cycle: Vec<usize> = f
                    .cycle
                    .iter()
                    .zip(&tail_layer)
                    .map(|(&a, &tl)| a * n + tl)
                    .collect();
                out.push(Face {
                    cycle,
                    weight: f.weight,
                });
            }
        }
        out
    };
    let cover = QuiverPolyhedron {
        vertices,
        arrows,
        faces_plus: lift_faces(&qp.faces_plus),
        faces_minus: lift_faces(&qp.faces_minus),
    };
    let violations = cover.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!(
            "translation cover is not a polyhedron: {}",
            violations[0]
        )));
    }
    let gen = Permutation {
        vertex_map: (0..nv * n).map(|i| (i / n) * n + shift(i % n, 1)).collect(),
        arrow_map: (0..na * n).map(|i| (i / n) * n + shift(i % n, 1)).collect(),
    };
    let action = GroupAction {
        name: format!("shift{n}"),
        generators: vec![gen],
    };
    Ok((cover, action))
}

/// Push a grading on the cover down to the quotient (orbit average, per
/// the covering-grading transfer formula) and pull it back again.
pub fn transfer_grading(map: &CoverMap, cover_grading: &Grading) -> (Grading, Grading) {
    let nq = map.quotient.arrows.len();
    let mut sums = vec![Rat::from_integer(0.into()); nq];
    let mut counts = vec![0i64; nq];
    for (a, &qa) in map.arrow_to.iter().enumerate() {
        sums[qa] += cover_grading.charge[a].clone();
        counts[qa] += 1;
    }
    let charge: Vec<Rat> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| s / rat_int(c))
        .collect();
    let down = Grading {
        charge: charge.clone(),
        face_degree: cover_grading.face_degree.clone(),
    };
    let up = Grading {
        charge: map.arrow_to.iter().map(|&qa| charge[qa].clone()).collect(),
        face_degree: cover_grading.face_degree.clone(),
    };
    (down, up)
}

/// Cancellation agrees between a cover and its quotient (at the
/// transferred grading and the same bound).
pub fn cancellation_transfer_check(
    cover: &QuiverPolyhedron,
    action: &GroupAction,
    cover_grading: &Grading,
    bound: &Rat,
    ceiling: usize,
) -> Result<bool> {
    let map = quotient(cover, action)?;
    let (down, _) = transfer_grading(&map, cover_grading);
    if !down.verify(&map.quotient) {
        return Err(Error::Invalid(
            "transferred grading is not a grading on the quotient".into(),
        ));
    }
    let v_cover = cancellation_check(cover, cover_grading, bound, ceiling)?;
    let v_quot = cancellation_check(&map.quotient, &down, bound, ceiling)?;
    let holds = |v: &CancelVerdict| matches!(v, CancelVerdict::HoldsUpToBound);
    Ok(holds(&v_cover) == holds(&v_quot))
}
