//! Bounded word problem for Jacobi relations.
//!
//! The Jacobi ideal is generated by homogeneous differences p - q, so
//! rewriting preserves (head, tail, R-degree) and the equivalence of two
//! paths of equal degree is decided exactly by saturating the finite
//! stratum of paths up to that degree: enumerate every path, apply every
//! one-step rewrite in both directions, merge with union-find. No term
//! order or confluence assumption is involved.

use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::poly::{Path, QuiverPolyhedron, UnionFind};
use crate::rat::Rat;
use std::collections::HashMap;

pub const DEFAULT_PATH_CEILING: usize = 500_000;

/// All paths of R-degree <= bound, in a deterministic order grouped by
/// (tail, head): sorted by (tail, head, length, arrow word).
pub fn enumerate_paths(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    bound: &Rat,
    ceiling: usize,
) -> Result<Vec<Path>> {
    let mut out: Vec<Path> = Vec::new();
    let mut frontier: Vec<Path> = (0..qp.vertices.len()).map(Path::trivial).collect();
    let mut out_arrows = vec![Vec::new(); qp.vertices.len()];
    for (i, a) in qp.arrows.iter().enumerate() {
        out_arrows[a.tail].push(i);
    }
    // Grow on the head side: extend p by every arrow a with t(a) = h(p),
    // producing a*p. Layered BFS keeps generation order deterministic.
    while !frontier.is_empty() {
        out.extend(frontier.iter().cloned());
        if out.len() > ceiling {
            return Err(Error::SizeCeiling(format!(
                "more than {ceiling} paths below degree {}",
                crate::rat::format_rat(bound)
            )));
        }
        let mut next = Vec::new();
        for p in &frontier {
            let deg = grading.degree(&p.arrows);
            for &a in &out_arrows[p.head(qp)] {
                if deg.clone() + grading.charge[a].clone() <= *bound {
                    let mut arrows = vec![a];
                    arrows.extend_from_slice(&p.arrows);
                    next.push(Path {
                        arrows,
                        tail: p.tail,
                    });
                }
            }
        }
        frontier = next;
    }
    out.sort_by(|p, q| {
        (p.tail, p.head(qp), p.arrows.len(), &p.arrows).cmp(&(
            q.tail,
            q.head(qp),
            q.arrows.len(),
            &q.arrows,
        ))
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathsEqual {
    Equal,
    DistinctWithinBound,
    BoundTooSmall,
}

pub struct EquivClasses {
    pub degree_bound: Rat,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    class_of: Vec<usize>,
    num_classes: usize,
}

impl EquivClasses {
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).map(|&i| self.class_of[i])
    }

    /// Smallest-index representative of each class, in class-id order.
    pub fn representatives(&self) -> Vec<&Path> {
        let mut reps: Vec<Option<&Path>> = vec![None; self.num_classes];
        for (i, p) in self.paths.iter().enumerate() {
            let c = self.class_of[i];
            if reps[c].is_none() {
                reps[c] = Some(p);
            }
        }
        reps.into_iter().map(Option::unwrap).collect()
    }
}

/// Saturate the Jacobi relations on all paths of degree <= bound.
pub fn equivalence_classes(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    bound: &Rat,
    ceiling: usize,
) -> Result<EquivClasses> {
    equivalence_classes_ordered(qp, grading, bound, ceiling, false)
}

/// Internal variant used to check order-independence of the closure.
pub fn equivalence_classes_ordered(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    bound: &Rat,
    ceiling: usize,
    reverse_relations: bool,
) -> Result<EquivClasses> {
    let paths = enumerate_paths(qp, grading, bound, ceiling)?;
    let index: HashMap<Path, usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let mut relations = qp.jacobi_relations();
    if reverse_relations {
        relations.reverse();
    }
    let mut uf = UnionFind::new(paths.len());

    // One pass suffices: if p rewrites to q in one step, both are present
    // and merged; chains are handled by transitivity of the union-find.
    for (i, p) in paths.iter().enumerate() {
        for rel in &relations {
            for (from, to) in [(&rel.lhs, &rel.rhs), (&rel.rhs, &rel.lhs)] {
                for start in subword_occurrences(&p.arrows, &from.arrows) {
                    let mut arrows = Vec::with_capacity(
                        p.arrows.len() - from.arrows.len() + to.arrows.len(),
                    );
                    arrows.extend_from_slice(&p.arrows[..start]);
                    arrows.extend_from_slice(&to.arrows);
                    arrows.extend_from_slice(&p.arrows[start + from.arrows.len()..]);
                    let q = Path {
                        arrows,
                        tail: p.tail,
                    };
                    debug_assert_eq!(q.head(qp), p.head(qp));
                    debug_assert_eq!(grading.degree(&q.arrows), grading.degree(&p.arrows));
                    let j = *index
                        .get(&q)
                        .expect("rewrite stays within the degree stratum");
                    uf.union(i, j);
                }
            }
        }
    }

    // Dense class ids ordered by smallest member index.
    let mut class_of = vec![usize::MAX; paths.len()];
    let mut next = 0;
    let mut id_of_root: HashMap<usize, usize> = HashMap::new();
    for i in 0..paths.len() {
        let root = uf.find(i);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        class_of[i] = id;
    }
    Ok(EquivClasses {
        degree_bound: bound.clone(),
        paths,
        index,
        class_of,
        num_classes: next,
    })
}

fn subword_occurrences(haystack: &[usize], needle: &[usize]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    (0..=haystack.len() - needle.len())
        .filter(|&i| &haystack[i..i + needle.len()] == needle)
        .collect()
}

/// Decide p ~ q in the Jacobi algebra (exactly, since the relations are
/// homogeneous: unequal degrees are distinct, equal degrees are settled
/// by the closure of their stratum).
pub fn paths_equal(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    p: &Path,
    q: &Path,
    bound: &Rat,
    ceiling: usize,
) -> Result<PathsEqual> {
    if p.head(qp) != q.head(qp) || p.tail() != q.tail() {
        return Err(Error::Input("paths_equal: endpoint mismatch".into()));
    }
    let dp = grading.degree(&p.arrows);
    let dq = grading.degree(&q.arrows);
    if dp != dq {
        return Ok(PathsEqual::DistinctWithinBound);
    }
    if dp > *bound {
        return Ok(PathsEqual::BoundTooSmall);
    }
    let classes = equivalence_classes(qp, grading, bound, ceiling)?;
    if classes.class_of(p) == classes.class_of(q) {
        Ok(PathsEqual::Equal)
    } else {
        Ok(PathsEqual::DistinctWithinBound)
    }
}

/// The central element: one face power based at each vertex.
pub struct EllData {
    pub representatives: Vec<Path>,
}

/// Deterministic choice: the least face (positive before negative, then
/// by index) passing through the vertex, rotated so the power is based
/// there (at the least possible position).
pub fn ell(qp: &QuiverPolyhedron) -> Result<EllData> {
    let mut representatives = Vec::with_capacity(qp.vertices.len());
    for v in 0..qp.vertices.len() {
        let mut found = None;
        'faces: for r in qp.face_refs() {
            let f = qp.face(r);
            for (pos, &a) in f.cycle.iter().enumerate() {
                if qp.arrows[a].head == v {
                    let mut word = Vec::with_capacity(f.cycle.len() * f.weight as usize);
                    for rep in 0..f.weight as usize {
                        let _ = rep;
                        for i in 0..f.cycle.len() {
                            word.push(f.cycle[(pos + i) % f.cycle.len()]);
                        }
                    }
                    found = Some(Path::from_arrows(qp, word));
                    break 'faces;
                }
            }
        }
        let p = found.ok_or_else(|| {
            Error::Invalid(format!("no face passes through vertex #{v}"))
        })?;
        debug_assert_eq!(p.head(qp), v);
        debug_assert_eq!(p.tail(), v);
        representatives.push(p);
    }
    Ok(EllData { representatives })
}

/// Check that a * ell_{t(a)} ~ ell_{h(a)} * a for every arrow, i.e. that
/// ell is central. The bound is raised to fit the composed paths if the
/// caller's is too small.
pub fn verify_central(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    bound: &Rat,
    ceiling: usize,
) -> Result<bool> {
    let ld = ell(qp)?;
    let mut needed = grading.face_degree.clone();
    if let Some(max) = grading.charge.iter().max() {
        needed += max.clone();
    }
    let bound = if *bound < needed { needed } else { bound.clone() };
    let classes = equivalence_classes(qp, grading, &bound, ceiling)?;
    for (i, arrow) in qp.arrows.iter().enumerate() {
        let a = Path::from_arrows(qp, vec![i]);
        let p = a.compose(&ld.representatives[arrow.tail], qp);
        let q = ld.representatives[arrow.head].compose(&a, qp);
        let (cp, cq) = (classes.class_of(&p), classes.class_of(&q));
        if cp.is_none() || cq.is_none() {
            return Err(Error::SizeCeiling(
                "verify_central: composed path exceeds enumeration".into(),
            ));
        }
        if cp != cq {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CancelVerdict {
    HoldsUpToBound,
    Counterexample {
        p: Path,
        q: Path,
        arrow: usize,
        side: CancelSide,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancelSide {
    Left,
    Right,
}

/// Bounded cancellation oracle: look for distinct classes P != Q with
/// equal endpoints and degree such that P*a ~ Q*a or a*P ~ a*Q. A
/// counterexample is definitive (the algebra is not cancellative);
/// `HoldsUpToBound` is only a semi-decision. Search order is
/// deterministic: (degree, class id of p, class id of q, arrow, side).
pub fn cancellation_check(
    qp: &QuiverPolyhedron,
    grading: &Grading,
    bound: &Rat,
    ceiling: usize,
) -> Result<CancelVerdict> {
    let classes = equivalence_classes(qp, grading, bound, ceiling)?;
    let reps = classes.representatives();

    // Group class representatives by (tail, head, degree).
    let mut cells: HashMap<(usize, usize, Rat), Vec<usize>> = HashMap::new();
    for (cid, p) in reps.iter().enumerate() {
        cells
            .entry((p.tail(), p.head(qp), grading.degree(&p.arrows)))
            .or_default()
            .push(cid);
    }
    let mut cell_list: Vec<(&(usize, usize, Rat), &Vec<usize>)> = cells.iter().collect();
    cell_list.sort_by(|a, b| {
        let (ka, kb) = (a.0, b.0);
        (&ka.2, ka.0, ka.1).cmp(&(&kb.2, kb.0, kb.1))
    });

    for (_, cell) in cell_list {
        for (i, &cp) in cell.iter().enumerate() {
            for &cq in &cell[i + 1..] {
                let p = reps[cp];
                let q = reps[cq];
                for a in 0..qp.arrows.len() {
                    for side in [CancelSide::Left, CancelSide::Right] {
                        let (pp, qq) = match side {
                            CancelSide::Left => {
                                if qp.arrows[a].tail != p.head(qp) {
                                    continue;
                                }
                                let ap = Path::from_arrows(qp, vec![a]);
                                (ap.compose(p, qp), ap.compose(q, qp))
                            }
                            CancelSide::Right => {
                                if qp.arrows[a].head != p.tail() {
                                    continue;
                                }
                                let ap = Path::from_arrows(qp, vec![a]);
                                (p.compose(&ap, qp), q.compose(&ap, qp))
                            }
                        };
                        let (Some(c1), Some(c2)) =
                            (classes.class_of(&pp), classes.class_of(&qq))
                        else {
                            continue; // composed degree exceeds the bound
                        };
                        if c1 == c2 {
                            return Ok(CancelVerdict::Counterexample {
                                p: p.clone(),
                                q: q.clone(),
                                arrow: a,
                                side,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(CancelVerdict::HoldsUpToBound)
}
