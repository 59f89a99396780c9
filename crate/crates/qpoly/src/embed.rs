//! Isoradial embeddings and boundary matchings.
//!
//! Every face becomes a polygon inscribed in a unit circle with arrow `a`
//! on an arc of pi*R_a radians; positive faces are traversed
//! counterclockwise, negative ones clockwise. Placement is floating
//! point with explicit residual reporting and feeds only the boundary
//! matchings and the SVG emitter — never an exact verdict.

use crate::consistency::{PerfectMatching, RCharge};
use crate::covers::HomologyData;
use crate::error::{Error, Result};
use crate::poly::{FaceRef, Incidence, QuiverPolyhedron, Sign};
use crate::rat::rat_to_f64;
use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

pub type LiftedVertex = (usize, [i64; 2]);
pub type FaceKey = (FaceRef, [i64; 2]);

#[derive(Debug, Clone)]
pub struct FaceLift {
    pub center: [f64; 2],
    /// Boundary walk in forward traversal order (reverse of the stored
    /// composition order): arrow, lifted tail, lifted head.
    pub walk: Vec<(usize, LiftedVertex, LiftedVertex)>,
}

#[derive(Debug, Clone)]
pub struct IsoradialEmbedding {
    pub positions: BTreeMap<LiftedVertex, [f64; 2]>,
    pub faces: BTreeMap<FaceKey, FaceLift>,
    pub tolerance: f64,
    /// Largest disagreement between independently computed positions of
    /// one lifted vertex.
    pub max_residual: f64,
    pub worst: String,
}

impl IsoradialEmbedding {
    pub fn face_centers(&self) -> BTreeMap<FaceKey, [f64; 2]> {
        self.faces.iter().map(|(k, f)| (*k, f.center)).collect()
    }
}

fn rot(alpha: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = alpha.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Boundary walk arrows of a face: the stored cycle is in composition
/// order, so the forward walk reverses it.
fn boundary_walk(qp: &QuiverPolyhedron, r: FaceRef) -> Vec<usize> {
    let mut w = qp.face(r).cycle.clone();
    w.reverse();
    w
}

/// Key offset of the face lift containing the lifted arrow `(a, head
/// offset)`: the offset of the head of the face's first stored arrow.
fn face_key_offset(
    qp: &QuiverPolyhedron,
    h: &HomologyData,
    r: FaceRef,
    arrow: usize,
    head_off: [i64; 2],
) -> [i64; 2] {
    let walk = boundary_walk(qp, r);
    let pos = walk.iter().position(|&b| b == arrow).expect("arrow in face");
    // cycle[0] is the last walk entry; accumulate classes forward.
    let mut off = head_off;
    for &b in &walk[pos + 1..] {
        let c = h.class2(b);
        off = [off[0] + c[0], off[1] + c[1]];
    }
    off
}

/// Breadth-first isoradial placement over all face lifts whose key
/// offset lies within the window. Inconsistent charges are admitted on
/// purpose: they surface as a residual above tolerance, reported as an
/// embedding failure naming the worst vertex.
pub fn isoradial_embedding(
    qp: &QuiverPolyhedron,
    homology: &HomologyData,
    rcharge: &RCharge,
    window_radius: i64,
) -> Result<IsoradialEmbedding> {
    if !qp.is_unweighted() {
        return Err(Error::Weighted);
    }
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology(
            "isoradial embeddings need genus 1".into(),
        ));
    }
    if rcharge.charge.len() != qp.arrows.len() {
        return Err(Error::Input("charge count mismatch".into()));
    }
    let charge: Vec<f64> = rcharge.charge.iter().map(rat_to_f64).collect();
    if charge.iter().any(|&c| c <= 0.0 || c >= 2.0) {
        return Err(Error::Input("charges must lie strictly in (0, 2)".into()));
    }
    let inc = Incidence::new(qp)?;
    let tolerance = 1e-9;

    let mut emb = IsoradialEmbedding {
        positions: BTreeMap::new(),
        faces: BTreeMap::new(),
        tolerance,
        max_residual: 0.0,
        worst: String::new(),
    };

    // Seed: first face, its first walk arrow along the x axis.
    let refs = qp.face_refs();
    let r0 = refs[0];
    let b0 = boundary_walk(qp, r0)[0];
    let tail0 = (qp.arrows[b0].tail, [0i64, 0]);
    let c0 = h_class(homology, b0);
    let head0 = (qp.arrows[b0].head, [c0[0], c0[1]]);
    let chord = 2.0 * (PI * charge[b0] / 2.0).sin();
    emb.positions.insert(tail0, [0.0, 0.0]);
    emb.positions.insert(head0, [chord, 0.0]);

    let key0 = (r0, face_key_offset(qp, homology, r0, b0, head0.1));
    let mut queue: VecDeque<(FaceKey, usize, LiftedVertex, LiftedVertex)> = VecDeque::new();
    queue.push_back((key0, b0, tail0, head0));

    while let Some((key, arrow, tl, hl)) = queue.pop_front() {
        if emb.faces.contains_key(&key) {
            continue;
        }
        if key.1[0].abs() > window_radius || key.1[1].abs() > window_radius {
            continue;
        }
        let lift = place_face(qp, homology, &charge, key.0, arrow, tl, hl, &mut emb);
        // Neighbors across each boundary arrow.
        for &(a, t, hd) in &lift.walk {
            let other = inc.face_of(a, key.0.sign.flip());
            let okey = (other, face_key_offset(qp, homology, other, a, hd.1));
            if !emb.faces.contains_key(&okey) {
                queue.push_back((okey, a, t, hd));
            }
        }
        emb.faces.insert(key, lift);
    }

    if emb.max_residual > tolerance {
        return Err(Error::EmbeddingFailure {
            residual: emb.max_residual,
            element: emb.worst.clone(),
        });
    }
    Ok(emb)
}

fn h_class(h: &HomologyData, a: usize) -> [i64; 2] {
    h.class2(a)
}

/// Place one face lift from a known chord, walking the polygon by
/// rotations about the circumcenter and recording any disagreement with
/// previously placed vertices.
#[allow(clippy::too_many_arguments)]
fn place_face(
    qp: &QuiverPolyhedron,
    h: &HomologyData,
    charge: &[f64],
    r: FaceRef,
    arrow: usize,
    tl: LiftedVertex,
    hl: LiftedVertex,
    emb: &mut IsoradialEmbedding,
) -> FaceLift {
    // Positive faces run counterclockwise (interior on the left of the
    // walk), negative ones clockwise.
    let orient = match r.sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let pt = emb.positions[&tl];
    let ph = emb.positions[&hl];
    let mid = [(pt[0] + ph[0]) / 2.0, (pt[1] + ph[1]) / 2.0];
    let dir = [ph[0] - pt[0], ph[1] - pt[1]];
    let len = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    let unit = [dir[0] / len, dir[1] / len];
    let normal = [-orient * unit[1], orient * unit[0]]; // interior side
    let apo = (PI * charge[arrow] / 2.0).cos();
    let center = [mid[0] + apo * normal[0], mid[1] + apo * normal[1]];

    let walk_arrows = boundary_walk(qp, r);
    let start = walk_arrows.iter().position(|&b| b == arrow).unwrap();
    let k = walk_arrows.len();
    let mut walk: Vec<(usize, LiftedVertex, LiftedVertex)> = Vec::with_capacity(k);
    let mut cur = hl;
    let mut cur_pos = ph;
    let record = |emb: &mut IsoradialEmbedding, v: LiftedVertex, p: [f64; 2]| {
        if let Some(old) = emb.positions.get(&v) {
            let res = ((old[0] - p[0]).powi(2) + (old[1] - p[1]).powi(2)).sqrt();
            if res > emb.max_residual {
                emb.max_residual = res;
                emb.worst = format!("vertex {}@({},{})", qp.vertices[v.0], v.1[0], v.1[1]);
            }
        } else {
            emb.positions.insert(v, p);
        }
    };
    for j in 1..=k {
        let b = walk_arrows[(start + j) % k];
        let c = h_class(h, b);
        let next = (qp.arrows[b].head, [cur.1[0] + c[0], cur.1[1] + c[1]]);
        debug_assert_eq!(qp.arrows[b].tail, cur.0);
        let rel = [cur_pos[0] - center[0], cur_pos[1] - center[1]];
        let rr = rot(orient * PI * charge[b], rel);
        let next_pos = [center[0] + rr[0], center[1] + rr[1]];
        record(emb, next, next_pos);
        walk.push((b, cur, next));
        cur = next;
        cur_pos = next_pos; // keep walking our own circle
    }
    walk.rotate_right(start + 1);
    debug_assert_eq!(walk.len(), k);
    // Closure: the final computed vertex must coincide with the starting
    // head (already recorded against the stored position above).
    FaceLift {
        center,
        walk,
    }
}

/// The boundary matchings P_theta^+ and P_theta^-: from each face of the
/// given sign, the arrow whose arc is hit by the ray from the
/// circumcenter in direction theta (tail endpoint included, head
/// excluded). A theta within angular tolerance of an arc endpoint is
/// rejected so the exclusion stays unambiguous.
pub fn boundary_matching(
    qp: &QuiverPolyhedron,
    emb: &IsoradialEmbedding,
    theta: [f64; 2],
) -> Result<(PerfectMatching, PerfectMatching)> {
    let phi = theta[1].atan2(theta[0]);
    let mut picks: BTreeMap<FaceRef, usize> = BTreeMap::new();
    for r in qp.face_refs() {
        // Any lift works: the angular layout is translation invariant.
        let (_, lift) = emb
            .faces
            .iter()
            .find(|((fr, _), _)| *fr == r)
            .ok_or_else(|| Error::Input(format!("face {r} missing from embedding window")))?;
        let orient = match r.sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        let angle_of = |v: LiftedVertex| {
            let p = emb.positions[&v];
            (p[1] - lift.center[1]).atan2(p[0] - lift.center[0])
        };
        let tau = 2.0 * PI;
        let mut hit: Option<usize> = None;
        for &(a, t, hd) in &lift.walk {
            let at = angle_of(t);
            let ah = angle_of(hd);
            // Sweep from tail to head in traversal direction.
            let sweep = (orient * (ah - at)).rem_euclid(tau);
            let off = (orient * (phi - at)).rem_euclid(tau);
            if off.min(tau - off) < 1e-9 || (off - sweep).abs() < 1e-9 {
                return Err(Error::DegenerateDirection);
            }
            if off < sweep {
                debug_assert!(hit.is_none(), "arcs partition the circle");
                hit = Some(a);
            }
        }
        let a = hit.ok_or_else(|| {
            Error::Input(format!("direction hit no arc of face {r}"))
        })?;
        picks.insert(r, a);
    }
    let collect = |sign: Sign| -> PerfectMatching {
        let mut arrows: Vec<usize> = picks
            .iter()
            .filter(|(r, _)| r.sign == sign)
            .map(|(_, &a)| a)
            .collect();
        arrows.sort_unstable();
        arrows.dedup();
        PerfectMatching {
            arrows,
            homology: None,
        }
    };
    let plus = collect(Sign::Plus);
    let minus = collect(Sign::Minus);
    for m in [&plus, &minus] {
        assert!(
            is_perfect_matching(qp, &m.arrows),
            "boundary matching must satisfy the matching invariant"
        );
    }
    Ok((plus, minus))
}

fn is_perfect_matching(qp: &QuiverPolyhedron, arrows: &[usize]) -> bool {
    qp.face_refs().iter().all(|&r| {
        qp.face(r)
            .cycle
            .iter()
            .filter(|a| arrows.binary_search(a).is_ok())
            .count()
            == 1
    })
}

/// Minimal SVG 1.1 rendering of the embedded window: face circles,
/// arrows as chords, vertices as dots.
pub fn svg(qp: &QuiverPolyhedron, emb: &IsoradialEmbedding) -> String {
    let scale = 60.0;
    let mut min = [f64::MAX, f64::MAX];
    let mut max = [f64::MIN, f64::MIN];
    for p in emb.positions.values() {
        for i in 0..2 {
            min[i] = min[i].min(p[i]);
            max[i] = max[i].max(p[i]);
        }
    }
    let pad = 1.5;
    let w = (max[0] - min[0] + 2.0 * pad) * scale;
    let hgt = (max[1] - min[1] + 2.0 * pad) * scale;
    let tx = |p: [f64; 2]| {
        [
            (p[0] - min[0] + pad) * scale,
            // SVG y grows downward.
            hgt - (p[1] - min[1] + pad) * scale,
        ]
    };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{w:.0}\" height=\"{hgt:.0}\" viewBox=\"0 0 {w:.2} {hgt:.2}\">\n"
    ));
    for (key, lift) in &emb.faces {
        let c = tx(lift.center);
        let color = match key.0.sign {
            Sign::Plus => "#d0e8ff",
            Sign::Minus => "#ffe0d0",
        };
        out.push_str(&format!(
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"{color}\"/>\n",
            c[0], c[1], scale
        ));
    }
    let mut drawn: std::collections::BTreeSet<(LiftedVertex, LiftedVertex)> = Default::default();
    for lift in emb.faces.values() {
        for &(_, t, hd) in &lift.walk {
            if !drawn.insert((t, hd)) {
                continue;
            }
            let a = tx(emb.positions[&t]);
            let b = tx(emb.positions[&hd]);
            out.push_str(&format!(
                "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#333\"/>\n",
                a[0], a[1], b[0], b[1]
            ));
        }
    }
    for (v, p) in &emb.positions {
        let q = tx(*p);
        out.push_str(&format!(
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#000\"><title>{}@({},{})</title></circle>\n",
            q[0], q[1], qp.vertices[v.0], v.1[0], v.1[1]
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::enumerate_perfect_matchings;
    use crate::covers::homology;
    use crate::rat::rat;
    use crate::testfix;

    fn uniform_charge(qp: &QuiverPolyhedron, num: i64, den: i64) -> RCharge {
        RCharge {
            charge: vec![rat(num, den); qp.arrows.len()],
        }
    }

    #[test]
    fn hex1_embeds_with_tiny_residual() {
        let qp = testfix::hex1();
        let h = homology(&qp).unwrap();
        let emb = isoradial_embedding(&qp, &h, &uniform_charge(&qp, 2, 3), 3).unwrap();
        assert!(emb.max_residual < 1e-9, "residual {}", emb.max_residual);
        assert!(emb.faces.len() > 10);
        // Unit circumradius for every face corner.
        for lift in emb.faces.values() {
            for &(_, t, _) in &lift.walk {
                let p = emb.positions[&t];
                let d = ((p[0] - lift.center[0]).powi(2) + (p[1] - lift.center[1]).powi(2)).sqrt();
                assert!((d - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn conifold_embeds_as_square_tiling() {
        let qp = testfix::conifold();
        let h = homology(&qp).unwrap();
        let emb = isoradial_embedding(&qp, &h, &uniform_charge(&qp, 1, 2), 3).unwrap();
        assert!(emb.max_residual < 1e-9);
        // R = 1/2 chords have length sqrt(2): every square face has side
        // sqrt(2) and circumradius 1.
        for lift in emb.faces.values() {
            assert_eq!(lift.walk.len(), 4);
        }
    }

    #[test]
    fn perturbed_charges_fail_to_close() {
        let qp = testfix::hex1();
        let h = homology(&qp).unwrap();
        // Face sums 21/10 instead of 2: the triangles cannot close.
        let r = uniform_charge(&qp, 7, 10);
        match isoradial_embedding(&qp, &h, &r, 2) {
            Err(Error::EmbeddingFailure { residual, .. }) => assert!(residual > 1e-6),
            other => panic!("expected embedding failure, got {other:?}"),
        }
    }

    #[test]
    fn boundary_matchings_are_matchings() {
        for qp in [testfix::hex1(), testfix::conifold()] {
            let h = homology(&qp).unwrap();
            let n = qp.arrows.len() as i64;
            let charge = uniform_charge(&qp, 2, n.max(3));
            let charge = if qp.arrows.len() == 4 {
                uniform_charge(&qp, 1, 2)
            } else {
                charge
            };
            let emb = isoradial_embedding(&qp, &h, &charge, 2).unwrap();
            let valid = enumerate_perfect_matchings(&qp).unwrap();
            let mut seen = 0;
            for k in 0..36 {
                let ang = 0.013 + (k as f64) * std::f64::consts::PI / 18.0;
                let theta = [ang.cos(), ang.sin()];
                match boundary_matching(&qp, &emb, theta) {
                    Ok((p, m)) => {
                        assert!(valid.iter().any(|v| v.arrows == p.arrows));
                        assert!(valid.iter().any(|v| v.arrows == m.arrows));
                        seen += 1;
                    }
                    Err(Error::DegenerateDirection) => {}
                    Err(e) => panic!("unexpected error {e:?}"),
                }
            }
            assert!(seen > 30);
        }
    }

    #[test]
    fn antipodal_symmetry() {
        // P_theta^+ equals the negative-face selection at -theta.
        let qp = testfix::hex1();
        let h = homology(&qp).unwrap();
        let emb = isoradial_embedding(&qp, &h, &uniform_charge(&qp, 2, 3), 2).unwrap();
        let theta = [0.3f64.cos(), 0.3f64.sin()];
        let (p_plus, _) = boundary_matching(&qp, &emb, theta).unwrap();
        let (_, q_minus) = boundary_matching(&qp, &emb, [-theta[0], -theta[1]]).unwrap();
        assert_eq!(p_plus.arrows, q_minus.arrows);
    }

    #[test]
    fn svg_is_emitted() {
        let qp = testfix::hex1();
        let h = homology(&qp).unwrap();
        let emb = isoradial_embedding(&qp, &h, &uniform_charge(&qp, 2, 3), 1).unwrap();
        let s = svg(&qp, &emb);
        assert!(s.starts_with("<svg"));
        assert!(s.contains("<circle"));
        assert!(s.ends_with("</svg>\n"));
    }
}
