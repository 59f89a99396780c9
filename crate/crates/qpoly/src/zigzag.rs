//! Zigzag paths and condition Z.
//!
//! A zigzag path alternates arcs of length two: Z[2i+1]Z[2i] lies in a
//! positive face and Z[2i+2]Z[2i+1] in a negative face. Concretely the
//! successor of Z[k] is the arrow applied immediately after it in its
//! positive face (k even) or negative face (k odd); on the fixture hex1
//! this walks x -> z -> x -> ..., giving three period-2 paths.
//!
//! Condition Z asks that the lifted zig and zag rays through an arrow a
//! meet only in a: for all i, j > 0, the lifted arrows Z+_a[i] and
//! Z-_a[j] differ. Rays are eventually periodic with shift equal to
//! their homology class, so the check reduces to exact integer
//! lattice-line coincidences.

use crate::covers::HomologyData;
use crate::error::{Error, Result};
use crate::poly::{Incidence, QuiverPolyhedron, Sign};
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagPath {
    /// One period, in walk order; (period[2i], period[2i+1]) spans a
    /// positive face, (period[2i+1], period[2i+2]) a negative one. The
    /// start is normalized to the smallest arrow at an even position.
    pub period: Vec<usize>,
}

impl ZigzagPath {
    pub fn len(&self) -> usize {
        self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.period.is_empty()
    }
}

fn require_unweighted(qp: &QuiverPolyhedron) -> Result<()> {
    if qp.is_unweighted() {
        Ok(())
    } else {
        Err(Error::Weighted)
    }
}

/// Successor in the zigzag walk: parity selects the face sign.
fn step(qp: &QuiverPolyhedron, inc: &Incidence, arrow: usize, even: bool) -> usize {
    let sign = if even { Sign::Plus } else { Sign::Minus };
    inc.applied_after(qp, arrow, sign)
}

/// One period of the ray through `a` whose first arc has the given sign
/// (Plus = the zig ray Z+_a, Minus = the zag ray Z-_a).
pub fn zigzag_ray(qp: &QuiverPolyhedron, a: usize, first_arc: Sign) -> Result<Vec<usize>> {
    require_unweighted(qp)?;
    let inc = Incidence::new(qp)?;
    let start_even = first_arc == Sign::Plus;
    let mut period = Vec::new();
    let (mut arrow, mut even) = (a, start_even);
    loop {
        period.push(arrow);
        arrow = step(qp, &inc, arrow, even);
        even = !even;
        if arrow == a && even == start_even {
            return Ok(period);
        }
    }
}

/// All zigzag paths, deduplicated up to (even) shift, ordered by their
/// smallest even-position arrow.
pub fn zigzag_paths(qp: &QuiverPolyhedron) -> Result<Vec<ZigzagPath>> {
    require_unweighted(qp)?;
    let inc = Incidence::new(qp)?;
    let n = qp.arrows.len();
    // State (arrow, parity): 2a for even, 2a+1 for odd.
    let mut visited = vec![false; 2 * n];
    let mut out = Vec::new();
    for a in 0..n {
        if visited[2 * a] {
            continue;
        }
        let mut period = Vec::new();
        let (mut arrow, mut even) = (a, true);
        loop {
            visited[2 * arrow + usize::from(!even)] = true;
            period.push(arrow);
            arrow = step(qp, &inc, arrow, even);
            even = !even;
            if arrow == a && even {
                break;
            }
        }
        debug_assert_eq!(period.len() % 2, 0, "zigzag parity must alternate");
        out.push(ZigzagPath { period });
    }
    // Double-cover invariant: every arrow in exactly two paths.
    debug_assert_eq!(
        out.iter().map(|z| z.period.len()).sum::<usize>(),
        2 * n
    );
    Ok(out)
}

/// Homology class of one period (genus 1).
pub fn zigzag_homology(
    qp: &QuiverPolyhedron,
    homology: &HomologyData,
    z: &ZigzagPath,
) -> Result<[i64; 2]> {
    let _ = qp;
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology(
            "zigzag homology directions need genus 1".into(),
        ));
    }
    Ok(homology.path_class2(&z.period))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayIntersectionCertificate {
    pub arrow: usize,
    pub i: i64,
    pub j: i64,
    /// Tail offset of the common lifted arrow.
    pub offset: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionZ {
    Passes,
    Fails(RayIntersectionCertificate),
}

struct Ray {
    arrows: Vec<usize>,
    /// Tail offset of arrows[i] in the abelian cover (offset of the first
    /// arrow is zero).
    offsets: Vec<[i64; 2]>,
    /// Deck shift after one period = homology class of the ray.
    shift: [i64; 2],
}

fn lift_ray(h: &HomologyData, arrows: Vec<usize>) -> Ray {
    let mut offsets = Vec::with_capacity(arrows.len());
    let mut cur = [0i64, 0];
    for &a in &arrows {
        offsets.push(cur);
        let c = h.class2(a);
        cur = [cur[0] + c[0], cur[1] + c[1]];
    }
    Ray {
        arrows,
        offsets,
        shift: cur,
    }
}

/// Decide condition Z for a genus-1 unweighted polyhedron.
pub fn condition_z(qp: &QuiverPolyhedron, homology: &HomologyData) -> Result<ConditionZ> {
    require_unweighted(qp)?;
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology("condition Z needs genus 1".into()));
    }
    let mut best: Option<RayIntersectionCertificate> = None;
    for a in 0..qp.arrows.len() {
        let zig = lift_ray(homology, zigzag_ray(qp, a, Sign::Plus)?);
        let zag = lift_ray(homology, zigzag_ray(qp, a, Sign::Minus)?);
        if let Some(cert) = ray_coincidence(a, &zig, &zag) {
            let better = match &best {
                None => true,
                Some(b) => (cert.i + cert.j, cert.i, cert.arrow) < (b.i + b.j, b.i, b.arrow),
            };
            if better {
                best = Some(cert);
            }
        }
    }
    Ok(match best {
        Some(c) => ConditionZ::Fails(c),
        None => ConditionZ::Passes,
    })
}

/// Smallest (by i+j, then i) coincidence of lifted arrows Z+[i] = Z-[j]
/// with i, j > 0, if any.
fn ray_coincidence(arrow: usize, zig: &Ray, zag: &Ray) -> Option<RayIntersectionCertificate> {
    let (pp, pm) = (zig.arrows.len() as i64, zag.arrows.len() as i64);
    let mut best: Option<(i64, i64, [i64; 2])> = None; // (i, j, offset)
    for (i0, &az) in zig.arrows.iter().enumerate() {
        for (j0, &am) in zag.arrows.iter().enumerate() {
            if az != am {
                continue;
            }
            let d = [
                zag.offsets[j0][0] - zig.offsets[i0][0],
                zag.offsets[j0][1] - zig.offsets[i0][1],
            ];
            let mlo = i64::from(i0 == 0);
            let nlo = i64::from(j0 == 0);
            let Some((m, n)) = min_lattice_meet(d, zig.shift, zag.shift, mlo, nlo, pp, pm, i0 as i64, j0 as i64)
            else {
                continue;
            };
            let i = i0 as i64 + m * pp;
            let j = j0 as i64 + n * pm;
            debug_assert!(i > 0 && j > 0);
            let offset = [
                zig.offsets[i0][0] + m * zig.shift[0],
                zig.offsets[i0][1] + m * zig.shift[1],
            ];
            let better = match &best {
                None => true,
                Some((bi, bj, _)) => (i + j, i) < (bi + bj, *bi),
            };
            if better {
                best = Some((i, j, offset));
            }
        }
    }
    best.map(|(i, j, offset)| RayIntersectionCertificate {
        arrow,
        i,
        j,
        offset,
    })
}

fn cross(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Minimize cost (i0 + m*pp) + (j0 + n*pm), then the first summand, over
/// integer solutions of m*hp - n*hm = d with m >= mlo, n >= nlo.
#[allow(clippy::too_many_arguments)]
fn min_lattice_meet(
    d: [i64; 2],
    hp: [i64; 2],
    hm: [i64; 2],
    mlo: i64,
    nlo: i64,
    pp: i64,
    pm: i64,
    i0: i64,
    j0: i64,
) -> Option<(i64, i64)> {
    let _ = (i0, j0);
    let det = cross(hp, hm);
    if det != 0 {
        // Unique rational solution; accept if integral and in range.
        let mnum = cross(d, hm);
        let nnum = cross(d, hp);
        if mnum % det != 0 || nnum % det != 0 {
            return None;
        }
        let m = mnum / det;
        let n = nnum / det;
        debug_assert_eq!(m * hp[0] - n * hm[0], d[0]);
        debug_assert_eq!(m * hp[1] - n * hm[1], d[1]);
        return (m >= mlo && n >= nlo).then_some((m, n));
    }
    // Parallel (or zero) shifts: reduce to one dimension along the common
    // primitive direction.
    let dir = if hp != [0, 0] {
        primitive(hp)
    } else if hm != [0, 0] {
        primitive(hm)
    } else {
        // Both rays closed up in the cover: any m, n works iff d = 0.
        return (d == [0, 0]).then_some((mlo, nlo));
    };
    if cross(d, dir) != 0 {
        return None;
    }
    let alpha = scalar_along(hp, dir);
    let beta = scalar_along(hm, dir);
    let delta = scalar_along(d, dir);
    // m*alpha - n*beta = delta, minimizing m*pp + n*pm then m.
    solve_1d(alpha, -beta, delta, mlo, nlo, pp, pm)
}

fn primitive(v: [i64; 2]) -> [i64; 2] {
    let g = v[0].gcd(&v[1]);
    [v[0] / g, v[1] / g]
}

/// v = k * dir with dir primitive; returns k.
fn scalar_along(v: [i64; 2], dir: [i64; 2]) -> i64 {
    debug_assert_eq!(cross(v, dir), 0);
    if dir[0] != 0 {
        v[0] / dir[0]
    } else {
        v[1] / dir[1]
    }
}

/// Integer solutions of m*p + n*q = r with m >= mlo, n >= nlo minimizing
/// m*wm + n*wn (then m). Weights wm, wn are positive.
fn solve_1d(p: i64, q: i64, r: i64, mlo: i64, nlo: i64, wm: i64, wn: i64) -> Option<(i64, i64)> {
    if p == 0 && q == 0 {
        return (r == 0).then_some((mlo, nlo));
    }
    if p == 0 {
        if r % q != 0 {
            return None;
        }
        let n = r / q;
        return (n >= nlo).then_some((mlo, n));
    }
    if q == 0 {
        if r % p != 0 {
            return None;
        }
        let m = r / p;
        return (m >= mlo).then_some((m, nlo));
    }
    let eg = p.extended_gcd(&q);
    let g = eg.gcd;
    if r % g != 0 {
        return None;
    }
    let scale = r / g;
    let m0 = eg.x * scale;
    let n0 = eg.y * scale;
    let (sm, sn) = (q / g, -p / g); // m = m0 + t*sm, n = n0 + t*sn
    debug_assert!(sm != 0 && sn != 0);

    // Feasible t-range from m >= mlo and n >= nlo.
    let mut tmin: Option<i64> = None;
    let mut tmax: Option<i64> = None;
    let mut apply = |step: i64, base: i64, lo: i64| {
        // base + t*step >= lo
        if step > 0 {
            let bound = div_ceil(lo - base, step);
            tmin = Some(tmin.map_or(bound, |t| t.max(bound)));
        } else {
            let bound = div_floor(base - lo, -step);
            tmax = Some(tmax.map_or(bound, |t| t.min(bound)));
        }
    };
    apply(sm, m0, mlo);
    apply(sn, n0, nlo);
    if let (Some(lo), Some(hi)) = (tmin, tmax) {
        if lo > hi {
            return None;
        }
    }

    let cost_step = sm * wm + sn * wn;
    let t = if cost_step > 0 {
        tmin.expect("cost bounded below implies a finite lower endpoint")
    } else if cost_step < 0 {
        tmax.expect("cost bounded below implies a finite upper endpoint")
    } else {
        // Cost is constant; minimize m (i.e. i).
        if sm > 0 {
            tmin.expect("m bounded below")
        } else {
            tmax.expect("m bounded below via -step")
        }
    };
    Some((m0 + t * sm, n0 + t * sn))
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Does the lifted zigzag path revisit a lifted arrow?
pub fn zigzag_self_intersects(
    qp: &QuiverPolyhedron,
    homology: &HomologyData,
    z: &ZigzagPath,
) -> Result<bool> {
    require_unweighted(qp)?;
    if homology.genus != 1 {
        return Err(Error::UnsupportedTopology(
            "self-intersection test needs genus 1".into(),
        ));
    }
    let ray = lift_ray(homology, z.period.clone());
    if ray.shift == [0, 0] {
        // The lift itself is periodic: every arrow is revisited.
        return Ok(true);
    }
    for i in 0..ray.arrows.len() {
        for j in (i + 1)..ray.arrows.len() {
            if ray.arrows[i] != ray.arrows[j] {
                continue;
            }
            let d = [
                ray.offsets[j][0] - ray.offsets[i][0],
                ray.offsets[j][1] - ray.offsets[i][1],
            ];
            // Revisit iff d is an integer multiple of the period shift.
            if cross(d, ray.shift) != 0 {
                continue;
            }
            let k = scalar_along(d, primitive(ray.shift));
            let s = scalar_along(ray.shift, primitive(ray.shift));
            if k % s == 0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
