//! Integer lattice quotients via Smith-style reduction.
//!
//! Given rows spanning a sublattice L of Z^c, compute a projection
//! Z^c -> Z^(c-r) whose kernel is exactly the saturation of L, together
//! with the elementary divisors (to detect torsion, which must not occur
//! for the homology of an orientable surface).

/// Result of reducing a sublattice of Z^c.
pub struct QuotientLattice {
    /// Rank of the sublattice.
    pub rank: usize,
    /// Elementary divisors (positive), one per rank.
    pub divisors: Vec<i64>,
    /// Rows of the projection matrix, (c - rank) x c. Applying it to a
    /// vector gives its class in the free part of the quotient.
    pub proj: Vec<Vec<i64>>,
}

impl QuotientLattice {
    pub fn class(&self, v: &[i64]) -> Vec<i64> {
        self.proj
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Diagonalize the c x f matrix B whose columns generate L (we pass L by
/// rows, so B is the transpose), tracking left transforms U with U B V = D.
/// The last (c - rank) rows of U give the projection.
pub fn quotient_projection(c: usize, rows: &[Vec<i64>]) -> QuotientLattice {
    let f = rows.len();
    let mut b = vec![vec![0i64; f]; c];
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), c);
        for (j, &v) in row.iter().enumerate() {
            b[j][i] = v;
        }
    }
    let mut u: Vec<Vec<i64>> = (0..c)
        .map(|i| (0..c).map(|j| i64::from(i == j)).collect())
        .collect();

    let mut k = 0;
    while k < c.min(f) {
        // Deterministic pivot: smallest |value|, then row-major position.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..c {
            for j in k..f {
                if b[i][j] != 0 {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => b[i][j].abs() < b[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        b.swap(k, pi);
        u.swap(k, pi);
        for row in b.iter_mut() {
            row.swap(k, pj);
        }

        // Clear column k below and row k to the right; repeat because
        // reductions can reintroduce entries.
        loop {
            let mut clean = true;
            for i in (k + 1)..c {
                if b[i][k] != 0 {
                    let q = div_round(b[i][k], b[k][k]);
                    if q != 0 {
                        for j in 0..f {
                            b[i][j] -= q * b[k][j];
                        }
                        for j in 0..c {
                            u[i][j] -= q * u[k][j];
                        }
                    }
                    if b[i][k] != 0 {
                        // Remainder smaller than pivot: swap up and restart.
                        b.swap(k, i);
                        u.swap(k, i);
                        clean = false;
                    }
                }
            }
            for j in (k + 1)..f {
                if b[k][j] != 0 {
                    let q = div_round(b[k][j], b[k][k]);
                    if q != 0 {
                        for row in b.iter_mut() {
                            let sub = q * row[k];
                            row[j] -= sub;
                        }
                    }
                    if b[k][j] != 0 {
                        for row in b.iter_mut() {
                            row.swap(k, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        k += 1;
    }

    let rank = k;
    let divisors = (0..rank).map(|i| b[i][i].abs()).collect();
    let proj = u[rank..].to_vec();
    QuotientLattice {
        rank,
        divisors,
        proj,
    }
}

/// Round-to-nearest division so remainders shrink fast.
fn div_round(a: i64, b: i64) -> i64 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r > 0) == (b > 0) { 1 } else { -1 }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_of_diagonal_line() {
        // Z^3 / <(1,1,1)> is free of rank 2 and the generator maps to zero.
        let q = quotient_projection(3, &[vec![1, 1, 1], vec![1, 1, 1]]);
        assert_eq!(q.rank, 1);
        assert_eq!(q.divisors, vec![1]);
        assert_eq!(q.class(&[1, 1, 1]), vec![0, 0]);
        // The images of e1, e2, e3 sum to zero and two of them are a basis.
        let c1 = q.class(&[1, 0, 0]);
        let c2 = q.class(&[0, 1, 0]);
        let c3 = q.class(&[0, 0, 1]);
        assert_eq!(c1[0] + c2[0] + c3[0], 0);
        assert_eq!(c1[1] + c2[1] + c3[1], 0);
        let det = c1[0] * c2[1] - c1[1] * c2[0];
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn torsion_is_reported() {
        // Z^2 / <(2,0)> has a Z/2 factor.
        let q = quotient_projection(2, &[vec![2, 0]]);
        assert_eq!(q.rank, 1);
        assert_eq!(q.divisors, vec![2]);
        assert_eq!(q.proj.len(), 1);
    }

    #[test]
    fn full_rank_gives_empty_projection() {
        let q = quotient_projection(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(q.rank, 2);
        assert!(q.proj.is_empty());
    }

    #[test]
    fn projection_kills_exactly_the_lattice() {
        let rows = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 0]];
        let q = quotient_projection(4, &rows);
        assert_eq!(q.rank, 2);
        for row in &rows {
            assert!(q.class(row).iter().all(|&x| x == 0));
        }
        // Projection is surjective: some integer combination of e_i images
        // hits each unit vector; check the 2x4 projection has a 2x2 minor
        // of determinant +-1 after reduction (here: rank 2 over Q suffices
        // together with divisors all 1).
        assert_eq!(q.divisors, vec![1, 1]);
    }
}
