//! Exhaustive search for the smallest torus polyhedron failing
//! condition Z. Enumerates all pairs of fixed-point-free cycle covers
//! (every cycle of length >= 3) of up to six arrows, keeps the valid
//! unweighted genus-1 quivers with at most two vertices, and prints the
//! first failure in enumeration order as a .qp document. The shipped
//! fixture fixtures/badTorus.qp is this program's output.

use qpoly::covers::homology;
use qpoly::format::{document, serialize};
use qpoly::poly::from_permutation_pair;
use qpoly::zigzag::{condition_z, ConditionZ};

/// All permutations of 0..n whose cycles all have length >= 3, as cycle
/// decompositions in a deterministic order.
fn cycle_covers(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut perm: Vec<usize> = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    fn rec(
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let n = perm.len();
        if i == n {
            if let Some(cycles) = to_long_cycles(perm) {
                out.push(cycles);
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                perm[i] = v;
                rec(i + 1, perm, used, out);
                used[v] = false;
            }
        }
    }
    rec(0, &mut perm, &mut used, &mut out);
    out
}

fn to_long_cycles(perm: &[usize]) -> Option<Vec<Vec<usize>>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut c = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            c.push(cur);
            cur = perm[cur];
        }
        if c.len() < 3 {
            return None;
        }
        cycles.push(c);
    }
    Some(cycles)
}

fn main() {
    for n in 3..=6 {
        let covers = cycle_covers(n);
        for plus in &covers {
            for minus in &covers {
                let qp = from_permutation_pair(n, plus, minus);
                if qp.vertices.len() > 2 || !qp.validate().is_empty() {
                    continue;
                }
                if qp.surface_topology().genus != 1 {
                    continue;
                }
                let h = homology(&qp).expect("genus 1");
                if let ConditionZ::Fails(cert) = condition_z(&qp, &h).expect("torus") {
                    eprintln!(
                        "# {n} arrows, plus {plus:?}, minus {minus:?}; certificate: \
                         arrow {}, i={}, j={}, offset=({},{})",
                        qp.arrows[cert.arrow].name, cert.i, cert.j, cert.offset[0], cert.offset[1]
                    );
                    print!("{}", serialize(&document(&qp, Some("badTorus"))));
                    return;
                }
            }
        }
    }
    eprintln!("no inconsistent torus found in the search space");
}
