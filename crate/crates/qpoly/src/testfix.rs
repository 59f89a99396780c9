//! Programmatic definitions of the fixture corpus, shared by the unit
//! tests and the `gen_fixtures` example that writes `fixtures/*.qp`.

use crate::poly::{Arrow, Face, QuiverPolyhedron};

pub fn build(
    vertices: &[&str],
    arrows: &[(&str, &str, &str)],     // (name, tail, head)
    plus: &[(&[&str], u32)],
    minus: &[(&[&str], u32)],
) -> QuiverPolyhedron {
    let vertices: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
    let vid = |n: &str| {
        vertices
            .iter()
            .position(|v| v == n)
            .unwrap_or_else(|| panic!("unknown vertex {n}"))
    };
    let arrows: Vec<Arrow> = arrows
        .iter()
        .map(|(name, t, h)| Arrow {
            name: name.to_string(),
            tail: vid(t),
            head: vid(h),
        })
        .collect();
    let aid = |n: &str| {
        arrows
            .iter()
            .position(|a| a.name == n)
            .unwrap_or_else(|| panic!("unknown arrow {n}"))
    };
    let mk = |faces: &[(&[&str], u32)]| {
        faces
            .iter()
            .map(|(cycle, weight)| Face {
                cycle: cycle.iter().map(|n| aid(n)).collect(),
                weight: *weight,
            })
            .collect()
    };
    QuiverPolyhedron {
        faces_plus: mk(plus),
        faces_minus: mk(minus),
        vertices,
        arrows,
    }
}

/// F1: one vertex, three loops, hexagonal tiling of the torus.
pub fn hex1() -> QuiverPolyhedron {
    build(
        &["v"],
        &[("x", "v", "v"), ("y", "v", "v"), ("z", "v", "v")],
        &[(&["x", "y", "z"], 1)],
        &[(&["x", "z", "y"], 1)],
    )
}

/// F2: the conifold quiver on the torus.
pub fn conifold() -> QuiverPolyhedron {
    build(
        &["1", "2"],
        &[
            ("a1", "1", "2"),
            ("a2", "1", "2"),
            ("b1", "2", "1"),
            ("b2", "2", "1"),
        ],
        &[(&["a1", "b1", "a2", "b2"], 1)],
        &[(&["a1", "b2", "a2", "b1"], 1)],
    )
}

/// F3: weighted polyhedron on the sphere with three order-3 orbifold
/// points; Jacobi algebra C<x,y,z>/(x^2-yz, y^2-zx, z^2-xy).
pub fn sphere_xyz() -> QuiverPolyhedron {
    build(
        &["v"],
        &[("x", "v", "v"), ("y", "v", "v"), ("z", "v", "v")],
        &[(&["x"], 3), (&["y"], 3), (&["z"], 3)],
        &[(&["x", "y", "z"], 1)],
    )
}

/// F5: the smallest inconsistent torus polyhedron, found by the
/// exhaustive search in `examples/find_bad_torus.rs`.
pub fn bad_torus() -> QuiverPolyhedron {
    crate::poly::from_permutation_pair(4, &[vec![0, 1, 2, 3]], &[vec![0, 1, 3, 2]])
}

/// F4: the antiprism on the sphere. Arrow `a21` points 2 <- 1, i.e. tail 1,
/// head 2. `weighted` selects the nontrivial weighting (triangles 4,
/// squares 3) instead of all weights 1.
pub fn antiprism(weighted: bool) -> QuiverPolyhedron {
    let (tri, sq) = if weighted { (4, 3) } else { (1, 1) };
    build(
        &["1", "2", "3", "4", "5", "6", "7", "8"],
        &[
            ("a21", "1", "2"),
            ("a14", "4", "1"),
            ("a43", "3", "4"),
            ("a32", "2", "3"),
            ("a65", "5", "6"),
            ("a52", "2", "5"),
            ("a26", "6", "2"),
            ("a76", "6", "7"),
            ("a63", "3", "6"),
            ("a37", "7", "3"),
            ("a87", "7", "8"),
            ("a74", "4", "7"),
            ("a48", "8", "4"),
            ("a58", "8", "5"),
            ("a81", "1", "8"),
            ("a15", "5", "1"),
        ],
        &[
            (&["a21", "a14", "a43", "a32"], sq),
            (&["a65", "a52", "a26"], tri),
            (&["a76", "a63", "a37"], tri),
            (&["a87", "a74", "a48"], tri),
            (&["a58", "a81", "a15"], tri),
        ],
        &[
            (&["a65", "a58", "a87", "a76"], sq),
            (&["a21", "a15", "a52"], tri),
            (&["a32", "a26", "a63"], tri),
            (&["a43", "a37", "a74"], tri),
            (&["a14", "a48", "a81"], tri),
        ],
    )
}
