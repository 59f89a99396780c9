//! Regenerates `fixtures/*.qp` from the programmatic definitions in
//! `testfix`. Run from the workspace root:
//!
//!     cargo run -p qpoly --example gen_fixtures

use qpoly::covers::{homology, translation_cover};
use qpoly::format::{document, serialize, ActionDoc, PolyhedronDocument};
use qpoly::poly::QuiverPolyhedron;
use qpoly::rat::format_rat;
use qpoly::testfix;
use std::collections::BTreeMap;
use std::fs;

fn with_expected_chi(qp: &QuiverPolyhedron, name: &str, chi: Option<&str>) -> PolyhedronDocument {
    let mut doc = document(qp, Some(name));
    let chi = chi
        .map(str::to_owned)
        .unwrap_or_else(|| format_rat(&qp.euler_characteristic()));
    doc.expected = Some([("chi".to_string(), chi)].into());
    doc
}

fn main() {
    fs::create_dir_all("fixtures").expect("create fixtures/");
    let mut docs: Vec<PolyhedronDocument> = vec![
        with_expected_chi(&testfix::hex1(), "hex1", None),
        with_expected_chi(&testfix::conifold(), "conifold", None),
        with_expected_chi(&testfix::sphere_xyz(), "sphereXYZ", None),
        with_expected_chi(&testfix::antiprism(false), "antiprism", None),
        // The recorded value deliberately disagrees with the formula; the
        // report prints a discrepancy note for it.
        with_expected_chi(&testfix::antiprism(true), "antiprism-weighted", Some("-31/6")),
        with_expected_chi(&testfix::bad_torus(), "badTorus", None),
    ];

    // Three-fold translation cover of hex1 with its deck transformation
    // stored as the named action "deck".
    let base = testfix::hex1();
    let h = homology(&base).expect("hex1 is a torus");
    let (cover, action) = translation_cover(&base, &h, 3, 0).expect("translation cover");
    let mut doc = with_expected_chi(&cover, "hex1-cover3", None);
    let deck = &action.generators[0];
    doc.actions = Some(
        [(
            "deck".to_string(),
            ActionDoc {
                vertex_map: deck
                    .vertex_map
                    .iter()
                    .map(|&v| cover.vertices[v].clone())
                    .collect(),
                arrow_map: deck
                    .arrow_map
                    .iter()
                    .map(|&a| cover.arrows[a].name.clone())
                    .collect(),
            },
        )]
        .into(),
    );
    docs.push(doc);

    let mut index: BTreeMap<String, String> = BTreeMap::new();
    for doc in &docs {
        let name = doc.name.clone().unwrap();
        let path = format!("fixtures/{name}.qp");
        fs::write(&path, serialize(doc)).expect("write fixture");
        index.insert(name, path);
    }
    for (name, path) in index {
        println!("wrote {path} ({name})");
    }
}
