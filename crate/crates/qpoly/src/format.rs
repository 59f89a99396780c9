//! The `.qp` document format: a strict TOML schema for polyhedra plus
//! optional grading, group-action and regression-expectation blocks.
//!
//! Parsing is strict (unknown keys rejected, names resolved, the face
//! axioms checked immediately); serialization is canonical so documents
//! round-trip byte-identically and golden tests stay stable.

use crate::covers::{GroupAction, Permutation};
use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::poly::{Arrow, Face, QuiverPolyhedron};
use crate::rat::{parse_rat, rat_int};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub faces: FacesDoc,
    /// Optional explicit charges, arrow name -> "p/q".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<BTreeMap<String, String>>,
    /// Optional named free actions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actions: Option<BTreeMap<String, ActionDoc>>,
    /// Optional regression values (e.g. chi = "-31/6"); checked and
    /// reported, never asserted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FacesDoc {
    pub plus: Vec<FaceDoc>,
    pub minus: Vec<FaceDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    /// Arrow names in composition order.
    pub cycle: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    /// Image of each vertex, in vertex order.
    pub vertex_map: Vec<String>,
    /// Image of each arrow, in arrow order.
    pub arrow_map: Vec<String>,
}

pub fn parse(text: &str) -> Result<PolyhedronDocument> {
    let doc: PolyhedronDocument =
        toml::from_str(text).map_err(|e| Error::Input(format!("parse error: {e}")))?;
    // Resolve and validate immediately so malformed documents never
    // produce a polyhedron object downstream.
    doc.polyhedron()?;
    Ok(doc)
}

impl PolyhedronDocument {
    /// Resolve names and check the polyhedron axioms.
    pub fn polyhedron(&self) -> Result<QuiverPolyhedron> {
        let mut vidx: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vidx.insert(v, i).is_some() {
                return Err(Error::Input(format!("duplicate vertex id {v:?}")));
            }
        }
        let mut aidx: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if aidx.insert(&a.name, i).is_some() {
                return Err(Error::Input(format!("duplicate arrow id {:?}", a.name)));
            }
        }
        let vertex = |n: &str| {
            vidx.get(n)
                .copied()
                .ok_or_else(|| Error::Input(format!("unknown vertex {n:?}")))
        };
        let arrow = |n: &str| {
            aidx.get(n)
                .copied()
                .ok_or_else(|| Error::Input(format!("unknown arrow {n:?}")))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    name: a.name.clone(),
                    tail: vertex(&a.tail)?,
                    head: vertex(&a.head)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let face = |f: &FaceDoc| {
            Ok(Face {
                cycle: f.cycle.iter().map(|n| arrow(n)).collect::<Result<_>>()?,
                weight: f.weight.unwrap_or(1),
            })
        };
        let qp = QuiverPolyhedron {
            vertices: self.vertices.clone(),
            arrows,
            faces_plus: self.faces.plus.iter().map(face).collect::<Result<_>>()?,
            faces_minus: self.faces.minus.iter().map(face).collect::<Result<_>>()?,
        };
        let violations = qp.validate();
        if let Some(v) = violations.first() {
            return Err(Error::Invalid(format!(
                "{v} ({} violation{})",
                violations.len(),
                if violations.len() == 1 { "" } else { "s" }
            )));
        }
        Ok(qp)
    }

    /// Explicit grading block resolved against the polyhedron.
    pub fn explicit_grading(&self, qp: &QuiverPolyhedron) -> Result<Option<Grading>> {
        let Some(block) = &self.grading else {
            return Ok(None);
        };
        let mut charge = vec![None; qp.arrows.len()];
        for (name, val) in block {
            let i = qp
                .arrows
                .iter()
                .position(|a| &a.name == name)
                .ok_or_else(|| Error::Input(format!("grading names unknown arrow {name:?}")))?;
            charge[i] = Some(parse_rat(val).map_err(Error::Input)?);
        }
        let charge = charge
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    Error::Input(format!("grading misses arrow {:?}", qp.arrows[i].name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let g = Grading {
            charge,
            face_degree: rat_int(2),
        };
        if !g.verify(qp) {
            return Err(Error::Input("grading block violates face degrees".into()));
        }
        Ok(Some(g))
    }

    /// Named action resolved against the polyhedron.
    pub fn action(&self, qp: &QuiverPolyhedron, name: &str) -> Result<GroupAction> {
        let doc = self
            .actions
            .as_ref()
            .and_then(|m| m.get(name))
            .ok_or_else(|| Error::Input(format!("no action named {name:?}")))?;
        if doc.vertex_map.len() != qp.vertices.len() || doc.arrow_map.len() != qp.arrows.len() {
            return Err(Error::Input(format!("action {name:?} has wrong length")));
        }
        let vmap = doc
            .vertex_map
            .iter()
            .map(|n| {
                qp.vertices
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| Error::Input(format!("action maps to unknown vertex {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let amap = doc
            .arrow_map
            .iter()
            .map(|n| {
                qp.arrows
                    .iter()
                    .position(|a| &a.name == n)
                    .ok_or_else(|| Error::Input(format!("action maps to unknown arrow {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let action = GroupAction {
            name: name.to_string(),
            generators: vec![Permutation {
                vertex_map: vmap,
                arrow_map: amap,
            }],
        };
        action.validate(qp)?;
        Ok(action)
    }
}

/// Build a document from a polyhedron (no optional blocks).
pub fn document(qp: &QuiverPolyhedron, name: Option<&str>) -> PolyhedronDocument {
    let face = |f: &Face| FaceDoc {
        cycle: f.cycle.iter().map(|&a| qp.arrows[a].name.clone()).collect(),
        weight: (f.weight != 1).then_some(f.weight),
    };
    PolyhedronDocument {
        name: name.map(str::to_owned),
        vertices: qp.vertices.clone(),
        arrows: qp
            .arrows
            .iter()
            .map(|a| ArrowDoc {
                name: a.name.clone(),
                tail: qp.vertices[a.tail].clone(),
                head: qp.vertices[a.head].clone(),
            })
            .collect(),
        faces: FacesDoc {
            plus: qp.faces_plus.iter().map(face).collect(),
            minus: qp.faces_minus.iter().map(face).collect(),
        },
        grading: None,
        actions: None,
        expected: None,
    }
}

/// Canonical serialization: fixed key order, fixed layout. `parse .
/// serialize` is the identity on parsed documents.
pub fn serialize(doc: &PolyhedronDocument) -> String {
    let mut out = String::new();
    let quote = |s: &str| format!("{s:?}");
    let list = |items: &[String]| {
        let q: Vec<String> = items.iter().map(|s| quote(s)).collect();
        format!("[{}]", q.join(", "))
    };
    if let Some(name) = &doc.name {
        out.push_str(&format!("name = {}\n", quote(name)));
    }
    out.push_str(&format!("vertices = {}\n", list(&doc.vertices)));
    for a in &doc.arrows {
        out.push_str(&format!(
            "\n[[arrows]]\nname = {}\ntail = {}\nhead = {}\n",
            quote(&a.name),
            quote(&a.tail),
            quote(&a.head)
        ));
    }
    for (sign, faces) in [("plus", &doc.faces.plus), ("minus", &doc.faces.minus)] {
        for f in faces {
            out.push_str(&format!("\n[[faces.{sign}]]\ncycle = {}\n", list(&f.cycle)));
            if let Some(w) = f.weight {
                out.push_str(&format!("weight = {w}\n"));
            }
        }
    }
    if let Some(g) = &doc.grading {
        out.push_str("\n[grading]\n");
        for (k, v) in g {
            out.push_str(&format!("{} = {}\n", quote(k), quote(v)));
        }
    }
    if let Some(actions) = &doc.actions {
        for (name, a) in actions {
            out.push_str(&format!(
                "\n[actions.{}]\nvertex_map = {}\narrow_map = {}\n",
                quote(name),
                list(&a.vertex_map),
                list(&a.arrow_map)
            ));
        }
    }
    if let Some(e) = &doc.expected {
        out.push_str("\n[expected]\n");
        for (k, v) in e {
            out.push_str(&format!("{} = {}\n", quote(k), quote(v)));
        }
    }
    out
}

/// Expected chi from the document, formatted for comparison with
/// `format_rat(euler_characteristic())`.
pub fn expected_value<'a>(doc: &'a PolyhedronDocument, key: &str) -> Option<&'a str> {
    doc.expected.as_ref()?.get(key).map(String::as_str)
}
