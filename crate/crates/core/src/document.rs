//! The self-describing instance document format (UTF-8 JSON).
//!
//! ```json
//! {
//!   "objects":  [ {"id": "x1", "label": 0}, {"id": "x2", "label": 1} ],
//!   "features": [ {"id": "f1", "values": {"x1": "1/2", "x2": "3"}} ],
//!   "lattice":  [ [], ["f1"] ]
//! }
//! ```
//!
//! Rational values are written as `"p/q"` or integer strings and are
//! canonicalized (reduced, sign-normalized) on load. The lattice must
//! include the empty set. Declaration order carries no meaning: loading a
//! permuted document yields the identical instance.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{FeatureId, FeatureSet, Instance, Label, ObjectId};
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub objects: Vec<ObjectDecl>,
    pub features: Vec<FeatureDecl>,
    pub lattice: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDecl {
    pub id: String,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDecl {
    pub id: String,
    pub values: BTreeMap<String, String>,
}

/// Validate a decoded document into an [`Instance`].
pub fn validate_instance(doc: &InstanceDoc) -> Result<Instance> {
    let objects = doc
        .objects
        .iter()
        .map(|o| Ok((ObjectId::new(o.id.clone()), Label::from_u8(o.label)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut features = Vec::with_capacity(doc.features.len());
    for decl in &doc.features {
        let mut table = BTreeMap::new();
        for (obj, text) in &decl.values {
            table.insert(ObjectId::new(obj.clone()), parse_rational(text)?);
        }
        features.push((FeatureId::new(decl.id.clone()), table));
    }
    let lattice = doc
        .lattice
        .iter()
        .map(|ids| FeatureSet::from_ids(ids.iter().map(|s| FeatureId::new(s.clone()))))
        .collect();
    Instance::new(objects, features, lattice)
}

/// Render an instance back into its canonical document: objects in pool
/// order, features sorted by id, canonical rational strings, lattice in
/// (size, lexicographic) order.
pub fn to_document(inst: &Instance) -> InstanceDoc {
    let objects = inst
        .objects()
        .iter()
        .map(|id| ObjectDecl { id: id.as_str().to_string(), label: inst.target(id).unwrap().as_u8() })
        .collect();
    let features = inst
        .feature_ids()
        .map(|fid| {
            let fs = FeatureSet::from_ids([fid.clone()]);
            let values = inst
                .objects()
                .iter()
                .map(|obj| {
                    let pt = inst.featurize(&fs, obj).unwrap();
                    (obj.as_str().to_string(), format_rational(&pt.coords()[0]))
                })
                .collect();
            FeatureDecl { id: fid.as_str().to_string(), values }
        })
        .collect();
    let lattice = inst
        .lattice()
        .sets()
        .iter()
        .map(|fs| fs.iter().map(|f| f.as_str().to_string()).collect())
        .collect();
    InstanceDoc { objects, features, lattice }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    validate_instance(&doc)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut out = serde_json::to_string_pretty(&to_document(inst)).expect("document serializes");
    out.push('\n');
    out
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::MalformedDocument(format!("{}: {e}", path.as_ref().display())))?;
    parse_instance(&text)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), instance_to_json(inst))
        .map_err(|e| Error::MalformedDocument(format!("{}: {e}", path.as_ref().display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const THRESH4: &str = r#"{
        "objects": [
            {"id": "x1", "label": 0},
            {"id": "x2", "label": 0},
            {"id": "x3", "label": 1},
            {"id": "x4", "label": 1}
        ],
        "features": [
            {"id": "f1", "values": {"x1": "1", "x2": "2", "x3": "3", "x4": "4"}}
        ],
        "lattice": [[], ["f1"]]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = parse_instance(THRESH4).unwrap();
        assert_eq!(inst.len(), 4);
        let json = instance_to_json(&inst);
        let again = parse_instance(&json).unwrap();
        assert_eq!(inst, again);
        assert_eq!(instance_to_json(&again), json);
    }

    #[test]
    fn canonicalizes_rationals_on_load() {
        let doc = THRESH4.replace("\"2\"", "\"4/2\"");
        let inst = parse_instance(&doc).unwrap();
        assert_eq!(inst, parse_instance(THRESH4).unwrap());
    }

    #[test]
    fn rejects_zero_denominator() {
        let doc = THRESH4.replace("\"2\"", "\"2/0\"");
        assert!(matches!(parse_instance(&doc), Err(Error::BadRational { .. })));
    }

    #[test]
    fn rejects_bad_label() {
        let doc = THRESH4.replace("\"label\": 1", "\"label\": 3");
        assert!(matches!(parse_instance(&doc), Err(Error::MalformedDocument(_))));
    }

    #[test]
    fn feature_declaration_order_is_immaterial() {
        let a = r#"{
            "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 1}],
            "features": [
                {"id": "f1", "values": {"x1": "0", "x2": "1"}},
                {"id": "f2", "values": {"x1": "5", "x2": "7"}}
            ],
            "lattice": [[], ["f1"], ["f1", "f2"]]
        }"#;
        let b = r#"{
            "objects": [{"id": "x1", "label": 0}, {"id": "x2", "label": 1}],
            "features": [
                {"id": "f2", "values": {"x2": "7", "x1": "5"}},
                {"id": "f1", "values": {"x1": "0", "x2": "1"}}
            ],
            "lattice": [["f1", "f2"], ["f1"], []]
        }"#;
        assert_eq!(parse_instance(a).unwrap(), parse_instance(b).unwrap());
    }
}
