//! JSON documents for pocsets.
//!
//! ```json
//! {"schema": "arbor/1",
//!  "elements": ["A", "B"],
//!  "corners": {"A|B": ["large", "empty", "large", "large"]},
//!  "parts": {"X1": ["A"], "X2": ["B"]},
//!  "action": {"g": {"A": "B", "B": "A*"}}}
//! ```
//!
//! Either `corners` or `relations` (a list of `[a, b]` meaning `a <= b`) gives the order.
//! `"raw": true` keeps the relations exactly as listed, without star duals or closure.

use serde::{Deserialize, Serialize};
use serde_json::Map;

use crate::error::{Error, Result};
use crate::pocset::{
    check_position, validate_pocset, CornerStatus, CornerTable, Pocset, PocsetBuilder, PositionMode,
};
use crate::report::ValidationReport;

pub const SCHEMA: &str = "arbor/1";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PocsetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub corners: Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub parts: Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub action: Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub raw: bool,
}

fn value<T: for<'de> Deserialize<'de>>(v: &serde_json::Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(format!("{what}: {e}")))
}

fn corner_key(key: &str) -> Result<(&str, &str)> {
    key.split_once('|').ok_or_else(|| Error::Malformed(format!("corner key {key} is not of the form A|B")))
}

impl PocsetDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PocsetDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if let Some(s) = &doc.schema {
            if s != SCHEMA {
                return Err(Error::Malformed(format!("unsupported schema {s}")));
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    fn corner_entries(&self) -> Result<Vec<(String, String, [CornerStatus; 4])>> {
        self.corners
            .iter()
            .map(|(k, v)| {
                let (a, b) = corner_key(k)?;
                Ok((a.to_string(), b.to_string(), value(v, k)?))
            })
            .collect()
    }

    pub fn builder(&self) -> Result<PocsetBuilder> {
        let mut b = Pocset::builder().elements(self.elements.iter().map(String::as_str));
        for (name, members) in &self.parts {
            b = b.part_owned(name.clone(), value(members, name)?);
        }
        for (a, c, st) in self.corner_entries()? {
            b = b.corner(&a, &c, st);
        }
        for (a, c) in &self.relations {
            b = b.relation(a, c);
        }
        for (name, images) in &self.action {
            let images: Map<String, serde_json::Value> = value(images, name)?;
            let images = images
                .iter()
                .map(|(k, v)| Ok((k.clone(), value::<String>(v, k)?)))
                .collect::<Result<Vec<_>>>()?;
            b = b.generator_owned(name.clone(), images);
        }
        if self.raw {
            b = b.raw();
        }
        Ok(b)
    }

    pub fn build(&self) -> Result<Pocset> {
        self.builder()?.build()
    }

    /// The corner table alone, before any order is derived from it.
    pub fn corner_table(&self) -> Result<Option<CornerTable>> {
        if self.corners.is_empty() {
            return Ok(None);
        }
        let mut t = CornerTable::new(self.elements.clone());
        for (a, b, st) in self.corner_entries()? {
            t.set_named(&a, &b, st)?;
        }
        Ok(Some(t))
    }

    /// Full check of a document: corner consistency first, then the order axioms.
    /// Malformed input is an error; axiom failures land in the report.
    pub fn validate(&self, require_nested: bool) -> Result<ValidationReport> {
        if let Some(t) = self.corner_table()? {
            t.require_complete()?;
            let r = check_position(&t, PositionMode::Good);
            if !r.ok {
                return Ok(r);
            }
        }
        match self.build() {
            Ok(p) => Ok(validate_pocset(&p, require_nested)),
            Err(e) if !e.is_structural() => {
                let mut r = ValidationReport::new();
                r.push(error_axiom(&e), vec![e.to_string()]);
                Ok(r)
            }
            Err(e) => Err(e),
        }
    }

    /// Document for a pocset. Orders come out as corners when the pocset has them, otherwise
    /// as cover pairs, which rebuild to the same order.
    pub fn from_pocset(p: &Pocset) -> Self {
        let mut doc = PocsetDoc {
            schema: Some(SCHEMA.to_string()),
            elements: (0..p.n_pairs()).map(|i| p.base(i).to_string()).collect(),
            ..Default::default()
        };
        match p.corners() {
            Some(t) => {
                for (a, b, st) in t.entries() {
                    doc.corners.insert(format!("{a}|{b}"), serde_json::to_value(st).unwrap());
                }
            }
            None => {
                doc.relations = p.cover_pairs().into_iter().map(|(a, c)| (p.name(a), p.name(c))).collect();
            }
        }
        for (pi, name) in p.parts().iter().enumerate() {
            let members: Vec<String> = p.pairs_in_part(pi).into_iter().map(|x| p.base(x).to_string()).collect();
            doc.parts.insert(name.clone(), members.into());
        }
        for g in p.action() {
            let mut images = Map::new();
            for x in 0..p.n_pairs() {
                if let Some(y) = g.apply(2 * x) {
                    images.insert(p.base(x).to_string(), p.name(y).into());
                }
            }
            doc.action.insert(g.name.clone(), images.into());
        }
        doc
    }
}

fn error_axiom(e: &Error) -> String {
    match e {
        Error::Axiom { axiom, .. } => axiom.clone(),
        Error::GoodPosition(..) => "good-position".into(),
        Error::Crossing(..) => "comparable".into(),
        _ => "consistency".into(),
    }
}

pub fn read_pocset(text: &str) -> Result<Pocset> {
    PocsetDoc::from_json(text)?.build()
}

pub fn write_pocset(p: &Pocset) -> String {
    PocsetDoc::from_pocset(p).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    const N4: &str = r#"{"elements":["A","B"],"corners":{"A|B":["large","empty","large","large"]},
        "parts":{"X1":["A"],"X2":["B"]}}"#;

    #[test]
    fn reads_corner_document() {
        let p = read_pocset(N4).unwrap();
        assert_eq!(p.n_pairs(), 2);
        let (a, b) = (p.id_of("A").unwrap(), p.id_of("B").unwrap());
        assert!(p.leq(a, b));
        assert!(!p.crosses(a, b));
    }

    #[test]
    fn round_trip_is_stable() {
        let p = read_pocset(N4).unwrap();
        let text = write_pocset(&p);
        let q = read_pocset(&text).unwrap();
        assert_eq!(write_pocset(&q), text);
    }

    #[test]
    fn relation_round_trip_keeps_order() {
        let doc = r#"{"elements":["A","B","C"],"relations":[["A","C"],["C","B"]],"action":{"g":{"A":"B*"}}}"#;
        let p = read_pocset(doc).unwrap();
        let q = read_pocset(&write_pocset(&p)).unwrap();
        for x in 0..p.n_elements() {
            for y in 0..p.n_elements() {
                assert_eq!(p.leq(x, y), q.leq(x, y));
            }
        }
        assert_eq!(q.action()[0].map, p.action()[0].map);
    }

    #[test]
    fn cyclic_relations_fail_validation() {
        let doc = PocsetDoc::from_json(r#"{"elements":["A","B"],"relations":[["A","B"],["B","A"]]}"#).unwrap();
        let r = doc.validate(false).unwrap();
        assert!(r.has("antisymmetric"));
    }

    #[test]
    fn bad_position_fails_validation() {
        let doc = PocsetDoc::from_json(
            r#"{"elements":["A","B"],"corners":{"A|B":["small-nonempty","small-nonempty","large","large"]}}"#,
        )
        .unwrap();
        let r = doc.validate(false).unwrap();
        assert!(!r.ok);
    }

    #[test]
    fn malformed_is_an_error() {
        assert!(PocsetDoc::from_json(r#"{"elements":["A"],"bogus":1}"#).is_err());
        let doc = PocsetDoc::from_json(r#"{"elements":["A"],"relations":[["A","Z"]]}"#).unwrap();
        assert!(doc.validate(false).is_err());
        assert!(PocsetDoc::from_json(r#"{"schema":"arbor/9","elements":[]}"#).is_err());
    }
}
