//! JSON wire formats and run reports.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::ForcingContext;
use crate::points::{leaf_points, Point};
use crate::rules::RelationTable;
use crate::site::{generate_topology, CoveringSystem, CoveringSystemDoc, Elem, Space};
use crate::spaces::{SpaceKind, TruncatedSpace};

fn two() -> u32 {
    2
}

/// A truncated Cantor or Baire space, optionally doubled over `points`
/// (default: one eventually constant point per leaf).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedDoc {
    pub kind: SpaceKind,
    #[serde(default = "two")]
    pub branch: u32,
    pub depth: usize,
    #[serde(default)]
    pub double: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceDoc {
    Truncated(TruncatedDoc),
    Covering(CoveringSystemDoc),
}

pub enum LoadedSpace {
    Truncated(Arc<TruncatedSpace>),
    Double(DoubleSpace),
    Generated(Arc<Space>),
}

impl SpaceDoc {
    pub fn load(&self) -> Result<LoadedSpace> {
        match self {
            SpaceDoc::Truncated(t) => {
                let ts = Arc::new(TruncatedSpace::new(t.kind, t.branch, t.depth)?);
                if !t.double {
                    return Ok(LoadedSpace::Truncated(ts));
                }
                let pts = match &t.points {
                    Some(p) => p.clone(),
                    None => leaf_points(&ts, 1),
                };
                Ok(LoadedSpace::Double(DoubleSpace::build(ts, &pts)?))
            }
            SpaceDoc::Covering(doc) => {
                let c = CoveringSystem::from_document(doc)?;
                Ok(LoadedSpace::Generated(Arc::new(generate_topology(&c)?)))
            }
        }
    }
}

impl LoadedSpace {
    pub fn space(&self) -> &Space {
        match self {
            LoadedSpace::Truncated(t) => t.space(),
            LoadedSpace::Double(d) => d.space(),
            LoadedSpace::Generated(s) => s,
        }
    }

    /// The element with this label, e.g. `D()` or `{0,1;0}` in a double.
    pub fn element(&self, label: &str) -> Result<Elem> {
        self.space()
            .basis()
            .find(label)
            .ok_or_else(|| Error::Input(format!("no basic open labelled {label:?}")))
    }

    /// Forcing over the space; a double carries `π` and its constant sections
    /// with as many coordinates as the inner depth.
    pub fn forcing_context(&self, nmax: u32) -> Result<ForcingContext> {
        match self {
            LoadedSpace::Truncated(t) => Ok(ForcingContext::on_space(t, nmax)),
            LoadedSpace::Double(d) => ForcingContext::on_double(d, nmax, d.inner().depth()),
            LoadedSpace::Generated(_) => Err(Error::Unsupported(
                "forcing needs a truncated space or a double".into(),
            )),
        }
    }
}

/// A continuous relation given by finite modulus data: `β = values[α|read]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub name: String,
    #[serde(default = "two")]
    pub branch: u32,
    pub depth: usize,
    pub read: usize,
    /// Keyed by the comma-separated label of `α|read`.
    pub values: BTreeMap<String, Vec<u32>>,
}

impl RelationDoc {
    pub fn to_table(&self) -> Result<RelationTable> {
        let ts = TruncatedSpace::baire(self.branch, self.read);
        for u in ts.level(self.read) {
            match self.values.get(&u.label()) {
                Some(b) if b.len() == self.depth && b.iter().all(|&x| x < self.branch) => {}
                Some(_) => return Err(Error::Input(format!("bad value at {u}"))),
                None => return Err(Error::Input(format!("no value for {u}"))),
            }
        }
        let values = self.values.clone();
        let read = self.read;
        Ok(RelationTable::from_function(
            &self.name,
            self.branch,
            self.depth,
            move |a| values[&a.initial(read).label()].clone(),
        ))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// `{command, config, verdicts, witnesses}`; contains no timings so equal
/// inputs give byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, config: &impl Serialize) -> Self {
        Report {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn witness(&mut self, w: &impl Serialize) {
        self.witnesses
            .push(serde_json::to_value(w).expect("witness serializes"));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_cantor_document() {
        let doc: SpaceDoc =
            serde_json::from_str(r#"{"kind":"cantor","depth":2,"double":true}"#).unwrap();
        let s = doc.load().unwrap();
        assert!(matches!(s, LoadedSpace::Double(_)));
        assert_eq!(s.space().len(), 7 + 4);
        s.element("D()").unwrap();
    }

    #[test]
    fn covering_system_document() {
        let doc: SpaceDoc = serde_json::from_str(
            r#"{"elements":["a","b"],"leq":[["b","a"]],"C":{"a":[["b"]],"b":[["b"]]}}"#,
        )
        .unwrap();
        let s = doc.load().unwrap();
        assert!(s.space().covered_by(Elem(0), &s.space().basis().down(Elem(1)).clone()));
        assert!(s.forcing_context(2).is_err());
    }

    #[test]
    fn relation_document() {
        let doc = RelationDoc {
            name: "first".into(),
            branch: 2,
            depth: 1,
            read: 1,
            values: [("0".to_string(), vec![1]), ("1".to_string(), vec![0])].into(),
        };
        let t = doc.to_table().unwrap();
        assert!(t.holds(&Point::constant(0), &[1]));
        let mut bad = doc.clone();
        bad.values.remove("1");
        assert!(bad.to_table().is_err());
    }
}
