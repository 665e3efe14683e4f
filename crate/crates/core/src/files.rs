//! Instance and matching files.
//!
//! An instance is a JSON document with fixed fields: `doctors`, `hospitals`,
//! `edges` (pairs of names), `doctor_prefs` (doctor to tier lists of
//! hospital names), `hospital_utils` (hospital to doctor to positive
//! integer), and `matroids` (hospital to a descriptor of type `uniform`,
//! `laminar`, or `explicit`). Since the graph is simple, an edge at a known
//! vertex is always identified by the opposite endpoint's name. A matching
//! file is a JSON list of `[doctor, hospital]` pairs.
//!
//! Parsing then serializing then parsing again yields an identical
//! instance.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{Instance, MarketError, MatroidDesc};
use crate::sets::ElemSet;

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown doctor {name:?} in {context}")]
    UnknownDoctor { name: String, context: String },
    #[error("unknown hospital {name:?} in {context}")]
    UnknownHospital { name: String, context: String },
    #[error("no edge ({doctor},{hospital}) referenced by {context}")]
    UnknownEdge { doctor: String, hospital: String, context: String },
    #[error("missing {what} entry for {name}")]
    MissingEntry { what: &'static str, name: String },
    #[error(transparent)]
    Market(#[from] MarketError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    doctors: Vec<String>,
    hospitals: Vec<String>,
    edges: Vec<(String, String)>,
    doctor_prefs: BTreeMap<String, Vec<Vec<String>>>,
    hospital_utils: BTreeMap<String, BTreeMap<String, u64>>,
    matroids: BTreeMap<String, MatroidFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum MatroidFile {
    Uniform { capacity: usize },
    Laminar { sets: Vec<LaminarSetFile> },
    Explicit { independent: Vec<Vec<String>> },
}

#[derive(Serialize, Deserialize)]
struct LaminarSetFile {
    doctors: Vec<String>,
    cap: usize,
}

struct NameTables<'a> {
    inst_doctors: HashMap<&'a str, usize>,
    inst_hospitals: HashMap<&'a str, usize>,
    edge_ids: HashMap<(usize, usize), usize>,
}

impl<'a> NameTables<'a> {
    fn build(
        doctors: &'a [String],
        hospitals: &'a [String],
        edges: &[(usize, usize)],
    ) -> NameTables<'a> {
        NameTables {
            inst_doctors: doctors.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect(),
            inst_hospitals: hospitals.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect(),
            edge_ids: edges.iter().enumerate().map(|(i, &dh)| (dh, i)).collect(),
        }
    }

    fn doctor(&self, name: &str, context: &str) -> Result<usize, FileError> {
        self.inst_doctors.get(name).copied().ok_or_else(|| FileError::UnknownDoctor {
            name: name.to_string(),
            context: context.to_string(),
        })
    }

    fn hospital(&self, name: &str, context: &str) -> Result<usize, FileError> {
        self.inst_hospitals.get(name).copied().ok_or_else(|| FileError::UnknownHospital {
            name: name.to_string(),
            context: context.to_string(),
        })
    }

    fn edge(
        &self,
        d: usize,
        h: usize,
        names: (&str, &str),
        context: &str,
    ) -> Result<usize, FileError> {
        self.edge_ids.get(&(d, h)).copied().ok_or_else(|| FileError::UnknownEdge {
            doctor: names.0.to_string(),
            hospital: names.1.to_string(),
            context: context.to_string(),
        })
    }
}

/// Parses and fully validates an instance document.
pub fn instance_from_str(text: &str) -> Result<Instance, FileError> {
    let file: InstanceFile = serde_json::from_str(text)?;

    let mut edges = Vec::with_capacity(file.edges.len());
    // name maps for the endpoints themselves
    let pre = NameTables::build(&file.doctors, &file.hospitals, &[]);
    for (dname, hname) in &file.edges {
        let d = pre.doctor(dname, "edges")?;
        let h = pre.hospital(hname, "edges")?;
        edges.push((d, h));
    }
    let tables = NameTables::build(&file.doctors, &file.hospitals, &edges);

    for name in file.doctor_prefs.keys() {
        tables.doctor(name, "doctor_prefs")?;
    }
    let mut tiers = Vec::with_capacity(file.doctors.len());
    for (d, dname) in file.doctors.iter().enumerate() {
        let has_edges = edges.iter().any(|&(ed, _)| ed == d);
        let context = format!("doctor_prefs of {dname}");
        match file.doctor_prefs.get(dname) {
            None if has_edges => {
                return Err(FileError::MissingEntry { what: "doctor_prefs", name: dname.clone() })
            }
            None => tiers.push(Vec::new()),
            Some(pref_tiers) => {
                let mut resolved = Vec::with_capacity(pref_tiers.len());
                for tier in pref_tiers {
                    let mut ids = Vec::with_capacity(tier.len());
                    for hname in tier {
                        let h = tables.hospital(hname, &context)?;
                        ids.push(tables.edge(d, h, (dname, hname), &context)?);
                    }
                    resolved.push(ids);
                }
                tiers.push(resolved);
            }
        }
    }

    for name in file.hospital_utils.keys() {
        tables.hospital(name, "hospital_utils")?;
    }
    let mut utilities: Vec<Option<u64>> = vec![None; edges.len()];
    for (h, hname) in file.hospitals.iter().enumerate() {
        let context = format!("hospital_utils of {hname}");
        if let Some(utils) = file.hospital_utils.get(hname) {
            for (dname, &value) in utils {
                let d = tables.doctor(dname, &context)?;
                let e = tables.edge(d, h, (dname, hname), &context)?;
                utilities[e] = Some(value);
            }
        }
    }
    let mut resolved_utilities = Vec::with_capacity(edges.len());
    for (e, value) in utilities.into_iter().enumerate() {
        match value {
            Some(v) => resolved_utilities.push(v),
            None => {
                let (dname, hname) = &file.edges[e];
                return Err(FileError::MissingEntry {
                    what: "hospital_utils",
                    name: format!("({dname},{hname})"),
                });
            }
        }
    }

    for name in file.matroids.keys() {
        tables.hospital(name, "matroids")?;
    }
    let mut matroids = Vec::with_capacity(file.hospitals.len());
    for (h, hname) in file.hospitals.iter().enumerate() {
        let has_edges = edges.iter().any(|&(_, eh)| eh == h);
        let context = format!("matroid of {hname}");
        match file.matroids.get(hname) {
            None if has_edges => {
                return Err(FileError::MissingEntry { what: "matroids", name: hname.clone() })
            }
            None => matroids.push(MatroidDesc::Uniform { capacity: 1 }),
            Some(MatroidFile::Uniform { capacity }) => {
                matroids.push(MatroidDesc::Uniform { capacity: *capacity })
            }
            Some(MatroidFile::Laminar { sets }) => {
                let mut resolved = Vec::with_capacity(sets.len());
                for set in sets {
                    let mut ids = Vec::with_capacity(set.doctors.len());
                    for dname in &set.doctors {
                        let d = tables.doctor(dname, &context)?;
                        ids.push(tables.edge(d, h, (dname, hname), &context)?);
                    }
                    resolved.push((ids, set.cap));
                }
                matroids.push(MatroidDesc::Laminar { sets: resolved });
            }
            Some(MatroidFile::Explicit { independent }) => {
                let mut family = Vec::with_capacity(independent.len());
                for members in independent {
                    let mut ids = Vec::with_capacity(members.len());
                    for dname in members {
                        let d = tables.doctor(dname, &context)?;
                        ids.push(tables.edge(d, h, (dname, hname), &context)?);
                    }
                    family.push(ids);
                }
                matroids.push(MatroidDesc::Explicit { independent: family });
            }
        }
    }

    Ok(Instance::from_parts(
        file.doctors,
        file.hospitals,
        edges,
        tiers,
        resolved_utilities,
        matroids,
    )?)
}

/// Serializes an instance back into the document format; the result parses
/// to an equal instance.
pub fn instance_to_string(inst: &Instance) -> String {
    let doctor_name = |d: usize| inst.doctor_name(d).to_string();
    let hospital_name = |h: usize| inst.hospital_name(h).to_string();

    let edges: Vec<(String, String)> = (0..inst.n_edges())
        .map(|e| {
            let (d, h) = inst.endpoints(e);
            (doctor_name(d), hospital_name(h))
        })
        .collect();

    let mut doctor_prefs = BTreeMap::new();
    for d in 0..inst.n_doctors() {
        let tiers: Vec<Vec<String>> = inst
            .tiers(d)
            .iter()
            .map(|tier| tier.iter().map(|&e| hospital_name(inst.endpoints(e).1)).collect())
            .collect();
        doctor_prefs.insert(doctor_name(d), tiers);
    }

    let mut hospital_utils = BTreeMap::new();
    for h in 0..inst.n_hospitals() {
        let mut utils = BTreeMap::new();
        for e in inst.hospital_edges(h).iter() {
            utils.insert(doctor_name(inst.endpoints(e).0), inst.utility(e));
        }
        hospital_utils.insert(hospital_name(h), utils);
    }

    let mut matroids = BTreeMap::new();
    for h in 0..inst.n_hospitals() {
        let file_desc = match inst.matroid_desc(h) {
            MatroidDesc::Uniform { capacity } => MatroidFile::Uniform { capacity: *capacity },
            MatroidDesc::Laminar { sets } => MatroidFile::Laminar {
                sets: sets
                    .iter()
                    .map(|(ids, cap)| LaminarSetFile {
                        doctors: ids.iter().map(|&e| doctor_name(inst.endpoints(e).0)).collect(),
                        cap: *cap,
                    })
                    .collect(),
            },
            MatroidDesc::Explicit { independent } => MatroidFile::Explicit {
                independent: independent
                    .iter()
                    .map(|ids| ids.iter().map(|&e| doctor_name(inst.endpoints(e).0)).collect())
                    .collect(),
            },
        };
        matroids.insert(hospital_name(h), file_desc);
    }

    let file = InstanceFile {
        doctors: (0..inst.n_doctors()).map(doctor_name).collect(),
        hospitals: (0..inst.n_hospitals()).map(hospital_name).collect(),
        edges,
        doctor_prefs,
        hospital_utils,
        matroids,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serialization");
    text.push('\n');
    text
}

pub fn load_instance(path: &Path) -> Result<Instance, FileError> {
    instance_from_str(&fs::read_to_string(path)?)
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), FileError> {
    Ok(fs::write(path, instance_to_string(inst))?)
}

/// Parses a matching file against its instance. Every listed pair must be
/// an edge of the instance; whether the edge set is an actual matching is
/// the caller's question to ask.
pub fn matching_from_str(inst: &Instance, text: &str) -> Result<ElemSet, FileError> {
    let pairs: Vec<(String, String)> = serde_json::from_str(text)?;
    let mut doctors = HashMap::new();
    for d in 0..inst.n_doctors() {
        doctors.insert(inst.doctor_name(d).to_string(), d);
    }
    let mut hospitals = HashMap::new();
    for h in 0..inst.n_hospitals() {
        hospitals.insert(inst.hospital_name(h).to_string(), h);
    }
    let mut edge_ids = HashMap::new();
    for e in 0..inst.n_edges() {
        edge_ids.insert(inst.endpoints(e), e);
    }
    let mut mu = ElemSet::EMPTY;
    for (dname, hname) in &pairs {
        let d = *doctors.get(dname.as_str()).ok_or_else(|| FileError::UnknownDoctor {
            name: dname.clone(),
            context: "matching".into(),
        })?;
        let h = *hospitals.get(hname.as_str()).ok_or_else(|| FileError::UnknownHospital {
            name: hname.clone(),
            context: "matching".into(),
        })?;
        let e = *edge_ids.get(&(d, h)).ok_or_else(|| FileError::UnknownEdge {
            doctor: dname.clone(),
            hospital: hname.clone(),
            context: "matching".into(),
        })?;
        mu = mu.with(e);
    }
    Ok(mu)
}

/// Serializes a matching as `[doctor, hospital]` pairs in edge-id order.
pub fn matching_to_string(inst: &Instance, mu: ElemSet) -> String {
    let pairs: Vec<(String, String)> = mu
        .iter()
        .map(|e| {
            let (d, h) = inst.endpoints(e);
            (inst.doctor_name(d).to_string(), inst.hospital_name(h).to_string())
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&pairs).expect("matching serialization");
    text.push('\n');
    text
}

pub fn load_matching(inst: &Instance, path: &Path) -> Result<ElemSet, FileError> {
    matching_from_str(inst, &fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIE: &str = r#"{
        "doctors": ["d1", "d2"],
        "hospitals": ["h1"],
        "edges": [["d1", "h1"], ["d2", "h1"]],
        "doctor_prefs": {"d1": [["h1"]], "d2": [["h1"]]},
        "hospital_utils": {"h1": {"d1": 1, "d2": 1}},
        "matroids": {"h1": {"type": "uniform", "capacity": 1}}
    }"#;

    #[test]
    fn parses_the_tie_instance() {
        let inst = instance_from_str(TIE).unwrap();
        assert_eq!(inst.n_doctors(), 2);
        assert_eq!(inst.n_hospitals(), 1);
        assert_eq!(inst.n_edges(), 2);
        assert_eq!(inst.endpoints(0), (0, 0));
        assert_eq!(inst.utility(0), 1);
        assert_eq!(inst.tiers(0), &[vec![0]]);
    }

    #[test]
    fn round_trip_produces_equal_instances() {
        let inst = instance_from_str(TIE).unwrap();
        let text = instance_to_string(&inst);
        let again = instance_from_str(&text).unwrap();
        assert_eq!(inst, again);
        // and the serialization itself is a fixed point
        assert_eq!(text, instance_to_string(&again));
    }

    #[test]
    fn laminar_and_explicit_descriptors_round_trip() {
        let text = r#"{
            "doctors": ["d1", "d2", "d3"],
            "hospitals": ["h1", "h2"],
            "edges": [["d1", "h1"], ["d2", "h1"], ["d3", "h1"], ["d1", "h2"]],
            "doctor_prefs": {
                "d1": [["h1", "h2"]],
                "d2": [["h1"]],
                "d3": [["h1"]]
            },
            "hospital_utils": {
                "h1": {"d1": 2, "d2": 1, "d3": 1},
                "h2": {"d1": 3}
            },
            "matroids": {
                "h1": {"type": "laminar", "sets": [
                    {"doctors": ["d1", "d2"], "cap": 1},
                    {"doctors": ["d1", "d2", "d3"], "cap": 2}
                ]},
                "h2": {"type": "explicit", "independent": [[], ["d1"]]}
            }
        }"#;
        let inst = instance_from_str(text).unwrap();
        let again = instance_from_str(&instance_to_string(&inst)).unwrap();
        assert_eq!(inst, again);
        assert!(!inst.matroid(0).is_independent([0usize, 1].into_iter().collect()));
        assert!(inst.matroid(0).is_independent([0usize, 2].into_iter().collect()));
    }

    #[test]
    fn unknown_names_are_positioned_errors() {
        let text = TIE.replace("\"edges\": [[\"d1\", \"h1\"]", "\"edges\": [[\"dx\", \"h1\"]");
        match instance_from_str(&text).unwrap_err() {
            FileError::UnknownDoctor { name, context } => {
                assert_eq!(name, "dx");
                assert_eq!(context, "edges");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_sections_are_reported() {
        let text = TIE.replace("\"d2\": [[\"h1\"]]", "\"d2x\": [[\"h1\"]]");
        assert!(matches!(
            instance_from_str(&text).unwrap_err(),
            FileError::UnknownDoctor { .. }
        ));

        let text = TIE.replace(", \"d2\": 1", "");
        match instance_from_str(&text).unwrap_err() {
            FileError::MissingEntry { what, name } => {
                assert_eq!(what, "hospital_utils");
                assert_eq!(name, "(d2,h1)");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn market_validation_errors_pass_through() {
        let text = TIE.replace("\"d1\": 1", "\"d1\": 0");
        assert!(matches!(
            instance_from_str(&text).unwrap_err(),
            FileError::Market(MarketError::ZeroUtility { .. })
        ));
    }

    #[test]
    fn edgeless_vertices_need_no_entries() {
        let text = r#"{
            "doctors": ["d1"],
            "hospitals": ["h1"],
            "edges": [],
            "doctor_prefs": {},
            "hospital_utils": {},
            "matroids": {}
        }"#;
        let inst = instance_from_str(text).unwrap();
        assert_eq!(inst.n_edges(), 0);
        let again = instance_from_str(&instance_to_string(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn matchings_parse_against_the_instance() {
        let inst = instance_from_str(TIE).unwrap();
        let mu = matching_from_str(&inst, r#"[["d1", "h1"]]"#).unwrap();
        assert_eq!(mu, ElemSet::singleton(0));
        assert_eq!(matching_from_str(&inst, "[]").unwrap(), ElemSet::EMPTY);

        assert!(matches!(
            matching_from_str(&inst, r#"[["d9", "h1"]]"#).unwrap_err(),
            FileError::UnknownDoctor { .. }
        ));

        let round = matching_to_string(&inst, mu);
        assert_eq!(matching_from_str(&inst, &round).unwrap(), mu);
    }

    #[test]
    fn json_syntax_errors_carry_position() {
        let err = instance_from_str("{ not json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "no position in {msg:?}");
    }
}
