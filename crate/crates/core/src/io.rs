//! JSON and DOT formats for posets, restrictions, labelings and pair posets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma::GammaPoset;
use crate::labelings::{Labeling, RestrictionFunction};
use crate::poset::{OrderIdeal, Poset};
use crate::promotion::TraceStep;

/// On-disk poset description. `restriction` and `q` are optional extras.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<BTreeMap<String, Vec<i32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<BTreeMap<String, i32>>,
}

/// A parsed poset file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub poset: Poset,
    pub restriction: Option<RestrictionFunction>,
    pub q: Option<i32>,
    /// A sample labeling named in the file, if any.
    pub labeling: Option<Labeling>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: PosetFile = serde_json::from_str(text).map_err(parse_err)?;
    let poset = Poset::new(file.elements, file.covers)?;
    let restriction = file
        .restriction
        .map(|map| RestrictionFunction::from_map(&poset, &map))
        .transpose()?;
    let labeling = file.labeling.map(|map| labeling_from_map(&poset, &map)).transpose()?;
    Ok(Instance {
        poset,
        restriction,
        q: file.q,
        labeling,
    })
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    Ok(parse_instance(text)?.poset)
}

/// Canonical form: elements in list order, covers sorted by position.
pub fn poset_file(poset: &Poset, restriction: Option<&RestrictionFunction>, q: Option<i32>) -> PosetFile {
    PosetFile {
        elements: poset.names().to_vec(),
        covers: poset
            .covers()
            .into_iter()
            .map(|(a, b)| (poset.name(a).to_string(), poset.name(b).to_string()))
            .collect(),
        restriction: restriction.map(|r| r.to_map(poset)),
        q,
        labeling: None,
    }
}

pub fn poset_to_json(poset: &Poset, restriction: Option<&RestrictionFunction>, q: Option<i32>) -> String {
    serde_json::to_string_pretty(&poset_file(poset, restriction, q)).expect("plain data serializes")
}

/// A restriction file: element name to allowed labels.
pub fn parse_restriction(text: &str, poset: &Poset) -> Result<RestrictionFunction> {
    let map: BTreeMap<String, Vec<i32>> = serde_json::from_str(text).map_err(parse_err)?;
    RestrictionFunction::from_map(poset, &map)
}

pub fn labeling_to_value(poset: &Poset, f: &Labeling) -> Value {
    let map: serde_json::Map<String, Value> = poset.names().iter().zip(f.values()).map(|(n, &k)| (n.clone(), json!(k))).collect();
    Value::Object(map)
}

/// A labeling as an object `{name: label}`.
pub fn parse_labeling(text: &str, poset: &Poset) -> Result<Labeling> {
    let map: BTreeMap<String, i32> = serde_json::from_str(text).map_err(parse_err)?;
    labeling_from_map(poset, &map)
}

pub fn labeling_from_map(poset: &Poset, map: &BTreeMap<String, i32>) -> Result<Labeling> {
    for name in map.keys() {
        poset.index_of(name)?;
    }
    poset
        .names()
        .iter()
        .map(|n| {
            map.get(n)
                .copied()
                .ok_or_else(|| Error::InvalidLabeling(format!("no label for `{n}`")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Labeling)
}

pub fn ideal_to_value(poset: &Poset, ideal: &OrderIdeal) -> Value {
    Value::from(ideal.iter().map(|p| poset.name(p).to_string()).collect::<Vec<_>>())
}

pub fn gamma_to_value(gamma: &GammaPoset) -> Value {
    let base = gamma.base();
    let pair = |(p, k): (usize, i32)| json!([base.name(p), k]);
    let ghosts: serde_json::Map<String, Value> = gamma
        .ghosts()
        .into_iter()
        .map(|(p, k)| (base.name(p).to_string(), json!(k)))
        .collect();
    json!({
        "mode": gamma.strictness(),
        "elements": gamma.pairs().iter().map(|&pk| pair(pk)).collect::<Vec<_>>(),
        "covers": gamma.cover_pairs().into_iter().map(|(a, b)| json!([pair(a), pair(b)])).collect::<Vec<_>>(),
        "ghosts": ghosts,
    })
}

pub fn trace_to_value(poset: &Poset, trace: &[TraceStep]) -> Value {
    Value::from(
        trace
            .iter()
            .map(|s| json!({"operator": s.operator, "labeling": labeling_to_value(poset, &s.labeling)}))
            .collect::<Vec<_>>(),
    )
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram with edges drawn from lower to upper.
pub fn poset_to_dot(poset: &Poset, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(title)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for name in poset.names() {
        writeln!(out, "  {};", quote(name)).unwrap();
    }
    for (a, b) in poset.covers() {
        writeln!(out, "  {} -> {};", quote(poset.name(a)), quote(poset.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Pair poset with each ghost `(p, max R(p))` as a bare text node under its chain.
pub fn gamma_to_dot(gamma: &GammaPoset, title: &str) -> String {
    let base = gamma.base();
    let g = gamma.poset();
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(title)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for i in 0..g.len() {
        writeln!(out, "  {};", quote(g.name(i))).unwrap();
    }
    for (p, k) in gamma.ghosts() {
        let id = quote(&format!("ghost ({},{})", base.name(p), k));
        writeln!(
            out,
            "  {id} [shape=plaintext, label={}];",
            quote(&format!("({},{})", base.name(p), k))
        )
        .unwrap();
        // The ghost sits under the lowest pair of its chain, which has the largest label.
        if let Some(&k_low) = gamma.restriction().starred(p).last() {
            let low = gamma.index_of(p, k_low).expect("pair exists");
            writeln!(out, "  {id} -> {} [style=dotted, arrowhead=none];", quote(g.name(low))).unwrap();
        }
    }
    for (a, b) in g.covers() {
        writeln!(out, "  {} -> {};", quote(g.name(a)), quote(g.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::build_gamma;

    const FIG1: &str = include_str!("../../../fixtures/fig1.json");

    #[test]
    fn round_trip() {
        let inst = parse_instance(FIG1).unwrap();
        let text = poset_to_json(&inst.poset, inst.restriction.as_ref(), inst.q);
        let again = parse_instance(&text).unwrap();
        assert_eq!(again.poset.names(), inst.poset.names());
        assert_eq!(again.poset.covers(), inst.poset.covers());
        assert_eq!(again.restriction, inst.restriction);
        assert_eq!(poset_to_json(&again.poset, again.restriction.as_ref(), again.q), text);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_instance("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_instance(r#"{"elements": ["a"], "covers": [], "extra": 1}"#),
            Err(Error::Parse(_))
        ));
        assert_eq!(
            parse_instance(r#"{"elements": ["a"], "covers": [["a", "b"]]}"#).unwrap_err(),
            Error::UnknownElement("b".into())
        );
    }

    #[test]
    fn labelings_by_name() {
        let p = parse_poset(FIG1).unwrap();
        let f = parse_labeling(r#"{"a":1,"b":2,"c":4,"d":5,"e":7}"#, &p).unwrap();
        assert_eq!(f, Labeling(vec![1, 2, 4, 5, 7]));
        assert_eq!(labeling_to_value(&p, &f), json!({"a":1,"b":2,"c":4,"d":5,"e":7}));
        assert!(parse_labeling(r#"{"a":1}"#, &p).is_err());
    }

    #[test]
    fn dot_has_ghosts() {
        let inst = parse_instance(FIG1).unwrap();
        let g = build_gamma(&inst.poset, inst.restriction.as_ref().unwrap()).unwrap();
        let dot = gamma_to_dot(&g, "fig1");
        assert_eq!(dot.matches("shape=plaintext").count(), 5);
        assert_eq!(dot.matches("style=dotted").count(), 5);
        assert!(dot.contains("\"(a,1)\" -> \"(b,3)\";"));
        let v = gamma_to_value(&g);
        assert_eq!(v["elements"].as_array().unwrap().len(), 11);
        assert_eq!(v["ghosts"]["e"], json!(9));
    }

    #[test]
    fn hasse_dot_edges_point_up() {
        let dot = poset_to_dot(&Poset::chain(2), "c");
        assert!(dot.contains("\"1\" -> \"2\";"));
    }
}
