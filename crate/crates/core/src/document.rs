//! JSON documents for structures and intensional interpretations.
//!
//! Structure:
//!
//! ```json
//! {"props": ["p", "q"], "measure": {"00": "1/4", "01": "1/4", "10": 0.25, "11": "0.25"}}
//! ```
//!
//! World keys list truth values in alphabet order. Masses are `"a/b"`
//! strings, decimal strings or JSON numbers, all read exactly.
//!
//! Interpretation:
//!
//! ```json
//! {
//!   "domain": ["a", "b", "1/2"],
//!   "predicates": {"bought": 1, "sold": 1},
//!   "constants": {"tweety": "a"},
//!   "worlds": [{"bought": [["a"]], "sold": [["a"]]}, {"bought": [], "sold": []}],
//!   "structure": {"props": ["p"], "measure": {"0": "1/2", "1": "1/2"}}
//! }
//! ```
//!
//! Domain strings that read as rationals become numbers, `"<>"` is the
//! empty tuple, anything else is a symbol. With a `structure` the
//! propositions are added as 0-ary predicates; if `worlds` is omitted the
//! worlds are the truth assignments of the structure.

use crate::bridge::WorldBijection;
use crate::error::{Error, Result};
use crate::formula::Alphabet;
use crate::intensional::{DomainElement, Extensionalization, Interpretation, KripkeModel, Relation};
use crate::nilsson::NilssonStructure;
use crate::rational::{format_exact, parse_rational, Rational};
use crate::worlds::World;
use serde_json::{json, Map, Value};

fn doc(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(doc(format!("expected a rational, found {other}"))),
    }
}

pub fn structure_from_json(v: &Value) -> Result<NilssonStructure> {
    let props = v
        .get("props")
        .and_then(Value::as_array)
        .ok_or_else(|| doc("`props` must be an array of names"))?
        .iter()
        .map(|p| {
            p.as_str()
                .map(str::to_string)
                .ok_or_else(|| doc("proposition names must be strings"))
        })
        .collect::<Result<Vec<_>>>()?;
    let alphabet = Alphabet::new(props)?;
    let measure = v
        .get("measure")
        .and_then(Value::as_object)
        .ok_or_else(|| doc("`measure` must be an object"))?;
    let masses = measure
        .iter()
        .map(|(k, m)| Ok((World::from_key(k, alphabet.len())?, rational(m)?)))
        .collect::<Result<Vec<_>>>()?;
    NilssonStructure::new(alphabet, masses)
}

pub fn structure_to_json(n: &NilssonStructure) -> Value {
    let width = n.alphabet().len();
    let measure: Map<String, Value> = n
        .alphabet()
        .worlds()
        .map(|w| (w.key(width), Value::String(format_exact(n.mass(w)))))
        .collect();
    json!({ "props": n.alphabet().props(), "measure": measure })
}

pub fn parse_structure(text: &str) -> Result<NilssonStructure> {
    let v: Value = serde_json::from_str(text).map_err(|e| doc(e.to_string()))?;
    structure_from_json(&v)
}

pub fn render_structure(n: &NilssonStructure) -> String {
    serde_json::to_string_pretty(&structure_to_json(n)).expect("serialisable")
}

fn element(v: &Value) -> Result<DomainElement> {
    match v {
        Value::Number(_) => Ok(DomainElement::number(rational(v)?)),
        Value::String(s) if s == "<>" => Ok(DomainElement::unit()),
        Value::String(s) => Ok(match parse_rational(s) {
            Ok(q) => DomainElement::number(q),
            Err(_) => DomainElement::symbol(s.clone()),
        }),
        other => Err(doc(format!("expected a domain element, found {other}"))),
    }
}

pub fn interpretation_from_json(v: &Value) -> Result<KripkeModel> {
    let domain = match v.get("domain") {
        None => Vec::new(),
        Some(d) => d
            .as_array()
            .ok_or_else(|| doc("`domain` must be an array"))?
            .iter()
            .map(element)
            .collect::<Result<Vec<_>>>()?,
    };
    let predicates = match v.get("predicates") {
        None => Vec::new(),
        Some(p) => p
            .as_object()
            .ok_or_else(|| doc("`predicates` must map names to arities"))?
            .iter()
            .map(|(k, a)| {
                a.as_u64()
                    .map(|a| (k.clone(), a as usize))
                    .ok_or_else(|| doc(format!("arity of `{k}` must be a natural number")))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let mut interp = Interpretation::new(domain, predicates)?;
    if let Some(c) = v.get("constants") {
        for (name, e) in c.as_object().ok_or_else(|| doc("`constants` must be an object"))? {
            interp = interp.with_constant(name.clone(), element(e)?);
        }
    }
    let structure = v.get("structure").map(structure_from_json).transpose()?;
    if let Some(n) = &structure {
        interp = interp.with_structure(n.clone())?;
    }
    let worlds = match (v.get("worlds"), &structure) {
        (Some(ws), _) => {
            let ws = ws.as_array().ok_or_else(|| doc("`worlds` must be an array"))?;
            let mut out = Vec::with_capacity(ws.len());
            for (k, w) in ws.iter().enumerate() {
                let mut h = world(w, &interp)?;
                if let Some(n) = &structure {
                    if ws.len() != n.alphabet().world_count() {
                        return Err(doc(
                            "with a structure, `worlds` must list one entry per truth assignment",
                        ));
                    }
                    for (p, r) in WorldBijection::new(n.alphabet().clone())
                        .is(World(k as u64))
                        .predicates()
                    {
                        h.set(p.clone(), r.clone());
                    }
                }
                out.push(h);
            }
            out
        }
        (None, Some(n)) => {
            let bij = WorldBijection::new(n.alphabet().clone());
            n.alphabet().worlds().map(|w| bij.is(w)).collect()
        }
        (None, None) => return Err(doc("an interpretation needs `worlds` or a `structure`")),
    };
    KripkeModel::new(interp, worlds)
}

fn world(v: &Value, interp: &Interpretation) -> Result<Extensionalization> {
    let obj = v
        .as_object()
        .ok_or_else(|| doc("each world maps predicates to tuple lists"))?;
    let mut h = Extensionalization::new();
    for (pred, tuples) in obj {
        let arity = interp.arity_of(pred)?;
        let rows = tuples
            .as_array()
            .ok_or_else(|| doc(format!("extension of `{pred}` must be an array of tuples")))?
            .iter()
            .map(|t| {
                t.as_array()
                    .ok_or_else(|| doc(format!("tuples of `{pred}` must be arrays")))?
                    .iter()
                    .map(element)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        h.set(pred.clone(), Relation::new(arity, rows)?);
    }
    Ok(h)
}

pub fn parse_interpretation(text: &str) -> Result<KripkeModel> {
    let v: Value = serde_json::from_str(text).map_err(|e| doc(e.to_string()))?;
    interpretation_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intensional::{IFormula, Term};
    use crate::rational::ratio;

    #[test]
    fn structure_round_trip() {
        let text = r#"{"props": ["p", "q"], "measure": {"00": "1/4", "01": 0.25, "10": "0.25", "11": "1/4"}}"#;
        let n = parse_structure(text).unwrap();
        assert_eq!(n.mass(World(1)), &ratio(1, 4));
        assert_eq!(parse_structure(&render_structure(&n)).unwrap(), n);
    }

    #[test]
    fn sparse_measure_and_errors() {
        let n = parse_structure(r#"{"props": ["p"], "measure": {"1": "1"}}"#).unwrap();
        assert_eq!(n.mass(World(0)), &ratio(0, 1));
        let e = parse_structure(r#"{"props": ["p"], "measure": {"0": "3/4", "1": "3/4"}}"#).unwrap_err();
        assert_eq!(e.to_string(), "total mass 3/2 ≠ 1");
        assert!(parse_structure(r#"{"props": ["p"]}"#).is_err());
        assert!(parse_structure("not json").is_err());
    }

    #[test]
    fn interpretation_document() {
        let text = r#"{
            "domain": ["a", "b"],
            "predicates": {"bought": 1, "sold": 1},
            "constants": {"item": "a"},
            "worlds": [{"bought": [["a"]], "sold": [["a"]]}, {"bought": [["b"]]}]
        }"#;
        let m = parse_interpretation(text).unwrap();
        assert_eq!(m.worlds().len(), 2);
        let f = IFormula::atom("bought", vec![Term::Name("item".into())]);
        assert!(m.satisfies(0, &Default::default(), &f).unwrap());
        assert!(!m.satisfies(1, &Default::default(), &f).unwrap());
    }

    #[test]
    fn interpretation_from_structure() {
        let text = r#"{"structure": {"props": ["p"], "measure": {"0": "1/2", "1": "1/2"}}}"#;
        let m = parse_interpretation(text).unwrap();
        assert_eq!(m.worlds().len(), 2);
        assert!(m.satisfies(1, &Default::default(), &IFormula::prop("p")).unwrap());
    }
}
