//! JSON documents for polytopes, column tables and spectrum nodes.
//!
//! A polytope document has `dim`, `vertices` and optionally `facets`, each
//! facet `{"a": [...], "b": n}` meaning `<a,x> >= b`. Only integers are
//! accepted, of any size.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::columns::ColumnTable;
use crate::doubling::{Spectrum, SpectrumNode};
use crate::error::{Error, Result};
use crate::polytope::{Form, Polytope};
use crate::scalar;

/// JSON number for an integer of any size.
pub fn int_value(n: &BigInt) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal is valid JSON")
}

pub fn vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            BigInt::from_str(&s).map_err(|_| Error::Parse(format!("{what}: {s} is not an integer")))
        }
        other => Err(Error::Parse(format!("{what}: expected an integer, got {other}"))),
    }
}

fn parse_vec(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?
        .iter()
        .map(|x| parse_int(x, what))
        .collect()
}

/// Parsed polytope document, before any geometry is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub vertices: Vec<Vec<BigInt>>,
    pub facets: Option<Vec<Form<BigInt>>>,
}

impl PolytopeDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "dim" | "vertices" | "facets" | "name") {
                return Err(Error::Parse(format!("unknown field {key}")));
            }
        }
        let dim = parse_int(obj.get("dim").ok_or_else(|| Error::Parse("missing dim".into()))?, "dim")?;
        let dim = usize::try_from(dim).map_err(|_| Error::Parse("dim must be a small non-negative integer".into()))?;
        let vertices: Vec<Vec<BigInt>> = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing vertices array".into()))?
            .iter()
            .map(|x| parse_vec(x, "vertex"))
            .collect::<Result<_>>()?;
        if vertices.is_empty() {
            return Err(Error::Parse("no vertices".into()));
        }
        if let Some(bad) = vertices.iter().find(|x| x.len() != dim) {
            return Err(Error::Parse(format!(
                "vertex {} does not have dim = {dim} coordinates",
                scalar::fmt_vec(bad)
            )));
        }
        let facets = match obj.get("facets") {
            None | Some(Value::Null) => None,
            Some(Value::Array(fs)) => Some(
                fs.iter()
                    .map(|f| {
                        let a = parse_vec(f.get("a").ok_or_else(|| Error::Parse("facet without a".into()))?, "facet a")?;
                        let b = parse_int(f.get("b").ok_or_else(|| Error::Parse("facet without b".into()))?, "facet b")?;
                        if a.len() != dim {
                            return Err(Error::Parse("facet form of wrong length".into()));
                        }
                        Ok((a, b))
                    })
                    .collect::<Result<_>>()?,
            ),
            Some(_) => return Err(Error::Parse("facets must be an array".into())),
        };
        Ok(PolytopeDoc { dim, vertices, facets })
    }

    pub fn build(&self) -> Result<Polytope<BigInt>> {
        match &self.facets {
            Some(f) => Polytope::with_facets(&self.vertices, f),
            None => Polytope::from_vertices(&self.vertices),
        }
    }
}

pub fn parse_polytope(text: &str) -> Result<Polytope<BigInt>> {
    PolytopeDoc::parse(text)?.build()
}

/// Polytope document in normalized coordinates, facets included.
pub fn polytope_value(p: &Polytope<BigInt>) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(|v| vec_value(v)).collect::<Vec<_>>(),
        "facets": p.facets().iter().map(|f| json!({"a": vec_value(&f.normal), "b": int_value(&f.offset)})).collect::<Vec<_>>(),
    })
}

pub fn polytope_json(p: &Polytope<BigInt>) -> String {
    serde_json::to_string_pretty(&polytope_value(p)).expect("serializable")
}

/// Columns with base facets and all heights, and the product table.
pub fn columns_value(t: &ColumnTable<BigInt>) -> Value {
    let cols: Vec<Value> = (0..t.len())
        .map(|i| {
            json!({
                "index": i,
                "vector": vec_value(&t.get(i).v),
                "base": t.get(i).base,
                "heights": vec_value(&t.heights[i]),
            })
        })
        .collect();
    let prods: Vec<Value> = t
        .products
        .iter()
        .map(|(&(a, b), &c)| json!({"left": a, "right": b, "product": c}))
        .collect();
    json!({"columns": cols, "products": prods})
}

pub fn node_value(node: &SpectrumNode<BigInt>) -> Value {
    let mut m = Map::new();
    m.insert("index".into(), json!(node.index));
    m.insert("polytope".into(), polytope_value(&node.polytope));
    if let Some(s) = &node.step {
        m.insert(
            "step".into(),
            json!({
                "facet": s.facet,
                "pivot": vec_value(&s.pivot),
                "column": s.column,
                "minus_facet": s.minus_facet,
                "bar_facet": s.bar_facet,
                "psi": s.psi.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "delta_plus": s.delta_plus,
                "delta_minus": s.delta_minus,
            }),
        );
    }
    m.insert("columns".into(), columns_value(&node.columns));
    m.insert("column_ids".into(), json!(node.column_ids));
    m.insert(
        "provenance".into(),
        serde_json::to_value(&node.provenance).expect("serializable"),
    );
    Value::Object(m)
}

pub fn spectrum_value(s: &Spectrum<BigInt>) -> Value {
    json!({
        "nodes": s.nodes.iter().map(node_value).collect::<Vec<_>>(),
        "ledger": s.ledger.iter().map(|(id, steps)| json!({"column": id, "steps": steps})).collect::<Vec<_>>(),
        "first_seen": s.first_seen,
    })
}
