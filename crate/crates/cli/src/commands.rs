//! The table, doubling, spectrum and classification commands.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use polykit::classify::{self, ClassTag};
use polykit::doubling::{self, Provenance};
use polykit::{columns, format, scalar, ColumnTable, Int, Polytope};
use serde_json::{json, Value};

use crate::report::Outcome;
use crate::{write_file, CliError};

fn fmt(v: &[Int]) -> String {
    scalar::fmt_vec(v)
}

fn column_names(t: &ColumnTable) -> Vec<String> {
    t.columns.iter().map(|c| fmt(&c.v)).collect()
}

fn warn_if_empty(out: &mut Outcome, t: &ColumnTable) {
    if t.is_empty() {
        out.warn("the polytope has no column vectors");
    }
}

pub fn cols(p: &Polytope) -> Outcome {
    let t = columns::column_vectors(p);
    let mut out = Outcome::new(json!({
        "polytope": format::polytope_value(p),
        "table": format::columns_value(&t),
    }));
    out.line(format!("{} columns, dim {}, {} facets", t.len(), p.dim(), p.facets().len()));
    for (i, c) in t.columns.iter().enumerate() {
        out.line(format!("  {i:>3}  {:<16} base {:<3} heights {}", fmt(&c.v), c.base, fmt(&t.heights[i])));
    }
    warn_if_empty(&mut out, &t);
    out
}

pub fn products(p: &Polytope) -> Outcome {
    let t = columns::column_vectors(p);
    let prods: Vec<Value> = t
        .products
        .iter()
        .map(|(&(a, b), &c)| json!({"left": fmt(&t.get(a).v), "right": fmt(&t.get(b).v), "product": fmt(&t.get(c).v)}))
        .collect();
    let mut out = Outcome::new(json!({"columns": column_names(&t), "products": prods}));
    out.line(format!("{} columns, {} products", t.len(), t.products.len()));
    for (&(a, b), &c) in &t.products {
        out.line(format!("  {} * {} = {}", fmt(&t.get(a).v), fmt(&t.get(b).v), fmt(&t.get(c).v)));
    }
    warn_if_empty(&mut out, &t);
    out
}

pub fn cb(p: &Polytope) -> Result<Outcome, CliError> {
    let t = columns::column_vectors(p);
    let mut out = Outcome::new(Value::Null);
    warn_if_empty(&mut out, &t);
    if t.is_empty() {
        out.results = json!({"rows": [], "facets": [], "entries": []});
        out.line("no columns");
        return Ok(out);
    }
    let m = t.cb_matrix()?;
    out.results = json!({
        "rows": m.rows.iter().map(|r| fmt(r)).collect::<Vec<_>>(),
        "facets": m.facets,
        "entries": m.entries.iter().map(|r| format::vec_value(r)).collect::<Vec<_>>(),
    });
    out.line(format!("{:<16} {}", "column", m.facets.iter().map(|f| format!("{f:>4}")).collect::<String>()));
    for (r, e) in m.rows.iter().zip(&m.entries) {
        out.line(format!("{:<16} {}", fmt(r), e.iter().map(|x| format!("{x:>4}")).collect::<String>()));
    }
    Ok(out)
}

pub fn double(p: &Polytope, facet: usize, target: Option<&Path>) -> Result<Outcome, CliError> {
    if facet >= p.facets().len() {
        return Err(CliError::Usage(format!(
            "facet {facet} does not exist; the polytope has {} facets",
            p.facets().len()
        )));
    }
    let d = doubling::double(p, facet)?;
    let mut out = Outcome::new(Value::Null);
    let bad = d.check_equations();
    for b in &bad {
        out.line(format!("equation check failed: {b}"));
    }
    let lifted = doubling::lift_columns(&d)?;
    let actual = columns::column_vectors(&d.result);
    let predicted: BTreeSet<&Vec<Int>> = lifted.table.columns.iter().map(|c| &c.v).collect();
    let found: BTreeSet<&Vec<Int>> = actual.columns.iter().map(|c| &c.v).collect();
    let extra: Vec<String> = found.difference(&predicted).map(|v| fmt(v)).collect();
    let lifted_matches = predicted == found;
    if lifted.complete && !lifted_matches {
        out.line("lifted columns differ from the computed columns");
    }
    if !extra.is_empty() {
        out.warn(format!("extra columns not lifted from the parent: {}", extra.join(" ")));
    }
    out.failed = !bad.is_empty() || (lifted.complete && !lifted_matches) || !predicted.is_subset(&found);
    let provenance: Vec<Value> = actual
        .columns
        .iter()
        .map(|c| {
            let prov = lifted.table.index_of(&c.v).map(|i| lifted.provenance[i]).unwrap_or(Provenance::Extra);
            json!({"vector": fmt(&c.v), "provenance": prov})
        })
        .collect();
    out.results = json!({
        "facet": facet,
        "pivot": format::vec_value(&d.pivot),
        "minus_facet": d.minus_facet,
        "bar_facet": d.bar_facet,
        "psi": d.psi.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "delta_plus": fmt(&d.delta_plus.v),
        "delta_minus": fmt(&d.delta_minus.v),
        "equations_hold": bad.is_empty(),
        "lifting_complete": lifted.complete,
        "lifted_equals_computed": lifted_matches,
        "extra_columns": extra,
        "columns": provenance,
        "polytope": format::polytope_value(&d.result),
    });
    out.line(format!(
        "doubled facet {facet}: dim {}, {} lattice points, {} columns",
        d.result.dim(),
        d.result.lattice_points().len(),
        actual.len()
    ));
    out.line(format!("pivot {}, delta+ {}, delta- {}", fmt(&d.pivot), fmt(&d.delta_plus.v), fmt(&d.delta_minus.v)));
    out.line(format!(
        "equations {}, lifting {}",
        if bad.is_empty() { "hold" } else { "FAIL" },
        if lifted.complete { "complete" } else { "partial" }
    ));
    if let Some(path) = target {
        write_file(path, &format::polytope_json(&d.result))?;
        out.line(format!("wrote {}", path.display()));
    } else {
        out.line(format::polytope_json(&d.result));
    }
    Ok(out)
}

pub fn spectrum(p: &Polytope, depth: usize, dir: Option<&Path>) -> Result<Outcome, CliError> {
    let s = doubling::spectrum(p, depth)?;
    let mut out = Outcome::new(Value::Null);
    let mut summary = Vec::new();
    for node in &s.nodes {
        if let Some(step) = &node.step {
            // Re-check the doubling equations before anything is emitted.
            let prev = &s.nodes[node.index - 1];
            let d = doubling::double_with_pivot(&prev.polytope, step.facet, step.pivot.clone())?;
            if !d.check_equations().is_empty() {
                out.failed = true;
                out.line(format!("node {}: equation check failed", node.index));
            }
        }
        summary.push(json!({
            "index": node.index,
            "dim": node.polytope.dim(),
            "lattice_points": node.polytope.lattice_points().len(),
            "columns": node.columns.len(),
            "products": node.columns.products.len(),
            "doubled_facet": node.step.as_ref().map(|s| s.facet),
            "decomposed_column": node.step.as_ref().map(|s| s.column),
        }));
        out.line(format!(
            "node {:>3}: dim {:>3}, {:>6} points, {:>4} columns{}",
            node.index,
            node.polytope.dim(),
            node.polytope.lattice_points().len(),
            node.columns.len(),
            node.step
                .as_ref()
                .map(|s| format!(", doubled facet {} for column {}", s.facet, s.column))
                .unwrap_or_default()
        ));
    }
    let ledger: Vec<Value> = s
        .ledger
        .iter()
        .map(|(id, steps)| json!({"column": id, "first_seen": s.first_seen[*id], "steps": steps}))
        .collect();
    for (id, steps) in &s.ledger {
        out.line(format!("column {id:>3} (from node {}): decomposed at {steps:?}", s.first_seen[*id]));
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
        // The seed is the input file; only doubled nodes are written.
        for node in &s.nodes[1..] {
            let path = dir.join(format!("node_{}.json", node.index));
            write_file(&path, &pretty(&format::node_value(node)))?;
        }
        write_file(&dir.join("ledger.json"), &pretty(&json!({"ledger": ledger})))?;
        out.line(format!("wrote {depth} node files and ledger.json to {}", dir.display()));
    }
    out.results = json!({"depth": depth, "nodes": summary, "ledger": ledger});
    Ok(out)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn classify(p: &Polytope) -> Result<Outcome, CliError> {
    let c = classify::classify_polygon(p).map_err(|e| match e {
        polykit::Error::Dimension(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    let mut out = Outcome::new(serde_json::to_value(&c).expect("serializable"));
    out.line(format!("class {} ({} columns)", c.tag, c.column_count));
    if !c.witness.is_empty() {
        out.line(format!("witness {}", c.witness.join(" ")));
    }
    if let Some(e) = c.base_edge {
        out.line(format!("shared base edge {e}"));
    }
    if c.tag == ClassTag::NoColumns {
        out.warn("the polygon has no column vectors");
    }
    Ok(out)
}

pub fn equiv_e(p: &Polytope, q: &Polytope) -> Outcome {
    let (tp, tq) = (columns::column_vectors(p), columns::column_vectors(q));
    match classify::e_equivalent_tables(&tp, &tq) {
        Some(mu) => {
            let pairs: Vec<Value> = mu.iter().enumerate().map(|(i, &j)| json!([fmt(&tp.get(i).v), fmt(&tq.get(j).v)])).collect();
            let mut out = Outcome::new(json!({"mode": "e", "equivalent": true, "bijection": pairs}));
            out.line("E-equivalent");
            for (i, &j) in mu.iter().enumerate() {
                out.line(format!("  {} -> {}", fmt(&tp.get(i).v), fmt(&tq.get(j).v)));
            }
            out
        }
        None => {
            let mut out = Outcome::new(json!({"mode": "e", "equivalent": false, "bijection": null}));
            out.line("not E-equivalent");
            out
        }
    }
}

pub fn equiv_proj(p: &Polytope, q: &Polytope) -> Result<Outcome, CliError> {
    let eq = classify::projectively_equivalent(p, q).map_err(|e| match e {
        polykit::Error::Dimension(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    let mut out = Outcome::new(json!({"mode": "proj", "equivalent": eq}));
    out.line(if eq { "projectively equivalent" } else { "not projectively equivalent" });
    Ok(out)
}
