//! Balancedness, the classifier of balanced lattice polygons by their
//! column/product signature, E-equivalence and projective equivalence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::columns::{self, ColumnTable};
use crate::error::{Error, Result};
use crate::polytope::{self, Polytope};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    A,
    B,
    C,
    D,
    E,
    F,
    NoColumns,
    NotBalanced,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::A => "a",
            ClassTag::B => "b",
            ClassTag::C => "c",
            ClassTag::D => "d",
            ClassTag::E => "e",
            ClassTag::F => "f",
            ClassTag::NoColumns => "no_columns",
            ClassTag::NotBalanced => "not_balanced",
        };
        f.write_str(s)
    }
}

/// Classification result. Witness vectors are in the polytope's normalized
/// coordinates and rendered as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonClass {
    pub tag: ClassTag,
    /// Class a: `u, v, w = uv`. Class b: `u, v, w` with `uv = w` and
    /// `w(-v) = u`. Class c: `u, v, w` with `uv = w`. Classes e, f: the
    /// columns.
    pub witness: Vec<String>,
    /// Class d: id of the shared base edge.
    pub base_edge: Option<usize>,
    pub column_count: usize,
}

/// `<base(u), v> <= 1` for all columns `u, v`.
pub fn is_balanced<T: Scalar>(p: &Polytope<T>) -> bool {
    columns::column_vectors(p).is_balanced()
}

/// Both forms of the balance condition; they agree on every polytope.
pub fn balance_both_ways<T: Scalar>(p: &Polytope<T>) -> (bool, bool) {
    let t = columns::column_vectors(p);
    (t.is_balanced(), t.is_balanced_abs())
}

fn names<T: Scalar>(t: &ColumnTable<T>, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| scalar::fmt_vec(&t.get(i).v)).collect()
}

pub fn classify_polygon<T: Scalar>(p: &Polytope<T>) -> Result<PolygonClass> {
    if p.dim() != 2 {
        return Err(Error::Dimension(format!("classification needs a polygon, got dim {}", p.dim())));
    }
    let t = columns::column_vectors(p);
    classify_table(&t)
}

/// Classification by the signature of a polygon's column table.
pub fn classify_table<T: Scalar>(t: &ColumnTable<T>) -> Result<PolygonClass> {
    let n = t.len();
    let mut out = PolygonClass {
        tag: ClassTag::NoColumns,
        witness: Vec::new(),
        base_edge: None,
        column_count: n,
    };
    if n == 0 {
        return Ok(out);
    }
    if !t.is_balanced() {
        out.tag = ClassTag::NotBalanced;
        return Ok(out);
    }
    let bases = t.base_facets();
    let inv: Vec<bool> = (0..n).map(|i| t.is_invertible(i)).collect::<Result<_>>()?;
    let invertible = inv.iter().filter(|&&b| b).count();
    let products: Vec<(usize, usize, usize)> = t.products.iter().map(|(&(a, b), &c)| (a, b, c)).collect();

    if bases.len() == 1 {
        out.tag = ClassTag::D;
        out.base_edge = bases.into_iter().next();
        out.witness = names(t, &(0..n).collect::<Vec<_>>());
        return Ok(out);
    }
    let neg = |i: usize| t.index_of(&scalar::neg(&t.get(i).v));
    match (n, invertible, products.len()) {
        (6, 6, _) => {
            if let Some(&(u, v, w)) = products.first() {
                out.tag = ClassTag::A;
                out.witness = names(t, &[u, v, w]);
            }
        }
        (4, 2, _) => {
            // uv = w and w(-v) = u, with v the invertible column.
            for &(u, v, w) in &products {
                if !inv[v] || inv[u] {
                    continue;
                }
                let nv = neg(v).expect("invertible");
                if t.product(w, nv) == Some(u) {
                    out.tag = ClassTag::B;
                    out.witness = names(t, &[u, v, w]);
                    break;
                }
            }
        }
        (3, 0, 1) => {
            let (u, v, w) = products[0];
            out.tag = ClassTag::C;
            out.witness = names(t, &[u, v, w]);
        }
        (4, 4, 0) if bases.len() == 4 => {
            out.tag = ClassTag::E;
            out.witness = names(t, &[0, 1, 2, 3]);
        }
        (2, 0, 0) => {
            out.tag = ClassTag::F;
            out.witness = names(t, &[0, 1]);
        }
        _ => {}
    }
    if out.tag == ClassTag::NoColumns {
        return Err(Error::Internal(format!(
            "balanced polygon with unrecognized signature: {n} columns, {invertible} invertible, {} products, {} bases",
            products.len(),
            bases.len()
        )));
    }
    Ok(out)
}

/// Search for a bijection `mu: Col(P) -> Col(Q)` with
/// `<P_w, v> = <Q_mu(w), mu(v)>` and `mu(vw) = mu(v) mu(w)`.
///
/// Returns the first bijection in lexicographic order of the image list.
pub fn e_equivalent<T: Scalar>(p: &Polytope<T>, q: &Polytope<T>) -> Option<Vec<usize>> {
    e_equivalent_tables(&columns::column_vectors(p), &columns::column_vectors(q))
}

pub fn e_equivalent_tables<T: Scalar>(tp: &ColumnTable<T>, tq: &ColumnTable<T>) -> Option<Vec<usize>> {
    if tp.len() != tq.len() || tp.products.len() != tq.products.len() {
        return None;
    }
    let n = tp.len();
    let pair = |t: &ColumnTable<T>, w: usize, v: usize| t.height(v, t.get(w).base).clone();
    let mut mu: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];

    // Checks every condition among the already assigned columns that
    // involves the newest one.
    let consistent = |mu: &[usize]| -> bool {
        let k = mu.len() - 1;
        for a in 0..=k {
            for (w, v) in [(a, k), (k, a)] {
                if pair(tp, w, v) != pair(tq, mu[w], mu[v]) {
                    return false;
                }
                let pp = tp.product(w, v);
                let qp = tq.product(mu[w], mu[v]);
                match (pp, qp) {
                    (None, None) => {}
                    (Some(x), Some(y)) => {
                        if x < mu.len() && mu[x] != y {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        // Products whose result is the newest column.
        for (&(w, v), &x) in &tp.products {
            if w < mu.len() && v < mu.len() && x < mu.len() && tq.product(mu[w], mu[v]) != Some(mu[x]) {
                return false;
            }
        }
        true
    };

    fn search(
        n: usize,
        mu: &mut Vec<usize>,
        used: &mut [bool],
        ok: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if mu.len() == n {
            return true;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            mu.push(c);
            used[c] = true;
            if ok(mu) && search(n, mu, used, ok) {
                return true;
            }
            mu.pop();
            used[c] = false;
        }
        false
    }

    if search(n, &mut mu, &mut used, &consistent) {
        Some(mu)
    } else {
        None
    }
}

/// Equality of normal fans.
pub fn projectively_equivalent<T: Scalar>(p: &Polytope<T>, q: &Polytope<T>) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension(format!("dimensions {} and {} differ", p.dim(), q.dim())));
    }
    Ok(polytope::fans_equal(&p.normal_fan(), &q.normal_fan()))
}
