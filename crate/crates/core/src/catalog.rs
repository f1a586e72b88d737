//! Named polytopes used throughout the examples and tests, and a small
//! corpus in dimensions 1 to 3.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polytope::{Form, Polytope};
use crate::scalar::{self, Scalar};

fn poly(vs: &[&[i64]]) -> Polytope<BigInt> {
    let pts: Vec<Vec<BigInt>> = vs.iter().map(|v| scalar::vec_from(v)).collect();
    Polytope::from_vertices(&pts).expect("catalog polytope is valid")
}

/// `k` times the unimodular `n`-simplex.
pub fn simplex(n: usize, k: i64) -> Polytope<BigInt> {
    let mut pts = vec![vec![0i64; n]];
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = k;
        pts.push(e);
    }
    let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
    poly(&refs)
}

pub fn unit_cube(n: usize) -> Polytope<BigInt> {
    let pts: Vec<Vec<i64>> = (0..1u32 << n)
        .map(|m| (0..n).map(|i| ((m >> i) & 1) as i64).collect())
        .collect();
    let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
    poly(&refs)
}

pub fn rectangle(a: i64, b: i64) -> Polytope<BigInt> {
    poly(&[&[0, 0], &[a, 0], &[a, b], &[0, b]])
}

/// The quadrangle with the single product `uv = w`.
pub fn quadrangle_c() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]])
}

/// Triangle with a column pairing to 2 against another base.
pub fn ess_triangle() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[2, 0], &[0, 1]])
}

/// Trapezoid of class b.
pub fn trapezoid_b() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[3, 0], &[3, 2], &[2, 2]])
}

/// The trapezoid with its right edge pushed out by one.
pub fn trapezoid_b_enlarged() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[4, 0], &[4, 2], &[2, 2]])
}

/// `conv((-1,0), (3t,0), (2t,1), (0,2))`, whose columns `(s,-1)`,
/// `0 <= s <= t`, share the bottom edge.
pub fn quadrangle_d(t: i64) -> Polytope<BigInt> {
    poly(&[&[-1, 0], &[3 * t, 0], &[2 * t, 1], &[0, 2]])
}

/// Pentagon with exactly the columns `(-1,0)` and `(0,-1)`.
pub fn pentagon_f() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[2, 0], &[2, 1], &[1, 2], &[0, 2]])
}

/// Unbalanced triangle whose doubling has columns not lifted from it.
pub fn newcol_triangle() -> Polytope<BigInt> {
    poly(&[&[-2, 0], &[0, 0], &[0, 1]])
}

/// Triangle with a single column.
pub fn single_column_triangle() -> Polytope<BigInt> {
    poly(&[&[0, 0], &[2, 0], &[1, 2]])
}

/// Pyramid over the unit square.
pub fn square_pyramid() -> Polytope<BigInt> {
    poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]])
}

pub fn triangular_prism() -> Polytope<BigInt> {
    poly(&[
        &[0, 0, 0],
        &[1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[1, 0, 1],
        &[0, 1, 1],
    ])
}

/// Look up a polytope by catalog name.
pub fn named(name: &str) -> Option<Polytope<BigInt>> {
    let p = match name {
        "segment" => simplex(1, 1),
        "segment2" => simplex(1, 2),
        "segment3" => simplex(1, 3),
        "triangle" => simplex(2, 1),
        "triangle2" => simplex(2, 2),
        "triangle3" => simplex(2, 3),
        "square" => unit_cube(2),
        "rectangle" => rectangle(3, 5),
        "quadrangle_c" => quadrangle_c(),
        "ess_triangle" => ess_triangle(),
        "trapezoid_b" => trapezoid_b(),
        "trapezoid_b_enlarged" => trapezoid_b_enlarged(),
        "quadrangle_d1" => quadrangle_d(1),
        "quadrangle_d2" => quadrangle_d(2),
        "quadrangle_d3" => quadrangle_d(3),
        "pentagon_f" => pentagon_f(),
        "newcol_triangle" => newcol_triangle(),
        "single_column_triangle" => single_column_triangle(),
        "tetrahedron" => simplex(3, 1),
        "cube" => unit_cube(3),
        "square_pyramid" => square_pyramid(),
        "triangular_prism" => triangular_prism(),
        _ => return None,
    };
    Some(p)
}

pub const CORPUS: &[&str] = &[
    "segment",
    "segment2",
    "segment3",
    "triangle",
    "triangle2",
    "triangle3",
    "square",
    "rectangle",
    "quadrangle_c",
    "ess_triangle",
    "trapezoid_b",
    "trapezoid_b_enlarged",
    "quadrangle_d1",
    "quadrangle_d2",
    "quadrangle_d3",
    "pentagon_f",
    "newcol_triangle",
    "single_column_triangle",
    "tetrahedron",
    "cube",
    "square_pyramid",
    "triangular_prism",
];

/// The test corpus, in a fixed order.
pub fn corpus() -> Vec<(&'static str, Polytope<BigInt>)> {
    CORPUS
        .iter()
        .map(|&n| (n, named(n).expect("corpus names are in the catalog")))
        .collect()
}

/// `P x Q` with its facets supplied, in normalized coordinates of both.
pub fn product<T: Scalar>(p: &Polytope<T>, q: &Polytope<T>) -> Result<Polytope<T>> {
    let (dp, dq) = (p.dim(), q.dim());
    if dp == 0 || dq == 0 {
        return Err(Error::Precondition("factors must be positive dimensional".into()));
    }
    let mut verts = Vec::new();
    for x in p.vertices() {
        for y in q.vertices() {
            let mut z = x.clone();
            z.extend(y.iter().cloned());
            verts.push(z);
        }
    }
    let mut forms: Vec<Form<T>> = Vec::new();
    for (a, b) in p.forms() {
        let mut a2 = a.clone();
        a2.extend(std::iter::repeat_n(T::zero(), dq));
        forms.push((a2, b));
    }
    for (a, b) in q.forms() {
        let mut a2 = vec![T::zero(); dp];
        a2.extend(a);
        forms.push((a2, b));
    }
    if dp + dq <= 3 {
        Polytope::from_vertices(&verts)
    } else {
        Polytope::with_facets(&verts, &forms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::columns;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert!(c.len() >= 10);
        let dims: std::collections::BTreeSet<usize> = c.iter().map(|(_, p)| p.dim()).collect();
        assert_eq!(dims, [1, 2, 3].into_iter().collect());
        assert!(named("nope").is_none());
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(quadrangle_c().lattice_points().len(), 8);
        assert_eq!(simplex(2, 2).lattice_points().len(), 6);
        assert_eq!(pentagon_f().lattice_points().len(), 8);
        assert_eq!(unit_cube(3).lattice_points().len(), 8);
    }

    #[test]
    fn product_columns_are_disjoint_union() {
        let d1 = quadrangle_d(1);
        let pq = product(&d1, &d1).unwrap();
        assert_eq!(pq.dim(), 4);
        let t = columns::column_vectors(&d1);
        let tpq = columns::column_vectors(&pq);
        assert_eq!(tpq.len(), 2 * t.len());
        for c in &t.columns {
            let mut left = c.v.clone();
            left.extend([BigInt::from(0), BigInt::from(0)]);
            let mut right = vec![BigInt::from(0), BigInt::from(0)];
            right.extend(c.v.iter().cloned());
            assert!(tpq.index_of(&left).is_some());
            assert!(tpq.index_of(&right).is_some());
        }
        assert_eq!(tpq.products.len(), 2 * t.products.len());
    }
}
