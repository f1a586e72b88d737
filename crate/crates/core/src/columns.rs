//! Column vectors, their base facets, the partial product and the height
//! matrix against base facets.
//!
//! A column vector `v` of `P` has exactly one facet `F` with `<F, v> = -1`
//! and `<G, v> >= 0` for every other facet; translating by `v` moves every
//! lattice point off `F` into `P`. The product `uv` exists iff `u + v != 0`
//! and `<base(v), u> > 0`, in which case `uv = u + v` has the base of `u`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnVector<T> {
    pub v: Vec<T>,
    /// Id of the base facet.
    pub base: usize,
}

/// The set of column vectors of a polytope together with all heights and
/// the product table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnTable<T> {
    pub columns: Vec<ColumnVector<T>>,
    /// `heights[i][f] = <F_f, v_i>` for every facet.
    pub heights: Vec<Vec<T>>,
    /// `(i, j) -> k` when `v_i v_j = v_k`.
    pub products: BTreeMap<(usize, usize), usize>,
    index: BTreeMap<Vec<T>, usize>,
}

/// Base facet of `v` by the facet criterion, or `None` if `v` is not a
/// column vector.
pub fn base_facet<T: Scalar>(p: &Polytope<T>, v: &[T]) -> Option<usize> {
    if v.len() != p.dim() || scalar::is_zero_vec(v) {
        return None;
    }
    let mut base = None;
    for f in p.facets() {
        let h = f.pairing(v);
        if h.is_negative() {
            if base.is_some() || h != -T::one() {
                return None;
            }
            base = Some(f.id);
        }
    }
    base
}

/// `Col(P)`, sorted lexicographically by vector.
///
/// For a column `v` with base `F` and a lattice point `x0` at height one
/// over `F`, `x0 + v` is a lattice point of `F`. So candidates for base `F`
/// are `L_F - x0` for a single such `x0`; facets without a lattice point at
/// height one have no columns at all.
pub fn column_vectors<T: Scalar>(p: &Polytope<T>) -> ColumnTable<T> {
    let mut found = BTreeSet::new();
    for f in p.facets() {
        let Some(x0) = p.lattice_points().iter().find(|x| f.height(x).is_one()) else {
            continue;
        };
        for y in p.lattice_points().iter().filter(|y| f.height(y).is_zero()) {
            let v = scalar::sub(y, x0);
            if base_facet(p, &v) == Some(f.id) {
                found.insert(v);
            }
        }
    }
    ColumnTable::from_vectors(p, found.into_iter().collect())
        .expect("candidates satisfy the criterion")
}

/// Independent oracle: the facet `F` such that `x + v` lies in `P` for
/// every lattice point `x` off `F`.
pub fn is_column_geometric<T: Scalar>(p: &Polytope<T>, v: &[T]) -> Result<Option<usize>> {
    if scalar::is_zero_vec(v) {
        return Err(Error::Precondition("zero vector".into()));
    }
    if v.len() != p.dim() {
        return Err(Error::Dimension("vector of wrong length".into()));
    }
    for f in p.facets() {
        let moves_all = p
            .lattice_points()
            .iter()
            .filter(|x| !f.height(x).is_zero())
            .all(|x| p.contains(&scalar::add(x, v)));
        if moves_all {
            return Ok(Some(f.id));
        }
    }
    Ok(None)
}

impl<T: Scalar> ColumnTable<T> {
    /// Table for a given set of column vectors of `p` (bases by criterion,
    /// products among the given vectors). Input order is preserved.
    pub fn from_vectors(p: &Polytope<T>, vectors: Vec<Vec<T>>) -> Result<Self> {
        Self::build(p, vectors, true)
    }

    /// Like [`ColumnTable::from_vectors`] for a set of columns that need not
    /// be all of `Col(P)`; products leaving the set are omitted.
    pub fn from_subset(p: &Polytope<T>, vectors: Vec<Vec<T>>) -> Result<Self> {
        Self::build(p, vectors, false)
    }

    fn build(p: &Polytope<T>, vectors: Vec<Vec<T>>, complete: bool) -> Result<Self> {
        let mut columns = Vec::with_capacity(vectors.len());
        let mut index = BTreeMap::new();
        for v in vectors {
            let base =
                base_facet(p, &v).ok_or_else(|| Error::NotAColumn(scalar::fmt_vec(&v)))?;
            if index.insert(v.clone(), columns.len()).is_some() {
                return Err(Error::Precondition(format!(
                    "repeated column {}",
                    scalar::fmt_vec(&v)
                )));
            }
            columns.push(ColumnVector { v, base });
        }
        let heights: Vec<Vec<T>> = columns
            .iter()
            .map(|c| p.facets().iter().map(|f| f.pairing(&c.v)).collect())
            .collect();
        let mut table = ColumnTable {
            columns,
            heights,
            products: BTreeMap::new(),
            index,
        };
        table.products = table.compute_products(complete)?;
        Ok(table)
    }

    /// Products among the table's vectors by the height criterion. With
    /// `complete`, a product outside the table is an error.
    fn compute_products(&self, complete: bool) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if !self.heights[i][self.columns[j].base].is_positive() {
                    continue;
                }
                let s = scalar::add(&self.columns[i].v, &self.columns[j].v);
                if scalar::is_zero_vec(&s) {
                    continue;
                }
                match self.index.get(&s) {
                    Some(&k) => {
                        if self.columns[k].base != self.columns[i].base {
                            return Err(Error::Internal(format!(
                                "product {} has the wrong base facet",
                                scalar::fmt_vec(&s)
                            )));
                        }
                        out.insert((i, j), k);
                    }
                    None if complete => {
                        return Err(Error::NotAColumn(format!(
                            "product {} missing from the table",
                            scalar::fmt_vec(&s)
                        )))
                    }
                    None => {}
                }
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn get(&self, i: usize) -> &ColumnVector<T> {
        &self.columns[i]
    }

    pub fn index_of(&self, v: &[T]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `<F, v_i>`
    pub fn height(&self, i: usize, facet: usize) -> &T {
        &self.heights[i][facet]
    }

    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.products.get(&(i, j)).copied()
    }

    pub fn base_facets(&self) -> BTreeSet<usize> {
        self.columns.iter().map(|c| c.base).collect()
    }

    pub fn with_base(&self, facet: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.columns[i].base == facet).collect()
    }

    /// Whether `-v_i` is a column, cross-checked against the facet pattern
    /// `(-1, +1, 0, ..., 0)` of the heights.
    pub fn is_invertible(&self, i: usize) -> Result<bool> {
        let by_table = self.index.contains_key(&scalar::neg(&self.columns[i].v));
        let hs = &self.heights[i];
        let minus = hs.iter().filter(|h| **h == -T::one()).count();
        let plus = hs.iter().filter(|h| h.is_one()).count();
        let zero = hs.iter().filter(|h| h.is_zero()).count();
        let by_pattern = minus == 1 && plus == 1 && zero + 2 == hs.len();
        if by_table != by_pattern {
            return Err(Error::Internal(format!(
                "invertibility tests disagree on {}",
                scalar::fmt_vec(&self.columns[i].v)
            )));
        }
        Ok(by_table)
    }

    /// `<base(u), v> <= 1` for all columns `u, v`.
    pub fn is_balanced(&self) -> bool {
        let bases = self.base_facets();
        self.heights
            .iter()
            .all(|hs| bases.iter().all(|&f| hs[f] <= T::one()))
    }

    /// `|<base(u), v>| <= 1` for all columns `u, v`.
    pub fn is_balanced_abs(&self) -> bool {
        let bases = self.base_facets();
        self.heights
            .iter()
            .all(|hs| bases.iter().all(|&f| hs[f].abs() <= T::one()))
    }

    pub fn cb_matrix(&self) -> Result<CbMatrix<T>> {
        if self.is_empty() {
            return Err(Error::NoColumns);
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.columns[a].v.cmp(&self.columns[b].v));
        let facets: Vec<usize> = self.base_facets().into_iter().collect();
        Ok(CbMatrix {
            rows: order.iter().map(|&i| self.columns[i].v.clone()).collect(),
            facets: facets.clone(),
            entries: order
                .iter()
                .map(|&i| facets.iter().map(|&f| self.heights[i][f].clone()).collect())
                .collect(),
        })
    }
}

/// Product of two column vectors by the height criterion.
pub fn product<T: Scalar>(
    p: &Polytope<T>,
    u: &ColumnVector<T>,
    v: &ColumnVector<T>,
) -> Option<ColumnVector<T>> {
    let s = scalar::add(&u.v, &v.v);
    if scalar::is_zero_vec(&s) || !p.facets()[v.base].pairing(&u.v).is_positive() {
        return None;
    }
    let base = base_facet(p, &s)?;
    debug_assert_eq!(base, u.base);
    Some(ColumnVector { v: s, base })
}

/// Heights of columns against base facets, rows in lexicographic order of
/// the columns and facets by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbMatrix<T> {
    pub rows: Vec<Vec<T>>,
    pub facets: Vec<usize>,
    pub entries: Vec<Vec<T>>,
}

/// Check the product criteria on every pair (and triple, for
/// associativity) of columns. Returns a description of each violation.
pub fn check_product_criteria<T: Scalar>(p: &Polytope<T>, t: &ColumnTable<T>) -> Vec<String> {
    let mut bad = Vec::new();
    let n = t.len();
    let exists = |i: usize, j: usize| t.product(i, j).is_some();
    for i in 0..n {
        let u = &t.columns[i];
        for j in 0..n {
            let v = &t.columns[j];
            let s = scalar::add(&u.v, &v.v);
            // (a): criterion, sum in Col with the base of u, and the
            // displacement definition all agree.
            let by_sum = base_facet(p, &s) == Some(u.base) && !scalar::is_zero_vec(&s);
            let by_def = product_by_definition(p, u, v);
            if exists(i, j) != by_sum || exists(i, j) != by_def {
                bad.push(format!("(a) fails for {} {}", fmt(&u.v), fmt(&v.v)));
            }
            if exists(i, j) && !t.heights[i][v.base].is_positive() {
                bad.push(format!("(a) parallel part fails for {} {}", fmt(&u.v), fmt(&v.v)));
            }
            if exists(i, j) && !t.heights[j][u.base].is_zero() {
                bad.push(format!("(a) v not parallel to base(u) for {} {}", fmt(&u.v), fmt(&v.v)));
            }
            // (b)
            let in_col = t.index_of(&s).is_some();
            if in_col != (exists(i, j) ^ exists(j, i)) {
                bad.push(format!("(b) fails for {} {}", fmt(&u.v), fmt(&v.v)));
            }
            // (c)
            let h = t.heights[i][v.base].clone();
            if h.is_positive() && !scalar::is_zero_vec(&s) {
                let hmax = h.to_i64().unwrap_or(i64::MAX);
                for k in 1..=hmax.saturating_add(3) {
                    let w = scalar::add_scaled(&u.v, &T::int(k), &v.v);
                    let col = base_facet(p, &w).is_some();
                    if col != (k <= hmax) {
                        bad.push(format!("(c) fails for {} + {k} {}", fmt(&u.v), fmt(&v.v)));
                    }
                }
            }
            // (e)
            if let Some(k) = t.product(i, j) {
                let w = &t.columns[k].v;
                if t.index_of(&scalar::neg(w)).is_some()
                    && (t.index_of(&scalar::neg(&u.v)).is_none()
                        || t.index_of(&scalar::neg(&v.v)).is_none())
                {
                    bad.push(format!("(e) fails for {} {}", fmt(&u.v), fmt(&v.v)));
                }
            }
            // Associativity.
            for l in 0..n {
                let (Some(uv), Some(vw)) = (t.product(i, j), t.product(j, l)) else {
                    continue;
                };
                let total = scalar::add(&s, &t.columns[l].v);
                if scalar::is_zero_vec(&total) {
                    continue;
                }
                match (t.product(uv, l), t.product(i, vw)) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => bad.push(format!(
                        "associativity fails for {} {} {}",
                        fmt(&u.v),
                        fmt(&v.v),
                        fmt(&t.columns[l].v)
                    )),
                }
            }
        }
        // (d)
        match t.is_invertible(i) {
            Ok(_) => {}
            Err(e) => bad.push(format!("(d) {e}")),
        }
    }
    bad
}

/// The product by its definition: `u + v != 0` and no lattice point off
/// `base(u)` is moved by `u` onto `base(v)`.
pub fn product_by_definition<T: Scalar>(
    p: &Polytope<T>,
    u: &ColumnVector<T>,
    v: &ColumnVector<T>,
) -> bool {
    if scalar::is_zero_vec(&scalar::add(&u.v, &v.v)) {
        return false;
    }
    let fu = &p.facets()[u.base];
    let fv = &p.facets()[v.base];
    p.lattice_points()
        .iter()
        .filter(|x| !fu.height(x).is_zero())
        .all(|x| !fv.height(&scalar::add(x, &u.v)).is_zero())
}

fn fmt<T: Scalar>(v: &[T]) -> String {
    scalar::fmt_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn poly(vs: &[&[i64]]) -> Polytope<BigInt> {
        Polytope::from_vertices(&vs.iter().map(|v| scalar::vec_from(v)).collect::<Vec<_>>())
            .unwrap()
    }

    fn vecs(vs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        vs.iter().map(|v| scalar::vec_from(v)).collect()
    }

    /// All nonzero differences of lattice points, tested with the
    /// displacement oracle.
    fn oracle_columns(p: &Polytope<BigInt>) -> Vec<(Vec<BigInt>, usize)> {
        let mut out = BTreeSet::new();
        for x in p.lattice_points() {
            for y in p.lattice_points() {
                let v = scalar::sub(y, x);
                if scalar::is_zero_vec(&v) {
                    continue;
                }
                if let Some(f) = is_column_geometric(p, &v).unwrap() {
                    out.insert((v, f));
                }
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn quadrangle_columns_and_product() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = column_vectors(&p);
        let got: Vec<_> = t.columns.iter().map(|c| c.v.clone()).collect();
        assert_eq!(got, vecs(&[&[0, -1], &[1, -1], &[1, 0]]));
        let oracle = oracle_columns(&p);
        let table: Vec<_> = t.columns.iter().map(|c| (c.v.clone(), c.base)).collect();
        assert_eq!(table, oracle);
        let (u, w, v) = (0, 1, 2);
        assert_eq!(t.products.len(), 1);
        assert_eq!(t.product(u, v), Some(w));
        assert_eq!(t.product(v, u), None);
        assert_eq!(t.columns[u].base, t.columns[w].base);
        assert!(t.is_balanced());
        for i in 0..3 {
            assert!(!t.is_invertible(i).unwrap());
        }
        assert!(check_product_criteria(&p, &t).is_empty());
        // Geometric oracle on single vectors.
        let bottom = p.facets().iter().find(|f| f.normal == scalar::vec_from(&[0, 1])).unwrap().id;
        assert_eq!(is_column_geometric(&p, &scalar::vec_from(&[1, -1])).unwrap(), Some(bottom));
        assert_eq!(is_column_geometric(&p, &scalar::vec_from(&[0, 1])).unwrap(), None);
        assert!(is_column_geometric(&p, &scalar::vec_from(&[0, 0])).is_err());
    }

    #[test]
    fn cb_matrix_rows_follow_heights() {
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = column_vectors(&p);
        let cb = t.cb_matrix().unwrap();
        assert_eq!(cb.rows, vecs(&[&[0, -1], &[1, -1], &[1, 0]]));
        // Oracle: evaluate the two base facet forms directly.
        let bottom = scalar::vec_from::<BigInt>(&[0, 1]);
        let slant = scalar::vec_from::<BigInt>(&[-1, -1]);
        let ids: Vec<Vec<BigInt>> = cb.facets.iter().map(|&f| p.facets()[f].normal.clone()).collect();
        let mut expected = vec![];
        for r in &cb.rows {
            expected.push(ids.iter().map(|n| scalar::dot(n, r)).collect::<Vec<_>>());
        }
        assert_eq!(cb.entries, expected);
        assert!(ids.contains(&bottom) && ids.contains(&slant));
        // Rows u, w, v against (bottom, slant).
        let col = |n: &Vec<BigInt>| ids.iter().position(|x| x == n).unwrap();
        let pick = |r: usize| -> Vec<i64> {
            vec![
                cb.entries[r][col(&bottom)].to_string().parse().unwrap(),
                cb.entries[r][col(&slant)].to_string().parse().unwrap(),
            ]
        };
        assert_eq!(pick(0), vec![-1, 1]);
        assert_eq!(pick(1), vec![-1, 0]);
        assert_eq!(pick(2), vec![0, -1]);
    }

    #[test]
    fn single_column_triangle() {
        let p = poly(&[&[0, 0], &[2, 0], &[1, 2]]);
        let t = column_vectors(&p);
        assert_eq!(t.len(), 1);
        assert_eq!(t.columns[0].v, scalar::vec_from(&[0, -1]));
    }

    #[test]
    fn pyramid_products() {
        let p = poly(&[&[0, 0, 0], &[0, 0, 1], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let t = column_vectors(&p);
        let i = |v: &[i64]| t.index_of(&scalar::vec_from(v)).unwrap();
        let (u, v, w) = (i(&[0, 0, -1]), i(&[1, 0, 0]), i(&[0, 1, 0]));
        let uv = t.product(u, v).unwrap();
        assert_eq!(t.columns[uv].v, scalar::vec_from(&[1, 0, -1]));
        let uvw = t.product(uv, w).unwrap();
        assert_eq!(t.columns[uvw].v, scalar::vec_from(&[1, 1, -1]));
        assert_eq!(t.product(v, w), None);
        assert!(check_product_criteria(&p, &t).is_empty());
        let table: Vec<_> = t.columns.iter().map(|c| (c.v.clone(), c.base)).collect();
        assert_eq!(table, oracle_columns(&p));
    }

    #[test]
    fn simplex_and_square() {
        let d2 = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let t = column_vectors(&d2);
        assert_eq!(t.len(), 6);
        assert_eq!(t.products.len(), 6);
        for i in 0..6 {
            assert!(t.is_invertible(i).unwrap());
        }
        let cb = t.cb_matrix().unwrap();
        assert_eq!(cb.facets.len(), 3);
        for row in &cb.entries {
            let mut r: Vec<BigInt> = row.clone();
            r.sort();
            assert_eq!(r, scalar::vec_from(&[-1, 0, 1]));
        }
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = column_vectors(&sq);
        assert_eq!(t.len(), 4);
        assert!(t.products.is_empty());
        assert!((0..4).all(|i| t.is_invertible(i).unwrap()));
    }

    #[test]
    fn shared_base_family() {
        for tt in 1..=3i64 {
            let p = poly(&[&[-1, 0], &[3 * tt, 0], &[2 * tt, 1], &[0, 2]]);
            let t = column_vectors(&p);
            let expected: Vec<Vec<BigInt>> = (0..=tt).map(|s| scalar::vec_from(&[s, -1])).collect();
            let got: Vec<_> = t.columns.iter().map(|c| c.v.clone()).collect();
            assert_eq!(got, expected);
            assert_eq!(t.base_facets().len(), 1);
            if tt == 1 {
                let cb = t.cb_matrix().unwrap();
                assert_eq!(cb.entries, vec![scalar::vec_from(&[-1]), scalar::vec_from(&[-1])]);
            }
        }
    }

    #[test]
    fn empty_table() {
        // A triangle whose only non-vertex lattice point is interior.
        let p = poly(&[&[0, 0], &[1, 2], &[2, 1]]);
        let t = column_vectors(&p);
        assert!(t.is_empty());
        assert_eq!(t.cb_matrix(), Err(Error::NoColumns));
        assert!(oracle_columns(&p).is_empty());
    }
}
