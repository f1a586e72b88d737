//! Exact integer linear algebra: Hermite normal form, integer kernels,
//! affine-lattice normalization and primitive support forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Build from explicit rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor for tests and literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs = rows.iter().map(|r| scalar::vec_from(r)).collect();
        Self::from_rows(rs, cols).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.rows).map(|i| scalar::dot(self.row(i), x)).collect()
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let h = hermite_normal_form(self);
        if h.rank < self.rows {
            return Ok(T::zero());
        }
        // det(U) = +-1 and det(H) is the product of its diagonal.
        let mut d = T::one();
        for i in 0..self.rows {
            d = d * h.h.get(i, i).clone();
        }
        Ok(d * h.transform.forward_determinant_sign.clone())
    }

    fn swap_combine(&mut self, p: usize, q: usize, e: &[T; 4]) {
        // rows (p, q) <- [[e0, e1], [e2, e3]] * rows (p, q)
        for j in 0..self.cols {
            let a = self.get(p, j).clone();
            let b = self.get(q, j).clone();
            self.set(p, j, e[0].clone() * a.clone() + e[1].clone() * b.clone());
            self.set(q, j, e[2].clone() * a + e[3].clone() * b);
        }
    }

    fn col_combine(&mut self, p: usize, q: usize, e: &[T; 4]) {
        // columns (p, q) <- columns (p, q) * [[e0, e1], [e2, e3]]
        for i in 0..self.rows {
            let a = self.get(i, p).clone();
            let b = self.get(i, q).clone();
            self.set(i, p, a.clone() * e[0].clone() + b.clone() * e[2].clone());
            self.set(i, q, a * e[1].clone() + b * e[3].clone());
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A square unimodular transform together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unimodular<T> {
    pub forward: IntMatrix<T>,
    pub inverse: IntMatrix<T>,
    forward_determinant_sign: T,
}

/// Row-style Hermite normal form `h = transform.forward * m`.
#[derive(Clone, Debug)]
pub struct Hermite<T> {
    pub h: IntMatrix<T>,
    pub transform: Unimodular<T>,
    pub rank: usize,
    /// Column of the leading entry of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Extended gcd with a canonical choice of coefficients:
/// returns `(g, x, y)` with `g >= 0` and `x*a + y*b = g`.
pub fn ext_gcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = r0 - q.clone() * r1.clone();
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = s0 - q.clone() * s1.clone();
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = t0 - q * t1.clone();
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row-style Hermite normal form.
///
/// Leading entries are positive, rows below a leading entry are zero in its
/// column, and entries above a leading entry are reduced into `[0, pivot)`.
pub fn hermite_normal_form<T: Scalar>(m: &IntMatrix<T>) -> Hermite<T> {
    let r = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut uinv = IntMatrix::identity(r);
    let mut sign = T::one();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..m.cols() {
        if prow == r {
            break;
        }
        for i in prow + 1..r {
            if h.get(i, col).is_zero() {
                continue;
            }
            let a = h.get(prow, col).clone();
            let b = h.get(i, col).clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let ag = a / g.clone();
            let bg = b / g;
            let e = [x.clone(), y.clone(), -bg.clone(), ag.clone()];
            let einv = [ag, -y, bg, x];
            h.swap_combine(prow, i, &e);
            u.swap_combine(prow, i, &e);
            uinv.col_combine(prow, i, &einv);
        }
        if h.get(prow, col).is_zero() {
            continue;
        }
        if h.get(prow, col).is_negative() {
            for j in 0..h.cols() {
                let v = -h.get(prow, j).clone();
                h.set(prow, j, v);
            }
            for j in 0..r {
                let v = -u.get(prow, j).clone();
                u.set(prow, j, v);
                let w = -uinv.get(j, prow).clone();
                uinv.set(j, prow, w);
            }
            sign = -sign;
        }
        let piv = h.get(prow, col).clone();
        for k in 0..prow {
            let q = h.get(k, col).div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            for j in 0..h.cols() {
                let v = h.get(k, j).clone() - q.clone() * h.get(prow, j).clone();
                h.set(k, j, v);
            }
            for j in 0..r {
                let v = u.get(k, j).clone() - q.clone() * u.get(prow, j).clone();
                u.set(k, j, v);
                let w = uinv.get(j, prow).clone() + q.clone() * uinv.get(j, k).clone();
                uinv.set(j, prow, w);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Hermite {
        h,
        transform: Unimodular {
            forward: u,
            inverse: uinv,
            forward_determinant_sign: sign,
        },
        rank: prow,
        pivots,
    }
}

/// A basis (as rows) of the integer kernel `{x in Z^cols : m x = 0}`.
pub fn integer_kernel<T: Scalar>(m: &IntMatrix<T>) -> IntMatrix<T> {
    // U * m^T = H; rows of U beyond the rank are a basis of the left kernel
    // of m^T, which is the right kernel of m.
    let hn = hermite_normal_form(&m.transpose());
    let n = m.cols();
    let rows: Vec<Vec<T>> = (hn.rank..n)
        .map(|i| hn.transform.forward.row(i).to_vec())
        .collect();
    let k = IntMatrix::from_rows(rows, n).expect("kernel rows");
    // Canonical basis of the same lattice.
    nonzero_rows(&hermite_normal_form(&k).h)
}

/// The rows of `m` that are not identically zero.
pub fn nonzero_rows<T: Scalar>(m: &IntMatrix<T>) -> IntMatrix<T> {
    let rows: Vec<Vec<T>> = m
        .to_rows()
        .into_iter()
        .filter(|r| !scalar::is_zero_vec(r))
        .collect();
    IntMatrix::from_rows(rows, m.cols()).expect("rectangular")
}

/// Rank of an integer matrix.
pub fn rank<T: Scalar>(m: &IntMatrix<T>) -> usize {
    hermite_normal_form(m).rank
}

/// Incremental rank of a growing set of integer vectors, by fraction-free
/// elimination. Cheap to stop as soon as a target rank is reached.
#[derive(Clone, Debug)]
pub struct RankAccumulator<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Default for RankAccumulator<T> {
    fn default() -> Self {
        RankAccumulator { rows: Vec::new() }
    }
}

impl<T: Scalar> RankAccumulator<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut w = v.to_vec();
        for (p, r) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let a = r[*p].clone();
            let b = w[*p].clone();
            w = w
                .iter()
                .zip(r)
                .map(|(x, y)| a.clone() * x.clone() - b.clone() * y.clone())
                .collect();
            let g = scalar::content(&w);
            if !g.is_zero() && !g.is_one() {
                w = w.into_iter().map(|x| x / g.clone()).collect();
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

/// Affine dimension of a nonempty point set.
pub fn affine_rank<T: Scalar>(points: &[Vec<T>]) -> usize {
    let mut acc = RankAccumulator::new();
    if let Some(first) = points.first() {
        for p in &points[1..] {
            acc.insert(&scalar::sub(p, first));
        }
    }
    acc.rank()
}

/// An affine identification of `Z^d` with an affine sublattice of `Z^n`:
/// `backward(y) = translation + sum_i y_i * basis_row_i`.
///
/// The basis rows are in Hermite normal form, so `forward` is an exact
/// triangular solve and fails on points outside the sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasisChange<T> {
    pub translation: Vec<T>,
    pub basis: IntMatrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> LatticeBasisChange<T> {
    pub fn identity(n: usize) -> Self {
        LatticeBasisChange {
            translation: vec![T::zero(); n],
            basis: IntMatrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Build from any generating set of the direction lattice.
    pub fn from_generators(translation: Vec<T>, generators: &IntMatrix<T>) -> Self {
        let hn = hermite_normal_form(generators);
        let basis = IntMatrix::from_rows(
            (0..hn.rank).map(|i| hn.h.row(i).to_vec()).collect(),
            generators.cols(),
        )
        .expect("rectangular");
        LatticeBasisChange {
            translation,
            basis,
            pivots: hn.pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.translation.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.ambient_dim();
        self.dim() == n
            && scalar::is_zero_vec(&self.translation)
            && self.basis == IntMatrix::identity(n)
    }

    /// Coordinates of an ambient point in the sublattice basis.
    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::Dimension(format!(
                "point of length {} in ambient dimension {}",
                x.len(),
                self.ambient_dim()
            )));
        }
        let mut rest = scalar::sub(x, &self.translation);
        let mut y = Vec::with_capacity(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            let piv = self.basis.get(i, p);
            let (q, r) = rest[p].div_rem(piv);
            if !r.is_zero() {
                return Err(Error::NotInLattice(scalar::fmt_vec(x)));
            }
            rest = scalar::add_scaled(&rest, &-q.clone(), self.basis.row(i));
            y.push(q);
        }
        if !scalar::is_zero_vec(&rest) {
            return Err(Error::NotInLattice(scalar::fmt_vec(x)));
        }
        Ok(y)
    }

    /// The ambient point with the given sublattice coordinates.
    pub fn backward(&self, y: &[T]) -> Vec<T> {
        let mut x = self.translation.clone();
        for (i, c) in y.iter().enumerate() {
            x = scalar::add_scaled(&x, c, self.basis.row(i));
        }
        x
    }

    /// Linear part of `backward` applied to a direction vector.
    pub fn backward_linear(&self, y: &[T]) -> Vec<T> {
        let mut x = vec![T::zero(); self.ambient_dim()];
        for (i, c) in y.iter().enumerate() {
            x = scalar::add_scaled(&x, c, self.basis.row(i));
        }
        x
    }

    /// Pull an ambient affine form `<a, x> >= b` back to sublattice
    /// coordinates, without making it primitive.
    pub fn pull_back_form(&self, a: &[T], b: &T) -> (Vec<T>, T) {
        let form: Vec<T> = (0..self.dim())
            .map(|i| scalar::dot(self.basis.row(i), a))
            .collect();
        (form, b.clone() - scalar::dot(a, &self.translation))
    }

    /// `self` followed by `inner` (which lives in the coordinates `self`
    /// produces): maps `Z^{inner.dim}` into the ambient space of `self`.
    pub fn compose(&self, inner: &LatticeBasisChange<T>) -> LatticeBasisChange<T> {
        let translation = self.backward(&inner.translation);
        let rows: Vec<Vec<T>> = (0..inner.dim())
            .map(|i| self.backward_linear(inner.basis.row(i)))
            .collect();
        let gens = IntMatrix::from_rows(rows, self.ambient_dim()).expect("rectangular");
        // Rows are independent, so HNF only re-bases; translation is kept.
        let hn = hermite_normal_form(&gens);
        let basis = IntMatrix::from_rows(
            (0..hn.rank).map(|i| hn.h.row(i).to_vec()).collect(),
            self.ambient_dim(),
        )
        .expect("rectangular");
        LatticeBasisChange {
            translation,
            basis,
            pivots: hn.pivots,
        }
    }
}

/// Identify the affine lattice generated by `points` with `Z^d`.
///
/// When the points already affinely generate `Z^n` the identity change is
/// returned; otherwise the first point becomes the origin.
pub fn normalize_affine_lattice<T: Scalar>(
    points: &[Vec<T>],
) -> Result<(LatticeBasisChange<T>, usize)> {
    let first = points
        .first()
        .ok_or_else(|| Error::Precondition("empty point set".into()))?;
    let n = first.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::Dimension("points of mixed length".into()));
    }
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| scalar::sub(p, first)).collect();
    let gens = IntMatrix::from_rows(diffs, n)?;
    let change = LatticeBasisChange::from_generators(first.clone(), &gens);
    let d = change.dim();
    if d == n && change.basis == IntMatrix::identity(n) {
        return Ok((LatticeBasisChange::identity(n), n));
    }
    Ok((change, d))
}

/// Primitive affine form vanishing on the given hyperplane points and
/// strictly positive at `inside`: returns `(a, b)` with `<a,k> = b` on the
/// hyperplane and `<a, inside> > b`.
pub fn primitive_form<T: Scalar>(
    hyperplane_points: &[Vec<T>],
    inside: &[T],
) -> Result<(Vec<T>, T)> {
    let first = hyperplane_points
        .first()
        .ok_or_else(|| Error::Precondition("no hyperplane points".into()))?;
    let n = first.len();
    let diffs: Vec<Vec<T>> = hyperplane_points[1..]
        .iter()
        .map(|p| scalar::sub(p, first))
        .collect();
    let m = IntMatrix::from_rows(diffs, n)?;
    let k = integer_kernel(&m);
    if k.rows() != 1 {
        return Err(Error::Precondition(format!(
            "points span a subspace of codimension {}, expected 1",
            k.rows()
        )));
    }
    let mut a = k.row(0).to_vec();
    let g = scalar::content(&a);
    a = a.into_iter().map(|x| x / g.clone()).collect();
    let mut b = scalar::dot(&a, first);
    let s = scalar::dot(&a, inside) - b.clone();
    if s.is_zero() {
        return Err(Error::Precondition(
            "inside point lies on the hyperplane".into(),
        ));
    }
    if s.is_negative() {
        a = scalar::neg(&a);
        b = -b;
    }
    Ok((a, b))
}

/// Deterministic `p` with `<a, p> = 1`, by extended Euclid folded over the
/// coordinates from left to right.
pub fn solve_unit_value<T: Scalar>(a: &[T]) -> Result<Vec<T>> {
    let n = a.len();
    // Invariant: <a[..=i], coef[..=i]> = g.
    let mut coef = vec![T::zero(); n];
    let mut g = T::zero();
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        if g.is_zero() {
            g = a[i].abs();
            coef[i] = a[i].signum();
            continue;
        }
        let (g2, x, y) = ext_gcd(&g, &a[i]);
        for c in coef.iter_mut().take(i) {
            *c = c.clone() * x.clone();
        }
        coef[i] = y;
        g = g2;
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive(scalar::fmt_vec(a)));
    }
    Ok(coef)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type M = IntMatrix<BigInt>;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        scalar::vec_from(xs)
    }

    #[test]
    fn hnf_of_identity_and_zero() {
        let id = M::identity(2);
        let h = hermite_normal_form(&id);
        assert_eq!(h.h, id);
        assert_eq!(h.transform.forward, id);
        let z = M::zeros(2, 3);
        let h = hermite_normal_form(&z);
        assert!(h.h.is_zero());
        assert_eq!(h.transform.forward, M::identity(2));
        assert_eq!(h.rank, 0);
    }

    /// Oracle: all upper triangular matrices with positive diagonal and
    /// reduced off-diagonal entries of determinant 2 are enumerated; the
    /// unique one with `H * M^-1` integral and unimodular is the HNF.
    #[test]
    fn hnf_two_by_two_matches_enumeration() {
        let m = IntMatrix::<i64>::from_i64(&[&[2, 4], &[1, 3]]);
        let mut found = Vec::new();
        for (d0, d1) in [(1i64, 2i64), (2, 1)] {
            for off in 0..d1 {
                // M^-1 = [[3, -4], [-1, 2]] / 2
                let h = [[d0, off], [0, d1]];
                let u = [
                    [h[0][0] * 3 - h[0][1], -4 * h[0][0] + 2 * h[0][1]],
                    [h[1][0] * 3 - h[1][1], -4 * h[1][0] + 2 * h[1][1]],
                ];
                if u.iter().flatten().all(|x| x % 2 == 0) {
                    let u = [[u[0][0] / 2, u[0][1] / 2], [u[1][0] / 2, u[1][1] / 2]];
                    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
                    if det.abs() == 1 {
                        found.push(h);
                    }
                }
            }
        }
        assert_eq!(found.len(), 1);
        let expected = IntMatrix::from_i64(&[&found[0][0], &found[0][1]]);
        let h = hermite_normal_form(&m);
        assert_eq!(h.h, expected);
        assert_eq!(expected, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(h.transform.forward.mul(&m).unwrap(), h.h);
        assert_eq!(m.determinant().unwrap(), 2);
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(ext_gcd(&2i64, &3i64), (1, -1, 1));
        assert_eq!(ext_gcd(&0i64, &-5i64), (5, 0, -1));
        assert_eq!(ext_gcd(&-4i64, &6i64), (2, 1, 1));
    }

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::<i64>::from_i64(&[&[1, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 2);
        for r in k.to_rows() {
            assert_eq!(scalar::dot(&r, &[1, 1, 1]), 0);
        }
    }

    #[test]
    fn normalize_even_sublattice() {
        // Oracle: the even sublattice is generated by (2,0),(0,2), so
        // coordinates are halves of the originals.
        let pts = vec![big(&[0, 0]), big(&[2, 0]), big(&[0, 2])];
        let (c, d) = normalize_affine_lattice(&pts).unwrap();
        assert_eq!(d, 2);
        let img: Vec<_> = pts.iter().map(|p| c.forward(p).unwrap()).collect();
        let expected: Vec<_> = pts
            .iter()
            .map(|p| p.iter().map(|x| x / BigInt::from(2)).collect::<Vec<_>>())
            .collect();
        assert_eq!(img, expected);
        assert!(c.forward(&big(&[1, 0])).is_err());
        // Re-normalizing the image is the identity.
        let (c2, d2) = normalize_affine_lattice(&img).unwrap();
        assert_eq!(d2, 2);
        assert!(c2.is_identity());
    }

    #[test]
    fn normalize_trivial_cases() {
        let pts = vec![big(&[0]), big(&[1]), big(&[2])];
        let (c, d) = normalize_affine_lattice(&pts).unwrap();
        assert_eq!(d, 1);
        assert!(c.is_identity());
        let (c, d) = normalize_affine_lattice(&[big(&[5, 7])]).unwrap();
        assert_eq!(d, 0);
        assert_eq!(c.forward(&big(&[5, 7])).unwrap(), Vec::<BigInt>::new());
        assert!(normalize_affine_lattice::<BigInt>(&[]).is_err());
    }

    #[test]
    fn normalize_line_in_plane() {
        let pts = vec![big(&[1, 1]), big(&[3, 5]), big(&[5, 9])];
        let (c, d) = normalize_affine_lattice(&pts).unwrap();
        assert_eq!(d, 1);
        let img: Vec<_> = pts.iter().map(|p| c.forward(p).unwrap()).collect();
        assert_eq!(img, vec![big(&[0]), big(&[1]), big(&[2])]);
        for (p, y) in pts.iter().zip(&img) {
            assert_eq!(&c.backward(y), p);
        }
    }

    #[test]
    fn primitive_form_examples() {
        // Oracle: solve <a,k> constant on the points, then sign-fix.
        let (a, b) = primitive_form(&[big(&[0, 0]), big(&[1, 1])], &big(&[1, 0])).unwrap();
        assert_eq!((a, b), (big(&[1, -1]), BigInt::from(0)));
        let (a, b) = primitive_form(&[big(&[0, 0]), big(&[1, 0])], &big(&[0, 3])).unwrap();
        assert_eq!((a, b), (big(&[0, 1]), BigInt::from(0)));
        let (a, b) = primitive_form(&[big(&[-2, 0]), big(&[0, 1])], &big(&[0, 0])).unwrap();
        assert_eq!((a.clone(), b.clone()), (big(&[1, -2]), BigInt::from(-2)));
        // Another interior point gives the same answer.
        let again = primitive_form(&[big(&[-2, 0]), big(&[0, 1])], &big(&[-1, 0])).unwrap();
        assert_eq!(again, (a, b));
        assert!(primitive_form(&[big(&[0, 0, 0]), big(&[1, 0, 0])], &big(&[0, 1, 0])).is_err());
    }

    #[test]
    fn solve_unit_value_examples() {
        assert_eq!(solve_unit_value(&big(&[1, 0])).unwrap(), big(&[1, 0]));
        assert_eq!(solve_unit_value(&big(&[-1, 0])).unwrap(), big(&[-1, 0]));
        assert_eq!(solve_unit_value(&big(&[0, 1])).unwrap(), big(&[0, 1]));
        // Oracle: extended Euclid on (2,3): 2*(-1) + 3*1 = 1.
        let p = solve_unit_value(&big(&[2, 3])).unwrap();
        assert_eq!(p, big(&[-1, 1]));
        assert!(solve_unit_value(&big(&[2, 4])).is_err());
        assert!(solve_unit_value(&big(&[0, 0])).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r)
        })
    }

    proptest! {
        #[test]
        fn hnf_is_idempotent_and_consistent(rows in small_matrix()) {
            let c = rows[0].len();
            let m = IntMatrix::<BigInt>::from_rows(
                rows.iter().map(|r| scalar::vec_from(r)).collect(), c).unwrap();
            let h = hermite_normal_form(&m);
            prop_assert_eq!(h.transform.forward.mul(&m).unwrap(), h.h.clone());
            prop_assert_eq!(
                h.transform.forward.mul(&h.transform.inverse).unwrap(),
                IntMatrix::identity(m.rows())
            );
            prop_assert_eq!(hermite_normal_form(&h.h).h, h.h.clone());
            let det = h.transform.forward.determinant().unwrap();
            prop_assert!(det == BigInt::from(1) || det == BigInt::from(-1));
        }

        #[test]
        fn kernel_is_annihilated(rows in small_matrix()) {
            let c = rows[0].len();
            let m = IntMatrix::<i64>::from_rows(rows.clone(), c).unwrap();
            let k = integer_kernel(&m);
            prop_assert_eq!(k.rows() + rank(&m), c);
            for kr in k.to_rows() {
                for r in &rows {
                    prop_assert_eq!(scalar::dot(r, &kr), 0);
                }
            }
        }

        #[test]
        fn unit_value_solves(a in proptest::collection::vec(-20i64..21, 1..5)) {
            let g = scalar::content(&a);
            match solve_unit_value(&a) {
                Ok(p) => { prop_assert_eq!(g, 1); prop_assert_eq!(scalar::dot(&a, &p), 1); }
                Err(_) => prop_assert_ne!(g, 1),
            }
        }

        #[test]
        fn renormalizing_is_identity(
            pts in proptest::collection::vec(proptest::collection::vec(-5i64..6, 3), 1..6)
        ) {
            let (c, d) = normalize_affine_lattice(&pts).unwrap();
            let img: Vec<Vec<i64>> = pts.iter().map(|p| c.forward(p).unwrap()).collect();
            for (p, y) in pts.iter().zip(&img) {
                prop_assert_eq!(&c.backward(y), p);
            }
            let (c2, d2) = normalize_affine_lattice(&img).unwrap();
            prop_assert_eq!(d2, d);
            prop_assert!(c2.is_identity());
        }
    }
}
