//! Lattice polytopes: support forms, heights, lattice points, normal fans
//! and lattice symmetries.
//!
//! Every polytope is stored in normalized coordinates, in which its lattice
//! points affinely generate `Z^dim`. The [`LatticeBasisChange`] kept with it
//! maps normalized coordinates back to the caller's coordinates.

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix, LatticeBasisChange, RankAccumulator};
use crate::scalar::{self, Scalar};

/// A facet given by its primitive support form: `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet<T> {
    pub id: usize,
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> Facet<T> {
    /// `<normal, x> - offset`
    pub fn height(&self, x: &[T]) -> T {
        scalar::dot(&self.normal, x) - self.offset.clone()
    }

    /// Linear part of the height, for direction vectors.
    pub fn pairing(&self, v: &[T]) -> T {
        scalar::dot(&self.normal, v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope<T> {
    dim: usize,
    vertices: Vec<Vec<T>>,
    facets: Vec<Facet<T>>,
    lattice_points: Vec<Vec<T>>,
    normalization: LatticeBasisChange<T>,
}

/// One facet inequality before ids are assigned.
pub type Form<T> = (Vec<T>, T);

impl<T: Scalar> Polytope<T> {
    /// Convex hull of the given lattice points. Facets are computed exactly
    /// for intrinsic dimension at most 3.
    pub fn from_vertices(points: &[Vec<T>]) -> Result<Self> {
        Self::build(points, None)
    }

    /// Polytope with caller-supplied facet inequalities (in the caller's
    /// coordinates). Required above dimension 3; below it they are checked
    /// against the computed hull.
    pub fn with_facets(points: &[Vec<T>], facets: &[Form<T>]) -> Result<Self> {
        Self::build(points, Some(facets))
    }

    /// Full-dimensional polytope given only by inequalities in `Z^dim`.
    /// Vertices are found as intersections of `dim` facet hyperplanes and
    /// must be lattice points.
    pub fn from_inequalities(dim: usize, forms: &[Form<T>]) -> Result<Self> {
        if forms.iter().any(|(a, _)| a.len() != dim) {
            return Err(Error::Dimension("form of wrong length".into()));
        }
        let mut verts = BTreeSet::new();
        for subset in subsets(forms.len(), dim) {
            let rows: Vec<Vec<Ratio<num_bigint::BigInt>>> = subset
                .iter()
                .map(|&i| {
                    let (a, b) = &forms[i];
                    let mut r: Vec<_> = a.iter().map(|x| Ratio::from_integer(x.to_big())).collect();
                    r.push(Ratio::from_integer(b.to_big()));
                    r
                })
                .collect();
            let Some(sol) = solve_square_rational(rows) else {
                continue;
            };
            if sol.iter().any(|x| !x.is_integer()) {
                let inside = forms.iter().all(|(a, b)| {
                    let v: Ratio<num_bigint::BigInt> = a
                        .iter()
                        .zip(&sol)
                        .map(|(x, y)| Ratio::from_integer(x.to_big()) * y)
                        .sum();
                    v >= Ratio::from_integer(b.to_big())
                });
                if inside {
                    return Err(Error::Precondition(
                        "inequalities define a polytope with a non-lattice vertex".into(),
                    ));
                }
                continue;
            }
            let x: Vec<T> = sol
                .iter()
                .map(|r| T::from_big(&r.to_integer()).expect("vertex fits scalar"))
                .collect();
            if forms.iter().all(|(a, b)| scalar::dot(a, &x) >= *b) {
                verts.insert(x);
            }
        }
        if verts.is_empty() {
            return Err(Error::Precondition("inequalities define no bounded polytope".into()));
        }
        let verts: Vec<Vec<T>> = verts.into_iter().collect();
        if dim <= 3 {
            Self::from_vertices(&verts)
        } else {
            Self::with_facets(&verts, forms)
        }
    }

    fn build(input: &[Vec<T>], supplied: Option<&[Form<T>]>) -> Result<Self> {
        let first = input
            .first()
            .ok_or_else(|| Error::Precondition("empty vertex list".into()))?;
        let n = first.len();
        if input.iter().any(|p| p.len() != n) {
            return Err(Error::Dimension("vertices of mixed length".into()));
        }
        let unique: BTreeSet<Vec<T>> = input.iter().cloned().collect();
        if unique.len() < input.len() {
            warn!("dropping {} repeated vertices", input.len() - unique.len());
        }
        let points: Vec<Vec<T>> = unique.into_iter().collect();
        if let Some(forms) = supplied {
            if forms.iter().any(|(a, _)| a.len() != n) {
                return Err(Error::BadFacets("form of wrong length".into()));
            }
        }

        // Coordinates on the saturation of the affine span.
        let sat = saturated_span(&points);
        let d = sat.dim();
        if d == 0 {
            let (norm, _) = intlin::normalize_affine_lattice(&points)?;
            return Ok(Polytope {
                dim: 0,
                vertices: vec![vec![]],
                facets: vec![],
                lattice_points: vec![vec![]],
                normalization: norm,
            });
        }
        let local: Vec<Vec<T>> = points
            .iter()
            .map(|p| sat.forward(p))
            .collect::<Result<_>>()?;
        let local_forms: Vec<Form<T>> = match (d <= 3, supplied) {
            (true, _) => hull(&local)?,
            (false, Some(forms)) => forms
                .iter()
                .map(|(a, b)| sat.pull_back_form(a, b))
                .collect(),
            (false, None) => {
                return Err(Error::Precondition(format!(
                    "facets must be supplied for dimension {d} > 3"
                )))
            }
        };
        if local_forms.iter().any(|(a, _)| scalar::is_zero_vec(a)) {
            return Err(Error::BadFacets("a form is constant on the affine span".into()));
        }
        if let Some(p) = local
            .iter()
            .find(|p| local_forms.iter().any(|(a, b)| scalar::dot(a, p) < *b))
        {
            return Err(Error::BadFacets(format!(
                "vertex {} violates a supplied inequality",
                scalar::fmt_vec(&sat.backward(p))
            )));
        }
        let local_lattice = box_points(&local, &local_forms);
        let user_lattice: Vec<Vec<T>> = local_lattice.iter().map(|y| sat.backward(y)).collect();
        let (norm, d2) = intlin::normalize_affine_lattice(&user_lattice)?;
        if d2 != d {
            return Err(Error::Internal("lattice points lost dimension".into()));
        }
        let lattice: Vec<Vec<T>> = user_lattice
            .iter()
            .map(|x| norm.forward(x))
            .collect::<Result<_>>()?;
        let verts: Vec<Vec<T>> = points
            .iter()
            .map(|x| norm.forward(x))
            .collect::<Result<_>>()?;
        let forms: Vec<Form<T>> = if d <= 3 {
            hull(&verts)?
        } else {
            let mut out = Vec::new();
            for (a, b) in supplied.expect("checked above") {
                let (a2, b2) = norm.pull_back_form(a, b);
                let g = scalar::content(&a2);
                if !b2.is_multiple_of(&g) {
                    return Err(Error::BadFacets(format!(
                        "inequality {} >= {} is not tight on the polytope",
                        scalar::fmt_vec(a),
                        b
                    )));
                }
                out.push((a2.into_iter().map(|x| x / g.clone()).collect(), b2 / g));
            }
            out
        };
        if let (true, Some(given)) = (d <= 3, supplied) {
            let mut expected: Vec<Form<T>> = Vec::new();
            for (a, b) in given {
                let (a2, b2) = norm.pull_back_form(a, b);
                let g = scalar::content(&a2);
                if g.is_zero() || !b2.is_multiple_of(&g) {
                    return Err(Error::BadFacets(format!(
                        "inequality {} >= {} does not support a facet",
                        scalar::fmt_vec(a),
                        b
                    )));
                }
                expected.push((a2.into_iter().map(|x| x / g.clone()).collect(), b2 / g));
            }
            let e: BTreeSet<_> = expected.into_iter().collect();
            let h: BTreeSet<_> = forms.iter().cloned().collect();
            if e != h {
                return Err(Error::BadFacets(
                    "supplied inequalities differ from the convex hull".into(),
                ));
            }
        }
        let p = Self::assemble(d, verts, forms, lattice, norm)?;
        if d > 3 {
            // Every vertex of the inequality description must be supplied.
            let tight_vertices: BTreeSet<Vec<T>> = p
                .lattice_points
                .iter()
                .filter(|x| p.is_vertex(x))
                .cloned()
                .collect();
            let given: BTreeSet<Vec<T>> = p.vertices.iter().cloned().collect();
            if tight_vertices != given {
                return Err(Error::BadFacets(
                    "inequalities and vertices describe different polytopes".into(),
                ));
            }
        }
        Ok(p)
    }

    /// Assemble from normalized data; non-vertex points among `candidates`
    /// are dropped, forms are verified against `lattice`.
    fn assemble(
        dim: usize,
        candidates: Vec<Vec<T>>,
        forms: Vec<Form<T>>,
        mut lattice: Vec<Vec<T>>,
        normalization: LatticeBasisChange<T>,
    ) -> Result<Self> {
        let mut forms = forms;
        forms.sort();
        forms.dedup();
        let facets: Vec<Facet<T>> = forms
            .into_iter()
            .enumerate()
            .map(|(id, (normal, offset))| Facet { id, normal, offset })
            .collect();
        lattice.sort();
        lattice.dedup();
        let mut p = Polytope {
            dim,
            vertices: vec![],
            facets,
            lattice_points: lattice,
            normalization,
        };
        p.verify_facets()?;
        let mut verts: Vec<Vec<T>> = candidates.into_iter().filter(|x| p.is_vertex(x)).collect();
        verts.sort();
        verts.dedup();
        if verts.is_empty() {
            return Err(Error::Internal("no vertices".into()));
        }
        p.vertices = verts;
        Ok(p)
    }

    /// Build from analytically known normalized data (used by doubling).
    /// Facet forms are verified; the lattice points must generate `Z^dim`.
    pub fn from_normalized_parts(
        dim: usize,
        vertices: Vec<Vec<T>>,
        forms: Vec<Form<T>>,
        lattice_points: Vec<Vec<T>>,
    ) -> Result<Self> {
        let n = vertices.len();
        let p = Self::assemble(
            dim,
            vertices,
            forms,
            lattice_points,
            LatticeBasisChange::identity(dim),
        )?;
        if p.vertices.len() != n {
            return Err(Error::Internal("supplied vertex is not a vertex".into()));
        }
        if !generates_full_lattice(&p.lattice_points, dim) {
            return Err(Error::Internal(
                "lattice points do not generate the ambient lattice".into(),
            ));
        }
        Ok(p)
    }

    /// Check every facet invariant: primitive form, minimum over lattice
    /// points equal to the offset, tight set of affine dimension `dim - 1`.
    pub fn verify_facets(&self) -> Result<()> {
        for f in &self.facets {
            if f.normal.len() != self.dim {
                return Err(Error::BadFacets(format!("facet {} has wrong length", f.id)));
            }
            if !scalar::content(&f.normal).is_one() {
                return Err(Error::BadFacets(format!(
                    "form {} is not primitive",
                    scalar::fmt_vec(&f.normal)
                )));
            }
            let mut acc = RankAccumulator::new();
            let mut base: Option<&Vec<T>> = None;
            for x in &self.lattice_points {
                let h = f.height(x);
                if h.is_negative() {
                    return Err(Error::BadFacets(format!(
                        "lattice point {} below facet {}",
                        scalar::fmt_vec(x),
                        scalar::fmt_vec(&f.normal)
                    )));
                }
                if h.is_zero() {
                    match base {
                        None => base = Some(x),
                        Some(b) if acc.rank() + 1 < self.dim => {
                            acc.insert(&scalar::sub(x, b));
                        }
                        Some(_) => {}
                    }
                }
            }
            if base.is_none() || acc.rank() + 1 != self.dim {
                return Err(Error::BadFacets(format!(
                    "form {} >= {} is not tight on a facet",
                    scalar::fmt_vec(&f.normal),
                    f.offset
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn facet(&self, id: usize) -> Result<&Facet<T>> {
        self.facets.get(id).ok_or(Error::NoSuchFacet(id))
    }

    /// Lattice points in lexicographic order.
    pub fn lattice_points(&self) -> &[Vec<T>] {
        &self.lattice_points
    }

    pub fn normalization(&self) -> &LatticeBasisChange<T> {
        &self.normalization
    }

    /// `ht_F(x) = <a_F, x> - b_F`
    pub fn height(&self, facet: usize, x: &[T]) -> Result<T> {
        let f = self.facet(facet)?;
        if x.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point of length {} in dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(f.height(x))
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| !f.height(x).is_negative())
    }

    /// Lattice points on the given facet.
    pub fn facet_points(&self, facet: usize) -> Result<Vec<&Vec<T>>> {
        let f = self.facet(facet)?;
        Ok(self
            .lattice_points
            .iter()
            .filter(|x| f.height(x).is_zero())
            .collect())
    }

    /// Ids of facets containing `x`.
    pub fn tight_facets(&self, x: &[T]) -> Vec<usize> {
        self.facets
            .iter()
            .filter(|f| f.height(x).is_zero())
            .map(|f| f.id)
            .collect()
    }

    fn is_vertex(&self, x: &[T]) -> bool {
        if !self.contains(x) {
            return false;
        }
        let mut acc = RankAccumulator::new();
        for f in &self.facets {
            if f.height(x).is_zero() {
                acc.insert(&f.normal);
                if acc.rank() == self.dim {
                    return true;
                }
            }
        }
        acc.rank() == self.dim
    }

    /// Map a normalized point back to the caller's coordinates.
    pub fn to_user(&self, x: &[T]) -> Vec<T> {
        self.normalization.backward(x)
    }

    /// Normalized coordinates of a point given in the caller's coordinates.
    pub fn from_user(&self, x: &[T]) -> Result<Vec<T>> {
        self.normalization.forward(x)
    }

    /// Normalized coordinates of a direction vector in the caller's
    /// coordinates.
    pub fn direction_from_user(&self, v: &[T]) -> Result<Vec<T>> {
        let zero = vec![T::zero(); self.dim];
        let origin = self.normalization.backward(&zero);
        self.normalization.forward(&scalar::add(&origin, v))
    }

    /// The same polytope over another scalar type.
    pub fn convert<U: Scalar>(&self) -> Result<Polytope<U>> {
        let cv = |x: &T| -> Result<U> {
            U::from_big(&x.to_big()).ok_or_else(|| Error::Internal("scalar overflow".into()))
        };
        let cvec = |v: &Vec<T>| -> Result<Vec<U>> { v.iter().map(cv).collect() };
        let basis = IntMatrix::from_rows(
            self.normalization
                .basis
                .to_rows()
                .iter()
                .map(cvec)
                .collect::<Result<_>>()?,
            self.normalization.ambient_dim(),
        )?;
        Ok(Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(cvec).collect::<Result<_>>()?,
            facets: self
                .facets
                .iter()
                .map(|f| {
                    Ok(Facet {
                        id: f.id,
                        normal: cvec(&f.normal)?,
                        offset: cv(&f.offset)?,
                    })
                })
                .collect::<Result<_>>()?,
            lattice_points: self.lattice_points.iter().map(cvec).collect::<Result<_>>()?,
            normalization: LatticeBasisChange::from_generators(
                cvec(&self.normalization.translation)?,
                &basis,
            ),
        })
    }

    /// Facet inequalities as plain forms.
    pub fn forms(&self) -> Vec<Form<T>> {
        self.facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect()
    }

    pub fn normal_fan(&self) -> NormalFan<T> {
        let normals: Vec<Vec<T>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        let cones: Vec<BTreeSet<usize>> = self
            .vertices
            .iter()
            .map(|v| self.tight_facets(v).into_iter().collect())
            .collect();
        NormalFan {
            dim: self.dim,
            normals,
            cones,
        }
    }

    /// All affine unimodular maps of `Z^dim` mapping the polytope onto
    /// itself, found by sending an affine basis of vertices to every tuple
    /// of vertices and verifying.
    pub fn lattice_symmetries(&self) -> Vec<AffineMap<T>> {
        let d = self.dim;
        let basis = affine_basis(&self.vertices);
        if basis.len() != d + 1 {
            return vec![];
        }
        let b0 = &self.vertices[basis[0]];
        let diffs: Vec<Vec<T>> = basis[1..]
            .iter()
            .map(|&i| scalar::sub(&self.vertices[i], b0))
            .collect();
        let vertex_set: BTreeSet<&Vec<T>> = self.vertices.iter().collect();
        let mut out = BTreeSet::new();
        for_each_injection(self.vertices.len(), d + 1, &mut |tuple: &[usize]| {
            let c0 = &self.vertices[tuple[0]];
            let images: Vec<Vec<T>> = tuple[1..]
                .iter()
                .map(|&i| scalar::sub(&self.vertices[i], c0))
                .collect();
            let Some(linear) = integral_linear_map(&diffs, &images) else {
                return;
            };
            let det = linear.determinant().expect("square");
            if !det.abs().is_one() {
                return;
            }
            let translation = scalar::sub(c0, &linear.apply(b0));
            let map = AffineMap {
                linear,
                translation,
            };
            if self.vertices.iter().all(|v| vertex_set.contains(&map.apply(v))) {
                out.insert(map);
            }
        });
        out.into_iter().collect()
    }
}

/// An affine map `x -> linear * x + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap<T> {
    pub linear: IntMatrix<T>,
    pub translation: Vec<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        scalar::add(&self.linear.apply(x), &self.translation)
    }

    fn key(&self) -> (Vec<Vec<T>>, Vec<T>) {
        (self.linear.to_rows(), self.translation.clone())
    }
}

impl<T: Scalar> PartialOrd for AffineMap<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for AffineMap<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Per-vertex cones of the normal fan, each given as a set of indices into
/// the list of primitive facet normals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFan<T> {
    pub dim: usize,
    pub normals: Vec<Vec<T>>,
    pub cones: Vec<BTreeSet<usize>>,
}

impl<T: Scalar> NormalFan<T> {
    /// Cones as sets of normal vectors, independent of facet labels.
    fn cone_sets(&self) -> BTreeSet<BTreeSet<Vec<T>>> {
        self.cones
            .iter()
            .map(|c| c.iter().map(|&i| self.normals[i].clone()).collect())
            .collect()
    }

    /// The codimension-one cones (one per edge of the polytope), with the
    /// number of maximal cones containing each.
    pub fn ridges(&self) -> BTreeMap<BTreeSet<usize>, usize> {
        let mut out = BTreeMap::new();
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let s: BTreeSet<usize> = self.cones[i].intersection(&self.cones[j]).copied().collect();
                if out.contains_key(&s) || self.rank_of(&s) + 1 != self.dim {
                    continue;
                }
                let count = self.cones.iter().filter(|c| c.is_superset(&s)).count();
                out.insert(s, count);
            }
        }
        out
    }

    fn rank_of(&self, s: &BTreeSet<usize>) -> usize {
        let mut acc = RankAccumulator::new();
        for &i in s {
            acc.insert(&self.normals[i]);
        }
        acc.rank()
    }

    /// Combinatorial completeness: every normal lies in some cone, every
    /// maximal cone is full-dimensional and every ridge lies in exactly two
    /// maximal cones.
    pub fn is_complete(&self) -> bool {
        let used: BTreeSet<usize> = self.cones.iter().flatten().copied().collect();
        used.len() == self.normals.len()
            && self.cones.iter().all(|c| self.rank_of(c) == self.dim)
            && self.ridges().values().all(|&c| c == 2)
    }
}

/// Equality of normal fans: identical primitive normals and identical cones,
/// matching facets by their normals.
pub fn fans_equal<T: Scalar>(a: &NormalFan<T>, b: &NormalFan<T>) -> bool {
    if a.dim != b.dim || a.cones.len() != b.cones.len() {
        return false;
    }
    let na: BTreeSet<&Vec<T>> = a.normals.iter().collect();
    let nb: BTreeSet<&Vec<T>> = b.normals.iter().collect();
    na == nb && a.cone_sets() == b.cone_sets()
}

/// Coordinates on the saturation of the affine span of `points`.
fn saturated_span<T: Scalar>(points: &[Vec<T>]) -> LatticeBasisChange<T> {
    let first = &points[0];
    let n = first.len();
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| scalar::sub(p, first)).collect();
    let d = IntMatrix::from_rows(diffs, n).expect("rectangular");
    let k = intlin::integer_kernel(&d);
    if k.rows() == 0 {
        return LatticeBasisChange::from_generators(first.clone(), &IntMatrix::identity(n));
    }
    let s = intlin::integer_kernel(&k);
    LatticeBasisChange::from_generators(first.clone(), &s)
}

/// Facets of the convex hull of full-dimensional points in `Z^d`, `d <= 3`.
///
/// Every hyperplane through `d` affinely independent points is a candidate;
/// those with all points on one side are facets.
fn hull<T: Scalar>(points: &[Vec<T>]) -> Result<Vec<Form<T>>> {
    let d = points[0].len();
    let mut out = BTreeSet::new();
    match d {
        0 => {}
        1 => {
            let lo = points.iter().map(|p| p[0].clone()).min().expect("nonempty");
            let hi = points.iter().map(|p| p[0].clone()).max().expect("nonempty");
            out.insert((vec![T::one()], lo));
            out.insert((vec![-T::one()], -hi));
        }
        2 | 3 => {
            for subset in subsets(points.len(), d) {
                let base = &points[subset[0]];
                let diffs: Vec<Vec<T>> = subset[1..]
                    .iter()
                    .map(|&i| scalar::sub(&points[i], base))
                    .collect();
                let Some(normal) = orthogonal(&diffs) else {
                    continue;
                };
                let b = scalar::dot(&normal, base);
                let mut pos = false;
                let mut neg = false;
                for p in points {
                    let s = scalar::dot(&normal, p) - b.clone();
                    pos |= s.is_positive();
                    neg |= s.is_negative();
                    if pos && neg {
                        break;
                    }
                }
                match (pos, neg) {
                    (true, false) => {
                        out.insert((normal, b));
                    }
                    (false, true) => {
                        out.insert((scalar::neg(&normal), -b));
                    }
                    _ => {}
                }
            }
        }
        _ => {
            return Err(Error::Precondition(format!(
                "convex hull not available in dimension {d}"
            )))
        }
    }
    Ok(out.into_iter().collect())
}

/// Primitive normal to `d - 1` vectors in `Z^d` (`d` = 2 or 3), if they are
/// independent.
fn orthogonal<T: Scalar>(vs: &[Vec<T>]) -> Option<Vec<T>> {
    let n = match vs.len() {
        1 => vec![-vs[0][1].clone(), vs[0][0].clone()],
        2 => {
            let (a, b) = (&vs[0], &vs[1]);
            vec![
                a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
                a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
                a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
            ]
        }
        _ => return None,
    };
    let g = scalar::content(&n);
    if g.is_zero() {
        None
    } else {
        Some(n.into_iter().map(|x| x / g.clone()).collect())
    }
}

/// Lattice points of `{x : <a,x> >= b}` inside the bounding box of `verts`.
fn box_points<T: Scalar>(verts: &[Vec<T>], forms: &[Form<T>]) -> Vec<Vec<T>> {
    let d = verts[0].len();
    let lo: Vec<T> = (0..d)
        .map(|i| verts.iter().map(|v| v[i].clone()).min().expect("nonempty"))
        .collect();
    let hi: Vec<T> = (0..d)
        .map(|i| verts.iter().map(|v| v[i].clone()).max().expect("nonempty"))
        .collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if forms.iter().all(|(a, b)| scalar::dot(a, &x) >= *b) {
            out.push(x.clone());
        }
        // Odometer increment, last coordinate fastest.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] = x[i].clone() + T::one();
                break;
            }
            x[i] = lo[i].clone();
        }
    }
}

/// Whether the differences of `points` generate `Z^dim`.
pub(crate) fn generates_full_lattice<T: Scalar>(points: &[Vec<T>], dim: usize) -> bool {
    let Some(first) = points.first() else {
        return false;
    };
    if dim == 0 {
        return true;
    }
    let id = IntMatrix::identity(dim);
    let mut basis: Vec<Vec<T>> = Vec::new();
    for p in &points[1..] {
        let v = scalar::sub(p, first);
        if scalar::is_zero_vec(&v) {
            continue;
        }
        basis.push(v);
        let m = IntMatrix::from_rows(basis.clone(), dim).expect("rectangular");
        let h = intlin::hermite_normal_form(&m);
        basis = (0..h.rank).map(|i| h.h.row(i).to_vec()).collect();
        if h.rank == dim && IntMatrix::from_rows(basis.clone(), dim).expect("square") == id {
            return true;
        }
    }
    false
}

/// Indices of a greedy affinely independent subset of maximal size.
fn affine_basis<T: Scalar>(points: &[Vec<T>]) -> Vec<usize> {
    let mut out = vec![0];
    let mut acc = RankAccumulator::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if acc.insert(&scalar::sub(p, &points[0])) {
            out.push(i);
        }
    }
    out
}

/// The integer matrix `A` with `A * from[i] = to[i]` for a basis `from`,
/// if it exists.
fn integral_linear_map<T: Scalar>(from: &[Vec<T>], to: &[Vec<T>]) -> Option<IntMatrix<T>> {
    let d = from.len();
    // Row r of A solves from^T * row = (to[i][r])_i.
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let system: Vec<Vec<Ratio<num_bigint::BigInt>>> = (0..d)
            .map(|i| {
                let mut row: Vec<_> = from[i].iter().map(|x| Ratio::from_integer(x.to_big())).collect();
                row.push(Ratio::from_integer(to[i][r].to_big()));
                row
            })
            .collect();
        let sol = solve_square_rational(system)?;
        let mut out = Vec::with_capacity(d);
        for x in sol {
            if !x.is_integer() {
                return None;
            }
            out.push(T::from_big(&x.to_integer())?);
        }
        rows.push(out);
    }
    IntMatrix::from_rows(rows, d).ok()
}

/// Solve a square system given as augmented rows; `None` if singular.
fn solve_square_rational(
    mut rows: Vec<Vec<Ratio<num_bigint::BigInt>>>,
) -> Option<Vec<Ratio<num_bigint::BigInt>>> {
    use num_traits::Zero;
    let n = rows.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        let piv = rows[c][c].clone();
        for x in rows[c].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        for r in 0..n {
            if r != c && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                let pivot_row = rows[c].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[n].clone()).collect())
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Visit every injective `k`-tuple of `0..n`.
fn for_each_injection(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, k, cur, used, f);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut used = vec![false; n];
    rec(n, k, &mut Vec::new(), &mut used, f);
}
