//! Doubling a lattice polytope along a facet, the lifted column tables,
//! doubling spectra, the reordering isomorphism between iterated doublings
//! and the facetize chain.
//!
//! Concrete model: for a facet `F` with form `a_F` pick a pivot `p` with
//! `<a_F, p> = 1`. The parent embeds as `x -> (x, 0)`, the rotated copy as
//! `x -> (x - ht_F(x) p, ht_F(x))`. The lattice points of the result are the
//! `(x - k p, k)` with `x` a lattice point of the parent and
//! `0 <= k <= ht_F(x)`. Its facets are the last coordinate (the parent
//! copy), `(a_F | 0)` (the rotated copy) and `(a_G | <a_G, p>)` for every
//! other facet `G`, all with their original offsets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use log::debug;
use serde::{Deserialize, Serialize};

use crate::columns::{self, ColumnTable, ColumnVector};
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix};
use crate::polytope::{AffineMap, Form, Polytope};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug)]
pub struct DoubledPolytope<T> {
    pub parent: Polytope<T>,
    pub facet_used: usize,
    pub result: Polytope<T>,
    /// Parent facet id (other than the doubled one) to result facet id.
    pub psi: BTreeMap<usize, usize>,
    /// Result facet containing the parent copy.
    pub minus_facet: usize,
    /// Result facet containing the rotated copy.
    pub bar_facet: usize,
    pub delta_plus: ColumnVector<T>,
    pub delta_minus: ColumnVector<T>,
    pub pivot: Vec<T>,
}

/// Double `p` along facet `f` with the canonical pivot.
pub fn double<T: Scalar>(p: &Polytope<T>, f: usize) -> Result<DoubledPolytope<T>> {
    let a = &p.facet(f)?.normal;
    let pivot = intlin::solve_unit_value(a)?;
    double_with_pivot(p, f, pivot)
}

/// Double `p` along facet `f` with a caller-chosen pivot.
pub fn double_with_pivot<T: Scalar>(
    p: &Polytope<T>,
    f: usize,
    pivot: Vec<T>,
) -> Result<DoubledPolytope<T>> {
    let facet = p.facet(f)?.clone();
    if p.dim() == 0 {
        return Err(Error::Precondition("cannot double a point".into()));
    }
    if pivot.len() != p.dim() || !facet.pairing(&pivot).is_one() {
        return Err(Error::Precondition(format!(
            "pivot {} does not have value 1 on the facet form",
            scalar::fmt_vec(&pivot)
        )));
    }
    let n = p.dim();
    let mut minus_form = vec![T::zero(); n + 1];
    minus_form[n] = T::one();
    let minus = (minus_form, T::zero());
    let bar = (scalar::extend(&facet.normal, T::zero()), facet.offset.clone());
    let mut forms: Vec<Form<T>> = vec![minus.clone(), bar.clone()];
    let mut psi_forms = Vec::new();
    for g in p.facets() {
        if g.id == f {
            continue;
        }
        let form = (
            scalar::extend(&g.normal, g.pairing(&pivot)),
            g.offset.clone(),
        );
        psi_forms.push((g.id, form.clone()));
        forms.push(form);
    }
    let mut lattice = Vec::new();
    for x in p.lattice_points() {
        let h = facet.height(x);
        let mut k = T::zero();
        while k <= h {
            lattice.push(scalar::extend(&scalar::add_scaled(x, &-k.clone(), &pivot), k.clone()));
            k = k + T::one();
        }
    }
    let embed = |x: &Vec<T>| -> Vec<Vec<T>> {
        let h = facet.height(x);
        vec![
            scalar::extend(x, T::zero()),
            scalar::extend(&scalar::add_scaled(x, &-h.clone(), &pivot), h),
        ]
    };
    let verts: BTreeSet<Vec<T>> = p.vertices().iter().flat_map(embed).collect();
    let result = Polytope::from_normalized_parts(n + 1, verts.into_iter().collect(), forms, lattice)?;
    let id_of = |form: &Form<T>| -> usize {
        result
            .facets()
            .iter()
            .find(|g| g.normal == form.0 && g.offset == form.1)
            .expect("form is a facet")
            .id
    };
    let minus_facet = id_of(&minus);
    let bar_facet = id_of(&bar);
    let psi: BTreeMap<usize, usize> = psi_forms.iter().map(|(g, form)| (*g, id_of(form))).collect();
    let delta_plus = ColumnVector {
        v: scalar::extend(&scalar::neg(&pivot), T::one()),
        base: bar_facet,
    };
    let delta_minus = ColumnVector {
        v: scalar::extend(&pivot, -T::one()),
        base: minus_facet,
    };
    let d = DoubledPolytope {
        parent: p.clone(),
        facet_used: f,
        result,
        psi,
        minus_facet,
        bar_facet,
        delta_plus,
        delta_minus,
        pivot,
    };
    let bad = d.check_equations();
    if !bad.is_empty() {
        return Err(Error::Internal(bad.join("; ")));
    }
    Ok(d)
}

impl<T: Scalar> DoubledPolytope<T> {
    /// `x -> (x, 0)`
    pub fn embed_minus(&self, x: &[T]) -> Vec<T> {
        scalar::extend(x, T::zero())
    }

    /// `x -> (x - ht_F(x) p, ht_F(x))`
    pub fn embed_bar(&self, x: &[T]) -> Vec<T> {
        let h = self.parent.facets()[self.facet_used].height(x);
        scalar::extend(&scalar::add_scaled(x, &-h.clone(), &self.pivot), h)
    }

    /// Linear part of the rotated embedding, for direction vectors.
    pub fn lift_bar(&self, v: &[T]) -> Vec<T> {
        let h = self.parent.facets()[self.facet_used].pairing(v);
        scalar::extend(&scalar::add_scaled(v, &-h.clone(), &self.pivot), h)
    }

    pub fn lift_minus(&self, v: &[T]) -> Vec<T> {
        scalar::extend(v, T::zero())
    }

    /// Violations of the facet-pairing equations of the construction:
    /// `<Psi(G), delta> = 0`, `<P^-, delta+> = <P^|, delta-> = 1`,
    /// `<G, z> = <Psi(G), (z,0)>` (with `Psi(F) = P^|`), and
    /// `delta- = -delta+`.
    pub fn check_equations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let r = &self.result;
        let n = self.parent.dim();
        let dp = &self.delta_plus.v;
        let dm = &self.delta_minus.v;
        for (&g, &h) in &self.psi {
            let f = &r.facets()[h];
            if !f.pairing(dp).is_zero() || !f.pairing(dm).is_zero() {
                bad.push(format!("delta not parallel to the image of facet {g}"));
            }
        }
        if !r.facets()[self.minus_facet].pairing(dp).is_one() {
            bad.push("<P^-, delta+> != 1".into());
        }
        if !r.facets()[self.bar_facet].pairing(dm).is_one() {
            bad.push("<P^|, delta-> != 1".into());
        }
        if scalar::neg(dp) != *dm {
            bad.push("delta- != -delta+".into());
        }
        for g in self.parent.facets() {
            let h = if g.id == self.facet_used {
                self.bar_facet
            } else {
                self.psi[&g.id]
            };
            let img = &r.facets()[h];
            for i in 0..n {
                let mut e = vec![T::zero(); n];
                e[i] = T::one();
                if g.pairing(&e) != img.pairing(&self.lift_minus(&e)) {
                    bad.push(format!("facet {} changes its pairing on the parent lattice", g.id));
                }
            }
            if g.offset != img.offset {
                bad.push(format!("facet {} changes its offset", g.id));
            }
        }
        if r.facets().len() != self.parent.facets().len() + 1 {
            bad.push("facet count is not parent count + 1".into());
        }
        if columns::base_facet(r, dp) != Some(self.bar_facet)
            || columns::base_facet(r, dm) != Some(self.minus_facet)
        {
            bad.push("delta vectors are not columns with the expected bases".into());
        }
        bad
    }
}

/// Where a column of a doubled polytope comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    /// `v^-` of parent column `i`.
    Minus(usize),
    /// `v^|` of parent column `i`.
    Bar(usize),
    /// Parent column `i` parallel to the doubled facet: `v^- = v^|`.
    Both(usize),
    DeltaPlus,
    DeltaMinus,
    /// Found geometrically, not predicted by the lifting rules.
    Extra,
}

/// The predicted column table of a doubled polytope.
#[derive(Clone, Debug)]
pub struct LiftedColumns<T> {
    pub table: ColumnTable<T>,
    pub provenance: Vec<Provenance>,
    /// True when the parent is balanced and no parent column has height
    /// above 1 over the doubled facet, so the table is all of `Col`.
    pub complete: bool,
    /// Result index of `v^-` for each parent column.
    pub minus_index: Vec<usize>,
    /// Result index of `v^|` for each parent column.
    pub bar_index: Vec<usize>,
    pub delta_plus_index: usize,
    pub delta_minus_index: usize,
    /// Products predicted by the lifting rules, as `(i, j, k)` with
    /// `v_i v_j = v_k`.
    pub rule_products: BTreeSet<(usize, usize, usize)>,
}

/// Whether the lifted columns are all of `Col` of the doubling along
/// `facet`: the parent is balanced and `<F, v> <= 1` for every column.
///
/// Balancedness alone bounds heights over base facets only. Along a facet
/// that is not a base facet a column of height 2 gives the extra column
/// `v^| delta^-`, as for the top edge of the quadrangle with `uv = w`.
pub fn lifting_is_complete<T: Scalar>(parent: &ColumnTable<T>, facet: usize) -> bool {
    parent.is_balanced() && (0..parent.len()).all(|i| *parent.height(i, facet) <= T::one())
}

/// Lift the columns of the parent (computed directly).
pub fn lift_columns<T: Scalar>(d: &DoubledPolytope<T>) -> Result<LiftedColumns<T>> {
    let parent_table = columns::column_vectors(&d.parent);
    lift_columns_from(d, &parent_table)
}

/// Lift a given column table of the parent.
pub fn lift_columns_from<T: Scalar>(
    d: &DoubledPolytope<T>,
    parent: &ColumnTable<T>,
) -> Result<LiftedColumns<T>> {
    let f = d.facet_used;
    let mut entries: Vec<(Vec<T>, Provenance)> = Vec::with_capacity(2 * parent.len() + 2);
    for (i, c) in parent.columns.iter().enumerate() {
        if parent.height(i, f).is_zero() {
            entries.push((d.lift_minus(&c.v), Provenance::Both(i)));
        } else {
            entries.push((d.lift_minus(&c.v), Provenance::Minus(i)));
            entries.push((d.lift_bar(&c.v), Provenance::Bar(i)));
        }
    }
    entries.push((d.delta_plus.v.clone(), Provenance::DeltaPlus));
    entries.push((d.delta_minus.v.clone(), Provenance::DeltaMinus));
    entries.sort();
    let complete = lifting_is_complete(parent, f);
    let (vectors, provenance): (Vec<Vec<T>>, Vec<Provenance>) = entries.into_iter().unzip();
    let table = if complete {
        ColumnTable::from_vectors(&d.result, vectors)?
    } else {
        ColumnTable::from_subset(&d.result, vectors)?
    };
    let mut minus_index = vec![usize::MAX; parent.len()];
    let mut bar_index = vec![usize::MAX; parent.len()];
    let mut delta_plus_index = usize::MAX;
    let mut delta_minus_index = usize::MAX;
    for (k, prov) in provenance.iter().enumerate() {
        match *prov {
            Provenance::Minus(i) => minus_index[i] = k,
            Provenance::Bar(i) => bar_index[i] = k,
            Provenance::Both(i) => {
                minus_index[i] = k;
                bar_index[i] = k;
            }
            Provenance::DeltaPlus => delta_plus_index = k,
            Provenance::DeltaMinus => delta_minus_index = k,
            Provenance::Extra => {}
        }
    }
    let mut rule_products = BTreeSet::new();
    for (&(a, b), &c) in &parent.products {
        rule_products.insert((minus_index[a], minus_index[b], minus_index[c]));
        rule_products.insert((bar_index[a], bar_index[b], bar_index[c]));
    }
    for (i, c) in parent.columns.iter().enumerate() {
        // Sliding along delta between the copies; not covered by the
        // base-facet rules below.
        if parent.height(i, f).is_one() {
            rule_products.insert((minus_index[i], delta_plus_index, bar_index[i]));
            rule_products.insert((bar_index[i], delta_minus_index, minus_index[i]));
        }
        if c.base != f {
            continue;
        }
        rule_products.insert((delta_plus_index, bar_index[i], minus_index[i]));
        rule_products.insert((delta_minus_index, minus_index[i], bar_index[i]));
        if let Some(j) = parent.index_of(&scalar::neg(&c.v)) {
            rule_products.insert((minus_index[i], bar_index[j], delta_plus_index));
            rule_products.insert((bar_index[i], minus_index[j], delta_minus_index));
        }
    }
    Ok(LiftedColumns {
        table,
        provenance,
        complete,
        minus_index,
        bar_index,
        delta_plus_index,
        delta_minus_index,
        rule_products,
    })
}

impl<T: Scalar> LiftedColumns<T> {
    /// The table's products as triples, for comparison with the rules.
    pub fn table_products(&self) -> BTreeSet<(usize, usize, usize)> {
        self.table
            .products
            .iter()
            .map(|(&(i, j), &k)| (i, j, k))
            .collect()
    }
}

/// One doubling step of a spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumStep<T> {
    /// Facet of the previous node that was doubled.
    pub facet: usize,
    pub pivot: Vec<T>,
    /// Global id of the column whose base facet was used.
    pub column: usize,
    pub minus_facet: usize,
    pub bar_facet: usize,
    /// Previous facet id to facet id in this node.
    pub psi: BTreeMap<usize, usize>,
    pub delta_plus: usize,
    pub delta_minus: usize,
}

#[derive(Clone, Debug)]
pub struct SpectrumNode<T> {
    pub index: usize,
    pub polytope: Polytope<T>,
    pub step: Option<SpectrumStep<T>>,
    pub columns: ColumnTable<T>,
    pub provenance: Vec<Provenance>,
    /// Global id of each column of `columns`.
    pub column_ids: Vec<usize>,
}

impl<T: Scalar> SpectrumNode<T> {
    pub fn column_by_id(&self, id: usize) -> Option<usize> {
        self.column_ids.iter().position(|&g| g == id)
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    pub nodes: Vec<SpectrumNode<T>>,
    /// For each global column id, the steps at which it was decomposed
    /// (its base facet was the doubled facet).
    pub ledger: BTreeMap<usize, Vec<usize>>,
    /// For each global column id, the node where it first appears.
    pub first_seen: Vec<usize>,
}

/// Doubling spectrum of a balanced polytope: `depth` doublings, each along
/// the base facet of the column at the front of a FIFO queue. The popped
/// column is re-queued at the back and new columns are appended in table
/// order.
pub fn spectrum<T: Scalar>(p: &Polytope<T>, depth: usize) -> Result<Spectrum<T>> {
    let table = columns::column_vectors(p);
    if table.is_empty() {
        return Err(Error::NoColumns);
    }
    if !table.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let n0 = table.len();
    let mut nodes = vec![SpectrumNode {
        index: 0,
        polytope: p.clone(),
        step: None,
        provenance: vec![Provenance::Extra; n0],
        column_ids: (0..n0).collect(),
        columns: table,
    }];
    let mut first_seen = vec![0; n0];
    let mut ledger: BTreeMap<usize, Vec<usize>> = (0..n0).map(|g| (g, vec![])).collect();
    let mut queue: VecDeque<usize> = (0..n0).collect();
    for step in 1..=depth {
        let prev = nodes.last().expect("nonempty");
        let g = queue.pop_front().expect("queue never empties");
        let ci = prev.column_by_id(g).expect("queued column present");
        let facet = prev.columns.get(ci).base;
        let d = double(&prev.polytope, facet)?;
        let lifted = lift_columns_from(&d, &prev.columns)?;
        if !lifted.complete {
            return Err(Error::Internal("balanced parent gave incomplete lift".into()));
        }
        if !lifted.table.is_balanced() {
            return Err(Error::Internal(format!("node {step} is not balanced")));
        }
        for (k, &gid) in prev.column_ids.iter().enumerate() {
            if prev.columns.get(k).base == facet {
                ledger.get_mut(&gid).expect("known id").push(step);
            }
        }
        let mut column_ids = vec![usize::MAX; lifted.table.len()];
        for (k, &gid) in prev.column_ids.iter().enumerate() {
            column_ids[lifted.minus_index[k]] = gid;
        }
        for id in column_ids.iter_mut() {
            if *id == usize::MAX {
                *id = first_seen.len();
                first_seen.push(step);
                ledger.insert(*id, vec![]);
                queue.push_back(*id);
            }
        }
        queue.push_back(g);
        debug!(
            "spectrum step {step}: doubled facet {facet}, dim {}, {} columns",
            d.result.dim(),
            lifted.table.len()
        );
        nodes.push(SpectrumNode {
            index: step,
            step: Some(SpectrumStep {
                facet,
                pivot: d.pivot.clone(),
                column: g,
                minus_facet: d.minus_facet,
                bar_facet: d.bar_facet,
                psi: d.psi.clone(),
                delta_plus: lifted.delta_plus_index,
                delta_minus: lifted.delta_minus_index,
            }),
            polytope: d.result,
            columns: lifted.table,
            provenance: lifted.provenance,
            column_ids,
        });
    }
    Ok(Spectrum {
        nodes,
        ledger,
        first_seen,
    })
}

/// Iterated doubling along a list of facets of `p`; later facets are
/// followed through the facet bijections.
#[derive(Clone, Debug)]
pub struct DoublingChain<T> {
    pub steps: Vec<DoubledPolytope<T>>,
}

impl<T: Scalar> DoublingChain<T> {
    pub fn new(p: &Polytope<T>, facets: &[usize]) -> Result<Self> {
        for &f in facets {
            p.facet(f)?;
        }
        let mut current: Vec<usize> = facets.to_vec();
        let mut steps: Vec<DoubledPolytope<T>> = Vec::new();
        let mut poly = p.clone();
        for i in 0..facets.len() {
            let d = double(&poly, current[i])?;
            for c in current.iter_mut().skip(i + 1) {
                *c = *d.psi.get(c).ok_or_else(|| {
                    Error::Precondition("a facet is listed twice".into())
                })?;
            }
            poly = d.result.clone();
            steps.push(d);
        }
        Ok(DoublingChain { steps })
    }

    pub fn end(&self) -> Option<&Polytope<T>> {
        self.steps.last().map(|d| &d.result)
    }
}

/// The lattice isomorphism between the doublings of `p` along `facets` and
/// along the permuted list `facets[sigma[0]], facets[sigma[1]], ...`.
#[derive(Clone, Debug)]
pub struct ReorderIso<T> {
    pub source: Polytope<T>,
    pub target: Polytope<T>,
    /// Lattice point of the source to its image, in source order.
    pub points: Vec<(Vec<T>, Vec<T>)>,
    pub map: AffineMap<T>,
    /// Source facet id to target facet id, preserving heights.
    pub facet_map: BTreeMap<usize, usize>,
}

pub fn reorder_iso<T: Scalar>(
    p: &Polytope<T>,
    facets: &[usize],
    sigma: &[usize],
) -> Result<ReorderIso<T>> {
    let m = facets.len();
    let mut seen = vec![false; m];
    for &s in sigma {
        if s >= m || std::mem::replace(&mut seen[s], true) {
            return Err(Error::Precondition("sigma is not a permutation".into()));
        }
    }
    if sigma.len() != m || m == 0 {
        return Err(Error::Precondition("sigma is not a permutation".into()));
    }
    let chain = DoublingChain::new(p, facets)?;
    let permuted: Vec<usize> = sigma.iter().map(|&s| facets[s]).collect();
    let star = DoublingChain::new(p, &permuted)?;
    let source = chain.end().expect("m > 0").clone();
    let target = star.end().expect("m > 0").clone();
    let theta = |x: &Vec<T>| -> Result<Vec<T>> {
        // Descend: read the height over the parent copy, slide down along
        // delta-, drop the last coordinate.
        let mut y = x.clone();
        let mut h = vec![T::zero(); m];
        for i in (0..m).rev() {
            let d = &chain.steps[i];
            h[i] = d.result.facets()[d.minus_facet].height(&y);
            y = scalar::add_scaled(&y, &h[i], &d.delta_minus.v);
            let last = y.pop().expect("nonempty");
            if !last.is_zero() {
                return Err(Error::Internal("descent left the parent copy".into()));
            }
        }
        // Ascend along the permuted chain.
        for (i, d) in star.steps.iter().enumerate() {
            y = scalar::add_scaled(&d.lift_minus(&y), &h[sigma[i]], &d.delta_plus.v);
        }
        Ok(y)
    };
    let mut points = Vec::with_capacity(source.lattice_points().len());
    let mut images = BTreeSet::new();
    for x in source.lattice_points() {
        let y = theta(x)?;
        if !target.contains(&y) {
            return Err(Error::Internal(format!(
                "image {} lies outside the target",
                scalar::fmt_vec(&y)
            )));
        }
        images.insert(y.clone());
        points.push((x.clone(), y));
    }
    if images.len() != points.len() || images.len() != target.lattice_points().len() {
        return Err(Error::Internal("reordering map is not a bijection".into()));
    }
    let map = fit_affine(&points)?;
    let facet_map = match_heights(&source, &target, &points)?;
    Ok(ReorderIso {
        source,
        target,
        points,
        map,
        facet_map,
    })
}

/// The affine map through the given point pairs; fails unless it is
/// integral, unimodular and matches every pair.
pub fn fit_affine<T: Scalar>(pairs: &[(Vec<T>, Vec<T>)]) -> Result<AffineMap<T>> {
    let (x0, y0) = pairs.first().ok_or_else(|| Error::Precondition("no points".into()))?;
    let d = x0.len();
    let mut acc = intlin::RankAccumulator::new();
    let mut basis = Vec::new();
    for (x, y) in pairs.iter().skip(1) {
        if acc.insert(&scalar::sub(x, x0)) {
            basis.push((scalar::sub(x, x0), scalar::sub(y, y0)));
        }
    }
    if basis.len() != d {
        return Err(Error::Precondition("points are not full-dimensional".into()));
    }
    // Solve A * X = Y with X the matrix of basis columns: A = Y * X^-1,
    // computed exactly via the adjugate-free route of solving X^T A^T = Y^T.
    let xt = IntMatrix::from_rows(basis.iter().map(|(x, _)| x.clone()).collect(), d)?;
    let det = xt.determinant()?;
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let rhs: Vec<T> = basis.iter().map(|(_, y)| y[r].clone()).collect();
        rows.push(solve_integral(&xt, &rhs, &det)?);
    }
    let linear = IntMatrix::from_rows(rows, d)?;
    if !linear.determinant()?.abs().is_one() {
        return Err(Error::Internal("map is not unimodular".into()));
    }
    let translation = scalar::sub(y0, &linear.apply(x0));
    let map = AffineMap {
        linear,
        translation,
    };
    for (x, y) in pairs {
        if &map.apply(x) != y {
            return Err(Error::Internal("map is not affine".into()));
        }
    }
    Ok(map)
}

/// Solve `m z = rhs` for integral `z` by Cramer's rule.
fn solve_integral<T: Scalar>(m: &IntMatrix<T>, rhs: &[T], det: &T) -> Result<Vec<T>> {
    let d = m.cols();
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let mut mj = m.clone();
        for i in 0..d {
            mj.set(i, j, rhs[i].clone());
        }
        let (q, r) = mj.determinant()?.div_rem(det);
        if !r.is_zero() {
            return Err(Error::Internal("map is not integral".into()));
        }
        out.push(q);
    }
    Ok(out)
}

/// Facet bijection under which heights agree on all point pairs.
fn match_heights<T: Scalar>(
    source: &Polytope<T>,
    target: &Polytope<T>,
    pairs: &[(Vec<T>, Vec<T>)],
) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    let mut used = BTreeSet::new();
    for f in source.facets() {
        let g = target.facets().iter().find(|g| {
            !used.contains(&g.id) && pairs.iter().all(|(x, y)| f.height(x) == g.height(y))
        });
        match g {
            Some(g) => {
                used.insert(g.id);
                out.insert(f.id, g.id);
            }
            None => {
                return Err(Error::Internal(format!(
                    "no target facet matches the heights of facet {}",
                    f.id
                )))
            }
        }
    }
    Ok(out)
}

/// The unimodular map between two doublings of the same facet with
/// different pivots that fixes the parent copy.
pub fn pivot_change_map<T: Scalar>(
    a: &DoubledPolytope<T>,
    b: &DoubledPolytope<T>,
) -> Result<AffineMap<T>> {
    if a.parent != b.parent || a.facet_used != b.facet_used {
        return Err(Error::Precondition("doublings of different facets".into()));
    }
    let pairs: Vec<(Vec<T>, Vec<T>)> = a
        .parent
        .lattice_points()
        .iter()
        .flat_map(|x| {
            [
                (a.embed_minus(x), b.embed_minus(x)),
                (a.embed_bar(x), b.embed_bar(x)),
            ]
        })
        .collect();
    let map = fit_affine(&pairs)?;
    let img: BTreeSet<Vec<T>> = a.result.lattice_points().iter().map(|x| map.apply(x)).collect();
    let tgt: BTreeSet<Vec<T>> = b.result.lattice_points().iter().cloned().collect();
    if img != tgt {
        return Err(Error::Internal("pivot change does not match lattice points".into()));
    }
    Ok(map)
}

/// Result of [`facetize`].
#[derive(Clone, Debug)]
pub struct FacetizeChain<T> {
    /// `x_0 = x, x_1, ..., x_k`, each in its own polytope of the chain.
    pub points: Vec<Vec<T>>,
    pub polytopes: Vec<Polytope<T>>,
    /// Multiples of delta+ added at each step.
    pub heights: Vec<T>,
    /// For each requested column, its base facet id in the final polytope.
    pub final_bases: Vec<usize>,
}

impl<T: Scalar> FacetizeChain<T> {
    pub fn final_point(&self) -> &[T] {
        self.points.last().expect("nonempty")
    }

    pub fn final_polytope(&self) -> &Polytope<T> {
        self.polytopes.last().expect("nonempty")
    }
}

/// Move `x` onto the base facets of the given columns by doubling along
/// each base in turn and climbing `ht * delta+`.
pub fn facetize<T: Scalar>(
    p: &Polytope<T>,
    x: &[T],
    vs: &[ColumnVector<T>],
) -> Result<FacetizeChain<T>> {
    if !p.lattice_points().iter().any(|y| y.as_slice() == x) {
        return Err(Error::Precondition(format!(
            "{} is not a lattice point",
            scalar::fmt_vec(x)
        )));
    }
    let mut poly = p.clone();
    let mut point = x.to_vec();
    let mut points = vec![point.clone()];
    let mut polytopes = vec![poly.clone()];
    let mut heights = Vec::new();
    for (i, c) in vs.iter().enumerate() {
        let v = lift_zero(&c.v, poly.dim());
        let base = columns::base_facet(&poly, &v)
            .ok_or_else(|| Error::NotAColumn(scalar::fmt_vec(&c.v)))?;
        if i == 0 && base != c.base {
            return Err(Error::Precondition("stated base facet is wrong".into()));
        }
        let h = poly.facets()[base].height(&point);
        let d = double(&poly, base)?;
        point = scalar::add_scaled(&d.embed_minus(&point), &h, &d.delta_plus.v);
        if !d.result.contains(&point) {
            return Err(Error::Internal("facetize left the polytope".into()));
        }
        poly = d.result;
        points.push(point.clone());
        polytopes.push(poly.clone());
        heights.push(h);
    }
    let mut final_bases = Vec::new();
    for c in vs {
        let v = lift_zero(&c.v, poly.dim());
        final_bases.push(
            columns::base_facet(&poly, &v)
                .ok_or_else(|| Error::Internal("lifted vector is not a column".into()))?,
        );
    }
    Ok(FacetizeChain {
        points,
        polytopes,
        heights,
        final_bases,
    })
}

fn lift_zero<T: Scalar>(v: &[T], dim: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.resize(dim, T::zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn poly(vs: &[&[i64]]) -> Polytope<BigInt> {
        Polytope::from_vertices(&vs.iter().map(|v| scalar::vec_from(v)).collect::<Vec<_>>())
            .unwrap()
    }

    fn facet_with(p: &Polytope<BigInt>, normal: &[i64]) -> usize {
        let n: Vec<BigInt> = scalar::vec_from(normal);
        p.facets().iter().find(|f| f.normal == n).unwrap().id
    }

    #[test]
    fn segment_doubles_to_triangle() {
        let seg = poly(&[&[0], &[2]]);
        let d = double(&seg, facet_with(&seg, &[1])).unwrap();
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(d.result.vertices(), tri.vertices());
        assert_eq!(d.result.forms(), tri.forms());
        assert_eq!(d.delta_plus.v, scalar::vec_from(&[-1, 1]));
        assert_eq!(d.pivot, scalar::vec_from(&[1]));
        // The parent copy is the bottom edge, the rotated copy the left one.
        assert_eq!(d.result.facets()[d.minus_facet].normal, scalar::vec_from(&[0, 1]));
        assert_eq!(d.result.facets()[d.bar_facet].normal, scalar::vec_from(&[1, 0]));
        let l = lift_columns(&d).unwrap();
        assert!(l.complete);
        assert_eq!(l.table.len(), 6);
        assert_eq!(l.table, columns::column_vectors(&d.result));
        assert_eq!(l.rule_products, l.table_products());
    }

    #[test]
    fn decomposition_products() {
        let pc = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&pc);
        let v = t.index_of(&scalar::vec_from(&[1, 0])).unwrap();
        let d = double(&pc, t.get(v).base).unwrap();
        let l = lift_columns(&d).unwrap();
        assert!(l.complete);
        assert_eq!(
            l.table.product(l.delta_plus_index, l.bar_index[v]),
            Some(l.minus_index[v])
        );
        assert_eq!(
            l.table.product(l.delta_minus_index, l.minus_index[v]),
            Some(l.bar_index[v])
        );
        assert_eq!(l.rule_products, l.table_products());
        assert_eq!(l.table, columns::column_vectors(&d.result));
        // Columns parallel to the doubled facet are shared by both copies.
        for (i, _) in t.columns.iter().enumerate() {
            assert_eq!(
                l.minus_index[i] == l.bar_index[i],
                t.height(i, t.get(v).base).is_zero()
            );
        }
    }

    #[test]
    fn unbalanced_triangle_has_extra_column() {
        let tri = poly(&[&[-2, 0], &[0, 0], &[0, 1]]);
        let t = columns::column_vectors(&tri);
        assert!(!t.is_balanced());
        let v = t.index_of(&scalar::vec_from(&[1, 0])).unwrap();
        let d = double(&tri, t.get(v).base).unwrap();
        let l = lift_columns(&d).unwrap();
        assert!(!l.complete);
        let actual = columns::column_vectors(&d.result);
        let predicted: BTreeSet<_> = l.table.columns.iter().map(|c| c.v.clone()).collect();
        let extra: Vec<_> = actual
            .columns
            .iter()
            .filter(|c| !predicted.contains(&c.v))
            .collect();
        assert_eq!(extra.len(), 1);
        assert!(predicted.iter().all(|v| actual.index_of(v).is_some()));
    }

    #[test]
    fn pivot_independence() {
        let pc = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        for f in pc.facets() {
            let a = double(&pc, f.id).unwrap();
            // Another pivot: shift by a vector in the facet direction.
            let along = scalar::sub(pc.facet_points(f.id).unwrap()[1], pc.facet_points(f.id).unwrap()[0]);
            let g = scalar::content(&along);
            let along: Vec<BigInt> = along.into_iter().map(|x| x / g.clone()).collect();
            let other = scalar::add_scaled(&a.pivot, &BigInt::from(2), &along);
            let b = double_with_pivot(&pc, f.id, other).unwrap();
            let map = pivot_change_map(&a, &b).unwrap();
            for x in pc.lattice_points() {
                assert_eq!(map.apply(&a.embed_minus(x)), a.embed_minus(x));
            }
        }
        assert!(double_with_pivot(&pc, 0, scalar::vec_from(&[5, 5])).is_err());
    }

    #[test]
    fn spectrum_of_segment() {
        let seg = poly(&[&[0], &[2]]);
        let s = spectrum(&seg, 3).unwrap();
        let dims: Vec<usize> = s.nodes.iter().map(|n| n.polytope.dim()).collect();
        assert_eq!(dims, vec![1, 2, 3, 4]);
        for node in &s.nodes {
            assert_eq!(node.columns, columns::column_vectors(&node.polytope));
            assert!(node.columns.is_balanced());
        }
    }

    #[test]
    fn spectrum_rejects_bad_seeds() {
        let tri = poly(&[&[-2, 0], &[0, 0], &[0, 1]]);
        assert_eq!(spectrum(&tri, 1).unwrap_err(), Error::NotBalanced);
        let empty = poly(&[&[0, 0], &[1, 2], &[2, 1]]);
        assert_eq!(spectrum(&empty, 1).unwrap_err(), Error::NoColumns);
    }

    #[test]
    fn reorder_segment_endpoints() {
        let seg = poly(&[&[0], &[2]]);
        let iso = reorder_iso(&seg, &[0, 1], &[1, 0]).unwrap();
        assert_eq!(iso.points.len(), iso.source.lattice_points().len());
        let back = reorder_iso(&seg, &[1, 0], &[1, 0]).unwrap();
        for (x, y) in &iso.points {
            assert_eq!(&back.map.apply(y), x);
        }
        let id = reorder_iso(&seg, &[0], &[0]).unwrap();
        assert!(id.points.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn facetize_quadrangle() {
        let pc = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let t = columns::column_vectors(&pc);
        let u = t.get(t.index_of(&scalar::vec_from(&[0, -1])).unwrap()).clone();
        let v = t.get(t.index_of(&scalar::vec_from(&[1, 0])).unwrap()).clone();
        let x: Vec<BigInt> = scalar::vec_from(&[1, 2]);
        let c = facetize(&pc, &x, std::slice::from_ref(&u)).unwrap();
        assert_eq!(c.heights, vec![BigInt::from(2)]);
        assert_eq!(c.final_point(), &scalar::vec_from::<BigInt>(&[1, 0, 2])[..]);
        let fp = c.final_polytope();
        assert!(fp.facets()[c.final_bases[0]].height(c.final_point()).is_zero());
        let c = facetize(&pc, &x, &[u, v]).unwrap();
        let fp = c.final_polytope();
        for &b in &c.final_bases {
            assert!(fp.facets()[b].height(c.final_point()).is_zero());
        }
    }

    #[test]
    fn non_base_facet_gives_extra_column() {
        // Top edge x - y >= -1 of the quadrangle: w = (1,-1) has height 2.
        let p = poly(&[&[0, 0], &[3, 0], &[1, 2], &[0, 1]]);
        let top = facet_with(&p, &[1, -1]);
        let t = columns::column_vectors(&p);
        assert!(t.is_balanced());
        assert!(!lifting_is_complete(&t, top));
        let d = double(&p, top).unwrap();
        let l = lift_columns(&d).unwrap();
        assert!(!l.complete);
        let actual = columns::column_vectors(&d.result);
        assert_eq!(actual.len(), l.table.len() + 1);
        let w = t.index_of(&scalar::vec_from(&[1, -1])).unwrap();
        let extra = scalar::add(&d.lift_bar(&t.get(w).v), &d.delta_minus.v);
        assert!(l.table.index_of(&extra).is_none());
        assert!(actual.index_of(&extra).is_some());
    }
}
